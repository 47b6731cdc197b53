// SPDX-License-Identifier: Apache-2.0
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include "otfsjrc/channel.hpp"
#include "otfsjrc/vitals.hpp"

#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace otfsjrc {

enum class Label { Human, NonHuman };

const char* to_string(Label label) noexcept;
Label label_from_string(const std::string& s);

struct ClassifierParams {
    BandSpec br_band = BandSpec::breathing();
    double periodicity_threshold = 0.25; // xi
    std::size_t min_trace_len = 32;

    void validate() const;
};

struct Verdict {
    Label label = Label::NonHuman;
    double score = 0.0;
};

/*
 * Breathing-band periodicity score of a phase trace:
 *
 *   score = P(peak bin +-1 of the breathing-band spectrum) / P(whole trace)
 *
 * both measured on the mean-removed trace, so the score ignores constant
 * offsets and real scaling. A chest wall moving at the breathing rate puts
 * most of the trace's power into one narrow in-band line; noise, drifts and
 * aliased motion tones spread it or keep it out of band.
 */
double periodicity_score(const PhaseTrace& trace, const BandSpec& br_band);

Verdict classify_sp(const PhaseTrace& trace, const ClassifierParams& params);

struct LabeledTrace {
    PhaseTrace trace;
    Label label = Label::NonHuman;
    std::string scenario;
};

struct ConfusionCounts {
    std::size_t tp = 0; // human -> human
    std::size_t fp = 0; // non-human -> human
    std::size_t tn = 0; // non-human -> non-human
    std::size_t fn = 0; // human -> non-human

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    double recall() const noexcept { return tp + fn == 0 ? 0.0 : static_cast<double>(tp) / static_cast<double>(tp + fn); }
    double specificity() const noexcept
    {
        return tn + fp == 0 ? 0.0 : static_cast<double>(tn) / static_cast<double>(tn + fp);
    }
    bool operator==(const ConfusionCounts&) const = default;
};

ConfusionCounts evaluate(std::span<const LabeledTrace> dataset, const ClassifierParams& params);

/// How synthetic traces are produced. Every trace is a full per-dwell
/// simulation: fresh QPSK frame, delay-Doppler channel, FAOR map, peak phase.
struct DatasetRecipe {
    FrameConfig frame;
    std::size_t trace_len = 256;
    DetectorParams detector;
    double snr_min_db = 0.0;
    double snr_max_db = 20.0;
    // Non-human mix; the jitter share is whatever remains.
    double static_share = 0.4;
    double robot_share = 0.4;
    // Robot radial speeds are drawn from +-[min, max] m/s, rejecting those
    // whose dwell-sampled phase ramp aliases below this frequency.
    double robot_speed_min_mps = 0.1;
    double robot_speed_max_mps = 1.0;
    double robot_min_alias_hz = 0.8;
    double jitter_step_rad = 0.1; // random-walk step std
    bool force_noiseless = false;

    void validate(double dwell_interval_s) const;
};

/// n_human vitalized traces followed by n_nonhuman traces. The template's
/// dwell interval, base gain (first non-leakage target) and any
/// self-interference target carry over; everything else is randomized.
std::vector<LabeledTrace> generate_dataset(std::size_t n_human, std::size_t n_nonhuman,
                                           const ChannelConfig& cfg_template, std::uint64_t seed,
                                           const DatasetRecipe& recipe = {});

/// One trace of the dataset, for targeted regeneration in tests.
LabeledTrace generate_trace(std::size_t index, std::size_t n_human, std::size_t n_nonhuman,
                            const ChannelConfig& cfg_template, std::uint64_t seed, const DatasetRecipe& recipe);

} // namespace otfsjrc
