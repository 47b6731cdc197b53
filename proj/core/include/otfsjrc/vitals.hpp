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

#include "otfsjrc/faor.hpp"

#include <optional>
#include <span>
#include <vector>

namespace otfsjrc {

inline constexpr std::size_t kMinTraceLength = 8;

/// Unwrapped, mean-removed phase of the tracked RDM cell, one sample per dwell.
struct PhaseTrace {
    std::vector<double> phases_rad;
    double dwell_interval_s = 0.06;
    BinIndex peak_bin{};
    std::vector<cplx> complex_peaks;

    std::size_t size() const noexcept { return phases_rad.size(); }
    void validate() const;
};

struct BandSpec {
    double low_hz = 0.1;
    double high_hz = 0.7;

    static BandSpec breathing() { return {0.1, 0.7}; }
    static BandSpec heartbeat() { return {0.8, 2.5}; }

    /// 0 < low < high < 1/(2 dwell).
    void validate(double dwell_interval_s) const;
    bool contains(double f_hz) const noexcept { return f_hz >= low_hz && f_hz <= high_hz; }
};

struct VitalEstimate {
    double f_br_hz = 0.0;
    double f_hb_hz = 0.0;
    std::size_t br_peak_index = 0;
    std::size_t hb_peak_index = 0;
    double br_confidence = 0.0; // peak power / in-band power
    double hb_confidence = 0.0;
    std::size_t fft_size = 0;
    double dwell_interval_s = 0.0;
};

struct TrackOptions {
    std::optional<BinIndex> track_bin; // default: argmax of the first map
    bool gate = false;                 // re-center within +-1 bin each dwell
};

/// Sequential unwrap: removes 2 pi jumps between consecutive samples.
std::vector<double> unwrap_phase(std::span<const double> wrapped);

/// Builds a trace from per-dwell complex peaks: unwrap, then remove the mean.
PhaseTrace trace_from_peaks(std::vector<cplx> peaks, double dwell_interval_s, BinIndex bin);

PhaseTrace extract_phase_trace(std::span<const Rdm> rdms, double dwell_interval_s, const TrackOptions& opts = {});

/// Zero-phase band-pass by DFT masking. Bins whose |f| lies outside
/// [low, high] are zeroed; the result is real.
PhaseTrace bandpass(const PhaseTrace& trace, const BandSpec& band);

/// Magnitude spectrum (1/L) |sum_l h(l) e^{-j 2 pi l k / L}| of the
/// band-passed trace zero-padded to fft_size, bins 0..L-1.
std::vector<double> band_spectrum(const PhaseTrace& trace, const BandSpec& band, std::size_t fft_size);

/// Breathing and heartbeat rates from the in-band spectral peaks,
/// f = peak_bin / (L * dwell).
VitalEstimate estimate_vitals(const PhaseTrace& trace, const BandSpec& br_band, const BandSpec& hb_band,
                              std::size_t fft_size);

} // namespace otfsjrc
