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

#include "otfsjrc/classify.hpp"

#include "otfsjrc/fft.hpp"
#include "otfsjrc/random.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

namespace otfsjrc {

namespace {

// RMS phase (rad) below which a trace counts as carrying no power.
constexpr double kZeroPowerRms = 1e-12;

double uniform(Rng& rng, double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(rng); }

enum class Scenario { Human, Static, Robot, Jitter };

const char* scenario_tag(Scenario s)
{
    switch (s) {
    case Scenario::Human: return "human_vitals";
    case Scenario::Static: return "static_target";
    case Scenario::Robot: return "robot_constant_velocity";
    case Scenario::Jitter: return "random_walk_jitter";
    }
    return "unknown";
}

Scenario scenario_for(std::size_t index, std::size_t n_human, std::size_t n_nonhuman, const DatasetRecipe& recipe)
{
    if (index < n_human) return Scenario::Human;
    const std::size_t j = index - n_human;
    const auto n_static = static_cast<std::size_t>(std::llround(recipe.static_share * static_cast<double>(n_nonhuman)));
    const auto n_robot = static_cast<std::size_t>(std::llround(recipe.robot_share * static_cast<double>(n_nonhuman)));
    if (j < n_static) return Scenario::Static;
    if (j < n_static + n_robot) return Scenario::Robot;
    return Scenario::Jitter;
}

// Frequency at which a dwell-sampled carrier-phase ramp of a target moving
// at v shows up, folded into [-1/(2 dwell), 1/(2 dwell)].
double aliased_ramp_hz(double v, double fc_hz, double dwell)
{
    const double doppler = 2.0 * v * fc_hz / kSpeedOfLight;
    return doppler - std::round(doppler * dwell) / dwell;
}

} // namespace

const char* to_string(Label label) noexcept { return label == Label::Human ? "HUMAN" : "NON_HUMAN"; }

Label label_from_string(const std::string& s)
{
    if (s == "HUMAN") return Label::Human;
    if (s == "NON_HUMAN") return Label::NonHuman;
    raise(ErrorKind::Decode, "unknown label '" + s + "'");
}

void ClassifierParams::validate() const
{
    if (!(periodicity_threshold > 0.0 && periodicity_threshold < 1.0))
        raise(ErrorKind::Validation, "classifier: periodicity_threshold must lie in (0, 1)");
    if (min_trace_len < 32) raise(ErrorKind::Validation, "classifier: min_trace_len must be >= 32");
}

double periodicity_score(const PhaseTrace& trace, const BandSpec& br_band)
{
    trace.validate();
    br_band.validate(trace.dwell_interval_s);
    const std::size_t L1 = trace.size();
    const double mean = std::accumulate(trace.phases_rad.begin(), trace.phases_rad.end(), 0.0) / static_cast<double>(L1);

    std::vector<cplx> spec(L1);
    double power = 0.0;
    for (std::size_t l = 0; l < L1; ++l) {
        const double v = trace.phases_rad[l] - mean;
        spec[l] = v;
        power += v * v;
    }
    if (std::sqrt(power / static_cast<double>(L1)) <= kZeroPowerRms) return 0.0;
    fft::dft(spec, fft::Direction::Forward);

    // Positive-frequency bins of the breathing-band-filtered spectrum.
    const double denom = static_cast<double>(L1) * trace.dwell_interval_s;
    auto in_band = [&](std::size_t k) { return k >= 1 && 2 * k <= L1 && br_band.contains(static_cast<double>(k) / denom); };
    std::size_t peak = 0;
    double peak_mag = -1.0;
    for (std::size_t k = 1; 2 * k <= L1; ++k)
        if (in_band(k) && std::abs(spec[k]) > peak_mag) {
            peak_mag = std::abs(spec[k]);
            peak = k;
        }
    if (peak_mag < 0.0) return 0.0;

    double line = 0.0;
    for (std::size_t k = peak - 1; k <= peak + 1; ++k) {
        if (!in_band(k)) continue;
        // Real trace: bin k and its mirror L1-k carry equal power, except Nyquist.
        const double mirror = 2 * k == L1 ? 1.0 : 2.0;
        line += mirror * std::norm(spec[k]);
    }
    // Parseval: sum_k |F_k|^2 = L1 * sum_l phi(l)^2.
    return std::clamp(line / (static_cast<double>(L1) * power), 0.0, 1.0);
}

Verdict classify_sp(const PhaseTrace& trace, const ClassifierParams& params)
{
    params.validate();
    if (trace.size() < params.min_trace_len)
        raise(ErrorKind::InsufficientData, "classify_sp: trace has " + std::to_string(trace.size()) +
                                               " samples, need >= " + std::to_string(params.min_trace_len));
    Verdict v;
    v.score = periodicity_score(trace, params.br_band);
    v.label = v.score >= params.periodicity_threshold ? Label::Human : Label::NonHuman;
    return v;
}

ConfusionCounts evaluate(std::span<const LabeledTrace> dataset, const ClassifierParams& params)
{
    ConfusionCounts c;
    for (const auto& item : dataset) {
        const bool said_human = classify_sp(item.trace, params).label == Label::Human;
        if (item.label == Label::Human)
            said_human ? ++c.tp : ++c.fn;
        else
            said_human ? ++c.fp : ++c.tn;
    }
    return c;
}

void DatasetRecipe::validate(double dwell_interval_s) const
{
    frame.validate();
    detector.validate();
    if (trace_len < kMinTraceLength) raise(ErrorKind::Validation, "dataset: trace_len too short");
    if (snr_min_db > snr_max_db) raise(ErrorKind::Validation, "dataset: snr_min_db > snr_max_db");
    if (static_share < 0.0 || robot_share < 0.0 || static_share + robot_share > 1.0)
        raise(ErrorKind::Validation, "dataset: non-human scenario shares must be >= 0 and sum to <= 1");
    if (!(robot_speed_min_mps > 0.0 && robot_speed_min_mps < robot_speed_max_mps))
        raise(ErrorKind::Validation, "dataset: robot speed range must satisfy 0 < min < max");
    if (!(robot_min_alias_hz >= 0.0 && robot_min_alias_hz < 0.5 / dwell_interval_s))
        raise(ErrorKind::Validation, "dataset: robot_min_alias_hz must lie below the dwell Nyquist rate");
    if (!(jitter_step_rad > 0.0)) raise(ErrorKind::Validation, "dataset: jitter_step_rad must be > 0");
}

LabeledTrace generate_trace(std::size_t index, std::size_t n_human, std::size_t n_nonhuman,
                            const ChannelConfig& cfg_template, std::uint64_t seed, const DatasetRecipe& recipe)
{
    const auto& frame = recipe.frame;
    const double dwell = cfg_template.dwell_interval_s;
    const std::uint64_t trace_seed = derive_seed(seed, static_cast<std::uint64_t>(index));
    Rng rng(derive_seed(trace_seed, "params"));

    ChannelConfig cfg;
    cfg.dwell_interval_s = dwell;
    cfg.seed = derive_seed(trace_seed, "noise");
    cplx base_gain{1.0, 0.0};
    bool have_base = false;
    for (const auto& t : cfg_template.targets) {
        if (t.is_self_interference)
            cfg.targets.push_back(t);
        else if (!have_base) {
            base_gain = t.gain;
            have_base = true;
        }
    }

    const auto max_delay = std::max<std::size_t>(1, frame.m_bins / 4);
    TargetSpec target;
    target.gain = base_gain;
    target.delay_bins = static_cast<double>(std::uniform_int_distribution<std::size_t>(1, max_delay)(rng));
    const double snr_db = uniform(rng, recipe.snr_min_db, recipe.snr_max_db);
    cfg.noise_power = recipe.force_noiseless ? 0.0 : noise_power_for_snr(std::abs(base_gain), snr_db);

    const Scenario scenario = scenario_for(index, n_human, n_nonhuman, recipe);
    VitalMotion motion;
    motion.base_range_m = uniform(rng, 0.8, 3.0);
    switch (scenario) {
    case Scenario::Human:
        motion.breath_rate_hz = uniform(rng, 0.15, 0.5);
        motion.heart_rate_hz = uniform(rng, 0.9, 2.0);
        motion.breath_amp_m = 0.005 * uniform(rng, 0.5, 1.5);
        motion.heart_amp_m = 0.0003 * uniform(rng, 0.5, 1.5);
        motion.breath_phase_rad = uniform(rng, 0.0, kTwoPi);
        motion.heart_phase_rad = uniform(rng, 0.0, kTwoPi);
        target.vitals = motion;
        break;
    case Scenario::Robot: {
        double v = 0.0;
        do {
            v = uniform(rng, recipe.robot_speed_min_mps, recipe.robot_speed_max_mps);
            if (uniform(rng, 0.0, 1.0) < 0.5) v = -v;
        } while (std::abs(aliased_ramp_hz(v, frame.fc_hz, dwell)) < recipe.robot_min_alias_hz);
        motion.breath_amp_m = 0.0;
        motion.heart_amp_m = 0.0;
        motion.radial_velocity_mps = v;
        target.vitals = motion;
        break;
    }
    case Scenario::Static:
    case Scenario::Jitter: break;
    }
    cfg.targets.push_back(target);

    std::vector<double> jitter(recipe.trace_len, 0.0);
    if (scenario == Scenario::Jitter) {
        GaussianSource walk(derive_seed(trace_seed, "jitter"));
        for (std::size_t d = 1; d < jitter.size(); ++d)
            jitter[d] = jitter[d - 1] + recipe.jitter_step_rad * walk.standard_normal();
    }

    const DDGrid x = generate_frame(frame, SymbolAlphabet::qpsk(), derive_seed(trace_seed, "frame"));
    const FaorDetector detector(x, recipe.detector);
    std::vector<cplx> peaks;
    peaks.reserve(recipe.trace_len);
    BinIndex locked{};
    for (std::size_t d = 0; d < recipe.trace_len; ++d) {
        if (scenario == Scenario::Jitter) cfg.targets.back().gain = base_gain * std::polar(1.0, jitter[d]);
        const Rdm rdm = detector.rdm(apply_dd_channel(x, cfg, d));
        if (d == 0) locked = argmax_bin(rdm);
        peaks.push_back(rdm.r(locked.delay, locked.doppler));
    }

    LabeledTrace out;
    out.trace = trace_from_peaks(std::move(peaks), dwell, locked);
    out.label = scenario == Scenario::Human ? Label::Human : Label::NonHuman;
    out.scenario = scenario_tag(scenario);
    return out;
}

std::vector<LabeledTrace> generate_dataset(std::size_t n_human, std::size_t n_nonhuman,
                                           const ChannelConfig& cfg_template, std::uint64_t seed,
                                           const DatasetRecipe& recipe)
{
    if (n_human < 1 || n_nonhuman < 1) raise(ErrorKind::Validation, "generate_dataset: counts must be >= 1");
    cfg_template.validate();
    recipe.validate(cfg_template.dwell_interval_s);
    std::vector<LabeledTrace> out;
    out.reserve(n_human + n_nonhuman);
    for (std::size_t i = 0; i < n_human + n_nonhuman; ++i)
        out.push_back(generate_trace(i, n_human, n_nonhuman, cfg_template, seed, recipe));
    return out;
}

} // namespace otfsjrc
