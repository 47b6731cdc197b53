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

#include "otfsjrc/json_codec.hpp"

namespace otfsjrc {

using nlohmann::json;

namespace {

template <typename T>
void read_opt(const json& j, const char* key, T& out)
{
    if (auto it = j.find(key); it != j.end() && !it->is_null()) it->get_to(out);
}

} // namespace

void to_json(json& j, const FrameConfig& v)
{
    j = json{{"m_bins", v.m_bins}, {"n_bins", v.n_bins}, {"scs_hz", v.scs_hz}, {"fc_hz", v.fc_hz}};
}

void from_json(const json& j, FrameConfig& v)
{
    read_opt(j, "m_bins", v.m_bins);
    read_opt(j, "n_bins", v.n_bins);
    read_opt(j, "scs_hz", v.scs_hz);
    read_opt(j, "fc_hz", v.fc_hz);
}

void to_json(json& j, const VitalMotion& v)
{
    j = json{{"base_range_m", v.base_range_m},         {"breath_rate_hz", v.breath_rate_hz},
             {"breath_amp_m", v.breath_amp_m},         {"heart_rate_hz", v.heart_rate_hz},
             {"heart_amp_m", v.heart_amp_m},           {"breath_phase_rad", v.breath_phase_rad},
             {"heart_phase_rad", v.heart_phase_rad},   {"radial_velocity_mps", v.radial_velocity_mps}};
}

void from_json(const json& j, VitalMotion& v)
{
    read_opt(j, "base_range_m", v.base_range_m);
    read_opt(j, "breath_rate_hz", v.breath_rate_hz);
    read_opt(j, "breath_amp_m", v.breath_amp_m);
    read_opt(j, "heart_rate_hz", v.heart_rate_hz);
    read_opt(j, "heart_amp_m", v.heart_amp_m);
    read_opt(j, "breath_phase_rad", v.breath_phase_rad);
    read_opt(j, "heart_phase_rad", v.heart_phase_rad);
    read_opt(j, "radial_velocity_mps", v.radial_velocity_mps);
}

void to_json(json& j, const TargetSpec& v)
{
    j = json{{"gain_re", v.gain.real()},
             {"gain_im", v.gain.imag()},
             {"delay_bins", v.delay_bins},
             {"doppler_bins", v.doppler_bins},
             {"is_self_interference", v.is_self_interference}};
    if (v.vitals) j["vitals"] = *v.vitals;
}

void from_json(const json& j, TargetSpec& v)
{
    double re = v.gain.real();
    double im = v.gain.imag();
    read_opt(j, "gain_re", re);
    read_opt(j, "gain_im", im);
    v.gain = {re, im};
    read_opt(j, "delay_bins", v.delay_bins);
    read_opt(j, "doppler_bins", v.doppler_bins);
    read_opt(j, "is_self_interference", v.is_self_interference);
    if (auto it = j.find("vitals"); it != j.end() && !it->is_null()) v.vitals = it->get<VitalMotion>();
}

void to_json(json& j, const ChannelConfig& v)
{
    j = json{{"targets", v.targets},
             {"noise_power", v.noise_power},
             {"dwell_interval_s", v.dwell_interval_s},
             {"seed", v.seed}};
}

void from_json(const json& j, ChannelConfig& v)
{
    read_opt(j, "targets", v.targets);
    read_opt(j, "noise_power", v.noise_power);
    read_opt(j, "dwell_interval_s", v.dwell_interval_s);
    read_opt(j, "seed", v.seed);
    if (auto it = j.find("si_over_target_db"); it != j.end() && !it->is_null())
        v.targets.push_back(self_interference_target(v, it->get<double>()));
}

void to_json(json& j, const DetectorParams& v)
{
    j = json{{"cancel_si", v.cancel_si},
             {"max_targets", v.max_targets},
             {"threshold_factor", v.threshold_factor},
             {"guard_cells", {v.guard_delay, v.guard_doppler}},
             {"s_data", v.s_data}};
}

void from_json(const json& j, DetectorParams& v)
{
    read_opt(j, "cancel_si", v.cancel_si);
    read_opt(j, "max_targets", v.max_targets);
    read_opt(j, "threshold_factor", v.threshold_factor);
    if (auto it = j.find("guard_cells"); it != j.end() && !it->is_null()) {
        if (!it->is_array() || it->size() != 2) raise(ErrorKind::Validation, "detector: guard_cells must be [g_m, g_n]");
        v.guard_delay = (*it)[0].get<std::size_t>();
        v.guard_doppler = (*it)[1].get<std::size_t>();
    }
    read_opt(j, "s_data", v.s_data);
}

void to_json(json& j, const BandSpec& v) { j = json::array({v.low_hz, v.high_hz}); }

void from_json(const json& j, BandSpec& v)
{
    if (!j.is_array() || j.size() != 2) raise(ErrorKind::Validation, "band must be [low_hz, high_hz]");
    v.low_hz = j[0].get<double>();
    v.high_hz = j[1].get<double>();
}

void to_json(json& j, const ClassifierParams& v)
{
    j = json{{"br_band", v.br_band},
             {"periodicity_threshold", v.periodicity_threshold},
             {"min_trace_len", v.min_trace_len}};
}

void from_json(const json& j, ClassifierParams& v)
{
    read_opt(j, "br_band", v.br_band);
    read_opt(j, "periodicity_threshold", v.periodicity_threshold);
    read_opt(j, "min_trace_len", v.min_trace_len);
}

void to_json(json& j, const Detection& v)
{
    j = json{{"delay_bin", v.delay_bin},
             {"doppler_bin", v.doppler_bin_signed},
             {"range_m", v.range_m},
             {"speed_mps", v.speed_mps},
             {"magnitude", v.magnitude},
             {"peak_re", v.peak_value.real()},
             {"peak_im", v.peak_value.imag()}};
}

void to_json(json& j, const VitalEstimate& v)
{
    j = json{{"f_br_hz", v.f_br_hz},
             {"f_hb_hz", v.f_hb_hz},
             {"br_peak_index", v.br_peak_index},
             {"hb_peak_index", v.hb_peak_index},
             {"br_confidence", v.br_confidence},
             {"hb_confidence", v.hb_confidence},
             {"fft_size", v.fft_size},
             {"dwell_interval_s", v.dwell_interval_s}};
}

void to_json(json& j, const ConfusionCounts& v)
{
    // Human cases first, then non-human, each as "correct of total".
    j = json{{"human", {{"total", v.tp + v.fn}, {"correct", v.tp}}},
             {"non_human", {{"total", v.tn + v.fp}, {"correct", v.tn}}},
             {"tp", v.tp},
             {"fn", v.fn},
             {"tn", v.tn},
             {"fp", v.fp}};
}

void to_json(json& j, const Verdict& v) { j = json{{"label", to_string(v.label)}, {"score", v.score}}; }

json parse_json(const std::string& text, const std::string& source)
{
    try {
        return json::parse(text);
    } catch (const json::exception& e) {
        raise(ErrorKind::Decode, source + ": " + e.what());
    }
}

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

} // namespace otfsjrc
