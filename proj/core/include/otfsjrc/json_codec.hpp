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

// nlohmann::json conversions for the configuration and result records.
// Missing optional keys fall back to the struct defaults.

#include "otfsjrc/classify.hpp"
#include "otfsjrc/faor.hpp"
#include "otfsjrc/vitals.hpp"

#include <nlohmann/json.hpp>

namespace otfsjrc {

void to_json(nlohmann::json& j, const FrameConfig& v);
void from_json(const nlohmann::json& j, FrameConfig& v);

void to_json(nlohmann::json& j, const VitalMotion& v);
void from_json(const nlohmann::json& j, VitalMotion& v);

// Keys: gain_re, gain_im, delay_bins, doppler_bins, is_self_interference, vitals{...}
void to_json(nlohmann::json& j, const TargetSpec& v);
void from_json(const nlohmann::json& j, TargetSpec& v);

// Keys: targets[], noise_power, dwell_interval_s, seed. An optional
// si_over_target_db appends a leakage target at that level.
void to_json(nlohmann::json& j, const ChannelConfig& v);
void from_json(const nlohmann::json& j, ChannelConfig& v);

void to_json(nlohmann::json& j, const DetectorParams& v);
void from_json(const nlohmann::json& j, DetectorParams& v);

void to_json(nlohmann::json& j, const BandSpec& v);
void from_json(const nlohmann::json& j, BandSpec& v);

void to_json(nlohmann::json& j, const ClassifierParams& v);
void from_json(const nlohmann::json& j, ClassifierParams& v);

void to_json(nlohmann::json& j, const Detection& v);
void to_json(nlohmann::json& j, const VitalEstimate& v);
void to_json(nlohmann::json& j, const ConfusionCounts& v);
void to_json(nlohmann::json& j, const Verdict& v);

/// Parses text, converting parse/type errors into Decode errors naming `source`.
nlohmann::json parse_json(const std::string& text, const std::string& source);

/// Stable serialization used for every JSON file the tools write.
std::string dump_json(const nlohmann::json& j);

} // namespace otfsjrc
