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

#include <otfsjrc/channel.hpp>
#include <otfsjrc/classify.hpp>
#include <otfsjrc/faor.hpp>
#include <otfsjrc/grid.hpp>
#include <otfsjrc/vitals.hpp>

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>

namespace jrc {

struct VitalsSettings {
    otfsjrc::BandSpec br_band = otfsjrc::BandSpec::breathing();
    otfsjrc::BandSpec hb_band = otfsjrc::BandSpec::heartbeat();
    std::size_t fft_size = 2048;  // L
    std::size_t num_dwells = 512; // L1
    bool gate = false;
    std::optional<otfsjrc::BinIndex> track_bin;
};

struct DatasetSettings {
    std::size_t n_human = 1000;
    std::size_t n_nonhuman = 1000;
    otfsjrc::DatasetRecipe recipe; // frame and detector are filled from the experiment
};

/*
 * One experiment, as read from --config. Every key is optional; missing
 * keys keep the defaults below (desk frame, no targets, no noise).
 *
 * The channel block additionally accepts "snr_db", which sets noise_power
 * from the strongest non-leakage target, and "si_over_target_db".
 * The channel seed is always derived from the experiment seed.
 */
struct ExperimentConfig {
    std::uint64_t seed = 0;
    otfsjrc::FrameConfig frame;
    otfsjrc::SymbolAlphabet alphabet = otfsjrc::SymbolAlphabet::qpsk();
    otfsjrc::ChannelConfig channel;
    otfsjrc::DetectorParams detector;
    VitalsSettings vitals;
    otfsjrc::ClassifierParams classifier;
    DatasetSettings dataset;
    std::filesystem::path output_dir = "out";

    void validate() const;
};

ExperimentConfig experiment_from_json(const nlohmann::json& j);
nlohmann::json experiment_to_json(const ExperimentConfig& cfg);

/// Reads and validates a config file; Io/Decode/Validation errors name the path.
ExperimentConfig load_experiment(const std::filesystem::path& path);

/// 16 hex digits of FNV-1a over the canonical JSON dump.
std::string config_hash(const nlohmann::json& canonical);

/// Replaces the experiment seed and re-derives the channel noise seed.
void set_seed(ExperimentConfig& cfg, std::uint64_t seed);

/// Named sub-seeds of the experiment seed.
std::uint64_t frame_seed(const ExperimentConfig& cfg);
std::uint64_t noise_seed(const ExperimentConfig& cfg);
std::uint64_t dataset_seed(const ExperimentConfig& cfg);

} // namespace jrc
