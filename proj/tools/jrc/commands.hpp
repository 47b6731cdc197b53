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

#include "experiment.hpp"

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

namespace jrc {

namespace fs = std::filesystem;

// Process exit statuses.
enum ExitCode : int {
    kOk = 0,
    kFailure = 1,
    kValidation = 2,
    kIo = 3,
    kNoSignal = 4,
    kDecode = 5,
};

struct GlobalOptions {
    std::optional<fs::path> config;
    std::optional<std::uint64_t> seed;
    std::optional<fs::path> out;
};

/// Config file (or defaults) with --seed and --out applied.
ExperimentConfig resolve_config(const GlobalOptions& g);

/// x.grid, y_dwell_NNNN.grid for every dwell, run.json.
int cmd_simulate(const GlobalOptions& g, std::optional<std::size_t> dwells);

/// detections.json and rdm.csv for one received grid.
int cmd_detect(const GlobalOptions& g, const fs::path& x_path, const fs::path& y_path, bool no_cancel);

/// vitals.json, phase_trace.csv and spectrum.csv from a simulate run
/// directory. Writes {"error": "no_signal"} and returns kNoSignal when the
/// in-band spectra are empty.
int cmd_vitals(const GlobalOptions& g, const fs::path& run_dir);

/// Labeled synthetic dataset: manifest.json, traces/, run.json.
int cmd_dataset(const GlobalOptions& g, std::optional<std::size_t> n_human, std::optional<std::size_t> n_nonhuman);

/// verdicts.json for a dataset directory (plus confusion.json) or for a run
/// directory holding phase_trace.csv.
int cmd_classify(const GlobalOptions& g, const fs::path& input);

/// simulate, detect on dwell 0, vitals and classify into one directory.
int cmd_e2e(const GlobalOptions& g);

/// Exit status for an error kind.
int exit_code_for(otfsjrc::ErrorKind kind) noexcept;

/// Full command line entry point; argv[0] is the program name.
int run(int argc, const char* const* argv);
int run(const std::vector<std::string>& args);

} // namespace jrc
