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

#include "otfsjrc/classify.hpp"
#include "otfsjrc/faor.hpp"
#include "otfsjrc/grid.hpp"
#include "otfsjrc/vitals.hpp"

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace otfsjrc::io {

namespace fs = std::filesystem;

/*
 * OTFSGRID layout, all fields little-endian:
 *
 *   offset  size  field
 *        0     8  magic "OTFSGRID"
 *        8     2  version (u16) = 1
 *       10     1  domain (u8): 0 delay-Doppler, 1 delay-time
 *       11     1  reserved (u8) = 0
 *       12     4  M (u32)
 *       16     4  N (u32)
 *       20     8  subcarrier spacing, Hz (f64)
 *       28     8  carrier frequency, Hz (f64)
 *       36  8*MN  samples, m outer / n inner, each f32 re then f32 im
 */
inline constexpr std::size_t kGridHeaderBytes = 36;
inline constexpr std::uint16_t kGridVersion = 1;

std::string encode_grid(const DDGrid& grid);

/// `source` names the file (or buffer) in decode errors.
DDGrid decode_grid(std::string_view bytes, const std::string& source);

void write_grid(const fs::path& path, const DDGrid& grid);
DDGrid read_grid(const fs::path& path);

/// Writes to a sibling temp file, then renames over the target.
void write_file_atomic(const fs::path& path, std::string_view contents);
std::string read_file(const fs::path& path);

/// Header `m,n,re,im,mag`, then one row per cell in delay-major order.
std::string rdm_csv(const Rdm& rdm);

/// Header `l,phi_rad,re,im`.
std::string phase_trace_csv(const PhaseTrace& trace);
PhaseTrace parse_phase_trace_csv(std::string_view text, double dwell_interval_s, const std::string& source);

struct DatasetManifestEntry {
    std::string file;
    Label label;
    std::string scenario;
};

struct DatasetManifest {
    int version = 1;
    std::size_t n_traces = 0;
    double dwell_interval_s = 0.0;
    std::size_t trace_len = 0;
    std::vector<DatasetManifestEntry> entries;
};

/// `dir/manifest.json` plus `dir/traces/trace_NNNNN.csv`.
void write_dataset(const fs::path& dir, std::span<const LabeledTrace> dataset);
DatasetManifest read_manifest(const fs::path& dir);
std::vector<LabeledTrace> read_dataset(const fs::path& dir);

} // namespace otfsjrc::io
