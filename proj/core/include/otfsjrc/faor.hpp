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

#include "otfsjrc/grid.hpp"

#include <vector>

namespace otfsjrc {

/*
 * Fast OTFS radar detector with self-interference cancellation.
 *
 *   1. D(a,b) = Yf(a,b) conj(Xf(a,b)), Yf/Xf unitary 2D DFTs of the
 *      received and transmitted delay-Doppler grids.
 *   2. Optional: subtract from every row the per-column mean of D over the
 *      data rows. Leakage is a zero-delay echo, so this empties RDM row 0.
 *   3. R(m,n) = (1/sqrt(MN)) sum_a sum_b D(a,b) e^{+j2pi ma/M} e^{+j2pi bn/N}.
 *   4. Peaks of |R| give (delay bin, Doppler bin).
 *
 * Without step 2, R(m,n) equals (1/sqrt(MN)) times the circular
 * cross-correlation sum_{m',n'} Y(m'+m, n'+n) conj(X(m',n')).
 */

struct SpectralProduct {
    FrameConfig config;
    ComplexMatrix d;
    std::vector<std::size_t> s_data; // rows treated as data subcarriers
    bool si_cancelled = false;
};

struct Rdm {
    FrameConfig config;
    ComplexMatrix r;
    bool si_cancelled = false;
};

struct BinIndex {
    std::size_t delay = 0;
    std::size_t doppler = 0;
    bool operator==(const BinIndex&) const = default;
};

struct Detection {
    std::size_t delay_bin = 0;
    long doppler_bin_signed = 0;
    double range_m = 0.0;
    double speed_mps = 0.0;
    double magnitude = 0.0;
    cplx peak_value{};
};

struct DetectorParams {
    bool cancel_si = true;
    std::size_t max_targets = 8;
    double threshold_factor = 8.0; // kappa: peak must exceed kappa * median |R|
    std::size_t guard_delay = 2;
    std::size_t guard_doppler = 2;
    std::vector<std::size_t> s_data; // empty: every row

    void validate() const;
};

struct PhysicalPoint {
    double range_m;
    double speed_mps;
};

/// All rows 0..M-1.
std::vector<std::size_t> all_rows(std::size_t m_bins);

SpectralProduct spectral_product(const DDGrid& y, const DDGrid& x, std::vector<std::size_t> s_data);

SpectralProduct cancel_self_interference(SpectralProduct sp);

Rdm compute_rdm(const SpectralProduct& sp);

/// Full map for one received frame.
Rdm range_doppler_map(const DDGrid& y, const DDGrid& x, const DetectorParams& params);

/// Iterative peak extraction with toroidal guard masking.
std::vector<Detection> extract_peaks(const Rdm& rdm, const DetectorParams& params);

std::vector<Detection> detect(const DDGrid& y, const DDGrid& x, const DetectorParams& params);

/// Location of max |R|; ties resolve to the lexicographically smallest (m, n).
BinIndex argmax_bin(const Rdm& rdm);

/// Doppler bin in [-N/2, N/2).
long signed_doppler(std::size_t n, std::size_t n_bins) noexcept;

PhysicalPoint bins_to_physical(long delay_bin, long doppler_bin_signed, const FrameConfig& config);

/// Detector bound to one transmitted frame. Caches conj(Xf); immutable and
/// safe to share across threads once built.
class FaorDetector {
public:
    FaorDetector(const DDGrid& x, DetectorParams params);

    const DetectorParams& params() const noexcept { return params_; }
    const FrameConfig& config() const noexcept { return config_; }

    Rdm rdm(const DDGrid& y) const;
    std::vector<Detection> detect(const DDGrid& y) const;

private:
    FrameConfig config_;
    DetectorParams params_;
    std::vector<std::size_t> s_data_;
    ComplexMatrix x_conj_;
};

} // namespace otfsjrc
