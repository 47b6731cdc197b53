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

#include "otfsjrc/common.hpp"

#include <cstdint>
#include <vector>

namespace otfsjrc {

/*
 * Delay-Doppler frame geometry.
 *
 *   M  delay bins (one per subcarrier), sample rate M*scs
 *   N  Doppler bins (one per symbol), symbol time T = 1/scs
 *
 * No cyclic prefix is modeled, so the frame lasts exactly N*T.
 */
struct FrameConfig {
    std::size_t m_bins = 64;
    std::size_t n_bins = 16;
    double scs_hz = 30e3;
    double fc_hz = 29e9;

    void validate() const;

    double sample_rate_hz() const noexcept { return static_cast<double>(m_bins) * scs_hz; }
    double sample_period_s() const noexcept { return 1.0 / sample_rate_hz(); }
    double symbol_time_s() const noexcept { return static_cast<double>(m_bins) * sample_period_s(); }
    std::size_t cells() const noexcept { return m_bins * n_bins; }

    bool operator==(const FrameConfig&) const = default;
};

struct Resolutions {
    double delay_s;
    double doppler_hz;
    double range_m;
    double speed_mps;
};

/// Delay, Doppler, range and speed bin widths of a frame.
Resolutions resolutions(const FrameConfig& config);

/// Same quantities from the raw rates, for parameter sets whose bandwidth is
/// not an integer multiple of the subcarrier spacing.
Resolutions resolutions(double sample_rate_hz, double scs_hz, std::size_t n_bins, double fc_hz);

enum class Domain : std::uint8_t { DelayDoppler = 0, DelayTime = 1 };

const char* to_string(Domain d) noexcept;

/// M x N complex grid with a domain tag. Row m is the delay index; the
/// Doppler (or time) index n runs fastest in memory.
class DDGrid {
public:
    DDGrid(const FrameConfig& config, Domain domain);
    DDGrid(const FrameConfig& config, Domain domain, ComplexMatrix cells);

    const FrameConfig& config() const noexcept { return config_; }
    Domain domain() const noexcept { return domain_; }
    std::size_t m_bins() const noexcept { return config_.m_bins; }
    std::size_t n_bins() const noexcept { return config_.n_bins; }

    cplx& operator()(std::size_t m, std::size_t n) { return cells_(m, n); }
    const cplx& operator()(std::size_t m, std::size_t n) const { return cells_(m, n); }

    const ComplexMatrix& cells() const noexcept { return cells_; }
    ComplexMatrix& cells() noexcept { return cells_; }

    bool operator==(const DDGrid&) const = default;

private:
    FrameConfig config_;
    Domain domain_;
    ComplexMatrix cells_;
};

/// Throws DomainMismatch unless g carries the expected tag.
void require_domain(const DDGrid& g, Domain expected, const char* op);

/// Row-wise unitary inverse DFT along n: delay-Doppler -> delay-time.
DDGrid modulate(const DDGrid& grid);

/// Row-wise unitary forward DFT along n: delay-time -> delay-Doppler.
DDGrid demodulate(const DDGrid& grid);

enum class AlphabetKind { Qpsk, UnitImpulse, Custom };

struct SymbolAlphabet {
    AlphabetKind kind = AlphabetKind::Qpsk;
    std::vector<cplx> points;

    static SymbolAlphabet qpsk();
    static SymbolAlphabet unit_impulse();
    static SymbolAlphabet custom(std::vector<cplx> points);

    void validate() const;
};

/// Deterministic test frame. Cells are drawn i.i.d. from the alphabet; the
/// unit-impulse alphabet yields X(0,0) = 1 and zeros elsewhere.
DDGrid generate_frame(const FrameConfig& config, const SymbolAlphabet& alphabet, std::uint64_t seed);

} // namespace otfsjrc
