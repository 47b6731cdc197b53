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

#include "otfsjrc/grid.hpp"

#include "otfsjrc/fft.hpp"
#include "otfsjrc/random.hpp"

#include <cmath>
#include <random>
#include <string>

namespace otfsjrc {

void FrameConfig::validate() const
{
    if (m_bins < 2) raise(ErrorKind::Validation, "frame: m_bins must be >= 2");
    if (n_bins < 2) raise(ErrorKind::Validation, "frame: n_bins must be >= 2");
    if (!(scs_hz > 0.0) || !std::isfinite(scs_hz)) raise(ErrorKind::Validation, "frame: scs_hz must be > 0");
    if (!(fc_hz > 0.0) || !std::isfinite(fc_hz)) raise(ErrorKind::Validation, "frame: fc_hz must be > 0");
}

Resolutions resolutions(double sample_rate_hz, double scs_hz, std::size_t n_bins, double fc_hz)
{
    Resolutions r{};
    r.delay_s = 1.0 / sample_rate_hz;
    const double symbol_time = 1.0 / scs_hz;
    r.doppler_hz = 1.0 / (static_cast<double>(n_bins) * symbol_time);
    r.range_m = kSpeedOfLight * r.delay_s / 2.0;
    r.speed_mps = kSpeedOfLight * r.doppler_hz / (2.0 * fc_hz);
    return r;
}

Resolutions resolutions(const FrameConfig& config)
{
    config.validate();
    Resolutions r{};
    r.delay_s = 1.0 / (static_cast<double>(config.m_bins) * config.scs_hz);
    r.doppler_hz = 1.0 / (static_cast<double>(config.n_bins) * config.symbol_time_s());
    r.range_m = kSpeedOfLight * r.delay_s / 2.0;
    r.speed_mps = kSpeedOfLight * r.doppler_hz / (2.0 * config.fc_hz);
    return r;
}

const char* to_string(Domain d) noexcept { return d == Domain::DelayDoppler ? "delay-Doppler" : "delay-time"; }

DDGrid::DDGrid(const FrameConfig& config, Domain domain)
    : config_(config), domain_(domain), cells_(config.m_bins, config.n_bins)
{
    config_.validate();
}

DDGrid::DDGrid(const FrameConfig& config, Domain domain, ComplexMatrix cells)
    : config_(config), domain_(domain), cells_(std::move(cells))
{
    config_.validate();
    if (cells_.rows() != config_.m_bins || cells_.cols() != config_.n_bins)
        raise(ErrorKind::Dimension, "grid cells are " + std::to_string(cells_.rows()) + "x" +
                                        std::to_string(cells_.cols()) + ", frame expects " +
                                        std::to_string(config_.m_bins) + "x" + std::to_string(config_.n_bins));
}

void require_domain(const DDGrid& g, Domain expected, const char* op)
{
    if (g.domain() != expected)
        raise(ErrorKind::DomainMismatch,
              std::string(op) + ": expected a " + to_string(expected) + " grid, got " + to_string(g.domain()));
}

DDGrid modulate(const DDGrid& grid)
{
    require_domain(grid, Domain::DelayDoppler, "modulate");
    ComplexMatrix cells = grid.cells();
    fft::rows_unitary(cells, fft::Direction::Inverse);
    return DDGrid(grid.config(), Domain::DelayTime, std::move(cells));
}

DDGrid demodulate(const DDGrid& grid)
{
    require_domain(grid, Domain::DelayTime, "demodulate");
    ComplexMatrix cells = grid.cells();
    fft::rows_unitary(cells, fft::Direction::Forward);
    return DDGrid(grid.config(), Domain::DelayDoppler, std::move(cells));
}

SymbolAlphabet SymbolAlphabet::qpsk()
{
    // Axis-aligned constellation so |point| == 1 holds exactly in binary floating point.
    return {AlphabetKind::Qpsk, {{1.0, 0.0}, {0.0, 1.0}, {-1.0, 0.0}, {0.0, -1.0}}};
}

SymbolAlphabet SymbolAlphabet::unit_impulse() { return {AlphabetKind::UnitImpulse, {cplx{1.0, 0.0}}}; }

SymbolAlphabet SymbolAlphabet::custom(std::vector<cplx> points) { return {AlphabetKind::Custom, std::move(points)}; }

void SymbolAlphabet::validate() const
{
    switch (kind) {
    case AlphabetKind::Qpsk:
        if (points.size() != 4) raise(ErrorKind::Validation, "alphabet: QPSK needs exactly 4 points");
        for (const auto& p : points)
            if (std::abs(std::abs(p) - 1.0) > 1e-12) raise(ErrorKind::Validation, "alphabet: QPSK points must be unit modulus");
        break;
    case AlphabetKind::UnitImpulse: break;
    case AlphabetKind::Custom:
        if (points.empty()) raise(ErrorKind::Validation, "alphabet: custom alphabet needs at least one point");
        break;
    }
}

DDGrid generate_frame(const FrameConfig& config, const SymbolAlphabet& alphabet, std::uint64_t seed)
{
    alphabet.validate();
    DDGrid grid(config, Domain::DelayDoppler);
    if (alphabet.kind == AlphabetKind::UnitImpulse) {
        grid(0, 0) = 1.0;
        return grid;
    }
    Rng rng(seed);
    std::uniform_int_distribution<std::size_t> pick(0, alphabet.points.size() - 1);
    for (auto& v : grid.cells().values()) v = alphabet.points[pick(rng)];
    return grid;
}

} // namespace otfsjrc
