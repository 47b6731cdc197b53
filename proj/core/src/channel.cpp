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

#include "otfsjrc/channel.hpp"

#include "otfsjrc/fft.hpp"
#include "otfsjrc/random.hpp"

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace otfsjrc {

namespace {

constexpr double kIntegerTol = 1e-9;

bool is_integer(double v) { return std::abs(v - std::round(v)) < kIntegerTol; }

void add_noise(DDGrid& y, const ChannelConfig& cfg, std::size_t dwell_index)
{
    if (cfg.noise_power <= 0.0) return;
    GaussianSource noise(dwell_seed(cfg.seed, dwell_index));
    for (auto& v : y.cells().values()) v += noise(cfg.noise_power);
}

} // namespace

void VitalMotion::validate() const
{
    auto finite = [](double v) { return std::isfinite(v); };
    if (!finite(base_range_m) || base_range_m < 0.0) raise(ErrorKind::Validation, "vitals: base_range_m must be >= 0");
    if (!(breath_rate_hz > 0.0 && breath_rate_hz < 5.0)) raise(ErrorKind::Validation, "vitals: breath_rate_hz must lie in (0, 5)");
    if (!(heart_rate_hz > 0.0 && heart_rate_hz < 5.0)) raise(ErrorKind::Validation, "vitals: heart_rate_hz must lie in (0, 5)");
    if (!(breath_amp_m >= 0.0 && breath_amp_m <= 0.05)) raise(ErrorKind::Validation, "vitals: breath_amp_m must lie in [0, 0.05]");
    if (!(heart_amp_m >= 0.0 && heart_amp_m <= 0.05)) raise(ErrorKind::Validation, "vitals: heart_amp_m must lie in [0, 0.05]");
    if (!finite(breath_phase_rad) || !finite(heart_phase_rad) || !finite(radial_velocity_mps))
        raise(ErrorKind::Validation, "vitals: phases and velocity must be finite");
}

double VitalMotion::displacement(double t) const noexcept
{
    return breath_amp_m * std::sin(kTwoPi * breath_rate_hz * t + breath_phase_rad) +
           heart_amp_m * std::sin(kTwoPi * heart_rate_hz * t + heart_phase_rad) + radial_velocity_mps * t;
}

void TargetSpec::validate() const
{
    if (!std::isfinite(gain.real()) || !std::isfinite(gain.imag()) || !(std::abs(gain) > 0.0))
        raise(ErrorKind::Validation, "target: gain must be finite and nonzero");
    if (!std::isfinite(delay_bins) || delay_bins < 0.0) raise(ErrorKind::Validation, "target: delay_bins must be >= 0");
    if (!std::isfinite(doppler_bins)) raise(ErrorKind::Validation, "target: doppler_bins must be finite");
    if (is_self_interference && (delay_bins != 0.0 || doppler_bins != 0.0))
        raise(ErrorKind::Validation, "target: self-interference must sit at zero delay and zero Doppler");
    if (vitals) vitals->validate();
}

void ChannelConfig::validate() const
{
    if (!(noise_power >= 0.0) || !std::isfinite(noise_power)) raise(ErrorKind::Validation, "channel: noise_power must be >= 0");
    if (!(dwell_interval_s > 0.0) || !std::isfinite(dwell_interval_s))
        raise(ErrorKind::Validation, "channel: dwell_interval_s must be > 0");
    for (const auto& t : targets) t.validate();
}

TargetSpec self_interference_target(const ChannelConfig& cfg, double si_over_target_db)
{
    double strongest = 0.0;
    for (const auto& t : cfg.targets)
        if (!t.is_self_interference) strongest = std::max(strongest, std::abs(t.gain));
    if (strongest <= 0.0) raise(ErrorKind::Validation, "self-interference level needs at least one real target");
    TargetSpec si;
    si.gain = strongest * std::pow(10.0, si_over_target_db / 20.0);
    si.is_self_interference = true;
    return si;
}

double noise_power_for_snr(double target_gain_abs, double snr_db) noexcept
{
    return target_gain_abs * target_gain_abs / std::pow(10.0, snr_db / 10.0);
}

cplx effective_gain(const TargetSpec& target, double fc_hz, double t) noexcept
{
    if (!target.vitals) return target.gain;
    const double path = target.vitals->base_range_m + target.vitals->displacement(t);
    return target.gain * std::polar(1.0, -2.0 * kTwoPi * fc_hz * path / kSpeedOfLight);
}

std::uint64_t dwell_seed(std::uint64_t seed, std::size_t dwell_index) noexcept
{
    return derive_seed(seed, static_cast<std::uint64_t>(dwell_index));
}

DDGrid apply_dd_channel(const DDGrid& x, const ChannelConfig& cfg, std::size_t dwell_index)
{
    require_domain(x, Domain::DelayDoppler, "apply_dd_channel");
    cfg.validate();
    const auto& frame = x.config();
    const std::size_t M = frame.m_bins;
    const std::size_t N = frame.n_bins;
    const double Md = static_cast<double>(M);
    const double Nd = static_cast<double>(N);
    const double t = static_cast<double>(dwell_index) * cfg.dwell_interval_s;

    DDGrid y(frame, Domain::DelayDoppler);
    for (const auto& target : cfg.targets) {
        if (!is_integer(target.delay_bins) || !is_integer(target.doppler_bins))
            raise(ErrorKind::Validation, "apply_dd_channel: delay/Doppler must be integer bins; use apply_dt_channel "
                                         "for fractional targets");
        const auto l = static_cast<long long>(std::llround(target.delay_bins));
        const auto k = static_cast<long long>(std::llround(target.doppler_bins));
        if (l < 0 || l > static_cast<long long>(M) - 1)
            raise(ErrorKind::Range, "apply_dd_channel: delay bin " + std::to_string(l) + " outside [0, " +
                                        std::to_string(M - 1) + "]");

        const cplx h = effective_gain(target, frame.fc_hz, t);
        const double kd = static_cast<double>(k);
        // Boundary factor for rows m < l, per Doppler column.
        std::vector<cplx> edge(N);
        for (std::size_t n = 0; n < N; ++n) {
            const double dn = static_cast<double>(static_cast<long long>(n) - k);
            edge[n] = std::polar((Nd - 1.0) / Nd, -kTwoPi * dn / Nd);
        }
        for (std::size_t m = 0; m < M; ++m) {
            const double dm = static_cast<double>(static_cast<long long>(m) - l);
            const cplx row_phase = std::polar(1.0, kTwoPi * (dm / Md) * (kd / Nd));
            const std::size_t src_m = wrap_index(static_cast<long long>(m) - l, M);
            const bool wrapped = static_cast<long long>(m) < l;
            for (std::size_t n = 0; n < N; ++n) {
                const std::size_t src_n = wrap_index(static_cast<long long>(n) - k, N);
                const cplx v = h * row_phase * x(src_m, src_n);
                y(m, n) += wrapped ? v * edge[n] : v;
            }
        }
    }
    add_noise(y, cfg, dwell_index);
    return y;
}

DDGrid apply_dt_channel(const DDGrid& x_dt, const ChannelConfig& cfg, std::size_t dwell_index)
{
    require_domain(x_dt, Domain::DelayTime, "apply_dt_channel");
    cfg.validate();
    const auto& frame = x_dt.config();
    const std::size_t M = frame.m_bins;
    const std::size_t N = frame.n_bins;
    const std::size_t L = M * N;
    const double Ld = static_cast<double>(L);
    const double t = static_cast<double>(dwell_index) * cfg.dwell_interval_s;

    // Symbol-major stream: sample i = n*M + m.
    std::vector<cplx> stream(L);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t m = 0; m < M; ++m) stream[n * M + m] = x_dt(m, n);

    std::vector<cplx> acc(L, cplx{});
    std::vector<cplx> work(L);
    for (const auto& target : cfg.targets) {
        const double l = target.delay_bins;
        const double k = target.doppler_bins;

        // Doppler rotation referenced to the transmit instant, then delay:
        // r(t) = s(t - tau) exp(j 2 pi f (t - tau)).
        for (std::size_t i = 0; i < L; ++i)
            work[i] = k == 0.0 ? stream[i] : stream[i] * std::polar(1.0, kTwoPi * k * static_cast<double>(i) / Ld);

        if (is_integer(l)) {
            const auto shift = static_cast<long long>(std::llround(l));
            if (shift != 0) {
                std::vector<cplx> shifted(L);
                for (std::size_t i = 0; i < L; ++i)
                    shifted[i] = work[wrap_index(static_cast<long long>(i) - shift, L)];
                work.swap(shifted);
            }
        } else {
            fft::dft(work, fft::Direction::Forward);
            for (std::size_t q = 0; q < L; ++q) {
                const double fq = q < (L + 1) / 2 ? static_cast<double>(q) : static_cast<double>(q) - Ld;
                work[q] *= std::polar(1.0 / Ld, -kTwoPi * fq * l / Ld);
            }
            fft::dft(work, fft::Direction::Inverse);
        }

        const cplx h = effective_gain(target, frame.fc_hz, t);
        for (std::size_t i = 0; i < L; ++i) acc[i] += h * work[i];
    }

    DDGrid y(frame, Domain::DelayTime);
    for (std::size_t n = 0; n < N; ++n)
        for (std::size_t m = 0; m < M; ++m) y(m, n) = acc[n * M + m];
    add_noise(y, cfg, dwell_index);
    return y;
}

std::vector<DDGrid> simulate_dwells(const DDGrid& x, const ChannelConfig& cfg, std::size_t num_dwells)
{
    if (num_dwells < 1) raise(ErrorKind::Validation, "simulate_dwells: need at least one dwell");
    std::vector<DDGrid> out;
    out.reserve(num_dwells);
    for (std::size_t l = 0; l < num_dwells; ++l)
        out.push_back(x.domain() == Domain::DelayDoppler ? apply_dd_channel(x, cfg, l) : apply_dt_channel(x, cfg, l));
    return out;
}

} // namespace otfsjrc
