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

#include "otfsjrc/faor.hpp"

#include "otfsjrc/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace otfsjrc {

namespace {

// Cells below this fraction of the global peak are numerical zero and never
// reported, even when the median (and hence the threshold) is zero.
constexpr double kNumericalFloor = 1e-12;

void check_pair(const DDGrid& y, const DDGrid& x)
{
    require_domain(y, Domain::DelayDoppler, "spectral_product(y)");
    require_domain(x, Domain::DelayDoppler, "spectral_product(x)");
    if (!(y.config() == x.config()))
        raise(ErrorKind::Dimension, "received grid is " + std::to_string(y.m_bins()) + "x" +
                                        std::to_string(y.n_bins()) + ", transmitted grid is " +
                                        std::to_string(x.m_bins()) + "x" + std::to_string(x.n_bins()) +
                                        " (or frame parameters differ)");
}

std::vector<std::size_t> checked_rows(std::vector<std::size_t> rows, std::size_t m_bins)
{
    if (rows.empty()) return all_rows(m_bins);
    std::sort(rows.begin(), rows.end());
    rows.erase(std::unique(rows.begin(), rows.end()), rows.end());
    if (rows.back() >= m_bins)
        raise(ErrorKind::Range, "s_data row " + std::to_string(rows.back()) + " outside [0, " + std::to_string(m_bins) + ")");
    return rows;
}

void subtract_data_row_mean(ComplexMatrix& d, const std::vector<std::size_t>& s_data)
{
    const double inv = 1.0 / static_cast<double>(s_data.size());
    for (std::size_t b = 0; b < d.cols(); ++b) {
        cplx mean{};
        for (auto a : s_data) mean += d(a, b);
        mean *= inv;
        for (std::size_t a = 0; a < d.rows(); ++a) d(a, b) -= mean;
    }
}

double median_of(std::vector<double> v)
{
    if (v.empty()) return 0.0;
    const std::size_t mid = v.size() / 2;
    std::nth_element(v.begin(), v.begin() + static_cast<long>(mid), v.end());
    const double upper = v[mid];
    if (v.size() % 2 == 1) return upper;
    const double lower = *std::max_element(v.begin(), v.begin() + static_cast<long>(mid));
    return 0.5 * (lower + upper);
}

} // namespace

void DetectorParams::validate() const
{
    if (max_targets < 1) raise(ErrorKind::Validation, "detector: max_targets must be >= 1");
    if (!(threshold_factor > 1.0) || !std::isfinite(threshold_factor))
        raise(ErrorKind::Validation, "detector: threshold_factor must be > 1");
}

std::vector<std::size_t> all_rows(std::size_t m_bins)
{
    std::vector<std::size_t> rows(m_bins);
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return rows;
}

SpectralProduct spectral_product(const DDGrid& y, const DDGrid& x, std::vector<std::size_t> s_data)
{
    check_pair(y, x);
    ComplexMatrix yf = y.cells();
    ComplexMatrix xf = x.cells();
    fft::dft2_unitary(yf, fft::Direction::Forward);
    fft::dft2_unitary(xf, fft::Direction::Forward);
    for (std::size_t i = 0; i < yf.size(); ++i) yf.values()[i] *= std::conj(xf.values()[i]);
    return {y.config(), std::move(yf), checked_rows(std::move(s_data), y.m_bins()), false};
}

SpectralProduct cancel_self_interference(SpectralProduct sp)
{
    if (sp.s_data.empty()) raise(ErrorKind::Validation, "cancel_self_interference: empty data-row set");
    subtract_data_row_mean(sp.d, sp.s_data);
    sp.si_cancelled = true;
    return sp;
}

Rdm compute_rdm(const SpectralProduct& sp)
{
    ComplexMatrix r = sp.d;
    fft::dft2_unitary(r, fft::Direction::Inverse);
    return {sp.config, std::move(r), sp.si_cancelled};
}

Rdm range_doppler_map(const DDGrid& y, const DDGrid& x, const DetectorParams& params)
{
    params.validate();
    auto sp = spectral_product(y, x, params.s_data);
    if (params.cancel_si) sp = cancel_self_interference(std::move(sp));
    return compute_rdm(sp);
}

BinIndex argmax_bin(const Rdm& rdm)
{
    BinIndex best{};
    double best_mag = -1.0;
    for (std::size_t m = 0; m < rdm.r.rows(); ++m)
        for (std::size_t n = 0; n < rdm.r.cols(); ++n) {
            const double v = std::abs(rdm.r(m, n));
            if (v > best_mag) {
                best_mag = v;
                best = {m, n};
            }
        }
    return best;
}

long signed_doppler(std::size_t n, std::size_t n_bins) noexcept
{
    const auto k = static_cast<long>(n);
    const auto N = static_cast<long>(n_bins);
    return 2 * k >= N ? k - N : k;
}

PhysicalPoint bins_to_physical(long delay_bin, long doppler_bin_signed, const FrameConfig& config)
{
    config.validate();
    const auto M = static_cast<long>(config.m_bins);
    const auto N = static_cast<long>(config.n_bins);
    if (delay_bin < 0 || delay_bin >= M)
        raise(ErrorKind::Range, "delay bin " + std::to_string(delay_bin) + " outside [0, " + std::to_string(M) + ")");
    if (2 * doppler_bin_signed < -N || 2 * doppler_bin_signed >= N)
        raise(ErrorKind::Range, "Doppler bin " + std::to_string(doppler_bin_signed) + " outside [-N/2, N/2) for N=" +
                                    std::to_string(N));
    PhysicalPoint p{};
    p.range_m = static_cast<double>(delay_bin) * kSpeedOfLight / (2.0 * static_cast<double>(M) * config.scs_hz);
    p.speed_mps = static_cast<double>(doppler_bin_signed) * kSpeedOfLight * config.scs_hz /
                  (2.0 * static_cast<double>(N) * config.fc_hz);
    return p;
}

std::vector<Detection> extract_peaks(const Rdm& rdm, const DetectorParams& params)
{
    params.validate();
    const std::size_t M = rdm.r.rows();
    const std::size_t N = rdm.r.cols();
    std::vector<double> mag(rdm.r.size());
    for (std::size_t i = 0; i < mag.size(); ++i) mag[i] = std::abs(rdm.r.values()[i]);

    const double peak = mag.empty() ? 0.0 : *std::max_element(mag.begin(), mag.end());
    const double threshold = std::max(params.threshold_factor * median_of(mag), kNumericalFloor * peak);

    std::vector<Detection> out;
    while (out.size() < params.max_targets) {
        std::size_t best = 0;
        for (std::size_t i = 1; i < mag.size(); ++i)
            if (mag[i] > mag[best]) best = i;
        if (mag.empty() || !(mag[best] > threshold)) break;

        const std::size_t m = best / N;
        const std::size_t n = best % N;
        Detection d;
        d.delay_bin = m;
        d.doppler_bin_signed = signed_doppler(n, N);
        const auto phys = bins_to_physical(static_cast<long>(m), d.doppler_bin_signed, rdm.config);
        d.range_m = phys.range_m;
        d.speed_mps = phys.speed_mps;
        d.peak_value = rdm.r(m, n);
        d.magnitude = std::abs(d.peak_value);
        out.push_back(d);

        const auto gm = static_cast<long long>(params.guard_delay);
        const auto gn = static_cast<long long>(params.guard_doppler);
        for (long long dm = -gm; dm <= gm; ++dm)
            for (long long dn = -gn; dn <= gn; ++dn) {
                const std::size_t mm = wrap_index(static_cast<long long>(m) + dm, M);
                const std::size_t nn = wrap_index(static_cast<long long>(n) + dn, N);
                mag[mm * N + nn] = 0.0;
            }
    }
    return out;
}

std::vector<Detection> detect(const DDGrid& y, const DDGrid& x, const DetectorParams& params)
{
    return extract_peaks(range_doppler_map(y, x, params), params);
}

FaorDetector::FaorDetector(const DDGrid& x, DetectorParams params)
    : config_(x.config()), params_(std::move(params)), x_conj_(x.cells())
{
    require_domain(x, Domain::DelayDoppler, "FaorDetector");
    params_.validate();
    s_data_ = checked_rows(params_.s_data, config_.m_bins);
    fft::dft2_unitary(x_conj_, fft::Direction::Forward);
    for (auto& v : x_conj_.values()) v = std::conj(v);
}

Rdm FaorDetector::rdm(const DDGrid& y) const
{
    require_domain(y, Domain::DelayDoppler, "FaorDetector::rdm");
    if (!(y.config() == config_)) raise(ErrorKind::Dimension, "FaorDetector::rdm: received grid does not match the frame");
    ComplexMatrix d = y.cells();
    fft::dft2_unitary(d, fft::Direction::Forward);
    for (std::size_t i = 0; i < d.size(); ++i) d.values()[i] *= x_conj_.values()[i];
    if (params_.cancel_si) subtract_data_row_mean(d, s_data_);
    fft::dft2_unitary(d, fft::Direction::Inverse);
    return {config_, std::move(d), params_.cancel_si};
}

std::vector<Detection> FaorDetector::detect(const DDGrid& y) const { return extract_peaks(rdm(y), params_); }

} // namespace otfsjrc
