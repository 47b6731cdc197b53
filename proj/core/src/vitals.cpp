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

#include "otfsjrc/vitals.hpp"

#include "otfsjrc/fft.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace otfsjrc {

namespace {

// In-band spectral magnitudes (radians, 1/L normalized) at or below this are
// treated as an all-zero spectrum. Rounding residue of a constant phase
// trace sits many orders of magnitude lower than any physical motion.
constexpr double kNoSignalFloor = 1e-12;

double bin_frequency(std::size_t k, std::size_t len, double dwell)
{
    const double kd = 2 * k <= len ? static_cast<double>(k) : static_cast<double>(k) - static_cast<double>(len);
    return kd / (static_cast<double>(len) * dwell);
}

struct BandPeak {
    std::size_t bin = 0;
    double confidence = 0.0;
};

BandPeak pick_band_peak(const std::vector<double>& spectrum, const BandSpec& band, double dwell, const char* name)
{
    const std::size_t L = spectrum.size();
    const double denom = static_cast<double>(L) * dwell;
    BandPeak best{};
    double best_mag = -1.0;
    double total = 0.0;
    for (std::size_t k = 0; 2 * k <= L; ++k) {
        if (!band.contains(static_cast<double>(k) / denom)) continue;
        const double v = spectrum[k];
        total += v * v;
        if (v > best_mag) {
            best_mag = v;
            best.bin = k;
        }
    }
    if (!(best_mag > kNoSignalFloor)) raise(ErrorKind::NoSignal, std::string(name) + " band spectrum is zero");
    best.confidence = best_mag * best_mag / total;
    return best;
}

} // namespace

void PhaseTrace::validate() const
{
    if (phases_rad.size() < kMinTraceLength)
        raise(ErrorKind::InsufficientData, "phase trace has " + std::to_string(phases_rad.size()) + " samples, need >= " +
                                               std::to_string(kMinTraceLength));
    if (!(dwell_interval_s > 0.0)) raise(ErrorKind::Validation, "phase trace: dwell interval must be > 0");
}

void BandSpec::validate(double dwell_interval_s) const
{
    const double nyquist = 1.0 / (2.0 * dwell_interval_s);
    if (!(low_hz > 0.0 && low_hz < high_hz && high_hz < nyquist))
        raise(ErrorKind::Validation, "band [" + std::to_string(low_hz) + ", " + std::to_string(high_hz) +
                                         "] Hz must satisfy 0 < low < high < " + std::to_string(nyquist) + " Hz");
}

std::vector<double> unwrap_phase(std::span<const double> wrapped)
{
    std::vector<double> out(wrapped.begin(), wrapped.end());
    double offset = 0.0;
    for (std::size_t i = 1; i < out.size(); ++i) {
        const double d = wrapped[i] - wrapped[i - 1];
        offset -= kTwoPi * std::round(d / kTwoPi);
        out[i] = wrapped[i] + offset;
    }
    return out;
}

PhaseTrace trace_from_peaks(std::vector<cplx> peaks, double dwell_interval_s, BinIndex bin)
{
    std::vector<double> raw(peaks.size());
    for (std::size_t i = 0; i < peaks.size(); ++i) raw[i] = std::arg(peaks[i]);
    PhaseTrace trace;
    trace.phases_rad = unwrap_phase(raw);
    trace.dwell_interval_s = dwell_interval_s;
    trace.peak_bin = bin;
    trace.complex_peaks = std::move(peaks);
    trace.validate();

    const double mean = std::accumulate(trace.phases_rad.begin(), trace.phases_rad.end(), 0.0) /
                        static_cast<double>(trace.phases_rad.size());
    for (auto& p : trace.phases_rad) p -= mean;
    return trace;
}

PhaseTrace extract_phase_trace(std::span<const Rdm> rdms, double dwell_interval_s, const TrackOptions& opts)
{
    if (rdms.size() < kMinTraceLength)
        raise(ErrorKind::InsufficientData,
              "need >= " + std::to_string(kMinTraceLength) + " dwells, got " + std::to_string(rdms.size()));
    const auto& first = rdms.front();
    for (const auto& r : rdms)
        if (!(r.config == first.config) || r.r.rows() != first.r.rows() || r.r.cols() != first.r.cols())
            raise(ErrorKind::Dimension, "extract_phase_trace: dwell maps have different frame configurations");

    const std::size_t M = first.r.rows();
    const std::size_t N = first.r.cols();
    const BinIndex locked = opts.track_bin.value_or(argmax_bin(first));
    if (locked.delay >= M || locked.doppler >= N) raise(ErrorKind::Range, "extract_phase_trace: track bin outside the map");

    std::vector<cplx> peaks;
    peaks.reserve(rdms.size());
    for (const auto& rdm : rdms) {
        if (!opts.gate) {
            peaks.push_back(rdm.r(locked.delay, locked.doppler));
            continue;
        }
        cplx best = rdm.r(locked.delay, locked.doppler);
        for (long long dm = -1; dm <= 1; ++dm)
            for (long long dn = -1; dn <= 1; ++dn) {
                const cplx v = rdm.r(wrap_index(static_cast<long long>(locked.delay) + dm, M),
                                     wrap_index(static_cast<long long>(locked.doppler) + dn, N));
                if (std::abs(v) > std::abs(best)) best = v;
            }
        peaks.push_back(best);
    }
    return trace_from_peaks(std::move(peaks), dwell_interval_s, locked);
}

PhaseTrace bandpass(const PhaseTrace& trace, const BandSpec& band)
{
    trace.validate();
    band.validate(trace.dwell_interval_s);
    const std::size_t L1 = trace.size();
    std::vector<cplx> spec(trace.phases_rad.begin(), trace.phases_rad.end());
    fft::dft(spec, fft::Direction::Forward);
    for (std::size_t k = 0; k < L1; ++k)
        if (!band.contains(std::abs(bin_frequency(k, L1, trace.dwell_interval_s)))) spec[k] = 0.0;
    fft::dft(spec, fft::Direction::Inverse);

    PhaseTrace out = trace;
    const double inv = 1.0 / static_cast<double>(L1);
    for (std::size_t l = 0; l < L1; ++l) out.phases_rad[l] = spec[l].real() * inv;
    return out;
}

std::vector<double> band_spectrum(const PhaseTrace& trace, const BandSpec& band, std::size_t fft_size)
{
    if (fft_size < trace.size())
        raise(ErrorKind::Validation, "fft_size " + std::to_string(fft_size) + " is shorter than the trace (" +
                                         std::to_string(trace.size()) + ")");
    const auto filtered = bandpass(trace, band);
    std::vector<cplx> padded(fft_size, cplx{});
    std::copy(filtered.phases_rad.begin(), filtered.phases_rad.end(), padded.begin());
    fft::dft(padded, fft::Direction::Forward);
    std::vector<double> mag(fft_size);
    const double inv = 1.0 / static_cast<double>(fft_size);
    for (std::size_t k = 0; k < fft_size; ++k) mag[k] = std::abs(padded[k]) * inv;
    return mag;
}

VitalEstimate estimate_vitals(const PhaseTrace& trace, const BandSpec& br_band, const BandSpec& hb_band,
                              std::size_t fft_size)
{
    trace.validate();
    br_band.validate(trace.dwell_interval_s);
    hb_band.validate(trace.dwell_interval_s);
    if (!(br_band.high_hz < hb_band.low_hz || hb_band.high_hz < br_band.low_hz))
        raise(ErrorKind::Validation, "breathing and heartbeat bands overlap");

    const double dwell = trace.dwell_interval_s;
    const auto br = pick_band_peak(band_spectrum(trace, br_band, fft_size), br_band, dwell, "breathing");
    const auto hb = pick_band_peak(band_spectrum(trace, hb_band, fft_size), hb_band, dwell, "heartbeat");

    VitalEstimate est;
    est.fft_size = fft_size;
    est.dwell_interval_s = dwell;
    est.br_peak_index = br.bin;
    est.hb_peak_index = hb.bin;
    est.br_confidence = br.confidence;
    est.hb_confidence = hb.confidence;
    const double denom = static_cast<double>(fft_size) * dwell;
    est.f_br_hz = static_cast<double>(br.bin) / denom;
    est.f_hb_hz = static_cast<double>(hb.bin) / denom;
    return est;
}

} // namespace otfsjrc
