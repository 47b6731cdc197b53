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


#include <catch2/catch_amalgamated.hpp>

#include "oracles.hpp"

#include <otfsjrc/channel.hpp>
#include <otfsjrc/faor.hpp>

#include <algorithm>
#include <cmath>
#include <limits>

using namespace otfsjrc;

namespace {

FrameConfig frame(std::size_t m, std::size_t n)
{
    FrameConfig f;
    f.m_bins = m;
    f.n_bins = n;
    return f;
}

DDGrid from_cells(const FrameConfig& f, ComplexMatrix c) { return DDGrid(f, Domain::DelayDoppler, std::move(c)); }

DetectorParams no_cancel()
{
    DetectorParams p;
    p.cancel_si = false;
    return p;
}

TargetSpec target(double l, double k, cplx h = 1.0)
{
    TargetSpec t;
    t.gain = h;
    t.delay_bins = l;
    t.doppler_bins = k;
    return t;
}

double max_mag(const ComplexMatrix& m)
{
    double v = 0.0;
    for (const auto& z : m.values()) v = std::max(v, std::abs(z));
    return v;
}

} // namespace

TEST_CASE("faor - Spectral product")
{
    const auto f = frame(8, 4);
    const auto x = generate_frame(f, SymbolAlphabet::qpsk(), 3);

    SECTION("matched input gives a real non-negative product")
    {
        const auto sp = spectral_product(x, x, {});
        for (const auto& v : sp.d.values()) {
            CHECK(std::abs(v.imag()) < 1e-12);
            CHECK(v.real() > -1e-12);
        }
        CHECK(sp.s_data == all_rows(8));
        CHECK_FALSE(sp.si_cancelled);
    }
    SECTION("zero input gives zero")
    {
        const auto sp = spectral_product(DDGrid(f, Domain::DelayDoppler), x, {});
        CHECK(energy(sp.d) == 0.0);
    }
    SECTION("shift theorem")
    {
        const long long l = 3;
        const long long k = 1;
        const auto y = from_cells(f, oracle::circular_shift(x.cells(), l, k));
        const auto sp = spectral_product(y, x, {});
        const auto xf = oracle::dft2(x.cells(), -1);
        for (std::size_t a = 0; a < 8; ++a)
            for (std::size_t b = 0; b < 4; ++b) {
                const cplx ref = std::norm(xf(a, b)) *
                                 oracle::expj(-2.0 * oracle::kPi *
                                              (static_cast<double>(a * l) / 8.0 + static_cast<double>(b * k) / 4.0));
                CHECK(std::abs(sp.d(a, b) - ref) < 1e-12);
            }
    }
    SECTION("data rows are sorted, deduplicated and range checked")
    {
        CHECK(spectral_product(x, x, {5, 1, 5, 2}).s_data == std::vector<std::size_t>{1, 2, 5});
        try {
            spectral_product(x, x, {1, 8});
            FAIL("row outside the frame accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Range);
        }
    }
}

TEST_CASE("faor - Self-interference cancellation")
{
    const std::size_t M = 16;
    const std::size_t N = 8;
    const auto f = frame(M, N);

    SECTION("column-constant product is removed")
    {
        ComplexMatrix d(M, N);
        for (std::size_t a = 0; a < M; ++a)
            for (std::size_t b = 0; b < N; ++b) d(a, b) = cplx(static_cast<double>(b) - 2.5, 0.3 * static_cast<double>(b));
        const auto out = cancel_self_interference({f, d, all_rows(M), false});
        CHECK(out.si_cancelled);
        CHECK(max_mag(out.d) < 1e-14);
    }
    SECTION("single cell")
    {
        ComplexMatrix d(M, N);
        d(4, 6) = 1.0;
        const auto out = cancel_self_interference({f, d, all_rows(M), false});
        for (std::size_t a = 0; a < M; ++a)
            for (std::size_t b = 0; b < N; ++b) {
                const double expect = b != 6 ? 0.0 : (a == 4 ? 1.0 - 1.0 / 16.0 : -1.0 / 16.0);
                CHECK(std::abs(out.d(a, b) - expect) < 1e-15);
            }
    }
    SECTION("mean over a subset of rows")
    {
        ComplexMatrix d(M, N);
        d(1, 0) = 3.0;
        d(2, 0) = 1.0;
        const auto out = cancel_self_interference({f, d, {1, 2}, false});
        CHECK(std::abs(out.d(1, 0) - 1.0) < 1e-15);
        CHECK(std::abs(out.d(2, 0) + 1.0) < 1e-15);
        CHECK(std::abs(out.d(9, 0) + 2.0) < 1e-15);
    }
    SECTION("zero-delay row of the map is emptied")
    {
        const auto x = generate_frame(f, SymbolAlphabet::qpsk(), 4);
        ChannelConfig cfg;
        cfg.targets = {target(0, 0, 30.0), target(5, 2, 0.5), target(9, -3, {0.0, 0.2})};
        cfg.noise_power = 0.01;
        cfg.seed = 8;
        const auto y = apply_dd_channel(x, cfg, 0);
        const auto rdm = range_doppler_map(y, x, DetectorParams{});
        CHECK(rdm.si_cancelled);
        const double peak = max_mag(rdm.r);
        for (std::size_t n = 0; n < N; ++n) CHECK(std::abs(rdm.r(0, n)) < 1e-12 * peak);
    }
    SECTION("idempotent")
    {
        const auto x = generate_frame(f, SymbolAlphabet::qpsk(), 5);
        const auto y = generate_frame(f, SymbolAlphabet::qpsk(), 6);
        const auto once = cancel_self_interference(spectral_product(y, x, {}));
        const auto twice = cancel_self_interference(once);
        CHECK(max_abs_diff(once.d, twice.d) < 1e-14);
    }
    SECTION("empty data-row set")
    {
        CHECK_THROWS_AS(cancel_self_interference({f, ComplexMatrix(M, N), {}, false}), Error);
    }
}

TEST_CASE("faor - Range-Doppler map")
{
    SECTION("zero product gives a zero map")
    {
        const auto f = frame(8, 4);
        const auto rdm = compute_rdm({f, ComplexMatrix(8, 4), all_rows(8), false});
        CHECK(energy(rdm.r) == 0.0);
    }
    SECTION("matches the direct cross-correlation")
    {
        for (auto [M, N] : {std::pair<std::size_t, std::size_t>{4, 4}, {8, 4}, {12, 6}, {16, 16}}) {
            const auto f = frame(M, N);
            const auto x = generate_frame(f, SymbolAlphabet::qpsk(), M + N);
            const auto y = generate_frame(f, SymbolAlphabet::custom({{0.3, -1.1}, {2.0, 0.5}, {-0.7, 0.0}}), M * N);
            const auto rdm = range_doppler_map(y, x, no_cancel());
            const auto ref = oracle::circular_xcorr(y.cells(), x.cells());
            const double s = 1.0 / std::sqrt(static_cast<double>(M * N));
            double err = 0.0;
            for (std::size_t i = 0; i < ref.size(); ++i)
                err = std::max(err, std::abs(rdm.r.values()[i] - s * ref.values()[i]));
            CHECK(err < 1e-8);
        }
    }
    SECTION("shifted echo peaks at its bin with the echo's phase")
    {
        const auto f = frame(32, 16);
        const auto x = generate_frame(f, SymbolAlphabet::qpsk(), 12);
        const cplx h = std::polar(0.7, oracle::kPi / 4.0);
        ComplexMatrix c = oracle::circular_shift(x.cells(), 5, 3);
        for (auto& v : c.values()) v *= h;
        const auto rdm = range_doppler_map(from_cells(f, c), x, no_cancel());
        CHECK(argmax_bin(rdm) == BinIndex{5, 3});
        // Unit-modulus symbols: R(5,3) = h * MN / sqrt(MN).
        CHECK(std::abs(rdm.r(5, 3) - h * std::sqrt(32.0 * 16.0)) < 1e-9);
        CHECK(std::abs(std::arg(rdm.r(5, 3)) - oracle::kPi / 4.0) < 1e-12);
    }
    SECTION("linear in the received grid")
    {
        const auto f = frame(16, 8);
        const auto x = generate_frame(f, SymbolAlphabet::qpsk(), 1);
        const auto y = generate_frame(f, SymbolAlphabet::qpsk(), 2);
        const cplx c{-0.4, 1.3};
        ComplexMatrix cy = y.cells();
        for (auto& v : cy.values()) v *= c;
        for (const bool cancel : {false, true}) {
            DetectorParams p;
            p.cancel_si = cancel;
            auto r1 = range_doppler_map(y, x, p).r;
            for (auto& v : r1.values()) v *= c;
            const auto r2 = range_doppler_map(from_cells(f, cy), x, p).r;
            CHECK(max_abs_diff(r1, r2) < 1e-12);
        }
    }
    SECTION("detector object matches the free functions")
    {
        const auto f = frame(16, 8);
        const auto x = generate_frame(f, SymbolAlphabet::qpsk(), 1);
        ChannelConfig cfg;
        cfg.targets = {target(0, 0, 10.0), target(6, 2)};
        cfg.noise_power = 0.05;
        const auto y = apply_dd_channel(x, cfg, 0);
        for (const bool cancel : {false, true}) {
            DetectorParams p;
            p.cancel_si = cancel;
            p.s_data = {1, 2, 3, 4, 5, 6, 7, 8};
            const FaorDetector det(x, p);
            CHECK(max_abs_diff(det.rdm(y).r, range_doppler_map(y, x, p).r) < 1e-12);
        }
    }
    SECTION("argmax takes the first maximum in row-major order")
    {
        const auto f = frame(4, 4);
        ComplexMatrix r(4, 4);
        CHECK(argmax_bin({f, r, false}) == BinIndex{0, 0});
        r(2, 1) = 1.0;
        r(3, 0) = -1.0;
        CHECK(argmax_bin({f, r, false}) == BinIndex{2, 1});
    }
}

TEST_CASE("faor - Detection")
{
    SECTION("single echo at moderate SNR")
    {
        const auto f = frame(64, 16);
        const auto x = generate_frame(f, SymbolAlphabet::qpsk(), 21);
        ChannelConfig cfg;
        cfg.targets = {target(10, 0)};
        cfg.noise_power = noise_power_for_snr(1.0, 20.0);
        cfg.seed = 3;
        const auto dets = detect(apply_dd_channel(x, cfg, 0), x, no_cancel());
        REQUIRE(dets.size() == 1);
        CHECK(dets[0].delay_bin == 10);
        CHECK(dets[0].doppler_bin_signed == 0);
    }
    SECTION("three echoes")
    {
        const auto f = frame(64, 16);
        const auto x = generate_frame(f, SymbolAlphabet::qpsk(), 22);
        ChannelConfig cfg;
        cfg.targets = {target(5, 1), target(12, -3, {0.0, 0.8}), target(20, 6, -0.6)};
        cfg.noise_power = 0.001;
        cfg.seed = 4;
        auto p = no_cancel();
        p.max_targets = 5;
        const auto dets = detect(apply_dd_channel(x, cfg, 0), x, p);
        REQUIRE(dets.size() >= 3);
        CHECK(dets.size() <= 5);
        std::vector<std::pair<std::size_t, long>> found;
        for (std::size_t i = 0; i < 3; ++i) found.emplace_back(dets[i].delay_bin, dets[i].doppler_bin_signed);
        std::sort(found.begin(), found.end());
        CHECK(found == std::vector<std::pair<std::size_t, long>>{{5, 1}, {12, -3}, {20, 6}});
        for (std::size_t i = 1; i < dets.size(); ++i) CHECK(dets[i].magnitude <= dets[i - 1].magnitude);
    }
    SECTION("leakage hides the echo until it is cancelled")
    {
        const auto f = frame(512, 128);
        const auto x = generate_frame(f, SymbolAlphabet::qpsk(), 11);
        ChannelConfig cfg;
        cfg.targets = {target(10, 2)};
        cfg.targets.push_back(self_interference_target(cfg, 30.0));
        const FaorDetector plain(x, no_cancel());
        const FaorDetector cancelling(x, DetectorParams{});
        const auto y = apply_dd_channel(x, cfg, 0);
        CHECK(argmax_bin(plain.rdm(y)).delay == 0);
        const auto dets = cancelling.detect(y);
        REQUIRE_FALSE(dets.empty());
        CHECK(dets[0].delay_bin == 10);
        CHECK(dets[0].doppler_bin_signed == 2);
    }
    SECTION("detections respect the cap and the threshold")
    {
        const auto f = frame(32, 16);
        for (std::uint64_t seed = 0; seed < 10; ++seed) {
            const auto x = generate_frame(f, SymbolAlphabet::qpsk(), seed);
            const auto y = generate_frame(f, SymbolAlphabet::qpsk(), seed + 100);
            for (std::size_t cap : {1u, 3u, 8u}) {
                auto p = no_cancel();
                p.max_targets = cap;
                p.threshold_factor = 1.5;
                const auto rdm = range_doppler_map(y, x, p);
                std::vector<double> mags;
                for (const auto& v : rdm.r.values()) mags.push_back(std::abs(v));
                std::sort(mags.begin(), mags.end());
                const double median = 0.5 * (mags[mags.size() / 2 - 1] + mags[mags.size() / 2]);
                const auto dets = extract_peaks(rdm, p);
                CHECK(dets.size() <= cap);
                for (const auto& d : dets) CHECK(d.magnitude > 1.5 * median);
            }
        }
    }
    SECTION("guard regions suppress neighbours, toroidally")
    {
        const auto f = frame(16, 8);
        ComplexMatrix r(16, 8);
        r(0, 0) = 10.0;
        r(15, 7) = 9.0; // neighbour across both edges
        r(8, 4) = 5.0;
        auto p = no_cancel();
        p.threshold_factor = 2.0;
        auto dets = extract_peaks({f, r, false}, p);
        REQUIRE(dets.size() == 2);
        CHECK(dets[1].delay_bin == 8);
        p.guard_delay = 0;
        p.guard_doppler = 0;
        dets = extract_peaks({f, r, false}, p);
        CHECK(dets.size() == 3);
    }
    SECTION("a zero map yields nothing")
    {
        const auto f = frame(16, 8);
        CHECK(extract_peaks({f, ComplexMatrix(16, 8), false}, DetectorParams{}).empty());
        const auto x = generate_frame(f, SymbolAlphabet::qpsk(), 1);
        CHECK(detect(DDGrid(f, Domain::DelayDoppler), x, DetectorParams{}).empty());
    }
    SECTION("frame mismatch")
    {
        const auto x = generate_frame(frame(16, 8), SymbolAlphabet::qpsk(), 1);
        const auto y = generate_frame(frame(16, 4), SymbolAlphabet::qpsk(), 1);
        try {
            detect(y, x, DetectorParams{});
            FAIL("mismatched frames accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Dimension);
        }
        const FaorDetector det(x, DetectorParams{});
        CHECK_THROWS_AS(det.rdm(y), Error);
        CHECK_THROWS_AS(det.rdm(modulate(x)), Error);
    }
}

TEST_CASE("faor - Bin conversion")
{
    CHECK(signed_doppler(0, 16) == 0);
    CHECK(signed_doppler(7, 16) == 7);
    CHECK(signed_doppler(8, 16) == -8);
    CHECK(signed_doppler(15, 16) == -1);
    CHECK(signed_doppler(2, 5) == 2);
    CHECK(signed_doppler(3, 5) == -2);

    FrameConfig f = frame(3333, 280);
    const auto p = bins_to_physical(10, -3, f);
    CHECK(p.range_m == Catch::Approx(10.0 * kSpeedOfLight / (2.0 * 3333.0 * 30e3)).epsilon(1e-14));
    CHECK(p.speed_mps == Catch::Approx(-3.0 * kSpeedOfLight * 30e3 / (2.0 * 280.0 * 29e9)).epsilon(1e-14));
    CHECK(bins_to_physical(2, 2, f).speed_mps == Catch::Approx(-bins_to_physical(2, -2, f).speed_mps).epsilon(1e-15));

    for (auto [l, k] : {std::pair<long, long>{-1, 0}, {3333, 0}, {0, 140}, {0, -141}}) {
        try {
            bins_to_physical(l, k, f);
            FAIL("out-of-range bin accepted");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::Range);
        }
    }
    CHECK_NOTHROW(bins_to_physical(3332, -140, f));
    CHECK_NOTHROW(bins_to_physical(0, 139, f));
}

TEST_CASE("faor - Parameter validation")
{
    DetectorParams p;
    CHECK_NOTHROW(p.validate());
    p.max_targets = 0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = DetectorParams{};
    p.threshold_factor = 1.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p.threshold_factor = std::nan("");
    CHECK_THROWS_AS(p.validate(), Error);
    p.threshold_factor = std::numeric_limits<double>::infinity();
    CHECK_THROWS_AS(p.validate(), Error);
}
