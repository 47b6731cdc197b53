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

#include <cmath>
#include <cstdint>
#include <random>
#include <string_view>

namespace otfsjrc {

/// SplitMix64 finalizer; used to decorrelate derived seeds.
constexpr std::uint64_t mix64(std::uint64_t z) noexcept
{
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

/// Seed for an indexed sub-stream (dwell l, trace i, ...). Serial and
/// parallel execution see the same stream for a given index.
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) noexcept
{
    return mix64(mix64(seed) ^ mix64(index + 0x632be59bd9b4e019ULL));
}

/// Seed for a named sub-stream ("frame", "noise", "dataset", ...).
constexpr std::uint64_t derive_seed(std::uint64_t seed, std::string_view name) noexcept
{
    std::uint64_t h = 0xcbf29ce484222325ULL; // FNV-1a
    for (char c : name) {
        h ^= static_cast<unsigned char>(c);
        h *= 0x100000001b3ULL;
    }
    return mix64(mix64(seed) ^ h);
}

using Rng = std::mt19937_64;

/// Circularly symmetric complex Gaussian source.
class GaussianSource {
public:
    explicit GaussianSource(std::uint64_t seed) : rng_(seed) {}

    /// One sample with E|z|^2 = variance.
    /// Marsaglia polar method: one complex sample per accepted point of the
    /// unit disk, 32 bits per coordinate from a single 64-bit draw.
    cplx operator()(double variance)
    {
        while (true) {
            const std::uint64_t bits = rng_();
            const double u = static_cast<double>(bits >> 32) * 0x1.0p-31 - 1.0;
            const double v = static_cast<double>(bits & 0xffffffffULL) * 0x1.0p-31 - 1.0;
            const double s = u * u + v * v;
            if (s > 0.0 && s < 1.0) {
                const double f = std::sqrt(-variance * std::log(s) / s);
                return {f * u, f * v};
            }
        }
    }

    double standard_normal() { return normal_(rng_); }
    Rng& engine() noexcept { return rng_; }

private:
    Rng rng_;
    std::normal_distribution<double> normal_{0.0, 1.0};
};

} // namespace otfsjrc
