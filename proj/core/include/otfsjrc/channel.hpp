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

#include <cstdint>
#include <optional>
#include <vector>

namespace otfsjrc {

/*
 * Radial chest-wall (or body) displacement about a base range:
 *
 *   x(t) = A_br sin(2 pi f_br t + phi_br) + A_hb sin(2 pi f_hb t + phi_hb) + v t
 *
 * The linear term v is zero for a seated person and lets the same model
 * describe a target drifting at constant radial velocity.
 */
struct VitalMotion {
    double base_range_m = 1.2;
    double breath_rate_hz = 0.25;
    double breath_amp_m = 0.005;
    double heart_rate_hz = 1.2;
    double heart_amp_m = 0.0003;
    double breath_phase_rad = 0.0;
    double heart_phase_rad = 0.0;
    double radial_velocity_mps = 0.0;

    void validate() const;
    double displacement(double t) const noexcept;
};

struct TargetSpec {
    cplx gain{1.0, 0.0};
    double delay_bins = 0.0;   // l_p = tau_p / T_s
    double doppler_bins = 0.0; // k_p = N f_p / scs, signed
    std::optional<VitalMotion> vitals;
    bool is_self_interference = false;

    void validate() const;
};

struct ChannelConfig {
    std::vector<TargetSpec> targets;
    double noise_power = 0.0; // variance of the complex noise per cell
    double dwell_interval_s = 0.06;
    std::uint64_t seed = 0;

    void validate() const;
};

/// Zero-delay, zero-Doppler leakage target whose amplitude sits
/// si_over_target_db above the strongest non-SI target.
TargetSpec self_interference_target(const ChannelConfig& cfg, double si_over_target_db);

/// Noise variance giving a per-cell SNR of snr_db for a unit-energy
/// constellation reflected with gain |h|.
double noise_power_for_snr(double target_gain_abs, double snr_db) noexcept;

/// h_p including the round-trip carrier phase exp(-j 4 pi f_c (r + x(t)) / c)
/// for targets with motion; h_p unchanged otherwise.
cplx effective_gain(const TargetSpec& target, double fc_hz, double t) noexcept;

/// Per-dwell noise seed.
std::uint64_t dwell_seed(std::uint64_t seed, std::size_t dwell_index) noexcept;

/// Grid-model receiver: on-grid targets applied directly in the
/// delay-Doppler domain, including the quasi-periodic boundary factor for
/// cells that precede the target delay.
DDGrid apply_dd_channel(const DDGrid& x, const ChannelConfig& cfg, std::size_t dwell_index);

/// Serialized-stream receiver for fractional delays/Dopplers. The delay-time
/// grid is read as M*N samples (symbol-major) at rate M*scs, Doppler-rotated,
/// circularly delayed by a frequency-domain linear phase, summed over
/// targets, and returned as a delay-time grid.
DDGrid apply_dt_channel(const DDGrid& x_dt, const ChannelConfig& cfg, std::size_t dwell_index);

/// L1 received grids for dwells 0..L1-1. Dispatches on x's domain:
/// delay-Doppler input uses the grid model, delay-time input the stream model.
std::vector<DDGrid> simulate_dwells(const DDGrid& x, const ChannelConfig& cfg, std::size_t num_dwells);

} // namespace otfsjrc
