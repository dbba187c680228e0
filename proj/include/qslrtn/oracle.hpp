// Copyright 2026 The qsl-rtn Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "qslrtn/dephasing.hpp"

namespace qslrtn {

/// The closed-form decay runs on a clock twice as fast as the telegraph
/// process with flip rate gamma: D(t) = <exp(-i lam * integral_0^{t/2} xi)>.
/// Both oracles sample the process on its own clock and map t -> t / 2.
inline constexpr double kNoiseClock = 0.5;

/// Piecewise-constant telegraph path on [0, horizon], stored as flip epochs.
struct TelegraphPath {
    int initial = 1;
    std::vector<double> flips;
    double horizon = 0.0;

    int value_at(double s) const;
    /// integral_0^s xi(s') ds', exact.
    double integral_to(double s) const;
};

/// Counter-based stream seed for (base seed, trajectory index).
std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index);

/// xi(0) = +1 with probability (1 + dp0)/2; exponential waiting times at rate gamma.
TelegraphPath sample_trajectory(const RtnParams& p, double horizon, std::uint64_t seed);

struct McEstimate {
    std::vector<double> times;
    std::vector<cplx> mean;
    std::vector<double> std_error;  ///< sqrt(var_re + var_im) / sqrt(n)
    std::size_t n_traj = 0;
    std::uint64_t seed = 0;
};

/// Monte Carlo estimate of D on a grid of qubit times. Results do not depend
/// on the thread count. Throws Error{InvalidSpec} for n_traj < 1000.
McEstimate mc_decay(const RtnParams& p, std::span<const double> times, std::size_t n_traj,
                    std::uint64_t seed, unsigned threads = 0);

struct OdeSettings {
    double agreement = 1e-10;  ///< successive halvings must agree to this
    double min_step_gamma = 1e-12;  ///< StepUnderflow below min_step_gamma / gamma
};

/// D on a grid from RK4 integration of the conditional averages
///   m+' = -i lam m+ + gamma (m- - m+),  m-' = +i lam m- + gamma (m+ - m-),
/// m+(0) = (1 + dp0)/2, m-(0) = (1 - dp0)/2, D = m+ + m-, on the noise clock.
std::vector<cplx> ode_decay(const RtnParams& p, std::span<const double> times,
                            const OdeSettings& settings = {});

struct AutocorrelationPoint {
    double lag = 0.0;
    double mean = 0.0;
    double std_error = 0.0;
};

/// <xi(t0) xi(t0 + lag)> at equilibrium (dp0 forced to 0) after a burn-in t0 = 3/gamma.
/// Lags are on the noise clock.
std::vector<AutocorrelationPoint> mc_autocorrelation(const RtnParams& p,
                                                     std::span<const double> lags,
                                                     std::size_t n_traj, std::uint64_t seed,
                                                     unsigned threads = 0);

}  // namespace qslrtn
