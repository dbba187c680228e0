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

#include <optional>

#include "qslrtn/state.hpp"

namespace qslrtn {

/// Below this f(t) the decay rate is undefined (|D| has a corner where D crosses zero).
inline constexpr double kZeroFloor = 1e-12;
/// |g - 1| below which the coefficient pair (alpha, A) is reported as critical.
inline constexpr double kCriticalEps = 1e-6;

/// Physical knobs of the qubit + bistable fluctuator model.
///
/// The noise enters the Hamiltonian as -(Omega + lam * xi(t)) sigma_z / 2 with
/// xi switching between +1 and -1. Everything downstream depends on the
/// dimensionless coupling g = lam / gamma and on gamma * t.
struct RtnParams {
    double gamma = 1.0;     ///< switching rate, > 0
    double lam = 0.0;       ///< coupling, >= 0
    double delta_p0 = 0.0;  ///< initial fluctuator bias in [-1, 1]
    double omega = 0.0;     ///< qubit frequency
    double v = 0.0;         ///< extra phase parameter; enters only through omega + v/2

    /// Builds params from the dimensionless coupling; lam = g * gamma.
    static RtnParams from_g(double g, double delta_p0, double gamma = 1.0);

    double g() const noexcept { return lam / gamma; }
    /// Effective rotation rate of the transverse Bloch components.
    double phase_rate() const noexcept { return omega + 0.5 * v; }

    /// Throws Error{InvalidParams} on gamma <= 0, lam < 0, |delta_p0| > 1 or non-finite values.
    void validate() const;
};

enum class Regime { Markovian, Critical, NonMarkovian };

const char* to_string(Regime regime);

struct DecayCoefficients {
    cplx alpha;                  ///< sqrt(1 - g^2), principal branch
    std::optional<cplx> a_coef;  ///< (1 + alpha - i g dp0) / (2 alpha); empty when critical
    Regime regime = Regime::Markovian;
};

/// Coefficients of the two-exponential form of D(t). Near g = 1 the amplitude
/// diverges; the result is tagged Critical and a_coef is left empty.
DecayCoefficients decay_coefficients(const RtnParams& p);

/// Ensemble-averaged dephasing phase D(t), evaluated as
/// e^{-u} [cosh(alpha u) + (1 - i g dp0) sinh(alpha u) / alpha], u = gamma t / 2.
/// Throws Error{NegativeTime} for t < 0.
cplx complex_decay(const RtnParams& p, double t);

/// dD/dt in closed form.
cplx complex_decay_rate(const RtnParams& p, double t);

/// f(t) = |D(t)|.
double decay_factor(const RtnParams& p, double t);

/// f'(t) = Re(conj(D) D') / |D|; throws Error{KinkAtZero} where f <= kZeroFloor.
double decay_factor_rate(const RtnParams& p, double t);

/// Bloch vector at time t: transverse part rotated by phase_rate() * t and scaled by f(t).
BlochVector bloch_at(const RtnParams& p, const BlochVector& r0, double t);

struct BlochVelocity {
    double vx = 0.0;
    double vy = 0.0;
    double vz = 0.0;

    double norm() const noexcept;
};

/// Time derivative of bloch_at. Throws Error{KinkAtZero} where f <= kZeroFloor.
BlochVelocity bloch_velocity(const RtnParams& p, const BlochVector& r0, double t);

/// |dr/dt| = r_perp sqrt(f'^2 + w^2 f^2). Unlike bloch_velocity this never
/// throws at a zero of D: |f'| is continuous there and equals |D'|.
double transverse_speed(const RtnParams& p, double r_perp, double t);

/// J(omega) = lam^2 gamma / (2 (gamma^2 + omega^2)).
double spectral_density(const RtnParams& p, double omega_f);

}  // namespace qslrtn
