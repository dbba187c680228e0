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

#include <vector>

#include "qslrtn/dephasing.hpp"
#include "qslrtn/quadrature.hpp"
#include "qslrtn/state.hpp"

namespace qslrtn {

enum class NormKind { Operator, Trace, HilbertSchmidt };

struct GeneratorNorms {
    double op = 0.0;
    double tr = 0.0;
    double hs = 0.0;
};

struct QslResult {
    double theta = 0.0;      ///< relative-purity angle between rho_0 and rho_tau
    double lambda_op = 0.0;  ///< time-averaged operator norm of d(rho)/dt
    double lambda_tr = 0.0;
    double lambda_hs = 0.0;
    double tau_qsl = 0.0;
    double ratio = 0.0;              ///< tau_qsl / tau
    double tau_qsl_reduced = 0.0;    ///< same bound through the Bloch-vector reduction
    NormKind bound_norm = NormKind::Operator;  ///< which 1/Lambda attained the max
};

/// arccos sqrt(tr[rho0 rho_t] / tr[rho0^2]). Not symmetric: normalised by rho0.
/// Throws Error{OverlapExceedsPurity} if the ratio exceeds 1 + 1e-9.
double purity_angle(const DensityMatrix& rho0, const DensityMatrix& rho_t);

/// Norms of d(rho)/dt = v.sigma / 2 for a qubit: |v|/2, |v|, |v|/sqrt(2).
GeneratorNorms generator_norms_instant(const BlochVelocity& v);

/// Times in (0, tau) where f' changes sign or f reaches zero, in increasing order.
std::vector<double> kink_locations(const RtnParams& p, double tau);

/// (1/tau) * integral over [0, tau] of each generator norm.
GeneratorNorms averaged_norms(const RtnParams& p, const BlochVector& r0, double tau,
                              const QuadratureSettings& q = {});

/// Unified relative-purity bound
///   tau_qsl = max{1/L_op, 1/L_tr, 1/L_hs} sin^2(Theta) tr[rho0^2].
/// Throws Error{FrozenDynamics} if the state does not move (all norms zero).
QslResult qsl_time(const RtnParams& p, const BlochVector& r0, double tau,
                   const QuadratureSettings& q = {});

}  // namespace qslrtn
