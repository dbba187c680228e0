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
#include "qslrtn/state.hpp"

namespace qslrtn {

enum class Direction { Rising, Falling };

struct Segment {
    double t_start = 0.0;
    double t_end = 0.0;
    Direction direction = Direction::Falling;
};

/// Ordered pieces of [0, T] on which f (and hence the l1 coherence) is
/// monotone. Pieces abut and alternate in direction; a constant f counts as falling.
using MonotoneSegments = std::vector<Segment>;

struct NonMarkResult {
    double n_coh = 0.0;
    MonotoneSegments rising_intervals;
    double horizon = 0.0;
    double truncation_bound = 0.0;  ///< C(rho0) e^{-gamma T / 2}, bound on the neglected tail
};

MonotoneSegments monotone_segments(const RtnParams& p, double horizon);

/// Total coherence backflow over [0, T]: sum of the increases of C(rho_t) on
/// rising pieces. Exact telescoping, no differentiation.
NonMarkResult n_coh(const RtnParams& p, const BlochVector& r0, double horizon);

/// Infinite-horizon backflow for g > 1 at equilibrium (dp0 = 0):
/// r_perp e^{-pi/beta} / (1 - e^{-pi/beta}), beta = sqrt(g^2 - 1).
/// Throws Error{DomainError} for g <= 1.
double n_coh_closed_equilibrium(double g, double r_perp);

}  // namespace qslrtn
