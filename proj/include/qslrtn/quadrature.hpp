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

#include <functional>
#include <span>

namespace qslrtn {

struct QuadratureSettings {
    double rel_tol = 1e-9;
    double abs_tol = 1e-12;
    int max_panel_depth = 40;
    bool kink_pre_split = true;

    /// Throws Error{InvalidSpec} on non-positive tolerances or depth.
    void validate() const;
};

struct QuadratureResult {
    double value = 0.0;
    double error_estimate = 0.0;
    int panels = 0;
};

/// Adaptive 15-point Gauss-Kronrod integration of fn over [a, b].
///
/// The interval is first cut at every point of `breaks` that falls strictly
/// inside (a, b); each piece is then bisected until the Kronrod/Gauss
/// difference meets its share of max(abs_tol, rel_tol * |I|). The integrand
/// is never evaluated at a panel endpoint. Throws
/// Error{QuadratureNotConverged} when a panel still fails at max depth.
QuadratureResult integrate(const std::function<double(double)>& fn, double a, double b,
                           std::span<const double> breaks, const QuadratureSettings& settings);

}  // namespace qslrtn
