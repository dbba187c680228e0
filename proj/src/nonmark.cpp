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

#include "qslrtn/nonmark.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "qslrtn/errors.hpp"
#include "qslrtn/qsl.hpp"

namespace qslrtn {

MonotoneSegments monotone_segments(const RtnParams& p, double horizon) {
    const auto kinks = kink_locations(p, horizon);
    std::vector<double> edges{0.0};
    edges.insert(edges.end(), kinks.begin(), kinks.end());
    edges.push_back(horizon);

    MonotoneSegments out;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const double a = edges[i];
        const double b = edges[i + 1];
        if (b <= a) {
            continue;
        }
        const Direction dir =
            decay_factor(p, b) > decay_factor(p, a) ? Direction::Rising : Direction::Falling;
        if (!out.empty() && out.back().direction == dir) {
            out.back().t_end = b;
        } else {
            out.push_back({a, b, dir});
        }
    }
    return out;
}

NonMarkResult n_coh(const RtnParams& p, const BlochVector& r0, double horizon) {
    const double c0 = coherence_l1(make_state(r0));
    NonMarkResult out;
    out.horizon = horizon;
    out.truncation_bound = c0 * std::exp(-0.5 * p.gamma * horizon);
    double rise = 0.0;
    for (const auto& seg : monotone_segments(p, horizon)) {
        if (seg.direction != Direction::Rising) {
            continue;
        }
        rise += decay_factor(p, seg.t_end) - decay_factor(p, seg.t_start);
        out.rising_intervals.push_back(seg);
    }
    out.n_coh = c0 * rise;
    return out;
}

double n_coh_closed_equilibrium(double g, double r_perp) {
    if (!(g > 1.0)) {
        std::ostringstream os;
        os << "closed-form backflow needs g > 1 (got " << g << ")";
        throw Error(ErrorKind::DomainError, os.str());
    }
    const double beta = std::sqrt(g * g - 1.0);
    // q / (1 - q) with q = e^{-pi/beta}
    return r_perp / std::expm1(std::numbers::pi / beta);
}

}  // namespace qslrtn
