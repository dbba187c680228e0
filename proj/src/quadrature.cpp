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

#include "qslrtn/quadrature.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <sstream>
#include <vector>

#include "qslrtn/errors.hpp"

namespace qslrtn {
namespace {

// Kronrod abscissae on [0, 1]; odd indices are the embedded Gauss-7 nodes.
constexpr std::array<double, 8> kXgk = {
    0.991455371120812639206854697526329, 0.949107912342758524526189684047851,
    0.864864423359769072789712788640926, 0.741531185599394439863864773280788,
    0.586087235467691130294144845693013, 0.405845151377397166906606412076961,
    0.207784955007898467600689403773245, 0.000000000000000000000000000000000};
constexpr std::array<double, 8> kWgk = {
    0.022935322010529224963732008058970, 0.063092092629978553290700663189204,
    0.104790010322250183839876322541518, 0.140653259715525918745189590510238,
    0.169004726639267902826583426598550, 0.190350578064785409913256402421014,
    0.204432940075298892414161999234649, 0.209482141084727828012999174891714};
constexpr std::array<double, 4> kWg = {
    0.129484966168869693270611432679082, 0.279705391489276667901467771423780,
    0.381830050505118944678204445963391, 0.417959183673469387755102040816327};

struct Panel {
    double kronrod;
    double error;
};

Panel gauss_kronrod(const std::function<double(double)>& fn, double a, double b) {
    const double center = 0.5 * (a + b);
    const double half = 0.5 * (b - a);
    const double fc = fn(center);
    double k = fc * kWgk[7];
    double g = fc * kWg[3];
    for (int j = 0; j < 7; ++j) {
        const double dx = half * kXgk[j];
        const double sum = fn(center - dx) + fn(center + dx);
        k += kWgk[j] * sum;
        if (j % 2 == 1) {
            g += kWg[j / 2] * sum;
        }
    }
    return {k * half, std::abs((k - g) * half)};
}

class Integrator {
public:
    Integrator(const std::function<double(double)>& fn, const QuadratureSettings& s,
               double total_length)
        : fn_(fn), settings_(s), total_length_(total_length) {}

    void set_target(double target) { target_ = target; }

    QuadratureResult run(double a, double b, int depth) {
        const Panel p = gauss_kronrod(fn_, a, b);
        const double share = target_ * (b - a) / total_length_;
        if (p.error <= share || p.error <= 1e-15 * std::abs(p.kronrod)) {
            return {p.kronrod, p.error, 1};
        }
        if (depth >= settings_.max_panel_depth) {
            std::ostringstream os;
            os << "panel [" << a << ", " << b << "] error " << p.error << " above " << share
               << " at depth " << depth;
            throw Error(ErrorKind::QuadratureNotConverged, os.str());
        }
        const double mid = 0.5 * (a + b);
        const auto left = run(a, mid, depth + 1);
        const auto right = run(mid, b, depth + 1);
        return {left.value + right.value, left.error_estimate + right.error_estimate,
                left.panels + right.panels};
    }

private:
    const std::function<double(double)>& fn_;
    const QuadratureSettings& settings_;
    double total_length_;
    double target_ = 0.0;
};

}  // namespace

void QuadratureSettings::validate() const {
    if (!(rel_tol > 0.0) || !(abs_tol > 0.0) || max_panel_depth <= 0) {
        throw Error(ErrorKind::InvalidSpec, "quadrature tolerances and depth must be positive");
    }
}

QuadratureResult integrate(const std::function<double(double)>& fn, double a, double b,
                           std::span<const double> breaks, const QuadratureSettings& settings) {
    settings.validate();
    if (b <= a) {
        return {};
    }
    std::vector<double> edges{a};
    if (settings.kink_pre_split) {
        std::vector<double> inner;
        for (double x : breaks) {
            if (x > a && x < b) {
                inner.push_back(x);
            }
        }
        std::sort(inner.begin(), inner.end());
        for (double x : inner) {
            if (x > edges.back()) {
                edges.push_back(x);
            }
        }
    }
    edges.push_back(b);

    // One coarse pass fixes the absolute target for the adaptive pass.
    double rough = 0.0;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        rough += std::abs(gauss_kronrod(fn, edges[i], edges[i + 1]).kronrod);
    }
    Integrator integrator(fn, settings, b - a);
    integrator.set_target(std::max(settings.abs_tol, settings.rel_tol * rough));

    QuadratureResult total;
    for (std::size_t i = 0; i + 1 < edges.size(); ++i) {
        const auto piece = integrator.run(edges[i], edges[i + 1], 0);
        total.value += piece.value;
        total.error_estimate += piece.error_estimate;
        total.panels += piece.panels;
    }
    return total;
}

}  // namespace qslrtn
