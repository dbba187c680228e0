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

#include "qslrtn/qsl.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <sstream>

#include "qslrtn/errors.hpp"

namespace qslrtn {
namespace {

void require_horizon(double tau) {
    if (!(tau > 0.0) || !std::isfinite(tau)) {
        std::ostringstream os;
        os << "time horizon must be positive and finite (got " << tau << ")";
        throw Error(ErrorKind::DomainError, os.str());
    }
}

// g > 1, theta = beta u: e^{2u} |D|^2 is quadratic in (cos theta, sin theta) and
//   d|D|^2/du ~ -sin(theta) (sin(theta) + x cos(theta)),  x = beta (1 - dp0^2) / (1 + dp0^2),
// so f peaks at theta = k pi and bottoms out at theta = j pi - atan(x). For
// dp0 = 0 the minima are zeros of D; at |dp0| = 1 the families merge and f is monotone.
std::vector<double> extrema_above_critical(const RtnParams& p, double tau) {
    const double g = p.g();
    const double beta = std::sqrt(g * g - 1.0);
    const double d2 = p.delta_p0 * p.delta_p0;
    const double x = beta * (1.0 - d2) / (1.0 + d2);
    if (!(x > 0.0)) {
        return {};
    }
    const double pi = std::numbers::pi;
    const double first_min = pi - std::atan(x);
    const double scale = 2.0 / (beta * p.gamma);
    std::vector<double> out;
    for (int k = 1;; ++k) {
        const double low = scale * (first_min + (k - 1) * pi);
        const double peak = scale * k * pi;
        if (low >= tau) {
            break;
        }
        out.push_back(low);
        if (peak < tau) {
            out.push_back(peak);
        }
    }
    return out;
}

}  // namespace

double purity_angle(const DensityMatrix& rho0, const DensityMatrix& rho_t) {
    const double ov = overlap(rho0, rho_t);
    const double p0 = purity(rho0);
    double x = ov / p0;
    if (x > 1.0 + 1e-9) {
        std::ostringstream os;
        os << "tr[rho0 rho_t] / tr[rho0^2] = " << x;
        throw Error(ErrorKind::OverlapExceedsPurity, os.str());
    }
    x = std::clamp(x, 0.0, 1.0);
    return std::acos(std::sqrt(x));
}

GeneratorNorms generator_norms_instant(const BlochVelocity& v) {
    const double speed = v.norm();
    return {0.5 * speed, speed, speed / std::numbers::sqrt2};
}

std::vector<double> kink_locations(const RtnParams& p, double tau) {
    require_horizon(tau);
    p.validate();
    // e^{2u} |D|^2 has no interior stationary point for g <= 1, whatever dp0.
    if (p.lam == 0.0 || p.g() <= 1.0) {
        return {};
    }
    return extrema_above_critical(p, tau);
}

GeneratorNorms averaged_norms(const RtnParams& p, const BlochVector& r0, double tau,
                              const QuadratureSettings& q) {
    require_horizon(tau);
    p.validate();
    const double r_perp = r0.perp();
    if (r_perp == 0.0 || (p.lam == 0.0 && p.phase_rate() == 0.0)) {
        return {};
    }
    const auto kinks = kink_locations(p, tau);
    const auto result = integrate([&](double t) { return transverse_speed(p, r_perp, t); }, 0.0,
                                  tau, kinks, q);
    // Every instantaneous norm is a fixed multiple of |v|, so averaging the
    // speed and converting once is exact.
    return generator_norms_instant({result.value / tau, 0.0, 0.0});
}

QslResult qsl_time(const RtnParams& p, const BlochVector& r0, double tau,
                   const QuadratureSettings& q) {
    const auto norms = averaged_norms(p, r0, tau, q);
    if (norms.op == 0.0) {
        throw Error(ErrorKind::FrozenDynamics,
                    "generator vanishes on [0, tau]; the bound is 0/0 for this state");
    }
    const auto rho0 = make_state(r0);
    const auto r_tau = bloch_at(p, r0, tau);
    const auto rho_tau = make_state(r_tau);

    QslResult out;
    out.theta = purity_angle(rho0, rho_tau);
    out.lambda_op = norms.op;
    out.lambda_tr = norms.tr;
    out.lambda_hs = norms.hs;

    const double inv_op = 1.0 / norms.op;
    const double inv_tr = 1.0 / norms.tr;
    const double inv_hs = 1.0 / norms.hs;
    double inv_max = inv_op;
    out.bound_norm = NormKind::Operator;
    if (inv_tr > inv_max) {
        inv_max = inv_tr;
        out.bound_norm = NormKind::Trace;
    }
    if (inv_hs > inv_max) {
        inv_max = inv_hs;
        out.bound_norm = NormKind::HilbertSchmidt;
    }
    const double s = std::sin(out.theta);
    out.tau_qsl = inv_max * s * s * purity(rho0);
    out.ratio = out.tau_qsl / tau;

    // |r0|^2 - r0.r_tau with the frozen z component cancelled exactly.
    const double moved = r0.rx() * (r0.rx() - r_tau.rx()) + r0.ry() * (r0.ry() - r_tau.ry());
    out.tau_qsl_reduced = moved / norms.tr;
    return out;
}

}  // namespace qslrtn
