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

#include "qslrtn/dephasing.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qslrtn/errors.hpp"

namespace qslrtn {
namespace {

void require_time(double t) {
    if (!(t >= 0.0)) {
        std::ostringstream os;
        os << "t = " << t;
        throw Error(ErrorKind::NegativeTime, os.str());
    }
}

// e^{-u} cosh(alpha u) and e^{-u} sinh(alpha u) / alpha with alpha^2 = kappa.
// Both are entire in kappa, so the same pair covers g < 1, g = 1 and g > 1.
struct Hyperbolic {
    double ec;
    double es;
};

Hyperbolic hyperbolic_pair(double kappa, double u) {
    const double z = kappa * u * u;
    if (std::abs(z) < 1e-2) {
        // cosh(alpha u) = sum z^n / (2n)!, sinh(alpha u)/alpha = u sum z^n / (2n+1)!
        double c = 1.0;
        double s = 1.0;
        double tc = 1.0;
        double ts = 1.0;
        for (int n = 1; n < 12; ++n) {
            tc *= z / ((2.0 * n - 1.0) * (2.0 * n));
            ts *= z / ((2.0 * n) * (2.0 * n + 1.0));
            c += tc;
            s += ts;
            if (std::abs(tc) < 1e-18 && std::abs(ts) < 1e-18) {
                break;
            }
        }
        const double e = std::exp(-u);
        return {e * c, e * u * s};
    }
    if (kappa < 0.0) {
        const double beta = std::sqrt(-kappa);
        const double e = std::exp(-u);
        return {e * std::cos(beta * u), e * std::sin(beta * u) / beta};
    }
    const double alpha = std::sqrt(kappa);
    if (alpha * u <= 1.0) {
        const double e = std::exp(-u);
        return {e * std::cosh(alpha * u), e * std::sinh(alpha * u) / alpha};
    }
    // Two-exponential form; 1 - alpha = g^2 / (1 + alpha) avoids cancellation at small g.
    const double slow = std::exp(-u * (1.0 - kappa) / (1.0 + alpha));
    const double fast = std::exp(-u * (1.0 + alpha));
    return {0.5 * (slow + fast), 0.5 * (slow - fast) / alpha};
}

struct DecayPair {
    cplx d;
    cplx rate;
};

DecayPair evaluate(const RtnParams& p, double t) {
    require_time(t);
    if (p.lam == 0.0) {
        return {cplx(1.0, 0.0), cplx(0.0, 0.0)};
    }
    const double g = p.g();
    const double kappa = 1.0 - g * g;
    const double u = 0.5 * p.gamma * t;
    const cplx c(1.0, -g * p.delta_p0);
    const auto [ec, es] = hyperbolic_pair(kappa, u);
    const cplx d = ec + c * es;
    // dD/du = e^{-u} [(c - 1) cosh + (kappa - c) sinh/alpha]
    const cplx rate = 0.5 * p.gamma * ((c - 1.0) * ec + (kappa - c) * es);
    return {d, rate};
}

}  // namespace

RtnParams RtnParams::from_g(double g, double delta_p0, double gamma) {
    RtnParams p;
    p.gamma = gamma;
    p.lam = g * gamma;
    p.delta_p0 = delta_p0;
    return p;
}

void RtnParams::validate() const {
    std::ostringstream os;
    if (!std::isfinite(gamma) || gamma <= 0.0) {
        os << "gamma must be > 0 (got " << gamma << ")";
    } else if (!std::isfinite(lam) || lam < 0.0) {
        os << "lambda must be >= 0 (got " << lam << ")";
    } else if (!std::isfinite(delta_p0) || std::abs(delta_p0) > 1.0) {
        os << "delta_p0 must lie in [-1, 1] (got " << delta_p0 << ")";
    } else if (!std::isfinite(omega) || !std::isfinite(v)) {
        os << "omega and v must be finite";
    } else {
        return;
    }
    throw Error(ErrorKind::InvalidParams, os.str());
}

const char* to_string(Regime regime) {
    switch (regime) {
    case Regime::Markovian: return "markovian";
    case Regime::Critical: return "critical";
    case Regime::NonMarkovian: return "non-markovian";
    }
    return "unknown";
}

DecayCoefficients decay_coefficients(const RtnParams& p) {
    const double g = p.g();
    DecayCoefficients out;
    out.alpha = std::sqrt(cplx(1.0 - g * g, 0.0));
    if (std::abs(g - 1.0) < kCriticalEps) {
        out.regime = Regime::Critical;
        return out;
    }
    out.regime = g < 1.0 ? Regime::Markovian : Regime::NonMarkovian;
    out.a_coef = (1.0 + out.alpha - cplx(0.0, g * p.delta_p0)) / (2.0 * out.alpha);
    return out;
}

cplx complex_decay(const RtnParams& p, double t) { return evaluate(p, t).d; }

cplx complex_decay_rate(const RtnParams& p, double t) { return evaluate(p, t).rate; }

double decay_factor(const RtnParams& p, double t) {
    return std::min(1.0, std::abs(complex_decay(p, t)));
}

double decay_factor_rate(const RtnParams& p, double t) {
    const auto [d, rate] = evaluate(p, t);
    const double f = std::abs(d);
    if (f <= kZeroFloor) {
        std::ostringstream os;
        os << "f(" << t << ") = " << f << " is at a coherence zero";
        throw Error(ErrorKind::KinkAtZero, os.str());
    }
    return (std::conj(d) * rate).real() / f;
}

BlochVector bloch_at(const RtnParams& p, const BlochVector& r0, double t) {
    const double f = decay_factor(p, t);
    const double theta = p.phase_rate() * t;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    return BlochVector(f * (r0.rx() * c + r0.ry() * s), f * (-r0.rx() * s + r0.ry() * c), r0.rz());
}

double BlochVelocity::norm() const noexcept { return std::sqrt(vx * vx + vy * vy + vz * vz); }

BlochVelocity bloch_velocity(const RtnParams& p, const BlochVector& r0, double t) {
    require_time(t);
    if (r0.perp() == 0.0) {
        return {};
    }
    const double f = decay_factor(p, t);
    const double fp = decay_factor_rate(p, t);
    const double w = p.phase_rate();
    const double theta = w * t;
    const double c = std::cos(theta);
    const double s = std::sin(theta);
    const double x = r0.rx() * c + r0.ry() * s;
    const double y = -r0.rx() * s + r0.ry() * c;
    return {fp * x + f * w * y, fp * y - f * w * x, 0.0};
}

double transverse_speed(const RtnParams& p, double r_perp, double t) {
    const auto [d, rate] = evaluate(p, t);
    const double f = std::abs(d);
    const double fp = f <= kZeroFloor ? std::abs(rate) : (std::conj(d) * rate).real() / f;
    const double w = p.phase_rate();
    return r_perp * std::sqrt(fp * fp + w * w * f * f);
}

double spectral_density(const RtnParams& p, double omega_f) {
    return p.lam * p.lam * p.gamma / (2.0 * (p.gamma * p.gamma + omega_f * omega_f));
}

}  // namespace qslrtn
