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

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "oracles.hpp"
#include "qslrtn/dephasing.hpp"
#include "qslrtn/errors.hpp"

using namespace qslrtn;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::numbers::sqrt2;

double fd_rate(const RtnParams& p, double t, double h = 1e-5) {
    return (decay_factor(p, t + h) - decay_factor(p, t - h)) / (2.0 * h);
}

}  // namespace

TEST_CASE("decay coefficients") {
    const auto c0 = decay_coefficients(RtnParams::from_g(0.0, 0.0));
    CHECK(c0.regime == Regime::Markovian);
    CHECK(std::abs(c0.alpha - cplx(1.0)) == 0.0);
    CHECK(std::abs(*c0.a_coef - cplx(1.0)) == 0.0);

    const auto c1 = decay_coefficients(RtnParams::from_g(kSqrt2, 0.0));
    CHECK(c1.regime == Regime::NonMarkovian);
    CHECK(std::abs(c1.alpha - cplx(0.0, 1.0)) < 1e-15);
    CHECK(std::abs(*c1.a_coef - cplx(0.5, -0.5)) < 1e-15);

    const auto c2 = decay_coefficients(RtnParams::from_g(2.0, 1.0));
    const cplx i3(0.0, std::sqrt(3.0));
    CHECK(std::abs(c2.alpha - i3) < 1e-15);
    CHECK(std::abs(*c2.a_coef - (1.0 + i3 - cplx(0.0, 2.0)) / (2.0 * i3)) < 1e-15);

    const auto crit = decay_coefficients(RtnParams::from_g(1.0 + 1e-7, 0.0));
    CHECK(crit.regime == Regime::Critical);
    CHECK_FALSE(crit.a_coef.has_value());
    CHECK(decay_coefficients(RtnParams::from_g(1.0 + 2e-6, 0.0)).regime == Regime::NonMarkovian);
}

TEST_CASE("RtnParams validation") {
    RtnParams p;
    p.gamma = 0.0;
    CHECK_THROWS_AS(p.validate(), Error);
    p = RtnParams::from_g(1.0, 1.5);
    CHECK_THROWS_AS(p.validate(), Error);
    p = RtnParams::from_g(-1.0, 0.0);
    CHECK_THROWS_AS(p.validate(), Error);
    CHECK_NOTHROW(RtnParams::from_g(3.0, -1.0, 2.0).validate());
    CHECK(RtnParams::from_g(3.0, 0.0, 2.0).lam == 6.0);
}

TEST_CASE("complex_decay examples") {
    CHECK(complex_decay(RtnParams::from_g(4.0, 0.3), 0.0) == cplx(1.0, 0.0));
    for (double t : {0.0, 0.7, 5.0, 300.0}) {
        CHECK(complex_decay(RtnParams::from_g(0.0, 1.0), t) == cplx(1.0, 0.0));
    }
    // g = sqrt 2: D = e^{-u/2}(cos(u/2) + sin(u/2)) at u = pi/2
    const cplx d = complex_decay(RtnParams::from_g(kSqrt2, 0.0), kPi / 2.0);
    CHECK(d.real() == Approx(kSqrt2 * std::exp(-kPi / 4.0)).epsilon(1e-13));
    CHECK(d.real() == Approx(0.644794).epsilon(1e-6));
    CHECK(d.imag() == 0.0);
    // Critical limit e^{-u}(1 + u) at u = 1
    CHECK(complex_decay(RtnParams::from_g(1.0, 0.0), 2.0).real() ==
          Approx(2.0 * std::exp(-1.0)).epsilon(1e-14));
    CHECK_THROWS_AS(complex_decay(RtnParams::from_g(1.0, 0.0), -1e-3), Error);
}

TEST_CASE("hyperbolic and two-exponential forms agree") {
    for (double g : {0.05, 0.2, 0.4, 0.9, 1.1, kSqrt2, 4.0, 8.0}) {
        for (double dp0 : {0.0, 1.0, -1.0, 0.5}) {
            for (double gt : {0.1, 1.0, 3.3, 10.0, 25.0}) {
                const auto p = RtnParams::from_g(g, dp0, 1.7);
                const cplx ref = oracle::two_exponential_decay(g, dp0, 1.7, gt / 1.7);
                CHECK(std::abs(complex_decay(p, gt / 1.7) - ref) < 1e-12);
            }
        }
    }
}

TEST_CASE("critical limit form and continuity across g = 1") {
    for (double dp0 : {0.0, 1.0, 0.5}) {
        for (double gt = 0.0; gt <= 10.0; gt += 0.25) {
            const double u = gt / 2.0;
            const cplx limit = std::exp(-u) * (1.0 + cplx(1.0, -dp0) * u);
            CHECK(std::abs(complex_decay(RtnParams::from_g(1.0, dp0), gt) - limit) < 1e-14);
            for (double g : {1.0 - 1e-6, 1.0 + 1e-6, 1.0 - 3e-7, 1.0 + 3e-7}) {
                CHECK(std::abs(complex_decay(RtnParams::from_g(g, dp0), gt) - limit) <= 1e-5);
            }
        }
    }
}

TEST_CASE("complex_decay_rate matches central differences") {
    CHECK(complex_decay_rate(RtnParams::from_g(0.0, 0.0), 3.0) == cplx(0.0, 0.0));
    for (double g : {0.2, 0.4, 1.0, kSqrt2, 4.0, 8.0}) {
        for (double dp0 : {0.0, 1.0, 0.5}) {
            const auto p = RtnParams::from_g(g, dp0, 0.8);
            for (double gt : {0.5, 1.0, 3.0}) {
                const double t = gt / p.gamma;
                const double h = 1e-5;
                const cplx fd = (complex_decay(p, t + h) - complex_decay(p, t - h)) / (2.0 * h);
                const cplx an = complex_decay_rate(p, t);
                CHECK(std::abs(an - fd) <= 1e-6 * std::max(std::abs(an), 1e-3));
            }
            // t = 0+: one-sided difference; D'(0) = -i lam dp0 / 2
            const double h = 1e-7;
            const cplx fd0 = (complex_decay(p, h) - complex_decay(p, 0.0)) / h;
            const cplx an0 = complex_decay_rate(p, 0.0);
            CHECK(std::abs(an0 - cplx(0.0, -0.5 * p.lam * dp0)) < 1e-15);
            CHECK(std::abs(an0 - fd0) < 1e-5);
        }
    }
}

TEST_CASE("decay factor first zero at g = 4") {
    const auto p = RtnParams::from_g(4.0, 0.0);
    const double beta = std::sqrt(15.0);
    const double analytic = (2.0 / beta) * (kPi - std::atan(beta));
    CHECK(analytic == Approx(0.9417).epsilon(1e-4));
    const double root =
        oracle::bisect([&](double t) { return complex_decay(p, t).real(); }, 0.5, 1.2);
    CHECK(std::abs(root - analytic) < 1e-12);
    CHECK(decay_factor(p, analytic) < 1e-14);
    CHECK_THROWS_AS(decay_factor_rate(p, root), Error);
    try {
        decay_factor_rate(p, analytic);
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::KinkAtZero);
    }
}

TEST_CASE("Markovian equilibrium decay is strictly decreasing") {
    const auto p = RtnParams::from_g(0.4, 0.0);
    double prev = decay_factor(p, 0.0);
    CHECK(prev == 1.0);
    for (int i = 1; i <= 10000; ++i) {
        const double f = decay_factor(p, 20.0 * i / 10000.0);
        CHECK(f < prev);
        prev = f;
    }
}

TEST_CASE("decay factor rate matches finite differences away from zeros") {
    for (double g : {0.4, 2.0, 4.0}) {
        for (double dp0 : {0.0, 1.0, 0.5}) {
            const auto p = RtnParams::from_g(g, dp0);
            for (double t : {0.3, 0.77, 2.1, 4.4}) {
                if (decay_factor(p, t) < 1e-3) {
                    continue;
                }
                CHECK(decay_factor_rate(p, t) ==
                      Approx(fd_rate(p, t)).epsilon(1e-6).scale(1e-3));
            }
        }
    }
}

TEST_CASE("bloch_at examples") {
    const BlochVector r0(0.5, 0.5, 0.5);
    auto p = RtnParams::from_g(kSqrt2, 0.0);
    CHECK(bloch_at(p, r0, 0.0) == r0);
    const auto r = bloch_at(p, r0, kPi / 2.0);
    const double f = kSqrt2 * std::exp(-kPi / 4.0);
    CHECK(r.rx() == Approx(0.5 * f).epsilon(1e-13));
    CHECK(r.ry() == Approx(0.5 * f).epsilon(1e-13));
    CHECK(r.rz() == 0.5);

    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.0, 5.0);
    for (int i = 0; i < 200; ++i) {
        const auto [x, y, z] = oracle::random_in_ball(rng);
        RtnParams q = RtnParams::from_g(u(rng), 2.0 * u(rng) / 5.0 - 1.0);
        q.omega = u(rng) - 2.5;
        q.v = u(rng);
        const auto rt = bloch_at(q, BlochVector(x, y, z), u(rng));
        CHECK(rt.rz() == z);
    }
    CHECK_THROWS_AS(bloch_at(p, r0, -1.0), Error);
}

TEST_CASE("bloch_at follows the rotation sign convention") {
    RtnParams p;
    p.omega = 1.0;
    p.v = 0.5;  // w = 1.25
    const double theta = 1.25 * 0.9;
    const auto r = bloch_at(p, BlochVector(0.6, 0.0, 0.1), 0.9);
    CHECK(r.rx() == Approx(0.6 * std::cos(theta)));
    CHECK(r.ry() == Approx(-0.6 * std::sin(theta)));
}

TEST_CASE("bloch_velocity") {
    const auto p = RtnParams::from_g(3.0, 0.5);
    const auto zero = bloch_velocity(p, BlochVector(0.0, 0.0, 0.7), 1.0);
    CHECK(zero.norm() == 0.0);

    const BlochVector r0(0.3, -0.4, 0.2);
    for (double t : {0.2, 1.3, 2.9}) {
        const auto v = bloch_velocity(p, r0, t);
        CHECK(v.vz == 0.0);
        CHECK(v.norm() == Approx(r0.perp() * std::abs(decay_factor_rate(p, t))).epsilon(1e-14));
    }

    std::mt19937_64 rng(17);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 100; ++i) {
        RtnParams q = RtnParams::from_g(6.0 * u(rng), 2.0 * u(rng) - 1.0, 0.5 + u(rng));
        q.omega = 4.0 * u(rng) - 2.0;
        const auto [x, y, z] = oracle::random_in_ball(rng);
        const BlochVector r(x, y, z);
        const double t = 0.1 + 3.0 * u(rng);
        if (decay_factor(q, t) < 1e-3) {
            continue;
        }
        const double h = 1e-5;
        const auto a = bloch_at(q, r, t + h);
        const auto b = bloch_at(q, r, t - h);
        const auto v = bloch_velocity(q, r, t);
        const double fdx = (a.rx() - b.rx()) / (2 * h);
        const double fdy = (a.ry() - b.ry()) / (2 * h);
        const double scale = std::max(v.norm(), 1e-3);
        CHECK(std::abs(v.vx - fdx) <= 1e-6 * scale);
        CHECK(std::abs(v.vy - fdy) <= 1e-6 * scale);
        CHECK(v.norm() == Approx(transverse_speed(q, r.perp(), t)).epsilon(1e-12));
    }
}

TEST_CASE("spectral density") {
    auto p = RtnParams::from_g(2.0, 0.0, 3.0);  // lam = 6
    CHECK(spectral_density(p, 0.0) == Approx(36.0 / 6.0));
    CHECK(spectral_density(p, 3.0) == Approx(36.0 / 12.0));
    for (double w : {0.1, 1.0, 7.5, 100.0}) {
        CHECK(spectral_density(p, w) == spectral_density(p, -w));
    }
}

TEST_CASE("decay function invariants") {
    for (double g : {0.0, 0.2, 0.4, 1.0, kSqrt2, 4.0, 8.0}) {
        for (double dp0 : {0.0, 1.0, -1.0, 0.5}) {
            const auto p = RtnParams::from_g(g, dp0);
            CHECK(std::abs(complex_decay(p, 0.0) - 1.0) <= 1e-14);
            for (int i = 0; i <= 2000; ++i) {
                const double t = 40.0 * i / 2000.0;
                const cplx d = complex_decay(p, t);
                CHECK(std::abs(d) <= 1.0 + 1e-12);
                if (dp0 == 0.0) {
                    CHECK(std::abs(d.imag()) <= 1e-12);
                }
                if (g == 0.0) {
                    CHECK(std::abs(std::abs(d) - 1.0) <= 1e-12);
                }
            }
        }
    }
}

TEST_CASE("equilibrium revival structure for g > 1") {
    for (double g : {1.1, kSqrt2, 2.0, 4.0, 8.0}) {
        const auto p = RtnParams::from_g(g, 0.0);
        const double beta = std::sqrt(g * g - 1.0);
        for (int k = 1; k <= 4; ++k) {
            const double peak = 2.0 * k * kPi / beta;
            CHECK(decay_factor(p, peak) == Approx(std::exp(-k * kPi / beta)).epsilon(1e-12));
            // f' changes sign across the peak; locate it by root-finding on Re(conj(D) D').
            auto slope = [&](double t) {
                return (std::conj(complex_decay(p, t)) * complex_decay_rate(p, t)).real();
            };
            const double found = oracle::bisect(slope, peak - 0.3 / beta, peak + 0.3 / beta);
            CHECK(std::abs(found - peak) < 1e-9);
            // zeros interleave: one zero of Re D between consecutive peaks
            const double prev_peak = 2.0 * (k - 1) * kPi / beta;
            const double zero = 2.0 * (kPi - std::atan(beta) + (k - 1) * kPi) / beta;
            CHECK(zero > prev_peak);
            CHECK(zero < peak);
            const double root = oracle::bisect(
                [&](double t) { return complex_decay(p, t).real(); }, prev_peak + 1e-9, peak);
            CHECK(std::abs(root - zero) < 1e-9);
        }
    }
}

TEST_CASE("non-equilibrium decay is non-increasing") {
    for (double g : {1.5, 2.0, 4.0, 8.0}) {
        for (double dp0 : {1.0, -1.0}) {
            const auto p = RtnParams::from_g(g, dp0, 1.3);
            const double beta = std::sqrt(g * g - 1.0);
            double prev = 1.0;
            for (int i = 1; i <= 20000; ++i) {
                const double t = 20.0 * i / 20000.0;
                const cplx d = complex_decay(p, t);
                const double lhs = 2.0 * (std::conj(d) * complex_decay_rate(p, t)).real();
                const double rhs = g * g / (beta * beta) * p.gamma * std::exp(-p.gamma * t) *
                                   (std::cos(beta * p.gamma * t) - 1.0);
                CHECK(std::abs(lhs - rhs) <= 1e-12);
                const double f = std::abs(d);
                CHECK(f <= prev + 1e-15);
                prev = f;
            }
        }
    }
}
