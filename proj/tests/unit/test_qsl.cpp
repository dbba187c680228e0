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
#include "qslrtn/errors.hpp"
#include "qslrtn/qsl.hpp"

using namespace qslrtn;
using doctest::Approx;

namespace {

constexpr double kPi = std::numbers::pi;
const double kSqrt2 = std::numbers::sqrt2;
const BlochVector kHalf(0.5, 0.5, 0.5);

// Independent scipy quadrature of tau r_perp (1 - f(tau)) / integral |f'| for
// g = 4, dp0 = 0, gamma tau = 5, r = (0.5, 0.5, 0.5).
constexpr double kGoldenStrong = 1.3628689351672327;

}  // namespace

TEST_CASE("purity_angle examples") {
    const auto rho0 = make_state(kHalf);
    CHECK(purity_angle(rho0, rho0) == 0.0);
    CHECK(purity_angle(make_state(BlochVector(0, 0, 1)), make_state(BlochVector(0, 0, -1))) ==
          Approx(kPi / 2));

    const double f = 0.644773;
    const auto rho_t = make_state(BlochVector(0.5 * f, 0.5 * f, 0.5));
    const double expected = std::acos(std::sqrt((1.0 + 0.25 + 0.5 * f) / 1.75));
    CHECK(purity_angle(rho0, rho_t) == Approx(expected).epsilon(1e-14));
    const double via_matrices =
        std::acos(std::sqrt(oracle::trace_product(oracle::density(0.5, 0.5, 0.5),
                                                  oracle::density(0.5 * f, 0.5 * f, 0.5)) /
                            oracle::trace_product(oracle::density(0.5, 0.5, 0.5),
                                                  oracle::density(0.5, 0.5, 0.5))));
    CHECK(purity_angle(rho0, rho_t) == Approx(via_matrices).epsilon(1e-14));
}

TEST_CASE("purity_angle rejects overlap above purity") {
    try {
        purity_angle(make_state(BlochVector(0, 0, 0.5)), make_state(BlochVector(0, 0, 1)));
        FAIL("expected OverlapExceedsPurity");
    } catch (const Error& e) {
        CHECK(e.kind() == ErrorKind::OverlapExceedsPurity);
    }
}

TEST_CASE("instantaneous generator norms") {
    const auto n = generator_norms_instant({0.8, 0.0, 0.0});
    CHECK(n.op == Approx(0.4));
    CHECK(n.tr == Approx(0.8));
    CHECK(n.hs == Approx(0.8 / kSqrt2));
    const auto z = generator_norms_instant({});
    CHECK((z.op == 0.0 && z.tr == 0.0 && z.hs == 0.0));

    std::mt19937_64 rng(3);
    std::normal_distribution<double> nd;
    for (int i = 0; i < 100; ++i) {
        const double vx = nd(rng), vy = nd(rng), vz = nd(rng);
        const auto ev = oracle::generator_eigenvalues(vx, vy, vz);
        const double op = std::max(std::abs(ev[0]), std::abs(ev[1]));
        const double tr = std::abs(ev[0]) + std::abs(ev[1]);
        const double hs = std::sqrt(ev[0] * ev[0] + ev[1] * ev[1]);
        const auto got = generator_norms_instant({vx, vy, vz});
        CHECK(got.op == Approx(op).epsilon(1e-14));
        CHECK(got.tr == Approx(tr).epsilon(1e-14));
        CHECK(got.hs == Approx(hs).epsilon(1e-14));
        CHECK(std::abs(got.tr / got.op - 2.0) < 1e-14);
        CHECK(std::abs(got.hs / got.op - kSqrt2) < 1e-14);
    }
}

TEST_CASE("kink locations") {
    CHECK(kink_locations(RtnParams::from_g(0.4, 0.0), 20.0).empty());
    CHECK(kink_locations(RtnParams::from_g(4.0, 1.0), 20.0).empty());
    CHECK(kink_locations(RtnParams::from_g(0.0, 0.0), 5.0).empty());

    const auto k2 = kink_locations(RtnParams::from_g(kSqrt2, 0.0), 7.0);
    REQUIRE(k2.size() == 2);
    CHECK(k2[0] == Approx(1.5 * kPi).epsilon(1e-12));
    CHECK(k2[1] == Approx(2.0 * kPi).epsilon(1e-12));

    const auto k4 = kink_locations(RtnParams::from_g(4.0, 0.0), 5.0);
    const std::vector<double> expected = {0.9417, 1.6223, 2.564, 3.2446, 4.186, 4.8668};
    REQUIRE(k4.size() == expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) {
        CHECK(k4[i] == Approx(expected[i]).epsilon(5e-4));
    }
    CHECK_THROWS_AS(kink_locations(RtnParams::from_g(4.0, 0.0), 0.0), Error);
}

TEST_CASE("kink locations match a dense-scan oracle away from equilibrium") {
    for (double dp0 : {0.5, -0.3, 0.99, -0.9935}) {
        for (double g : {2.0, 3.0, 6.0}) {
            const auto p = RtnParams::from_g(g, dp0, 0.7);
            const double tau = 10.0 / p.gamma;
            const auto got = kink_locations(p, tau);
            const auto ref = oracle::dense_extrema([&](double t) { return decay_factor(p, t); },
                                                   0.0, tau, 200000);
            REQUIRE(got.size() == ref.size());
            for (std::size_t i = 0; i < got.size(); ++i) {
                CHECK(std::abs(got[i] - ref[i]) < 1e-6);
            }
        }
    }
}

TEST_CASE("averaged norms") {
    RtnParams frozen;
    const auto z = averaged_norms(frozen, kHalf, 3.0);
    CHECK((z.op == 0.0 && z.tr == 0.0 && z.hs == 0.0));

    const double r_perp = kHalf.perp();
    const auto p = RtnParams::from_g(0.4, 0.0);
    for (double tau : {1.0, 5.0, 10.0}) {
        const auto n = averaged_norms(p, kHalf, tau);
        CHECK(n.tr * tau == Approx(r_perp * (1.0 - decay_factor(p, tau))).epsilon(1e-9));
    }

    // Revival sum: TV(f) = 1 + 2(q + q^2 + q^3) - f(tau), q = e^{-pi/beta}
    const auto s = RtnParams::from_g(4.0, 0.0);
    const double q = std::exp(-kPi / std::sqrt(15.0));
    const double tv = 1.0 + 2.0 * (q + q * q + q * q * q) - decay_factor(s, 5.0);
    CHECK(tv == Approx(2.374).epsilon(1e-3));
    const auto n = averaged_norms(s, kHalf, 5.0);
    CHECK(n.tr * 5.0 == Approx(r_perp * tv).epsilon(1e-9));
    const auto dense = oracle::dense_variation([&](double t) { return decay_factor(s, t); }, 0.0,
                                               5.0, 400000);
    CHECK(dense.total == Approx(tv).epsilon(1e-7));
}

TEST_CASE("averaged norms with a rotating frame") {
    // lam = 0: f = 1, |v| = r_perp |w| at all times
    RtnParams p;
    p.omega = 1.5;
    const BlochVector r0(0.3, 0.4, 0.1);
    const auto n = averaged_norms(p, r0, 2.0);
    CHECK(n.tr == Approx(0.5 * 1.5).epsilon(1e-12));
    const auto res = qsl_time(p, r0, 2.0);
    // tau_qsl = r_perp (1 - cos w tau) / |w|
    CHECK(res.tau_qsl == Approx(0.5 * (1.0 - std::cos(3.0)) / 1.5).epsilon(1e-10));
}

TEST_CASE("qsl_time examples") {
    const double expected = 5.0 * std::sqrt(0.5);
    CHECK(expected == Approx(3.535534).epsilon(1e-7));
    for (const auto& [g, dp0] : std::vector<std::pair<double, double>>{
             {0.2, 0.0}, {0.4, 0.0}, {1.0, 0.0}, {0.4, 1.0}, {2.0, 1.0}, {4.0, -1.0}}) {
        const auto r = qsl_time(RtnParams::from_g(g, dp0), kHalf, 5.0);
        CHECK(r.tau_qsl == Approx(expected).epsilon(1e-6));
    }

    const auto strong = qsl_time(RtnParams::from_g(4.0, 0.0), kHalf, 5.0);
    CHECK(strong.tau_qsl == Approx(1.363).epsilon(0.01));
    CHECK(strong.tau_qsl == Approx(kGoldenStrong).epsilon(1e-6));
    const auto weak = qsl_time(RtnParams::from_g(0.4, 0.0), kHalf, 5.0);
    CHECK(strong.tau_qsl < weak.tau_qsl);
}

TEST_CASE("frozen dynamics is an error") {
    for (const auto& [p, r0] : std::vector<std::pair<RtnParams, BlochVector>>{
             {RtnParams::from_g(0.0, 0.0), kHalf},
             {RtnParams::from_g(4.0, 0.0), BlochVector(0, 0, 0.8)}}) {
        try {
            qsl_time(p, r0, 2.0);
            FAIL("expected FrozenDynamics");
        } catch (const Error& e) {
            CHECK(e.kind() == ErrorKind::FrozenDynamics);
        }
    }
    CHECK_THROWS_AS(qsl_time(RtnParams::from_g(1.0, 0.0), kHalf, -1.0), Error);
}

TEST_CASE("qsl_time properties on random parameters") {
    std::mt19937_64 rng(99);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < 150; ++i) {
        RtnParams p = RtnParams::from_g(0.05 + 7.95 * u(rng), 2.0 * u(rng) - 1.0, 0.2 + 3.0 * u(rng));
        if (i % 3 == 0) {
            p.omega = 2.0 * u(rng) - 1.0;
        }
        auto [x, y, z] = oracle::random_in_ball(rng);
        if (std::hypot(x, y) < 1e-3) {
            x = 0.1;
        }
        const BlochVector r0(x, y, z);
        const double tau = (0.1 + 15.0 * u(rng)) / p.gamma;
        const auto r = qsl_time(p, r0, tau);
        CHECK(r.bound_norm == NormKind::Operator);
        CHECK(r.lambda_op <= r.lambda_hs);
        CHECK(r.lambda_hs <= r.lambda_tr);
        CHECK(std::abs(r.lambda_tr / r.lambda_op - 2.0) <= 1e-9);
        CHECK(std::abs(r.lambda_hs / r.lambda_op - kSqrt2) <= 1e-9);
        CHECK(r.tau_qsl <= tau * (1.0 + 1e-9));
        CHECK(r.theta >= 0.0);
        CHECK(r.theta <= kPi / 2);
        CHECK(r.tau_qsl == Approx(r.tau_qsl_reduced).epsilon(1e-9));
    }
}

TEST_CASE("early-time curves coincide for weak and strong coupling") {
    for (double gt : {0.05, 0.2, 0.5}) {
        const auto a = qsl_time(RtnParams::from_g(4.0, 0.0), kHalf, gt);
        const auto b = qsl_time(RtnParams::from_g(0.4, 0.0), kHalf, gt);
        CHECK(a.tau_qsl == Approx(b.tau_qsl).epsilon(1e-6));
    }
}

TEST_CASE("tau_qsl / tau is invariant under joint rescaling of gamma, lambda and tau") {
    for (double g : {0.4, 2.5, 4.0}) {
        for (double dp0 : {0.0, 1.0, 0.5}) {
            const auto base = qsl_time(RtnParams::from_g(g, dp0, 1.0), kHalf, 5.0);
            for (double c : {0.1, 3.0, 40.0}) {
                const auto scaled = qsl_time(RtnParams::from_g(g, dp0, c), kHalf, 5.0 / c);
                CHECK(scaled.ratio == Approx(base.ratio).epsilon(1e-9));
            }
        }
    }
}
