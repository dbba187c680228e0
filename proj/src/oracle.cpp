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

#include "qslrtn/oracle.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <random>
#include <sstream>

#include "qslrtn/errors.hpp"
#include "qslrtn/parallel.hpp"

namespace qslrtn {
namespace {

constexpr std::size_t kChunk = 1024;
constexpr std::uint64_t kAutocorrSalt = 0x61c8864680b583ebULL;

std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

void require_sorted_times(std::span<const double> times) {
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!(times[i] >= 0.0) || !std::isfinite(times[i])) {
            throw Error(ErrorKind::NegativeTime, "grid times must be finite and >= 0");
        }
        if (i > 0 && times[i] < times[i - 1]) {
            throw Error(ErrorKind::InvalidSpec, "grid times must be non-decreasing");
        }
    }
}

struct Moments {
    double re = 0.0;
    double im = 0.0;
    double re2 = 0.0;
    double im2 = 0.0;
};

// State (m+, m-) of the conditional-average ODE.
using OdeState = std::array<cplx, 2>;

OdeState ode_rhs(const OdeState& m, double lam, double gamma) {
    const cplx i(0.0, 1.0);
    return {-i * lam * m[0] + gamma * (m[1] - m[0]), i * lam * m[1] + gamma * (m[0] - m[1])};
}

OdeState rk4(OdeState m, double span, long steps, double lam, double gamma) {
    const double h = span / static_cast<double>(steps);
    for (long k = 0; k < steps; ++k) {
        const auto k1 = ode_rhs(m, lam, gamma);
        const auto k2 = ode_rhs({m[0] + 0.5 * h * k1[0], m[1] + 0.5 * h * k1[1]}, lam, gamma);
        const auto k3 = ode_rhs({m[0] + 0.5 * h * k2[0], m[1] + 0.5 * h * k2[1]}, lam, gamma);
        const auto k4 = ode_rhs({m[0] + h * k3[0], m[1] + h * k3[1]}, lam, gamma);
        for (int j = 0; j < 2; ++j) {
            m[j] += h / 6.0 * (k1[j] + 2.0 * k2[j] + 2.0 * k3[j] + k4[j]);
        }
    }
    return m;
}

}  // namespace

int TelegraphPath::value_at(double s) const {
    const auto n = std::upper_bound(flips.begin(), flips.end(), s) - flips.begin();
    return (n % 2 == 0) ? initial : -initial;
}

double TelegraphPath::integral_to(double s) const {
    double acc = 0.0;
    double prev = 0.0;
    int value = initial;
    for (double epoch : flips) {
        if (epoch >= s) {
            break;
        }
        acc += value * (epoch - prev);
        prev = epoch;
        value = -value;
    }
    return acc + value * (s - prev);
}

std::uint64_t stream_seed(std::uint64_t base, std::uint64_t index) {
    return splitmix64(splitmix64(base) ^ splitmix64(index + 0x632be59bd9b4e019ULL));
}

TelegraphPath sample_trajectory(const RtnParams& p, double horizon, std::uint64_t seed) {
    std::mt19937_64 engine(seed);
    std::bernoulli_distribution up(0.5 * (1.0 + p.delta_p0));
    std::exponential_distribution<double> wait(p.gamma);
    TelegraphPath path;
    path.horizon = horizon;
    path.initial = up(engine) ? 1 : -1;
    for (double t = wait(engine); t <= horizon; t += wait(engine)) {
        path.flips.push_back(t);
    }
    return path;
}

McEstimate mc_decay(const RtnParams& p, std::span<const double> times, std::size_t n_traj,
                    std::uint64_t seed, unsigned threads) {
    p.validate();
    require_sorted_times(times);
    if (n_traj < 1000) {
        throw Error(ErrorKind::InvalidSpec, "mc_decay needs at least 1000 trajectories");
    }
    const std::size_t n_pts = times.size();
    const double horizon = times.empty() ? 0.0 : kNoiseClock * times.back();
    const std::size_t n_chunks = (n_traj + kChunk - 1) / kChunk;
    std::vector<std::vector<Moments>> partial(n_chunks, std::vector<Moments>(n_pts));

    parallel_for(n_chunks, resolve_threads(threads), [&](std::size_t chunk) {
        auto& acc = partial[chunk];
        const std::size_t end = std::min(n_traj, (chunk + 1) * kChunk);
        for (std::size_t traj = chunk * kChunk; traj < end; ++traj) {
            const auto path = sample_trajectory(p, horizon, stream_seed(seed, traj));
            // Walk the sorted grid and the flip epochs together.
            double integral = 0.0;
            double prev = 0.0;
            int value = path.initial;
            std::size_t next_flip = 0;
            for (std::size_t k = 0; k < n_pts; ++k) {
                const double s = kNoiseClock * times[k];
                while (next_flip < path.flips.size() && path.flips[next_flip] < s) {
                    integral += value * (path.flips[next_flip] - prev);
                    prev = path.flips[next_flip];
                    value = -value;
                    ++next_flip;
                }
                const double phase = -p.lam * (integral + value * (s - prev));
                const double c = std::cos(phase);
                const double sn = std::sin(phase);
                acc[k].re += c;
                acc[k].im += sn;
                acc[k].re2 += c * c;
                acc[k].im2 += sn * sn;
            }
        }
    });

    McEstimate out;
    out.times.assign(times.begin(), times.end());
    out.mean.resize(n_pts);
    out.std_error.resize(n_pts);
    out.n_traj = n_traj;
    out.seed = seed;
    const double n = static_cast<double>(n_traj);
    for (std::size_t k = 0; k < n_pts; ++k) {
        Moments total;
        for (const auto& chunk : partial) {
            total.re += chunk[k].re;
            total.im += chunk[k].im;
            total.re2 += chunk[k].re2;
            total.im2 += chunk[k].im2;
        }
        const double mre = total.re / n;
        const double mim = total.im / n;
        // Unbiased sample variances of the real and imaginary parts.
        const double var_re = std::max(0.0, (total.re2 - n * mre * mre) / (n - 1.0));
        const double var_im = std::max(0.0, (total.im2 - n * mim * mim) / (n - 1.0));
        out.mean[k] = cplx(mre, mim);
        out.std_error[k] = std::sqrt((var_re + var_im) / n);
    }
    return out;
}

std::vector<cplx> ode_decay(const RtnParams& p, std::span<const double> times,
                            const OdeSettings& settings) {
    p.validate();
    require_sorted_times(times);
    const double h_max = std::min(1.0 / (50.0 * p.gamma),
                                  p.lam > 0.0 ? 1.0 / (50.0 * p.lam) : 1.0 / (50.0 * p.gamma));
    const double h_min = settings.min_step_gamma / p.gamma;

    std::vector<cplx> out;
    out.reserve(times.size());
    OdeState m{cplx(0.5 * (1.0 + p.delta_p0)), cplx(0.5 * (1.0 - p.delta_p0))};
    double s = 0.0;
    for (double t : times) {
        const double target = kNoiseClock * t;
        const double span = target - s;
        if (span > 0.0) {
            long steps = static_cast<long>(std::ceil(span / h_max));
            OdeState coarse = rk4(m, span, steps, p.lam, p.gamma);
            for (;;) {
                if (span / static_cast<double>(2 * steps) < h_min) {
                    std::ostringstream os;
                    os << "RK4 step would fall below " << h_min << " on [" << s << ", " << target
                       << "]";
                    throw Error(ErrorKind::StepUnderflow, os.str());
                }
                steps *= 2;
                const OdeState fine = rk4(m, span, steps, p.lam, p.gamma);
                const double diff = std::abs(fine[0] - coarse[0]) + std::abs(fine[1] - coarse[1]);
                coarse = fine;
                if (diff <= settings.agreement) {
                    break;
                }
            }
            m = coarse;
            s = target;
        }
        out.push_back(m[0] + m[1]);
    }
    return out;
}

std::vector<AutocorrelationPoint> mc_autocorrelation(const RtnParams& p,
                                                     std::span<const double> lags,
                                                     std::size_t n_traj, std::uint64_t seed,
                                                     unsigned threads) {
    RtnParams eq = p;
    eq.delta_p0 = 0.0;
    eq.validate();
    for (double lag : lags) {
        if (!(lag >= 0.0) || !std::isfinite(lag)) {
            throw Error(ErrorKind::NegativeTime, "autocorrelation lags must be >= 0");
        }
    }
    if (n_traj < 2) {
        throw Error(ErrorKind::InvalidSpec, "autocorrelation needs at least 2 trajectories");
    }
    const double burn_in = 3.0 / eq.gamma;
    const double max_lag = lags.empty() ? 0.0 : *std::max_element(lags.begin(), lags.end());
    const std::size_t n_chunks = (n_traj + kChunk - 1) / kChunk;
    std::vector<std::vector<std::array<double, 2>>> partial(
        n_chunks, std::vector<std::array<double, 2>>(lags.size()));

    parallel_for(n_chunks, resolve_threads(threads), [&](std::size_t chunk) {
        auto& acc = partial[chunk];
        const std::size_t end = std::min(n_traj, (chunk + 1) * kChunk);
        for (std::size_t traj = chunk * kChunk; traj < end; ++traj) {
            const auto path = sample_trajectory(eq, burn_in + max_lag,
                                                stream_seed(seed ^ kAutocorrSalt, traj));
            const int x0 = path.value_at(burn_in);
            for (std::size_t k = 0; k < lags.size(); ++k) {
                const double prod = x0 * path.value_at(burn_in + lags[k]);
                acc[k][0] += prod;
                acc[k][1] += prod * prod;
            }
        }
    });

    std::vector<AutocorrelationPoint> out(lags.size());
    const double n = static_cast<double>(n_traj);
    for (std::size_t k = 0; k < lags.size(); ++k) {
        double sum = 0.0;
        double sum2 = 0.0;
        for (const auto& chunk : partial) {
            sum += chunk[k][0];
            sum2 += chunk[k][1];
        }
        const double mean = sum / n;
        const double var = std::max(0.0, (sum2 - n * mean * mean) / (n - 1.0));
        out[k] = {lags[k], mean, std::sqrt(var / n)};
    }
    return out;
}

}  // namespace qslrtn
