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

#include "qslrtn/sweep.hpp"

#include <charconv>
#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>

#include <unistd.h>

#include <json.hpp>

#include "qslrtn/errors.hpp"
#include "qslrtn/nonmark.hpp"
#include "qslrtn/oracle.hpp"
#include "qslrtn/parallel.hpp"
#include "qslrtn/qsl.hpp"

namespace qslrtn {
namespace {

const std::vector<std::string> kQslColumns = {"gamma_tau", "g",        "dp0",  "theta",
                                              "lambda_op", "tau_qsl_gamma", "ratio"};

std::vector<std::string> columns_for(SweepKind kind) {
    switch (kind) {
    case SweepKind::Evolve: return {"gamma_t", "rx", "ry", "rz", "f", "re_d", "im_d"};
    case SweepKind::QslVsTau:
    case SweepKind::QslVsDp0: return kQslColumns;
    case SweepKind::NonmarkVsTau: return {"gamma_tau", "n_coh"};
    case SweepKind::NonmarkVsG: return {"g", "dp0", "n_coh", "n_coh_over_C0"};
    case SweepKind::QslVsG: return {"g", "dp0", "tau_qsl_gamma"};
    case SweepKind::McValidate:
        return {"gamma_t", "re_mc", "im_mc", "stderr", "re_exact", "im_exact",
                "abs_diff_over_stderr"};
    }
    return {};
}

[[noreturn]] void invalid(const std::string& field, const std::string& why) {
    throw Error(ErrorKind::InvalidSpec, field + ": " + why);
}

struct Series {
    double g;
    double dp0;
    int mirror_of = -1;  ///< index of the +dp0 series this one mirrors
};

RtnParams point_params(const SweepSpec& spec, double g, double dp0) {
    RtnParams p = spec.params;
    p.lam = g * p.gamma;
    p.delta_p0 = dp0;
    return p;
}

std::vector<double> qsl_row(const SweepSpec& spec, double g, double dp0, double gamma_tau) {
    const RtnParams p = point_params(spec, g, dp0);
    const auto r = qsl_time(p, spec.bloch, gamma_tau / p.gamma, spec.quadrature);
    return {gamma_tau, g, dp0, r.theta, r.lambda_op / p.gamma, p.gamma * r.tau_qsl, r.ratio};
}

std::vector<double> compute_row(const SweepSpec& spec, const Series& s, double x) {
    switch (spec.kind) {
    case SweepKind::QslVsTau: return qsl_row(spec, s.g, s.dp0, x);
    case SweepKind::QslVsDp0: return qsl_row(spec, s.g, x, spec.gamma_tau);
    case SweepKind::QslVsG: {
        const auto row = qsl_row(spec, x, s.dp0, spec.gamma_tau);
        return {x, s.dp0, row[5]};
    }
    case SweepKind::NonmarkVsG: {
        const RtnParams p = point_params(spec, x, s.dp0);
        const auto r = n_coh(p, spec.bloch, spec.gamma_horizon / p.gamma);
        const double c0 = spec.bloch.perp();
        return {x, s.dp0, r.n_coh, c0 > 0.0 ? r.n_coh / c0 : 0.0};
    }
    case SweepKind::NonmarkVsTau: {
        const RtnParams p = point_params(spec, s.g, s.dp0);
        return {x, n_coh(p, spec.bloch, x / p.gamma).n_coh};
    }
    case SweepKind::Evolve: {
        const RtnParams p = point_params(spec, s.g, s.dp0);
        const double t = x / p.gamma;
        const auto r = bloch_at(p, spec.bloch, t);
        const cplx d = complex_decay(p, t);
        return {x, r.rx(), r.ry(), r.rz(), decay_factor(p, t), d.real(), d.imag()};
    }
    case SweepKind::McValidate: break;
    }
    return {};
}

bool rows_match(const std::vector<double>& a, const std::vector<double>& b, std::size_t skip) {
    for (std::size_t i = 0; i < a.size(); ++i) {
        if (i == skip) {
            continue;
        }
        if (std::abs(a[i] - b[i]) > 1e-12 * std::max(1.0, std::abs(a[i]))) {
            return false;
        }
    }
    return true;
}

// Column holding dp0, or npos when the schema has none.
std::size_t dp0_column(SweepKind kind) {
    const auto cols = columns_for(kind);
    for (std::size_t i = 0; i < cols.size(); ++i) {
        if (cols[i] == "dp0") {
            return i;
        }
    }
    return std::string::npos;
}

SweepOutcome run_mc_validate(const SweepSpec& spec) {
    const RtnParams p = point_params(spec, spec.g_values.front(), spec.dp0_values.front());
    const auto gamma_t = spec.axis.values();
    std::vector<double> times(gamma_t.size());
    for (std::size_t i = 0; i < times.size(); ++i) {
        times[i] = gamma_t[i] / p.gamma;
    }
    const auto mc = mc_decay(p, times, spec.n_traj, spec.seed, spec.threads);

    SweepOutcome out;
    out.table.columns = columns_for(spec.kind);
    std::size_t within = 0;
    for (std::size_t i = 0; i < times.size(); ++i) {
        const cplx exact = complex_decay(p, times[i]);
        const double diff = std::abs(mc.mean[i] - exact);
        double z = 0.0;
        if (mc.std_error[i] > 0.0) {
            z = diff / mc.std_error[i];
        } else if (diff > 0.0) {
            z = std::numeric_limits<double>::infinity();
        }
        if (z <= 4.0) {
            ++within;
        }
        out.table.rows.push_back({gamma_t[i], mc.mean[i].real(), mc.mean[i].imag(),
                                  mc.std_error[i], exact.real(), exact.imag(), z});
    }
    out.fraction_within_4sigma =
        times.empty() ? 1.0 : static_cast<double>(within) / static_cast<double>(times.size());
    return out;
}

}  // namespace

std::string_view to_string(SweepKind kind) {
    switch (kind) {
    case SweepKind::Evolve: return "evolve";
    case SweepKind::QslVsTau: return "qsl-vs-tau";
    case SweepKind::NonmarkVsTau: return "nonmark-vs-tau";
    case SweepKind::NonmarkVsG: return "nonmark-vs-g";
    case SweepKind::QslVsG: return "qsl-vs-g";
    case SweepKind::QslVsDp0: return "qsl-vs-dp0";
    case SweepKind::McValidate: return "mc-validate";
    }
    return "unknown";
}

std::optional<SweepKind> parse_sweep_kind(std::string_view text) {
    for (auto kind : {SweepKind::Evolve, SweepKind::QslVsTau, SweepKind::NonmarkVsTau,
                      SweepKind::NonmarkVsG, SweepKind::QslVsG, SweepKind::QslVsDp0,
                      SweepKind::McValidate}) {
        if (to_string(kind) == text) {
            return kind;
        }
    }
    return std::nullopt;
}

std::vector<double> Axis::values() const {
    std::vector<double> out(static_cast<std::size_t>(points));
    const double n = static_cast<double>(points - 1);
    for (int i = 0; i < points; ++i) {
        const double frac = static_cast<double>(i) / n;
        out[i] = scale == AxisScale::Log
                     ? std::exp(std::log(min) + frac * (std::log(max) - std::log(min)))
                     : min + frac * (max - min);
    }
    out.front() = min;
    out.back() = max;
    return out;
}

void SweepSpec::validate() const {
    if (axis.points < 2) {
        invalid("points", "a sweep needs at least 2 grid points");
    }
    if (!std::isfinite(axis.min) || !std::isfinite(axis.max) || !(axis.max > axis.min)) {
        invalid("axis_min/axis_max", "need finite bounds with axis_max > axis_min");
    }
    if (axis.scale == AxisScale::Log && !(axis.min > 0.0)) {
        invalid("axis_min", "log axis needs a positive lower bound");
    }
    const bool time_axis = kind == SweepKind::Evolve || kind == SweepKind::QslVsTau ||
                           kind == SweepKind::NonmarkVsTau || kind == SweepKind::McValidate;
    if (time_axis && axis.min < 0.0) {
        invalid("axis_min", "time axis must be >= 0");
    }
    if ((kind == SweepKind::QslVsTau || kind == SweepKind::NonmarkVsTau) && !(axis.min > 0.0)) {
        invalid("axis_min", "driving time must be > 0");
    }
    if ((kind == SweepKind::NonmarkVsG || kind == SweepKind::QslVsG) && !(axis.min > 0.0)) {
        invalid("axis_min", "g axis must be > 0");
    }
    if (kind == SweepKind::QslVsDp0 && (axis.min < -1.0 || axis.max > 1.0)) {
        invalid("axis_min/axis_max", "dp0 axis must lie in [-1, 1]");
    }
    if (g_values.empty() && kind != SweepKind::NonmarkVsG && kind != SweepKind::QslVsG) {
        invalid("g", "at least one coupling value is required");
    }
    if (dp0_values.empty() && kind != SweepKind::QslVsDp0) {
        invalid("dp0", "at least one dp0 value is required");
    }
    for (double g : g_values) {
        if (!(g >= 0.0) || !std::isfinite(g)) {
            invalid("g", "coupling ratio must be >= 0");
        }
    }
    for (double d : dp0_values) {
        if (!(std::abs(d) <= 1.0)) {
            invalid("dp0", "must lie in [-1, 1]");
        }
    }
    if ((kind == SweepKind::Evolve || kind == SweepKind::McValidate ||
         kind == SweepKind::NonmarkVsTau) &&
        (g_values.size() != 1 || dp0_values.size() != 1)) {
        invalid("g/dp0", std::string(to_string(kind)) + " takes a single parameter point");
    }
    if (!(gamma_tau > 0.0)) {
        invalid("tau", "driving time must be > 0");
    }
    if (!(gamma_horizon > 0.0)) {
        invalid("tmax", "horizon must be > 0");
    }
    if (kind == SweepKind::McValidate && n_traj < 1000) {
        invalid("traj", "mc-validate needs at least 1000 trajectories");
    }
    try {
        params.validate();
        quadrature.validate();
    } catch (const Error& e) {
        invalid("params", e.what());
    }
}

const std::vector<std::string>& preset_names() {
    static const std::vector<std::string> names = {"fig1",  "fig2a", "fig2b", "fig3a",
                                                   "fig3b", "fig4",  "fig5"};
    return names;
}

SweepSpec preset_spec(std::string_view name) {
    SweepSpec s;
    s.name = std::string(name);
    const Axis coupling{"g", 0.1, 6.0, 120, AxisScale::Log};
    const Axis driving{"gamma_tau", 10.0 / 200.0, 10.0, 200, AxisScale::Linear};
    if (name == "fig1") {
        s.kind = SweepKind::NonmarkVsG;
        s.axis = coupling;
        s.dp0_values = {0.0, 1.0};
        s.mirror_dp0 = true;
        s.gamma_horizon = 60.0;
    } else if (name == "fig2a" || name == "fig3a") {
        s.kind = SweepKind::QslVsTau;
        s.axis = driving;
        s.g_values = {0.4, 4.0};
        s.dp0_values = {name == "fig2a" ? 0.0 : 1.0};
        s.mirror_dp0 = name == "fig3a";
    } else if (name == "fig2b" || name == "fig3b") {
        s.kind = SweepKind::NonmarkVsTau;
        s.axis = driving;
        s.g_values = {4.0};
        s.dp0_values = {name == "fig2b" ? 0.0 : 1.0};
        s.mirror_dp0 = name == "fig3b";
    } else if (name == "fig4") {
        s.kind = SweepKind::QslVsTau;
        s.axis = driving;
        s.g_values = {4.0, 0.4};
        s.dp0_values = {0.0, 1.0};
        s.mirror_dp0 = true;
    } else if (name == "fig5") {
        s.kind = SweepKind::QslVsG;
        s.axis = coupling;
        s.dp0_values = {0.0, 1.0};
        s.mirror_dp0 = true;
        s.gamma_tau = 5.0;
    } else {
        invalid("preset", "unknown preset '" + std::string(name) + "'");
    }
    return s;
}

SweepOutcome run_sweep(const SweepSpec& spec) {
    const auto started = std::chrono::steady_clock::now();
    spec.validate();
    SweepOutcome out;
    if (spec.kind == SweepKind::McValidate) {
        out = run_mc_validate(spec);
    } else {
        std::vector<Series> series;
        // Sweeps along g or dp0 iterate the other knob only.
        const std::vector<double> gs =
            (spec.kind == SweepKind::NonmarkVsG || spec.kind == SweepKind::QslVsG)
                ? std::vector<double>{0.0}
                : spec.g_values;
        const std::vector<double> dps =
            spec.kind == SweepKind::QslVsDp0 ? std::vector<double>{0.0} : spec.dp0_values;
        for (double g : gs) {
            for (double d : dps) {
                series.push_back({g, d});
            }
        }
        if (spec.mirror_dp0 && spec.kind != SweepKind::QslVsDp0) {
            const std::size_t n = series.size();
            for (std::size_t i = 0; i < n; ++i) {
                if (series[i].dp0 > 0.0) {
                    series.push_back({series[i].g, -series[i].dp0, static_cast<int>(i)});
                }
            }
        }

        const auto xs = spec.axis.values();
        std::vector<std::vector<double>> rows(series.size() * xs.size());
        parallel_for(rows.size(), resolve_threads(spec.threads), [&](std::size_t job) {
            rows[job] = compute_row(spec, series[job / xs.size()], xs[job % xs.size()]);
        });

        out.table.columns = columns_for(spec.kind);
        const std::size_t skip = dp0_column(spec.kind);
        for (std::size_t si = 0; si < series.size(); ++si) {
            const auto first = rows.begin() + static_cast<std::ptrdiff_t>(si * xs.size());
            const auto last = first + static_cast<std::ptrdiff_t>(xs.size());
            if (series[si].mirror_of >= 0) {
                const auto src = rows.begin() +
                                 static_cast<std::ptrdiff_t>(series[si].mirror_of * xs.size());
                bool same = true;
                for (std::size_t k = 0; k < xs.size() && same; ++k) {
                    same = rows_match(first[k], src[k], skip);
                }
                if (same) {
                    out.dp0_collapsed = true;
                    continue;
                }
                if (skip == std::string::npos) {
                    throw Error(ErrorKind::InvalidSpec,
                                "dp0: mirrored series differs but the schema has no dp0 column");
                }
            }
            out.table.rows.insert(out.table.rows.end(), first, last);
        }
    }
    out.table.name = spec.name;
    out.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    return out;
}

std::string format_number(double x) {
    if (x == 0.0) {
        return "0";
    }
    if (std::isnan(x)) {
        return "nan";
    }
    if (std::isinf(x)) {
        return x > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), x, std::chars_format::general, 9);
    return std::string(buf, res.ptr);
}

std::string render_csv(const Table& table) {
    std::string out;
    for (std::size_t i = 0; i < table.columns.size(); ++i) {
        out += (i ? "," : "") + table.columns[i];
    }
    out += '\n';
    for (const auto& row : table.rows) {
        for (std::size_t i = 0; i < row.size(); ++i) {
            if (i) {
                out += ',';
            }
            out += format_number(row[i]);
        }
        out += '\n';
    }
    return out;
}

std::string render_json(const Table& table) {
    nlohmann::ordered_json doc;
    doc["name"] = table.name;
    doc["columns"] = table.columns;
    auto rows = nlohmann::json::array();
    for (const auto& row : table.rows) {
        auto jr = nlohmann::json::array();
        for (double x : row) {
            const std::string text = format_number(x);
            double rounded = 0.0;
            const auto res = std::from_chars(text.data(), text.data() + text.size(), rounded);
            if (res.ec == std::errc() && std::isfinite(rounded)) {
                jr.push_back(rounded);
            } else {
                jr.push_back(nullptr);
            }
        }
        rows.push_back(std::move(jr));
    }
    doc["rows"] = std::move(rows);
    return doc.dump(1) + "\n";
}

std::string render(const Table& table, OutputFormat format) {
    return format == OutputFormat::Json ? render_json(table) : render_csv(table);
}

void write_file_atomic(const std::string& path, const std::string& content) {
    namespace fs = std::filesystem;
    const fs::path target(path);
    fs::path tmp = target;
    tmp += ".tmp." + std::to_string(::getpid());
    {
        std::ofstream os(tmp, std::ios::binary | std::ios::trunc);
        if (!os) {
            throw Error(ErrorKind::Io, "cannot open " + tmp.string() + " for writing");
        }
        os.write(content.data(), static_cast<std::streamsize>(content.size()));
        os.flush();
        if (!os) {
            std::error_code ec;
            fs::remove(tmp, ec);
            throw Error(ErrorKind::Io, "write to " + tmp.string() + " failed");
        }
    }
    std::error_code ec;
    fs::rename(tmp, target, ec);
    if (ec) {
        fs::remove(tmp, ec);
        throw Error(ErrorKind::Io, "cannot move output into place at " + path);
    }
}

}  // namespace qslrtn
