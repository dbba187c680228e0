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

#include "qslrtn/cli.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "qslrtn/errors.hpp"
#include "qslrtn/nonmark.hpp"
#include "qslrtn/qsl.hpp"
#include "qslrtn/sweep.hpp"

namespace qslrtn {
namespace {

using nlohmann::json;

// Raw option values; unset means "take the config file value, then the default".
struct Options {
    std::optional<double> gamma, g, lambda, dp0, omega, v, tau, tmax, axis_min, axis_max;
    std::optional<std::string> bloch, out, format, kind, scale, axis;
    std::optional<int> points;
    std::optional<std::size_t> traj;
    std::optional<std::uint64_t> seed;
    std::optional<unsigned> threads;
};

template <typename T>
void merge(std::optional<T>& dst, const json& cfg, const char* key) {
    if (dst || !cfg.contains(key)) {
        return;
    }
    try {
        dst = cfg.at(key).get<T>();
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, std::string(key) + ": " + e.what());
    }
}

void merge_config(Options& o, const std::string& path) {
    std::ifstream is(path);
    if (!is) {
        throw Error(ErrorKind::Io, "cannot read config file " + path);
    }
    json cfg;
    try {
        cfg = json::parse(is);
    } catch (const json::exception& e) {
        throw Error(ErrorKind::InvalidSpec, "config: " + std::string(e.what()));
    }
    if (!cfg.is_object()) {
        throw Error(ErrorKind::InvalidSpec, "config: top level must be an object");
    }
    static const std::vector<std::string> known = {
        "kind", "axis", "axis_min", "axis_max", "points", "scale", "gamma", "lambda",
        "g", "dp0", "omega", "v", "bloch", "tau", "tmax", "traj", "seed", "out", "format", "threads"};
    for (const auto& [key, _] : cfg.items()) {
        if (std::find(known.begin(), known.end(), key) == known.end()) {
            throw Error(ErrorKind::InvalidSpec, "config: unknown key '" + key + "'");
        }
    }
    if (cfg.contains("bloch") && cfg["bloch"].is_array() && !o.bloch) {
        const auto& b = cfg["bloch"];
        if (b.size() != 3) {
            throw Error(ErrorKind::InvalidSpec, "bloch: expected three components");
        }
        std::ostringstream os;
        os << b[0].get<double>() << ',' << b[1].get<double>() << ',' << b[2].get<double>();
        o.bloch = os.str();
    }
    merge(o.gamma, cfg, "gamma");
    merge(o.g, cfg, "g");
    merge(o.lambda, cfg, "lambda");
    merge(o.dp0, cfg, "dp0");
    merge(o.omega, cfg, "omega");
    merge(o.v, cfg, "v");
    merge(o.tau, cfg, "tau");
    merge(o.tmax, cfg, "tmax");
    merge(o.axis_min, cfg, "axis_min");
    merge(o.axis_max, cfg, "axis_max");
    merge(o.bloch, cfg, "bloch");
    merge(o.out, cfg, "out");
    merge(o.format, cfg, "format");
    merge(o.kind, cfg, "kind");
    merge(o.scale, cfg, "scale");
    merge(o.axis, cfg, "axis");
    merge(o.points, cfg, "points");
    merge(o.traj, cfg, "traj");
    merge(o.seed, cfg, "seed");
    merge(o.threads, cfg, "threads");
    if (o.g && o.lambda) {
        throw Error(ErrorKind::InvalidSpec, "g and lambda are mutually exclusive");
    }
}

BlochVector parse_bloch(const std::string& text) {
    std::array<double, 3> r{};
    std::istringstream is(text);
    is.imbue(std::locale::classic());
    for (int i = 0; i < 3; ++i) {
        if (!(is >> r[i])) {
            throw Error(ErrorKind::InvalidSpec, "bloch: expected rx,ry,rz");
        }
        if (i < 2) {
            char comma = 0;
            if (!(is >> comma) || comma != ',') {
                throw Error(ErrorKind::InvalidSpec, "bloch: expected rx,ry,rz");
            }
        }
    }
    std::string rest;
    if (is >> rest) {
        throw Error(ErrorKind::InvalidSpec, "bloch: trailing characters '" + rest + "'");
    }
    return BlochVector(r[0], r[1], r[2]);
}

RtnParams resolve_params(const Options& o) {
    RtnParams p;
    p.gamma = o.gamma.value_or(1.0);
    if (o.lambda) {
        p.lam = *o.lambda;
    } else {
        p.lam = o.g.value_or(0.0) * p.gamma;
    }
    p.delta_p0 = o.dp0.value_or(0.0);
    p.omega = o.omega.value_or(0.0);
    p.v = o.v.value_or(0.0);
    p.validate();
    return p;
}

OutputFormat resolve_format(const Options& o) {
    const std::string f = o.format.value_or("csv");
    if (f == "csv") {
        return OutputFormat::Csv;
    }
    if (f == "json") {
        return OutputFormat::Json;
    }
    throw Error(ErrorKind::InvalidSpec, "format: expected csv or json, got '" + f + "'");
}

double positive(const std::optional<double>& v, double fallback, const char* field) {
    const double x = v.value_or(fallback);
    if (!(x > 0.0) || !std::isfinite(x)) {
        throw Error(ErrorKind::InvalidSpec, std::string(field) + ": must be > 0");
    }
    return x;
}

void emit(const Table& table, const Options& o, std::ostream& out) {
    const std::string text = render(table, resolve_format(o));
    if (o.out && !o.out->empty() && *o.out != "-") {
        write_file_atomic(*o.out, text);
    } else {
        out << text;
        out.flush();
        if (!out) {
            throw Error(ErrorKind::Io, "cannot write to the output stream");
        }
    }
}

void print_summary(std::ostream& err, const SweepSpec& spec, const SweepOutcome& outcome) {
    nlohmann::ordered_json s;
    s["tool"] = "qsl_rtn";
    s["version"] = std::string(kToolVersion);
    s["sweep"] = spec.name;
    s["kind"] = std::string(to_string(spec.kind));
    s["gamma"] = spec.params.gamma;
    s["omega"] = spec.params.omega;
    s["v"] = spec.params.v;
    s["bloch"] = {spec.bloch.rx(), spec.bloch.ry(), spec.bloch.rz()};
    s["rows"] = outcome.table.rows.size();
    s["dp0_mirror_collapsed"] = outcome.dp0_collapsed;
    if (spec.kind == SweepKind::McValidate) {
        s["traj"] = spec.n_traj;
        s["seed"] = spec.seed;
        s["fraction_within_4sigma"] = outcome.fraction_within_4sigma;
    }
    s["wall_seconds"] = outcome.wall_seconds;
    err << s.dump() << '\n';
}

SweepSpec custom_spec(const Options& o) {
    SweepSpec s;
    const auto kind = parse_sweep_kind(o.kind.value_or(""));
    if (!kind) {
        throw Error(ErrorKind::InvalidSpec, "kind: missing or unknown sweep kind '" +
                                                o.kind.value_or("") + "'");
    }
    s.kind = *kind;
    s.params = resolve_params(o);
    s.g_values = {s.params.g()};
    s.dp0_values = {s.params.delta_p0};
    s.axis.name = o.axis.value_or("");
    s.axis.min = o.axis_min.value_or(0.0);
    s.axis.max = o.axis_max.value_or(0.0);
    s.axis.points = o.points.value_or(0);
    const std::string scale = o.scale.value_or("linear");
    if (scale == "log") {
        s.axis.scale = AxisScale::Log;
    } else if (scale != "linear") {
        throw Error(ErrorKind::InvalidSpec, "scale: expected linear or log");
    }
    s.gamma_tau = s.params.gamma * positive(o.tau, 5.0 / s.params.gamma, "tau");
    s.gamma_horizon = s.params.gamma * positive(o.tmax, 60.0 / s.params.gamma, "tmax");
    return s;
}

void apply_common(SweepSpec& s, const Options& o) {
    if (o.bloch) {
        s.bloch = parse_bloch(*o.bloch);
    }
    s.threads = o.threads.value_or(0);
    s.n_traj = o.traj.value_or(s.n_traj);
    s.seed = o.seed.value_or(s.seed);
}

int run_sweep_command(SweepSpec& spec, const Options& o, std::ostream& out, std::ostream& err) {
    apply_common(spec, o);
    const auto outcome = run_sweep(spec);
    emit(outcome.table, o, out);
    print_summary(err, spec, outcome);
    if (spec.kind == SweepKind::McValidate && outcome.fraction_within_4sigma < 0.95) {
        err << "mc-validate: only " << outcome.fraction_within_4sigma * 100.0
            << "% of points within 4 sigma (need 95%)\n";
        return kExitNumerical;
    }
    return kExitOk;
}

int exit_code_for(ErrorKind kind) {
    switch (kind) {
    case ErrorKind::BlochOutOfBall:
    case ErrorKind::InvalidState:
    case ErrorKind::InvalidParams:
    case ErrorKind::NegativeTime:
    case ErrorKind::DomainError:
    case ErrorKind::InvalidSpec: return kExitInvalidArgs;
    case ErrorKind::Io: return kExitIo;
    case ErrorKind::KinkAtZero:
    case ErrorKind::OverlapExceedsPurity:
    case ErrorKind::QuadratureNotConverged:
    case ErrorKind::FrozenDynamics:
    case ErrorKind::StepUnderflow: return kExitNumerical;
    }
    return kExitNumerical;
}

}  // namespace

int cli_main(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Qubit dephasing under random telegraph noise: quantum speed limit and "
                 "coherence backflow",
                 "qsl_rtn"};
    app.set_version_flag("--version", std::string(kToolVersion));
    app.require_subcommand(1);

    Options o;
    std::string config_path;
    std::string sweep_name;

    auto add_global = [&](CLI::App& sub) {
        sub.add_option("--config", config_path, "JSON run-config (flat snake_case keys)");
        sub.add_option("--gamma", o.gamma, "switching rate (default 1)");
        auto* g = sub.add_option("--g", o.g, "coupling ratio lambda/gamma");
        auto* lam = sub.add_option("--lambda", o.lambda, "coupling strength");
        g->excludes(lam);
        sub.add_option("--dp0", o.dp0, "initial fluctuator bias (default 0)");
        sub.add_option("--omega", o.omega, "qubit frequency (default 0)");
        sub.add_option("--v", o.v, "extra phase parameter (default 0)");
        sub.add_option("--bloch", o.bloch, "initial Bloch vector rx,ry,rz (default 0.5,0.5,0.5)");
        sub.add_option("--tau", o.tau, "driving time");
        sub.add_option("--tmax", o.tmax, "time horizon");
        sub.add_option("--points", o.points, "grid points");
        sub.add_option("--traj", o.traj, "Monte Carlo trajectories");
        sub.add_option("--seed", o.seed, "base seed");
        sub.add_option("--threads", o.threads, "worker threads (default: QSL_RTN_THREADS or all cores)");
        sub.add_option("--out", o.out, "output file (default: stdout)");
        sub.add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
    };

    auto* evolve = app.add_subcommand("evolve", "Bloch vector and decay factor on a time grid");
    auto* qsl = app.add_subcommand("qsl", "quantum speed limit time for one driving time");
    auto* nonmark = app.add_subcommand("nonmark", "coherence backflow over [0, tmax]");
    auto* sweep = app.add_subcommand("sweep", "figure presets (fig1..fig5) or a custom sweep");
    auto* mc = app.add_subcommand("mc-validate", "Monte Carlo check of the closed-form decay");
    for (auto* sub : {evolve, qsl, nonmark, sweep, mc}) {
        add_global(*sub);
    }
    sweep->add_option("name", sweep_name, "preset name or 'custom'")->required();

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kExitOk;
    } catch (const CLI::CallForVersion&) {
        out << kToolVersion << '\n';
        return kExitOk;
    } catch (const CLI::ParseError& e) {
        err << "error: " << e.what() << '\n';
        return kExitInvalidArgs;
    }

    try {
        if (!config_path.empty()) {
            merge_config(o, config_path);
        }
        if (evolve->parsed()) {
            SweepSpec s;
            s.kind = SweepKind::Evolve;
            s.name = "evolve";
            s.params = resolve_params(o);
            s.g_values = {s.params.g()};
            s.dp0_values = {s.params.delta_p0};
            s.axis = {"gamma_t", 0.0, s.params.gamma * positive(o.tmax, 10.0 / s.params.gamma, "tmax"),
                      o.points.value_or(101), AxisScale::Linear};
            return run_sweep_command(s, o, out, err);
        }
        if (qsl->parsed()) {
            const RtnParams p = resolve_params(o);
            const BlochVector r0 = parse_bloch(o.bloch.value_or("0.5,0.5,0.5"));
            const double tau = positive(o.tau, 5.0 / p.gamma, "tau");
            const auto r = qsl_time(p, r0, tau);
            Table t{"qsl",
                    {"gamma_tau", "g", "dp0", "theta", "lambda_op", "lambda_tr", "lambda_hs",
                     "tau_qsl_gamma", "ratio"},
                    {{p.gamma * tau, p.g(), p.delta_p0, r.theta, r.lambda_op / p.gamma,
                      r.lambda_tr / p.gamma, r.lambda_hs / p.gamma, p.gamma * r.tau_qsl,
                      r.ratio}}};
            emit(t, o, out);
            return kExitOk;
        }
        if (nonmark->parsed()) {
            const RtnParams p = resolve_params(o);
            const BlochVector r0 = parse_bloch(o.bloch.value_or("0.5,0.5,0.5"));
            const double horizon = positive(o.tmax, 60.0 / p.gamma, "tmax");
            const auto r = n_coh(p, r0, horizon);
            const double c0 = r0.perp();
            Table t{"nonmark",
                    {"g", "dp0", "gamma_T", "n_coh", "n_coh_over_C0", "truncation_bound"},
                    {{p.g(), p.delta_p0, p.gamma * horizon, r.n_coh,
                      c0 > 0.0 ? r.n_coh / c0 : 0.0, r.truncation_bound}}};
            emit(t, o, out);
            return kExitOk;
        }
        if (sweep->parsed()) {
            SweepSpec s;
            if (sweep_name == "custom") {
                s = custom_spec(o);
            } else {
                s = preset_spec(sweep_name);
                // Presets fix g, dp0 and the grids; the frame (gamma, omega, v) stays adjustable.
                RtnParams p;
                p.gamma = o.gamma.value_or(1.0);
                p.omega = o.omega.value_or(0.0);
                p.v = o.v.value_or(0.0);
                p.validate();
                s.params = p;
            }
            return run_sweep_command(s, o, out, err);
        }
        if (mc->parsed()) {
            SweepSpec s;
            s.kind = SweepKind::McValidate;
            s.name = "mc-validate";
            s.params = resolve_params(o);
            s.g_values = {s.params.g()};
            s.dp0_values = {s.params.delta_p0};
            const double gamma_t_max = s.params.gamma * positive(o.tmax, 4.0 / s.params.gamma, "tmax");
            const int n = o.points.value_or(40);
            if (n < 2) {
                throw Error(ErrorKind::InvalidSpec, "points: need at least 2");
            }
            s.axis = {"gamma_t", gamma_t_max / n, gamma_t_max, n, AxisScale::Linear};
            return run_sweep_command(s, o, out, err);
        }
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return exit_code_for(e.kind());
    } catch (const std::exception& e) {
        err << "error: " << e.what() << '\n';
        return kExitNumerical;
    }
    return kExitInvalidArgs;
}

}  // namespace qslrtn
