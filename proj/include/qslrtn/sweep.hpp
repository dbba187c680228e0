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

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qslrtn/dephasing.hpp"
#include "qslrtn/quadrature.hpp"
#include "qslrtn/state.hpp"

namespace qslrtn {

inline constexpr std::string_view kToolVersion = "0.1.0";

enum class SweepKind { Evolve, QslVsTau, NonmarkVsTau, NonmarkVsG, QslVsG, QslVsDp0, McValidate };
enum class AxisScale { Linear, Log };
enum class OutputFormat { Csv, Json };

std::string_view to_string(SweepKind kind);
std::optional<SweepKind> parse_sweep_kind(std::string_view text);

struct Axis {
    std::string name;
    double min = 0.0;
    double max = 1.0;
    int points = 2;
    AxisScale scale = AxisScale::Linear;

    /// Grid values, endpoints included exactly.
    std::vector<double> values() const;
};

/// One sweep: an axis crossed with series over g and dp0. Times on the axis
/// are dimensionless (gamma t); physical time only enters through params.gamma.
struct SweepSpec {
    SweepKind kind = SweepKind::QslVsTau;
    std::string name = "custom";
    Axis axis;
    RtnParams params;
    BlochVector bloch{0.5, 0.5, 0.5};
    std::vector<double> g_values;
    std::vector<double> dp0_values;
    /// Also evaluate -dp0 for each dp0 > 0 and emit it only where it differs.
    bool mirror_dp0 = false;
    double gamma_tau = 5.0;       ///< fixed driving time for *-vs-g / *-vs-dp0
    double gamma_horizon = 60.0;  ///< backflow horizon for nonmark-vs-g
    std::size_t n_traj = 100000;
    std::uint64_t seed = 1;
    unsigned threads = 0;
    QuadratureSettings quadrature;

    /// Throws Error{InvalidSpec} naming the offending field.
    void validate() const;
};

struct Table {
    std::string name;
    std::vector<std::string> columns;
    std::vector<std::vector<double>> rows;
};

struct SweepOutcome {
    Table table;
    bool dp0_collapsed = false;        ///< a mirrored -dp0 series matched and was dropped
    double fraction_within_4sigma = 1.0;  ///< mc-validate only
    double wall_seconds = 0.0;
};

/// Names accepted by preset_spec.
const std::vector<std::string>& preset_names();

/// Grids of the published figures; throws Error{InvalidSpec} for an unknown name.
SweepSpec preset_spec(std::string_view name);

SweepOutcome run_sweep(const SweepSpec& spec);

/// 9 significant digits, '.' separator, independent of the global locale.
std::string format_number(double x);
std::string render_csv(const Table& table);
std::string render_json(const Table& table);
std::string render(const Table& table, OutputFormat format);

/// Writes through a temporary file and renames; throws Error{Io}.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace qslrtn
