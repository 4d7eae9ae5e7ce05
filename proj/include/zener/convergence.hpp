#pragma once

#include "zener/config.hpp"
#include "zener/observables.hpp"

#include <functional>
#include <optional>
#include <string>
#include <vector>

namespace zener {

enum class ConvergenceMode { space, time };

ConvergenceMode parse_convergence_mode(const std::string& s);
const char* to_string(ConvergenceMode mode);

/// Result of one manufactured-solution run.
struct MmsRun {
    int degree = 1;
    int n = 0;      ///< mesh parameter of the unit square
    int steps = 0;
    double h = 0.0; ///< largest cell diameter
    double dt = 0.0;
    std::size_t dofs = 0;
    /// Max over half steps n >= 1 of each norm.
    ErrorRecord max;
    /// One record per half step, including n = 0.
    std::vector<ErrorRecord> history;
    double max_residual = 0.0;
    long solver_iterations = 0;
};

/// Runs the manufactured solution of an MMS config on its own mesh and
/// time grid. Throws ConfigError for other scenarios.
MmsRun run_mms(const RunConfig& cfg);

struct Rates {
    std::optional<double> E, e0, ediv, ejump, e0_u;
};

struct ConvergenceRow {
    MmsRun run;
    Rates rates;
    /// h in space mode, dt in time mode.
    double parameter() const;
    ConvergenceMode mode = ConvergenceMode::space;
};

struct ErrorReport {
    ConvergenceMode mode = ConvergenceMode::space;
    std::vector<ConvergenceRow> rows; ///< grouped by degree, refinement order within a group
    double max_residual() const;
};

using ProgressCallback = std::function<void(const MmsRun&)>;

/// Space mode: fixed time grid, unit-square meshes n in `levels`, one group
/// per configured degree. Time mode: fixed mesh, step counts in `levels` on
/// [0, T]. Empty `levels` falls back to the config's list; if that is
/// empty too, throws std::invalid_argument.
ErrorReport run_convergence(ConvergenceMode mode, const RunConfig& cfg, const std::vector<int>& levels = {},
                            const ProgressCallback& progress = {});

/// Columns: degree, level, h, dt, dofs, then for E, e0, ediv, ejump, e0_u a
/// four-digit value, its rate and a full-precision value, then norm_sym,
/// e_dot and the max scheme residual.
void write_error_report_csv(const ErrorReport& report, const std::string& path);

} // namespace zener
