#pragma once

#include "zener/config.hpp"
#include "zener/observables.hpp"

#include <functional>
#include <string>
#include <vector>

namespace zener {

/// State after step k: stresses X^k at t_k, displacement u^{k-1/2} at t_{k-1/2}.
struct HistoryRow {
    int step = 0;
    double t = 0.0;
    double t_half = 0.0;
    StressNorms norms;
    double elastic_energy = 0.0;
    double energy_norm = 0.0;      ///< sqrt(X^T M_A X)
    double discrete_energy = 0.0;  ///< E^{k-1} of the pair (X^{k-1}, X^k)
    double shifted_energy = 0.0;
    double displacement_l2 = 0.0;
    std::vector<Vec> probe_u;
    std::vector<Mat3> probe_sigma;
    std::vector<Mat3> probe_strain; ///< A gamma at the probe
};

struct ScenarioResult {
    std::vector<HistoryRow> history;
    std::vector<Vec> probes;
    double max_residual = 0.0;
    std::size_t dofs = 0;
    std::size_t cells = 0;
    std::vector<std::string> files; ///< written outputs
};

struct ScenarioRunOptions {
    bool write_files = true;
    std::function<void(const HistoryRow&)> progress;
};

/// Runs an application scenario from rest (zero initial stress and
/// velocity). Writes <dir>/<scenario>_history.csv and, when vtk_every > 0,
/// <dir>/<scenario>_<step>.vtk. Probes outside the mesh raise ConfigError.
ScenarioResult run_scenario(const RunConfig& cfg, const ScenarioRunOptions& opts = {});

/// Column names of the history CSV for a mesh dimension and probe count.
std::vector<std::string> history_columns(int dim, std::size_t num_probes);

} // namespace zener
