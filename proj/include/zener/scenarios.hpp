#pragma once

#include "zener/config.hpp"
#include "zener/mms.hpp"
#include "zener/newmark.hpp"

#include <optional>

namespace zener {

/// Everything a run needs, resolved from a configuration.
struct Scenario {
    RunConfig config;
    Mesh mesh; ///< facets classified
    MaterialMap materials;
    LoadData loads;
    /// Present for the manufactured-solution presets.
    std::optional<ExactSolution> exact;
    InitialData initial;
    std::vector<Vec> probes;
};

bool is_mms_scenario(const std::string& name);

/// Builds the mesh described by the config and classifies its boundary:
/// the tag table for file meshes, the scenario's own rules otherwise.
Mesh build_mesh(const RunConfig& cfg);

/// Manufactured solution of an MMS preset, with the configured materials
/// (region 1) and penalty scale.
ExactSolution mms_solution(const RunConfig& cfg);

/// Throws ConfigError for unknown scenarios, regions without materials and
/// probes outside the mesh.
Scenario build_scenario(const RunConfig& cfg);

/// Time profile of the indentation pressure of the layered preset, in Pa.
double layered_pressure(double t);

} // namespace zener
