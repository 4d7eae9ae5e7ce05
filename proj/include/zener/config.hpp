#pragma once

#include "zener/linsolve.hpp"
#include "zener/materials.hpp"
#include "zener/mesh.hpp"

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace zener {

/// Either a generator with its parameters or a mesh file with a boundary
/// tag table.
struct MeshSpec {
    std::string generator; ///< unit_square | box | perforated_square | concentric_disk; empty for files
    int n = 2;
    std::array<int, 3> cells{1, 1, 1};
    std::array<double, 3> extents{1.0, 1.0, 1.0};
    int n_side = 8;
    int n_radial = 4;
    double radius = 0.25;
    std::vector<double> radii;
    std::vector<int> layers;
    int n_theta = 32;
    double arc_length = 0.0;

    std::string file;
    std::map<int, FacetKind> boundary_tags;
};

struct RunFlags {
    bool strict_paper_bc = false;
    bool load_at_tk = false;
    bool centered_postprocess = false;
};

struct OutputSpec {
    std::string directory = "output";
    /// Write a VTK file every this many steps (0: never).
    int vtk_every = 0;
};

/// How the penalty a follows from a*: `plain` uses a = a* k^2, and
/// `inverse_density` uses a = a* k^2 / rho_min. The face consistency terms
/// carry 1/rho, so small densities need the second form to keep the
/// stiffness positive semidefinite.
enum class PenaltyScaling { plain, inverse_density };

struct RunConfig {
    std::string scenario;
    MeshSpec mesh;
    int degree = 1;
    int quad_degree = -1;
    double final_time = 1.0;
    int steps = 2;
    double a_star = 5.0;
    PenaltyScaling penalty_scaling = PenaltyScaling::plain;
    std::map<int, MaterialRegion> materials;
    RunFlags flags;
    SolverOptions solver;
    int workers = 1;
    OutputSpec output;
    /// Planar points carry NaN as third coordinate until the mesh is known.
    std::vector<Vec> probes;
    /// Refinement levels for convergence studies: mesh n (space) or step counts (time).
    std::vector<int> levels;
    std::vector<int> degrees{1};

    double dt() const { return final_time / steps; }
    double penalty() const;
};

/// Thrown for schema violations; `pointer` is the JSON pointer of the field.
class ConfigSchemaError : public ConfigError {
public:
    ConfigSchemaError(const std::string& pointer, const std::string& what)
        : ConfigError(pointer + ": " + what), pointer_(pointer) {}
    const std::string& pointer() const noexcept { return pointer_; }

private:
    std::string pointer_;
};

/// Names of the shipped presets.
std::vector<std::string> preset_names();

/// Full configuration of a preset. Throws ConfigError for unknown names.
RunConfig preset_config(const std::string& name);

/// Parses a JSON document: the `scenario` preset supplies every field and
/// the document overrides it. Unknown keys are rejected. Relative mesh file
/// paths are resolved against `base_dir` when not found as given.
RunConfig parse_config_string(const std::string& text, const std::string& base_dir = ".");
RunConfig parse_config(const std::string& path);

/// Checks cross-field constraints (a* > 0, dt > 0, probes of the right
/// dimension, ...). Called by the parsers.
void validate_config(const RunConfig& cfg);

} // namespace zener
