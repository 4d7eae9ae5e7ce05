#include "zener/scenarios.hpp"

#include "zener/observables.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

namespace zener {

namespace {

constexpr double kGeomTol = 1e-9;

std::vector<BoundaryRule> scenario_rules(const std::string& name, const Mesh& mesh)
{
    using K = FacetKind;
    if (is_mms_scenario(name))
        return {BoundaryRule::everywhere(K::dirichlet)};
    if (name == "plate")
        return {BoundaryRule::by_tag(1, K::dirichlet), BoundaryRule::by_tag(2, K::neumann),
                BoundaryRule::by_tag(3, K::neumann), BoundaryRule::by_tag(4, K::neumann)};
    if (name == "slab-creep" || name == "slab-cyclic") {
        (void)mesh;
        return {BoundaryRule::where(on_plane(0, 0.0, kGeomTol), K::dirichlet), BoundaryRule::everywhere(K::neumann)};
    }
    if (name == "layered")
        return {BoundaryRule::by_tag(1, K::dirichlet), BoundaryRule::by_tag(2, K::neumann),
                BoundaryRule::by_tag(3, K::neumann)};
    throw ConfigError("unknown scenario \"" + name + "\"");
}

Mesh generate(const MeshSpec& m)
{
    if (m.generator == "unit_square")
        return unit_square_structured(m.n);
    if (m.generator == "box")
        return box_structured_tet(m.cells[0], m.cells[1], m.cells[2], m.extents);
    if (m.generator == "perforated_square")
        return perforated_square(m.n_side, m.n_radial, m.radius);
    if (m.generator == "concentric_disk")
        return concentric_disk(m.radii, m.layers, m.n_theta, m.arc_length);
    throw ConfigError("unknown mesh generator \"" + m.generator + "\"");
}

double max_coordinate(const Mesh& mesh, int axis)
{
    double v = -std::numeric_limits<double>::infinity();
    for (const Vec& x : mesh.vertices())
        v = std::max(v, x[axis]);
    return v;
}

double max_radius(const Mesh& mesh)
{
    double r = 0.0;
    for (const Vec& x : mesh.vertices())
        r = std::max(r, x.head<2>().norm());
    return r;
}

bool closed_window(double t, double from, double to) { return t >= from && t <= to; }

} // namespace

bool is_mms_scenario(const std::string& name) { return name == "mms-space" || name == "mms-time"; }

double layered_pressure(double t)
{
    // half-sine pulse of 0.7 s peaking at 650 Pa
    constexpr double peak = 650.0, width = 0.7;
    return closed_window(t, 0.0, width) ? peak * std::sin(std::numbers::pi * t / width) : 0.0;
}

Mesh build_mesh(const RunConfig& cfg)
{
    const MeshSpec& m = cfg.mesh;
    if (m.generator.empty()) {
        Mesh mesh = read_mesh(m.file);
        if (m.boundary_tags.empty())
            return classify_facets(mesh, scenario_rules(cfg.scenario, mesh));
        std::vector<BoundaryRule> rules;
        for (const auto& [tag, kind] : m.boundary_tags)
            rules.push_back(BoundaryRule::by_tag(tag, kind));
        return classify_facets(mesh, rules);
    }
    const Mesh mesh = generate(m);
    return classify_facets(mesh, scenario_rules(cfg.scenario, mesh));
}

ExactSolution mms_solution(const RunConfig& cfg)
{
    auto it = cfg.materials.find(1);
    if (it == cfg.materials.end())
        throw ConfigError("manufactured-solution runs need materials for region 1");
    MaterialRegion region = it->second;
    if (region.plane_stress) {
        region.law_C = plane_stress_adjust(region.law_C);
        region.law_D = plane_stress_adjust(region.law_D);
    }
    ExactSolution ex;
    if (cfg.scenario == "mms-space")
        ex = example1_space_solution(region);
    else if (cfg.scenario == "mms-time")
        ex = example1_time_solution(region);
    else
        throw ConfigError("scenario \"" + cfg.scenario + "\" has no manufactured solution");
    ex.a_star = cfg.a_star;
    return ex;
}

Scenario build_scenario(const RunConfig& cfg)
{
    Scenario sc;
    sc.config = cfg;
    sc.mesh = build_mesh(cfg);
    const int d = sc.mesh.dim();
    const std::string& name = cfg.scenario;

    if (is_mms_scenario(name)) {
        if (d != 2)
            throw ConfigError("manufactured-solution runs are two-dimensional");
        sc.exact = mms_solution(cfg);
        sc.materials = MaterialMap(cfg.materials, d);
        sc.loads = load_data(*sc.exact);
    } else {
        sc.materials = MaterialMap(cfg.materials, d);
        const auto zero = [](const Vec&, double) -> Vec { return Vec::Zero(); };
        sc.loads.F = zero;
        sc.loads.g_D = zero;
        sc.loads.g_D_ddot = zero;
        if (name == "plate") {
            sc.loads.g_N = [](const Vec& x, const Vec&, double t) -> Vec {
                if (std::abs(x[1] - 1.0) > kGeomTol || !closed_window(t, 0.0, 1.0))
                    return Vec::Zero();
                return Vec(0.0, -0.5 * std::sin(std::numbers::pi * t / 5.0), 0.0);
            };
        } else if (name == "slab-creep" || name == "slab-cyclic") {
            const double xmax = max_coordinate(sc.mesh, 0);
            const bool creep = name == "slab-creep";
            sc.loads.g_N = [xmax, creep](const Vec& x, const Vec&, double t) -> Vec {
                if (std::abs(x[0] - xmax) > kGeomTol)
                    return Vec::Zero();
                if (creep)
                    return Vec(closed_window(t, 0.3, 3.0) ? 1.0 : 0.0, 0.0, 0.0);
                return Vec(closed_window(t, 0.0, 3.0) ? 0.5 * std::sin(std::numbers::pi * t) : 0.0, 0.0, 0.0);
            };
        } else if (name == "layered") {
            const double R = max_radius(sc.mesh);
            double arc = cfg.mesh.arc_length;
            if (!(arc > 0.0))
                arc = 0.004;
            const double cos_half = std::cos(0.5 * arc / R);
            sc.loads.g_N = [R, cos_half](const Vec& x, const Vec&, double t) -> Vec {
                const double r = x.head<2>().norm();
                // facet quadrature points sit on chords slightly inside the circle
                if (r < 0.98 * R || x[1] < cos_half * r * (1.0 - 1e-9))
                    return Vec::Zero();
                return Vec(0.0, -layered_pressure(t), 0.0);
            };
        } else {
            throw ConfigError("unknown scenario \"" + name + "\"");
        }
        sc.initial.sigma0 = [](const Vec&, double) -> Mat3 { return Mat3::Zero(); };
    }
    sc.materials.check_covers(sc.mesh.regions());

    for (std::size_t i = 0; i < cfg.probes.size(); ++i) {
        Vec x = cfg.probes[i];
        const bool planar = std::isnan(x[2]);
        if (planar != (d == 2))
            throw ConfigError("probe " + std::to_string(i) + " does not match the mesh dimension");
        if (planar)
            x[2] = 0.0;
        locate_probe(sc.mesh, x);
        sc.probes.push_back(x);
    }
    return sc;
}

} // namespace zener
