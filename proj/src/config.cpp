#include "zener/config.hpp"

#include "json.hpp"

#include <cmath>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

namespace zener {

using nlohmann::json;

namespace {

// Presets are kept as JSON so that user documents and presets go through the
// same reader.
const char* const kPresets = R"json({
  "mms-space": {
    "mesh": {"generator": "unit_square", "n": 2},
    "degree": 1,
    "time": {"final_time": 5e-6, "steps": 5},
    "a_star": 5,
    "materials": {"1": {"C": {"E": 1, "nu": 0.25}, "D": {"E": 10, "nu": 0.4}, "rho": 1, "omega": 0.01}},
    "convergence": {"levels": [2, 4, 8, 16], "degrees": [1, 2, 3]}
  },
  "mms-time": {
    "mesh": {"generator": "unit_square", "n": 8},
    "degree": 1,
    "time": {"final_time": 1, "steps": 8},
    "a_star": 10,
    "materials": {"1": {"C": {"E": 10, "nu": 0.4}, "D": {"E": 20, "nu": 0.45}, "rho": 1, "omega": 2}},
    "convergence": {"levels": [2, 4, 8, 16, 32, 64], "degrees": [1]}
  },
  "plate": {
    "mesh": {"generator": "perforated_square", "n_side": 8, "n_radial": 6, "radius": 0.25},
    "degree": 2,
    "time": {"final_time": 15, "dt": 0.1},
    "a_star": 10,
    "materials": {"1": {"C": {"E": 30, "nu": 0.3}, "D": {"E": 40, "nu": 0.49}, "rho": 1, "omega": 0.15,
                        "plane_stress": true}},
    "probes": [[0.5, 0.82]]
  },
  "slab-creep": {
    "mesh": {"generator": "box", "cells": [12, 6, 6], "extents": [1, 0.5, 0.5]},
    "degree": 1,
    "time": {"final_time": 5, "dt": 0.03},
    "a_star": 15,
    "penalty_scaling": "inverse_density",
    "materials": {"1": {"C": {"mu": 20, "lambda": 100}, "D": {"mu": 50, "lambda": 200}, "rho": 1e-3,
                        "omega": 0.16666666666666666}},
    "probes": [[0.5, 0.25, 0.25]]
  },
  "slab-cyclic": {
    "mesh": {"generator": "box", "cells": [12, 6, 6], "extents": [1, 0.5, 0.5]},
    "degree": 1,
    "time": {"final_time": 5, "dt": 0.03},
    "a_star": 15,
    "penalty_scaling": "inverse_density",
    "materials": {"1": {"C": {"mu": 20, "lambda": 100}, "D": {"mu": 50, "lambda": 200}, "rho": 1e-3,
                        "omega": 0.16666666666666666}},
    "probes": [[0.5, 0.25, 0.25]]
  },
  "layered": {
    "mesh": {"generator": "concentric_disk", "radii": [0.0035, 0.006, 0.0065], "layers": [4, 3, 1],
             "n_theta": 32, "arc_length": 0.004},
    "degree": 1,
    "time": {"final_time": 1, "dt": 0.01},
    "a_star": 10,
    "materials": {
      "1": {"C": {"E": 1600, "nu": 0.49}, "D": {"E": 2030, "nu": 0.49}, "rho": 1000, "omega": 0.14925373134328357},
      "2": {"C": {"E": 840, "nu": 0.479}, "D": {"E": 2030, "nu": 0.49}, "rho": 1000, "omega": 0.14925373134328357},
      "3": {"C": {"E": 2300, "nu": 0.3}, "D": {"E": 2530, "nu": 0.3}, "rho": 1000, "omega": 0.001}
    },
    "probes": [[0.0, 0.00625], [0.0, 0.0045], [0.0, 0.0015]]
  }
})json";

const json& presets()
{
    static const json p = json::parse(kPresets);
    return p;
}

std::string child(const std::string& ptr, const std::string& key) { return ptr + "/" + key; }

[[noreturn]] void fail(const std::string& ptr, const std::string& what) { throw ConfigSchemaError(ptr, what); }

void allow_keys(const json& obj, const std::string& ptr, const std::set<std::string>& keys)
{
    if (!obj.is_object())
        fail(ptr.empty() ? "/" : ptr, "expected an object");
    for (const auto& [k, v] : obj.items()) {
        (void)v;
        if (!keys.count(k))
            fail(child(ptr, k), "unknown key");
    }
}

double get_number(const json& obj, const std::string& key, const std::string& ptr)
{
    const json& v = obj.at(key);
    if (!v.is_number())
        fail(child(ptr, key), "expected a number");
    const double x = v.get<double>();
    if (!std::isfinite(x))
        fail(child(ptr, key), "expected a finite number");
    return x;
}

int get_int(const json& obj, const std::string& key, const std::string& ptr)
{
    const json& v = obj.at(key);
    if (!v.is_number_integer())
        fail(child(ptr, key), "expected an integer");
    return v.get<int>();
}

bool get_bool(const json& obj, const std::string& key, const std::string& ptr)
{
    const json& v = obj.at(key);
    if (!v.is_boolean())
        fail(child(ptr, key), "expected true or false");
    return v.get<bool>();
}

std::string get_string(const json& obj, const std::string& key, const std::string& ptr)
{
    const json& v = obj.at(key);
    if (!v.is_string())
        fail(child(ptr, key), "expected a string");
    return v.get<std::string>();
}

std::vector<int> get_int_array(const json& obj, const std::string& key, const std::string& ptr)
{
    const json& v = obj.at(key);
    if (!v.is_array())
        fail(child(ptr, key), "expected an array");
    std::vector<int> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number_integer())
            fail(child(ptr, key) + "/" + std::to_string(i), "expected an integer");
        out.push_back(v[i].get<int>());
    }
    return out;
}

std::vector<double> get_double_array(const json& obj, const std::string& key, const std::string& ptr)
{
    const json& v = obj.at(key);
    if (!v.is_array())
        fail(child(ptr, key), "expected an array");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); ++i) {
        if (!v[i].is_number())
            fail(child(ptr, key) + "/" + std::to_string(i), "expected a number");
        out.push_back(v[i].get<double>());
    }
    return out;
}

int parse_region_key(const std::string& key, const std::string& ptr)
{
    try {
        std::size_t pos = 0;
        const int r = std::stoi(key, &pos);
        if (pos == key.size())
            return r;
    } catch (const std::exception&) {
    }
    fail(child(ptr, key), "region keys must be integers");
}

/// Deep merge of `over` onto `base`. Objects whose parts are alternatives
/// (mesh, a Hooke law, time) are replaced as a whole when overridden, apart
/// from `final_time`, which survives a switch between `steps` and `dt`.
void merge_into(json& base, const json& over, const std::string& key)
{
    if (key == "mesh" || key == "C" || key == "D" || !base.is_object() || !over.is_object()) {
        base = over;
        return;
    }
    if (key == "time") {
        if (over.contains("steps") || over.contains("dt")) {
            base.erase("steps");
            base.erase("dt");
        }
    }
    for (const auto& [k, v] : over.items()) {
        if (base.contains(k))
            merge_into(base[k], v, k);
        else
            base[k] = v;
    }
}

IsotropicLaw parse_law(const json& j, const std::string& ptr)
{
    allow_keys(j, ptr, {"E", "nu", "mu", "lambda"});
    const bool young = j.contains("E") || j.contains("nu");
    const bool lame = j.contains("mu") || j.contains("lambda");
    if (young && lame)
        fail(ptr, "give either E/nu or mu/lambda, not both");
    try {
        if (young) {
            if (!j.contains("E") || !j.contains("nu"))
                fail(ptr, "E and nu must be given together");
            return lame_from_young_poisson(get_number(j, "E", ptr), get_number(j, "nu", ptr));
        }
        if (!j.contains("mu") || !j.contains("lambda"))
            fail(ptr, "mu and lambda must be given together");
        return IsotropicLaw{get_number(j, "mu", ptr), get_number(j, "lambda", ptr), false};
    } catch (const MaterialError& e) {
        fail(ptr, e.what());
    }
}

FacetKind parse_kind(const std::string& s, const std::string& ptr)
{
    if (s == "dirichlet")
        return FacetKind::dirichlet;
    if (s == "neumann")
        return FacetKind::neumann;
    fail(ptr, "expected \"dirichlet\" or \"neumann\"");
}

MeshSpec parse_mesh(const json& j, const std::string& ptr, const std::string& base_dir)
{
    MeshSpec m;
    if (!j.is_object())
        fail(ptr, "expected an object");
    const bool gen = j.contains("generator");
    const bool file = j.contains("file");
    if (gen == file)
        fail(ptr, "exactly one of \"generator\" and \"file\" is required");
    if (file) {
        allow_keys(j, ptr, {"file", "boundary"});
        m.file = get_string(j, "file", ptr);
        namespace fs = std::filesystem;
        if (!fs::exists(m.file) && fs::path(m.file).is_relative() && fs::exists(fs::path(base_dir) / m.file))
            m.file = (fs::path(base_dir) / m.file).string();
        if (j.contains("boundary")) {
            const std::string bp = child(ptr, "boundary");
            const json& b = j.at("boundary");
            if (!b.is_object())
                fail(bp, "expected an object mapping tags to kinds");
            for (const auto& [k, v] : b.items()) {
                const int tag = parse_region_key(k, bp);
                if (!v.is_string())
                    fail(child(bp, k), "expected a string");
                m.boundary_tags[tag] = parse_kind(v.get<std::string>(), child(bp, k));
            }
        }
        return m;
    }
    m.generator = get_string(j, "generator", ptr);
    if (m.generator == "unit_square") {
        allow_keys(j, ptr, {"generator", "n"});
        if (j.contains("n"))
            m.n = get_int(j, "n", ptr);
        if (m.n < 1)
            fail(child(ptr, "n"), "must be at least 1");
    } else if (m.generator == "box") {
        allow_keys(j, ptr, {"generator", "cells", "extents"});
        if (j.contains("cells")) {
            const auto c = get_int_array(j, "cells", ptr);
            if (c.size() != 3)
                fail(child(ptr, "cells"), "expected three integers");
            for (int i = 0; i < 3; ++i) {
                if (c[i] < 1)
                    fail(child(ptr, "cells") + "/" + std::to_string(i), "must be at least 1");
                m.cells[i] = c[i];
            }
        }
        if (j.contains("extents")) {
            const auto e = get_double_array(j, "extents", ptr);
            if (e.size() != 3)
                fail(child(ptr, "extents"), "expected three numbers");
            for (int i = 0; i < 3; ++i) {
                if (!(e[i] > 0.0))
                    fail(child(ptr, "extents") + "/" + std::to_string(i), "must be positive");
                m.extents[i] = e[i];
            }
        }
    } else if (m.generator == "perforated_square") {
        allow_keys(j, ptr, {"generator", "n_side", "n_radial", "radius"});
        if (j.contains("n_side"))
            m.n_side = get_int(j, "n_side", ptr);
        if (j.contains("n_radial"))
            m.n_radial = get_int(j, "n_radial", ptr);
        if (j.contains("radius"))
            m.radius = get_number(j, "radius", ptr);
        if (m.n_side < 1)
            fail(child(ptr, "n_side"), "must be at least 1");
        if (m.n_radial < 1)
            fail(child(ptr, "n_radial"), "must be at least 1");
        if (!(m.radius > 0.0 && m.radius < 0.5))
            fail(child(ptr, "radius"), "must lie in (0, 0.5)");
    } else if (m.generator == "concentric_disk") {
        allow_keys(j, ptr, {"generator", "radii", "layers", "n_theta", "arc_length"});
        for (const char* key : {"radii", "layers", "arc_length"})
            if (!j.contains(key))
                fail(child(ptr, key), "required");
        m.radii = get_double_array(j, "radii", ptr);
        m.layers = get_int_array(j, "layers", ptr);
        m.arc_length = get_number(j, "arc_length", ptr);
        if (j.contains("n_theta"))
            m.n_theta = get_int(j, "n_theta", ptr);
        if (m.radii.empty() || m.radii.size() != m.layers.size())
            fail(child(ptr, "layers"), "needs one entry per radius");
        for (std::size_t i = 0; i < m.radii.size(); ++i) {
            if (!(m.radii[i] > (i ? m.radii[i - 1] : 0.0)))
                fail(child(ptr, "radii") + "/" + std::to_string(i), "radii must be positive and increasing");
            if (m.layers[i] < 1)
                fail(child(ptr, "layers") + "/" + std::to_string(i), "must be at least 1");
        }
        if (m.n_theta < 4)
            fail(child(ptr, "n_theta"), "must be at least 4");
        if (!(m.arc_length > 0.0 && m.arc_length < M_PI * m.radii.back()))
            fail(child(ptr, "arc_length"), "must be positive and shorter than half the circumference");
    } else {
        fail(child(ptr, "generator"), "unknown generator \"" + m.generator + "\"");
    }
    return m;
}

MaterialRegion parse_region(const json& j, const std::string& ptr)
{
    allow_keys(j, ptr, {"C", "D", "rho", "omega", "plane_stress"});
    for (const char* key : {"C", "D", "rho", "omega"})
        if (!j.contains(key))
            fail(child(ptr, key), "required");
    MaterialRegion r;
    r.law_C = parse_law(j.at("C"), child(ptr, "C"));
    r.law_D = parse_law(j.at("D"), child(ptr, "D"));
    r.rho = get_number(j, "rho", ptr);
    r.omega = get_number(j, "omega", ptr);
    if (j.contains("plane_stress"))
        r.plane_stress = get_bool(j, "plane_stress", ptr);
    if (!(r.rho > 0.0))
        fail(child(ptr, "rho"), "must be positive");
    if (!(r.omega > 0.0))
        fail(child(ptr, "omega"), "must be positive");
    return r;
}

RunConfig from_json(const json& doc, const std::string& base_dir)
{
    allow_keys(doc, "", {"scenario", "mesh", "degree", "quadrature_degree", "time", "a_star", "penalty_scaling",
                         "materials", "flags", "solver", "output", "probes", "convergence"});
    RunConfig cfg;
    cfg.scenario = get_string(doc, "scenario", "");
    cfg.mesh = parse_mesh(doc.at("mesh"), "/mesh", base_dir);
    cfg.degree = get_int(doc, "degree", "");
    if (cfg.degree < 1)
        fail("/degree", "must be at least 1");
    if (doc.contains("quadrature_degree")) {
        cfg.quad_degree = get_int(doc, "quadrature_degree", "");
        if (cfg.quad_degree < 2 * cfg.degree)
            fail("/quadrature_degree", "must be at least twice the polynomial degree");
    }

    const json& t = doc.at("time");
    allow_keys(t, "/time", {"final_time", "steps", "dt"});
    cfg.final_time = get_number(t, "final_time", "/time");
    if (!(cfg.final_time > 0.0))
        fail("/time/final_time", "must be positive");
    if (t.contains("steps") == t.contains("dt"))
        fail("/time", "exactly one of \"steps\" and \"dt\" is required");
    if (t.contains("steps")) {
        cfg.steps = get_int(t, "steps", "/time");
    } else {
        const double dt = get_number(t, "dt", "/time");
        if (!(dt > 0.0))
            fail("/time/dt", "must be positive");
        // A step that does not divide final_time extends the run to the next
        // multiple of dt, so the step length stays as given.
        const double n = std::ceil(cfg.final_time / dt - 1e-9);
        cfg.steps = static_cast<int>(n);
        cfg.final_time = n * dt;
    }
    if (cfg.steps < 2)
        fail("/time", "at least two steps are required");

    cfg.a_star = get_number(doc, "a_star", "");
    if (!(cfg.a_star > 0.0))
        fail("/a_star", "must be positive");
    if (doc.contains("penalty_scaling")) {
        const std::string ps = get_string(doc, "penalty_scaling", "");
        if (ps == "plain")
            cfg.penalty_scaling = PenaltyScaling::plain;
        else if (ps == "inverse_density")
            cfg.penalty_scaling = PenaltyScaling::inverse_density;
        else
            fail("/penalty_scaling", "expected \"plain\" or \"inverse_density\"");
    }

    const json& mats = doc.at("materials");
    if (!mats.is_object() || mats.empty())
        fail("/materials", "expected a non-empty object keyed by region");
    for (const auto& [k, v] : mats.items())
        cfg.materials[parse_region_key(k, "/materials")] = parse_region(v, child("/materials", k));

    if (doc.contains("flags")) {
        const json& f = doc.at("flags");
        allow_keys(f, "/flags", {"strict_paper_bc", "load_at_tk", "centered_postprocess"});
        if (f.contains("strict_paper_bc"))
            cfg.flags.strict_paper_bc = get_bool(f, "strict_paper_bc", "/flags");
        if (f.contains("load_at_tk"))
            cfg.flags.load_at_tk = get_bool(f, "load_at_tk", "/flags");
        if (f.contains("centered_postprocess"))
            cfg.flags.centered_postprocess = get_bool(f, "centered_postprocess", "/flags");
    }

    if (doc.contains("solver")) {
        const json& s = doc.at("solver");
        allow_keys(s, "/solver", {"method", "tol", "max_iterations", "workers", "preconditioner", "direct_limit"});
        if (s.contains("method")) {
            const std::string m = get_string(s, "method", "/solver");
            if (m == "auto")
                cfg.solver.method = SolverMethod::automatic;
            else if (m == "cg")
                cfg.solver.method = SolverMethod::conjugate_gradient;
            else if (m == "direct")
                cfg.solver.method = SolverMethod::direct;
            else
                fail("/solver/method", "expected \"auto\", \"cg\" or \"direct\"");
        }
        if (s.contains("tol")) {
            cfg.solver.tol = get_number(s, "tol", "/solver");
            if (!(cfg.solver.tol > 0.0 && cfg.solver.tol < 1.0))
                fail("/solver/tol", "must lie in (0, 1)");
        }
        if (s.contains("max_iterations")) {
            cfg.solver.max_iterations = get_int(s, "max_iterations", "/solver");
            if (cfg.solver.max_iterations < 0)
                fail("/solver/max_iterations", "must not be negative");
        }
        if (s.contains("direct_limit")) {
            cfg.solver.direct_limit = get_int(s, "direct_limit", "/solver");
            if (cfg.solver.direct_limit < 0)
                fail("/solver/direct_limit", "must not be negative");
        }
        if (s.contains("workers")) {
            cfg.workers = get_int(s, "workers", "/solver");
            if (cfg.workers < 1)
                fail("/solver/workers", "must be at least 1");
        }
        if (s.contains("preconditioner")) {
            const std::string p = get_string(s, "preconditioner", "/solver");
            if (p == "block_jacobi")
                cfg.solver.block_size = 1;
            else if (p == "none")
                cfg.solver.block_size = 0;
            else
                fail("/solver/preconditioner", "expected \"block_jacobi\" or \"none\"");
        }
    }

    if (doc.contains("output")) {
        const json& o = doc.at("output");
        allow_keys(o, "/output", {"directory", "vtk_every"});
        if (o.contains("directory"))
            cfg.output.directory = get_string(o, "directory", "/output");
        if (o.contains("vtk_every")) {
            cfg.output.vtk_every = get_int(o, "vtk_every", "/output");
            if (cfg.output.vtk_every < 0)
                fail("/output/vtk_every", "must not be negative");
        }
    }

    if (doc.contains("probes")) {
        const json& p = doc.at("probes");
        if (!p.is_array())
            fail("/probes", "expected an array of points");
        for (std::size_t i = 0; i < p.size(); ++i) {
            const std::string pp = "/probes/" + std::to_string(i);
            if (!p[i].is_array() || p[i].size() < 2 || p[i].size() > 3)
                fail(pp, "expected a point with 2 or 3 coordinates");
            Vec x = Vec::Zero();
            for (std::size_t a = 0; a < p[i].size(); ++a) {
                if (!p[i][a].is_number())
                    fail(pp + "/" + std::to_string(a), "expected a number");
                x[static_cast<Eigen::Index>(a)] = p[i][a].get<double>();
            }
            cfg.probes.push_back(x);
            if (p[i].size() == 2)
                cfg.probes.back()[2] = std::nan("");
        }
    }

    if (doc.contains("convergence")) {
        const json& c = doc.at("convergence");
        allow_keys(c, "/convergence", {"levels", "degrees"});
        if (c.contains("levels"))
            cfg.levels = get_int_array(c, "levels", "/convergence");
        if (c.contains("degrees"))
            cfg.degrees = get_int_array(c, "degrees", "/convergence");
        for (std::size_t i = 0; i < cfg.levels.size(); ++i)
            if (cfg.levels[i] < 1)
                fail("/convergence/levels/" + std::to_string(i), "must be at least 1");
        for (std::size_t i = 0; i < cfg.degrees.size(); ++i)
            if (cfg.degrees[i] < 1)
                fail("/convergence/degrees/" + std::to_string(i), "must be at least 1");
    }
    return cfg;
}

int mesh_dim(const MeshSpec& m)
{
    if (m.generator == "box")
        return 3;
    if (!m.generator.empty())
        return 2;
    return 0; // file meshes: known only after reading
}

} // namespace

double RunConfig::penalty() const
{
    double a = a_star * degree * degree;
    if (penalty_scaling == PenaltyScaling::inverse_density && !materials.empty()) {
        double rho_min = materials.begin()->second.rho;
        for (const auto& [r, m] : materials)
            rho_min = std::min(rho_min, m.rho);
        a /= rho_min;
    }
    return a;
}

std::vector<std::string> preset_names()
{
    std::vector<std::string> names;
    for (const auto& [k, v] : presets().items()) {
        (void)v;
        names.push_back(k);
    }
    return names;
}

RunConfig preset_config(const std::string& name)
{
    return parse_config_string(json{{"scenario", name}}.dump());
}

void validate_config(const RunConfig& cfg)
{
    const int d = mesh_dim(cfg.mesh);
    for (std::size_t i = 0; i < cfg.probes.size(); ++i) {
        const bool planar = std::isnan(cfg.probes[i][2]);
        if (d != 0 && planar != (d == 2))
            fail("/probes/" + std::to_string(i), "point dimension does not match the mesh");
    }
    if (d != 0) {
        for (const auto& [r, m] : cfg.materials) {
            try {
                MaterialRegion adj = m;
                if (d == 2 && adj.plane_stress) {
                    adj.law_C = plane_stress_adjust(adj.law_C);
                    adj.law_D = plane_stress_adjust(adj.law_D);
                }
                validate_region(adj, d);
            } catch (const MaterialError& e) {
                fail("/materials/" + std::to_string(r), e.what());
            }
        }
    }
}

RunConfig parse_config_string(const std::string& text, const std::string& base_dir)
{
    json doc;
    try {
        doc = json::parse(text);
    } catch (const json::parse_error& e) {
        throw ConfigSchemaError("/", std::string("invalid JSON: ") + e.what());
    }
    if (!doc.is_object())
        fail("/", "expected an object");
    if (!doc.contains("scenario"))
        fail("/scenario", "required");
    const std::string name = get_string(doc, "scenario", "");
    if (!presets().contains(name)) {
        std::string list;
        for (const auto& n : preset_names())
            list += (list.empty() ? "" : ", ") + n;
        fail("/scenario", "unknown scenario \"" + name + "\" (known: " + list + ")");
    }
    json merged = presets().at(name);
    merge_into(merged, doc, "");
    RunConfig cfg = from_json(merged, base_dir);
    validate_config(cfg);
    return cfg;
}

RunConfig parse_config(const std::string& path)
{
    std::ifstream in(path);
    if (!in)
        throw ConfigError("cannot open config file " + path);
    std::stringstream ss;
    ss << in.rdbuf();
    return parse_config_string(ss.str(), std::filesystem::path(path).parent_path().string());
}

} // namespace zener
