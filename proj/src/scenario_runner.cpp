#include "zener/scenario_runner.hpp"

#include "zener/newmark.hpp"
#include "zener/output.hpp"
#include "zener/scenarios.hpp"
#include "zener/symtensor.hpp"

#include <cstdio>
#include <filesystem>
#include <optional>

namespace zener {

namespace {

const char* const kAxes = "xyz";

std::string component_name(int dim, int a)
{
    const auto pq = sym_pair(dim, a);
    return std::string{kAxes[pq[0]], kAxes[pq[1]]};
}

std::string vtk_name(const std::string& dir, const std::string& scenario, int step)
{
    char buf[32];
    std::snprintf(buf, sizeof buf, "_%05d.vtk", step);
    return (std::filesystem::path(dir) / (scenario + buf)).string();
}

} // namespace

std::vector<std::string> history_columns(int dim, std::size_t num_probes)
{
    std::vector<std::string> cols{"step",         "t",           "t_half",          "gamma_l2",
                                  "zeta_l2",      "sigma_l2",    "elastic_energy",  "energy_norm",
                                  "discrete_energy", "shifted_energy", "displacement_l2"};
    for (std::size_t i = 0; i < num_probes; ++i) {
        const std::string p = "probe" + std::to_string(i) + "_";
        for (int a = 0; a < dim; ++a)
            cols.push_back(p + "u_" + kAxes[a]);
        for (int a = 0; a < nsym(dim); ++a)
            cols.push_back(p + "sigma_" + component_name(dim, a));
        for (int a = 0; a < nsym(dim); ++a)
            cols.push_back(p + "strain_" + component_name(dim, a));
    }
    return cols;
}

ScenarioResult run_scenario(const RunConfig& cfg, const ScenarioRunOptions& opts)
{
    const Scenario sc = build_scenario(cfg);
    const Mesh& mesh = sc.mesh;
    const int d = mesh.dim();
    const DGSpace space(mesh, cfg.degree, cfg.quad_degree);
    const double a = cfg.penalty();

    AssemblyOptions aopts;
    aopts.workers = cfg.workers;
    aopts.strict_paper_bc = cfg.flags.strict_paper_bc;
    const AssembledSystem sys = assemble_system(space, sc.materials, a, aopts);

    const TimeGrid grid(cfg.final_time, cfg.steps);
    const double dt = grid.dt();
    NewmarkOptions nopts;
    nopts.load_at_tk = cfg.flags.load_at_tk;
    nopts.solver = cfg.solver;
    LoadProvider load = [&](double t) { return assemble_load(space, sc.materials, sc.loads, a, t, aopts); };
    NewmarkIntegrator integ(space, sys, grid, load, nopts);

    NewmarkState state;
    DisplacementTrack track(space, sc.materials, sc.loads.F, dt);
    if (sc.exact) {
        state = integ.startup_exact(sc.exact->pair());
        track.start_exact(sc.exact->u);
    } else {
        state = integ.startup_initial(sc.initial, sc.materials);
        const auto zero = [](const Vec&, double) -> Vec { return Vec::Zero(); };
        track.start_taylor(sc.initial.u0 ? sc.initial.u0 : VectorField(zero),
                           sc.initial.u1 ? sc.initial.u1 : VectorField(zero));
    }

    std::vector<int> probe_cells;
    for (const Vec& x : sc.probes)
        probe_cells.push_back(locate_probe(mesh, x));

    ScenarioResult result;
    result.probes = sc.probes;
    result.dofs = space.num_dofs();
    result.cells = mesh.num_cells();

    std::optional<CsvWriter> csv;
    if (opts.write_files) {
        std::filesystem::create_directories(cfg.output.directory);
        const std::string path =
            (std::filesystem::path(cfg.output.directory) / (cfg.scenario + "_history.csv")).string();
        csv.emplace(path, history_columns(d, sc.probes.size()));
        result.files.push_back(path);
    }

    auto record = [&](int k, const BlockVector& Xm, const BlockVector& X) {
        HistoryRow row;
        row.step = k;
        row.t = grid.t(k);
        row.t_half = grid.half(k - 1);
        row.norms = stress_norms(space, X);
        row.elastic_energy = elastic_energy(space, sc.materials, X);
        row.energy_norm = state_energy_norm(sys.M_A, X);
        const EnergyValues ev = discrete_energy(space, sc.materials, sys.a, Xm, X, dt);
        row.discrete_energy = ev.E;
        row.shifted_energy = ev.shifted;
        const auto zero = [](const Vec&, double) -> Vec { return Vec::Zero(); };
        row.displacement_l2 = track.l2_error(zero, row.t_half);
        for (std::size_t i = 0; i < sc.probes.size(); ++i) {
            const auto c = static_cast<std::size_t>(probe_cells[i]);
            const StressProbe sp = probe_stress(space, X, sc.probes[i], probe_cells[i]);
            row.probe_u.push_back(track.value(c, sc.probes[i]));
            row.probe_sigma.push_back(sp.sigma);
            row.probe_strain.push_back(apply_compliance(sc.materials.law_C(mesh.region(c)), sp.gamma, d));
        }

        if (csv) {
            csv->add(static_cast<long long>(row.step)).add(row.t).add(row.t_half);
            csv->add(row.norms.gamma).add(row.norms.zeta).add(row.norms.sum);
            csv->add(row.elastic_energy).add(row.energy_norm).add(row.discrete_energy).add(row.shifted_energy);
            csv->add(row.displacement_l2);
            for (std::size_t i = 0; i < sc.probes.size(); ++i) {
                for (int ax = 0; ax < d; ++ax)
                    csv->add(row.probe_u[i][ax]);
                for (const Mat3* m : {&row.probe_sigma[i], &row.probe_strain[i]})
                    for (int s = 0; s < nsym(d); ++s) {
                        const auto pq = sym_pair(d, s);
                        csv->add((*m)(pq[0], pq[1]));
                    }
            }
            csv->end_row();
        }
        if (opts.write_files && cfg.output.vtk_every > 0 && k % cfg.output.vtk_every == 0) {
            const CellMagnitudes mags = cell_stress_magnitudes(space, X);
            std::vector<Vec> disp(mesh.num_cells());
            for (std::size_t c = 0; c < mesh.num_cells(); ++c)
                disp[c] = track.cell_average(c);
            const std::string path = vtk_name(cfg.output.directory, cfg.scenario, k);
            write_vtk(path, mesh,
                      {{"gamma_magnitude", mags.gamma}, {"zeta_magnitude", mags.zeta}, {"sigma_magnitude", mags.sum}},
                      {{"displacement", disp}});
            result.files.push_back(path);
        }
        if (opts.progress)
            opts.progress(row);
        result.history.push_back(std::move(row));
    };

    record(1, state.X_prev, state.X_curr);
    const bool centered = cfg.flags.centered_postprocess;
    integ.run(state, {[&](const StepView& v) {
        const BlockVector mid = centered ? BlockVector(0.5 * (v.X_prev + v.X_curr))
                                         : BlockVector(0.5 * (v.X_curr + v.X_next));
        track.advance(v.k, sum_blocks(space, mid));
        record(v.k + 1, v.X_curr, v.X_next);
    }});
    result.max_residual = integ.max_residual();
    return result;
}

} // namespace zener
