#include "zener/convergence.hpp"

#include "zener/newmark.hpp"
#include "zener/output.hpp"
#include "zener/scenarios.hpp"

#include <cmath>
#include <stdexcept>

namespace zener {

ConvergenceMode parse_convergence_mode(const std::string& s)
{
    if (s == "space")
        return ConvergenceMode::space;
    if (s == "time")
        return ConvergenceMode::time;
    throw std::invalid_argument("convergence mode must be \"space\" or \"time\", got \"" + s + "\"");
}

const char* to_string(ConvergenceMode mode) { return mode == ConvergenceMode::space ? "space" : "time"; }

MmsRun run_mms(const RunConfig& cfg)
{
    if (!is_mms_scenario(cfg.scenario))
        throw ConfigError("convergence runs need a manufactured-solution scenario, got \"" + cfg.scenario + "\"");
    const Scenario sc = build_scenario(cfg);
    const ExactSolution& exact = *sc.exact;
    const DGSpace space(sc.mesh, cfg.degree, cfg.quad_degree);
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

    MmsRun run;
    run.degree = cfg.degree;
    run.n = cfg.mesh.n;
    run.steps = cfg.steps;
    run.h = sc.mesh.mesh_size();
    run.dt = dt;
    run.dofs = space.num_dofs();

    NewmarkState state = integ.startup_exact(exact.pair());
    DisplacementTrack track(space, sc.materials, exact.F, dt);
    track.start_exact(exact.u);

    ErrorRecord first = error_norms_at_half_step(space, state.X_prev, state.X_curr, exact, grid.half(0), dt);
    first.n = 0;
    first.e0_u = track.l2_error(exact.u, grid.half(0));
    run.history.push_back(first);

    const bool centered = cfg.flags.centered_postprocess;
    integ.run(state, {[&](const StepView& v) {
        ErrorRecord r = error_norms_at_half_step(space, v.X_curr, v.X_next, exact, grid.half(v.k), dt);
        r.n = v.k;
        const BlockVector mid = centered ? BlockVector(0.5 * (v.X_prev + v.X_curr))
                                         : BlockVector(0.5 * (v.X_curr + v.X_next));
        track.advance(v.k, sum_blocks(space, mid));
        r.e0_u = track.l2_error(exact.u, grid.half(v.k));
        run.history.push_back(r);
    }});

    std::vector<ErrorRecord> tail(run.history.begin() + 1, run.history.end());
    run.max = max_over_steps(tail);
    run.max_residual = integ.max_residual();
    run.solver_iterations = integ.solver().total_iterations();
    return run;
}

double ConvergenceRow::parameter() const { return mode == ConvergenceMode::space ? run.h : run.dt; }

double ErrorReport::max_residual() const
{
    double r = 0.0;
    for (const auto& row : rows)
        r = std::max(r, row.run.max_residual);
    return r;
}

namespace {

void fill_rates(std::vector<ConvergenceRow>& group)
{
    if (group.size() < 2)
        return;
    std::vector<double> p;
    for (const auto& row : group)
        p.push_back(row.parameter());
    auto column = [&](auto field) {
        std::vector<double> e;
        for (const auto& row : group)
            e.push_back(field(row.run.max));
        return eoc(e, p);
    };
    const auto E = column([](const ErrorRecord& r) { return r.E; });
    const auto e0 = column([](const ErrorRecord& r) { return r.e0; });
    const auto ediv = column([](const ErrorRecord& r) { return r.ediv; });
    const auto ejump = column([](const ErrorRecord& r) { return r.ejump; });
    const auto e0u = column([](const ErrorRecord& r) { return r.e0_u; });
    for (std::size_t i = 0; i < group.size(); ++i)
        group[i].rates = Rates{E[i], e0[i], ediv[i], ejump[i], e0u[i]};
}

std::string rate_cell(const std::optional<double>& r)
{
    if (!r)
        return "";
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.3f", *r);
    return buf;
}

} // namespace

ErrorReport run_convergence(ConvergenceMode mode, const RunConfig& cfg, const std::vector<int>& levels,
                            const ProgressCallback& progress)
{
    const std::vector<int>& list = levels.empty() ? cfg.levels : levels;
    if (list.empty())
        throw std::invalid_argument("the refinement list is empty");
    if (!is_mms_scenario(cfg.scenario))
        throw std::invalid_argument("convergence mode needs an mms-space or mms-time scenario, got \""
                                    + cfg.scenario + "\"");
    if (cfg.mesh.generator != "unit_square")
        throw std::invalid_argument("convergence studies run on the unit_square generator");
    const std::vector<int> degrees = cfg.degrees.empty() ? std::vector<int>{cfg.degree} : cfg.degrees;

    ErrorReport report;
    report.mode = mode;
    for (int k : degrees) {
        std::vector<ConvergenceRow> group;
        for (int level : list) {
            RunConfig c = cfg;
            c.degree = k;
            if (mode == ConvergenceMode::space) {
                c.mesh.n = level;
            } else {
                c.steps = level;
            }
            ConvergenceRow row;
            row.mode = mode;
            row.run = run_mms(c);
            if (progress)
                progress(row.run);
            group.push_back(std::move(row));
        }
        fill_rates(group);
        for (auto& row : group)
            report.rows.push_back(std::move(row));
    }
    return report;
}

void write_error_report_csv(const ErrorReport& report, const std::string& path)
{
    std::vector<std::string> header{"degree", "level", "h", "dt", "dofs"};
    for (const char* f : {"E", "e0", "ediv", "ejump", "e0_u"}) {
        header.push_back(f);
        header.push_back(std::string(f) + "_rate");
        header.push_back(std::string(f) + "_full");
    }
    for (const char* f : {"norm_sym", "e_dot", "max_residual"})
        header.push_back(f);

    CsvWriter csv(path, header);
    for (const auto& row : report.rows) {
        const MmsRun& r = row.run;
        const int level = report.mode == ConvergenceMode::space ? r.n : r.steps;
        csv.add(static_cast<long long>(r.degree)).add(static_cast<long long>(level));
        csv.add(format_sig4(r.h)).add(format_sig4(r.dt)).add(static_cast<long long>(r.dofs));
        const std::pair<double, std::optional<double>> cols[] = {{r.max.E, row.rates.E},
                                                                 {r.max.e0, row.rates.e0},
                                                                 {r.max.ediv, row.rates.ediv},
                                                                 {r.max.ejump, row.rates.ejump},
                                                                 {r.max.e0_u, row.rates.e0_u}};
        for (const auto& [v, rate] : cols)
            csv.add(format_sig4(v)).add(rate_cell(rate)).add(format_full(v));
        csv.add(format_sig4(r.max.norm_sym)).add(format_sig4(r.max.e_dot)).add(format_sig4(r.max_residual));
        csv.end_row();
    }
}

} // namespace zener
