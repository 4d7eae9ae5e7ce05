// zener-dg: command line front end for the DG Zener solver.

#include "zener/config.hpp"
#include "zener/convergence.hpp"
#include "zener/dg_space.hpp"
#include "zener/output.hpp"
#include "zener/scenario_runner.hpp"
#include "zener/scenarios.hpp"

#include "CLI11.hpp"

#include <filesystem>
#include <iostream>

using namespace zener;

namespace {

RunConfig load_config(const std::string& config, const std::string& preset)
{
    if (!config.empty() && !preset.empty())
        throw ConfigError("give either --config or --preset");
    if (!config.empty())
        return parse_config(config);
    if (!preset.empty())
        return preset_config(preset);
    throw ConfigError("one of --config and --preset is required");
}

void print_mesh_info(const Mesh& mesh, std::ostream& os)
{
    os << "dimension      " << mesh.dim() << '\n'
       << "vertices       " << mesh.num_vertices() << '\n'
       << "cells          " << mesh.num_cells() << '\n'
       << "facets         " << mesh.num_facets() << '\n'
       << "mesh size h    " << mesh.mesh_size() << '\n'
       << "volume         " << mesh.total_volume() << '\n';
    std::map<int, std::size_t> regions;
    for (int r : mesh.regions())
        ++regions[r];
    for (const auto& [r, n] : regions)
        os << "region " << r << "       " << n << " cells\n";
    std::map<int, std::size_t> tags;
    for (const Facet& f : mesh.facets())
        if (f.is_boundary())
            ++tags[f.tag];
    for (const auto& [t, n] : tags)
        os << "boundary tag " << t << " " << n << " facets\n";
    for (FacetKind k : {FacetKind::interior, FacetKind::dirichlet, FacetKind::neumann, FacetKind::unclassified})
        if (mesh.count(k))
            os << to_string(k) << " facets: " << mesh.count(k) << '\n';
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"DG solver for Zener viscoelasticity with Newmark time stepping"};
    app.require_subcommand(1);

    std::string config, preset, mode_name = "space", csv_out;
    std::vector<int> levels, degrees;
    auto* conv = app.add_subcommand("convergence", "manufactured-solution convergence study");
    conv->add_option("--mode", mode_name, "space or time")->check(CLI::IsMember({"space", "time"}));
    conv->add_option("--config", config, "JSON configuration file");
    conv->add_option("--preset", preset, "preset name instead of a file");
    conv->add_option("--levels", levels, "mesh n (space) or step counts (time)")->delimiter(',');
    conv->add_option("--degrees", degrees, "polynomial degrees")->delimiter(',');
    conv->add_option("--csv", csv_out, "output CSV (default <output dir>/convergence_<mode>.csv)");

    auto* run = app.add_subcommand("run", "run a scenario and write histories and VTK files");
    run->add_option("--config", config, "JSON configuration file");
    run->add_option("--preset", preset, "preset name instead of a file");

    std::string mesh_file;
    auto* info = app.add_subcommand("mesh-info", "print statistics of a dgmesh file");
    info->add_option("file", mesh_file, "mesh file")->required();

    std::string mesh_out;
    auto* gen = app.add_subcommand("generate-mesh", "write the mesh of a configuration to a dgmesh file");
    gen->add_option("--config", config, "JSON configuration file");
    gen->add_option("--preset", preset, "preset name instead of a file");
    gen->add_option("--output", mesh_out, "output file")->required();

    app.add_subcommand("presets", "list scenario presets");

    CLI11_PARSE(app, argc, argv);

    try {
        if (app.got_subcommand("presets")) {
            for (const auto& n : preset_names())
                std::cout << n << '\n';
            return 0;
        }
        if (*info) {
            print_mesh_info(read_mesh(mesh_file), std::cout);
            return 0;
        }
        if (*gen) {
            const RunConfig cfg = load_config(config, preset);
            const Mesh mesh = build_mesh(cfg);
            write_mesh(mesh, mesh_out);
            print_mesh_info(mesh, std::cout);
            return 0;
        }
        if (*conv) {
            RunConfig cfg = load_config(config, preset);
            if (!degrees.empty())
                cfg.degrees = degrees;
            const ConvergenceMode mode = parse_convergence_mode(mode_name);
            std::cout << "mode " << to_string(mode) << ", scenario " << cfg.scenario << '\n';
            const ErrorReport report = run_convergence(mode, cfg, levels, [](const MmsRun& r) {
                std::cout << "k=" << r.degree << " n=" << r.n << " steps=" << r.steps << " dofs=" << r.dofs
                          << " E=" << format_sig4(r.max.E) << " e0=" << format_sig4(r.max.e0)
                          << " ediv=" << format_sig4(r.max.ediv) << " ejump=" << format_sig4(r.max.ejump)
                          << " e0_u=" << format_sig4(r.max.e0_u) << '\n';
            });
            if (csv_out.empty()) {
                std::filesystem::create_directories(cfg.output.directory);
                csv_out = (std::filesystem::path(cfg.output.directory)
                           / ("convergence_" + std::string(to_string(mode)) + ".csv"))
                              .string();
            }
            write_error_report_csv(report, csv_out);
            for (const auto& row : report.rows)
                if (row.rates.E)
                    std::cout << "k=" << row.run.degree << " level " << (mode == ConvergenceMode::space ? row.run.n : row.run.steps)
                              << ": rate E " << *row.rates.E << ", e0 " << *row.rates.e0 << ", e0_u "
                              << *row.rates.e0_u << '\n';
            std::cout << "max scheme residual " << format_sig4(report.max_residual()) << '\n'
                      << "wrote " << csv_out << '\n';
            return 0;
        }
        if (*run) {
            const RunConfig cfg = load_config(config, preset);
            std::cout << "scenario " << cfg.scenario << ", k=" << cfg.degree << ", dt=" << cfg.dt() << ", "
                      << cfg.steps << " steps\n";
            ScenarioRunOptions opts;
            const int every = std::max(1, cfg.steps / 10);
            opts.progress = [every](const HistoryRow& r) {
                if (r.step % every == 0)
                    std::cout << "step " << r.step << " t=" << r.t << " |sigma|=" << format_sig4(r.norms.sum)
                              << " E_elast=" << format_sig4(r.elastic_energy) << '\n';
            };
            const ScenarioResult res = run_scenario(cfg, opts);
            std::cout << res.cells << " cells, " << res.dofs << " dofs, max scheme residual "
                      << format_sig4(res.max_residual) << '\n';
            for (const auto& f : res.files)
                std::cout << "wrote " << f << '\n';
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "configuration error: " << e.what() << '\n';
        return 2;
    } catch (const ParseError& e) {
        std::cerr << "mesh error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
