// wulff-lab: weighted anisotropic p-Laplace problems in convex cones.
//   geom    isoperimetric constant and randomized inequality suite
//   solve   energy-minimization solve of the boundary value problem
//   verify  level-set symmetry diagnostics on a solution

#include <cstdint>
#include <iostream>
#include <string>

#include <CLI11.hpp>

#include "wulff/commands.hpp"
#include "wulff/errors.hpp"

int main(int argc, char** argv) {
    CLI::App app{"Finsler p-Laplace symmetry lab"};
    app.require_subcommand(1);

    std::string config_path;
    std::string out_dir;
    std::uint64_t seed_flag = 0;
    bool seed_given = false;

    auto add_common = [&](CLI::App* sub) {
        sub->add_option("--config", config_path, "JSON run configuration")->required();
        sub->add_option("--out", out_dir, "output directory (overrides config)");
        sub->add_option("--seed", seed_flag, "64-bit RNG seed (overrides config)")
            ->each([&](const std::string&) { seed_given = true; });
    };
    CLI::App* geom = app.add_subcommand("geom", "isoperimetry suite");
    CLI::App* solve = app.add_subcommand("solve", "solve the boundary value problem");
    CLI::App* verify = app.add_subcommand("verify", "symmetry diagnostics");
    add_common(geom);
    add_common(solve);
    add_common(verify);

    CLI11_PARSE(app, argc, argv);

    try {
        const wulff::RunConfig cfg = wulff::load_config(config_path);
        const std::string dir = out_dir.empty() ? cfg.output.directory : out_dir;
        const std::uint64_t seed = seed_given ? seed_flag : cfg.seed;
        if (geom->parsed()) return wulff::cmd_geom(cfg, dir, seed);
        if (solve->parsed()) return wulff::cmd_solve(cfg, dir);
        return wulff::cmd_verify(cfg, dir, seed);
    } catch (const wulff::ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const wulff::SolverError& e) {
        std::cerr << "solver error: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}
