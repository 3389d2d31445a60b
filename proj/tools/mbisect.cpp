// mbisect: verified root finding for nonlinear systems via Poincare-Miranda
// sign certification and box bisection.
//
// Exit codes: 0 converged, 1 usage/config error, 2 bad initial box,
// 3 stalled, 4 iteration cap.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"

#include "mb/config.hpp"

namespace {

int status_exit_code(mb::SolveStatus s) {
    switch (s) {
    case mb::SolveStatus::converged: return 0;
    case mb::SolveStatus::bad_initial_box: return 2;
    case mb::SolveStatus::stalled: return 3;
    case mb::SolveStatus::iteration_cap: return 4;
    }
    return 1;
}

std::string fmt(double v, int digits) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, v);
    return buf;
}

void write_trace(const mb::RunConfig& cfg, const mb::SolveResult& res, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw mb::ConfigError("cannot open trace file '" + path + "'");
    out << "k";
    for (const auto& name : cfg.system.names) out << "," << name << "_lo," << name << "_hi";
    for (const auto& name : cfg.system.names) out << ",c_" << name;
    out << ",residual,chosen_subcube,preconditioned\n";
    for (const auto& rec : res.trace.records) {
        out << rec.k;
        for (const auto& d : rec.box.dims) out << "," << fmt(d.lo, 17) << "," << fmt(d.hi, 17);
        for (double c : rec.center) out << "," << fmt(c, 17);
        out << "," << fmt(rec.residual, 17) << ",";
        if (rec.chosen_subcube) out << *rec.chosen_subcube;
        out << "," << (rec.preconditioned ? 1 : 0) << "\n";
    }
}

void write_boxes(const mb::SolveResult& res, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw mb::ConfigError("cannot open boxes file '" + path + "'");
    for (const auto& rec : res.trace.records) {
        out << "{\"k\":" << rec.k << ",\"box\":[";
        for (std::size_t i = 0; i < rec.box.size(); ++i) {
            if (i) out << ",";
            out << "[" << fmt(rec.box.dims[i].lo, 17) << "," << fmt(rec.box.dims[i].hi, 17)
                << "]";
        }
        out << "]}\n";
    }
}

int cmd_solve(const std::string& config_path, const CLI::App& cmd) {
    mb::RunConfig cfg = mb::load_config(config_path);

    if (cmd.count("--delta")) cfg.solver.delta = cmd.get_option("--delta")->as<double>();
    if (cmd.count("--subdivisions"))
        cfg.solver.subdivisions = cmd.get_option("--subdivisions")->as<int>();
    if (cmd.count("--norm"))
        cfg.solver.norm = mb::parse_norm(cmd.get_option("--norm")->as<std::string>());
    if (cmd.count("--derivative-mode"))
        cfg.solver.derivative_mode =
            mb::parse_deriv_mode(cmd.get_option("--derivative-mode")->as<std::string>());
    if (cmd.count("--trace")) cfg.trace_path = cmd.get_option("--trace")->as<std::string>();
    if (cmd.count("--boxes")) cfg.boxes_path = cmd.get_option("--boxes")->as<std::string>();
    bool quiet = cmd.count("--quiet") > 0;

    mb::SolveResult res = mb::solve(cfg.system, cfg.box, cfg.solver);

    if (!quiet) {
        std::cout << "status: " << mb::to_string(res.status) << "\n";
        std::cout << "iterations: " << res.iterations << "\n";
        std::cout << "preconditionings: " << res.trace.precondition_events.size() << "\n";
        std::cout << "root:";
        for (double c : res.root) std::cout << " " << fmt(c, 15);
        std::cout << "\n";
        std::cout << "residual: " << fmt(res.residual, 15) << "\n";
    }
    if (cfg.trace_path) write_trace(cfg, res, *cfg.trace_path);
    if (cfg.boxes_path) write_boxes(res, *cfg.boxes_path);
    return status_exit_code(res.status);
}

int cmd_check_box(const std::string& config_path) {
    mb::RunConfig cfg = mb::load_config(config_path);
    auto sys = mb::PreconditionedSystem::identity(cfg.system);
    mb::PmResult pm = mb::pm_check(sys, cfg.box, cfg.solver.subdivisions,
                                   cfg.solver.derivative_mode, cfg.solver.exec);
    for (std::size_t i = 0; i < pm.faces.size(); ++i) {
        const auto& f = pm.faces[i];
        std::cout << "component " << i + 1 << ": " << cfg.system.names[i]
                  << "=lo face -> " << mb::to_string(f.low.value) << ", " << cfg.system.names[i]
                  << "=hi face -> " << mb::to_string(f.high.value)
                  << (f.opposite() ? "  (opposite)" : "  (not certified opposite)") << "\n";
        if (!f.low.diagnostic.empty())
            std::cout << "  low face diagnostic: " << f.low.diagnostic << "\n";
        if (!f.high.diagnostic.empty())
            std::cout << "  high face diagnostic: " << f.high.diagnostic << "\n";
    }
    std::cout << (pm.holds ? "sign conditions hold on the initial box"
                           : "sign conditions do not hold on the initial box")
              << "\n";
    return pm.holds ? 0 : 2;
}

int cmd_eval_box(const std::string& config_path, int component, const std::string& extension,
                 int n_cells) {
    mb::RunConfig cfg = mb::load_config(config_path);
    if (component < 0 || (std::size_t)component >= cfg.system.size())
        throw mb::ConfigError("component index out of range");
    if (n_cells < 1) n_cells = cfg.solver.subdivisions;
    const mb::Expr& e = cfg.system.funcs[(std::size_t)component];

    mb::Interval r(0.0);
    if (extension == "natural")
        r = mb::eval_interval(e, cfg.box);
    else if (extension == "mean")
        r = mb::mean_value_refinement(e, cfg.box, n_cells, cfg.solver.derivative_mode,
                                      cfg.solver.exec);
    else if (extension == "affine")
        r = mb::affine_refinement(e, cfg.box, n_cells, cfg.solver.exec);
    else
        throw mb::ConfigError("extension must be natural, mean or affine");

    std::cout << "[" << fmt(r.lo, 17) << ", " << fmt(r.hi, 17) << "]\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Verified nonlinear-system root finder (Poincare-Miranda bisection)"};
    app.require_subcommand(1);

    std::string solve_config;
    CLI::App* solve = app.add_subcommand("solve", "run the bisection solver on a config");
    solve->add_option("config", solve_config, "JSON config file")->required();
    solve->add_option("--delta", "residual tolerance");
    solve->add_option("--subdivisions", "refinement cells per face dimension");
    solve->add_option("--norm", "residual norm: inf, one or two");
    solve->add_option("--derivative-mode", "derivative enclosure: ad or paper_fd");
    solve->add_option("--trace", "write per-iteration CSV to this path");
    solve->add_option("--boxes", "write accepted-box JSON lines to this path");
    solve->add_flag("--quiet", "suppress the result record on stdout");

    std::string check_config;
    CLI::App* check = app.add_subcommand("check-box", "test the sign conditions on the initial box");
    check->add_option("config", check_config, "JSON config file")->required();

    std::string eval_config, eval_ext = "natural";
    int eval_component = 0, eval_n = 0;
    CLI::App* evalbox = app.add_subcommand("eval-box", "evaluate one range extension over the box");
    evalbox->add_option("config", eval_config, "JSON config file")->required();
    evalbox->add_option("--component", eval_component, "component index (0-based)")->required();
    evalbox->add_option("--extension", eval_ext, "natural, mean or affine")->required();
    evalbox->add_option("-N", eval_n, "refinement cells (defaults to config subdivisions)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 1;
    }

    try {
        if (solve->parsed()) return cmd_solve(solve_config, *solve);
        if (check->parsed()) return cmd_check_box(check_config);
        if (evalbox->parsed()) return cmd_eval_box(eval_config, eval_component, eval_ext, eval_n);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
