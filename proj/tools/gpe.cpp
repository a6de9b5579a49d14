// Command-line interface: solve a single (p, b), sweep b, print asymptotic
// constants, evaluate the special functions, or run the verification suite.

#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "gpe/asymptotics.hpp"
#include "gpe/harness.hpp"
#include "gpe/shooting.hpp"
#include "gpe/specfun.hpp"
#include "gpe/verify.hpp"

using nlohmann::json;

namespace {

void write_manifest_for(const std::string& out_path, const gpe::CriticalParams& cp,
                        const gpe::harness::SweepOptions& opts) {
    std::ofstream mf(out_path + ".manifest.json");
    mf << gpe::harness::make_manifest(cp, opts).dump(2) << "\n";
}

int cmd_solve(const std::string& p_text, double b, double tol, const std::string& out) {
    auto cp = gpe::CriticalParams::parse(p_text);
    auto gs = gpe::shooting::solve_lambda(b, cp, tol);
    std::cout << json{{"lambda", gs.lambda}, {"c", gs.c}}.dump() << "\n";
    if (!out.empty()) {
        std::ofstream os(out);
        gpe::shooting::write_profile_csv(os, gs.profile);
        gpe::harness::SweepOptions opts;
        opts.tol_lambda = tol;
        write_manifest_for(out, cp, opts);
    }
    return 0;
}

int cmd_sweep(const std::string& p_text, double b_min, double b_max, int per_decade, int jobs,
              double tol, const std::string& out) {
    auto cp = gpe::CriticalParams::parse(p_text);
    gpe::harness::SweepOptions opts;
    opts.tol_lambda = tol;
    opts.jobs = jobs;
    auto grid = gpe::harness::geometric_grid(b_min, b_max, per_decade);
    auto records = gpe::harness::sweep(cp, grid, opts);
    std::ofstream os(out);
    gpe::harness::write_sweep_csv(os, records);
    write_manifest_for(out, cp, opts);
    int failed = 0;
    for (const auto& r : records)
        if (!r.ok()) ++failed;
    std::cerr << records.size() << " records written to " << out << " (" << failed << " failed)\n";
    return failed == 0 ? 0 : 1;
}

int cmd_asym(const std::string& p_text) {
    auto cp = gpe::CriticalParams::parse(p_text);
    auto law = gpe::asymptotics::AsymptoticLaw::for_params(cp);
    std::cout << json{{"p", cp.describe()},
                      {"branch", gpe::asymptotics::branch_name(law.branch)},
                      {"C_p", law.C_p},
                      {"A_p", law.A_p},
                      {"formula", law.formula()}}
                     .dump()
              << "\n";
    return 0;
}

int cmd_special(const std::string& fn, double z, double alpha, double beta) {
    double value;
    if (fn == "gamma") value = gpe::specfun::gamma(z);
    else if (fn == "digamma") value = gpe::specfun::digamma(z);
    else if (fn == "kummer") value = gpe::specfun::kummer_m(z, {alpha, beta});
    else if (fn == "tricomi") value = gpe::specfun::tricomi_u(z, {alpha, beta});
    else throw gpe::DomainError("unknown function " + fn);
    std::cout << json{{"value", value}}.dump() << "\n";
    return 0;
}

int cmd_verify(const std::string& config_path) {
    gpe::verify::VerifyConfig cfg;
    if (!config_path.empty()) {
        std::ifstream in(config_path);
        if (!in) {
            std::cerr << "cannot open config " << config_path << "\n";
            return 2;
        }
        cfg = gpe::verify::parse_verify_config(in);
    }
    auto report = gpe::verify::run_verify(cfg, std::cout);
    if (!cfg.report_path.empty()) {
        std::ofstream out(cfg.report_path);
        out << report.to_json().dump(2) << "\n";
    }
    return report.all_pass() ? 0 : 1;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Ground-state solver for the energy-critical Gross-Pitaevskii "
                 "equation with a harmonic potential"};
    app.require_subcommand(1);

    std::string p_text, out, fn, config_path;
    double b = 1.0, tol = 1e-10, b_min = 1e2, b_max = 1e4, z = 1.0, alpha = 1.0, beta = 2.5;
    int per_decade = 25, jobs = 0;

    auto* solve = app.add_subcommand("solve", "solve one (p, b) pair for lambda and c");
    solve->add_option("--p", p_text, "critical exponent, num/den or float")->required();
    solve->add_option("--b", b, "central amplitude")->required();
    solve->add_option("--tol", tol, "lambda bisection tolerance");
    solve->add_option("--out", out, "write the profile CSV here");

    auto* sweep = app.add_subcommand("sweep", "sweep b geometrically and persist records");
    sweep->add_option("--p", p_text)->required();
    sweep->add_option("--b-min", b_min)->required();
    sweep->add_option("--b-max", b_max)->required();
    sweep->add_option("--per-decade", per_decade);
    sweep->add_option("--jobs", jobs, "worker threads (GPE_JOBS overrides)");
    sweep->add_option("--tol", tol);
    sweep->add_option("--out", out, "sweep CSV path")->required();

    auto* asym = app.add_subcommand("asym", "print the asymptotic branch and constants");
    asym->add_option("--p", p_text)->required();

    auto* special = app.add_subcommand("special", "evaluate a special function");
    special->add_option("--fn", fn, "gamma|digamma|kummer|tricomi")->required();
    special->add_option("--z", z)->required();
    special->add_option("--alpha", alpha);
    special->add_option("--beta", beta);

    auto* verify = app.add_subcommand("verify", "run the acceptance criteria");
    verify->add_option("--config", config_path, "key = value criteria file");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed()) return cmd_solve(p_text, b, tol, out);
        if (sweep->parsed()) return cmd_sweep(p_text, b_min, b_max, per_decade, jobs, tol, out);
        if (asym->parsed()) return cmd_asym(p_text);
        if (special->parsed()) return cmd_special(fn, z, alpha, beta);
        if (verify->parsed()) return cmd_verify(config_path);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
