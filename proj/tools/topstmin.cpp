#include <CLI11.hpp>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "topstmin/bench.hpp"
#include "topstmin/engine.hpp"
#include "topstmin/formulations.hpp"
#include "topstmin/generator.hpp"
#include "topstmin/instance_io.hpp"

namespace fs = std::filesystem;
using namespace topstmin;

namespace {

Instance with_variant(const Instance &inst, Variant v) {
    if (inst.variant() == v) return inst;
    std::vector<Coord> coords(inst.n() + 1);
    std::vector<double> profits(inst.n() + 1, 0.0), services(inst.n() + 1, 0.0);
    for (int k = 1; k <= inst.n(); ++k) {
        coords[k] = inst.coord(k);
        profits[k] = inst.profit(k);
        services[k] = inst.service(k);
    }
    return Instance::from_coords(inst.m(), inst.t_max(), std::move(coords), std::move(profits),
                                 std::move(services), inst.mandatory(), inst.physical(),
                                 inst.logical(), v);
}

engine::SolverConfig load_config(const std::string &config_path) {
    if (!config_path.empty()) return engine::read_config_file(config_path);
    if (const char *env = std::getenv("TOPSTMIN_CONFIG"); env && *env)
        return engine::read_config_file(env);
    return {};
}

int exit_code_for(engine::Status st) {
    switch (st) {
        case engine::Status::Opt:
        case engine::Status::Infs: return 0;
        case engine::Status::NoOpt:
        case engine::Status::NoSols: return 2;
    }
    return 1;
}

int cmd_solve(const std::string &path, const std::string &config_path,
              const std::string &variant, const std::string &formulation,
              const std::string &cuts, bool no_cuts, double time_limit, long node_limit,
              bool deterministic, const std::string &solution_out, const std::string &lp_out) {
    Instance inst = read_instance_file(path);
    if (variant == "P") inst = with_variant(inst, Variant::P);
    else if (variant == "PL") inst = with_variant(inst, Variant::PL);

    engine::SolverConfig cfg = load_config(config_path);
    if (!cuts.empty()) cfg.families = engine::parse_families(cuts);
    if (no_cuts) cfg.families = 0;
    if (time_limit > 0) cfg.time_limit_s = time_limit;
    if (node_limit > 0) cfg.node_limit = node_limit;
    cfg.deterministic = deterministic;

    if (!lp_out.empty()) {
        const BuiltModel bm =
            formulation == "mixed" ? build_mixed(inst) : build_compact(inst);
        std::ofstream out(lp_out);
        out << bm.model.to_lp_text();
    }

    const engine::SolveResult res =
        formulation == "mixed" ? engine::solve_mixed(inst, cfg) : engine::solve(inst, cfg);

    std::cout << bench::result_csv_header() << "\n"
              << bench::result_csv_row(fs::path(path).filename().string(), inst, res) << "\n";
    if (!solution_out.empty() && res.best) {
        std::ofstream out(solution_out);
        out << bench::write_solution(*res.best);
    }
    return exit_code_for(res.status);
}

int cmd_generate(const std::string &manifest_path, const std::string &summary_out) {
    std::ifstream in(manifest_path);
    if (!in) throw std::runtime_error("cannot open manifest " + manifest_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const auto jobs = bench::parse_manifest(buf.str());

    std::ostringstream csv;
    csv << bench::generate_csv_header() << "\n";
    int failures = 0;
    for (const auto &job : jobs) {
        const bench::GenerateSummary s = bench::run_generate_job(job);
        if (!s.ok) ++failures;
        csv << bench::generate_csv_row(s) << "\n";
    }
    if (summary_out.empty()) {
        std::cout << csv.str();
    } else {
        std::ofstream out(summary_out);
        out << csv.str();
    }
    std::cerr << jobs.size() - failures << "/" << jobs.size() << " instances generated\n";
    return failures == 0 ? 0 : 2;
}

int cmd_verify(const std::string &instance_path, const std::string &solution_path) {
    const Instance inst = read_instance_file(instance_path);
    std::ifstream in(solution_path);
    if (!in) throw std::runtime_error("cannot open solution " + solution_path);
    std::ostringstream buf;
    buf << in.rdbuf();
    const Solution sol = bench::parse_solution(inst, buf.str());
    const FeasibilityReport rep = check_solution(inst, sol);
    if (rep.feasible()) {
        std::cout << "feasible, profit " << bench::format_fixed(sol.profit) << "\n";
        return 0;
    }
    for (const Violation &v : rep.violations) std::cout << v.to_string() << "\n";
    return 2;
}

int cmd_bench(const std::string &dir, const std::string &config_path, const std::string &cuts,
              bool no_cuts, double time_limit, int jobs, bool deterministic,
              const std::string &out_path) {
    bench::BenchOptions opts;
    opts.config = load_config(config_path);
    if (!cuts.empty()) opts.config.families = engine::parse_families(cuts);
    if (no_cuts) opts.config.families = 0;
    if (time_limit > 0) opts.config.time_limit_s = time_limit;
    opts.config.deterministic = deterministic;
    opts.jobs = jobs;

    std::vector<std::string> paths;
    for (const auto &entry : fs::directory_iterator(dir))
        if (entry.is_regular_file() && entry.path().extension() == ".topstmin")
            paths.push_back(entry.path().string());
    if (paths.empty()) {
        std::cerr << "no .topstmin files under " << dir << "\n";
        return 1;
    }
    const auto records = bench::run_bench(paths, opts);
    const std::string csv = bench::bench_csv(records, opts.config.deterministic);
    if (out_path.empty()) {
        std::cout << csv;
    } else {
        std::ofstream out(out_path);
        out << csv;
    }
    return 0;
}

}  // namespace

int main(int argc, char **argv) {
    CLI::App app{"exact solver, verifier and instance factory for budgeted "
                 "multi-route node-collection problems"};
    app.require_subcommand(1);

    std::string instance_path, config_path, variant, formulation = "compact", cuts;
    std::string solution_path, solution_out, lp_out, manifest_path, summary_out, dir, out_path;
    bool no_cuts = false, deterministic = true;
    double time_limit = 0.0;
    long node_limit = 0;
    long seed = 0;
    int jobs = 1;

    auto *solve = app.add_subcommand("solve", "solve one instance file");
    solve->add_option("instance", instance_path)->required();
    solve->add_option("--config", config_path, "solver config file");
    solve->add_option("--variant", variant)->check(CLI::IsMember({"P", "PL"}));
    solve->add_option("--formulation", formulation)->check(CLI::IsMember({"compact", "mixed"}));
    solve->add_option("--cuts", cuts, "all, none or comma list of RI,SI,SPI,SEC,LI");
    solve->add_flag("--no-cuts", no_cuts, "plain branch and bound");
    solve->add_option("--time-limit", time_limit, "seconds");
    solve->add_option("--node-limit", node_limit);
    solve->add_option("--seed", seed, "reserved; the search itself is deterministic");
    solve->add_flag("--deterministic,!--no-deterministic", deterministic);
    solve->add_option("--solution", solution_out, "write the incumbent to this file");
    solve->add_option("--dump-lp", lp_out, "write the model in LP text form");

    auto *generate = app.add_subcommand("generate", "run a generation manifest");
    generate->add_option("manifest", manifest_path)->required();
    generate->add_option("--summary", summary_out, "summary CSV path (default stdout)");

    auto *verify = app.add_subcommand("verify", "check a solution file");
    verify->add_option("instance", instance_path)->required();
    verify->add_option("solution", solution_path)->required();

    auto *bench_cmd = app.add_subcommand("bench", "solve a directory of instances");
    bench_cmd->add_option("dir", dir)->required();
    bench_cmd->add_option("--config", config_path);
    bench_cmd->add_option("--cuts", cuts);
    bench_cmd->add_flag("--no-cuts", no_cuts);
    bench_cmd->add_option("--time-limit", time_limit);
    bench_cmd->add_option("--jobs", jobs)->check(CLI::PositiveNumber);
    bench_cmd->add_flag("--deterministic,!--no-deterministic", deterministic);
    bench_cmd->add_option("--out", out_path, "CSV output path (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (solve->parsed())
            return cmd_solve(instance_path, config_path, variant, formulation, cuts, no_cuts,
                             time_limit, node_limit, deterministic, solution_out, lp_out);
        if (generate->parsed()) return cmd_generate(manifest_path, summary_out);
        if (verify->parsed()) return cmd_verify(instance_path, solution_path);
        if (bench_cmd->parsed())
            return cmd_bench(dir, config_path, cuts, no_cuts, time_limit, jobs, deterministic,
                             out_path);
    } catch (const std::exception &e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 1;
}
