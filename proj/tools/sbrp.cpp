// Benchmark harness: repeated seeded solves, gaps against reference bounds,
// CSV and plot data, and certificate checking of solution files.

#include <algorithm>
#include <filesystem>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "sbrp/experiment.hpp"

namespace {

std::vector<std::string> list_instances(const std::string& dir) {
    std::vector<std::string> paths;
    for (const auto& entry : std::filesystem::directory_iterator(dir)) {
        const std::string name = entry.path().filename().string();
        if (entry.is_regular_file() && !name.empty() && name.front() != '.') paths.push_back(entry.path().string());
    }
    std::sort(paths.begin(), paths.end());
    return paths;
}

std::vector<sbrp::Perturbation> parse_perturbations(const std::string& list) {
    std::vector<sbrp::Perturbation> out;
    std::stringstream in(list);
    std::string item;
    while (std::getline(in, item, ',')) {
        const auto p = sbrp::perturbation_from_string(item);
        if (!p) throw CLI::ValidationError("--perturbations", "unknown mechanism '" + item + "'");
        if (std::find(out.begin(), out.end(), *p) == out.end()) out.push_back(*p);
    }
    if (out.empty()) throw CLI::ValidationError("--perturbations", "empty list");
    return out;
}

int verify(const std::string& instance_path, sbrp::InstanceFormat format, int alpha, const std::string& solution_path) {
    const sbrp::Instance inst = sbrp::load_instance(instance_path, format, alpha);
    const sbrp::SolutionRecord rec = sbrp::parse_solution(sbrp::read_file(solution_path));
    const sbrp::VerifyReport rep = sbrp::verify_solution(inst, rec);
    if (rep.ok) {
        std::cout << "ok: cost " << rec.cost << ", " << (rec.feasible ? "feasible" : "infeasible") << '\n';
        return 0;
    }
    for (const std::string& p : rep.problems) std::cout << "mismatch: " << p << '\n';
    return 3;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Single-vehicle static bike rebalancing: iterated local search benchmark"};

    sbrp::ExperimentConfig cfg;
    std::string instance, instance_dir, format = "canonical", perturbations = "p2,p3,p4", verify_path;
    app.add_option("--instance", instance, "Instance file");
    app.add_option("--instance-dir", instance_dir, "Directory of instance files")->check(CLI::ExistingDirectory);
    app.add_option("--format", format, "Instance format")->check(CLI::IsMember({"canonical", "legacy"}));
    app.add_option("--alpha", cfg.alpha, "Inventory scaling factor")->check(CLI::PositiveNumber);
    app.add_option("--runs", cfg.runs, "Seeded runs per instance")->check(CLI::PositiveNumber);
    app.add_option("--restarts", cfg.params.restarts, "Restarts per run")->check(CLI::PositiveNumber);
    app.add_option("--imin", cfg.params.i_min, "Minimum non-improving iterations per restart");
    app.add_option("--beta", cfg.params.beta, "Non-improving iterations per station");
    app.add_option("--perturbations", perturbations, "Enabled perturbations, e.g. p2,p3,p4");
    app.add_option("--seed", cfg.params.seed, "Seed of the first run; run r uses seed + r");
    app.add_option("--time-limit", cfg.params.time_limit, "Seconds per run, 0 for none");
    std::string bounds;
    app.add_option("--bounds", bounds, "Reference bounds file")->check(CLI::ExistingFile);
    app.add_option("--out", cfg.out_dir, "Output directory");
    app.add_flag("--emit-solution", cfg.emit_solutions, "Write the best solution of each run");
    app.add_flag("--plot-data", cfg.plot_data, "Write gap and time tables by Q and by n");
    app.add_option("--verify", verify_path, "Check a solution file against --instance")->check(CLI::ExistingFile);

    try {
        app.parse(argc, argv);
        cfg.format = format == "legacy" ? sbrp::InstanceFormat::Legacy : sbrp::InstanceFormat::Canonical;
        cfg.params.perturbations = parse_perturbations(perturbations);
        if (!bounds.empty()) cfg.bounds_path = bounds;
    } catch (const CLI::ParseError& e) {
        return app.exit(e);
    }

    try {
        if (!verify_path.empty()) {
            if (instance.empty()) {
                std::cerr << "--verify needs --instance\n";
                return 1;
            }
            return verify(instance, cfg.format, cfg.alpha, verify_path);
        }
        if (!instance.empty()) cfg.instance_paths.push_back(instance);
        if (!instance_dir.empty())
            for (const std::string& p : list_instances(instance_dir)) cfg.instance_paths.push_back(p);
        if (cfg.instance_paths.empty()) {
            std::cerr << "no instances given; use --instance or --instance-dir\n";
            return 1;
        }
        const sbrp::ExperimentOutcome out = sbrp::run_experiment(cfg, std::cerr);
        for (const sbrp::AggregateRow& a : out.aggregates) std::cout << sbrp::to_csv(a) << '\n';
        return out.exit_code;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
}
