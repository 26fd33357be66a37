#pragma once

#include <algorithm>
#include <chrono>
#include <cstdint>
#include <optional>
#include <vector>

#include "sbrp/construct.hpp"
#include "sbrp/instance.hpp"
#include "sbrp/perturb.hpp"
#include "sbrp/rng.hpp"
#include "sbrp/search.hpp"
#include "sbrp/solution.hpp"

namespace sbrp {

struct SearchParams {
    int restarts = 10;
    int i_min = 160;
    int beta = 4;
    double time_limit = 3600.0;  // seconds for the whole solve call; <= 0 disables
    std::vector<Perturbation> perturbations{Perturbation::AddStations, Perturbation::DoubleBridge,
                                            Perturbation::Suppression};
    std::uint64_t seed = 1;

    /// Consecutive non-improving iterations allowed per restart.
    [[nodiscard]] int ils_iterations(int n) const { return std::max(i_min, beta * n); }
};

struct IncumbentUpdate {
    double seconds = 0.0;
    Cost cost = 0;
};

struct RunReport {
    Cost best_cost = kInfeasibleCost;
    Solution best_solution;
    std::vector<Cost> restart_best_costs;
    std::vector<IncumbentUpdate> trace;  // every improvement of the overall incumbent
    double wall_seconds = 0.0;
    long iterations = 0;
    long repairs = 0;
    long repaired_feasible = 0;
    long unchanged_perturbations = 0;
    bool truncated = false;

    [[nodiscard]] int visits() const { return best_solution.visits(); }
};

/// Multi-start iterated local search. Each restart builds a greedy solution and
/// alternates RVND with perturbations of the restart's best solution until
/// `ils_iterations(n)` consecutive iterations bring no improvement. Infeasible
/// solutions get one AddUnbalanced repair before RVND; if they stay infeasible
/// they can never replace a restart best. Restart r draws from stream (seed, r).
inline RunReport solve(const Instance& inst, const SearchParams& params) {
    using Clock = std::chrono::steady_clock;
    const auto start = Clock::now();
    const Deadline deadline = Deadline::after(params.time_limit);
    const auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
    const int max_iter = params.ils_iterations(inst.n);

    RunReport report;
    const auto offer = [&](const Solution& s) {
        if (s.objective() >= report.best_cost) return;
        report.best_cost = s.objective();
        report.best_solution = s;
        report.trace.push_back({elapsed(), s.cost});
    };

    for (int r = 0; r < params.restarts; ++r) {
        if (deadline.expired()) {
            report.truncated = true;
            break;
        }
        Rng rng(params.seed, static_cast<std::uint64_t>(r));
        Solution s = generate_initial(inst, rng);
        Solution restart_best = s;
        offer(s);
        for (int iter = 0; iter < max_iter;) {
            if (deadline.expired()) {
                report.truncated = true;
                break;
            }
            if (!s.feasible) {
                s = add_unbalanced(std::move(s), inst);
                ++report.repairs;
                report.repaired_feasible += s.feasible ? 1 : 0;
            }
            s = rvnd(std::move(s), inst, rng, deadline);
            if (s.objective() < restart_best.objective()) {
                restart_best = s;
                offer(restart_best);
                iter = 0;
            }
            if (deadline.expired()) {
                report.truncated = true;
                break;
            }
            PerturbResult pr = perturb(restart_best, inst, params.perturbations, rng);
            report.unchanged_perturbations += pr.changed ? 0 : 1;
            s = std::move(pr.solution);
            ++iter;
            ++report.iterations;
        }
        report.restart_best_costs.push_back(restart_best.objective());
    }
    report.wall_seconds = elapsed();
    return report;
}

/// Seconds until the incumbent first matched or beat `reference`.
inline std::optional<double> time_to_target(const RunReport& report, Cost reference) {
    for (const IncumbentUpdate& u : report.trace)
        if (u.cost <= reference) return u.seconds;
    return std::nullopt;
}

}  // namespace sbrp
