#pragma once

#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "sbrp/feasibility.hpp"
#include "sbrp/instance.hpp"

namespace sbrp {

/// Objective value of a solution without a valid displacement schedule.
inline constexpr Cost kInfeasibleCost = std::numeric_limits<Cost>::max();

struct Solution {
    Route route{kDepot, kDepot};
    std::vector<int> operations{0, 0};
    std::vector<int> loads{0};
    std::vector<int> visit_count;
    Cost cost = 0;  // travel cost of `route`, finite even when infeasible
    bool feasible = false;

    /// Travel cost when feasible, otherwise kInfeasibleCost.
    [[nodiscard]] Cost objective() const { return feasible ? cost : kInfeasibleCost; }
    [[nodiscard]] int visits() const { return static_cast<int>(route.size()) - 2; }
};

inline Cost route_cost(const Route& route, const Instance& inst) {
    Cost total = 0;
    for (std::size_t j = 0; j + 1 < route.size(); ++j) total += inst.c(route[j], route[j + 1]);
    return total;
}

inline std::vector<int> count_visits(const Route& route, const Instance& inst) {
    std::vector<int> count(inst.n + 1, 0);
    for (std::size_t j = 1; j + 1 < route.size(); ++j) ++count[route[j]];
    return count;
}

/// Merges consecutive visits to the same station. Travel cost is unchanged
/// (zero diagonal) and the merged visit can perform both operations.
inline void collapse_adjacent_duplicates(Route& route) {
    Route out;
    out.reserve(route.size());
    for (std::size_t j = 0; j < route.size(); ++j) {
        const bool internal = j > 0 && j + 1 < route.size();
        if (internal && out.size() > 1 && out.back() == route[j]) continue;
        out.push_back(route[j]);
    }
    route = std::move(out);
}

inline bool has_adjacent_duplicates(const Route& route) {
    for (std::size_t j = 1; j + 2 < route.size(); ++j)
        if (route[j] == route[j + 1]) return true;
    return false;
}

inline Solution rebuild_bookkeeping(Solution s, const Instance& inst) {
    const FeasibilityResult fr = check(s.route, inst);
    s.operations = fr.operations;
    s.loads = fr.loads;
    s.feasible = fr.feasible;
    s.visit_count = count_visits(s.route, inst);
    s.cost = route_cost(s.route, inst);
    return s;
}

inline Solution make_solution(Route route, const Instance& inst) {
    Solution s;
    s.route = std::move(route);
    return rebuild_bookkeeping(std::move(s), inst);
}

/// "cost C feasible F" then one "station operation load_after" line per route
/// position, depot endpoints included.
inline std::string serialize_solution(const Solution& s) {
    std::ostringstream out;
    out << "cost " << s.cost << " feasible " << (s.feasible ? 1 : 0) << '\n';
    for (std::size_t j = 0; j < s.route.size(); ++j) {
        const int load_after = j < s.loads.size() ? s.loads[j] : 0;
        out << s.route[j] << ' ' << s.operations[j] << ' ' << load_after << '\n';
    }
    return out.str();
}

/// The stated contents of a serialized solution, before any verification.
struct SolutionRecord {
    Cost cost = 0;
    bool feasible = false;
    Route route;
    std::vector<int> operations;
    std::vector<int> loads_after;
};

inline SolutionRecord parse_solution(std::string_view text) {
    std::istringstream in{std::string(text)};
    std::string line;
    SolutionRecord rec;
    bool header = false;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto tok = detail::split_ws(line);
        if (tok.empty() || tok[0].front() == '#') continue;
        if (!header) {
            int flag = 0;
            if (tok.size() != 4 || tok[0] != "cost" || tok[2] != "feasible" || !detail::parse_number(tok[1], rec.cost) ||
                !detail::parse_number(tok[3], flag) || (flag != 0 && flag != 1))
                throw InstanceError(lineno, "malformed solution header, expected \"cost C feasible {0|1}\"");
            rec.feasible = flag == 1;
            header = true;
            continue;
        }
        int station = 0, op = 0, load = 0;
        if (tok.size() != 3 || !detail::parse_number(tok[0], station) || !detail::parse_number(tok[1], op) ||
            !detail::parse_number(tok[2], load))
            throw InstanceError(lineno, "malformed visit line, expected \"station operation load_after\"");
        rec.route.push_back(station);
        rec.operations.push_back(op);
        rec.loads_after.push_back(load);
    }
    if (!header) throw InstanceError(0, "empty solution document");
    return rec;
}

}  // namespace sbrp
