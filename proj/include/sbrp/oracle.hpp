#pragma once

#include <algorithm>
#include <limits>
#include <set>
#include <stdexcept>
#include <string>
#include <vector>

#include "sbrp/feasibility.hpp"
#include "sbrp/instance.hpp"
#include "sbrp/solution.hpp"

namespace sbrp {

/// Exhaustive search bounds. Inputs outside them are refused, never truncated.
struct OracleLimits {
    int max_stations = 6;
    int max_visits_per_station = 2;
    int max_route_length = 12;  // internal visits
    int max_capacity = 12;      // vehicle and station capacities for displacement enumeration
};

class OracleRefusal : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

struct ExactResult {
    bool found = false;  // false: no feasible route within the visit bound
    Cost cost = kInfeasibleCost;
    Route route;
};

namespace detail {

class ExactSearch {
public:
    ExactSearch(const Instance& inst, const OracleLimits& limits, bool reversed_order)
        : inst_(inst), limits_(limits), visits_(inst.n + 1, 0), order_(inst.n) {
        for (int i = 0; i < inst.n; ++i) order_[i] = reversed_order ? inst.n - i : i + 1;
        min_in_.assign(inst.n + 1, std::numeric_limits<Cost>::max());
        for (int v = 0; v <= inst.n; ++v)
            for (int u = 0; u <= inst.n; ++u)
                if (u != v) min_in_[v] = std::min(min_in_[v], inst.c(u, v));
        for (int i = 1; i <= inst.n; ++i)
            if (inst.station(i).demand != 0) ++required_left_;
        for (int i = 1; i <= inst.n; ++i)
            if (inst.station(i).demand != 0) required_bound_ += min_in_[i];
    }

    ExactResult run() {
        route_ = {kDepot};
        extend(0);
        return best_;
    }

private:
    void offer() {
        route_.push_back(kDepot);
        const Cost cost = route_cost(route_, inst_);
        const bool better = cost < best_.cost || (cost == best_.cost && route_ < best_.route);
        if (better && is_feasible(route_, inst_)) best_ = {true, cost, route_};
        route_.pop_back();
    }

    void extend(Cost prefix) {
        const Cost closing = route_.size() > 1 ? min_in_[kDepot] : 0;
        if (prefix + required_bound_ + closing > best_.cost) return;
        if (required_left_ == 0) offer();
        if (static_cast<int>(route_.size()) - 1 >= limits_.max_route_length) return;
        for (int st : order_) {
            if (visits_[st] >= limits_.max_visits_per_station || st == route_.back()) continue;
            const bool first_required = visits_[st] == 0 && inst_.station(st).demand != 0;
            const Cost step = inst_.c(route_.back(), st);
            ++visits_[st];
            route_.push_back(st);
            if (first_required) {
                --required_left_;
                required_bound_ -= min_in_[st];
            }
            extend(prefix + step);
            if (first_required) {
                ++required_left_;
                required_bound_ += min_in_[st];
            }
            route_.pop_back();
            --visits_[st];
        }
    }

    const Instance& inst_;
    const OracleLimits& limits_;
    std::vector<int> visits_;
    std::vector<int> order_;
    std::vector<Cost> min_in_;  // cheapest arc entering each node
    int required_left_ = 0;
    Cost required_bound_ = 0;  // sum of min_in_ over unvisited stations with demand
    Route route_;
    ExactResult best_;
};

inline void refuse_if_outside(const Instance& inst, const OracleLimits& limits) {
    if (limits.max_stations > 6) throw OracleRefusal("oracle station limit above 6");
    if (inst.n > limits.max_stations)
        throw OracleRefusal("instance has " + std::to_string(inst.n) + " stations, limit " +
                            std::to_string(limits.max_stations));
    if (limits.max_visits_per_station < 1) throw OracleRefusal("visit bound below 1");
}

}  // namespace detail

/// Minimum-cost feasible route among all sequences with at most
/// `max_visits_per_station` visits per station and `max_route_length` visits in
/// total. Adjacent repeats of a station are skipped; they never lower the cost.
/// Ties go to the lexicographically smallest route.
inline ExactResult exact_solve(const Instance& inst, const OracleLimits& limits = {}) {
    detail::refuse_if_outside(inst, limits);
    return detail::ExactSearch(inst, limits, false).run();
}

/// Same search with stations tried in reverse order; must agree with `exact_solve`.
inline ExactResult exact_solve_reversed(const Instance& inst, const OracleLimits& limits = {}) {
    detail::refuse_if_outside(inst, limits);
    return detail::ExactSearch(inst, limits, true).run();
}

struct DisplacementWitness {
    bool feasible = false;
    std::vector<int> operations;  // same layout as Displacements
    std::vector<int> loads;
};

/// Tries every integer operation per visit that keeps the load in [0, Q] and
/// each station inventory in [0, q_i], with the last visit leaving the target
/// level and the vehicle returning empty. Failed states are memoized.
inline DisplacementWitness enumerate_displacements(const Route& route, const Instance& inst,
                                                   const OracleLimits& limits = {}) {
    require_depot_terminated(route, inst);
    const int k = static_cast<int>(route.size());
    if (k - 2 > limits.max_route_length) throw OracleRefusal("route longer than enumeration limit");
    if (inst.vehicle_capacity > limits.max_capacity) throw OracleRefusal("vehicle capacity above enumeration limit");
    for (int j = 1; j + 1 < k; ++j)
        if (inst.station(route[j]).capacity > limits.max_capacity)
            throw OracleRefusal("station capacity above enumeration limit");

    DisplacementWitness w;
    w.operations.assign(k, 0);
    w.loads.assign(k - 1, 0);
    std::vector<int> remaining(inst.n + 1, 0);
    for (int j = 1; j + 1 < k; ++j) ++remaining[route[j]];
    for (int i = 1; i <= inst.n; ++i)
        if (remaining[i] == 0 && inst.station(i).demand != 0) return w;

    std::vector<int> inventory(inst.n + 1, 0);
    for (int i = 1; i <= inst.n; ++i) inventory[i] = inst.station(i).initial;
    std::set<std::pair<int, std::vector<int>>> dead;  // (position, load + inventories)

    const int Q = inst.vehicle_capacity;
    const auto search = [&](auto&& self, int j, int load) -> bool {
        if (j == k - 1) return load == 0;
        std::vector<int> key = inventory;
        key[0] = load;
        if (dead.count({j, key})) return false;
        const StationId st = route[j];
        const Station& s = inst.station(st);
        const bool last = remaining[st] == 1;
        for (int op = -std::min(load, s.capacity - inventory[st]); op <= std::min(Q - load, inventory[st]); ++op) {
            if (last && inventory[st] - op != s.target) continue;
            inventory[st] -= op;
            --remaining[st];
            w.operations[j] = op;
            w.loads[j] = load + op;
            const bool ok = self(self, j + 1, load + op);
            ++remaining[st];
            inventory[st] += op;
            if (ok) return true;
        }
        dead.insert({j, std::move(key)});
        return false;
    };
    w.feasible = search(search, 1, 0);
    if (!w.feasible) {
        std::fill(w.operations.begin(), w.operations.end(), 0);
        std::fill(w.loads.begin(), w.loads.end(), 0);
    }
    return w;
}

}  // namespace sbrp
