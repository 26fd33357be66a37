#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include "sbrp/instance.hpp"
#include "sbrp/maxflow.hpp"

namespace sbrp {

using Route = std::vector<StationId>;

/// Per-visit operations (positive = collected, negative = delivered; depot
/// entries are 0) and per-leg vehicle loads, `loads[j]` on the leg leaving
/// route position j.
struct Displacements {
    std::vector<int> operations;
    std::vector<int> loads;
};

struct FeasibilityResult {
    bool feasible = false;
    bool covers_demand = false;        // every nonzero-demand station is routed
    std::int64_t flow_value = 0;
    std::int64_t required_flow = 0;    // sum of initial levels over routed stations
    std::vector<int> operations;
    std::vector<int> loads;
    std::vector<int> achieved_initial;  // flow on each station's supply arc, 0 if unrouted
    std::vector<int> achieved_final;    // flow on each station's demand arc, 0 if unrouted
};

inline void require_depot_terminated(const Route& route, const Instance& inst) {
    if (route.size() < 2 || route.front() != kDepot || route.back() != kDepot)
        throw std::invalid_argument("route must start and end at the depot");
    for (std::size_t j = 1; j + 1 < route.size(); ++j)
        if (route[j] <= kDepot || route[j] > inst.n)
            throw std::invalid_argument("route position " + std::to_string(j) + " is not a station");
}

/// Displacement network of a route, built into `net` (previous contents are
/// discarded). Node 0 is the source, node 1 the sink and route position j
/// (0 <= j <= k-1, depot copies included) is node j + 2. The depot copies get
/// no supply or demand arc, so their legs carry nothing. Per position, arcs
/// are added in the order supply, storage from the previous visit to the same
/// station, leg from the previous position; demand arcs are appended last.
inline void build_network_into(FlowNetwork& net, const Route& route, const Instance& inst) {
    require_depot_terminated(route, inst);
    const int k = static_cast<int>(route.size());
    net.node_count = 0;
    net.arcs.clear();
    net.arcs.reserve(3 * static_cast<std::size_t>(k));
    net.source = net.add_node();
    net.sink = net.add_node();
    for (int j = 0; j < k; ++j) net.add_node();
    const auto node = [](int position) { return position + 2; };

    thread_local std::vector<int> last_seen;
    last_seen.assign(inst.n + 1, -1);
    for (int j = 1; j < k; ++j) {
        if (j + 1 < k) {
            const Station& s = inst.station(route[j]);
            if (last_seen[s.id] < 0)
                net.add_arc(net.source, node(j), s.initial, ArcRole::Supply, j);
            else
                net.add_arc(node(last_seen[s.id]), node(j), s.capacity, ArcRole::Storage, s.id);
            last_seen[s.id] = j;
        }
        net.add_arc(node(j - 1), node(j), inst.vehicle_capacity, ArcRole::Leg, j - 1);
    }
    for (int j = 1; j + 1 < k; ++j)
        if (last_seen[route[j]] == j) net.add_arc(node(j), net.sink, inst.station(route[j]).target, ArcRole::Demand, j);
}

inline FlowNetwork build_network(const Route& route, const Instance& inst) {
    FlowNetwork net;
    build_network_into(net, route, inst);
    return net;
}

/// Reads loads off the leg arcs.
inline Displacements extract_displacements(const FlowNetwork& net, const std::vector<std::int64_t>& flows) {
    const int k = net.node_count - 2;  // route length
    Displacements d;
    d.loads.assign(k - 1, 0);
    d.operations.assign(k, 0);
    for (std::size_t a = 0; a < net.arcs.size(); ++a)
        if (net.arcs[a].role == ArcRole::Leg) d.loads[net.arcs[a].index] = static_cast<int>(flows[a]);
    for (int j = 1; j + 1 < k; ++j) d.operations[j] = d.loads[j] - d.loads[j - 1];
    return d;
}

/// Feasible iff every routed station's supply arc is saturated by a maximum
/// flow and every station with nonzero demand is routed. Infeasible routes
/// still carry the schedule of the computed flow.
inline FeasibilityResult check(const Route& route, const Instance& inst) {
    const FlowNetwork net = build_network(route, inst);
    const MaxFlowResult mf = max_flow(net);
    const Displacements disp = extract_displacements(net, mf.flow);

    FeasibilityResult r;
    r.operations = disp.operations;
    r.loads = disp.loads;
    r.flow_value = mf.value;
    r.achieved_initial.assign(inst.n + 1, 0);
    r.achieved_final.assign(inst.n + 1, 0);
    std::vector<char> routed(inst.n + 1, 0);
    for (std::size_t j = 1; j + 1 < route.size(); ++j) {
        if (!routed[route[j]]) r.required_flow += inst.station(route[j]).initial;
        routed[route[j]] = 1;
    }
    for (std::size_t a = 0; a < net.arcs.size(); ++a) {
        const FlowArc& arc = net.arcs[a];
        if (arc.role == ArcRole::Supply) r.achieved_initial[route[arc.index]] = static_cast<int>(mf.flow[a]);
        if (arc.role == ArcRole::Demand) r.achieved_final[route[arc.index]] = static_cast<int>(mf.flow[a]);
    }
    r.covers_demand = true;
    for (int i = 1; i <= inst.n; ++i)
        if (inst.station(i).demand != 0 && !routed[i]) r.covers_demand = false;
    r.feasible = r.covers_demand && mf.value == r.required_flow;
    return r;
}

namespace detail {

/// Necessary condition for multi-visit routes: after each position the load
/// must be reachable from per-station bounds on the bikes collected so far.
/// A station whose visits are all behind contributes exactly -demand, one with
/// visits on both sides anything that keeps its inventory within [0, capacity].
inline bool load_bounds_admissible(const Route& route, const Instance& inst, const std::vector<int>& visits) {
    thread_local std::vector<int> seen;
    seen.assign(inst.n + 1, 0);
    long lo = 0, hi = 0;
    for (std::size_t j = 1; j + 1 < route.size(); ++j) {
        const Station& s = inst.station(route[j]);
        const int before = seen[s.id]++;
        if (before > 0) {
            lo -= s.initial - s.capacity;
            hi -= s.initial;
        }
        if (seen[s.id] == visits[s.id]) {
            lo -= s.demand;
            hi -= s.demand;
        } else {
            lo += s.initial - s.capacity;
            hi += s.initial;
        }
        if (hi < 0 || lo > inst.vehicle_capacity) return false;
    }
    return true;
}

}  // namespace detail

/// Verdict of `check` without the schedule. Routes visiting every station at
/// most once have fixed operations, so only the load prefix sums are tested.
inline bool is_feasible(const Route& route, const Instance& inst) {
    require_depot_terminated(route, inst);
    thread_local std::vector<int> visits;
    visits.assign(inst.n + 1, 0);
    bool single_visits = true;
    for (std::size_t j = 1; j + 1 < route.size(); ++j)
        if (visits[route[j]]++) single_visits = false;
    for (int i = 1; i <= inst.n; ++i)
        if (visits[i] == 0 && inst.station(i).demand != 0) return false;

    if (single_visits) {
        int load = 0;
        for (std::size_t j = 1; j + 1 < route.size(); ++j) {
            load -= inst.station(route[j]).demand;
            if (load < 0 || load > inst.vehicle_capacity) return false;
        }
        return load == 0;
    }
    if (!detail::load_bounds_admissible(route, inst, visits)) return false;
    thread_local FlowNetwork net;
    build_network_into(net, route, inst);
    std::int64_t required = 0;
    for (const FlowArc& a : net.arcs)
        if (a.role == ArcRole::Supply) required += a.capacity;
    return max_flow(net).value == required;
}

}  // namespace sbrp
