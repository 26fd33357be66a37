#pragma once

#include <cassert>
#include <cstdlib>
#include <optional>
#include <stdexcept>
#include <vector>

#include "sbrp/instance.hpp"
#include "sbrp/rng.hpp"
#include "sbrp/solution.hpp"

namespace sbrp {

/// Station still waiting for service during construction. `residual` follows
/// the demand sign convention (positive = bikes still to deliver).
struct OpenVertex {
    StationId station = 0;
    int residual = 0;
};

/// True iff the whole residual demand fits in one visit: a delivery needs the
/// load on board, a pickup needs the free room.
inline bool full_service_fits(int residual, int vehicle_load, int vehicle_capacity) {
    if (residual > 0) return vehicle_load >= residual;
    return vehicle_capacity - vehicle_load >= -residual;
}

/// Bikes that can be exchanged with a station right now.
inline int exchangeable(int residual, int vehicle_load, int vehicle_capacity) {
    if (residual > 0) return std::min(vehicle_load, residual);
    if (residual < 0) return std::min(vehicle_capacity - vehicle_load, -residual);
    return 0;
}

struct SplitCandidate {
    StationId station = 0;
    int amount = 0;
    std::size_t open_index = 0;
};

/// Station allowing the largest partial exchange; ties go to the cheapest arc
/// from `position`, then to the earlier open-list entry.
inline SplitCandidate best_split_candidate(const std::vector<OpenVertex>& open, int vehicle_load,
                                           int vehicle_capacity, StationId position, const Instance& inst) {
    std::optional<SplitCandidate> best;
    Cost best_arc = 0;
    for (std::size_t k = 0; k < open.size(); ++k) {
        const int amount = exchangeable(open[k].residual, vehicle_load, vehicle_capacity);
        if (amount <= 0) continue;
        const Cost arc = inst.c(position, open[k].station);
        if (!best || amount > best->amount || (amount == best->amount && arc < best_arc)) {
            best = SplitCandidate{open[k].station, amount, k};
            best_arc = arc;
        }
    }
    if (!best) throw std::logic_error("construction stalled: no station can exchange bikes");
    return *best;
}

/// Greedy randomized construction. Stations with demand plus a coin-flipped
/// subset of zero-demand stations are shuffled into the open list; the first
/// station servable in one visit is appended, otherwise the best partial
/// exchange is appended. The result is always feasible on a valid instance.
inline Solution generate_initial(const Instance& inst, Rng& rng) {
    const int Q = inst.vehicle_capacity;
    std::vector<OpenVertex> open;
    for (int i = 1; i <= inst.n; ++i) {
        const int d = inst.station(i).demand;
        if (d != 0 || rng.coin()) open.push_back({i, d});
    }
    rng.shuffle(open);

    Route route{kDepot};
    int load = 0;
    while (!open.empty()) {
        bool inserted = false;
        for (std::size_t k = 0; k < open.size(); ++k) {
            if (!full_service_fits(open[k].residual, load, Q)) continue;
            route.push_back(open[k].station);
            load -= open[k].residual;
            open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
            inserted = true;
            break;
        }
        if (inserted) continue;
        const SplitCandidate pick = best_split_candidate(open, load, Q, route.back(), inst);
        OpenVertex& ov = open[pick.open_index];
        route.push_back(ov.station);
        if (ov.residual > 0) {
            ov.residual -= pick.amount;
            load -= pick.amount;
        } else {
            ov.residual += pick.amount;
            load += pick.amount;
        }
        assert(load >= 0 && load <= Q);
        if (ov.residual == 0) open.erase(open.begin() + static_cast<std::ptrdiff_t>(pick.open_index));
    }
    route.push_back(kDepot);
    return make_solution(std::move(route), inst);
}

}  // namespace sbrp
