#pragma once

#include <algorithm>
#include <optional>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "sbrp/instance.hpp"
#include "sbrp/rng.hpp"
#include "sbrp/search.hpp"
#include "sbrp/solution.hpp"

namespace sbrp {

enum class Perturbation { AddBuffer, AddStations, DoubleBridge, Suppression };

inline constexpr std::string_view to_string(Perturbation p) {
    switch (p) {
        case Perturbation::AddBuffer: return "p1";
        case Perturbation::AddStations: return "p2";
        case Perturbation::DoubleBridge: return "p3";
        case Perturbation::Suppression: return "p4";
    }
    return "?";
}

inline std::optional<Perturbation> perturbation_from_string(std::string_view s) {
    if (s == "p1" || s == "P1") return Perturbation::AddBuffer;
    if (s == "p2" || s == "P2") return Perturbation::AddStations;
    if (s == "p3" || s == "P3") return Perturbation::DoubleBridge;
    if (s == "p4" || s == "P4") return Perturbation::Suppression;
    return std::nullopt;
}

/// Inventory left at each station by the solution's schedule compared with
/// its target. Unrouted stations keep their initial level.
struct ImbalanceReport {
    std::vector<int> excess;   // level - target when positive
    std::vector<int> shortfall;  // target - level when positive
    std::optional<StationId> most_excess;
    std::optional<StationId> most_shortfall;

    [[nodiscard]] long total() const {
        long t = 0;
        for (std::size_t i = 0; i < excess.size(); ++i) t += excess[i] + shortfall[i];
        return t;
    }
};

inline ImbalanceReport imbalance(const Solution& s, const Instance& inst) {
    std::vector<int> collected(inst.n + 1, 0);
    for (std::size_t j = 1; j + 1 < s.route.size(); ++j) collected[s.route[j]] += s.operations[j];
    ImbalanceReport rep;
    rep.excess.assign(inst.n + 1, 0);
    rep.shortfall.assign(inst.n + 1, 0);
    for (int i = 1; i <= inst.n; ++i) {
        const Station& st = inst.station(i);
        const int diff = st.initial - collected[i] - st.target;
        if (diff > 0) rep.excess[i] = diff;
        if (diff < 0) rep.shortfall[i] = -diff;
        if (diff > 0 && (!rep.most_excess || diff > rep.excess[*rep.most_excess])) rep.most_excess = i;
        if (diff < 0 && (!rep.most_shortfall || -diff > rep.shortfall[*rep.most_shortfall])) rep.most_shortfall = i;
    }
    return rep;
}

namespace detail {

inline int last_position_of(const Route& r, StationId st) {
    for (int j = static_cast<int>(r.size()) - 2; j >= 1; --j)
        if (r[j] == st) return j;
    return -1;
}

/// Valid insertion slots p (insert before r[p]) in [lo, m-1] that create no
/// adjacent duplicate.
inline std::vector<int> insertion_slots(const Route& r, StationId st, int lo) {
    std::vector<int> slots;
    for (int p = std::max(lo, 1); p < static_cast<int>(r.size()); ++p)
        if (!clash(r[p - 1], st) && !clash(st, r[p])) slots.push_back(p);
    return slots;
}

inline std::optional<int> cheapest_slot(const Route& r, StationId st, const Instance& inst) {
    std::optional<int> best;
    Cost best_delta = 0;
    for (int p : insertion_slots(r, st, 1)) {
        const Cost delta = inst.c(r[p - 1], st) + inst.c(st, r[p]) - inst.c(r[p - 1], r[p]);
        if (!best || delta < best_delta) {
            best = p;
            best_delta = delta;
        }
    }
    return best;
}

/// Cut points a < b < c < d split the route into A B C D E; returns A D C B E.
inline Route exchange_blocks(const Route& r, int a, int b, int c, int d) {
    Route out(r.begin(), r.begin() + a);
    out.insert(out.end(), r.begin() + c, r.begin() + d);
    out.insert(out.end(), r.begin() + b, r.begin() + c);
    out.insert(out.end(), r.begin() + a, r.begin() + b);
    out.insert(out.end(), r.begin() + d, r.end());
    return out;
}

}  // namespace detail

/// Repair step: pairs the station with the largest surplus (i) with the one
/// with the largest shortfall (j). If j is routed, "i, j" goes after j's last
/// visit; else if i is routed, "j, i" goes after i's last visit; otherwise "i, j"
/// goes before the final depot. Feasible input is returned unchanged.
inline Solution add_unbalanced(Solution s, const Instance& inst) {
    if (s.feasible) return s;
    const ImbalanceReport rep = imbalance(s, inst);
    if (!rep.most_excess || !rep.most_shortfall) return s;
    const StationId i = *rep.most_excess, j = *rep.most_shortfall;
    Route& r = s.route;
    if (const int pj = detail::last_position_of(r, j); pj > 0) {
        r.insert(r.begin() + pj + 1, {i, j});
    } else if (const int pi = detail::last_position_of(r, i); pi > 0) {
        r.insert(r.begin() + pi + 1, {j, i});
    } else {
        r.insert(r.end() - 1, {i, j});
    }
    return rebuild_bookkeeping(std::move(s), inst);
}

/// One extra visit to a random station at its cheapest slot; unrouted stations
/// get two visits. Identity when no station can be inserted.
inline Solution add_buffer(Solution s, const Instance& inst, Rng& rng) {
    std::vector<StationId> insertable;
    for (int st = 1; st <= inst.n; ++st)
        if (detail::cheapest_slot(s.route, st, inst)) insertable.push_back(st);
    if (insertable.empty()) return s;
    const StationId st = insertable[rng.index(insertable.size())];
    const int copies = s.visit_count[st] == 0 ? 2 : 1;
    for (int c = 0; c < copies; ++c) {
        const auto slot = detail::cheapest_slot(s.route, st, inst);
        if (!slot) break;
        s.route.insert(s.route.begin() + *slot, st);
    }
    return rebuild_bookkeeping(std::move(s), inst);
}

/// Up to three random stations visited at most once receive one extra visit
/// (two if unrouted) at random slots in the last third of the route.
inline Solution add_stations(Solution s, const Instance& inst, Rng& rng) {
    std::vector<StationId> eligible;
    for (int st = 1; st <= inst.n; ++st)
        if (s.visit_count[st] <= 1) eligible.push_back(st);
    if (eligible.empty()) return s;
    const int k = std::min<int>(rng.uniform(1, 3), static_cast<int>(eligible.size()));
    rng.shuffle(eligible);
    for (int t = 0; t < k; ++t) {
        const StationId st = eligible[t];
        const int copies = s.visit_count[st] == 0 ? 2 : 1;
        for (int c = 0; c < copies; ++c) {
            const int m = static_cast<int>(s.route.size());
            auto slots = detail::insertion_slots(s.route, st, (2 * (m - 1)) / 3);
            if (slots.empty()) slots = detail::insertion_slots(s.route, st, 1);
            if (slots.empty()) break;
            s.route.insert(s.route.begin() + slots[rng.index(slots.size())], st);
        }
    }
    return rebuild_bookkeeping(std::move(s), inst);
}

/// Exchanges two non-adjacent internal blocks: A B C D E -> A D C B E. Four arcs
/// change and the visit multiset is preserved. Needs at least four internal
/// visits, otherwise identity.
inline Solution double_bridge(Solution s, const Instance& inst, Rng& rng) {
    const int m = static_cast<int>(s.route.size());
    if (m - 2 < 4) return s;
    std::vector<int> cuts(m - 1);
    for (int t = 0; t < m - 1; ++t) cuts[t] = t + 1;
    Route best;
    // a few redraws to avoid cut points that glue equal stations together
    for (int attempt = 0; attempt < 8; ++attempt) {
        std::vector<int> pick = cuts;
        for (int t = 0; t < 4; ++t) std::swap(pick[t], pick[t + rng.index(pick.size() - t)]);
        pick.resize(4);
        std::sort(pick.begin(), pick.end());
        best = detail::exchange_blocks(s.route, pick[0], pick[1], pick[2], pick[3]);
        if (!has_adjacent_duplicates(best)) break;
    }
    s.route = std::move(best);
    return rebuild_bookkeeping(std::move(s), inst);
}

/// Removes one random entry of the suppression list, feasible or not.
inline Solution suppress_random(Solution s, const Instance& inst, Rng& rng) {
    const auto list = suppression_list(s, inst);
    if (list.empty()) return s;
    s.route.erase(s.route.begin() + list[rng.index(list.size())]);
    collapse_adjacent_duplicates(s.route);
    return rebuild_bookkeeping(std::move(s), inst);
}

inline Solution apply_perturbation(Perturbation p, Solution s, const Instance& inst, Rng& rng) {
    switch (p) {
        case Perturbation::AddBuffer: return add_buffer(std::move(s), inst, rng);
        case Perturbation::AddStations: return add_stations(std::move(s), inst, rng);
        case Perturbation::DoubleBridge: return double_bridge(std::move(s), inst, rng);
        case Perturbation::Suppression: return suppress_random(std::move(s), inst, rng);
    }
    return s;
}

struct PerturbResult {
    Solution solution;
    Perturbation applied = Perturbation::AddBuffer;
    bool changed = false;
};

/// Draws one enabled mechanism uniformly and applies it.
inline PerturbResult perturb(const Solution& s, const Instance& inst, const std::vector<Perturbation>& enabled,
                             Rng& rng) {
    if (enabled.empty()) throw std::invalid_argument("no perturbation enabled");
    const Perturbation p = enabled[rng.index(enabled.size())];
    PerturbResult out{apply_perturbation(p, s, inst, rng), p, false};
    out.changed = out.solution.route != s.route;
    return out;
}

}  // namespace sbrp
