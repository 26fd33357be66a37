#pragma once

#include <algorithm>
#include <array>
#include <cassert>
#include <chrono>
#include <optional>
#include <string_view>
#include <vector>

#include "sbrp/feasibility.hpp"
#include "sbrp/instance.hpp"
#include "sbrp/rng.hpp"
#include "sbrp/solution.hpp"

namespace sbrp {

enum class Neighborhood { Reinsertion, OrOpt2, OrOpt3, TwoOpt, Swap, Suppression };

inline constexpr std::array<Neighborhood, 6> kAllNeighborhoods{
    Neighborhood::Reinsertion, Neighborhood::OrOpt2, Neighborhood::OrOpt3,
    Neighborhood::TwoOpt,      Neighborhood::Swap,   Neighborhood::Suppression};

inline constexpr std::string_view to_string(Neighborhood n) {
    switch (n) {
        case Neighborhood::Reinsertion: return "reinsertion";
        case Neighborhood::OrOpt2: return "or-opt2";
        case Neighborhood::OrOpt3: return "or-opt3";
        case Neighborhood::TwoOpt: return "2-opt";
        case Neighborhood::Swap: return "swap";
        case Neighborhood::Suppression: return "suppression";
    }
    return "?";
}

struct Move {
    Neighborhood neighborhood = Neighborhood::Reinsertion;
    std::vector<int> indices;  // route positions defining the move
    Cost delta_cost = 0;
    Route resulting_route;
};

/// Wall-clock cutoff; a default-constructed deadline never expires.
class Deadline {
public:
    using Clock = std::chrono::steady_clock;

    Deadline() = default;
    explicit Deadline(Clock::time_point at) : at_(at) {}

    static Deadline after(double seconds) {
        if (!(seconds > 0) || seconds > 1e9) return {};
        return Deadline(Clock::now() + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(seconds)));
    }

    [[nodiscard]] bool expired() const { return at_ && Clock::now() >= *at_; }

private:
    std::optional<Clock::time_point> at_;
};

/// Visits that may be dropped: zero-demand stations, or stations visited more than once.
inline std::vector<int> suppression_list(const Solution& s, const Instance& inst) {
    std::vector<int> positions;
    for (int j = 1; j + 1 < static_cast<int>(s.route.size()); ++j) {
        const StationId st = s.route[j];
        if (inst.station(st).demand == 0 || s.visit_count[st] > 1) positions.push_back(j);
    }
    return positions;
}

namespace detail {

struct Candidate {
    Cost delta = 0;
    int a = 0, b = 0, c = 0;
};

inline bool clash(StationId x, StationId y) { return x == y && x != kDepot; }

/// Moves block [i, i+len) so that it lands right before original position p.
inline Route relocate_block(const Route& r, int i, int len, int p) {
    Route out;
    out.reserve(r.size());
    const auto block_begin = r.begin() + i, block_end = r.begin() + i + len;
    if (p < i) {
        out.insert(out.end(), r.begin(), r.begin() + p);
        out.insert(out.end(), block_begin, block_end);
        out.insert(out.end(), r.begin() + p, block_begin);
        out.insert(out.end(), block_end, r.end());
    } else {
        out.insert(out.end(), r.begin(), block_begin);
        out.insert(out.end(), block_end, r.begin() + p);
        out.insert(out.end(), block_begin, block_end);
        out.insert(out.end(), r.begin() + p, r.end());
    }
    return out;
}

inline void relocation_candidates(const Route& r, const Instance& inst, int len, std::vector<Candidate>& out) {
    const int m = static_cast<int>(r.size());
    for (int i = 1; i + len <= m - 1; ++i) {
        const StationId before = r[i - 1], first = r[i], last = r[i + len - 1], after = r[i + len];
        if (clash(before, after)) continue;
        const Cost removal = inst.c(before, after) - inst.c(before, first) - inst.c(last, after);
        for (int p = 1; p <= m - 1; ++p) {
            if (p >= i && p <= i + len) continue;
            const StationId left = r[p - 1], right = r[p];
            if (clash(left, first) || clash(last, right)) continue;
            const Cost insertion = inst.c(left, first) + inst.c(last, right) - inst.c(left, right);
            out.push_back({removal + insertion, i, p, len});
        }
    }
}

inline void twoopt_candidates(const Route& r, const Instance& inst, std::vector<Candidate>& out) {
    const int m = static_cast<int>(r.size());
    // forward[t] / backward[t]: cost of arcs 0..t-1 walked forward / reversed
    std::vector<Cost> forward(m, 0), backward(m, 0);
    for (int t = 0; t + 1 < m; ++t) {
        forward[t + 1] = forward[t] + inst.c(r[t], r[t + 1]);
        backward[t + 1] = backward[t] + inst.c(r[t + 1], r[t]);
    }
    for (int i = 1; i + 1 < m; ++i) {
        for (int j = i + 1; j + 1 < m; ++j) {
            if (clash(r[i - 1], r[j]) || clash(r[i], r[j + 1])) continue;
            const Cost delta = inst.c(r[i - 1], r[j]) + inst.c(r[i], r[j + 1]) - inst.c(r[i - 1], r[i]) -
                               inst.c(r[j], r[j + 1]) + (backward[j] - backward[i]) - (forward[j] - forward[i]);
            out.push_back({delta, i, j, 0});
        }
    }
}

inline void swap_candidates(const Route& r, const Instance& inst, std::vector<Candidate>& out) {
    const int m = static_cast<int>(r.size());
    for (int i = 1; i + 1 < m; ++i) {
        for (int j = i + 1; j + 1 < m; ++j) {
            const StationId x = r[i], y = r[j];
            if (x == y) continue;
            Cost delta = 0;
            if (j == i + 1) {
                if (clash(r[i - 1], y) || clash(x, r[j + 1])) continue;
                delta = inst.c(r[i - 1], y) + inst.c(y, x) + inst.c(x, r[j + 1]) - inst.c(r[i - 1], x) -
                        inst.c(x, y) - inst.c(y, r[j + 1]);
            } else {
                if (clash(r[i - 1], y) || clash(y, r[i + 1]) || clash(r[j - 1], x) || clash(x, r[j + 1])) continue;
                delta = inst.c(r[i - 1], y) + inst.c(y, r[i + 1]) + inst.c(r[j - 1], x) + inst.c(x, r[j + 1]) -
                        inst.c(r[i - 1], x) - inst.c(x, r[i + 1]) - inst.c(r[j - 1], y) - inst.c(y, r[j + 1]);
            }
            out.push_back({delta, i, j, 0});
        }
    }
}

inline void suppression_candidates(const Solution& s, const Instance& inst, std::vector<Candidate>& out) {
    const Route& r = s.route;
    for (int j : suppression_list(s, inst))
        out.push_back({inst.c(r[j - 1], r[j + 1]) - inst.c(r[j - 1], r[j]) - inst.c(r[j], r[j + 1]), j, 0, 0});
}

inline Route apply_candidate(Neighborhood n, const Route& r, const Candidate& cand) {
    switch (n) {
        case Neighborhood::Reinsertion:
        case Neighborhood::OrOpt2:
        case Neighborhood::OrOpt3: return relocate_block(r, cand.a, cand.c, cand.b);
        case Neighborhood::TwoOpt: {
            Route out = r;
            std::reverse(out.begin() + cand.a, out.begin() + cand.b + 1);
            return out;
        }
        case Neighborhood::Swap: {
            Route out = r;
            std::swap(out[cand.a], out[cand.b]);
            return out;
        }
        case Neighborhood::Suppression: {
            Route out = r;
            out.erase(out.begin() + cand.a);
            collapse_adjacent_duplicates(out);
            return out;
        }
    }
    return r;
}

inline std::vector<int> candidate_indices(Neighborhood n, const Candidate& cand) {
    switch (n) {
        case Neighborhood::Reinsertion:
        case Neighborhood::OrOpt2:
        case Neighborhood::OrOpt3: return {cand.a, cand.b};
        case Neighborhood::TwoOpt:
        case Neighborhood::Swap: return {cand.a, cand.b};
        case Neighborhood::Suppression: return {cand.a};
    }
    return {};
}

}  // namespace detail

/// Lowest-delta feasible move of a neighborhood. From a feasible solution only
/// strictly improving moves count; from an infeasible one any feasible neighbor
/// does. Ties go to the earlier candidate in scan order. Candidates are checked
/// for feasibility cheapest first, so most are never flow-checked.
inline std::optional<Move> best_move(Neighborhood n, const Solution& s, const Instance& inst) {
    std::vector<detail::Candidate> cands;
    switch (n) {
        case Neighborhood::Reinsertion: detail::relocation_candidates(s.route, inst, 1, cands); break;
        case Neighborhood::OrOpt2: detail::relocation_candidates(s.route, inst, 2, cands); break;
        case Neighborhood::OrOpt3: detail::relocation_candidates(s.route, inst, 3, cands); break;
        case Neighborhood::TwoOpt: detail::twoopt_candidates(s.route, inst, cands); break;
        case Neighborhood::Swap: detail::swap_candidates(s.route, inst, cands); break;
        case Neighborhood::Suppression: detail::suppression_candidates(s, inst, cands); break;
    }
    std::stable_sort(cands.begin(), cands.end(),
                     [](const detail::Candidate& x, const detail::Candidate& y) { return x.delta < y.delta; });
    for (const detail::Candidate& cand : cands) {
        if (s.feasible && cand.delta >= 0) break;
        Route next = detail::apply_candidate(n, s.route, cand);
        if (!is_feasible(next, inst)) continue;
        assert(route_cost(next, inst) - s.cost == cand.delta);
        return Move{n, detail::candidate_indices(n, cand), cand.delta, std::move(next)};
    }
    return std::nullopt;
}

inline std::optional<Move> best_move_reinsertion(const Solution& s, const Instance& inst) {
    return best_move(Neighborhood::Reinsertion, s, inst);
}
inline std::optional<Move> best_move_oropt2(const Solution& s, const Instance& inst) {
    return best_move(Neighborhood::OrOpt2, s, inst);
}
inline std::optional<Move> best_move_oropt3(const Solution& s, const Instance& inst) {
    return best_move(Neighborhood::OrOpt3, s, inst);
}
inline std::optional<Move> best_move_twoopt(const Solution& s, const Instance& inst) {
    return best_move(Neighborhood::TwoOpt, s, inst);
}
inline std::optional<Move> best_move_swap(const Solution& s, const Instance& inst) {
    return best_move(Neighborhood::Swap, s, inst);
}
inline std::optional<Move> best_move_suppression(const Solution& s, const Instance& inst) {
    return best_move(Neighborhood::Suppression, s, inst);
}

struct RvndStats {
    long scans = 0;
    long moves = 0;
};

/// Randomized variable neighborhood descent. A neighborhood is drawn uniformly
/// from those not yet failed; an improvement restores all six, a failure drops
/// the drawn one. Stops when none is left or the deadline passes.
inline Solution rvnd(Solution s, const Instance& inst, Rng& rng, const Deadline& deadline = {},
                     RvndStats* stats = nullptr) {
    std::vector<Neighborhood> open(kAllNeighborhoods.begin(), kAllNeighborhoods.end());
    while (!open.empty() && !deadline.expired()) {
        const std::size_t k = rng.index(open.size());
        if (stats) ++stats->scans;
        if (auto move = best_move(open[k], s, inst)) {
            s.route = std::move(move->resulting_route);
            s = rebuild_bookkeeping(std::move(s), inst);
            open.assign(kAllNeighborhoods.begin(), kAllNeighborhoods.end());
            if (stats) ++stats->moves;
        } else {
            open.erase(open.begin() + static_cast<std::ptrdiff_t>(k));
        }
    }
    return s;
}

}  // namespace sbrp
