#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <random>
#include <vector>

#include "sbrp/instance.hpp"
#include "sbrp/maxflow.hpp"
#include "sbrp/rng.hpp"
#include "sbrp/search.hpp"
#include "sbrp/solution.hpp"

namespace sbrp::testutil {

/// Raw demands in [-dmax, dmax] summing to zero (depot entry 0).
inline std::vector<int> balanced_demands(Rng& rng, int n, int dmax) {
    for (;;) {
        std::vector<int> d(n + 1, 0);
        int sum = 0;
        for (int i = 1; i < n; ++i) {
            d[i] = rng.uniform(-dmax, dmax);
            sum += d[i];
        }
        d[n] = -sum;
        if (n >= 1 && d[n] >= -dmax && d[n] <= dmax) return d;
        if (n == 0) return d;
    }
}

inline std::vector<Point> random_points(Rng& rng, int n, int span = 100) {
    std::vector<Point> pts(n + 1);
    for (Point& p : pts) p = {static_cast<double>(rng.uniform(0, span)), static_cast<double>(rng.uniform(0, span))};
    return pts;
}

/// Benchmark-style instance: p = 10a, p' = a(10 + d), q = 20a.
inline Instance random_instance(Rng& rng, int n, int Q, int dmax, int alpha = 1) {
    return make_instance("random", Q, random_points(rng, n), balanced_demands(rng, n, dmax), alpha);
}

/// Instance with arbitrary small levels: capacities up to qmax.
inline Instance random_small_instance(Rng& rng, int n, int Q, int qmax) {
    for (;;) {
        std::vector<InventoryLevels> lv(n + 1, {0, 0, 0});
        int sum = 0;
        for (int i = 1; i <= n; ++i) {
            const int q = rng.uniform(1, qmax);
            const int p = rng.uniform(0, q);
            const int t = i < n ? rng.uniform(0, q) : p - sum;
            if (i < n) sum += t - p;
            lv[i] = {p, t, q};
        }
        if (n >= 1 && (lv[n].target < 0 || lv[n].target > lv[n].capacity)) continue;
        return make_instance_from_levels("small", Q, random_points(rng, n, 30), lv);
    }
}

/// Depot-terminated route of random stations, repeats allowed.
inline std::vector<StationId> random_route(Rng& rng, int n, int max_len) {
    std::vector<StationId> r{kDepot};
    const int len = rng.uniform(0, max_len);
    for (int j = 0; j < len; ++j) r.push_back(rng.uniform(1, n));
    r.push_back(kDepot);
    return r;
}

/// Minimum s-t cut by enumerating every source side.
inline std::int64_t brute_force_min_cut(const FlowNetwork& net) {
    std::vector<int> inner;
    for (int v = 0; v < net.node_count; ++v)
        if (v != net.source && v != net.sink) inner.push_back(v);
    std::int64_t best = std::numeric_limits<std::int64_t>::max();
    const std::uint32_t subsets = 1u << inner.size();
    std::vector<char> side(net.node_count, 0);
    for (std::uint32_t mask = 0; mask < subsets; ++mask) {
        std::fill(side.begin(), side.end(), 0);
        side[net.source] = 1;
        for (std::size_t k = 0; k < inner.size(); ++k)
            if (mask >> k & 1u) side[inner[k]] = 1;
        std::int64_t cut = 0;
        for (const FlowArc& a : net.arcs)
            if (side[a.tail] && !side[a.head]) cut += a.capacity;
        best = std::min(best, cut);
    }
    return best;
}

/// Random network on `inner` non-terminal nodes with capacities in [0, cmax].
inline FlowNetwork random_network(Rng& rng, int inner, int cmax, double density = 0.35) {
    FlowNetwork net;
    net.source = net.add_node();
    net.sink = net.add_node();
    for (int k = 0; k < inner; ++k) net.add_node();
    std::uniform_real_distribution<double> coin(0.0, 1.0);
    for (int u = 0; u < net.node_count; ++u)
        for (int v = 0; v < net.node_count; ++v) {
            if (u == v || v == net.source || u == net.sink) continue;
            if (coin(rng.engine()) < density) net.add_arc(u, v, rng.uniform(0, cmax));
        }
    return net;
}

/// Floor of the Euclidean distance between integer points by binary search on squares.
inline Cost integer_floor_distance(long long x1, long long y1, long long x2, long long y2) {
    const long long sq = (x1 - x2) * (x1 - x2) + (y1 - y2) * (y1 - y2);
    long long lo = 0, hi = 1;
    while (hi * hi <= sq) hi *= 2;
    while (hi - lo > 1) {
        const long long mid = (lo + hi) / 2;
        (mid * mid <= sq ? lo : hi) = mid;
    }
    return lo;
}

/// Every neighbor of `s` under `n`, generated directly from the move definitions.
inline std::vector<Route> all_neighbors(Neighborhood n, const Solution& s, const Instance& inst) {
    const Route& r = s.route;
    const int m = static_cast<int>(r.size());
    std::vector<Route> out;
    const auto relocations = [&](int len) {
        for (int i = 1; i + len <= m - 1; ++i) {
            Route rest = r;
            const Route block(r.begin() + i, r.begin() + i + len);
            rest.erase(rest.begin() + i, rest.begin() + i + len);
            for (int p = 1; p < static_cast<int>(rest.size()); ++p) {
                if (p == i) continue;
                Route next = rest;
                next.insert(next.begin() + p, block.begin(), block.end());
                if (!has_adjacent_duplicates(next)) out.push_back(next);
            }
        }
    };
    switch (n) {
        case Neighborhood::Reinsertion: relocations(1); break;
        case Neighborhood::OrOpt2: relocations(2); break;
        case Neighborhood::OrOpt3: relocations(3); break;
        case Neighborhood::TwoOpt:
            for (int i = 1; i + 1 < m; ++i)
                for (int j = i + 1; j + 1 < m; ++j) {
                    Route next = r;
                    std::reverse(next.begin() + i, next.begin() + j + 1);
                    if (!has_adjacent_duplicates(next)) out.push_back(next);
                }
            break;
        case Neighborhood::Swap:
            for (int i = 1; i + 1 < m; ++i)
                for (int j = i + 1; j + 1 < m; ++j) {
                    if (r[i] == r[j]) continue;
                    Route next = r;
                    std::swap(next[i], next[j]);
                    if (!has_adjacent_duplicates(next)) out.push_back(next);
                }
            break;
        case Neighborhood::Suppression:
            for (int j = 1; j + 1 < m; ++j) {
                if (inst.station(r[j]).demand != 0 && s.visit_count[r[j]] < 2) continue;
                Route next = r;
                next.erase(next.begin() + j);
                collapse_adjacent_duplicates(next);
                out.push_back(next);
            }
            break;
    }
    return out;
}

/// Eight stations, Q = 10. The single-visit route 0..8,0 is infeasible; the
/// repair step revisits stations 1 and 7, after which the schedule is forced.
inline Instance repair_scenario() {
    std::vector<Point> pts{{0, 0},   {0, 50},    {150, 400}, {552, 70}, {1000, 470},
                           {700, 226}, {1476, 18}, {1310, 260}, {1400, 600}};
    const std::vector<InventoryLevels> lv{{0, 0, 0},    {20, 10, 20}, {10, 12, 20}, {10, 1, 20}, {10, 20, 20},
                                          {10, 2, 20}, {10, 17, 20}, {3, 10, 20},  {10, 11, 20}};
    return make_instance_from_levels("repair", 10, pts, lv);
}

}  // namespace sbrp::testutil
