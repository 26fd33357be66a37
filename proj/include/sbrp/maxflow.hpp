#pragma once

#include <algorithm>
#include <cstdint>
#include <limits>
#include <stdexcept>
#include <vector>

namespace sbrp {

/// What an arc stands for in the displacement network. `Plain` is for networks
/// built outside the feasibility checker.
enum class ArcRole : std::uint8_t { Plain, Supply, Leg, Storage, Demand };

struct FlowArc {
    int tail = 0;
    int head = 0;
    std::int64_t capacity = 0;
    ArcRole role = ArcRole::Plain;
    int index = -1;  // role-specific: route position for Supply/Leg/Demand, station for Storage
};

struct FlowNetwork {
    int node_count = 0;
    int source = 0;
    int sink = 1;
    std::vector<FlowArc> arcs;

    int add_node() { return node_count++; }

    int add_arc(int tail, int head, std::int64_t capacity, ArcRole role = ArcRole::Plain, int index = -1) {
        if (capacity < 0) throw std::invalid_argument("negative arc capacity");
        if (tail < 0 || tail >= node_count || head < 0 || head >= node_count)
            throw std::out_of_range("arc endpoint outside network");
        arcs.push_back({tail, head, capacity, role, index});
        return static_cast<int>(arcs.size()) - 1;
    }
};

struct MaxFlowResult {
    std::int64_t value = 0;
    std::vector<std::int64_t> flow;  // parallel to FlowNetwork::arcs
};

namespace detail {

/// Scratch buffers reused across max_flow calls on the same thread.
struct FlowWorkspace {
    std::vector<int> first_out;  // CSR offsets per node
    std::vector<int> edges;      // residual edge ids grouped by tail
    std::vector<int> level;
    std::vector<int> cursor;
    std::vector<int> queue;
    std::vector<int> path;       // residual edges of the current DFS branch
};

inline FlowWorkspace& flow_workspace() {
    thread_local FlowWorkspace ws;
    return ws;
}

}  // namespace detail

/// Dinic's algorithm: breadth-first levels, then augmenting along shortest
/// paths until the level graph is blocked. Arcs are scanned in insertion
/// order, so the resulting flow is a deterministic function of the network.
inline MaxFlowResult max_flow(const FlowNetwork& net) {
    const int m = static_cast<int>(net.arcs.size());
    const int nodes = net.node_count;
    MaxFlowResult result;
    result.flow.assign(m, 0);
    if (net.source == net.sink) return result;

    // residual edge 2a is arc a forward, 2a+1 its reverse
    detail::FlowWorkspace& ws = detail::flow_workspace();
    ws.first_out.assign(nodes + 1, 0);
    for (const FlowArc& a : net.arcs) {
        ++ws.first_out[a.tail + 1];
        ++ws.first_out[a.head + 1];
    }
    for (int v = 0; v < nodes; ++v) ws.first_out[v + 1] += ws.first_out[v];
    ws.edges.resize(2 * m);
    ws.queue.resize(nodes);
    ws.level.resize(nodes);
    ws.cursor.resize(nodes);
    std::copy(ws.first_out.begin(), ws.first_out.end() - 1, ws.cursor.begin());
    for (int a = 0; a < m; ++a) {
        ws.edges[ws.cursor[net.arcs[a].tail]++] = 2 * a;
        ws.edges[ws.cursor[net.arcs[a].head]++] = 2 * a + 1;
    }
    std::int64_t* flow = result.flow.data();
    const FlowArc* arcs = net.arcs.data();
    const auto residual = [&](int e) {
        const int a = e >> 1;
        return (e & 1) ? flow[a] : arcs[a].capacity - flow[a];
    };
    const auto head_of = [&](int e) {
        const int a = e >> 1;
        return (e & 1) ? arcs[a].tail : arcs[a].head;
    };
    const auto tail_of = [&](int e) { return head_of(e ^ 1); };

    for (;;) {
        std::fill(ws.level.begin(), ws.level.end(), -1);
        ws.level[net.source] = 0;
        int q_head = 0, q_tail = 0;
        ws.queue[q_tail++] = net.source;
        while (q_head < q_tail) {
            const int v = ws.queue[q_head++];
            for (int k = ws.first_out[v]; k < ws.first_out[v + 1]; ++k) {
                const int e = ws.edges[k];
                const int w = head_of(e);
                if (ws.level[w] != -1 || residual(e) <= 0) continue;
                ws.level[w] = ws.level[v] + 1;
                ws.queue[q_tail++] = w;
            }
        }
        if (ws.level[net.sink] == -1) break;

        std::copy(ws.first_out.begin(), ws.first_out.end() - 1, ws.cursor.begin());
        ws.path.clear();
        int v = net.source;
        for (;;) {
            if (v == net.sink) {
                std::int64_t push = std::numeric_limits<std::int64_t>::max();
                for (int e : ws.path) push = std::min(push, residual(e));
                std::size_t cut = ws.path.size();
                for (std::size_t t = 0; t < ws.path.size(); ++t) {
                    const int e = ws.path[t];
                    flow[e >> 1] += (e & 1) ? -push : push;
                    if (cut == ws.path.size() && residual(e) == 0) cut = t;
                }
                result.value += push;
                // resume from the tail of the first saturated edge
                v = tail_of(ws.path[cut]);
                ws.path.resize(cut);
                continue;
            }
            bool advanced = false;
            for (int& k = ws.cursor[v]; k < ws.first_out[v + 1]; ++k) {
                const int e = ws.edges[k];
                const int w = head_of(e);
                if (ws.level[w] != ws.level[v] + 1 || residual(e) <= 0) continue;
                ws.path.push_back(e);
                v = w;
                advanced = true;
                break;
            }
            if (advanced) continue;
            if (v == net.source) break;
            ws.level[v] = -1;  // dead end for this phase
            v = tail_of(ws.path.back());
            ws.path.pop_back();
            ++ws.cursor[v];
        }
    }
    return result;
}

}  // namespace sbrp
