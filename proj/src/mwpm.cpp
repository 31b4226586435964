#include "scdec/mwpm.hpp"

#include <algorithm>
#include <cstdlib>
#include <limits>
#include <queue>
#include <sstream>

namespace scdec {

namespace {

// Check-adjacency graph of one sector: nodes are checks, edges are the data
// qubits shared by two checks (or leading off the open boundary).
struct CheckGraph {
    int num_checks = 0;
    // neighbor check (or -1 for boundary) and the data qubit realizing the hop
    std::vector<std::vector<std::pair<int, int>>> adjacency;
    std::vector<int> boundary_dist;
    std::vector<std::vector<int>> dist;  // all pairs

    static CheckGraph make(const CodeLayout& layout, ErrorSector sector) {
        const auto& checks = sector == ErrorSector::Z ? layout.x_checks : layout.z_checks;
        const auto& incident =
            sector == ErrorSector::Z ? layout.data_to_x_checks : layout.data_to_z_checks;

        CheckGraph g;
        g.num_checks = static_cast<int>(checks.size());
        g.adjacency.resize(g.num_checks);
        for (int q = 0; q < layout.num_data; ++q) {
            const auto& inc = incident[q];
            if (inc.size() == 2) {
                g.adjacency[inc[0]].push_back({inc[1], q});
                g.adjacency[inc[1]].push_back({inc[0], q});
            } else if (inc.size() == 1) {
                g.adjacency[inc[0]].push_back({-1, q});  // boundary hop
            }
        }

        g.dist.assign(g.num_checks, std::vector<int>(g.num_checks, -1));
        for (int s = 0; s < g.num_checks; ++s) {
            auto& d = g.dist[s];
            d[s] = 0;
            std::queue<int> bfs;
            bfs.push(s);
            while (!bfs.empty()) {
                const int u = bfs.front();
                bfs.pop();
                for (const auto& [v, q] : g.adjacency[u]) {
                    if (v >= 0 && d[v] < 0) {
                        d[v] = d[u] + 1;
                        bfs.push(v);
                    }
                }
            }
        }

        g.boundary_dist.assign(g.num_checks, -1);
        std::queue<int> bfs;
        for (int c = 0; c < g.num_checks; ++c) {
            for (const auto& [v, q] : g.adjacency[c]) {
                if (v < 0) {
                    g.boundary_dist[c] = 1;
                    bfs.push(c);
                    break;
                }
            }
        }
        while (!bfs.empty()) {
            const int u = bfs.front();
            bfs.pop();
            for (const auto& [v, q] : g.adjacency[u]) {
                if (v >= 0 && g.boundary_dist[v] < 0) {
                    g.boundary_dist[v] = g.boundary_dist[u] + 1;
                    bfs.push(v);
                }
            }
        }
        return g;
    }

    // Shortest path from check `from` toward `to` (or the boundary when
    // to < 0); returns the data qubits along the chain.
    std::vector<int> chain(int from, int to) const {
        auto target_dist = [&](int c) { return to < 0 ? boundary_dist[c] : dist[to][c]; };
        std::vector<int> qubits;
        int cur = from;
        while (to < 0 || cur != to) {
            int best_next = -2, best_qubit = -1, best_d = std::numeric_limits<int>::max();
            for (const auto& [v, q] : adjacency[cur]) {
                const int d = v < 0 ? (to < 0 ? 0 : std::numeric_limits<int>::max())
                                    : target_dist(v);
                if (d < best_d || (d == best_d && v >= 0 && v < best_next)) {
                    best_d = d;
                    best_next = v;
                    best_qubit = q;
                }
            }
            qubits.push_back(best_qubit);
            if (best_next < 0) break;  // stepped off the boundary
            cur = best_next;
        }
        return qubits;
    }
};

struct SubsetSolver {
    const std::vector<int>& nodes;  // defect indices of this component
    const MatchingInstance& inst;
    std::vector<int64_t> memo;
    std::vector<int> choice;  // packed partner decision for the lowest bit

    SubsetSolver(const std::vector<int>& nodes_, const MatchingInstance& inst_)
        : nodes(nodes_), inst(inst_) {
        memo.assign(size_t{1} << nodes.size(), -1);
        choice.assign(size_t{1} << nodes.size(), -2);
    }

    int64_t solve(uint32_t mask) {
        if (mask == 0) return 0;
        if (memo[mask] >= 0) return memo[mask];
        const int i = __builtin_ctz(mask);
        const int di = nodes[i];
        // Boundary option first: preferred on ties.
        int64_t best = inst.boundary_weight[di] + solve(mask & (mask - 1));
        int best_choice = -1;
        for (int j = i + 1; j < static_cast<int>(nodes.size()); ++j) {
            if (!(mask & (1u << j))) continue;
            const int dj = nodes[j];
            const int64_t w =
                inst.pair_weight[di][dj] + solve(mask & ~(1u << i) & ~(1u << j));
            if (w < best) {
                best = w;
                best_choice = j;
            }
        }
        memo[mask] = best;
        choice[mask] = best_choice;
        return best;
    }

    void reconstruct(uint32_t mask, std::vector<int>& partner) {
        while (mask != 0) {
            solve(mask);
            const int i = __builtin_ctz(mask);
            const int c = choice[mask];
            if (c < 0) {
                partner[nodes[i]] = -1;
                mask &= mask - 1;
            } else {
                partner[nodes[i]] = nodes[c];
                partner[nodes[c]] = nodes[i];
                mask &= ~(1u << i) & ~(1u << c);
            }
        }
    }
};

}  // namespace

MatchingInstance build_matching_instance(const CodeLayout& layout,
                                         const SyndromeTensor& syndrome,
                                         ErrorSector sector) {
    const CheckGraph graph = CheckGraph::make(layout, sector);
    const auto& diff = sector == ErrorSector::Z ? syndrome.x_diff : syndrome.z_diff;

    MatchingInstance inst;
    inst.sector = sector;
    inst.layers = syndrome.layers;
    for (int t = 0; t < syndrome.layers; ++t)
        for (int c = 0; c < static_cast<int>(diff[t].size()); ++c)
            if (diff[t][c] < 0) inst.defects.push_back({c, t + 1});

    const int n = static_cast<int>(inst.defects.size());
    inst.boundary_weight.resize(n);
    inst.pair_weight.assign(n, std::vector<int>(n, 0));
    for (int i = 0; i < n; ++i) {
        inst.boundary_weight[i] = graph.boundary_dist[inst.defects[i].check];
        for (int j = i + 1; j < n; ++j) {
            const int spatial = graph.dist[inst.defects[i].check][inst.defects[j].check];
            const int temporal = std::abs(inst.defects[i].layer - inst.defects[j].layer);
            inst.pair_weight[i][j] = inst.pair_weight[j][i] = spatial + temporal;
        }
    }
    return inst;
}

Matching solve_matching(const MatchingInstance& instance, int component_cap) {
    const int n = static_cast<int>(instance.defects.size());
    Matching m;
    m.partner.assign(n, -1);
    m.total_weight = 0;
    if (n == 0) return m;

    // Components under the pruned edge set: an edge at least as long as both
    // endpoints' boundary chains can be replaced by two boundary matches.
    std::vector<int> comp(n, -1);
    int num_comp = 0;
    for (int s = 0; s < n; ++s) {
        if (comp[s] >= 0) continue;
        comp[s] = num_comp;
        std::queue<int> bfs;
        bfs.push(s);
        while (!bfs.empty()) {
            const int u = bfs.front();
            bfs.pop();
            for (int v = 0; v < n; ++v) {
                if (comp[v] >= 0 || v == u) continue;
                if (instance.pair_weight[u][v] <
                    instance.boundary_weight[u] + instance.boundary_weight[v]) {
                    comp[v] = num_comp;
                    bfs.push(v);
                }
            }
        }
        ++num_comp;
    }

    for (int c = 0; c < num_comp; ++c) {
        std::vector<int> nodes;
        for (int i = 0; i < n; ++i)
            if (comp[i] == c) nodes.push_back(i);
        if (static_cast<int>(nodes.size()) > component_cap) {
            std::ostringstream os;
            os << "solve_matching: component of " << nodes.size() << " defects exceeds cap "
               << component_cap;
            throw CapacityError(os.str());
        }
        SubsetSolver solver(nodes, instance);
        const uint32_t full = (nodes.size() == 32) ? 0xffffffffu
                                                   : ((1u << nodes.size()) - 1u);
        m.total_weight += solver.solve(full);
        solver.reconstruct(full, m.partner);
    }
    return m;
}

SectorEvents correction_from_matching(const CodeLayout& layout,
                                      const MatchingInstance& instance,
                                      const Matching& matching) {
    const CheckGraph graph = CheckGraph::make(layout, instance.sector);
    const int num_checks = graph.num_checks;

    SectorEvents ev;
    ev.data.assign(instance.layers, std::vector<uint8_t>(layout.num_data, 0));
    ev.meas.assign(std::max(instance.layers - 1, 0),
                   std::vector<uint8_t>(num_checks, 0));

    const int n = static_cast<int>(instance.defects.size());
    for (int i = 0; i < n; ++i) {
        const int j = matching.partner[i];
        if (j >= 0 && j < i) continue;  // pair handled once
        const auto& a = instance.defects[i];
        if (j < 0) {
            for (int q : graph.chain(a.check, -1)) ev.data[a.layer - 1][q] ^= 1;
            continue;
        }
        const auto& b = instance.defects[j];
        const int t_lo = std::min(a.layer, b.layer);
        const int t_hi = std::max(a.layer, b.layer);
        const int lower_check = a.layer <= b.layer ? a.check : b.check;
        // Measurement chain moves the earlier defect to the later layer...
        for (int g = t_lo; g < t_hi; ++g) ev.meas[g - 1][lower_check] ^= 1;
        // ...then a spatial chain joins the checks within that layer.
        if (a.check != b.check)
            for (int q : graph.chain(a.check, b.check)) ev.data[t_hi - 1][q] ^= 1;
    }
    return ev;
}

}  // namespace scdec
