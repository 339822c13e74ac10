#pragma once

/**
 * @file steiner.hpp
 * @brief Exact Steiner trees and zero-sum defect partitions on the dual lattice.
 *
 * Both rest on one Dreyfus-Wagner table dp[S][v]: the cheapest tree joining
 * terminal set S to vertex v. The table can additionally be indexed by a
 * class eta in Z_d^g, the holonomy the tree's flow picks up when every
 * subtree pushes its terminal class sum towards the root. With g = 0 it is
 * the textbook algorithm.
 */

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <queue>
#include <vector>

#include "nlgame/lattice.hpp"
#include "nlgame/perm.hpp"

namespace nlgame {

namespace detail {

/// Z_d^g with elements encoded base d.
struct ClassSpace {
    int d = 2;
    int g = 0;
    int size = 1;
    std::vector<std::vector<int>> add;   // add[a][b]
    std::vector<std::vector<int>> scale; // scale[f][a] = f * a

    ClassSpace() { init(2, 0); }
    ClassSpace(int d_, int g_) { init(d_, g_); }

    std::vector<int> decode(int code) const {
        std::vector<int> v(g);
        for (int i = 0; i < g; ++i) {
            v[i] = code % d;
            code /= d;
        }
        return v;
    }
    int encode(const std::vector<int>& v) const {
        int code = 0;
        for (int i = g - 1; i >= 0; --i) code = code * d + mod(v[i], d);
        return code;
    }
    int neg(int a) const { return scale[d - 1][a]; }

private:
    void init(int d_, int g_) {
        d = d_;
        g = g_;
        size = 1;
        for (int i = 0; i < g; ++i) size *= d;
        add.assign(size, std::vector<int>(size));
        scale.assign(d, std::vector<int>(size));
        for (int a = 0; a < size; ++a) {
            const auto va = decode(a);
            for (int b = 0; b < size; ++b) {
                auto vb = decode(b);
                for (int i = 0; i < g; ++i) vb[i] = mod(va[i] + vb[i], d);
                add[a][b] = encode(vb);
            }
            for (int f = 0; f < d; ++f) {
                auto vf = va;
                for (int& x : vf) x = mod(static_cast<long long>(x) * f, d);
                scale[f][a] = encode(vf);
            }
        }
    }
};

/// Directed arc of the search graph. Pushing flow f from the tail across it
/// adds sign*f to the primal edge label and scale[f][delta] to the class.
struct Arc {
    int to;
    int weight; // 0 or 1
    int primal; // -1 for virtual arcs
    int sign;
    int delta;
};

struct SearchGraph {
    int n = 0;
    std::vector<std::vector<Arc>> adj;
};

/// Dual lattice as a search graph without class tracking.
inline SearchGraph plain_graph(const DualLattice& dl) {
    SearchGraph g;
    g.n = dl.num_vertices();
    g.adj.assign(g.n, {});
    for (int v = 0; v < g.n; ++v)
        for (int e : dl.adjacent(v)) g.adj[v].push_back({dl.across(e, v), 1, e, 0, 0});
    // several exterior vertices act as one absorbing boundary
    const auto ext = dl.exterior_vertices();
    for (size_t i = 1; i < ext.size(); ++i) {
        g.adj[ext[0]].push_back({ext[i], 0, -1, 0, 0});
        g.adj[ext[i]].push_back({ext[0], 0, -1, 0, 0});
    }
    return g;
}

inline constexpr int kInf = std::numeric_limits<int>::max() / 4;

/// Dreyfus-Wagner over all terminal subsets, optionally class-tracked.
class DreyfusWagner {
public:
    struct TreeArc {
        int primal;
        int label; // accumulated label contribution, mod d
    };

    DreyfusWagner(const SearchGraph& g, const ClassSpace& cs, std::vector<int> terminals, std::vector<int> classes)
        : g_(g), cs_(cs), term_(std::move(terminals)), cls_(std::move(classes)) {
        k_ = static_cast<int>(term_.size());
        if (cls_.empty()) cls_.assign(k_, 0);
        const int nstate = g_.n * cs_.size;
        const std::size_t nmask = std::size_t{1} << k_;
        cost_.assign(nmask, std::vector<int>(nstate, kInf));
        back_.assign(nmask, std::vector<Back>(nstate));
        flow_.assign(nmask, 0);
        for (std::size_t m = 1; m < nmask; ++m) {
            const int low = std::countr_zero(m);
            flow_[m] = mod(flow_[m & (m - 1)] + cls_[low], cs_.d);
        }
        run();
    }

    int num_terminals() const { return k_; }
    int flow(std::size_t mask) const { return flow_[mask]; }
    int cost(std::size_t mask, int v, int eta = 0) const { return cost_[mask][v * cs_.size + eta]; }

    /// Cheapest root for (mask, eta); ties go to the smallest vertex.
    std::pair<int, int> best_root(std::size_t mask, int eta = 0) const {
        int best = kInf, arg = -1;
        for (int v = 0; v < g_.n; ++v) {
            const int c = cost(mask, v, eta);
            if (c < best) {
                best = c;
                arg = v;
            }
        }
        return {best, arg};
    }

    /// Arcs of the tree behind dp[mask][v][eta], with their flow labels.
    std::vector<TreeArc> tree(std::size_t mask, int v, int eta = 0) const {
        std::vector<TreeArc> out;
        collect(mask, v * cs_.size + eta, out);
        return out;
    }

private:
    struct Back {
        int8_t kind = 0; // 0 none, 1 arc, 2 split
        int a = 0;       // arc: previous state; split: submask
        int b = 0;       // arc: arc index in adj[prev vertex]; split: eta of submask
    };

    void run() {
        const int ncls = cs_.size;
        for (int t = 0; t < k_; ++t) {
            cost_[std::size_t{1} << t][term_[t] * ncls] = 0;
            relax(std::size_t{1} << t);
        }
        const std::size_t nmask = std::size_t{1} << k_;
        for (std::size_t m = 1; m < nmask; ++m) {
            if (std::has_single_bit(m)) continue;
            auto& cm = cost_[m];
            auto& bm = back_[m];
            const std::size_t low = m & (~m + 1);
            for (std::size_t sub = (m - 1) & m; sub > 0; sub = (sub - 1) & m) {
                if (!(sub & low)) continue;
                const std::size_t rest = m ^ sub;
                const auto& c1 = cost_[sub];
                const auto& c2 = cost_[rest];
                for (int v = 0; v < g_.n; ++v) {
                    const int base = v * ncls;
                    for (int e1 = 0; e1 < ncls; ++e1) {
                        const int x = c1[base + e1];
                        if (x >= kInf) continue;
                        for (int e2 = 0; e2 < ncls; ++e2) {
                            const int y = c2[base + e2];
                            if (y >= kInf) continue;
                            const int s = base + cs_.add[e1][e2];
                            if (x + y < cm[s]) {
                                cm[s] = x + y;
                                bm[s] = {2, static_cast<int>(sub), e1};
                            }
                        }
                    }
                }
            }
            relax(m);
        }
    }

    void relax(std::size_t m) {
        const int ncls = cs_.size;
        auto& cm = cost_[m];
        auto& bm = back_[m];
        const int f = flow_[m];
        using Item = std::pair<int, int>;
        std::priority_queue<Item, std::vector<Item>, std::greater<>> pq;
        for (int s = 0; s < static_cast<int>(cm.size()); ++s)
            if (cm[s] < kInf) pq.push({cm[s], s});
        while (!pq.empty()) {
            auto [c, s] = pq.top();
            pq.pop();
            if (c != cm[s]) continue;
            const int v = s / ncls, eta = s % ncls;
            const auto& arcs = g_.adj[v];
            for (int i = 0; i < static_cast<int>(arcs.size()); ++i) {
                const Arc& a = arcs[i];
                const int t = a.to * ncls + cs_.add[eta][cs_.scale[f][a.delta]];
                if (c + a.weight < cm[t]) {
                    cm[t] = c + a.weight;
                    bm[t] = {1, s, i};
                    pq.push({cm[t], t});
                }
            }
        }
    }

    void collect(std::size_t m, int s, std::vector<TreeArc>& out) const {
        while (true) {
            const Back& b = back_[m][s];
            if (b.kind == 1) {
                const Arc& a = g_.adj[b.a / cs_.size][b.b];
                if (a.primal >= 0) out.push_back({a.primal, mod(static_cast<long long>(a.sign) * flow_[m], cs_.d)});
                s = b.a;
            } else if (b.kind == 2) {
                const std::size_t sub = static_cast<std::size_t>(b.a);
                const int v = s / cs_.size, eta = s % cs_.size;
                const int e1 = b.b;
                const int e2 = cs_.add[eta][cs_.neg(e1)];
                collect(sub, v * cs_.size + e1, out);
                collect(m ^ sub, v * cs_.size + e2, out);
                return;
            } else {
                return;
            }
        }
    }

    const SearchGraph& g_;
    const ClassSpace& cs_;
    std::vector<int> term_;
    std::vector<int> cls_;
    int k_ = 0;
    std::vector<std::vector<int>> cost_;
    std::vector<std::vector<Back>> back_;
    std::vector<int> flow_;
};

} // namespace detail

struct SteinerResult {
    std::vector<int> terminals; // dual vertices
    std::vector<int> edges;     // primal ids of crossed edges, ascending
    int length = 0;
};

inline constexpr int kMaxSteinerTerminals = 8;
inline constexpr int kMaxPartitionDefects = 10;

/// Minimum Steiner tree in the dual lattice. Exterior vertices count as one.
inline SteinerResult steiner_tree_exact(const DualLattice& dl, std::vector<int> terminals,
                                        int max_terminals = kMaxSteinerTerminals) {
    std::sort(terminals.begin(), terminals.end());
    terminals.erase(std::unique(terminals.begin(), terminals.end()), terminals.end());
    if (static_cast<int>(terminals.size()) > max_terminals)
        throw BudgetExceeded("steiner: " + std::to_string(terminals.size()) + " terminals exceed budget " +
                             std::to_string(max_terminals));
    for (int t : terminals)
        if (t < 0 || t >= dl.num_vertices()) throw InvalidArgument("steiner: terminal out of range");
    SteinerResult r;
    r.terminals = terminals;
    if (terminals.size() <= 1) return r;
    const auto g = detail::plain_graph(dl);
    const detail::ClassSpace cs(2, 0);
    detail::DreyfusWagner dw(g, cs, terminals, {});
    const std::size_t all = (std::size_t{1} << terminals.size()) - 1;
    // rooting at a terminal is always optimal
    r.length = dw.cost(all, terminals.front());
    for (const auto& a : dw.tree(all, terminals.front())) r.edges.push_back(a.primal);
    std::sort(r.edges.begin(), r.edges.end());
    r.edges.erase(std::unique(r.edges.begin(), r.edges.end()), r.edges.end());
    return r;
}

struct Defect {
    int cell;
    int cls; // shift index in Z_d, nonzero
};

struct DefectGroup {
    std::vector<int> members; // indices into the defect list
    bool boundary = false;    // absorbed by the open boundary
    int cost = 0;
    std::vector<int> edges;   // primal ids of the group's tree
};

struct PartitionResult {
    std::vector<DefectGroup> groups;
    int total_cost = 0;
};

/**
 * Cheapest partition of the defects into groups whose classes sum to zero,
 * each joined by a Steiner tree. With an open boundary, at most one extra
 * group may have any class sum; its tree also reaches the boundary.
 * Groups need not be minimal: a larger tree can be cheaper than its parts.
 */
inline PartitionResult partition_defects(const DualLattice& dl, const std::vector<Defect>& defects, int d,
                                         int max_defects = kMaxPartitionDefects) {
    const int k = static_cast<int>(defects.size());
    if (k > max_defects)
        throw BudgetExceeded("partition: " + std::to_string(k) + " defects exceed budget " + std::to_string(max_defects));
    const auto ext = dl.exterior_vertices();
    const bool open = !ext.empty();
    long long sum = 0;
    for (const auto& df : defects) {
        if (df.cell < 0 || df.cell >= dl.num_cells()) throw InvalidArgument("partition: defect cell out of range");
        sum += df.cls;
    }
    if (!open && mod(sum, d) != 0)
        throw InvalidArgument("partition: defect classes sum to " + std::to_string(mod(sum, d)) +
                              " mod " + std::to_string(d) + " on a closed surface");
    PartitionResult res;
    if (k == 0) return res;

    const auto g = detail::plain_graph(dl);
    const detail::ClassSpace cs(d, 0);
    std::vector<int> terms, cls;
    for (const auto& df : defects) {
        terms.push_back(df.cell);
        cls.push_back(mod(df.cls, d));
    }
    detail::DreyfusWagner dw(g, cs, terms, cls);
    const std::size_t nmask = std::size_t{1} << k;
    const std::size_t all = nmask - 1;

    // best[m]: cheapest split of m into zero-sum groups
    std::vector<int> best(nmask, detail::kInf), pick(nmask, 0);
    best[0] = 0;
    for (std::size_t m = 1; m < nmask; ++m) {
        const std::size_t low = m & (~m + 1);
        for (std::size_t sub = m; sub > 0; sub = (sub - 1) & m) {
            if (!(sub & low) || dw.flow(sub) != 0 || best[m ^ sub] >= detail::kInf) continue;
            const int c = dw.cost(sub, defects[std::countr_zero(sub)].cell) + best[m ^ sub];
            if (c < best[m]) {
                best[m] = c;
                pick[m] = static_cast<int>(sub);
            }
        }
    }
    std::size_t bset = 0;
    int total = best[all];
    if (open) {
        for (std::size_t b = 1; b < nmask; ++b) {
            if (best[all ^ b] >= detail::kInf) continue;
            int bc = detail::kInf;
            for (int x : ext) bc = std::min(bc, dw.cost(b, x));
            if (bc + best[all ^ b] < total) {
                total = bc + best[all ^ b];
                bset = b;
            }
        }
    }
    if (total >= detail::kInf) throw InvalidArgument("partition: no feasible grouping");

    auto unpack = [&](std::size_t m) {
        std::vector<int> v;
        for (int i = 0; i < k; ++i)
            if (m >> i & 1) v.push_back(i);
        return v;
    };
    auto edge_list = [](std::vector<detail::DreyfusWagner::TreeArc> arcs) {
        std::vector<int> e;
        for (const auto& a : arcs) e.push_back(a.primal);
        std::sort(e.begin(), e.end());
        e.erase(std::unique(e.begin(), e.end()), e.end());
        return e;
    };
    for (std::size_t m = all ^ bset; m; m ^= static_cast<std::size_t>(pick[m])) {
        const std::size_t sub = static_cast<std::size_t>(pick[m]);
        const int root = defects[std::countr_zero(sub)].cell;
        res.groups.push_back({unpack(sub), false, dw.cost(sub, root), edge_list(dw.tree(sub, root))});
    }
    if (bset) {
        int bx = ext[0];
        for (int x : ext)
            if (dw.cost(bset, x) < dw.cost(bset, bx)) bx = x;
        res.groups.push_back({unpack(bset), true, dw.cost(bset, bx), edge_list(dw.tree(bset, bx))});
    }
    res.total_cost = total;
    return res;
}

} // namespace nlgame
