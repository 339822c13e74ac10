#pragma once

/**
 * @file classical.hpp
 * @brief Exact classical value p = (|E| - beta_C) / |E| by three independent routes.
 *
 * Questions are drawn uniformly over edges, so the best deterministic strategy
 * loses exactly on its violated edges and beta_C is their minimum count.
 *
 *  - oracle:      transfer-matrix DP over vertex assignments (any labels)
 *  - decoder:     defect matching / Steiner partition, then homology correction
 *  - tree search: minimum over canonical forms relative to spanning trees
 *
 * Decoder and tree search work on shift labelings, where a labeling is a
 * Z_d-valued 1-chain F and beta_C is the least support of any F with the
 * input's cell classes and loop classes.
 */

#include <algorithm>
#include <cstdint>
#include <functional>
#include <numeric>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "nlgame/game.hpp"
#include "nlgame/matching.hpp"
#include "nlgame/rational.hpp"
#include "nlgame/steiner.hpp"

namespace nlgame {

struct ClassicalResult {
    int beta_c = 0;
    Rational p_win;
    std::optional<Labeling> optimal_labeling;
    Assignment optimal_assignment;
    std::string method;
    bool exact = true;   // false only for sampled tree search or a decoder run past its budgets
    long long work = 0;  // states, trees or candidates examined; informational
};

namespace detail {

inline ClassicalResult make_result(const Lattice& lat, int beta, std::string method) {
    ClassicalResult r;
    r.beta_c = beta;
    r.p_win = Rational(lat.num_edges() - beta, lat.num_edges());
    r.method = std::move(method);
    return r;
}

/// Switch every vertex v by shift(-a[v]): the result is identity exactly where `a` satisfies k.
inline Labeling gauge_by_assignment(const Labeling& k, const Assignment& a) {
    const Lattice& lat = k.lattice();
    std::vector<Perm> out;
    out.reserve(lat.num_edges());
    for (const Edge& e : lat.edges()) {
        // sigma_head o pi o sigma_tail^-1
        const Perm sh = Perm::shift(k.d(), -a[e.head]);
        const Perm st_inv = Perm::shift(k.d(), a[e.tail]);
        out.push_back(compose(sh, compose(k[e.id], st_inv)));
    }
    return Labeling(k.lattice_ptr(), k.d(), std::move(out));
}

} // namespace detail

// ---------------------------------------------------------------------------
// Oracle

struct OracleOptions {
    long long max_profile_states = 100000; // d^width
    long long max_work = 4'000'000'000LL;  // rough transition count
};

/**
 * Row-by-row transfer matrix over the narrower lattice direction. The profile
 * holds the last `width` assigned vertices; wrap edges that leave the window
 * close against a fixed first row, which is then enumerated in an outer loop.
 * For shift labelings vertex 0 is pinned to 0, since a global shift of an
 * assignment keeps its violation count.
 */
inline ClassicalResult classical_value_oracle(const Labeling& k, const OracleOptions& opt = {}) {
    const Lattice& lat = k.lattice();
    const int d = k.d();
    const int R = lat.rows(), C = lat.cols();
    const bool transposed = C > R;
    const int W = transposed ? R : C;
    const int V = lat.num_vertices();
    std::vector<int> pos(V), at(V);
    for (int r = 0; r < R; ++r)
        for (int c = 0; c < C; ++c) {
            const int v = lat.vertex(r, c);
            pos[v] = transposed ? c * R + r : r * C + c;
            at[pos[v]] = v;
        }
    long long nstates = 1;
    for (int i = 0; i < W; ++i) {
        nstates *= d;
        if (nstates > opt.max_profile_states)
            throw BudgetExceeded("oracle: profile of width " + std::to_string(W) + " with d=" + std::to_string(d) +
                                 " exceeds " + std::to_string(opt.max_profile_states) + " states");
    }
    const bool gauge = k.all_shifts();

    // edges evaluated when their later endpoint is placed
    struct Check {
        int edge;
        int other;     // scan position of the earlier endpoint
        bool near;     // earlier endpoint inside the window
        bool other_is_tail;
    };
    std::vector<std::vector<Check>> checks(V);
    bool needs_first_row = false;
    for (const Edge& e : lat.edges()) {
        int p = pos[e.tail], q = pos[e.head];
        const bool tail_first = p < q;
        if (!tail_first) std::swap(p, q);
        if (q < W) {
            checks[q].push_back({e.id, p, true, tail_first});
            continue;
        }
        const bool near = q - p <= W;
        if (!near) {
            if (p >= W) throw Error("oracle: internal scan order violated");
            needs_first_row = true;
        }
        checks[q].push_back({e.id, p, near, tail_first});
    }
    std::vector<long long> pw(W + 1, 1);
    for (int i = 1; i <= W; ++i) pw[i] = pw[i - 1] * d;
    const long long outer = needs_first_row ? (gauge ? nstates / d : nstates) : 1;
    if (outer * V * nstates * d > opt.max_work) throw BudgetExceeded("oracle: transfer-matrix work budget exceeded");

    auto violated = [&](const Check& ch, int a_other, int a_here) {
        const Perm& pi = k[ch.edge];
        return ch.other_is_tail ? pi(a_other) != a_here : pi(a_here) != a_other;
    };
    auto digit = [&](long long s, int i) { return static_cast<int>(s / pw[i] % d); };

    constexpr int kInf = std::numeric_limits<int>::max() / 2;
    std::vector<int> cur(nstates), nxt(nstates);
    std::vector<std::vector<uint8_t>> back(V);

    // Runs the DP; first < 0 means "all first rows at once".
    auto run = [&](long long first, bool keep_back) {
        std::fill(cur.begin(), cur.end(), kInf);
        for (long long s = 0; s < nstates; ++s) {
            if (first >= 0 && s != first) continue;
            if (gauge && digit(s, 0) != 0) continue;
            int cost = 0;
            for (int q = 1; q < W; ++q)
                for (const Check& ch : checks[q]) cost += violated(ch, digit(s, ch.other), digit(s, q));
            cur[s] = cost;
        }
        for (int q = W; q < V; ++q) {
            std::fill(nxt.begin(), nxt.end(), kInf);
            if (keep_back) back[q].assign(nstates, 0);
            for (long long s = 0; s < nstates; ++s) {
                if (cur[s] >= kInf) continue;
                for (int a = 0; a < d; ++a) {
                    int cost = cur[s];
                    for (const Check& ch : checks[q]) {
                        const int ao = ch.near ? digit(s, ch.other - (q - W)) : digit(first, ch.other);
                        cost += violated(ch, ao, a);
                    }
                    const long long t = s / d + a * pw[W - 1];
                    if (cost < nxt[t]) {
                        nxt[t] = cost;
                        if (keep_back) back[q][t] = static_cast<uint8_t>(digit(s, 0));
                    }
                }
            }
            std::swap(cur, nxt);
        }
        long long arg = 0;
        for (long long s = 1; s < nstates; ++s)
            if (cur[s] < cur[arg]) arg = s;
        return std::pair<int, long long>{cur[arg], arg};
    };

    int best = kInf;
    long long best_first = -1;
    if (needs_first_row) {
        for (long long f = 0; f < nstates; ++f) {
            if (gauge && digit(f, 0) != 0) continue;
            const int c = run(f, false).first;
            if (c < best) {
                best = c;
                best_first = f;
            }
        }
    }
    const auto [cost, last] = run(best_first, true);
    best = cost;

    // walk the backpointers to recover one optimal assignment
    std::vector<int> val(V, 0);
    long long s = last;
    for (int q = V - 1; q >= W; --q) {
        val[q] = digit(s, W - 1);
        s = (s - val[q] * pw[W - 1]) * d + back[q][s];
    }
    for (int q = 0; q < std::min(W, V); ++q) val[q] = digit(s, q);
    Assignment a(V);
    for (int p = 0; p < V; ++p) a[at[p]] = val[p];
    if (violations(k, a) != best) throw Error("oracle: reconstructed assignment disagrees with DP value");

    ClassicalResult r = detail::make_result(lat, best, "oracle/transfer-matrix");
    r.optimal_assignment = a;
    r.optimal_labeling = detail::gauge_by_assignment(k, a);
    r.work = outer * V * nstates * d;
    return r;
}

/// Plain enumeration of d^(|V|-1) gauge-fixed assignments (d^|V| for non-shift labels).
inline ClassicalResult classical_value_enumerate(const Labeling& k, long long max_assignments = 50'000'000) {
    const Lattice& lat = k.lattice();
    const int d = k.d(), V = lat.num_vertices();
    const bool gauge = k.all_shifts();
    long long total = 1;
    for (int i = gauge ? 1 : 0; i < V; ++i) {
        total *= d;
        if (total > max_assignments) throw BudgetExceeded("enumeration: too many assignments");
    }
    Assignment a(V, 0), best_a;
    int best = std::numeric_limits<int>::max();
    for (long long idx = 0; idx < total; ++idx) {
        long long x = idx;
        for (int v = gauge ? 1 : 0; v < V; ++v) {
            a[v] = static_cast<int>(x % d);
            x /= d;
        }
        const int c = violations(k, a);
        if (c < best) {
            best = c;
            best_a = a;
        }
    }
    ClassicalResult r = detail::make_result(lat, best, "oracle/enumeration");
    r.optimal_assignment = best_a;
    r.optimal_labeling = detail::gauge_by_assignment(k, best_a);
    r.work = total;
    return r;
}

// ---------------------------------------------------------------------------
// Chains: shift labelings as Z_d-valued 1-chains

namespace detail {

struct ChainContext {
    const Lattice& lat;
    int d;
    DualLattice dl;
    std::vector<int> sign_a;            // s(e, dual side a): +1 if that cell walks e forward
    std::vector<Walk> reps;
    std::vector<std::vector<int>> hol;  // hol[e][i]: signed multiplicity of e in rep i

    ChainContext(const Lattice& l, int d_) : lat(l), d(d_), dl(l, true), reps(homology_representatives(l)) {
        sign_a.assign(l.num_edges(), 0);
        for (const Cell& c : l.cells()) {
            for (const Step& st : c.steps) {
                const DualEdge& de = dl.edge(st.edge);
                const int s = st.forward ? 1 : -1;
                sign_a[st.edge] = de.a == c.id ? s : -s;
            }
        }
        hol.assign(l.num_edges(), std::vector<int>(reps.size(), 0));
        for (size_t i = 0; i < reps.size(); ++i)
            for (const Step& st : reps[i]) hol[st.edge][i] += st.forward ? 1 : -1;
    }

    /// s(e, v) for a dual vertex v on either side of e.
    int side_sign(int e, int v) const { return dl.edge(e).a == v ? sign_a[e] : -sign_a[e]; }

    std::vector<int> cell_classes(const std::vector<int>& f) const {
        std::vector<int> out;
        for (const Cell& c : lat.cells()) {
            long long s = 0;
            for (const Step& st : c.steps) s += st.forward ? f[st.edge] : -f[st.edge];
            out.push_back(mod(s, d));
        }
        return out;
    }

    std::vector<int> holonomy(const std::vector<int>& f) const {
        std::vector<int> out(reps.size(), 0);
        for (int e = 0; e < lat.num_edges(); ++e)
            for (size_t i = 0; i < reps.size(); ++i) out[i] = mod(out[i] + 1LL * hol[e][i] * f[e], d);
        return out;
    }

    static int support(const std::vector<int>& f) {
        return static_cast<int>(std::count_if(f.begin(), f.end(), [](int x) { return x != 0; }));
    }

    /// Adds the flow of a dual tree: each edge carries the class sum of the side away from `root`.
    void add_tree_flow(std::vector<int>& f, const std::vector<int>& tree_edges, int root,
                       const std::vector<int>& vertex_class) const {
        const int n = dl.num_vertices();
        std::vector<std::vector<int>> adj(n);
        for (int e : tree_edges) {
            adj[dl.edge(e).a].push_back(e);
            adj[dl.edge(e).b].push_back(e);
        }
        std::vector<int> parent_edge(n, -2), order;
        parent_edge[root] = -1;
        order.push_back(root);
        for (size_t i = 0; i < order.size(); ++i) {
            const int v = order[i];
            for (int e : adj[v]) {
                const int u = dl.across(e, v);
                if (parent_edge[u] != -2) continue;
                parent_edge[u] = e;
                order.push_back(u);
            }
        }
        std::vector<long long> sub(n, 0);
        for (int v = 0; v < n; ++v) sub[v] = vertex_class[v];
        for (auto it = order.rbegin(); it != order.rend(); ++it) {
            const int v = *it;
            const int e = parent_edge[v];
            if (e < 0) continue;
            f[e] = mod(f[e] + side_sign(e, v) * sub[v], d);
            sub[dl.across(e, v)] += sub[v];
        }
    }

    /// Potential phi with k - f = phi(head) - phi(tail) on every edge, if one exists.
    std::optional<Assignment> potential(const std::vector<int>& k, const std::vector<int>& f) const {
        const SpanningTree t = spanning_tree(lat, 0);
        Assignment phi(lat.num_vertices(), 0);
        for (int v : t.order) {
            if (v == t.root) continue;
            const Edge& e = lat.edge(t.parent_edge[v]);
            const int x = k[e.id] - f[e.id];
            phi[v] = e.head == v ? mod(phi[e.tail] + x, d) : mod(phi[e.head] - x, d);
        }
        for (const Edge& e : lat.edges())
            if (mod(phi[e.head] - phi[e.tail] - (k[e.id] - f[e.id]), d) != 0) return std::nullopt;
        return phi;
    }
};

/// Greedy support reduction by switching single vertices and whole row/column bands.
inline int polish_chain(const ChainContext& cx, std::vector<int>& f) {
    const Lattice& lat = cx.lat;
    const int d = cx.d;
    int improvements = 0;
    std::vector<char> in(lat.num_vertices());
    auto try_set = [&]() {
        int best_delta = 0, best_t = 0;
        for (int t = 1; t < d; ++t) {
            int delta = 0;
            for (const Edge& e : lat.edges()) {
                if (in[e.head] == in[e.tail]) continue;
                const int nv = mod(f[e.id] + (in[e.head] ? t : -t), d);
                delta += (nv != 0) - (f[e.id] != 0);
            }
            if (delta < best_delta) {
                best_delta = delta;
                best_t = t;
            }
        }
        if (best_t == 0) return false;
        for (const Edge& e : lat.edges())
            if (in[e.head] != in[e.tail]) f[e.id] = mod(f[e.id] + (in[e.head] ? best_t : -best_t), d);
        return true;
    };
    bool changed = true;
    while (changed) {
        changed = false;
        for (int v = 0; v < lat.num_vertices(); ++v) {
            std::fill(in.begin(), in.end(), 0);
            in[v] = 1;
            if (try_set()) changed = true, ++improvements;
        }
        for (int r0 = 0; r0 < lat.rows(); ++r0)
            for (int r1 = r0; r1 < lat.rows(); ++r1) {
                if (r0 == 0 && r1 == lat.rows() - 1) continue;
                for (int v = 0; v < lat.num_vertices(); ++v) in[v] = lat.row_of(v) >= r0 && lat.row_of(v) <= r1;
                if (try_set()) changed = true, ++improvements;
            }
        for (int c0 = 0; c0 < lat.cols(); ++c0)
            for (int c1 = c0; c1 < lat.cols(); ++c1) {
                if (c0 == 0 && c1 == lat.cols() - 1) continue;
                for (int v = 0; v < lat.num_vertices(); ++v) in[v] = lat.col_of(v) >= c0 && lat.col_of(v) <= c1;
                if (try_set()) changed = true, ++improvements;
            }
    }
    return improvements;
}

/**
 * Least-support chain with the given defects and holonomy. Components are
 * zero-sum defect trees, at most one tree into the boundary, and closed
 * walks; all are searched with their holonomy tracked edge by edge.
 */
inline std::optional<std::vector<int>> homology_search(const ChainContext& cx, const std::vector<Defect>& defects,
                                                       const std::vector<int>& target, int max_defects) {
    const int k = static_cast<int>(defects.size());
    if (k > max_defects) return std::nullopt;
    const int d = cx.d;
    const DualLattice& dl = cx.dl;
    const ClassSpace cs(d, static_cast<int>(cx.reps.size()));
    const int ncls = cs.size;

    SearchGraph g;
    g.n = dl.num_vertices();
    g.adj.assign(g.n, {});
    for (int v = 0; v < g.n; ++v) {
        for (int e : dl.adjacent(v)) {
            const int s = cx.side_sign(e, v);
            std::vector<int> h(cx.reps.size());
            for (size_t i = 0; i < h.size(); ++i) h[i] = s * cx.hol[e][i];
            g.adj[v].push_back({dl.across(e, v), 1, e, s, cs.encode(h)});
        }
    }
    std::vector<int> terms, cls;
    for (const auto& df : defects) {
        terms.push_back(df.cell);
        cls.push_back(mod(df.cls, d));
    }
    DreyfusWagner dw(g, cs, terms, cls);
    const std::size_t nmask = std::size_t{1} << k, all = nmask - 1;

    // closed walks through each vertex with each nonzero flow
    std::vector<int> loop1(ncls, kInf);
    std::vector<std::vector<DreyfusWagner::TreeArc>> loop1_arcs(ncls);
    for (int v = 0; v < g.n; ++v) {
        for (int f = 1; f < d; ++f) {
            DreyfusWagner w(g, cs, {v}, {f});
            for (int eta = 1; eta < ncls; ++eta) {
                const int c = w.cost(1, v, eta);
                if (c < loop1[eta]) {
                    loop1[eta] = c;
                    loop1_arcs[eta] = w.tree(1, v, eta);
                }
            }
        }
    }
    // unions of closed walks
    std::vector<int> loops(ncls, kInf), loop_prev(ncls, -1), loop_piece(ncls, -1);
    loops[0] = 0;
    for (bool changed = true; changed;) {
        changed = false;
        for (int a = 0; a < ncls; ++a) {
            if (loops[a] >= kInf) continue;
            for (int b = 1; b < ncls; ++b) {
                if (loop1[b] >= kInf) continue;
                const int t = cs.add[a][b];
                if (loops[a] + loop1[b] < loops[t]) {
                    loops[t] = loops[a] + loop1[b];
                    loop_prev[t] = a;
                    loop_piece[t] = b;
                    changed = true;
                }
            }
        }
    }

    // zero-sum partitions of each defect subset, by holonomy
    std::vector<std::vector<int>> z(nmask, std::vector<int>(ncls, kInf));
    std::vector<std::vector<std::pair<int, int>>> zpick(nmask, std::vector<std::pair<int, int>>(ncls, {0, 0}));
    z[0][0] = 0;
    std::vector<std::vector<std::pair<int, int>>> group(nmask); // (cost, root) per eta for zero-sum groups
    for (std::size_t m = 1; m < nmask; ++m) {
        if (dw.flow(m) != 0) continue;
        group[m].assign(ncls, {kInf, -1});
        for (int eta = 0; eta < ncls; ++eta) group[m][eta] = dw.best_root(m, eta);
    }
    for (std::size_t m = 1; m < nmask; ++m) {
        const std::size_t low = m & (~m + 1);
        for (std::size_t sub = m; sub > 0; sub = (sub - 1) & m) {
            if (!(sub & low) || dw.flow(sub) != 0) continue;
            const auto& rest = z[m ^ sub];
            for (int e1 = 0; e1 < ncls; ++e1) {
                const int c1 = group[sub][e1].first;
                if (c1 >= kInf) continue;
                for (int e2 = 0; e2 < ncls; ++e2) {
                    if (rest[e2] >= kInf) continue;
                    const int t = cs.add[e1][e2];
                    if (c1 + rest[e2] < z[m][t]) {
                        z[m][t] = c1 + rest[e2];
                        zpick[m][t] = {static_cast<int>(sub), e1};
                    }
                }
            }
        }
    }

    const auto ext = dl.exterior_vertices();
    const int sink = ext.empty() ? -1 : ext.front();
    const int goal = cs.encode(target);
    int best = kInf;
    std::size_t best_b = 0;
    int best_eb = 0, best_ez = 0;
    for (std::size_t b = 0; b < nmask; ++b) {
        if (b && sink < 0) break;
        for (int eb = 0; eb < ncls; ++eb) {
            const int cb = b ? dw.cost(b, sink, eb) : (eb == 0 ? 0 : kInf);
            if (cb >= kInf) continue;
            for (int ez = 0; ez < ncls; ++ez) {
                const int cz = z[all ^ b][ez];
                if (cz >= kInf) continue;
                const int el = cs.add[goal][cs.neg(cs.add[eb][ez])];
                if (loops[el] >= kInf) continue;
                if (cb + cz + loops[el] < best) {
                    best = cb + cz + loops[el];
                    best_b = b;
                    best_eb = eb;
                    best_ez = ez;
                }
            }
        }
    }
    if (best >= kInf) return std::nullopt;

    std::vector<int> f(cx.lat.num_edges(), 0);
    auto add_arcs = [&](const std::vector<DreyfusWagner::TreeArc>& arcs) {
        for (const auto& a : arcs) f[a.primal] = mod(f[a.primal] + a.label, d);
    };
    if (best_b) add_arcs(dw.tree(best_b, sink, best_eb));
    for (std::size_t m = all ^ best_b; m;) {
        const auto [sub, e1] = zpick[m][best_ez];
        add_arcs(dw.tree(static_cast<std::size_t>(sub), group[sub][e1].second, e1));
        best_ez = cs.add[best_ez][cs.neg(e1)];
        m ^= static_cast<std::size_t>(sub);
    }
    int el = cs.add[goal][cs.neg(cs.encode(cx.holonomy(f)))];
    while (el != 0) {
        add_arcs(loop1_arcs[loop_piece[el]]);
        el = loop_prev[el];
    }
    return f;
}

} // namespace detail

// ---------------------------------------------------------------------------
// Decoder

struct DecoderOptions {
    int max_defects_partition = kMaxPartitionDefects; // d >= 3 grouping and holonomy search
    bool polish = true;                              // local switch search after holonomy correction
};

/**
 * Minimal error chain for a shift labeling. d = 2 pairs defects by blossom
 * matching (each defect may instead take a path into the boundary); d >= 3
 * groups them into zero-sum Steiner trees. If the resulting chain's loop
 * classes differ from the input's, a holonomy-tracking search over trees and
 * closed walks replaces it.
 */
inline ClassicalResult classical_value_decoder(const Labeling& k, const DecoderOptions& opt = {}) {
    if (!k.all_shifts()) throw InvalidArgument("decoder: labels must be cyclic shifts; use normalize_family first");
    const Lattice& lat = k.lattice();
    const int d = k.d();
    const detail::ChainContext cx(lat, d);
    const std::vector<int> ks = k.shifts();
    const std::vector<int> cells = cx.cell_classes(ks);
    const std::vector<int> target = cx.holonomy(ks);
    std::vector<Defect> defects;
    long long sum = 0;
    for (int c = 0; c < lat.num_cells(); ++c)
        if (cells[c] != 0) {
            defects.push_back({c, cells[c]});
            sum += cells[c];
        }
    const auto ext = cx.dl.exterior_vertices();
    const bool open = !ext.empty();
    if (!open && mod(sum, d) != 0) throw InvalidArgument("decoder: defect classes do not sum to 0 on a closed surface");

    std::vector<int> f(lat.num_edges(), 0);
    const int n = static_cast<int>(defects.size());
    std::vector<int> vclass(cx.dl.num_vertices(), 0);
    for (const auto& df : defects) vclass[df.cell] = df.cls;
    std::string method;
    long long work = 0;
    if (d == 2) {
        method = "decoder/blossom";
        WeightedGraph g;
        g.num_vertices = open ? 2 * n : n;
        std::vector<std::vector<int>> dist;
        for (const auto& df : defects) dist.push_back(dual_distances(cx.dl, df.cell));
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) g.add_edge(i, j, dist[i][defects[j].cell]);
        if (open) {
            for (int i = 0; i < n; ++i) g.add_edge(i, n + i, dist[i][ext.front()]);
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j) g.add_edge(n + i, n + j, 0);
        }
        const Matching m = min_weight_perfect_matching(g);
        work = static_cast<long long>(g.edges.size());
        for (int i = 0; i < n; ++i) {
            const int j = m.mate[i];
            if (j < i && j < n) continue;
            const int to = j < n ? defects[j].cell : ext.front();
            for (int e : dual_shortest_path(cx.dl, defects[i].cell, to).primal_edges) f[e] ^= 1;
        }
    } else {
        method = "decoder/steiner-partition";
        const PartitionResult pr = partition_defects(cx.dl, defects, d, opt.max_defects_partition);
        for (const auto& grp : pr.groups) {
            const int root = grp.boundary ? ext.front() : defects[grp.members.front()].cell;
            std::vector<int> gclass(cx.dl.num_vertices(), 0);
            for (int i : grp.members) gclass[defects[i].cell] = defects[i].cls;
            cx.add_tree_flow(f, grp.edges, root, gclass);
        }
        work = 1LL << n;
    }
    if (cx.cell_classes(f) != cells) throw Error("decoder: matched chain does not reproduce the defects");

    bool exact = true;
    if (cx.holonomy(f) != target) {
        method += "+holonomy";
        auto g = detail::homology_search(cx, defects, target, opt.max_defects_partition);
        if (!g) {
            // over budget: fix the loop deficit with straight dual rings, then polish
            exact = false;
            const auto have = cx.holonomy(f);
            for (size_t i = 0; i < cx.reps.size(); ++i) {
                const int miss = mod(target[i] - have[i], d);
                const bool row_ring = lat.wraps_x() && i == 0;
                if (row_ring)
                    for (int r = 0; r < lat.rows(); ++r) {
                        const int e = *lat.edge_id(r, 0, Orientation::Right);
                        f[e] = mod(f[e] + miss, d);
                    }
                else
                    for (int c = 0; c < lat.cols(); ++c) {
                        const int e = *lat.edge_id(0, c, Orientation::Down);
                        f[e] = mod(f[e] + miss, d);
                    }
            }
        } else {
            f = *g;
            // trees and walks may overlap for d >= 3; switches can only shrink the support
            exact = d == 2;
        }
        if (opt.polish) detail::polish_chain(cx, f);
    }
    if (cx.cell_classes(f) != cells || cx.holonomy(f) != target)
        throw Error("decoder: corrected chain is not equivalent to the input");
    const auto phi = cx.potential(ks, f);
    if (!phi) throw Error("decoder: no switch takes the input to the corrected chain");

    ClassicalResult r = detail::make_result(lat, detail::ChainContext::support(f), method);
    r.optimal_labeling = Labeling::from_shifts(k.lattice_ptr(), d, f);
    r.optimal_assignment = *phi;
    r.exact = exact;
    r.work = work;
    return r;
}

// ---------------------------------------------------------------------------
// Spanning-tree search

struct TreeSearchOptions {
    long long max_trees = 2'000'000;
    bool sample_when_over_budget = false; // random trees instead of an error; result is an upper bound
    long long samples = 20000;
    std::uint64_t seed = 1;
};

namespace detail {

/// Support of the canonical form relative to a spanning tree, via potentials.
inline int canonical_support(const Lattice& lat, const std::vector<int>& ks, int d, const std::vector<int>& tree_edges) {
    const int V = lat.num_vertices();
    std::vector<std::vector<int>> adj(V);
    for (int e : tree_edges) {
        adj[lat.edge(e).tail].push_back(e);
        adj[lat.edge(e).head].push_back(e);
    }
    std::vector<int> phi(V, 0);
    std::vector<char> seen(V, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    while (!stack.empty()) {
        const int v = stack.back();
        stack.pop_back();
        for (int e : adj[v]) {
            const Edge& ed = lat.edge(e);
            const int u = ed.tail == v ? ed.head : ed.tail;
            if (seen[u]) continue;
            seen[u] = 1;
            phi[u] = ed.tail == v ? mod(phi[v] + ks[e], d) : mod(phi[v] - ks[e], d);
            stack.push_back(u);
        }
    }
    int n = 0;
    for (const Edge& e : lat.edges()) n += mod(ks[e.id] - (phi[e.head] - phi[e.tail]), d) != 0;
    return n;
}

struct UnionFind {
    std::vector<int> p;
    explicit UnionFind(int n) : p(n) { std::iota(p.begin(), p.end(), 0); }
    int find(int x) {
        while (p[x] != x) x = p[x] = p[p[x]];
        return x;
    }
    bool unite(int a, int b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        p[a] = b;
        return true;
    }
};

/// Calls visit(tree_edges) for every spanning tree; stops and returns false once `limit` trees were seen.
inline bool for_each_spanning_tree(const Lattice& lat, long long limit, const std::function<void(const std::vector<int>&)>& visit) {
    const int V = lat.num_vertices(), E = lat.num_edges();
    std::vector<int> chosen;
    std::vector<char> excluded(E, 0);
    long long count = 0;
    auto connected_without_excluded = [&]() {
        UnionFind uf(V);
        int comps = V;
        for (int e = 0; e < E; ++e)
            if (!excluded[e] && uf.unite(lat.edge(e).tail, lat.edge(e).head)) --comps;
        return comps == 1;
    };
    std::function<bool(int)> rec = [&](int e) -> bool {
        if (static_cast<int>(chosen.size()) == V - 1) {
            if (++count > limit) return false;
            visit(chosen);
            return true;
        }
        if (e == E) return true;
        // include e if it joins two components of the chosen forest
        UnionFind uf(V);
        for (int c : chosen) uf.unite(lat.edge(c).tail, lat.edge(c).head);
        if (uf.find(lat.edge(e).tail) != uf.find(lat.edge(e).head)) {
            chosen.push_back(e);
            if (!rec(e + 1)) return false;
            chosen.pop_back();
        }
        excluded[e] = 1;
        if (connected_without_excluded() && !rec(e + 1)) {
            excluded[e] = 0;
            return false;
        }
        excluded[e] = 0;
        return true;
    };
    if (!connected_without_excluded()) return true;
    return rec(0);
}

/// Uniform random spanning tree (Wilson's algorithm).
inline std::vector<int> random_spanning_tree(const Lattice& lat, std::mt19937_64& rng) {
    const int V = lat.num_vertices();
    std::vector<char> in(V, 0);
    std::vector<int> next_edge(V, -1), tree;
    in[0] = 1;
    for (int s = 0; s < V; ++s) {
        int v = s;
        while (!in[v]) {
            const auto& inc = lat.incident(v);
            const int e = inc[std::uniform_int_distribution<size_t>(0, inc.size() - 1)(rng)];
            next_edge[v] = e;
            v = lat.other_end(e, v);
        }
        v = s;
        while (!in[v]) {
            in[v] = 1;
            tree.push_back(next_edge[v]);
            v = lat.other_end(next_edge[v], v);
        }
    }
    std::sort(tree.begin(), tree.end());
    return tree;
}

} // namespace detail

/**
 * Minimum over spanning trees T of the canonical form's non-identity count.
 * An optimal labeling's identity edges contain a spanning tree (else a switch
 * across a cut would shrink it), so full enumeration is exact.
 */
inline ClassicalResult classical_value_tree_search(const Labeling& k, const TreeSearchOptions& opt = {}) {
    if (!k.all_shifts()) throw InvalidArgument("tree search: labels must be cyclic shifts");
    const Lattice& lat = k.lattice();
    const int d = k.d();
    const std::vector<int> ks = k.shifts();
    int best = std::numeric_limits<int>::max();
    std::vector<int> best_tree;
    long long seen = 0;
    auto visit = [&](const std::vector<int>& t) {
        ++seen;
        const int c = detail::canonical_support(lat, ks, d, t);
        if (c < best) {
            best = c;
            best_tree = t;
        }
    };
    bool exact = detail::for_each_spanning_tree(lat, opt.max_trees, visit);
    if (!exact) {
        if (!opt.sample_when_over_budget)
            throw BudgetExceeded("tree search: more than " + std::to_string(opt.max_trees) + " spanning trees");
        std::mt19937_64 rng(opt.seed);
        for (long long i = 0; i < opt.samples; ++i) visit(detail::random_spanning_tree(lat, rng));
    }
    const Labeling canon = canonicalize(k, make_tree(lat, best_tree, 0));
    ClassicalResult r = detail::make_result(lat, best, exact ? "tree-search/enumeration" : "tree-search/sampled");
    r.exact = exact;
    r.work = seen;
    r.optimal_labeling = canon;
    const detail::ChainContext cx(lat, d);
    r.optimal_assignment = *cx.potential(ks, canon.shifts());
    return r;
}

/**
 * Checks a claimed optimum: (a) the labeling is equivalent to k, (b) it has
 * exactly beta_C non-identity edges, (c) the reported assignment violates k
 * on exactly those edges. Optimality itself is what route agreement tests.
 */
inline bool optimal_labeling_certificate(const Labeling& k, const ClassicalResult& r) {
    if (!r.optimal_labeling || !k.all_shifts() || !r.optimal_labeling->all_shifts()) return false;
    const Labeling& ko = *r.optimal_labeling;
    if (!ko.same_lattice(k) || ko.d() != k.d()) return false;
    if (!is_equivalent(ko, k).equivalent) return false;
    if (ko.non_identity_count() != r.beta_c) return false;
    const Assignment& a = r.optimal_assignment;
    if (static_cast<int>(a.size()) != k.lattice().num_vertices()) return false;
    for (const Edge& e : k.lattice().edges()) {
        const bool violated = k[e.id](a[e.tail]) != a[e.head];
        if (violated != !ko[e.id].is_identity()) return false;
    }
    return true;
}

} // namespace nlgame
