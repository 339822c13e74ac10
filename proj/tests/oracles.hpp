#pragma once

// Brute-force references shared by the unit tests and the acceptance run.

#include <functional>
#include <limits>
#include <vector>

#include "nlgame/combinatorics.hpp"
#include "nlgame/game.hpp"

namespace nlgame::testing {

inline int edge(const Lattice& lat, int r, int c, Orientation o) { return *lat.edge_id(r, c, o); }

/// Counterclockwise boundary of the cell block [r0, r1] x [c0, c1] on a plane.
inline Walk rectangle(const Lattice& lat, int r0, int c0, int r1, int c1) {
    Walk w;
    for (int r = r0; r <= r1; ++r) w.push_back({edge(lat, r, c0, Orientation::Down), true});
    for (int c = c0; c <= c1; ++c) w.push_back({edge(lat, r1 + 1, c, Orientation::Right), true});
    for (int r = r1; r >= r0; --r) w.push_back({edge(lat, r, c1 + 1, Orientation::Down), false});
    for (int c = c1; c >= c0; --c) w.push_back({edge(lat, r0, c, Orientation::Right), false});
    return w;
}

/// Minimum perfect matching weight by trying every pairing of the lowest free vertex.
inline long long brute_matching(const WeightedGraph& g) {
    const int n = g.num_vertices;
    std::vector<std::vector<long long>> w(n, std::vector<long long>(n, -1));
    for (const auto& e : g.edges) {
        auto& x = w[e.u][e.v];
        if (x < 0 || e.weight < x) x = w[e.v][e.u] = e.weight;
    }
    std::vector<char> used(n, 0);
    const long long inf = std::numeric_limits<long long>::max();
    std::function<long long()> rec = [&]() -> long long {
        int i = 0;
        while (i < n && used[i]) ++i;
        if (i == n) return 0;
        used[i] = 1;
        long long best = inf;
        for (int j = i + 1; j < n; ++j) {
            if (used[j] || w[i][j] < 0) continue;
            used[j] = 1;
            const long long r = rec();
            if (r != inf) best = std::min(best, r + w[i][j]);
            used[j] = 0;
        }
        used[i] = 0;
        return best;
    };
    return rec();
}

/// Smallest connected vertex set containing the terminals, minus one; exteriors count as one vertex.
inline int brute_steiner(const DualLattice& dl, std::vector<int> terms) {
    const int ext0 = dl.exterior_vertices().empty() ? -1 : dl.exterior_vertices().front();
    auto canon = [&](int v) { return dl.is_exterior(v) ? ext0 : v; };
    const int n = dl.num_cells() + (ext0 >= 0 ? 1 : 0);
    for (int& t : terms) t = canon(t);
    std::vector<std::vector<int>> adj(n);
    for (const auto& de : dl.edges()) {
        const int a = canon(de.a), b = canon(de.b);
        if (a != b) {
            adj[a].push_back(b);
            adj[b].push_back(a);
        }
    }
    int best = std::numeric_limits<int>::max();
    for (int mask = 0; mask < (1 << n); ++mask) {
        bool ok = true;
        for (int t : terms) ok = ok && (mask >> t & 1);
        if (!ok) continue;
        const int size = __builtin_popcount(mask);
        if (size - 1 >= best) continue;
        const int start = terms.front();
        int seen = 1 << start, frontier = seen;
        while (frontier) {
            int next = 0;
            for (int v = 0; v < n; ++v)
                if (frontier >> v & 1)
                    for (int u : adj[v])
                        if ((mask >> u & 1) && !(seen >> u & 1)) next |= 1 << u;
            seen |= next;
            frontier = next;
        }
        if (seen == mask) best = size - 1;
    }
    return best;
}


} // namespace nlgame::testing
