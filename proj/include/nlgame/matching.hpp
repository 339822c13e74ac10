#pragma once

/**
 * @file matching.hpp
 * @brief Exact minimum-weight perfect matching on general graphs.
 *
 * Edmonds' blossom algorithm with dual variables, O(n^3), in the primal-dual
 * formulation for maximum-weight matching. A minimum-weight perfect matching
 * is obtained by maximizing sum (W - w) over maximum-cardinality matchings.
 * All arithmetic is on 64-bit integers; weights are doubled internally so
 * every dual update stays integral.
 */

#include <algorithm>
#include <cstdint>
#include <limits>
#include <vector>

#include "nlgame/error.hpp"

namespace nlgame {

struct WeightedEdge {
    int u;
    int v;
    long long weight;
};

struct WeightedGraph {
    int num_vertices = 0;
    std::vector<WeightedEdge> edges;

    void add_edge(int u, int v, long long w) {
        if (u == v) throw InvalidArgument("weighted graph: self-loop");
        if (w < 0) throw InvalidArgument("weighted graph: negative weight");
        edges.push_back({u, v, w});
    }
};

struct Matching {
    std::vector<int> edges;  // indices into WeightedGraph::edges, ascending
    std::vector<int> mate;   // per vertex, -1 when uncovered
    long long weight = 0;
    bool perfect = false;
};

namespace detail {

/// Maximum-weight matching; with max_cardinality it maximizes weight among maximum-cardinality matchings.
class BlossomMatcher {
public:
    BlossomMatcher(int n, const std::vector<WeightedEdge>& edges, bool max_cardinality)
        : nvertex_(n), max_cardinality_(max_cardinality) {
        for (const auto& e : edges) edges_.push_back({e.u, e.v, 2 * e.weight});
        nedge_ = static_cast<int>(edges_.size());
    }

    /// mate[v] = matched vertex or -1
    std::vector<int> run() {
        const int n = nvertex_;
        long long maxweight = 0;
        for (const auto& e : edges_) maxweight = std::max(maxweight, e.w);
        endpoint_.resize(2 * nedge_);
        for (int p = 0; p < 2 * nedge_; ++p) endpoint_[p] = p % 2 == 0 ? edges_[p / 2].i : edges_[p / 2].j;
        neighbend_.assign(n, {});
        for (int k = 0; k < nedge_; ++k) {
            neighbend_[edges_[k].i].push_back(2 * k + 1);
            neighbend_[edges_[k].j].push_back(2 * k);
        }
        mate_.assign(n, -1);
        label_.assign(2 * n, 0);
        labelend_.assign(2 * n, -1);
        inblossom_.resize(n);
        for (int v = 0; v < n; ++v) inblossom_[v] = v;
        blossomparent_.assign(2 * n, -1);
        blossomchilds_.assign(2 * n, {});
        blossombase_.assign(2 * n, -1);
        for (int v = 0; v < n; ++v) blossombase_[v] = v;
        blossomendps_.assign(2 * n, {});
        bestedge_.assign(2 * n, -1);
        blossombestedges_.assign(2 * n, {});
        has_bestedges_.assign(2 * n, 0);
        unused_.clear();
        for (int b = 2 * n - 1; b >= n; --b) unused_.push_back(b);
        dualvar_.assign(2 * n, 0);
        for (int v = 0; v < n; ++v) dualvar_[v] = maxweight;
        allowedge_.assign(nedge_, 0);

        for (int stage = 0; stage < n; ++stage) {
            std::fill(label_.begin(), label_.end(), 0);
            std::fill(bestedge_.begin(), bestedge_.end(), -1);
            for (int b = n; b < 2 * n; ++b) {
                blossombestedges_[b].clear();
                has_bestedges_[b] = 0;
            }
            std::fill(allowedge_.begin(), allowedge_.end(), 0);
            queue_.clear();
            for (int v = 0; v < n; ++v)
                if (mate_[v] == -1 && label_[inblossom_[v]] == 0) assign_label(v, 1, -1);

            bool augmented = false;
            while (true) {
                while (!queue_.empty() && !augmented) {
                    const int v = queue_.back();
                    queue_.pop_back();
                    for (int p : neighbend_[v]) {
                        const int k = p / 2;
                        const int w = endpoint_[p];
                        if (inblossom_[v] == inblossom_[w]) continue;
                        long long kslack = 0;
                        if (!allowedge_[k]) {
                            kslack = slack(k);
                            if (kslack <= 0) allowedge_[k] = 1;
                        }
                        if (allowedge_[k]) {
                            if (label_[inblossom_[w]] == 0) {
                                assign_label(w, 2, p ^ 1);
                            } else if (label_[inblossom_[w]] == 1) {
                                const int base = scan_blossom(v, w);
                                if (base >= 0) {
                                    add_blossom(base, k);
                                } else {
                                    augment_matching(k);
                                    augmented = true;
                                    break;
                                }
                            } else if (label_[w] == 0) {
                                label_[w] = 2;
                                labelend_[w] = p ^ 1;
                            }
                        } else if (label_[inblossom_[w]] == 1) {
                            const int b = inblossom_[v];
                            if (bestedge_[b] == -1 || kslack < slack(bestedge_[b])) bestedge_[b] = k;
                        } else if (label_[w] == 0) {
                            if (bestedge_[w] == -1 || kslack < slack(bestedge_[w])) bestedge_[w] = k;
                        }
                    }
                }
                if (augmented) break;

                int deltatype = -1;
                long long delta = 0;
                int deltaedge = -1, deltablossom = -1;
                if (!max_cardinality_) {
                    deltatype = 1;
                    delta = *std::min_element(dualvar_.begin(), dualvar_.begin() + n);
                }
                for (int v = 0; v < n; ++v) {
                    if (label_[inblossom_[v]] == 0 && bestedge_[v] != -1) {
                        const long long dd = slack(bestedge_[v]);
                        if (deltatype == -1 || dd < delta) {
                            delta = dd;
                            deltatype = 2;
                            deltaedge = bestedge_[v];
                        }
                    }
                }
                for (int b = 0; b < 2 * n; ++b) {
                    if (blossomparent_[b] == -1 && label_[b] == 1 && bestedge_[b] != -1) {
                        const long long dd = slack(bestedge_[b]) / 2;
                        if (deltatype == -1 || dd < delta) {
                            delta = dd;
                            deltatype = 3;
                            deltaedge = bestedge_[b];
                        }
                    }
                }
                for (int b = n; b < 2 * n; ++b) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1 && label_[b] == 2 &&
                        (deltatype == -1 || dualvar_[b] < delta)) {
                        delta = dualvar_[b];
                        deltatype = 4;
                        deltablossom = b;
                    }
                }
                if (deltatype == -1) {
                    deltatype = 1;
                    delta = std::max<long long>(0, *std::min_element(dualvar_.begin(), dualvar_.begin() + n));
                }
                for (int v = 0; v < n; ++v) {
                    if (label_[inblossom_[v]] == 1)
                        dualvar_[v] -= delta;
                    else if (label_[inblossom_[v]] == 2)
                        dualvar_[v] += delta;
                }
                for (int b = n; b < 2 * n; ++b) {
                    if (blossombase_[b] >= 0 && blossomparent_[b] == -1) {
                        if (label_[b] == 1)
                            dualvar_[b] += delta;
                        else if (label_[b] == 2)
                            dualvar_[b] -= delta;
                    }
                }
                if (deltatype == 1) {
                    break;
                } else if (deltatype == 2) {
                    allowedge_[deltaedge] = 1;
                    int i = edges_[deltaedge].i, j = edges_[deltaedge].j;
                    if (label_[inblossom_[i]] == 0) std::swap(i, j);
                    queue_.push_back(i);
                } else if (deltatype == 3) {
                    allowedge_[deltaedge] = 1;
                    queue_.push_back(edges_[deltaedge].i);
                } else {
                    expand_blossom(deltablossom, false);
                }
            }
            if (!augmented) break;
            for (int b = n; b < 2 * n; ++b) {
                if (blossomparent_[b] == -1 && blossombase_[b] >= 0 && label_[b] == 1 && dualvar_[b] == 0)
                    expand_blossom(b, true);
            }
        }
        std::vector<int> out(n, -1);
        for (int v = 0; v < n; ++v)
            if (mate_[v] >= 0) out[v] = endpoint_[mate_[v]];
        return out;
    }

private:
    struct E {
        int i;
        int j;
        long long w;
    };

    long long slack(int k) const { return dualvar_[edges_[k].i] + dualvar_[edges_[k].j] - 2 * edges_[k].w; }

    void leaves(int b, std::vector<int>& out) const {
        if (b < nvertex_) {
            out.push_back(b);
            return;
        }
        for (int t : blossomchilds_[b]) leaves(t, out);
    }

    std::vector<int> leaves(int b) const {
        std::vector<int> out;
        leaves(b, out);
        return out;
    }

    void assign_label(int w, int t, int p) {
        const int b = inblossom_[w];
        label_[w] = label_[b] = t;
        labelend_[w] = labelend_[b] = p;
        bestedge_[w] = bestedge_[b] = -1;
        if (t == 1) {
            for (int v : leaves(b)) queue_.push_back(v);
        } else if (t == 2) {
            const int base = blossombase_[b];
            assign_label(endpoint_[mate_[base]], 1, mate_[base] ^ 1);
        }
    }

    int scan_blossom(int v, int w) {
        std::vector<int> path;
        int base = -1;
        while (v != -1 || w != -1) {
            int b = inblossom_[v];
            if (label_[b] & 4) {
                base = blossombase_[b];
                break;
            }
            path.push_back(b);
            label_[b] = 5;
            if (labelend_[b] == -1) {
                v = -1;
            } else {
                v = endpoint_[labelend_[b]];
                b = inblossom_[v];
                v = endpoint_[labelend_[b]];
            }
            if (w != -1) std::swap(v, w);
        }
        for (int b : path) label_[b] = 1;
        return base;
    }

    void add_blossom(int base, int k) {
        int v = edges_[k].i, w = edges_[k].j;
        const int bb = inblossom_[base];
        int bv = inblossom_[v], bw = inblossom_[w];
        const int b = unused_.back();
        unused_.pop_back();
        blossombase_[b] = base;
        blossomparent_[b] = -1;
        blossomparent_[bb] = b;
        std::vector<int>& path = blossomchilds_[b];
        std::vector<int>& endps = blossomendps_[b];
        path.clear();
        endps.clear();
        while (bv != bb) {
            blossomparent_[bv] = b;
            path.push_back(bv);
            endps.push_back(labelend_[bv]);
            v = endpoint_[labelend_[bv]];
            bv = inblossom_[v];
        }
        path.push_back(bb);
        std::reverse(path.begin(), path.end());
        std::reverse(endps.begin(), endps.end());
        endps.push_back(2 * k);
        while (bw != bb) {
            blossomparent_[bw] = b;
            path.push_back(bw);
            endps.push_back(labelend_[bw] ^ 1);
            w = endpoint_[labelend_[bw]];
            bw = inblossom_[w];
        }
        label_[b] = 1;
        labelend_[b] = labelend_[bb];
        dualvar_[b] = 0;
        for (int lv : leaves(b)) {
            if (label_[inblossom_[lv]] == 2) queue_.push_back(lv);
            inblossom_[lv] = b;
        }
        std::vector<int> bestedgeto(2 * nvertex_, -1);
        for (int sub : path) {
            std::vector<std::vector<int>> nblists;
            if (!has_bestedges_[sub]) {
                for (int lv : leaves(sub)) {
                    std::vector<int> l;
                    for (int p : neighbend_[lv]) l.push_back(p / 2);
                    nblists.push_back(std::move(l));
                }
            } else {
                nblists.push_back(blossombestedges_[sub]);
            }
            for (const auto& nbl : nblists) {
                for (int kk : nbl) {
                    int i = edges_[kk].i, j = edges_[kk].j;
                    if (inblossom_[j] == b) std::swap(i, j);
                    const int bj = inblossom_[j];
                    if (bj != b && label_[bj] == 1 && (bestedgeto[bj] == -1 || slack(kk) < slack(bestedgeto[bj])))
                        bestedgeto[bj] = kk;
                }
            }
            blossombestedges_[sub].clear();
            has_bestedges_[sub] = 0;
            bestedge_[sub] = -1;
        }
        blossombestedges_[b].clear();
        for (int kk : bestedgeto)
            if (kk != -1) blossombestedges_[b].push_back(kk);
        has_bestedges_[b] = 1;
        bestedge_[b] = -1;
        for (int kk : blossombestedges_[b])
            if (bestedge_[b] == -1 || slack(kk) < slack(bestedge_[b])) bestedge_[b] = kk;
    }

    void expand_blossom(int b, bool endstage) {
        for (int s : blossomchilds_[b]) {
            blossomparent_[s] = -1;
            if (s < nvertex_) {
                inblossom_[s] = s;
            } else if (endstage && dualvar_[s] == 0) {
                expand_blossom(s, endstage);
            } else {
                for (int v : leaves(s)) inblossom_[v] = s;
            }
        }
        if (!endstage && label_[b] == 2) {
            const int entrychild = inblossom_[endpoint_[labelend_[b] ^ 1]];
            const auto& childs = blossomchilds_[b];
            const int len = static_cast<int>(childs.size());
            int j = static_cast<int>(std::find(childs.begin(), childs.end(), entrychild) - childs.begin());
            int jstep, endptrick;
            if (j & 1) {
                j -= len;
                jstep = 1;
                endptrick = 0;
            } else {
                jstep = -1;
                endptrick = 1;
            }
            auto at = [&](const std::vector<int>& v, int idx) { return v[((idx % len) + len) % len]; };
            int p = labelend_[b];
            while (j != 0) {
                label_[endpoint_[p ^ 1]] = 0;
                label_[endpoint_[at(blossomendps_[b], j - endptrick) ^ endptrick ^ 1]] = 0;
                assign_label(endpoint_[p ^ 1], 2, p);
                allowedge_[at(blossomendps_[b], j - endptrick) / 2] = 1;
                j += jstep;
                p = at(blossomendps_[b], j - endptrick) ^ endptrick;
                allowedge_[p / 2] = 1;
                j += jstep;
            }
            int bv = at(childs, j);
            label_[endpoint_[p ^ 1]] = label_[bv] = 2;
            labelend_[endpoint_[p ^ 1]] = labelend_[bv] = p;
            bestedge_[bv] = -1;
            j += jstep;
            while (at(childs, j) != entrychild) {
                bv = at(childs, j);
                if (label_[bv] == 1) {
                    j += jstep;
                    continue;
                }
                int found = -1;
                for (int v : leaves(bv)) {
                    if (label_[v] != 0) {
                        found = v;
                        break;
                    }
                }
                if (found >= 0) {
                    label_[found] = 0;
                    label_[endpoint_[mate_[blossombase_[bv]]]] = 0;
                    assign_label(found, 2, labelend_[found]);
                }
                j += jstep;
            }
        }
        label_[b] = labelend_[b] = -1;
        blossomchilds_[b].clear();
        blossomendps_[b].clear();
        blossombase_[b] = -1;
        blossombestedges_[b].clear();
        has_bestedges_[b] = 0;
        bestedge_[b] = -1;
        unused_.push_back(b);
    }

    void augment_blossom(int b, int v) {
        int t = v;
        while (blossomparent_[t] != b) t = blossomparent_[t];
        if (t >= nvertex_) augment_blossom(t, v);
        auto& childs = blossomchilds_[b];
        auto& endps = blossomendps_[b];
        const int len = static_cast<int>(childs.size());
        const int i = static_cast<int>(std::find(childs.begin(), childs.end(), t) - childs.begin());
        int j = i;
        int jstep, endptrick;
        if (i & 1) {
            j -= len;
            jstep = 1;
            endptrick = 0;
        } else {
            jstep = -1;
            endptrick = 1;
        }
        auto at = [&](const std::vector<int>& vec, int idx) { return vec[((idx % len) + len) % len]; };
        while (j != 0) {
            j += jstep;
            t = at(childs, j);
            const int p = at(endps, j - endptrick) ^ endptrick;
            if (t >= nvertex_) augment_blossom(t, endpoint_[p]);
            j += jstep;
            t = at(childs, j);
            if (t >= nvertex_) augment_blossom(t, endpoint_[p ^ 1]);
            mate_[endpoint_[p]] = p ^ 1;
            mate_[endpoint_[p ^ 1]] = p;
        }
        std::rotate(childs.begin(), childs.begin() + i, childs.end());
        std::rotate(endps.begin(), endps.begin() + i, endps.end());
        blossombase_[b] = blossombase_[childs[0]];
    }

    void augment_matching(int k) {
        const int v = edges_[k].i, w = edges_[k].j;
        const std::pair<int, int> starts[2] = {{v, 2 * k + 1}, {w, 2 * k}};
        for (auto [s, p] : starts) {
            while (true) {
                const int bs = inblossom_[s];
                if (bs >= nvertex_) augment_blossom(bs, s);
                mate_[s] = p;
                if (labelend_[bs] == -1) break;
                const int t = endpoint_[labelend_[bs]];
                const int bt = inblossom_[t];
                s = endpoint_[labelend_[bt]];
                const int j = endpoint_[labelend_[bt] ^ 1];
                if (bt >= nvertex_) augment_blossom(bt, j);
                mate_[j] = labelend_[bt];
                p = labelend_[bt] ^ 1;
            }
        }
    }

    int nvertex_;
    int nedge_ = 0;
    bool max_cardinality_;
    std::vector<E> edges_;
    std::vector<int> endpoint_;
    std::vector<std::vector<int>> neighbend_;
    std::vector<int> mate_, label_, labelend_, inblossom_, blossomparent_, blossombase_, bestedge_, unused_;
    std::vector<std::vector<int>> blossomchilds_, blossomendps_, blossombestedges_;
    std::vector<char> has_bestedges_;
    std::vector<long long> dualvar_;
    std::vector<char> allowedge_;
    std::vector<int> queue_;
};

} // namespace detail

/**
 * Exact minimum-weight perfect matching. Deterministic for a given edge order;
 * throws when the graph has no perfect matching.
 */
inline Matching min_weight_perfect_matching(const WeightedGraph& g) {
    Matching m;
    m.mate.assign(g.num_vertices, -1);
    if (g.num_vertices == 0) {
        m.perfect = true;
        return m;
    }
    if (g.num_vertices % 2 != 0) throw InvalidArgument("perfect matching: odd vertex count");
    long long wmax = 0;
    for (const auto& e : g.edges) wmax = std::max(wmax, e.weight);
    std::vector<WeightedEdge> flipped;
    flipped.reserve(g.edges.size());
    for (const auto& e : g.edges) flipped.push_back({e.u, e.v, wmax + 1 - e.weight});
    detail::BlossomMatcher bm(g.num_vertices, flipped, true);
    const std::vector<int> mate = bm.run();
    for (int v = 0; v < g.num_vertices; ++v)
        if (mate[v] < 0) throw InvalidArgument("perfect matching: graph has no perfect matching");
    // pick, for each matched pair, the lightest parallel edge (lowest index on ties)
    std::vector<int> chosen(g.num_vertices, -1);
    for (int k = 0; k < static_cast<int>(g.edges.size()); ++k) {
        const auto& e = g.edges[k];
        if (mate[e.u] != e.v) continue;
        int& c = chosen[std::min(e.u, e.v)];
        if (c < 0 || e.weight < g.edges[c].weight) c = k;
    }
    for (int v = 0; v < g.num_vertices; ++v) {
        if (chosen[v] >= 0) {
            m.edges.push_back(chosen[v]);
            m.weight += g.edges[chosen[v]].weight;
        }
    }
    std::sort(m.edges.begin(), m.edges.end());
    m.mate = mate;
    m.perfect = true;
    return m;
}

} // namespace nlgame
