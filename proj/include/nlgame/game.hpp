#pragma once

/**
 * @file game.hpp
 * @brief Permutation labelings of a lattice: switching, cell and cycle
 *        classes, consistency, canonical forms and equivalence.
 *
 * An edge u -> v labeled pi encodes the constraint k(v) = pi(k(u)). Walking an
 * edge against its direction applies pi^-1. The class of a closed walk is the
 * composition of the labels met along the way, first step applied first.
 */

#include <cstdint>
#include <deque>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <unordered_set>
#include <vector>

#include "nlgame/lattice.hpp"
#include "nlgame/perm.hpp"

namespace nlgame {

class Labeling {
public:
    Labeling(std::shared_ptr<const Lattice> lat, int d)
        : lat_(std::move(lat)), d_(d), labels_(lat_->num_edges(), Perm::identity(d)) {}

    Labeling(std::shared_ptr<const Lattice> lat, int d, std::vector<Perm> labels)
        : lat_(std::move(lat)), d_(d), labels_(std::move(labels)) {
        if (static_cast<int>(labels_.size()) != lat_->num_edges())
            throw InvalidArgument("labeling needs one permutation per edge");
        for (const Perm& p : labels_)
            if (p.d() != d_) throw InvalidArgument("label dimension " + std::to_string(p.d()) + " != d=" + std::to_string(d_));
    }

    static Labeling identity(std::shared_ptr<const Lattice> lat, int d) { return Labeling(std::move(lat), d); }

    /// Labeling with shift(shifts[e]) on every edge.
    static Labeling from_shifts(std::shared_ptr<const Lattice> lat, int d, const std::vector<int>& shifts) {
        std::vector<Perm> labels;
        labels.reserve(shifts.size());
        for (int s : shifts) labels.push_back(Perm::shift(d, s));
        return Labeling(std::move(lat), d, std::move(labels));
    }

    const Lattice& lattice() const noexcept { return *lat_; }
    const std::shared_ptr<const Lattice>& lattice_ptr() const noexcept { return lat_; }
    int d() const noexcept { return d_; }
    int num_edges() const noexcept { return static_cast<int>(labels_.size()); }

    const Perm& operator[](int e) const { return labels_.at(e); }
    void set(int e, Perm p) {
        if (p.d() != d_) throw InvalidArgument("label dimension mismatch");
        labels_.at(e) = std::move(p);
    }
    const std::vector<Perm>& labels() const noexcept { return labels_; }

    /// Label as seen when walking the edge in the given direction.
    Perm along(const Step& s) const { return s.forward ? labels_[s.edge] : labels_[s.edge].inverse(); }

    bool all_shifts() const {
        for (const Perm& p : labels_)
            if (!p.shift_index()) return false;
        return true;
    }

    /// Shift indices per edge; throws if some label is not a cyclic shift.
    std::vector<int> shifts() const {
        std::vector<int> out(labels_.size());
        for (size_t e = 0; e < labels_.size(); ++e) {
            auto i = labels_[e].shift_index();
            if (!i) throw InvalidArgument("edge " + std::to_string(e) + " carries a label outside the shift family");
            out[e] = *i;
        }
        return out;
    }

    int non_identity_count() const {
        int n = 0;
        for (const Perm& p : labels_) n += p.is_identity() ? 0 : 1;
        return n;
    }

    bool same_lattice(const Labeling& o) const {
        return lat_ == o.lat_ || (lat_->rows() == o.lat_->rows() && lat_->cols() == o.lat_->cols() &&
                                  lat_->boundary() == o.lat_->boundary());
    }

    bool operator==(const Labeling& o) const { return d_ == o.d_ && same_lattice(o) && labels_ == o.labels_; }

private:
    std::shared_ptr<const Lattice> lat_;
    int d_;
    std::vector<Perm> labels_;
};

/**
 * Switch s(v, sigma): relabels the outcomes of question v by sigma.
 * An edge u -> v becomes sigma o pi, an edge v -> u becomes pi o sigma^-1.
 */
inline Labeling apply_switch(const Labeling& k, int v, const Perm& sigma) {
    const Lattice& lat = k.lattice();
    if (v < 0 || v >= lat.num_vertices()) throw InvalidArgument("switch: vertex " + std::to_string(v) + " out of range");
    if (sigma.d() != k.d()) throw InvalidArgument("switch: permutation dimension mismatch");
    Labeling out = k;
    const Perm sigma_inv = sigma.inverse();
    for (int e : lat.incident(v)) {
        const Edge& ed = lat.edge(e);
        Perm p = out[e];
        if (ed.head == v) p = compose(sigma, p);
        if (ed.tail == v) p = compose(p, sigma_inv);
        out.set(e, std::move(p));
    }
    return out;
}

/// Class of an arbitrary walk (need not be closed).
inline Perm walk_class(const Labeling& k, const Walk& w) {
    Perm acc = Perm::identity(k.d());
    for (const Step& s : w) acc = compose(k.along(s), acc);
    return acc;
}

inline Perm cell_class(const Labeling& k, const Cell& c) {
    Perm acc = Perm::identity(k.d());
    for (const Step& s : c.steps) acc = compose(k.along(s), acc);
    return acc;
}

inline Perm cell_class(const Labeling& k, int cell_id) { return cell_class(k, k.lattice().cell(cell_id)); }

/// Throws unless consecutive steps share endpoints and the walk returns to its start.
inline void check_closed(const Lattice& lat, const Walk& w) {
    if (w.empty()) return;
    auto start_of = [&](const Step& s) { return s.forward ? lat.edge(s.edge).tail : lat.edge(s.edge).head; };
    auto end_of = [&](const Step& s) { return s.forward ? lat.edge(s.edge).head : lat.edge(s.edge).tail; };
    for (size_t i = 0; i + 1 < w.size(); ++i)
        if (end_of(w[i]) != start_of(w[i + 1])) throw InvalidArgument("walk is broken at step " + std::to_string(i + 1));
    if (end_of(w.back()) != start_of(w.front())) throw InvalidArgument("walk is not closed");
}

inline Perm cycle_class(const Labeling& k, const Walk& w) {
    check_closed(k.lattice(), w);
    return walk_class(k, w);
}

// ---------------------------------------------------------------------------
// Consistency

using Assignment = std::vector<int>;

enum class Consistency { Good, Ugly, Bad };

inline std::string to_string(Consistency c) {
    switch (c) {
    case Consistency::Good: return "good";
    case Consistency::Ugly: return "ugly";
    case Consistency::Bad: return "bad";
    }
    return "?";
}

/// Number of edges whose constraint the assignment violates.
inline int violations(const Labeling& k, const Assignment& a) {
    int n = 0;
    for (const Edge& e : k.lattice().edges()) n += k[e.id](a[e.tail]) != a[e.head] ? 1 : 0;
    return n;
}

/// All assignments that satisfy every edge; fixing vertex 0 leaves at most d candidates.
inline std::vector<Assignment> consistent_assignments(const Labeling& k) {
    const Lattice& lat = k.lattice();
    const SpanningTree t = spanning_tree(lat, 0);
    std::vector<Assignment> out;
    for (int a0 = 0; a0 < k.d(); ++a0) {
        Assignment a(lat.num_vertices(), 0);
        a[t.root] = a0;
        for (int v : t.order) {
            if (v == t.root) continue;
            const Edge& e = lat.edge(t.parent_edge[v]);
            a[v] = e.head == v ? k[e.id](a[e.tail]) : k[e.id].inverse()(a[e.head]);
        }
        if (violations(k, a) == 0) out.push_back(std::move(a));
    }
    return out;
}

inline Consistency classify_consistency(const Labeling& k) {
    const auto n = consistent_assignments(k).size();
    if (n == 0) return Consistency::Bad;
    return static_cast<int>(n) == k.d() ? Consistency::Good : Consistency::Ugly;
}

// ---------------------------------------------------------------------------
// Canonical forms and labeling arithmetic

/// Equivalent labeling with the identity on every edge of `t`, by root-to-leaf switching.
inline Labeling canonicalize(const Labeling& k, const SpanningTree& t) {
    Labeling out = k;
    for (int v : t.order) {
        if (v == t.root) continue;
        const int e = t.parent_edge[v];
        const Edge& ed = k.lattice().edge(e);
        const Perm& p = out[e];
        // into v: sigma o p = I ; out of v: p o sigma^-1 = I
        out = apply_switch(out, v, ed.head == v ? p.inverse() : p);
    }
    return out;
}

inline void require_shift_pair(const Labeling& a, const Labeling& b, const char* what) {
    if (!a.same_lattice(b)) throw InvalidArgument(std::string(what) + ": labelings live on different lattices");
    if (a.d() != b.d()) throw InvalidArgument(std::string(what) + ": different d");
    if (!a.all_shifts() || !b.all_shifts())
        throw InvalidArgument(std::string(what) + ": needs labels from the commutative shift family");
}

/// Edgewise composition M(e) = K(e) L(e).
inline Labeling labeling_sum(const Labeling& k, const Labeling& l) {
    require_shift_pair(k, l, "labeling_sum");
    std::vector<Perm> out;
    for (int e = 0; e < k.num_edges(); ++e) out.push_back(compose(k[e], l[e]));
    return Labeling(k.lattice_ptr(), k.d(), std::move(out));
}

/// K + L^-1.
inline Labeling labeling_diff(const Labeling& k, const Labeling& l) {
    require_shift_pair(k, l, "labeling_diff");
    std::vector<Perm> out;
    for (int e = 0; e < k.num_edges(); ++e) out.push_back(compose(k[e], l[e].inverse()));
    return Labeling(k.lattice_ptr(), k.d(), std::move(out));
}

// ---------------------------------------------------------------------------
// Defect signature

struct DefectSignature {
    int d = 2;
    std::vector<int> cells; // shift index of each cell class, row-major
    std::vector<int> loops; // shift index along each homology representative

    bool operator==(const DefectSignature&) const = default;

    int defect_count() const {
        int n = 0;
        for (int x : cells) n += x != 0 ? 1 : 0;
        return n;
    }

    std::string dump() const {
        std::ostringstream os;
        auto list = [&](const std::vector<int>& v) {
            os << '[';
            for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
            os << ']';
        };
        os << "cells: ";
        list(cells);
        os << " loops: ";
        list(loops);
        return os.str();
    }
};

/**
 * Cell classes plus loop classes. Loop classes are read on the canonical form
 * relative to the BFS tree rooted at vertex 0, along the representatives of
 * homology_representatives(). With defects present the value depends on which
 * representative is used; fixing the row-0 and column-0 rings settles it.
 */
inline DefectSignature signature(const Labeling& k) {
    if (!k.all_shifts()) throw InvalidArgument("signature: labels outside the shift family");
    const Lattice& lat = k.lattice();
    DefectSignature s;
    s.d = k.d();
    for (const Cell& c : lat.cells()) s.cells.push_back(*cell_class(k, c).shift_index());
    const Labeling canon = canonicalize(k, spanning_tree(lat, 0));
    for (const Walk& w : homology_representatives(lat)) s.loops.push_back(*cycle_class(canon, w).shift_index());
    return s;
}

struct Equivalence {
    bool equivalent = false;
    int unit = 0;                  // witness when equivalent: K1 classes = unit * K2 classes
    std::optional<int> cell;       // differentiating cell when not equivalent
    std::optional<int> loop;       // differentiating loop when not equivalent
};

/**
 * Decides equivalence of two shift labelings: equal signatures up to a unit
 * u of Z_d, which is realized by relabeling every question with x -> u x.
 */
inline Equivalence is_equivalent(const Labeling& k1, const Labeling& k2) {
    if (!k1.same_lattice(k2)) throw InvalidArgument("is_equivalent: mismatched lattices");
    if (k1.d() != k2.d()) throw InvalidArgument("is_equivalent: mismatched d");
    if (!k1.all_shifts() || !k2.all_shifts())
        throw InvalidArgument("is_equivalent: only shift labelings are decided by signature; use orbit_oracle");
    const int d = k1.d();
    const DefectSignature s1 = signature(k1), s2 = signature(k2);
    for (int u : units_mod(d)) {
        bool ok = true;
        for (size_t i = 0; ok && i < s1.cells.size(); ++i) ok = s1.cells[i] == mod(1LL * u * s2.cells[i], d);
        for (size_t i = 0; ok && i < s1.loops.size(); ++i) ok = s1.loops[i] == mod(1LL * u * s2.loops[i], d);
        if (ok) return {true, u, std::nullopt, std::nullopt};
    }
    Equivalence r;
    for (size_t i = 0; i < s1.cells.size(); ++i)
        if (s1.cells[i] != s2.cells[i]) {
            r.cell = static_cast<int>(i);
            return r;
        }
    for (size_t i = 0; i < s1.loops.size(); ++i)
        if (s1.loops[i] != s2.loops[i]) {
            r.loop = static_cast<int>(i);
            return r;
        }
    // equal at u = 1 cannot happen here; keep the contract total
    return r;
}

enum class OrbitVerdict { Equivalent, Inequivalent, Inconclusive };

/**
 * Breadth-first search over the orbit of k1 under single-vertex shift switches
 * and the global relabelings x -> u x. Exact within `max_states`.
 */
inline OrbitVerdict orbit_oracle(const Labeling& k1, const Labeling& k2, std::size_t max_states) {
    require_shift_pair(k1, k2, "orbit_oracle");
    const Lattice& lat = k1.lattice();
    const int d = k1.d();
    auto encode = [](const std::vector<int>& v) { return std::string(v.begin(), v.end()); };
    const std::vector<int> start = k1.shifts();
    const std::string target = encode(k2.shifts());
    std::unordered_set<std::string> seen{encode(start)};
    std::deque<std::vector<int>> q{start};
    if (encode(start) == target) return OrbitVerdict::Equivalent;
    while (!q.empty()) {
        std::vector<int> cur = std::move(q.front());
        q.pop_front();
        auto visit = [&](std::vector<int> next) {
            std::string key = encode(next);
            if (seen.insert(key).second) q.push_back(std::move(next));
            return key == target;
        };
        for (int v = 0; v < lat.num_vertices(); ++v) {
            for (int s = 1; s < d; ++s) {
                std::vector<int> next = cur;
                for (int e : lat.incident(v)) {
                    const Edge& ed = lat.edge(e);
                    if (ed.head == v) next[e] = mod(next[e] + s, d);
                    if (ed.tail == v) next[e] = mod(next[e] - s, d);
                }
                if (visit(std::move(next))) return OrbitVerdict::Equivalent;
            }
        }
        for (int u : units_mod(d)) {
            if (u == 1) continue;
            std::vector<int> next = cur;
            for (int& x : next) x = mod(1LL * u * x, d);
            if (visit(std::move(next))) return OrbitVerdict::Equivalent;
        }
        if (seen.size() > max_states) return OrbitVerdict::Inconclusive;
    }
    return OrbitVerdict::Inequivalent;
}

/// Number of inequivalent defect-free loop signatures: d^(number of homology generators).
inline long long count_loop_classes(const Lattice& lat, int d) {
    long long n = 1;
    for (size_t i = 0; i < homology_representatives(lat).size(); ++i) n *= d;
    return n;
}

/// Turns an all-reflection labeling on a bipartite lattice into an equivalent all-shift one.
inline Labeling normalize_family(const Labeling& k) {
    const Lattice& lat = k.lattice();
    if (!lat.bipartite()) throw InvalidArgument("normalize_family: lattice is not bipartite");
    if (k.d() > 2 && k.all_shifts())
        throw InvalidArgument("normalize_family: labeling is already in the shift family");
    for (int e = 0; e < k.num_edges(); ++e)
        if (!k[e].reflection_index())
            throw InvalidArgument("normalize_family: edge " + std::to_string(e) + " is not a reflection");
    Labeling out = k;
    const Perm r0 = Perm::reflection(k.d(), 0);
    for (int v = 0; v < lat.num_vertices(); ++v)
        if (lat.color(v) == 1) out = apply_switch(out, v, r0);
    return out;
}

} // namespace nlgame
