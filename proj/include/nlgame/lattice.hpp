#pragma once

/**
 * @file lattice.hpp
 * @brief Square lattices on the plane, cylinders and the torus, with their
 *        cells, dual graph, spanning trees and homology representatives.
 *
 * Indexing is fully deterministic:
 *   vertex (r, c)         -> r * cols + c
 *   edges                 -> row-major over tail vertices, Right before Down
 *   cell (r, c)           -> the square with top-left corner (r, c), row-major
 *
 * Rows grow downwards on the page. A cell is walked counterclockwise from its
 * top-left corner v0: down, right, up, left. The first two steps follow the
 * stored edge direction, the last two run against it.
 */

#include <algorithm>
#include <array>
#include <deque>
#include <limits>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "nlgame/error.hpp"

namespace nlgame {

enum class Boundary { Plane, CylinderX, CylinderY, Torus };
enum class Orientation { Right, Down };

inline std::string to_string(Boundary b) {
    switch (b) {
    case Boundary::Plane: return "plane";
    case Boundary::CylinderX: return "cylx";
    case Boundary::CylinderY: return "cyly";
    case Boundary::Torus: return "torus";
    }
    return "?";
}

inline std::optional<Boundary> parse_boundary(const std::string& s) {
    if (s == "plane") return Boundary::Plane;
    if (s == "cylx") return Boundary::CylinderX;
    if (s == "cyly") return Boundary::CylinderY;
    if (s == "torus") return Boundary::Torus;
    return std::nullopt;
}

struct Edge {
    int id;
    int tail;
    int head;
    Orientation orient;
    int r; // tail row
    int c; // tail column
};

/// One step of a closed walk: an edge and whether it is traversed tail -> head.
struct Step {
    int edge;
    bool forward;

    bool operator==(const Step&) const = default;
};

using Walk = std::vector<Step>;

struct Cell {
    int id;
    int r;
    int c;
    int v0;
    std::array<Step, 4> steps;
};

class Lattice {
public:
    Lattice(int rows, int cols, Boundary boundary) : rows_(rows), cols_(cols), boundary_(boundary) {
        if (rows < 2 || cols < 2)
            throw InvalidArgument("lattice needs rows >= 2 and cols >= 2, got " + std::to_string(rows) + "x" +
                                  std::to_string(cols));
        build_edges();
        build_cells();
        bipartite_ = two_color();
    }

    int rows() const noexcept { return rows_; }
    int cols() const noexcept { return cols_; }
    Boundary boundary() const noexcept { return boundary_; }

    /// Columns wrap (a Right edge leaves the last column).
    bool wraps_x() const noexcept { return boundary_ == Boundary::CylinderX || boundary_ == Boundary::Torus; }
    /// Rows wrap (a Down edge leaves the last row).
    bool wraps_y() const noexcept { return boundary_ == Boundary::CylinderY || boundary_ == Boundary::Torus; }

    int num_vertices() const noexcept { return rows_ * cols_; }
    int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
    int num_cells() const noexcept { return static_cast<int>(cells_.size()); }

    int vertex(int r, int c) const { return r * cols_ + c; }
    int row_of(int v) const { return v / cols_; }
    int col_of(int v) const { return v % cols_; }

    const std::vector<Edge>& edges() const noexcept { return edges_; }
    const Edge& edge(int id) const { return edges_.at(id); }
    const std::vector<Cell>& cells() const noexcept { return cells_; }
    const Cell& cell(int id) const { return cells_.at(id); }

    std::optional<int> edge_id(int r, int c, Orientation o) const {
        if (r < 0 || r >= rows_ || c < 0 || c >= cols_) return std::nullopt;
        int id = edge_at_[(r * cols_ + c) * 2 + (o == Orientation::Down ? 1 : 0)];
        if (id < 0) return std::nullopt;
        return id;
    }

    std::optional<int> cell_id(int r, int c) const {
        if (r < 0 || r >= cell_rows() || c < 0 || c >= cell_cols()) return std::nullopt;
        return r * cell_cols() + c;
    }

    int cell_rows() const noexcept { return wraps_y() ? rows_ : rows_ - 1; }
    int cell_cols() const noexcept { return wraps_x() ? cols_ : cols_ - 1; }

    /// Edge ids incident to v, ascending.
    const std::vector<int>& incident(int v) const { return incident_.at(v); }

    int other_end(int edge, int v) const {
        const Edge& e = edges_.at(edge);
        return e.tail == v ? e.head : e.tail;
    }

    bool bipartite() const noexcept { return bipartite_; }

    /// Color of v in the checkerboard 2-coloring; meaningful when bipartite().
    int color(int v) const { return (row_of(v) + col_of(v)) % 2; }

private:
    void build_edges() {
        edge_at_.assign(static_cast<size_t>(rows_) * cols_ * 2, -1);
        incident_.assign(num_vertices(), {});
        for (int r = 0; r < rows_; ++r) {
            for (int c = 0; c < cols_; ++c) {
                if (c + 1 < cols_ || wraps_x()) add_edge(r, c, r, (c + 1) % cols_, Orientation::Right);
                if (r + 1 < rows_ || wraps_y()) add_edge(r, c, (r + 1) % rows_, c, Orientation::Down);
            }
        }
    }

    void add_edge(int r, int c, int r2, int c2, Orientation o) {
        const int id = static_cast<int>(edges_.size());
        edges_.push_back({id, vertex(r, c), vertex(r2, c2), o, r, c});
        edge_at_[(r * cols_ + c) * 2 + (o == Orientation::Down ? 1 : 0)] = id;
        incident_[vertex(r, c)].push_back(id);
        incident_[vertex(r2, c2)].push_back(id);
    }

    void build_cells() {
        for (int r = 0; r < cell_rows(); ++r) {
            for (int c = 0; c < cell_cols(); ++c) {
                const int r1 = (r + 1) % rows_;
                const int c1 = (c + 1) % cols_;
                Cell cell{static_cast<int>(cells_.size()), r, c, vertex(r, c), {}};
                cell.steps[0] = {*edge_id(r, c, Orientation::Down), true};
                cell.steps[1] = {*edge_id(r1, c, Orientation::Right), true};
                cell.steps[2] = {*edge_id(r, c1, Orientation::Down), false};
                cell.steps[3] = {*edge_id(r, c, Orientation::Right), false};
                cells_.push_back(cell);
            }
        }
    }

    bool two_color() const {
        std::vector<int> col(num_vertices(), -1);
        for (int s = 0; s < num_vertices(); ++s) {
            if (col[s] >= 0) continue;
            col[s] = 0;
            std::deque<int> q{s};
            while (!q.empty()) {
                int v = q.front();
                q.pop_front();
                for (int e : incident_[v]) {
                    int u = other_end(e, v);
                    if (col[u] < 0) {
                        col[u] = 1 - col[v];
                        q.push_back(u);
                    } else if (col[u] == col[v]) {
                        return false;
                    }
                }
            }
        }
        return true;
    }

    int rows_;
    int cols_;
    Boundary boundary_;
    std::vector<Edge> edges_;
    std::vector<int> edge_at_;
    std::vector<std::vector<int>> incident_;
    std::vector<Cell> cells_;
    bool bipartite_ = false;
};

inline Lattice build(int rows, int cols, Boundary boundary) { return Lattice(rows, cols, boundary); }

inline const std::vector<Cell>& cells(const Lattice& lat) { return lat.cells(); }

// ---------------------------------------------------------------------------
// Dual lattice

struct DualEdge {
    int primal;
    int a; // face on the "minus" side: above a Right edge, left of a Down edge
    int b; // face on the "plus" side: below a Right edge, right of a Down edge
};

/**
 * Dual graph: one vertex per cell, followed by exterior vertices for open
 * boundaries. A plane has a single exterior vertex (all four sides fused);
 * a cylinder has one per open side. Dual edge i crosses primal edge i.
 */
class DualLattice {
public:
    explicit DualLattice(const Lattice& lat, bool fuse_exterior = false) : num_cells_(lat.num_cells()) {
        // side: 0 top, 1 bottom, 2 left, 3 right
        std::array<int, 4> slot{-1, -1, -1, -1};
        int next = num_cells_;
        const bool single = lat.boundary() == Boundary::Plane || fuse_exterior;
        build(lat, [&](int side) {
            int& s = slot[single ? 0 : side];
            if (s < 0) s = next++;
            return s;
        });
        num_vertices_ = next;
        std::vector<std::vector<std::pair<int, int>>> nb(num_vertices_);
        for (const DualEdge& de : edges_) {
            nb[de.a].push_back({de.b, de.primal});
            if (de.b != de.a) nb[de.b].push_back({de.a, de.primal});
        }
        adj_.assign(num_vertices_, {});
        for (int v = 0; v < num_vertices_; ++v) {
            std::sort(nb[v].begin(), nb[v].end());
            for (auto [u, e] : nb[v]) adj_[v].push_back(e);
        }
    }

    int num_vertices() const noexcept { return num_vertices_; }
    int num_cells() const noexcept { return num_cells_; }
    int num_edges() const noexcept { return static_cast<int>(edges_.size()); }
    bool is_exterior(int v) const noexcept { return v >= num_cells_; }
    std::vector<int> exterior_vertices() const {
        std::vector<int> v;
        for (int i = num_cells_; i < num_vertices_; ++i) v.push_back(i);
        return v;
    }

    const std::vector<DualEdge>& edges() const noexcept { return edges_; }
    const DualEdge& edge(int primal) const { return edges_.at(primal); }

    /// Dual edges (by primal id) at v, ordered by neighbor index then edge id.
    const std::vector<int>& adjacent(int v) const { return adj_.at(v); }

    int across(int primal, int v) const {
        const DualEdge& de = edges_.at(primal);
        return de.a == v ? de.b : de.a;
    }

private:
    template <class ExteriorFn>
    void build(const Lattice& lat, ExteriorFn exterior) {
        edges_.resize(lat.num_edges());
        for (const Edge& e : lat.edges()) {
            DualEdge de{e.id, -1, -1};
            if (e.orient == Orientation::Right) {
                auto up = (e.r >= 1 || lat.wraps_y()) ? lat.cell_id((e.r - 1 + lat.rows()) % lat.rows(), e.c) : std::nullopt;
                auto down = lat.cell_id(e.r, e.c);
                de.a = up ? *up : exterior(0);
                de.b = down ? *down : exterior(1);
            } else {
                auto lft = (e.c >= 1 || lat.wraps_x()) ? lat.cell_id(e.r, (e.c - 1 + lat.cols()) % lat.cols()) : std::nullopt;
                auto rgt = lat.cell_id(e.r, e.c);
                de.a = lft ? *lft : exterior(2);
                de.b = rgt ? *rgt : exterior(3);
            }
            edges_[e.id] = de;
        }
    }

    int num_cells_;
    int num_vertices_ = 0;
    std::vector<DualEdge> edges_;
    std::vector<std::vector<int>> adj_;
};

inline DualLattice dual(const Lattice& lat) { return DualLattice(lat); }

struct DualPath {
    std::vector<int> vertices;     // from ... to
    std::vector<int> primal_edges; // crossed edges, in order
    int length() const { return static_cast<int>(primal_edges.size()); }
};

/// Unit-metric BFS distances from `from` to every dual vertex.
inline std::vector<int> dual_distances(const DualLattice& dl, int from) {
    std::vector<int> dist(dl.num_vertices(), std::numeric_limits<int>::max());
    dist[from] = 0;
    std::deque<int> q{from};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        for (int pe : dl.adjacent(v)) {
            int u = dl.across(pe, v);
            if (dist[u] == std::numeric_limits<int>::max()) {
                dist[u] = dist[v] + 1;
                q.push_back(u);
            }
        }
    }
    return dist;
}

/**
 * Shortest dual path. Ties are broken towards the lexicographically smallest
 * sequence of dual vertex indices, walking from `from`.
 */
inline DualPath dual_shortest_path(const DualLattice& dl, int from, int to) {
    // distances to `to`, then greedy walk choosing the smallest next vertex
    const std::vector<int> dist = dual_distances(dl, to);
    if (dist[from] == std::numeric_limits<int>::max()) throw InvalidArgument("dual vertices are disconnected");
    DualPath path;
    path.vertices.push_back(from);
    int v = from;
    while (v != to) {
        int best_u = -1, best_e = -1;
        for (int pe : dl.adjacent(v)) {
            int u = dl.across(pe, v);
            if (dist[u] == dist[v] - 1 && (best_u < 0 || u < best_u || (u == best_u && pe < best_e))) {
                best_u = u;
                best_e = pe;
            }
        }
        path.primal_edges.push_back(best_e);
        path.vertices.push_back(best_u);
        v = best_u;
    }
    return path;
}

// ---------------------------------------------------------------------------
// Spanning trees

struct SpanningTree {
    int root = 0;
    std::vector<int> edges;        // sorted edge ids
    std::vector<int> parent_edge;  // per vertex, -1 at the root
    std::vector<int> order;        // vertices, root first, parents before children
};

/// Orders an arbitrary spanning edge set from `root`; throws if it is not a spanning tree.
inline SpanningTree make_tree(const Lattice& lat, std::vector<int> tree_edges, int root) {
    const int n = lat.num_vertices();
    if (static_cast<int>(tree_edges.size()) != n - 1) throw InvalidArgument("spanning tree needs |V|-1 edges");
    std::sort(tree_edges.begin(), tree_edges.end());
    std::vector<char> in(lat.num_edges(), 0);
    for (int e : tree_edges) in.at(e) = 1;
    SpanningTree t;
    t.root = root;
    t.edges = std::move(tree_edges);
    t.parent_edge.assign(n, -2);
    t.parent_edge[root] = -1;
    std::deque<int> q{root};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        t.order.push_back(v);
        for (int e : lat.incident(v)) {
            if (!in[e]) continue;
            int u = lat.other_end(e, v);
            if (t.parent_edge[u] == -2) {
                t.parent_edge[u] = e;
                q.push_back(u);
            }
        }
    }
    if (static_cast<int>(t.order.size()) != n) throw InvalidArgument("edge set does not span the lattice");
    return t;
}

/// Deterministic BFS tree; neighbors visited in ascending vertex order.
inline SpanningTree spanning_tree(const Lattice& lat, int root = 0) {
    const int n = lat.num_vertices();
    if (root < 0 || root >= n) throw InvalidArgument("root out of range");
    std::vector<int> parent(n, -2);
    parent[root] = -1;
    std::vector<int> chosen;
    std::deque<int> q{root};
    while (!q.empty()) {
        int v = q.front();
        q.pop_front();
        std::vector<std::pair<int, int>> nb;
        for (int e : lat.incident(v)) nb.push_back({lat.other_end(e, v), e});
        std::sort(nb.begin(), nb.end());
        for (auto [u, e] : nb) {
            if (parent[u] == -2) {
                parent[u] = e;
                chosen.push_back(e);
                q.push_back(u);
            }
        }
    }
    return make_tree(lat, std::move(chosen), root);
}

struct EnlargedTree {
    std::vector<char> contains;  // per edge
    std::vector<int> complement; // edges outside, ascending
};

/**
 * Closure of T under absorbing the single missing edge of any cell.
 * `cell_order`, when given, fixes the scan order (the result does not depend on it).
 */
inline EnlargedTree enlarge_tree(const Lattice& lat, const SpanningTree& t, const std::vector<int>& cell_order = {}) {
    EnlargedTree out;
    out.contains.assign(lat.num_edges(), 0);
    for (int e : t.edges) out.contains[e] = 1;
    std::vector<int> order = cell_order;
    if (order.empty()) {
        order.resize(lat.num_cells());
        for (int i = 0; i < lat.num_cells(); ++i) order[i] = i;
    }
    bool changed = true;
    while (changed) {
        changed = false;
        for (int cid : order) {
            int missing = -1, count = 0;
            for (const Step& s : lat.cell(cid).steps) {
                if (!out.contains[s.edge]) {
                    ++count;
                    missing = s.edge;
                }
            }
            if (count == 1) {
                out.contains[missing] = 1;
                changed = true;
            }
        }
    }
    for (int e = 0; e < lat.num_edges(); ++e)
        if (!out.contains[e]) out.complement.push_back(e);
    return out;
}

/**
 * One non-contractible primal cycle per wrapping direction: the row-0 ring of
 * Right edges when columns wrap, then the column-0 ring of Down edges when
 * rows wrap. Empty for the plane.
 */
inline std::vector<Walk> homology_representatives(const Lattice& lat) {
    std::vector<Walk> reps;
    if (lat.wraps_x()) {
        Walk w;
        for (int c = 0; c < lat.cols(); ++c) w.push_back({*lat.edge_id(0, c, Orientation::Right), true});
        reps.push_back(std::move(w));
    }
    if (lat.wraps_y()) {
        Walk w;
        for (int r = 0; r < lat.rows(); ++r) w.push_back({*lat.edge_id(r, 0, Orientation::Down), true});
        reps.push_back(std::move(w));
    }
    return reps;
}

} // namespace nlgame
