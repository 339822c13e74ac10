#pragma once

// Game files and instance generators.
//
//   # comment
//   lattice <rows> <cols> <plane|cylx|cyly|torus>
//   d <n>
//   edge <r> <c> <R|D> <perm-token>
//   generate loop <x|y> <class> [at <index>]
//
// `lattice` and `d` come first, in that order. Unlisted edges are the
// identity; labelling the same edge twice is an error. A loop of class i puts
// shift(i) on a whole ring of parallel edges: x on the Right edges leaving
// column `index` (crossing every row), y on the Down edges leaving row
// `index`. Each needs the lattice to wrap in that direction, since otherwise
// the ring is removable by switches.

#include <algorithm>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <tuple>
#include <vector>

#include "nlgame/game.hpp"

namespace nlgame {

struct EdgeLabel {
    int r = 0;
    int c = 0;
    Orientation orient = Orientation::Right;
    Perm label;
};

struct GenerateSpec {
    int rows = 4;
    int cols = 4;
    Boundary boundary = Boundary::Torus;
    int d = 2;
    int loop_x = 0; // shift class of the x loop; 0 means none
    int loop_y = 0;
    int loop_x_at = 0; // column of the x ring
    int loop_y_at = 0; // row of the y ring
    std::vector<EdgeLabel> edges;
};

namespace detail {

inline std::vector<int> loop_edges(const Lattice& lat, char axis, int at) {
    std::vector<int> out;
    if (axis == 'x') {
        if (!lat.wraps_x()) throw InvalidArgument("loop x needs a lattice that wraps in x (cylx or torus)");
        if (at < 0 || at >= lat.cols()) throw InvalidArgument("loop x column " + std::to_string(at) + " out of range");
        for (int r = 0; r < lat.rows(); ++r) out.push_back(*lat.edge_id(r, at, Orientation::Right));
    } else {
        if (!lat.wraps_y()) throw InvalidArgument("loop y needs a lattice that wraps in y (cyly or torus)");
        if (at < 0 || at >= lat.rows()) throw InvalidArgument("loop y row " + std::to_string(at) + " out of range");
        for (int c = 0; c < lat.cols(); ++c) out.push_back(*lat.edge_id(at, c, Orientation::Down));
    }
    return out;
}

inline char orientation_char(Orientation o) { return o == Orientation::Right ? 'R' : 'D'; }

} // namespace detail

inline Labeling generate(const GenerateSpec& spec) {
    auto lat = std::make_shared<const Lattice>(spec.rows, spec.cols, spec.boundary);
    Labeling k = Labeling::identity(lat, spec.d);
    std::vector<bool> used(lat->num_edges(), false);
    auto put = [&](int e, const Perm& p, const std::string& what) {
        if (used[e]) throw InvalidArgument(what + ": edge already labelled");
        used[e] = true;
        k.set(e, p);
    };
    for (auto [axis, cls, at] : {std::tuple{'x', spec.loop_x, spec.loop_x_at}, std::tuple{'y', spec.loop_y, spec.loop_y_at}}) {
        if (cls < 0 || cls >= spec.d)
            throw InvalidArgument(std::string("loop ") + axis + " class " + std::to_string(cls) + " not below d");
        if (cls == 0) continue;
        for (int e : detail::loop_edges(*lat, axis, at)) put(e, Perm::shift(spec.d, cls), std::string("loop ") + axis);
    }
    for (const EdgeLabel& el : spec.edges) {
        const std::string where = std::string("edge ") + std::to_string(el.r) + " " + std::to_string(el.c) + " " +
                                  detail::orientation_char(el.orient);
        const auto e = lat->edge_id(el.r, el.c, el.orient);
        if (!e) throw InvalidArgument(where + " is not on the lattice");
        if (el.label.d() != spec.d) throw InvalidArgument(where + ": label dimension mismatch");
        put(*e, el.label, where);
    }
    return k;
}

/// Parses a game file. Errors carry the 1-based line and column of the offending token.
inline Labeling parse_game(std::string_view text) {
    struct Token {
        std::string text;
        int column;
    };
    std::shared_ptr<const Lattice> lat;
    std::optional<Labeling> k;
    std::vector<int> labelled_at; // line that labelled each edge, 0 if none
    int line_no = 0;

    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        pos = end + 1;
        ++line_no;
        if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);

        std::vector<Token> tok;
        for (std::size_t i = 0; i < line.size();) {
            if (line[i] == ' ' || line[i] == '\t' || line[i] == '\r') {
                ++i;
                continue;
            }
            const std::size_t j = std::min(line.find_first_of(" \t\r", i), line.size());
            tok.push_back({std::string(line.substr(i, j - i)), static_cast<int>(i) + 1});
            i = j;
        }
        if (tok.empty()) continue;

        auto fail = [&](const std::string& msg, std::size_t t) -> ParseError {
            return ParseError(msg, line_no, t < tok.size() ? tok[t].column : static_cast<int>(line.size()) + 1);
        };
        auto arity = [&](std::size_t lo, std::size_t hi, const char* usage) {
            if (tok.size() < lo) throw fail(std::string("too few fields, expected '") + usage + "'", tok.size());
            if (tok.size() > hi) throw fail(std::string("unexpected field, expected '") + usage + "'", hi);
        };
        auto integer = [&](std::size_t t, const char* what) {
            const std::string& s = tok[t].text;
            std::size_t used = 0;
            int v = 0;
            try {
                v = std::stoi(s, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != s.size() || s.empty()) throw fail(std::string("expected an integer ") + what + ", got '" + s + "'", t);
            return v;
        };
        auto put = [&](int e, Perm p, std::size_t t) {
            if (labelled_at[e])
                throw fail("edge already labelled on line " + std::to_string(labelled_at[e]), t);
            labelled_at[e] = line_no;
            k->set(e, std::move(p));
        };

        const std::string& cmd = tok[0].text;
        if (cmd == "lattice") {
            if (lat) throw fail("duplicate lattice line", 0);
            arity(4, 4, "lattice <rows> <cols> <plane|cylx|cyly|torus>");
            const int rows = integer(1, "row count"), cols = integer(2, "column count");
            const auto b = parse_boundary(tok[3].text);
            if (!b) throw fail("unknown boundary '" + tok[3].text + "'", 3);
            try {
                lat = std::make_shared<const Lattice>(rows, cols, *b);
            } catch (const InvalidArgument& e) {
                throw fail(e.what(), 1);
            }
        } else if (cmd == "d") {
            if (!lat) throw fail("'d' before 'lattice'", 0);
            if (k) throw fail("duplicate d line", 0);
            arity(2, 2, "d <n>");
            const int d = integer(1, "d");
            if (d < 2) throw fail("d must be at least 2", 1);
            k = Labeling::identity(lat, d);
            labelled_at.assign(lat->num_edges(), 0);
        } else if (cmd == "edge" || cmd == "generate") {
            if (!k) throw fail("'" + cmd + "' before 'lattice' and 'd'", 0);
            if (cmd == "edge") {
                arity(5, 5, "edge <r> <c> <R|D> <perm-token>");
                const int r = integer(1, "row"), c = integer(2, "column");
                if (tok[3].text != "R" && tok[3].text != "D") throw fail("orientation must be R or D", 3);
                const Orientation o = tok[3].text == "R" ? Orientation::Right : Orientation::Down;
                const auto e = lat->edge_id(r, c, o);
                if (!e) throw fail("edge " + tok[1].text + " " + tok[2].text + " " + tok[3].text + " is not on the lattice", 1);
                Perm p = Perm::identity(k->d());
                try {
                    p = parse_perm_token(tok[4].text, k->d());
                } catch (const InvalidArgument& ex) {
                    throw fail(ex.what(), 4);
                }
                put(*e, std::move(p), 1);
            } else {
                arity(4, 6, "generate loop <x|y> <class> [at <index>]");
                if (tok[1].text != "loop") throw fail("unknown generator '" + tok[1].text + "'", 1);
                if (tok[2].text != "x" && tok[2].text != "y") throw fail("loop axis must be x or y", 2);
                const int cls = integer(3, "class");
                if (cls < 0 || cls >= k->d()) throw fail("loop class " + tok[3].text + " not below d", 3);
                int at = 0;
                if (tok.size() > 4) {
                    if (tok[4].text != "at" || tok.size() != 6) throw fail("expected 'at <index>'", 4);
                    at = integer(5, "index");
                }
                std::vector<int> ring;
                try {
                    ring = detail::loop_edges(*lat, tok[2].text[0], at);
                } catch (const InvalidArgument& ex) {
                    throw fail(ex.what(), tok.size() > 4 ? 5 : 2);
                }
                if (cls != 0)
                    for (int e : ring) put(e, Perm::shift(k->d(), cls), 3);
            }
        } else {
            throw fail("unknown directive '" + cmd + "'", 0);
        }
    }
    if (!lat) throw ParseError("missing 'lattice' line", line_no, 1);
    if (!k) throw ParseError("missing 'd' line", line_no, 1);
    return *k;
}

/// Canonical text: header plus one `edge` line per non-identity edge, in edge order.
inline std::string serialize(const Labeling& k) {
    const Lattice& lat = k.lattice();
    std::ostringstream os;
    os << "lattice " << lat.rows() << ' ' << lat.cols() << ' ' << to_string(lat.boundary()) << '\n';
    os << "d " << k.d() << '\n';
    for (const Edge& e : lat.edges())
        if (!k[e.id].is_identity())
            os << "edge " << e.r << ' ' << e.c << ' ' << detail::orientation_char(e.orient) << ' ' << to_token(k[e.id])
               << '\n';
    return os.str();
}

} // namespace nlgame
