#pragma once

// Reproduction harness: the loop tables on the 4×4 and 8×4 tori, the two
// single-edge tables, and the k×k torus loop formula. Every cell compares the
// computed values with the published ones and keeps the verdict per quantity.

#include <cmath>
#include <iomanip>
#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "nlgame/io.hpp"
#include "nlgame/parallel.hpp"
#include "nlgame/report.hpp"

namespace nlgame {

struct PublishedCell {
    std::string table; // "1", "2", "3" or "torus"
    std::string id;
    GenerateSpec spec;
    std::optional<Rational> c;     // published classical value, as the exact fraction it rounds
    std::optional<double> q_lower; // for n = 2 the published lower and upper coincide
    std::optional<double> q_upper;
};

namespace detail {

inline std::string triple_id(int n, int x, int y, int z) {
    return "n=" + std::to_string(n) + " (" + std::to_string(x) + "," + std::to_string(y) + "," + std::to_string(z) + ")";
}

inline Rational fraction_of(int beta, int edges) { return Rational(edges - beta, edges); }

} // namespace detail

/**
 * Loop games on the torus. Type a is 4×4; type b is the 8-row, 4-column
 * torus, so the x loop (Right edges of one column) has length 8 and the y
 * loop (Down edges of one row) length 4.
 */
inline std::vector<PublishedCell> table1_cells() {
    struct Row {
        char type;
        int n, x, y;
        double lower, upper;
        Rational c;
    };
    const Rational c875(7, 8), c9375(15, 16), c75(3, 4), c8125(13, 16);
    const std::vector<Row> rows = {
        {'a', 2, 1, 0, 0.926666, 0.926666, c875},  {'a', 2, 0, 1, 0.926666, 0.926666, c875},
        {'a', 2, 1, 1, 0.853553, 0.853553, c75},   {'b', 2, 1, 0, 0.926666, 0.926666, c875},
        {'b', 2, 0, 1, 0.980970, 0.980970, c9375}, {'b', 2, 1, 1, 0.907747, 0.907747, c8125},
        {'a', 3, 1, 0, 0.915578, 0.955342, c875},  {'a', 3, 0, 1, 0.915578, 0.955342, c875},
        {'a', 3, 1, 1, 0.831812, 0.910684, c75},   {'a', 3, 1, 2, 0.833062, 0.910684, c75},
        {'a', 3, 2, 1, 0.832910, 0.910684, c75},   {'a', 3, 0, 2, 0.915578, 0.955342, c875},
        {'a', 3, 2, 0, 0.915578, 0.955342, c875},  {'a', 3, 2, 2, 0.833325, 0.910684, c75},
        {'b', 3, 1, 0, 0.915357, 0.955342, c875},  {'b', 3, 0, 1, 0.977439, 0.988642, c9375},
        {'b', 3, 1, 1, 0.893144, 0.943984, c8125}, {'b', 3, 1, 2, 0.891906, 0.943984, c8125},
        {'b', 3, 2, 1, 0.892333, 0.943984, c8125}, {'b', 3, 0, 2, 0.977439, 0.988642, c9375},
        {'b', 3, 2, 0, 0.915520, 0.955342, c9375}, {'b', 3, 2, 2, 0.891906, 0.943984, c8125},
    };
    std::vector<PublishedCell> out;
    for (const Row& r : rows) {
        PublishedCell cell;
        cell.table = "1";
        cell.id = std::string("n=") + std::to_string(r.n) + " type " + r.type + " (" + std::to_string(r.x) + "," +
                  std::to_string(r.y) + ")";
        cell.spec.rows = r.type == 'a' ? 4 : 8;
        cell.spec.cols = 4;
        cell.spec.d = r.n;
        cell.spec.loop_x = r.x;
        cell.spec.loop_y = r.y;
        cell.c = r.c;
        cell.q_lower = r.lower;
        cell.q_upper = r.upper;
        out.push_back(std::move(cell));
    }
    return out;
}

namespace detail {

struct TripleRow {
    int n, x, y, z;
    double lower, upper;
};

inline std::vector<TripleRow> table2_rows() {
    return {
        {2, 1, 0, 0, 0.968750, 0.968750}, {2, 0, 1, 0, 0.968750, 0.968750}, {2, 0, 0, 1, 0.968750, 0.968750},
        {2, 0, 1, 1, 0.949843, 0.949843}, {2, 1, 1, 0, 0.937842, 0.937842}, {2, 1, 0, 1, 0.937500, 0.937500},
        {2, 1, 1, 1, 0.922388, 0.922388},
        {3, 1, 0, 0, 0.968750, 0.977378}, {3, 0, 1, 0, 0.968750, 0.977378}, {3, 0, 0, 1, 0.968750, 0.977378},
        {3, 2, 0, 0, 0.968750, 0.977378}, {3, 0, 2, 0, 0.968750, 0.977378}, {3, 0, 0, 2, 0.968750, 0.977378},
        {3, 0, 1, 1, 0.942724, 0.968772}, {3, 0, 2, 1, 0.937500, 0.945183}, {3, 0, 1, 2, 0.937500, 0.945183},
        {3, 0, 2, 2, 0.942724, 0.968772}, {3, 1, 1, 0, 0.937500, 0.958457}, {3, 2, 1, 0, 0.937500, 0.951486},
        {3, 1, 2, 0, 0.937500, 0.951486}, {3, 2, 2, 0, 0.937500, 0.958457}, {3, 1, 0, 1, 0.937500, 0.955486},
        {3, 2, 0, 1, 0.937500, 0.954088}, {3, 1, 0, 2, 0.937500, 0.954088}, {3, 2, 0, 2, 0.937500, 0.955486},
        {3, 1, 1, 1, 0.913291, 0.951016}, {3, 2, 2, 2, 0.913290, 0.951016}, {3, 1, 1, 2, 0.906250, 0.925112},
        {3, 1, 2, 1, 0.906250, 0.920754}, {3, 2, 1, 1, 0.912307, 0.941841}, {3, 2, 2, 1, 0.906250, 0.925112},
        {3, 2, 1, 2, 0.906250, 0.920754}, {3, 1, 2, 2, 0.912307, 0.941841},
    };
}

inline std::vector<TripleRow> table3_rows() {
    return {
        {2, 1, 0, 0, 0.926777, 0.926777}, {2, 0, 1, 0, 0.968750, 0.968750}, {2, 0, 0, 1, 0.968750, 0.968750},
        {2, 0, 1, 1, 0.937842, 0.937842}, {2, 1, 1, 0, 0.896670, 0.896670}, {2, 1, 0, 1, 0.896670, 0.896670},
        {2, 1, 1, 1, 0.866172, 0.866173},
        {3, 1, 0, 0, 0.915578, 0.955342}, {3, 0, 1, 0, 0.968750, 0.977378}, {3, 0, 0, 1, 0.968750, 0.977378},
        {3, 2, 0, 0, 0.915577, 0.955342}, {3, 0, 2, 0, 0.968750, 0.977378}, {3, 0, 0, 2, 0.968750, 0.977378},
        {3, 0, 1, 1, 0.937500, 0.958457}, {3, 0, 2, 1, 0.937500, 0.951486}, {3, 0, 1, 2, 0.937500, 0.951486},
        {3, 0, 2, 2, 0.937500, 0.958457}, {3, 1, 1, 0, 0.884399, 0.933402}, {3, 2, 1, 0, 0.884399, 0.933402},
        {3, 1, 2, 0, 0.884399, 0.933402}, {3, 2, 2, 0, 0.884398, 0.933402}, {3, 1, 0, 1, 0.884399, 0.933402},
        {3, 2, 0, 1, 0.884399, 0.933402}, {3, 1, 0, 2, 0.884399, 0.933402}, {3, 2, 0, 2, 0.884399, 0.933402},
        {3, 1, 1, 1, 0.853247, 0.914745}, {3, 2, 2, 2, 0.853225, 0.914745}, {3, 1, 1, 2, 0.853209, 0.908438},
        {3, 1, 2, 1, 0.853210, 0.908438}, {3, 2, 1, 1, 0.853251, 0.914745}, {3, 2, 2, 1, 0.853210, 0.908438},
        {3, 2, 1, 2, 0.853209, 0.908438}, {3, 1, 2, 2, 0.853248, 0.914745},
    };
}

} // namespace detail

/**
 * Three single edges on the 4×4 torus: y on R(0,0), z on D(3,1) and x on
 * R(1,2), the last one walked against its stored direction, hence labelled
 * shift(-x). Classical values drop by 1/32 per non-trivial edge.
 */
inline std::vector<PublishedCell> table2_cells() {
    std::vector<PublishedCell> out;
    for (const auto& r : detail::table2_rows()) {
        PublishedCell cell;
        cell.table = "2";
        cell.id = detail::triple_id(r.n, r.x, r.y, r.z);
        cell.spec.d = r.n;
        if (r.x) cell.spec.edges.push_back({1, 2, Orientation::Right, Perm::shift(r.n, r.n - r.x)});
        if (r.y) cell.spec.edges.push_back({0, 0, Orientation::Right, Perm::shift(r.n, r.y)});
        if (r.z) cell.spec.edges.push_back({3, 1, Orientation::Down, Perm::shift(r.n, r.z)});
        cell.c = detail::fraction_of((r.x != 0) + (r.y != 0) + (r.z != 0), 32);
        cell.q_lower = r.lower;
        cell.q_upper = r.upper;
        out.push_back(std::move(cell));
    }
    return out;
}

/**
 * A loop of class x on the Down edges of row 0 of the 4×4 torus, plus single
 * edges y on R(0,0) and z on R(2,0). The loop costs 4 and each edge 1.
 */
inline std::vector<PublishedCell> table3_cells() {
    std::vector<PublishedCell> out;
    for (const auto& r : detail::table3_rows()) {
        PublishedCell cell;
        cell.table = "3";
        cell.id = detail::triple_id(r.n, r.x, r.y, r.z);
        cell.spec.d = r.n;
        cell.spec.loop_y = r.x;
        if (r.y) cell.spec.edges.push_back({0, 0, Orientation::Right, Perm::shift(r.n, r.y)});
        if (r.z) cell.spec.edges.push_back({2, 0, Orientation::Right, Perm::shift(r.n, r.z)});
        cell.c = detail::fraction_of((r.x != 0) * 4 + (r.y != 0) + (r.z != 0), 32);
        cell.q_lower = r.lower;
        cell.q_upper = r.upper;
        out.push_back(std::move(cell));
    }
    return out;
}

/// One wrapping loop on a k×k torus: beta_C = k, so C = (2k-1)/(2k).
inline std::vector<PublishedCell> torus_formula_cells() {
    std::vector<PublishedCell> out;
    for (int k = 2; k <= 4; ++k) {
        for (int d = 2; d <= 3; ++d) {
            for (char axis : {'x', 'y'}) {
                for (int cls = 1; cls < d; ++cls) {
                    PublishedCell cell;
                    cell.table = "torus";
                    cell.id = std::to_string(k) + "x" + std::to_string(k) + " d=" + std::to_string(d) + " loop " + axis +
                              "=" + std::to_string(cls);
                    cell.spec.rows = cell.spec.cols = k;
                    cell.spec.d = d;
                    (axis == 'x' ? cell.spec.loop_x : cell.spec.loop_y) = cls;
                    cell.c = Rational(2 * k - 1, 2 * k);
                    out.push_back(std::move(cell));
                }
            }
        }
    }
    return out;
}

// ---------------------------------------------------------------------------
// Running cells

struct ReproduceOptions {
    bool lower = true;             // see-saw on the loop table
    bool lower_single_edge = false; // see-saw on the single-edge tables as well
    double value_tol = 1e-4;       // exact and upper values
    double lower_tol = 1e-3;       // see-saw may fall this far below the published lower bound
    double lower_quorum = 0.8;     // share of n >= 3 lower cells per table that must meet it
    int threads = 0;               // across cells; 0 means thread_count()
    NpaOptions npa;
    SeesawOptions seesaw;
};

struct Check {
    std::string quantity; // "C", "C_analytic", "routes", "Q_exact", "Q_upper", "Q_lower", "sandwich"
    double computed = 0.0;
    std::optional<double> published;
    std::string status; // "pass", "fail" or "shortfall" (lower bound below the published one)
    std::string note;
};

struct CellResult {
    PublishedCell cell;
    std::vector<Check> checks;
    std::optional<ClassicalResult> classical;
    std::optional<SeesawResult> seesaw;
    std::string error;

    bool failed() const {
        if (!error.empty()) return true;
        for (const Check& c : checks)
            if (c.status == "fail") return true;
        return false;
    }
};

struct TableResult {
    std::string table;
    std::vector<CellResult> cells;
    int lower_met = 0;
    int lower_total = 0; // n >= 3 cells with a see-saw check

    bool lower_quorum_met(double quorum) const {
        return lower_total == 0 || lower_met >= quorum * lower_total - 1e-9;
    }
    int failed_cells() const {
        int n = 0;
        for (const CellResult& c : cells) n += c.failed();
        return n;
    }
};

namespace detail {

inline Check near_check(const std::string& q, double computed, double published, double tol) {
    return {q, computed, published, std::abs(computed - published) <= tol ? "pass" : "fail", {}};
}

inline CellResult run_cell(const PublishedCell& cell, const ReproduceOptions& opt) {
    CellResult res;
    res.cell = cell;
    try {
        const Labeling k = generate(cell.spec);

        // Classical: the transfer-matrix oracle and the decoder must agree exactly.
        const ClassicalResult oracle = classical_value_oracle(k);
        const ClassicalResult decoder = classical_value_decoder(k);
        res.classical = decoder;
        const bool agree = oracle.beta_c == decoder.beta_c && oracle.p_win == decoder.p_win;
        res.checks.push_back({"routes", static_cast<double>(decoder.beta_c), static_cast<double>(oracle.beta_c),
                              agree ? "pass" : "fail",
                              decoder.exact ? "decoder beta vs oracle beta" : "decoder beta vs oracle beta; decoder uncertified"});
        if (cell.c)
            res.checks.push_back({"C", decoder.p_win.to_double(), cell.c->to_double(),
                                  decoder.p_win == *cell.c ? "pass" : "fail", decoder.p_win.str()});
        if (cell.table == "1") {
            // Loops only: every loop edge sits on its own bad plaquette pair, so beta is the loop length sum.
            const int beta = (cell.spec.loop_x ? cell.spec.rows : 0) + (cell.spec.loop_y ? cell.spec.cols : 0);
            const Rational analytic = fraction_of(beta, k.num_edges());
            res.checks.push_back({"C_analytic", decoder.p_win.to_double(), analytic.to_double(),
                                  decoder.p_win == analytic ? "pass" : "fail", analytic.str()});
        }
        if (!cell.q_upper) return res;

        const BellInstance inst = to_bell_instance(k);
        const double c = decoder.p_win.to_double();
        const double upper = npa1_upper_bound(inst, opt.npa);
        std::optional<double> lower;
        if (k.d() == 2) {
            const double exact = xor_exact_value(inst, opt.npa.tol);
            res.checks.push_back(near_check("Q_exact", exact, *cell.q_upper, opt.value_tol));
            res.checks.push_back(near_check("Q_upper", upper, *cell.q_upper, opt.value_tol));
        } else {
            res.checks.push_back(near_check("Q_upper", upper, *cell.q_upper, opt.value_tol));
        }
        const bool want_lower = cell.table == "1" ? opt.lower : opt.lower_single_edge;
        if (want_lower) {
            SeesawOptions so = opt.seesaw;
            if (so.threads == 0) so.threads = 1; // cells already run in parallel
            res.seesaw = seesaw_lower_bound(inst, so);
            lower = res.seesaw->value;
            if (k.d() == 2) {
                res.checks.push_back(near_check("Q_lower", *lower, *cell.q_lower, opt.value_tol));
            } else {
                Check ch{"Q_lower", *lower, *cell.q_lower, *lower >= *cell.q_lower - opt.lower_tol ? "pass" : "shortfall", {}};
                if (ch.status == "shortfall") {
                    std::ostringstream os;
                    os << std::setprecision(6) << std::fixed << "restarts:";
                    for (const SeesawRun& run : res.seesaw->runs) os << ' ' << run.value;
                    ch.note = os.str();
                }
                res.checks.push_back(std::move(ch));
            }
        }
        const double lo = lower.value_or(c);
        const bool sandwich = c <= lo + 1e-9 && lo <= upper + 1e-6 && upper <= 1.0 + 1e-7;
        res.checks.push_back({"sandwich", lo, std::nullopt, sandwich ? "pass" : "fail", "C <= Q_lower <= Q_upper <= 1"});
    } catch (const std::exception& e) {
        res.error = e.what();
    }
    return res;
}

} // namespace detail

inline std::vector<PublishedCell> cells_for(const std::string& table) {
    if (table == "1") return table1_cells();
    if (table == "2") return table2_cells();
    if (table == "3") return table3_cells();
    if (table == "torus") return torus_formula_cells();
    throw InvalidArgument("unknown table '" + table + "' (expected 1, 2, 3 or torus)");
}

/// Runs the cells of one table in parallel; results come back in table order.
inline TableResult reproduce_table(const std::string& table, const ReproduceOptions& opt = {}) {
    const std::vector<PublishedCell> cells = cells_for(table);
    TableResult out;
    out.table = table;
    out.cells.resize(cells.size());
    parallel_for(static_cast<int>(cells.size()), opt.threads > 0 ? opt.threads : thread_count(),
                 [&](int i) { out.cells[i] = detail::run_cell(cells[i], opt); });
    for (const CellResult& c : out.cells) {
        for (const Check& ch : c.checks) {
            if (ch.quantity != "Q_lower" || c.cell.spec.d == 2) continue;
            ++out.lower_total;
            out.lower_met += ch.status == "pass";
        }
    }
    return out;
}

inline bool table_passed(const TableResult& t, const ReproduceOptions& opt) {
    return t.failed_cells() == 0 && t.lower_quorum_met(opt.lower_quorum);
}

// ---------------------------------------------------------------------------
// Output

inline Json to_json(const TableResult& t, const ReproduceOptions& opt) {
    Json cells = Json::array();
    for (const CellResult& c : t.cells) {
        Json checks = Json::array();
        for (const Check& ch : c.checks) {
            Json j = {{"quantity", ch.quantity}, {"computed", ch.computed}};
            j["published"] = ch.published ? Json(*ch.published) : Json(nullptr);
            j["delta"] = ch.published ? Json(std::abs(ch.computed - *ch.published)) : Json(nullptr);
            j["status"] = ch.status;
            if (!ch.note.empty()) j["note"] = ch.note;
            checks.push_back(std::move(j));
        }
        Json cj = {{"id", c.cell.id}};
        Json input = {{"lattice", {{"rows", c.cell.spec.rows}, {"cols", c.cell.spec.cols}, {"boundary", "torus"}}},
                      {"d", c.cell.spec.d}};
        try {
            input["game"] = serialize(generate(c.cell.spec));
        } catch (const Error&) {
        }
        cj["input"] = std::move(input);
        if (c.classical) cj["classical"] = {{"beta_c", c.classical->beta_c}, {"p_win", to_json(c.classical->p_win)}};
        if (c.seesaw) cj["seesaw"] = to_json(*c.seesaw, opt.seesaw);
        cj["checks"] = std::move(checks);
        cj["status"] = c.failed() ? "fail" : "pass";
        if (!c.error.empty()) cj["error"] = c.error;
        cells.push_back(std::move(cj));
    }
    return {{"table", t.table},
            {"cells", std::move(cells)},
            {"failed_cells", t.failed_cells()},
            {"lower_bounds", {{"met", t.lower_met}, {"total", t.lower_total}, {"quorum", opt.lower_quorum}}},
            {"status", table_passed(t, opt) ? "pass" : "fail"}};
}

inline Json reproduce_report(const std::vector<TableResult>& tables, const ReproduceOptions& opt) {
    Json ts = Json::array();
    bool ok = true;
    for (const TableResult& t : tables) {
        ts.push_back(to_json(t, opt));
        ok = ok && table_passed(t, opt);
    }
    return {{"schema", kReportSchema},
            {"kind", "reproduce"},
            {"tolerances",
             {{"sdp", to_json(opt.npa.tol)},
              {"value", opt.value_tol},
              {"lower", opt.lower_tol},
              {"lower_quorum", opt.lower_quorum}}},
            {"seesaw", {{"restarts", opt.seesaw.restarts}, {"iterations", opt.seesaw.iterations}, {"seed", opt.seesaw.seed}}},
            {"tables", std::move(ts)},
            {"status", ok ? "pass" : "fail"}};
}

/// Human-readable comparison: one line per check, then a per-table summary.
inline void print_table(std::ostream& os, const TableResult& t, const ReproduceOptions& opt) {
    os << "== table " << t.table << " ==\n";
    if (t.table == "1")
        os << "type a: 4x4 torus; type b: inferred 8x4 torus (x loop of length 8, y loop of length 4)\n";
    os << std::left << std::setw(24) << "cell" << std::setw(11) << "quantity" << std::right << std::setw(11) << "computed"
       << std::setw(11) << "published" << std::setw(11) << "|delta|"
       << "  status\n";
    for (const CellResult& c : t.cells) {
        if (!c.error.empty()) {
            os << std::left << std::setw(24) << c.cell.id << "error: " << c.error << std::right << '\n';
            continue;
        }
        for (const Check& ch : c.checks) {
            os << std::left << std::setw(24) << c.cell.id << std::setw(11) << ch.quantity << std::right << std::fixed
               << std::setprecision(6) << std::setw(11) << ch.computed;
            if (ch.published)
                os << std::setw(11) << *ch.published << std::setw(11) << std::setprecision(1) << std::scientific
                   << std::abs(ch.computed - *ch.published);
            else
                os << std::setw(11) << "-" << std::setw(11) << "-";
            os << std::defaultfloat << "  " << ch.status;
            if (!ch.note.empty()) os << "  (" << ch.note << ")";
            os << '\n';
        }
    }
    os << "table " << t.table << ": " << t.cells.size() - t.failed_cells() << "/" << t.cells.size() << " cells pass";
    if (t.lower_total)
        os << ", lower bounds met " << t.lower_met << "/" << t.lower_total << " (quorum "
           << static_cast<int>(opt.lower_quorum * 100) << "%)";
    os << " -> " << (table_passed(t, opt) ? "PASS" : "FAIL") << "\n\n";
}

} // namespace nlgame
