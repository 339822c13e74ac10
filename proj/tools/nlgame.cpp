// nlgame: classify, solve and reproduce lattice non-locality games.

#include <CLI11.hpp>

#include <fstream>
#include <iomanip>
#include <iostream>
#include <iterator>
#include <sstream>

#include "nlgame/io.hpp"
#include "nlgame/reproduce.hpp"

using namespace nlgame;

namespace {

std::string read_source(const std::string& path) {
    if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
    std::ifstream in(path);
    if (!in) throw Error("cannot open " + path);
    return {std::istreambuf_iterator<char>(in), {}};
}

Labeling load(const std::string& path) {
    try {
        return parse_game(read_source(path));
    } catch (const ParseError& e) {
        throw Error(path + ": " + e.what());
    }
}

void emit_json(const Json& j, const std::string& path) {
    if (path.empty()) return;
    if (path == "-") {
        std::cout << j.dump(2) << '\n';
        return;
    }
    std::ofstream out(path);
    if (!out) throw Error("cannot write " + path);
    out << j.dump(2) << '\n';
}

std::string fixed6(double v) {
    std::ostringstream os;
    os << std::fixed << std::setprecision(6) << v;
    return os.str();
}

int cmd_classify(const std::vector<std::string>& files, const std::string& json_path, std::size_t orbit_states) {
    const Labeling k1 = load(files[0]);
    Json report = game_report(k1, files[0]);
    std::cout << files[0] << ": " << report["classification"].get<std::string>();
    if (k1.all_shifts()) std::cout << ", " << signature(k1).dump();
    std::cout << '\n';
    if (files.size() == 2) {
        const Labeling k2 = load(files[1]);
        Json eq;
        eq["other"] = game_report(k2, files[1]);
        if (!k1.same_lattice(k2) || k1.d() != k2.d()) {
            eq["method"] = "shape";
            eq["equivalent"] = false;
            std::cout << "not equivalent: different lattice or number of answers\n";
        } else if (k1.all_shifts() && k2.all_shifts()) {
            const Equivalence e = is_equivalent(k1, k2);
            eq["method"] = "signature";
            eq["equivalent"] = e.equivalent;
            if (e.equivalent) {
                eq["unit"] = e.unit;
                std::cout << "equivalent: classes of " << files[0] << " = " << e.unit << " x classes of " << files[1] << '\n';
            } else {
                eq["differing_cell"] = e.cell ? Json(*e.cell) : Json(nullptr);
                eq["differing_loop"] = e.loop ? Json(*e.loop) : Json(nullptr);
                std::cout << "not equivalent: ";
                if (e.cell) std::cout << "cell " << *e.cell << " differs\n";
                else if (e.loop) std::cout << "loop " << *e.loop << " differs\n";
                else std::cout << "signatures differ\n";
            }
        } else {
            const OrbitVerdict v = orbit_oracle(k1, k2, orbit_states);
            const char* name = v == OrbitVerdict::Equivalent     ? "equivalent"
                               : v == OrbitVerdict::Inequivalent ? "inequivalent"
                                                                 : "inconclusive";
            eq["method"] = "orbit";
            eq["verdict"] = name;
            std::cout << "orbit search: " << name << '\n';
        }
        report["equivalence"] = std::move(eq);
    }
    emit_json(report, json_path);
    return 0;
}

int cmd_classical(const std::string& file, const std::string& json_path, const ClassicalRouteOptions& opt) {
    const Labeling k = load(file);
    Json report = game_report(k, file);
    ClassicalSummary s;
    const double secs = timed([&] { s = classical_routes(k, opt); });
    for (const RouteOutcome& o : s.routes) {
        std::cout << std::left << std::setw(12) << o.route << std::right;
        if (o.result)
            std::cout << "beta_C = " << o.result->beta_c << "  p = " << o.result->p_win << " = "
                      << fixed6(o.result->p_win.to_double()) << (o.result->exact ? "" : "  (not certified)") << '\n';
        else
            std::cout << "skipped: " << o.error << '\n';
    }
    std::cout << (s.agree ? "routes agree" : "ROUTES DISAGREE") << '\n';
    report["classical"] = to_json(s);
    report["timing"] = {{"classical_seconds", secs}};
    emit_json(report, json_path);
    return s.agree && s.best ? 0 : 1;
}

int cmd_quantum(const std::string& file, const std::string& json_path, QuantumOptions opt) {
    const Labeling k = load(file);
    const BellInstance inst = to_bell_instance(k);
    if (inst.d != 2) opt.exact_xor = false;
    Json report = game_report(k, file);
    QuantumBounds qb;
    const double secs = timed([&] { qb = quantum_bounds(inst, opt); });
    if (qb.q_exact) std::cout << "Q (exact, d=2)  " << fixed6(*qb.q_exact) << '\n';
    if (opt.upper) std::cout << "Q_upper (NPA 1) " << fixed6(qb.q_upper) << '\n';
    if (opt.lower) {
        std::cout << "Q_lower (seesaw) " << fixed6(qb.q_lower) << "  dim " << qb.seesaw.dim << ", best restart "
                  << qb.seesaw.best_restart << " of " << qb.seesaw.runs.size() << '\n';
        for (const SeesawRun& r : qb.seesaw.runs)
            if (!r.monotone) std::cout << "warning: a see-saw restart lost value between steps\n";
    }
    report["quantum"] = to_json(qb, opt, inst.d);
    report["tolerances"] = to_json(opt.npa.tol);
    report["timing"] = {{"quantum_seconds", secs}};
    emit_json(report, json_path);
    const bool ok = !(opt.upper && opt.lower) || qb.q_lower <= qb.q_upper + 1e-6;
    return ok ? 0 : 1;
}

int cmd_reproduce(const std::string& which, const std::string& json_path, const ReproduceOptions& opt) {
    std::vector<std::string> tables = {which};
    if (which == "all") tables = {"torus", "1", "2", "3"};
    std::vector<TableResult> results;
    bool ok = true;
    for (const std::string& t : tables) {
        TableResult r;
        const double secs = timed([&] { r = reproduce_table(t, opt); });
        print_table(std::cout, r, opt);
        std::cerr << "table " << t << ": " << fixed6(secs) << " s\n";
        ok = ok && table_passed(r, opt);
        results.push_back(std::move(r));
    }
    emit_json(reproduce_report(results, opt), json_path);
    std::cout << (ok ? "all tables pass" : "some cells failed") << '\n';
    return ok ? 0 : 1;
}

Boundary boundary_from(const std::string& s) {
    if (auto b = parse_boundary(s)) return *b;
    throw InvalidArgument("unknown boundary '" + s + "'");
}

EdgeLabel edge_from(const std::string& s, int d) {
    std::istringstream in(s);
    EdgeLabel e;
    std::string o, tok, extra;
    if (!(in >> e.r >> e.c >> o >> tok) || (in >> extra) || (o != "R" && o != "D"))
        throw InvalidArgument("--edge expects 'r c R|D token', got '" + s + "'");
    e.orient = o == "R" ? Orientation::Right : Orientation::Down;
    e.label = parse_perm_token(tok, d);
    return e;
}

SeesawField field_from(const std::string& s) {
    if (s == "auto") return SeesawField::Auto;
    if (s == "real") return SeesawField::Real;
    if (s == "complex") return SeesawField::Complex;
    throw InvalidArgument("--field must be auto, real or complex");
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Lattice non-locality games: classification, classical and quantum values, table reproduction"};
    app.require_subcommand(1);
    std::string json_path;

    // classify
    auto* classify = app.add_subcommand("classify", "Signature and good/ugly/bad class; with two files, equivalence");
    std::vector<std::string> classify_files;
    std::size_t orbit_states = 2'000'000;
    classify->add_option("files", classify_files, "One or two game files ('-' for stdin)")->required()->expected(1, 2);
    classify->add_option("--orbit-states", orbit_states, "State budget of the orbit search for non-shift labels");
    classify->add_option("--json", json_path, "Write the JSON report to this path ('-' for stdout)");

    // classical
    auto* classical = app.add_subcommand("classical", "Classical value by every route, with an agreement check");
    std::string classical_file;
    ClassicalRouteOptions routes;
    routes.tree_opt.max_trees = 200'000; // a 4x4 torus has far more; the route then reports its budget
    bool no_oracle = false, no_decoder = false, no_tree = false;
    classical->add_option("file", classical_file, "Game file ('-' for stdin)")->required();
    classical->add_flag("--no-oracle", no_oracle, "Skip the transfer-matrix oracle");
    classical->add_flag("--no-decoder", no_decoder, "Skip the matching/Steiner decoder");
    classical->add_flag("--no-tree", no_tree, "Skip the spanning-tree search");
    classical->add_option("--max-trees", routes.tree_opt.max_trees, "Spanning-tree enumeration budget");
    classical->add_option("--json", json_path, "Write the JSON report to this path ('-' for stdout)");

    // quantum
    auto* quantum = app.add_subcommand("quantum", "Quantum bounds: NPA level 1, see-saw, exact XOR value for d=2");
    std::string quantum_file;
    QuantumOptions qopt;
    bool upper = false, lower = false, exact = false, nonneg = false;
    std::string field = "auto";
    quantum->add_option("file", quantum_file, "Game file ('-' for stdin)")->required();
    quantum->add_flag("--upper", upper, "NPA level-1 upper bound");
    quantum->add_flag("--lower", lower, "See-saw lower bound");
    quantum->add_flag("--exact-xor", exact, "Exact value via the correlation SDP (d=2)");
    quantum->add_flag("--nonneg", nonneg, "Add Gamma(A,B) >= 0 to the NPA moment matrix");
    quantum->add_option("--dim", qopt.seesaw.dim, "See-saw local dimension (default d)");
    quantum->add_option("--restarts", qopt.seesaw.restarts, "See-saw restarts")->check(CLI::PositiveNumber);
    quantum->add_option("--iterations", qopt.seesaw.iterations, "See-saw iterations per restart")->check(CLI::PositiveNumber);
    quantum->add_option("--seed", qopt.seesaw.seed, "See-saw seed");
    quantum->add_option("--field", field, "See-saw amplitudes: auto, real or complex");
    quantum->add_option("--json", json_path, "Write the JSON report to this path ('-' for stdout)");

    // reproduce
    auto* reproduce = app.add_subcommand("reproduce", "Recompute the published tables and compare cell by cell");
    std::string table;
    ReproduceOptions ropt;
    bool no_lower = false;
    reproduce->add_option("table", table, "1, 2, 3, torus or all")
        ->required()
        ->check(CLI::IsMember({"1", "2", "3", "torus", "all"}));
    reproduce->add_flag("--no-lower", no_lower, "Skip the see-saw on the loop table");
    reproduce->add_flag("--lower-single-edge", ropt.lower_single_edge, "Also run the see-saw on tables 2 and 3");
    reproduce->add_option("--restarts", ropt.seesaw.restarts, "See-saw restarts")->check(CLI::PositiveNumber);
    reproduce->add_option("--iterations", ropt.seesaw.iterations, "See-saw iterations per restart")
        ->check(CLI::PositiveNumber);
    reproduce->add_option("--seed", ropt.seesaw.seed, "See-saw seed");
    reproduce->add_option("--threads", ropt.threads, "Cells solved concurrently (default NLGAME_THREADS or all cores)");
    reproduce->add_option("--json", json_path, "Write the JSON report to this path ('-' for stdout)");

    // gen
    auto* gen = app.add_subcommand("gen", "Write a generated game file");
    GenerateSpec spec;
    std::string boundary = "torus", out_path;
    std::vector<std::string> edges;
    gen->add_option("--rows", spec.rows, "Lattice rows")->check(CLI::Range(2, 1000));
    gen->add_option("--cols", spec.cols, "Lattice columns")->check(CLI::Range(2, 1000));
    gen->add_option("--boundary", boundary, "plane, cylx, cyly or torus");
    gen->add_option("-d,--d", spec.d, "Number of answers")->check(CLI::Range(2, 64));
    gen->add_option("--loop-x", spec.loop_x, "Class of the loop on the Right edges of one column");
    gen->add_option("--loop-y", spec.loop_y, "Class of the loop on the Down edges of one row");
    gen->add_option("--loop-x-at", spec.loop_x_at, "Column of the x loop");
    gen->add_option("--loop-y-at", spec.loop_y_at, "Row of the y loop");
    gen->add_option("--edge", edges, "Extra edge 'r c R|D token', repeatable");
    gen->add_option("-o,--output", out_path, "Output file (default stdout)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*classify) return cmd_classify(classify_files, json_path, orbit_states);
        if (*classical) {
            routes.oracle = !no_oracle;
            routes.decoder = !no_decoder;
            routes.tree_search = !no_tree;
            return cmd_classical(classical_file, json_path, routes);
        }
        if (*quantum) {
            if (!upper && !lower && !exact) upper = lower = exact = true;
            qopt.upper = upper;
            qopt.lower = lower;
            qopt.exact_xor = exact;
            qopt.npa.nonnegative_cross_terms = nonneg;
            qopt.seesaw.field = field_from(field);
            return cmd_quantum(quantum_file, json_path, qopt);
        }
        if (*reproduce) {
            ropt.lower = !no_lower;
            return cmd_reproduce(table, json_path, ropt);
        }
        if (*gen) {
            spec.boundary = boundary_from(boundary);
            for (const std::string& e : edges) spec.edges.push_back(edge_from(e, spec.d));
            const std::string text = serialize(generate(spec));
            if (out_path.empty()) {
                std::cout << text;
            } else {
                std::ofstream out(out_path);
                if (!out) throw Error("cannot write " + out_path);
                out << text;
            }
            return 0;
        }
    } catch (const std::exception& e) {
        std::cerr << "nlgame: " << e.what() << '\n';
        return 2;
    }
    return 0;
}
