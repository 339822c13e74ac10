#pragma once

// Machine-readable reports, schema "nlgame.report/1" (docs/report_schema.md).

#include <chrono>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "nlgame/classical.hpp"
#include "nlgame/quantum.hpp"

namespace nlgame {

inline constexpr const char* kReportSchema = "nlgame.report/1";

using Json = nlohmann::ordered_json;

inline Json to_json(const Rational& r) { return {{"num", r.num()}, {"den", r.den()}, {"decimal", r.to_double()}}; }

inline Json to_json(const SdpTolerances& t) {
    return {{"feas", t.feas}, {"gap", t.gap}, {"psd", t.psd}, {"max_iter", t.max_iter}};
}

inline Json to_json(const DefectSignature& s) { return {{"cells", s.cells}, {"loops", s.loops}}; }

// ---------------------------------------------------------------------------
// Classical routes

struct RouteOutcome {
    std::string route; // "oracle", "decoder" or "tree_search"
    std::optional<ClassicalResult> result;
    std::string error; // set when the route declined or ran out of budget
};

struct ClassicalSummary {
    std::vector<RouteOutcome> routes;
    std::optional<ClassicalResult> best; // first exact result, in route order
    bool agree = true;                   // all exact results share beta_c
};

struct ClassicalRouteOptions {
    bool oracle = true;
    bool decoder = true;
    bool tree_search = true;
    OracleOptions oracle_opt;
    DecoderOptions decoder_opt;
    TreeSearchOptions tree_opt;
};

/// Runs every enabled route and records budget or family errors instead of throwing.
inline ClassicalSummary classical_routes(const Labeling& k, const ClassicalRouteOptions& opt = {}) {
    ClassicalSummary s;
    auto attempt = [&](const char* name, auto&& fn) {
        RouteOutcome o{name, std::nullopt, {}};
        try {
            o.result = fn();
        } catch (const Error& e) {
            o.error = e.what();
        }
        s.routes.push_back(std::move(o));
    };
    if (opt.oracle) attempt("oracle", [&] { return classical_value_oracle(k, opt.oracle_opt); });
    if (opt.decoder) {
        attempt("decoder", [&] {
            if (k.all_shifts()) return classical_value_decoder(k, opt.decoder_opt);
            return classical_value_decoder(normalize_family(k), opt.decoder_opt);
        });
    }
    if (opt.tree_search) attempt("tree_search", [&] { return classical_value_tree_search(k, opt.tree_opt); });
    for (const RouteOutcome& o : s.routes) {
        if (!o.result || !o.result->exact) continue;
        if (!s.best)
            s.best = o.result;
        else if (o.result->beta_c != s.best->beta_c)
            s.agree = false;
    }
    return s;
}

inline Json to_json(const ClassicalSummary& s) {
    Json routes = Json::array();
    for (const RouteOutcome& o : s.routes) {
        Json r = {{"route", o.route}};
        if (o.result) {
            r["beta_c"] = o.result->beta_c;
            r["p_win"] = to_json(o.result->p_win);
            r["exact"] = o.result->exact;
            r["method"] = o.result->method;
        } else {
            r["error"] = o.error;
        }
        routes.push_back(std::move(r));
    }
    Json j = {{"routes", std::move(routes)}, {"agree", s.agree}};
    if (s.best) {
        j["beta_c"] = s.best->beta_c;
        j["p_win"] = to_json(s.best->p_win);
    } else {
        j["beta_c"] = nullptr;
        j["p_win"] = nullptr;
    }
    return j;
}

// ---------------------------------------------------------------------------
// Quantum

inline Json to_json(const SeesawResult& r, const SeesawOptions& opt) {
    Json values = Json::array();
    Json monotone = Json::array();
    for (const SeesawRun& run : r.runs) {
        values.push_back(run.value);
        monotone.push_back(run.monotone);
    }
    const char* field = opt.field == SeesawField::Real      ? "real"
                        : opt.field == SeesawField::Complex ? "complex"
                                                            : "auto";
    return {{"dim", r.dim},          {"field", field},          {"restarts", opt.restarts},
            {"iterations", opt.iterations}, {"seed", opt.seed}, {"best_restart", r.best_restart},
            {"restart_values", std::move(values)}, {"monotone", std::move(monotone)}};
}

inline Json to_json(const QuantumBounds& qb, const QuantumOptions& opt, int d) {
    Json j;
    j["q_upper"] = opt.upper ? Json(qb.q_upper) : Json(nullptr);
    j["q_lower"] = opt.lower ? Json(qb.q_lower) : Json(nullptr);
    j["q_exact"] = qb.q_exact ? Json(*qb.q_exact) : Json(nullptr);
    j["npa"] = {{"level", 1}, {"nonnegative_cross_terms", opt.npa.nonnegative_cross_terms}};
    if (opt.lower) j["seesaw"] = to_json(qb.seesaw, opt.seesaw);
    j["sandwich_ok"] = !(opt.upper && opt.lower) || qb.q_lower <= qb.q_upper + 1e-6;
    if (d == 2 && qb.q_exact && opt.upper) j["exact_matches_upper"] = std::abs(*qb.q_exact - qb.q_upper) <= 1e-5;
    return j;
}

// ---------------------------------------------------------------------------
// Game report

inline Json input_json(const Labeling& k, const std::string& source) {
    const Lattice& lat = k.lattice();
    return {{"source", source},
            {"lattice", {{"rows", lat.rows()}, {"cols", lat.cols()}, {"boundary", to_string(lat.boundary())}}},
            {"d", k.d()},
            {"non_identity_edges", k.non_identity_count()}};
}

/// Report header shared by every command: schema, input echo, signature and classification.
inline Json game_report(const Labeling& k, const std::string& source) {
    Json j = {{"schema", kReportSchema}, {"input", input_json(k, source)}};
    j["signature"] = k.all_shifts() ? to_json(signature(k)) : Json(nullptr);
    j["classification"] = to_string(classify_consistency(k));
    return j;
}

/// Wall-clock seconds of fn(), which is run once.
template <class Fn>
double timed(Fn&& fn) {
    const auto t0 = std::chrono::steady_clock::now();
    fn();
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

} // namespace nlgame
