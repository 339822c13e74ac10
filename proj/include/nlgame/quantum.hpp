#pragma once

/**
 * @file quantum.hpp
 * @brief Quantum bounds for lattice games: the exact XOR value for d = 2,
 *        the level-1 NPA upper bound and a see-saw lower bound.
 *
 * Questions are drawn uniformly over edges; the two parties are the colour
 * classes of the checkerboard colouring, vertex (r, c) going to Alice when
 * r + c is even. Everything is real: states, measurements and moment
 * matrices. The winning probability itself is the objective throughout, so
 * C, Q_lower and Q_upper are directly comparable.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdint>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <type_traits>
#include <vector>

#include "nlgame/game.hpp"
#include "nlgame/parallel.hpp"
#include "nlgame/sdp.hpp"

namespace nlgame {

struct BellEdge {
    int alice; // index into BellInstance::alice
    int bob;   // index into BellInstance::bob
    Perm pi;   // Alice answers a, Bob wins the edge with b = pi(a)
    int lattice_edge;
};

struct BellInstance {
    int d = 2;
    std::vector<int> alice; // lattice vertex ids
    std::vector<int> bob;
    std::vector<BellEdge> edges;

    double weight() const { return 1.0 / static_cast<double>(edges.size()); }
};

/// Orient every constraint Alice -> Bob; an edge stored Bob -> Alice contributes its inverse label.
inline BellInstance to_bell_instance(const Labeling& k) {
    const Lattice& lat = k.lattice();
    if (!lat.bipartite())
        throw InvalidArgument("lattice " + std::to_string(lat.rows()) + "x" + std::to_string(lat.cols()) + " " +
                              to_string(lat.boundary()) + " is not bipartite");
    BellInstance inst;
    inst.d = k.d();
    std::vector<int> slot(lat.num_vertices());
    for (int v = 0; v < lat.num_vertices(); ++v) {
        auto& side = lat.color(v) == 0 ? inst.alice : inst.bob;
        slot[v] = static_cast<int>(side.size());
        side.push_back(v);
    }
    for (const Edge& e : lat.edges()) {
        if (lat.color(e.tail) == 0)
            inst.edges.push_back({slot[e.tail], slot[e.head], k[e.id], e.id});
        else
            inst.edges.push_back({slot[e.head], slot[e.tail], k[e.id].inverse(), e.id});
    }
    return inst;
}

// ---------------------------------------------------------------------------
// d = 2

/**
 * Tsirelson: with +-1 observables the value is 1/2 + (1/2|E|) sum_e s_e <u_x, v_y>
 * maximized over unit vectors, i.e. a Gram matrix with unit diagonal.
 */
inline double xor_exact_value(const BellInstance& inst, const SdpTolerances& tol = {}) {
    if (inst.d != 2) throw InvalidArgument("xor_exact_value needs d = 2, got d = " + std::to_string(inst.d));
    const int na = static_cast<int>(inst.alice.size());
    const int n = na + static_cast<int>(inst.bob.size());
    SdpProblem p;
    p.blocks = {n};
    const double w = inst.weight();
    for (const BellEdge& e : inst.edges) {
        const double s = e.pi.is_identity() ? 1.0 : -1.0;
        p.objective.add(0, e.alice, na + e.bob, s * w / 4.0);
    }
    for (int i = 0; i < n; ++i) p.constraints.push_back({SparseSymmetric().add(0, i, i, 1.0), 1.0});
    const SdpSolution s = solve(p, tol);
    if (s.status != SdpStatus::Optimal) throw Error("xor_exact_value: solver status " + to_string(s.status));
    return 0.5 + s.objective;
}

// ---------------------------------------------------------------------------
// NPA level 1

inline constexpr double kNonnegativeGap = 1e-6;

struct NpaOptions {
    /// Also impose Gamma(M_x^a, M_y^b) >= 0 for every Alice/Bob pair. Off by default.
    bool nonnegative_cross_terms = false;
    SdpTolerances tol;
};

/**
 * Moment matrix over {1} and all d projectors of every question, rows
 * ordered 1, Alice (question-major), Bob. Constraints: Gamma_11 = 1,
 * completeness, orthogonality within a question and Gamma(M,M) = Gamma(1,M).
 */
inline double npa1_upper_bound(const BellInstance& inst, const NpaOptions& opt = {}) {
    const int d = inst.d;
    const int na = static_cast<int>(inst.alice.size());
    const int nq = na + static_cast<int>(inst.bob.size());
    const int n = 1 + nq * d;
    auto op = [d](int q, int a) { return 1 + q * d + a; };

    SdpProblem p;
    p.blocks = {n};
    const double w = inst.weight();
    for (const BellEdge& e : inst.edges)
        for (int a = 0; a < d; ++a) p.objective.add(0, op(e.alice, a), op(na + e.bob, e.pi(a)), w / 2.0);

    p.constraints.push_back({SparseSymmetric().add(0, 0, 0, 1.0), 1.0});
    for (int q = 0; q < nq; ++q) {
        SdpConstraint complete;
        for (int a = 0; a < d; ++a) complete.a.add(0, 0, op(q, a), 0.5);
        complete.b = 1.0;
        p.constraints.push_back(std::move(complete));
        for (int a = 0; a < d; ++a) {
            p.constraints.push_back({SparseSymmetric().add(0, op(q, a), op(q, a), 1.0).add(0, 0, op(q, a), -0.5), 0.0});
            for (int a2 = a + 1; a2 < d; ++a2)
                p.constraints.push_back({SparseSymmetric().add(0, op(q, a), op(q, a2), 0.5), 0.0});
        }
    }
    if (opt.nonnegative_cross_terms) {
        // Gamma(x a, y b) - s = 0 with a scalar slack block s >= 0 per entry.
        for (int x = 0; x < na; ++x) {
            for (int y = na; y < nq; ++y) {
                for (int a = 0; a < d; ++a) {
                    for (int b = 0; b < d; ++b) {
                        const int blk = static_cast<int>(p.blocks.size());
                        p.blocks.push_back(1);
                        p.constraints.push_back(
                            {SparseSymmetric().add(0, op(x, a), op(y, b), 0.5).add(blk, 0, 0, -1.0), 0.0});
                    }
                }
            }
        }
    }
    SdpTolerances tol = opt.tol;
    // With the slacks the optimum is far from strictly complementary and the
    // Schur system goes singular near 1e-7 relative gap.
    if (opt.nonnegative_cross_terms) tol.gap = std::max(tol.gap, kNonnegativeGap);
    const SdpSolution s = solve(p, tol);
    if (s.status != SdpStatus::Optimal) throw Error("npa1_upper_bound: solver status " + to_string(s.status));
    return s.objective;
}

// ---------------------------------------------------------------------------
// See-saw

/// Auto uses real amplitudes for d = 2, where real strategies are optimal
/// and converge much faster, and complex ones otherwise.
enum class SeesawField { Auto, Real, Complex };

struct SeesawOptions {
    int dim = 0;         // local dimension; 0 means d
    SeesawField field = SeesawField::Auto;
    int restarts = 20;
    int iterations = 20; // each iteration is state, Alice, Bob
    std::uint64_t seed = 1;
    int threads = 0;     // 0 means thread_count()
    SdpTolerances tol;
};

struct SeesawRun {
    double value = 0.0;
    std::vector<double> trace; // value after every step, three per iteration
    bool monotone = true;      // no step lowered the value by more than 1e-7
};

struct SeesawResult {
    double value = 0.0;
    int best_restart = 0;
    int dim = 0;
    std::vector<SeesawRun> runs;
};

namespace detail {

template <class T>
using Mat = Eigen::Matrix<T, Eigen::Dynamic, Eigen::Dynamic>;
template <class T>
using Measurement = std::vector<Mat<T>>; // one operator per outcome

template <class T>
T gaussian(std::normal_distribution<double>& g, std::mt19937_64& rng) {
    if constexpr (std::is_same_v<T, double>) {
        return g(rng);
    } else {
        const double re = g(rng);
        return {re, g(rng)};
    }
}

/// Haar-random unitary basis, its vectors dealt round-robin to the d outcomes.
template <class T>
Measurement<T> random_projective(int dim, int d, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Mat<T> m(dim, dim);
    for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) m(i, j) = gaussian<T>(g, rng);
    Eigen::HouseholderQR<Mat<T>> qr(m);
    Mat<T> q = qr.householderQ();
    const Mat<T> r = qr.matrixQR();
    for (int j = 0; j < dim; ++j)
        if (std::abs(r(j, j)) > 0) q.col(j) *= r(j, j) / std::abs(r(j, j));
    Measurement<T> out(d, Mat<T>::Zero(dim, dim));
    for (int j = 0; j < dim; ++j) out[j % d] += q.col(j) * q.col(j).adjoint();
    return out;
}

template <class T>
Mat<T> bell_operator(const BellInstance& inst, const std::vector<Measurement<T>>& ma,
                     const std::vector<Measurement<T>>& mb, int dim) {
    Mat<T> s = Mat<T>::Zero(dim * dim, dim * dim);
    for (const BellEdge& e : inst.edges) {
        for (int a = 0; a < inst.d; ++a) {
            const Mat<T>& pa = ma[e.alice][a];
            const Mat<T>& pb = mb[e.bob][e.pi(a)];
            for (int i = 0; i < dim; ++i)
                for (int k = 0; k < dim; ++k)
                    if (pa(i, k) != T(0)) s.block(i * dim, k * dim, dim, dim) += pa(i, k) * pb;
        }
    }
    return inst.weight() * s;
}

inline PovmStep povm_step(const std::vector<Eigen::MatrixXd>& h, const SdpTolerances& tol) {
    return max_povm_step(h, tol);
}
inline HermitianPovmStep povm_step(const std::vector<Eigen::MatrixXcd>& h, const SdpTolerances& tol) {
    return max_povm_step_hermitian(h, tol);
}

template <class T>
SeesawRun seesaw_run(const BellInstance& inst, int dim, int iterations, std::mt19937_64& rng,
                            const SdpTolerances& tol) {
    const int d = inst.d;
    const double w = inst.weight();
    std::vector<Measurement<T>> ma(inst.alice.size()), mb(inst.bob.size());
    for (auto& m : ma) m = random_projective<T>(dim, d, rng);
    for (auto& m : mb) m = random_projective<T>(dim, d, rng);

    std::vector<std::vector<int>> edges_of_a(ma.size()), edges_of_b(mb.size());
    for (int i = 0; i < static_cast<int>(inst.edges.size()); ++i) {
        edges_of_a[inst.edges[i].alice].push_back(i);
        edges_of_b[inst.edges[i].bob].push_back(i);
    }

    SeesawRun run;
    auto record = [&](double v) {
        if (!run.trace.empty() && v < run.trace.back() - 1e-7) run.monotone = false;
        run.trace.push_back(v);
        run.value = std::max(run.value, v);
    };
    auto hermitian = [](std::vector<Mat<T>>& h) {
        for (auto& m : h) m = 0.5 * (m + m.adjoint()).eval();
    };

    for (int it = 0; it < iterations; ++it) {
        // State: top eigenvector of the Bell operator.
        Eigen::SelfAdjointEigenSolver<Mat<T>> es(bell_operator(inst, ma, mb, dim));
        const Eigen::Matrix<T, Eigen::Dynamic, 1> psi = es.eigenvectors().col(dim * dim - 1);
        record(es.eigenvalues()(dim * dim - 1));
        // psi_(i*dim + j) with i on Alice's side.
        Mat<T> big_psi(dim, dim);
        for (int i = 0; i < dim; ++i)
            for (int j = 0; j < dim; ++j) big_psi(i, j) = psi(i * dim + j);

        // <psi| A (x) B |psi> = tr(A Psi B^T Psi^+) = tr(B (Psi^+ A Psi)^T).
        double total = 0.0;
        for (std::size_t x = 0; x < ma.size(); ++x) {
            if (edges_of_a[x].empty()) continue;
            std::vector<Mat<T>> h(d, Mat<T>::Zero(dim, dim));
            for (int ei : edges_of_a[x]) {
                const BellEdge& e = inst.edges[ei];
                for (int a = 0; a < d; ++a)
                    h[a] += w * big_psi * mb[e.bob][e.pi(a)].transpose() * big_psi.adjoint();
            }
            hermitian(h);
            const auto step = povm_step(h, tol);
            ma[x] = step.povm;
            total += step.value;
        }
        record(total);

        total = 0.0;
        for (std::size_t y = 0; y < mb.size(); ++y) {
            if (edges_of_b[y].empty()) continue;
            std::vector<Mat<T>> h(d, Mat<T>::Zero(dim, dim));
            for (int ei : edges_of_b[y]) {
                const BellEdge& e = inst.edges[ei];
                for (int a = 0; a < d; ++a)
                    h[e.pi(a)] += w * (big_psi.adjoint() * ma[e.alice][a] * big_psi).transpose();
            }
            hermitian(h);
            const auto step = povm_step(h, tol);
            mb[y] = step.povm;
            total += step.value;
        }
        record(total);
    }
    return run;
}

} // namespace detail

/**
 * Best of independent see-saw restarts. Restart r draws from its own
 * generator seeded by (seed, r), so the result does not depend on the
 * number of worker threads.
 */
inline SeesawResult seesaw_lower_bound(const BellInstance& inst, const SeesawOptions& opt = {}) {
    const int dim = opt.dim > 0 ? opt.dim : inst.d;
    if (dim < 2) throw InvalidArgument("see-saw needs local dimension >= 2");
    if (opt.restarts < 1 || opt.iterations < 1) throw InvalidArgument("see-saw needs restarts >= 1 and iterations >= 1");
    SeesawResult res;
    res.dim = dim;
    res.runs.resize(opt.restarts);
    const bool complex = opt.field == SeesawField::Complex || (opt.field == SeesawField::Auto && inst.d > 2);
    const int threads = opt.threads > 0 ? opt.threads : thread_count();
    parallel_for(opt.restarts, threads, [&](int r) {
        std::seed_seq seq{static_cast<std::uint32_t>(opt.seed), static_cast<std::uint32_t>(opt.seed >> 32),
                          static_cast<std::uint32_t>(r)};
        std::mt19937_64 rng(seq);
        res.runs[r] = complex ? detail::seesaw_run<std::complex<double>>(inst, dim, opt.iterations, rng, opt.tol)
                              : detail::seesaw_run<double>(inst, dim, opt.iterations, rng, opt.tol);
    });
    for (int r = 0; r < opt.restarts; ++r) {
        if (r == 0 || res.runs[r].value > res.value) {
            res.value = res.runs[r].value;
            res.best_restart = r;
        }
    }
    return res;
}

// ---------------------------------------------------------------------------
// Reports

struct QuantumBounds {
    double q_lower = 0.0;
    double q_upper = 1.0;
    std::optional<double> q_exact;
    SeesawResult seesaw;
};

struct QuantumOptions {
    bool upper = true;
    bool lower = true;
    bool exact_xor = true; // only used when d = 2
    NpaOptions npa;
    SeesawOptions seesaw;
};

inline QuantumBounds quantum_bounds(const BellInstance& inst, const QuantumOptions& opt = {}) {
    QuantumBounds qb;
    if (opt.upper) qb.q_upper = npa1_upper_bound(inst, opt.npa);
    if (opt.exact_xor && inst.d == 2) qb.q_exact = xor_exact_value(inst, opt.npa.tol);
    if (opt.lower) {
        qb.seesaw = seesaw_lower_bound(inst, opt.seesaw);
        qb.q_lower = qb.seesaw.value;
    }
    return qb;
}

/// C, Q_upper and Q_lower of one configuration; a quantity left unset is skipped by reports.
struct GameValues {
    std::optional<double> classical;
    std::optional<double> q_upper;
    std::optional<double> q_lower;
};

struct AdditivityRow {
    std::string quantity; // "C", "Q_upper" or "Q_lower"
    double deficit_first;
    double deficit_second;
    double deficit_combined;
    double residual; // (1-F_combined) - (1-F_first) - (1-F_second)
};

/**
 * Deficits 1 - F and the additivity residual for every quantity known in all
 * three configurations. Keys default to the loop pairs (1,0), (0,1), (1,1).
 */
inline std::vector<AdditivityRow> additivity_report(const std::map<std::string, GameValues>& results,
                                                    const std::string& first = "1,0",
                                                    const std::string& second = "0,1",
                                                    const std::string& combined = "1,1") {
    for (const std::string& key : {first, second, combined})
        if (!results.count(key)) throw InvalidArgument("additivity report: missing configuration " + key);
    const GameValues& f1 = results.at(first);
    const GameValues& f2 = results.at(second);
    const GameValues& f12 = results.at(combined);
    std::vector<AdditivityRow> rows;
    auto add = [&](const char* name, std::optional<double> GameValues::*field) {
        if (!(f1.*field) || !(f2.*field) || !(f12.*field)) return;
        AdditivityRow r{name, 1 - *(f1.*field), 1 - *(f2.*field), 1 - *(f12.*field), 0.0};
        r.residual = r.deficit_combined - r.deficit_first - r.deficit_second;
        rows.push_back(r);
    };
    add("C", &GameValues::classical);
    add("Q_upper", &GameValues::q_upper);
    add("Q_lower", &GameValues::q_lower);
    return rows;
}

} // namespace nlgame
