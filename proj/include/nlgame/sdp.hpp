#pragma once

/**
 * @file sdp.hpp
 * @brief Small dense primal-dual interior-point SDP solver.
 *
 * Problems are stated over a direct sum of real symmetric blocks:
 *
 *     max (or min)  <C, X>
 *     s.t.          <A_i, X> = b_i,   X = diag(X_1, ..., X_k) PSD
 *
 * A block of size 1 is an ordinary nonnegative scalar, which is how linear
 * inequalities enter. Internally everything is a maximization with dual
 *
 *     min b'y   s.t.   Z = sum_i y_i A_i - C  PSD.
 *
 * The iteration is the HKM direction with a Mehrotra predictor-corrector,
 * started from scaled identities (infeasible start). The Schur complement
 * is assembled entry by entry from the sparse constraint data, which is what
 * keeps moment-matrix relaxations cheap.
 */

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <optional>
#include <ostream>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

#include "nlgame/error.hpp"

namespace nlgame {

struct SdpEntry {
    int block;
    int row;
    int col; // row <= col; an off-diagonal entry stands for both (row,col) and (col,row)
    double value;
};

/// Block-diagonal symmetric matrix given by its upper-triangle entries.
struct SparseSymmetric {
    std::vector<SdpEntry> entries;

    SparseSymmetric& add(int block, int i, int j, double v) {
        if (i > j) std::swap(i, j);
        entries.push_back({block, i, j, v});
        return *this;
    }

    static SparseSymmetric from_dense(int block, const Eigen::MatrixXd& m) {
        SparseSymmetric s;
        for (Eigen::Index j = 0; j < m.cols(); ++j)
            for (Eigen::Index i = 0; i <= j; ++i)
                if (m(i, j) != 0.0) s.add(block, static_cast<int>(i), static_cast<int>(j), m(i, j));
        return s;
    }
};

enum class SdpSense { Maximize, Minimize };
enum class SdpStatus { Optimal, MaxIter, Infeasible };

inline std::string to_string(SdpStatus s) {
    switch (s) {
    case SdpStatus::Optimal: return "optimal";
    case SdpStatus::MaxIter: return "max_iter";
    case SdpStatus::Infeasible: return "infeasible";
    }
    return "?";
}

struct SdpConstraint {
    SparseSymmetric a;
    double b = 0.0;
};

struct SdpProblem {
    std::vector<int> blocks;
    SparseSymmetric objective;
    std::vector<SdpConstraint> constraints;
    SdpSense sense = SdpSense::Maximize;

    /// Single-block problem from dense matrices.
    static SdpProblem dense(const Eigen::MatrixXd& c, const std::vector<std::pair<Eigen::MatrixXd, double>>& cons,
                            SdpSense sense = SdpSense::Maximize) {
        SdpProblem p;
        p.blocks = {static_cast<int>(c.rows())};
        p.objective = SparseSymmetric::from_dense(0, c);
        for (const auto& [a, b] : cons) p.constraints.push_back({SparseSymmetric::from_dense(0, a), b});
        p.sense = sense;
        return p;
    }
};

struct SdpTolerances {
    double feas = 1e-8; // relative primal and dual infeasibility
    double gap = 1e-8;  // relative duality gap and complementarity
    double psd = 1e-9;
    int max_iter = 120;
    std::ostream* trace = nullptr; // one line per iteration when set
};

struct SdpSolution {
    SdpStatus status = SdpStatus::MaxIter;
    std::vector<Eigen::MatrixXd> x;
    std::vector<Eigen::MatrixXd> z; // dual slack for the problem as posed
    Eigen::VectorXd y;              // dual multipliers for the problem as posed
    double objective = 0.0;
    double dual_objective = 0.0;
    double primal_residual = 0.0; // max_i |<A_i,X> - b_i|
    double dual_residual = 0.0;   // ||sum y_i A_i - C - Z||_F, relative to 1 + ||C||_F
    double gap = 0.0;             // |primal - dual| relative to 1 + |primal| + |dual|
    double complementarity = 0.0; // ||X Z||_F
    int iterations = 0;
};

namespace detail {

using Blocks = std::vector<Eigen::MatrixXd>;

inline double entry_weight(const SdpEntry& e) { return e.row == e.col ? 1.0 : 2.0; }

inline double inner(const SparseSymmetric& a, const Blocks& x) {
    double s = 0.0;
    for (const SdpEntry& e : a.entries) s += entry_weight(e) * e.value * x[e.block](e.row, e.col);
    return s;
}

/// <A, G> for a possibly non-symmetric G.
inline double inner_general(const SparseSymmetric& a, const Blocks& g) {
    double s = 0.0;
    for (const SdpEntry& e : a.entries) {
        const auto& m = g[e.block];
        s += e.row == e.col ? e.value * m(e.row, e.row) : e.value * (m(e.row, e.col) + m(e.col, e.row));
    }
    return s;
}

inline void accumulate(Blocks& out, const SparseSymmetric& a, double scale) {
    for (const SdpEntry& e : a.entries) {
        out[e.block](e.row, e.col) += scale * e.value;
        if (e.row != e.col) out[e.block](e.col, e.row) += scale * e.value;
    }
}

inline double dot(const Blocks& a, const Blocks& b) {
    double s = 0.0;
    for (std::size_t k = 0; k < a.size(); ++k) s += a[k].cwiseProduct(b[k]).sum();
    return s;
}

inline double norm(const Blocks& a) { return std::sqrt(dot(a, a)); }

inline double product_norm(const Blocks& x, const Blocks& z) {
    double s = 0.0;
    for (std::size_t k = 0; k < x.size(); ++k) s += (x[k] * z[k]).squaredNorm();
    return std::sqrt(s);
}

inline double norm(const SparseSymmetric& a) {
    double s = 0.0;
    for (const SdpEntry& e : a.entries) s += entry_weight(e) * e.value * e.value;
    return std::sqrt(s);
}

inline Blocks zeros(const std::vector<int>& sizes) {
    Blocks b;
    for (int n : sizes) b.push_back(Eigen::MatrixXd::Zero(n, n));
    return b;
}

inline Blocks scaled_identity(const std::vector<int>& sizes, double s) {
    Blocks b;
    for (int n : sizes) b.push_back(s * Eigen::MatrixXd::Identity(n, n));
    return b;
}

/// Largest alpha with X + alpha*dX PSD, for positive definite X (infinity if unbounded).
inline double max_step(const Blocks& x, const Blocks& dx) {
    double alpha = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x.size(); ++k) {
        if (x[k].rows() == 1) {
            if (dx[k](0, 0) < 0) alpha = std::min(alpha, -x[k](0, 0) / dx[k](0, 0));
            continue;
        }
        Eigen::LLT<Eigen::MatrixXd> llt(x[k]);
        Eigen::MatrixXd w = llt.matrixL().solve(dx[k]);
        w = llt.matrixL().solve(w.transpose()).transpose();
        const double lmin = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(w, Eigen::EigenvaluesOnly).eigenvalues()(0);
        if (lmin < 0) alpha = std::min(alpha, -1.0 / lmin);
    }
    return alpha;
}

/// Smallest eigenvalue of X^1/2 Z X^1/2 over all blocks (-inf if X is not positive definite).
inline double centrality(const Blocks& x, const Blocks& z) {
    double lmin = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < x.size(); ++k) {
        Eigen::LLT<Eigen::MatrixXd> llt(x[k]);
        if (llt.info() != Eigen::Success) return -std::numeric_limits<double>::infinity();
        const Eigen::MatrixXd l = llt.matrixL();
        const Eigen::MatrixXd w = l.transpose() * z[k] * l;
        lmin = std::min(lmin, Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(w, Eigen::EigenvaluesOnly).eigenvalues()(0));
    }
    return lmin;
}

inline constexpr double kNeighbourhood = 1e-2;
inline constexpr int kCentringBudget = 10;

inline void symmetrize(Blocks& b) {
    for (auto& m : b) m = 0.5 * (m + m.transpose()).eval();
}

inline void validate(const SdpProblem& p) {
    if (p.blocks.empty()) throw InvalidArgument("sdp: no blocks");
    for (int n : p.blocks)
        if (n <= 0) throw InvalidArgument("sdp: block sizes must be positive");
    if (p.constraints.empty()) throw InvalidArgument("sdp: constraint list is empty");
    const int nb = static_cast<int>(p.blocks.size());
    auto check = [&](const SparseSymmetric& a) {
        for (const SdpEntry& e : a.entries) {
            if (e.block < 0 || e.block >= nb) throw InvalidArgument("sdp: entry block out of range");
            const int n = p.blocks[e.block];
            if (e.row < 0 || e.col < 0 || e.row >= n || e.col >= n || e.row > e.col)
                throw InvalidArgument("sdp: entry index out of range");
            if (!std::isfinite(e.value)) throw InvalidArgument("sdp: non-finite data");
        }
    };
    check(p.objective);
    for (const auto& c : p.constraints) {
        check(c.a);
        if (!std::isfinite(c.b)) throw InvalidArgument("sdp: non-finite right-hand side");
    }
}

/// Merge duplicate positions so every constraint has one entry per matrix slot.
inline SparseSymmetric compact(const SparseSymmetric& a) {
    std::vector<SdpEntry> v = a.entries;
    std::sort(v.begin(), v.end(), [](const SdpEntry& l, const SdpEntry& r) {
        return std::tie(l.block, l.row, l.col) < std::tie(r.block, r.row, r.col);
    });
    SparseSymmetric out;
    for (const SdpEntry& e : v) {
        if (!out.entries.empty()) {
            SdpEntry& last = out.entries.back();
            if (last.block == e.block && last.row == e.row && last.col == e.col) {
                last.value += e.value;
                continue;
            }
        }
        out.entries.push_back(e);
    }
    std::erase_if(out.entries, [](const SdpEntry& e) { return e.value == 0.0; });
    return out;
}

/**
 * Schur complement M_ij = tr(A_i X A_j Z^-1). Sparse pairs use the identity
 * tr(E_pq X E_rs W) = X_qr W_sp summed over both orientations of each entry;
 * constraints with many entries go through a dense product instead.
 */
inline Eigen::MatrixXd schur(const std::vector<SparseSymmetric>& a, const std::vector<int>& sizes, const Blocks& x,
                             const Blocks& zi) {
    const int m = static_cast<int>(a.size());
    Eigen::MatrixXd mm = Eigen::MatrixXd::Zero(m, m);
    std::vector<bool> dense(m);
    for (int j = 0; j < m; ++j) {
        int nmax = 0;
        for (const SdpEntry& e : a[j].entries) nmax = std::max(nmax, sizes[e.block]);
        dense[j] = static_cast<int>(a[j].entries.size()) > 2 * nmax;
    }
    // Entries grouped by block so sparse pairs only meet inside a block.
    for (int j = 0; j < m; ++j) {
        if (dense[j]) {
            Blocks aj = zeros(sizes);
            accumulate(aj, a[j], 1.0);
            Blocks g(sizes.size());
            for (std::size_t k = 0; k < sizes.size(); ++k)
                g[k] = aj[k].isZero(0.0) ? Eigen::MatrixXd::Zero(sizes[k], sizes[k]) : (x[k] * aj[k] * zi[k]).eval();
            for (int i = 0; i < m; ++i) mm(i, j) = inner_general(a[i], g);
            continue;
        }
        for (int i = 0; i <= j; ++i) {
            if (dense[i]) continue;
            double s = 0.0;
            for (const SdpEntry& p : a[i].entries) {
                for (const SdpEntry& r : a[j].entries) {
                    if (p.block != r.block) continue;
                    const auto& xb = x[p.block];
                    const auto& wb = zi[p.block];
                    const int pa[2] = {p.row, p.col};
                    const int ra[2] = {r.row, r.col};
                    const int np = p.row == p.col ? 1 : 2;
                    const int nr = r.row == r.col ? 1 : 2;
                    double t = 0.0;
                    for (int u = 0; u < np; ++u) {
                        const int pp = pa[u], qq = pa[1 - u];
                        for (int w = 0; w < nr; ++w) {
                            const int rr = ra[w], ss = ra[1 - w];
                            t += xb(qq, rr) * wb(ss, pp);
                        }
                    }
                    s += p.value * r.value * t;
                }
            }
            mm(i, j) = s;
            mm(j, i) = s;
        }
    }
    for (int i = 0; i < m; ++i)
        if (dense[i])
            for (int j = 0; j < m; ++j)
                if (!dense[j]) mm(i, j) = mm(j, i);
    return 0.5 * (mm + mm.transpose());
}

} // namespace detail

/**
 * Solve an SDP to the given tolerances. Deterministic: a fixed problem always
 * follows the same iterate sequence. Infeasibility is reported through the
 * status when the iterates diverge, not thrown.
 */
inline SdpSolution solve(const SdpProblem& problem, const SdpTolerances& tol = {}) {
    using namespace detail;
    validate(problem);
    const std::vector<int>& sizes = problem.blocks;
    const int m = static_cast<int>(problem.constraints.size());
    const double sgn = problem.sense == SdpSense::Maximize ? 1.0 : -1.0;

    std::vector<SparseSymmetric> a;
    Eigen::VectorXd b(m);
    for (int i = 0; i < m; ++i) {
        a.push_back(compact(problem.constraints[i].a));
        b(i) = problem.constraints[i].b;
    }
    Blocks c = zeros(sizes);
    accumulate(c, problem.objective, sgn);

    int ntot = 0;
    for (int n : sizes) ntot += n;

    auto apply_a = [&](const Blocks& x) {
        Eigen::VectorXd v(m);
        for (int i = 0; i < m; ++i) v(i) = inner(a[i], x);
        return v;
    };
    auto apply_at = [&](const Eigen::VectorXd& y) {
        Blocks out = zeros(sizes);
        for (int i = 0; i < m; ++i) accumulate(out, a[i], y(i));
        return out;
    };

    // Starting point in the spirit of SDPT3: large enough to dominate the data.
    const double nb = b.norm();
    const double nc = norm(c);
    double xi = std::max(10.0, std::sqrt(double(ntot)));
    double eta = std::max({10.0, std::sqrt(double(ntot)), nc});
    for (int i = 0; i < m; ++i) {
        const double na = norm(a[i]);
        xi = std::max(xi, double(ntot) * (1.0 + std::abs(b(i))) / (1.0 + na));
        eta = std::max(eta, na);
    }
    Blocks x = scaled_identity(sizes, xi);
    Blocks z = scaled_identity(sizes, eta);
    Eigen::VectorXd y = Eigen::VectorXd::Zero(m);

    SdpSolution sol;
    auto finish = [&](SdpStatus st, int it) {
        sol.status = st;
        sol.iterations = it;
        sol.x = x;
        sol.z = z;
        sol.y = sgn * y;
        sol.objective = sgn * dot(c, x);
        sol.dual_objective = sgn * b.dot(y);
        sol.primal_residual = (apply_a(x) - b).cwiseAbs().maxCoeff();
        Blocks rd = apply_at(y);
        for (std::size_t k = 0; k < sizes.size(); ++k) rd[k] -= c[k] + z[k];
        sol.dual_residual = norm(rd) / (1.0 + nc);
        sol.gap = std::abs(sol.objective - sol.dual_objective) /
                  (1.0 + std::abs(sol.objective) + std::abs(sol.dual_objective));
        sol.complementarity = product_norm(x, z);
        return sol;
    };

    // First iterate that met the residual and gap tests, kept in case the
    // centring steps below never reach the complementarity test.
    struct Snapshot {
        Blocks x, z;
        Eigen::VectorXd y;
        int iter;
    };
    std::optional<Snapshot> accurate;
    for (int iter = 0; iter < tol.max_iter; ++iter) {
        bool center = false;
        Blocks zi(sizes.size());
        for (std::size_t k = 0; k < sizes.size(); ++k) {
            Eigen::LLT<Eigen::MatrixXd> llt(z[k]);
            if (llt.info() != Eigen::Success) return finish(SdpStatus::MaxIter, iter);
            zi[k] = llt.solve(Eigen::MatrixXd::Identity(sizes[k], sizes[k]));
        }
        const Eigen::VectorXd rp = b - apply_a(x);
        Blocks rd = apply_at(y);
        for (std::size_t k = 0; k < sizes.size(); ++k) rd[k] -= c[k] + z[k];

        const double pobj = dot(c, x);
        const double dobj = b.dot(y);
        const double mu = dot(x, z) / ntot;
        const double relp = rp.norm() / (1.0 + nb);
        const double reld = norm(rd) / (1.0 + nc);
        const double scale = 1.0 + std::abs(pobj) + std::abs(dobj);
        const double relgap = std::abs(pobj - dobj) / scale;

        if (tol.trace) {
            *tol.trace << std::setw(3) << iter << std::scientific << std::setprecision(3) << "  pobj " << sgn * pobj
                       << "  dobj " << sgn * dobj << "  relp " << relp << "  reld " << reld << "  mu " << mu
                       << "  xz " << product_norm(x, z) << '\n'
                       << std::defaultfloat;
        }
        if (relp <= tol.feas && reld <= tol.feas && relgap <= tol.gap && mu * ntot / scale <= tol.gap) {
            if (product_norm(x, z) / scale <= tol.gap) return finish(SdpStatus::Optimal, iter);
            if (!accurate) accurate = Snapshot{x, z, y, iter};
        }
        if (accurate) {
            // Accurate but off-centre: X Z is then far larger than <X,Z>, so
            // spend a few pure centring steps at the current mu. Degenerate
            // problems (no strictly complementary pair) may never get there;
            // they fall back to the accurate iterate and report its
            // complementarity as is.
            if (iter - accurate->iter >= kCentringBudget) {
                x = std::move(accurate->x);
                z = std::move(accurate->z);
                y = std::move(accurate->y);
                return finish(SdpStatus::Optimal, iter);
            }
            center = true;
        }
        if (norm(x) > 1e12 || y.norm() > 1e12) return finish(SdpStatus::Infeasible, iter);

        Eigen::MatrixXd mm = schur(a, sizes, x, zi);
        Eigen::LLT<Eigen::MatrixXd> mchol(mm);
        Eigen::LDLT<Eigen::MatrixXd> mldlt;
        const bool use_llt = mchol.info() == Eigen::Success;
        if (!use_llt) mldlt.compute(mm);
        auto msolve = [&](const Eigen::VectorXd& r) -> Eigen::VectorXd {
            return use_llt ? Eigen::VectorXd(mchol.solve(r)) : Eigen::VectorXd(mldlt.solve(r));
        };

        Blocks xrdzi(sizes.size());
        for (std::size_t k = 0; k < sizes.size(); ++k) xrdzi[k] = x[k] * rd[k] * zi[k];

        // g is the complementarity target in dX = g - X dZ Z^-1.
        auto direction = [&](const Blocks& g, Blocks& dx, Eigen::VectorXd& dy, Blocks& dz) {
            Blocks t(sizes.size());
            for (std::size_t k = 0; k < sizes.size(); ++k) t[k] = g[k] - xrdzi[k];
            Eigen::VectorXd rhs(m);
            for (int i = 0; i < m; ++i) rhs(i) = inner_general(a[i], t);
            dy = msolve(rhs - rp);
            dz = apply_at(dy);
            for (std::size_t k = 0; k < sizes.size(); ++k) dz[k] += rd[k];
            dx.resize(sizes.size());
            for (std::size_t k = 0; k < sizes.size(); ++k) dx[k] = g[k] - x[k] * dz[k] * zi[k];
            symmetrize(dx);
        };

        Blocks g(sizes.size());
        Blocks dx, dz;
        Eigen::VectorXd dy;
        double ap = 1.0, ad = 1.0;
        if (center) {
            for (std::size_t k = 0; k < sizes.size(); ++k) g[k] = mu * zi[k] - x[k];
            direction(g, dx, dy, dz);
        } else {
            for (std::size_t k = 0; k < sizes.size(); ++k) g[k] = -x[k];
            Blocks dxa, dza;
            Eigen::VectorXd dya;
            direction(g, dxa, dya, dza);
            ap = std::min(1.0, max_step(x, dxa));
            ad = std::min(1.0, max_step(z, dza));
            Blocks xa = x, za = z;
            for (std::size_t k = 0; k < sizes.size(); ++k) {
                xa[k] += ap * dxa[k];
                za[k] += ad * dza[k];
            }
            const double mu_aff = dot(xa, za) / ntot;
            const double sigma = std::clamp(std::pow(mu_aff / mu, 3.0), 0.0, 1.0);
            for (std::size_t k = 0; k < sizes.size(); ++k)
                g[k] = sigma * mu * zi[k] - x[k] - dxa[k] * dza[k] * zi[k];
            direction(g, dx, dy, dz);
        }

        const double gamma = 0.9 + 0.09 * std::min(ap, ad);
        double sp = std::min(1.0, gamma * max_step(x, dx));
        double sd = std::min(1.0, gamma * max_step(z, dz));
        // Stay in a wide neighbourhood of the central path: every eigenvalue
        // of X^1/2 Z X^1/2 keeps a fixed fraction of the new average.
        Blocks xn, zn;
        for (int back = 0;; ++back) {
            xn = x;
            zn = z;
            for (std::size_t k = 0; k < sizes.size(); ++k) {
                xn[k] += sp * dx[k];
                zn[k] += sd * dz[k];
            }
            symmetrize(xn);
            symmetrize(zn);
            if (back == 30 || centrality(xn, zn) >= kNeighbourhood * dot(xn, zn) / ntot) break;
            sp *= 0.8;
            sd *= 0.8;
        }
        x = std::move(xn);
        z = std::move(zn);
        y += sd * dy;
    }
    return finish(SdpStatus::MaxIter, tol.max_iter);
}

// ---------------------------------------------------------------------------
// POVM step

struct PovmStep {
    std::vector<Eigen::MatrixXd> povm;
    double value = 0.0;      // sum_a <H_a, M_a>
    double dual_value = 0.0; // min Tr(Y) s.t. Y >= H_a
    Eigen::MatrixXd y;       // dual certificate
    SdpStatus status = SdpStatus::MaxIter;
};

/**
 * max sum_a <H_a, M_a> over POVMs {M_a}. The dual certificate Y is read off
 * the multipliers of sum_a M_a = I and checked for Y >= H_a.
 */
inline PovmStep max_povm_step(const std::vector<Eigen::MatrixXd>& h, const SdpTolerances& tol = {}) {
    if (h.empty()) throw InvalidArgument("max_povm_step: no outcome operators");
    const int n = static_cast<int>(h[0].rows());
    const int d = static_cast<int>(h.size());
    for (const auto& m : h) {
        if (m.rows() != n || m.cols() != n) throw InvalidArgument("max_povm_step: operators differ in size");
        if ((m - m.transpose()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + m.cwiseAbs().maxCoeff()))
            throw InvalidArgument("max_povm_step: operators must be symmetric");
    }

    SdpProblem p;
    p.blocks.assign(d, n);
    for (int k = 0; k < d; ++k) {
        const Eigen::MatrixXd sym = 0.5 * (h[k] + h[k].transpose());
        for (const SdpEntry& e : SparseSymmetric::from_dense(k, sym).entries) p.objective.entries.push_back(e);
    }
    for (int i = 0; i < n; ++i) {
        for (int j = i; j < n; ++j) {
            SdpConstraint c;
            for (int k = 0; k < d; ++k) c.a.add(k, i, j, 1.0);
            c.b = i == j ? 1.0 : 0.0;
            p.constraints.push_back(std::move(c));
        }
    }
    const SdpSolution s = solve(p, tol);
    if (s.status != SdpStatus::Optimal)
        throw Error("max_povm_step: solver finished with status " + to_string(s.status));

    PovmStep out;
    out.povm = s.x;
    out.value = s.objective;
    out.status = s.status;
    out.y = Eigen::MatrixXd::Zero(n, n);
    int idx = 0;
    for (int i = 0; i < n; ++i)
        for (int j = i; j < n; ++j, ++idx) out.y(i, j) = out.y(j, i) = s.y(idx);
    out.dual_value = out.y.trace();
    return out;
}

struct HermitianPovmStep {
    std::vector<Eigen::MatrixXcd> povm;
    double value = 0.0;   // sum_a Re tr(H_a M_a)
    Eigen::MatrixXcd y;   // dual certificate, Y >= H_a
    SdpStatus status = SdpStatus::MaxIter;
};

/**
 * max_povm_step for Hermitian H_a, through the real embedding
 * H = R + iI -> [[R, -I], [I, R]]. The embedded optimum is averaged with its
 * image under the complex structure, which keeps it feasible and optimal, and
 * then read back as a complex POVM.
 */
inline HermitianPovmStep max_povm_step_hermitian(const std::vector<Eigen::MatrixXcd>& h, const SdpTolerances& tol = {}) {
    if (h.empty()) throw InvalidArgument("max_povm_step_hermitian: no outcome operators");
    const int n = static_cast<int>(h[0].rows());
    std::vector<Eigen::MatrixXd> real(h.size());
    for (std::size_t k = 0; k < h.size(); ++k) {
        const Eigen::MatrixXcd& m = h[k];
        if (m.rows() != n || m.cols() != n) throw InvalidArgument("max_povm_step_hermitian: operators differ in size");
        if ((m - m.adjoint()).cwiseAbs().maxCoeff() > 1e-10 * (1.0 + m.cwiseAbs().maxCoeff()))
            throw InvalidArgument("max_povm_step_hermitian: operators must be Hermitian");
        const Eigen::MatrixXcd sym = 0.5 * (m + m.adjoint());
        Eigen::MatrixXd e(2 * n, 2 * n);
        e << sym.real(), -sym.imag(), sym.imag(), sym.real();
        real[k] = 0.5 * e;
    }
    const PovmStep s = max_povm_step(real, tol);
    auto fold = [n](const Eigen::MatrixXd& m) -> Eigen::MatrixXcd {
        const Eigen::MatrixXd re = 0.5 * (m.topLeftCorner(n, n) + m.bottomRightCorner(n, n));
        const Eigen::MatrixXd im = 0.5 * (m.bottomLeftCorner(n, n) - m.topRightCorner(n, n));
        Eigen::MatrixXcd out(n, n);
        out.real() = re;
        out.imag() = im;
        return out;
    };
    HermitianPovmStep out;
    for (const auto& m : s.povm) out.povm.push_back(fold(m));
    out.value = s.value;
    out.y = 2.0 * fold(s.y);
    out.status = s.status;
    return out;
}

} // namespace nlgame
