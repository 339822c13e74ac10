#include <gtest/gtest.h>

#include <Eigen/Dense>

#include <cmath>
#include <random>
#include <sstream>

#include "nlgame/sdp.hpp"

using namespace nlgame;

namespace {

Eigen::MatrixXd random_symmetric(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = g(rng);
    return 0.5 * (m + m.transpose());
}

Eigen::MatrixXd random_pd(int n, std::mt19937_64& rng) {
    Eigen::MatrixXd g = random_symmetric(n, rng);
    return g * g.transpose() + 0.5 * Eigen::MatrixXd::Identity(n, n);
}

Eigen::MatrixXd random_orthogonal(int n, std::mt19937_64& rng) {
    return Eigen::HouseholderQR<Eigen::MatrixXd>(random_symmetric(n, rng) + Eigen::MatrixXd::Identity(n, n) * 0.1)
        .householderQ();
}

double min_eig(const Eigen::MatrixXd& m) {
    return Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(m, Eigen::EigenvaluesOnly).eigenvalues()(0);
}

Eigen::MatrixXd psd_projection(const Eigen::MatrixXd& v) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(v);
    Eigen::VectorXd l = es.eigenvalues().cwiseMax(0.0);
    return es.eigenvectors() * l.asDiagonal() * es.eigenvectors().transpose();
}

/// Alternating-direction augmented Lagrangian on the dual (first-order, projection based).
/// Solves max <C,X> s.t. <A_i,X> = b_i, X PSD.
double admm_reference(const Eigen::MatrixXd& c, const std::vector<Eigen::MatrixXd>& a, const Eigen::VectorXd& b) {
    const int n = static_cast<int>(c.rows());
    const int m = static_cast<int>(a.size());
    // min <-C,X> form
    const Eigen::MatrixXd cm = -c;
    Eigen::MatrixXd aat(m, m);
    for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j) aat(i, j) = a[i].cwiseProduct(a[j]).sum();
    const Eigen::LLT<Eigen::MatrixXd> chol(aat);
    auto op = [&](const Eigen::MatrixXd& x) {
        Eigen::VectorXd v(m);
        for (int i = 0; i < m; ++i) v(i) = a[i].cwiseProduct(x).sum();
        return v;
    };
    auto adj = [&](const Eigen::VectorXd& y) {
        Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
        for (int i = 0; i < m; ++i) s += y(i) * a[i];
        return s;
    };
    Eigen::MatrixXd x = Eigen::MatrixXd::Identity(n, n);
    Eigen::MatrixXd s = Eigen::MatrixXd::Zero(n, n);
    double mu = 1.0;
    for (int it = 0; it < 200000; ++it) {
        const Eigen::VectorXd y = -chol.solve(mu * (op(x) - b) + op(s - cm));
        const Eigen::MatrixXd v = cm - adj(y) - mu * x;
        s = psd_projection(v);
        x = (s - v) / mu;
        const double pres = (op(x) - b).norm();
        const double dres = (cm - adj(y) - s).norm();
        if (pres < 1e-10 && dres < 1e-10) break;
        if (it % 50 == 0) mu = pres > 10 * dres ? mu / 1.5 : (dres > 10 * pres ? mu * 1.5 : mu);
    }
    return c.cwiseProduct(x).sum();
}

} // namespace

TEST(Sdp, DiagonalDecoupled) {
    Eigen::MatrixXd c = Eigen::Vector2d(1, -1).asDiagonal();
    Eigen::MatrixXd e11 = Eigen::MatrixXd::Zero(2, 2), e22 = Eigen::MatrixXd::Zero(2, 2);
    e11(0, 0) = 1;
    e22(1, 1) = 1;
    const SdpSolution s = solve(SdpProblem::dense(c, {{e11, 1.0}, {e22, 1.0}}));
    ASSERT_EQ(s.status, SdpStatus::Optimal);
    EXPECT_NEAR(s.objective, 0.0, 1e-8);
    EXPECT_NEAR(s.x[0](0, 0), 1.0, 1e-8);
    EXPECT_NEAR(s.x[0](1, 1), 1.0, 1e-8);
}

TEST(Sdp, ChshMomentMatrix) {
    // Rows: 1, A0, A1, B0, B1 as +-1 observables; one of the four edges is anti-correlated.
    // p_win = 1/2 + (1/8) sum_e s_e <A B>, so the solver sees only the correlator part.
    Eigen::MatrixXd c = Eigen::MatrixXd::Zero(5, 5);
    const int pairs[4][2] = {{1, 3}, {1, 4}, {2, 3}, {2, 4}};
    const double sign[4] = {1, 1, 1, -1};
    for (int e = 0; e < 4; ++e) c(pairs[e][0], pairs[e][1]) = c(pairs[e][1], pairs[e][0]) = sign[e] / 16.0;
    std::vector<std::pair<Eigen::MatrixXd, double>> cons;
    for (int i = 0; i < 5; ++i) {
        Eigen::MatrixXd a = Eigen::MatrixXd::Zero(5, 5);
        a(i, i) = 1;
        cons.push_back({a, 1.0});
    }
    const SdpSolution s = solve(SdpProblem::dense(c, cons));
    ASSERT_EQ(s.status, SdpStatus::Optimal);
    EXPECT_NEAR(0.5 + s.objective, 0.853553, 1e-6);
    EXPECT_NEAR(0.5 + s.objective, (2 + std::sqrt(2.0)) / 4, 1e-8);
}

TEST(Sdp, MinimizeMatchesNegatedMaximize) {
    std::mt19937_64 rng(5);
    Eigen::MatrixXd c = random_symmetric(4, rng);
    std::vector<std::pair<Eigen::MatrixXd, double>> cons = {{Eigen::MatrixXd::Identity(4, 4), 1.0}};
    const SdpSolution mx = solve(SdpProblem::dense(c, cons));
    const SdpSolution mn = solve(SdpProblem::dense(c, cons, SdpSense::Minimize));
    ASSERT_EQ(mx.status, SdpStatus::Optimal);
    ASSERT_EQ(mn.status, SdpStatus::Optimal);
    const Eigen::VectorXd ev = Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd>(c).eigenvalues();
    EXPECT_NEAR(mx.objective, ev(3), 1e-7);
    EXPECT_NEAR(mn.objective, ev(0), 1e-7);
    EXPECT_NEAR(mn.dual_objective, ev(0), 1e-7);
}

TEST(Sdp, ScalarBlocksActAsLinearProgram) {
    // max x1 + 2 x2 s.t. x1 + x2 + x3 = 1, x >= 0, as three 1x1 blocks.
    SdpProblem p;
    p.blocks = {1, 1, 1};
    p.objective.add(0, 0, 0, 1.0).add(1, 0, 0, 2.0);
    SdpConstraint c;
    c.a.add(0, 0, 0, 1).add(1, 0, 0, 1).add(2, 0, 0, 1);
    c.b = 1;
    p.constraints.push_back(c);
    const SdpSolution s = solve(p);
    ASSERT_EQ(s.status, SdpStatus::Optimal);
    EXPECT_NEAR(s.objective, 2.0, 1e-8);
    EXPECT_NEAR(s.x[1](0, 0), 1.0, 1e-7);
}

TEST(Sdp, InfeasibleDetected) {
    // X_11 = -1 has no PSD solution.
    Eigen::MatrixXd e11 = Eigen::MatrixXd::Zero(2, 2);
    e11(0, 0) = 1;
    const SdpSolution s = solve(SdpProblem::dense(Eigen::MatrixXd::Zero(2, 2), {{e11, -1.0}}));
    EXPECT_NE(s.status, SdpStatus::Optimal);
}

TEST(Sdp, RejectsBadInput) {
    SdpProblem p;
    p.blocks = {2};
    EXPECT_THROW(solve(p), InvalidArgument);
    p.constraints.push_back({SparseSymmetric().add(0, 0, 2, 1.0), 1.0});
    EXPECT_THROW(solve(p), InvalidArgument);
    p.constraints[0] = {SparseSymmetric().add(0, 0, 0, std::nan("")), 1.0};
    EXPECT_THROW(solve(p), InvalidArgument);
}

TEST(Sdp, DeterministicTrace) {
    std::mt19937_64 rng(3);
    Eigen::MatrixXd c = random_symmetric(3, rng);
    std::ostringstream t1, t2;
    SdpTolerances tol;
    tol.trace = &t1;
    solve(SdpProblem::dense(c, {{Eigen::MatrixXd::Identity(3, 3), 2.0}}), tol);
    tol.trace = &t2;
    solve(SdpProblem::dense(c, {{Eigen::MatrixXd::Identity(3, 3), 2.0}}), tol);
    EXPECT_FALSE(t1.str().empty());
    EXPECT_EQ(t1.str(), t2.str());
}

namespace {

struct RandomSdp {
    Eigen::MatrixXd c;
    std::vector<Eigen::MatrixXd> a;
    Eigen::VectorXd b;
    SdpProblem problem() const {
        std::vector<std::pair<Eigen::MatrixXd, double>> cons;
        for (std::size_t i = 0; i < a.size(); ++i) cons.push_back({a[i], b(i)});
        return SdpProblem::dense(c, cons);
    }
};

/// Strictly feasible on both sides, so the optimum is attained with no gap.
RandomSdp random_sdp(int n, int m, std::mt19937_64& rng) {
    RandomSdp r;
    const Eigen::MatrixXd x0 = random_pd(n, rng);
    const Eigen::MatrixXd z0 = random_pd(n, rng);
    std::normal_distribution<double> g;
    Eigen::VectorXd y0(m);
    r.b.resize(m);
    r.c = -z0;
    for (int i = 0; i < m; ++i) {
        r.a.push_back(random_symmetric(n, rng));
        r.b(i) = r.a[i].cwiseProduct(x0).sum();
        y0(i) = g(rng);
        r.c += y0(i) * r.a[i];
    }
    return r;
}

} // namespace

TEST(SdpProperty, MatchesFirstOrderReference) {
    std::mt19937_64 rng(11);
    for (int trial = 0; trial < 12; ++trial) {
        const int n = 2 + trial % 4;
        const int m = 1 + trial % 5;
        const RandomSdp r = random_sdp(n, m, rng);
        const SdpSolution s = solve(r.problem());
        ASSERT_EQ(s.status, SdpStatus::Optimal) << "trial " << trial;
        EXPECT_NEAR(s.objective, admm_reference(r.c, r.a, r.b), 1e-6) << "trial " << trial;
    }
}

TEST(SdpProperty, OptimalityContract) {
    std::mt19937_64 rng(17);
    const SdpTolerances tol;
    for (int trial = 0; trial < 40; ++trial) {
        const RandomSdp r = random_sdp(2 + trial % 6, 1 + trial % 7, rng);
        const SdpSolution s = solve(r.problem(), tol);
        ASSERT_EQ(s.status, SdpStatus::Optimal);
        EXPECT_GE(min_eig(s.x[0]), -tol.psd);
        for (std::size_t i = 0; i < r.a.size(); ++i)
            EXPECT_LE(std::abs(r.a[i].cwiseProduct(s.x[0]).sum() - r.b(i)), tol.feas * (1 + r.b.norm()));
        EXPECT_LE(s.gap, tol.gap);
        EXPECT_LE((s.x[0] * s.z[0]).norm(), 10 * tol.gap * (1 + std::abs(s.objective)));
    }
}

TEST(SdpProperty, ScalingCovariance) {
    std::mt19937_64 rng(23);
    for (int trial = 0; trial < 20; ++trial) {
        RandomSdp r = random_sdp(3 + trial % 3, 2 + trial % 3, rng);
        const double base = solve(r.problem()).objective;
        for (double alpha : {0.25, 3.0, 40.0}) {
            RandomSdp q = r;
            q.c *= alpha;
            const SdpSolution s = solve(q.problem());
            ASSERT_EQ(s.status, SdpStatus::Optimal);
            EXPECT_NEAR(s.objective, alpha * base, 1e-7 * (1 + std::abs(alpha * base)));
        }
    }
}

// ---------------------------------------------------------------------------

TEST(Povm, CommutingCase) {
    Eigen::MatrixXd h0 = Eigen::Vector2d(1, 0).asDiagonal();
    Eigen::MatrixXd h1 = Eigen::Vector2d(0, 1).asDiagonal();
    const PovmStep s = max_povm_step({h0, h1});
    EXPECT_NEAR(s.value, 2.0, 1e-8);
    EXPECT_NEAR(s.povm[0](0, 0), 1.0, 1e-6);
    EXPECT_NEAR(s.povm[1](1, 1), 1.0, 1e-6);
    EXPECT_NEAR(s.povm[0](1, 1), 0.0, 1e-6);
}

TEST(Povm, ZeroOperators) {
    const PovmStep s = max_povm_step({Eigen::MatrixXd::Zero(3, 3), Eigen::MatrixXd::Zero(3, 3)});
    EXPECT_NEAR(s.value, 0.0, 1e-8);
    Eigen::MatrixXd sum = s.povm[0] + s.povm[1];
    EXPECT_TRUE(sum.isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-7));
}

TEST(Povm, RejectsBadInput) {
    EXPECT_THROW(max_povm_step({}), InvalidArgument);
    EXPECT_THROW(max_povm_step({Eigen::MatrixXd::Zero(2, 2), Eigen::MatrixXd::Zero(3, 3)}), InvalidArgument);
    Eigen::MatrixXd ns(2, 2);
    ns << 0, 1, 0, 0;
    EXPECT_THROW(max_povm_step({ns, ns}), InvalidArgument);
}

TEST(PovmProperty, StrongDuality) {
    std::mt19937_64 rng(31);
    for (int trial = 0; trial < 60; ++trial) {
        const int d = 2 + trial % 3;
        std::vector<Eigen::MatrixXd> h;
        for (int a = 0; a < d; ++a) h.push_back(random_symmetric(3, rng));
        const PovmStep s = max_povm_step(h);
        EXPECT_NEAR(s.value, s.dual_value, 1e-7);
        for (const auto& ha : h) EXPECT_GE(min_eig(s.y - ha), -1e-7);
        Eigen::MatrixXd sum = Eigen::MatrixXd::Zero(3, 3);
        for (const auto& m : s.povm) {
            EXPECT_GE(min_eig(m), -1e-9);
            sum += m;
        }
        EXPECT_TRUE(sum.isApprox(Eigen::MatrixXd::Identity(3, 3), 1e-7));
        double direct = 0;
        for (int a = 0; a < d; ++a) direct += h[a].cwiseProduct(s.povm[a]).sum();
        EXPECT_NEAR(direct, s.value, 1e-9);
    }
}

TEST(PovmProperty, RotationInvariance) {
    std::mt19937_64 rng(37);
    for (int trial = 0; trial < 40; ++trial) {
        const int n = 2 + trial % 3;
        std::vector<Eigen::MatrixXd> h, hr;
        const Eigen::MatrixXd q = random_orthogonal(n, rng);
        for (int a = 0; a < 3; ++a) {
            h.push_back(random_symmetric(n, rng));
            hr.push_back(q * h.back() * q.transpose());
        }
        EXPECT_NEAR(max_povm_step(h).value, max_povm_step(hr).value, 1e-7);
    }
}

namespace {

Eigen::MatrixXcd random_hermitian(int n, std::mt19937_64& rng) {
    std::normal_distribution<double> g;
    Eigen::MatrixXcd m(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = 0; j < n; ++j) m(i, j) = {g(rng), g(rng)};
    return 0.5 * (m + m.adjoint());
}

// Two outcomes: tr H1 + max_{0 <= M <= I} tr((H0 - H1) M) = tr H1 + sum of positive eigenvalues.
template <class M>
double two_outcome_value(const M& h0, const M& h1) {
    Eigen::SelfAdjointEigenSolver<M> es(h0 - h1);
    return std::real(h1.trace()) + es.eigenvalues().cwiseMax(0.0).sum();
}

} // namespace

TEST(PovmProperty, TwoOutcomeClosedForm) {
    std::mt19937_64 rng(43);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 4;
        const Eigen::MatrixXd a = random_symmetric(n, rng), b = random_symmetric(n, rng);
        EXPECT_NEAR(max_povm_step({a, b}).value, two_outcome_value(a, b), 1e-7);
        const Eigen::MatrixXcd ca = random_hermitian(n, rng), cb = random_hermitian(n, rng);
        EXPECT_NEAR(max_povm_step_hermitian({ca, cb}).value, two_outcome_value(ca, cb), 1e-7);
    }
}

TEST(PovmProperty, HermitianStepIsFeasibleAndCertified) {
    std::mt19937_64 rng(47);
    for (int trial = 0; trial < 30; ++trial) {
        const int n = 2 + trial % 3, d = 2 + trial % 2;
        std::vector<Eigen::MatrixXcd> h;
        for (int a = 0; a < d; ++a) h.push_back(random_hermitian(n, rng));
        const HermitianPovmStep s = max_povm_step_hermitian(h);
        Eigen::MatrixXcd sum = Eigen::MatrixXcd::Zero(n, n);
        double direct = 0;
        for (int a = 0; a < d; ++a) {
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(s.povm[a]);
            EXPECT_GE(es.eigenvalues().minCoeff(), -1e-9);
            Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> gap(s.y - h[a]);
            EXPECT_GE(gap.eigenvalues().minCoeff(), -1e-7);
            sum += s.povm[a];
            direct += std::real((h[a] * s.povm[a]).trace());
        }
        EXPECT_TRUE(sum.isApprox(Eigen::MatrixXcd::Identity(n, n), 1e-7));
        EXPECT_NEAR(direct, s.value, 1e-7);
        EXPECT_NEAR(std::real(s.y.trace()), s.value, 2e-8 * (1 + 2 * std::abs(s.value)));
    }
}

TEST(Povm, HermitianRejectsNonHermitian) {
    Eigen::MatrixXcd m = Eigen::MatrixXcd::Zero(2, 2);
    m(0, 1) = {0.0, 1.0};
    EXPECT_THROW(max_povm_step_hermitian({m, m}), InvalidArgument);
}
