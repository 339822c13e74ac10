#include <gtest/gtest.h>

#include <random>

#include "nlgame/classical.hpp"
#include "nlgame/quantum.hpp"
#include "support.hpp"

using namespace nlgame;
using nlgame::testing::lattice;
using nlgame::testing::random_shift_labeling;
using nlgame::testing::random_switches;

namespace {

Labeling torus_loops(int rows, int cols, int d, int x, int y) {
    auto lat = lattice(rows, cols, Boundary::Torus);
    Labeling k = Labeling::identity(lat, d);
    for (int r = 0; r < rows; ++r) k.set(*lat->edge_id(r, 0, Orientation::Right), Perm::shift(d, x));
    for (int c = 0; c < cols; ++c) k.set(*lat->edge_id(0, c, Orientation::Down), Perm::shift(d, y));
    return k;
}

SeesawOptions quick_seesaw(int restarts = 4, int iterations = 10) {
    SeesawOptions o;
    o.restarts = restarts;
    o.iterations = iterations;
    o.threads = 1;
    return o;
}

} // namespace

TEST(BellInstance, TorusHasEightQuestionsPerParty) {
    const BellInstance inst = to_bell_instance(torus_loops(4, 4, 2, 1, 0));
    EXPECT_EQ(inst.alice.size(), 8u);
    EXPECT_EQ(inst.bob.size(), 8u);
    EXPECT_EQ(inst.edges.size(), 32u);
    EXPECT_DOUBLE_EQ(inst.weight(), 1.0 / 32.0);
}

TEST(BellInstance, OddWrapIsRejected) {
    EXPECT_THROW(to_bell_instance(Labeling::identity(lattice(3, 3, Boundary::Torus), 2)), InvalidArgument);
    EXPECT_NO_THROW(to_bell_instance(Labeling::identity(lattice(3, 3, Boundary::Plane), 2)));
}

TEST(BellInstance, ReversedEdgesUseInverse) {
    const BellInstance ki = to_bell_instance(Labeling::identity(lattice(4, 4, Boundary::Torus), 3));
    for (const BellEdge& e : ki.edges) EXPECT_TRUE(e.pi.is_identity());

    auto lat = lattice(2, 2, Boundary::Plane);
    Labeling k = Labeling::identity(lat, 3);
    const Perm p = Perm::shift(3, 1);
    for (int e = 0; e < lat->num_edges(); ++e) k.set(e, p);
    const BellInstance inst = to_bell_instance(k);
    for (const BellEdge& e : inst.edges) {
        const Edge& le = lat->edges()[e.lattice_edge];
        const bool forward = lat->color(le.tail) == 0;
        EXPECT_EQ(e.pi, forward ? p : p.inverse());
        EXPECT_EQ(inst.alice[e.alice], forward ? le.tail : le.head);
    }
}

TEST(Xor, TableValues) {
    EXPECT_NEAR(xor_exact_value(to_bell_instance(torus_loops(4, 4, 2, 1, 1))), 0.853553, 1e-6);
    // The only non-contractible 4-edge loop: (1 + (2 + sqrt 2) / 4) / 2.
    EXPECT_NEAR(xor_exact_value(to_bell_instance(torus_loops(4, 4, 2, 1, 0))), (1 + (2 + std::sqrt(2.0)) / 4) / 2,
                1e-7);
    EXPECT_NEAR(xor_exact_value(to_bell_instance(torus_loops(8, 4, 2, 0, 1))), 0.980970, 1e-6);
    EXPECT_NEAR(xor_exact_value(to_bell_instance(torus_loops(8, 4, 2, 1, 1))), 0.907747, 1e-6);
    EXPECT_NEAR(xor_exact_value(to_bell_instance(Labeling::identity(lattice(4, 4, Boundary::Torus), 2))), 1.0, 1e-7);
    EXPECT_THROW(xor_exact_value(to_bell_instance(torus_loops(4, 4, 3, 1, 0))), InvalidArgument);
}

TEST(Npa, TableValues) {
    EXPECT_NEAR(npa1_upper_bound(to_bell_instance(torus_loops(4, 4, 3, 1, 1))), 0.910684, 1e-6);
    EXPECT_NEAR(npa1_upper_bound(to_bell_instance(torus_loops(4, 4, 3, 1, 0))), 0.955342, 1e-6);
    EXPECT_NEAR(npa1_upper_bound(to_bell_instance(torus_loops(8, 4, 3, 1, 1))), 0.943984, 1e-6);
    EXPECT_NEAR(npa1_upper_bound(to_bell_instance(Labeling::identity(lattice(4, 4, Boundary::Torus), 3))), 1.0, 1e-7);
}

TEST(Npa, MatchesXorForTwoOutcomes) {
    std::mt19937_64 rng(41);
    for (int trial = 0; trial < 12; ++trial) {
        const auto k = random_shift_labeling(lattice(2 + 2 * (trial % 2), 4, Boundary::Torus), 2, 0.3, rng);
        const BellInstance inst = to_bell_instance(k);
        EXPECT_NEAR(npa1_upper_bound(inst), xor_exact_value(inst), 1e-6);
    }
}

TEST(Npa, NonnegativityOnlyTightens) {
    const BellInstance inst = to_bell_instance(torus_loops(4, 4, 3, 1, 0));
    NpaOptions o;
    o.nonnegative_cross_terms = true;
    const double tight = npa1_upper_bound(inst, o);
    EXPECT_NEAR(tight, 0.922649, 1e-5);
    EXPECT_LT(tight, npa1_upper_bound(inst));
}

TEST(Seesaw, QubitLoopsReachTsirelson) {
    const SeesawResult r = seesaw_lower_bound(to_bell_instance(torus_loops(4, 4, 2, 1, 1)), quick_seesaw(6, 20));
    EXPECT_NEAR(r.value, 0.853553, 1e-5);
    EXPECT_EQ(r.dim, 2);
}

TEST(Seesaw, QutritLoopsMeetPublishedLowerBound) {
    const SeesawResult r = seesaw_lower_bound(to_bell_instance(torus_loops(4, 4, 3, 1, 1)), quick_seesaw(20, 20));
    EXPECT_GE(r.value, 0.831812 - 1e-4);
    EXPECT_LE(r.value, 0.910684 + 1e-6);
}

TEST(Seesaw, IdentityGameIsWonWithinFewIterations) {
    // One round is not enough from random bases: every question still faces
    // neighbours that measured in unrelated bases.
    const BellInstance inst = to_bell_instance(Labeling::identity(lattice(2, 4, Boundary::Torus), 3));
    EXPECT_LT(seesaw_lower_bound(inst, quick_seesaw(2, 1)).value, 1.0 - 1e-3);
    EXPECT_NEAR(seesaw_lower_bound(inst, quick_seesaw(2, 5)).value, 1.0, 1e-7);
}

TEST(Seesaw, MonotoneAndDeterministic) {
    const BellInstance inst = to_bell_instance(torus_loops(4, 4, 3, 1, 2));
    SeesawOptions o = quick_seesaw(4, 6);
    o.seed = 77;
    const SeesawResult a = seesaw_lower_bound(inst, o);
    o.threads = 3;
    const SeesawResult b = seesaw_lower_bound(inst, o);
    ASSERT_EQ(a.runs.size(), b.runs.size());
    EXPECT_EQ(a.value, b.value);
    EXPECT_EQ(a.best_restart, b.best_restart);
    for (std::size_t r = 0; r < a.runs.size(); ++r) {
        EXPECT_TRUE(a.runs[r].monotone);
        EXPECT_EQ(a.runs[r].trace.size(), 18u);
        EXPECT_EQ(a.runs[r].trace, b.runs[r].trace);
    }
    o.seed = 78;
    EXPECT_NE(seesaw_lower_bound(inst, o).runs[0].trace, a.runs[0].trace);
}

TEST(Seesaw, RealAndComplexFieldsBothGiveLowerBounds) {
    const BellInstance inst = to_bell_instance(torus_loops(4, 4, 3, 1, 0));
    const double upper = npa1_upper_bound(inst);
    for (SeesawField f : {SeesawField::Real, SeesawField::Complex}) {
        SeesawOptions o = quick_seesaw(3, 8);
        o.field = f;
        const SeesawResult r = seesaw_lower_bound(inst, o);
        EXPECT_LE(r.value, upper + 1e-6);
        EXPECT_GE(r.value, 0.875 - 1e-9);
    }
}

TEST(Seesaw, ProductEmbeddingOfClassicalStrategyScoresClassicalValue) {
    // Deterministic answers as rank-one projectors on a product state give
    // exactly the classical winning fraction.
    std::mt19937_64 rng(9);
    for (int trial = 0; trial < 10; ++trial) {
        const Labeling k = random_shift_labeling(lattice(2, 4, Boundary::Torus), 3, 0.4, rng);
        const ClassicalResult c = classical_value_oracle(k);
        const BellInstance inst = to_bell_instance(k);
        const int dim = 3;
        auto deterministic = [&](int vertex) {
            detail::Measurement<double> m(3, Eigen::MatrixXd::Zero(dim, dim));
            m[c.optimal_assignment[vertex]](0, 0) = 1.0;
            for (int a = 0; a < 3; ++a) m[a](1 + a % 2, 1 + a % 2) = a < 2 ? 1.0 : 0.0;
            return m;
        };
        std::vector<detail::Measurement<double>> ma, mb;
        for (int v : inst.alice) ma.push_back(deterministic(v));
        for (int v : inst.bob) mb.push_back(deterministic(v));
        const Eigen::MatrixXd s = detail::bell_operator(inst, ma, mb, dim);
        EXPECT_NEAR(s(0, 0), c.p_win.to_double(), 1e-12);
    }
}

TEST(QuantumProperty, SandwichAndSwitchInvariance) {
    std::mt19937_64 rng(2024);
    for (int trial = 0; trial < 8; ++trial) {
        const int d = 2 + trial % 2;
        const Labeling k = random_shift_labeling(lattice(4, 4, Boundary::Torus), d, 0.25, rng);
        const BellInstance inst = to_bell_instance(k);
        QuantumOptions o;
        o.seesaw = quick_seesaw(3, 8);
        const QuantumBounds qb = quantum_bounds(inst, o);
        const double c = classical_value_oracle(k).p_win.to_double();
        EXPECT_LE(c, qb.q_lower + 1e-9);
        EXPECT_LE(qb.q_lower, qb.q_upper + 1e-6);
        EXPECT_LE(qb.q_upper, 1.0 + 1e-7);
        if (d == 2) EXPECT_NEAR(*qb.q_exact, qb.q_upper, 1e-5);

        const BellInstance switched = to_bell_instance(random_switches(k, 12, rng));
        EXPECT_NEAR(npa1_upper_bound(switched), qb.q_upper, 1e-6);
        if (d == 2) EXPECT_NEAR(xor_exact_value(switched), *qb.q_exact, 1e-6);
    }
}

TEST(QuantumProperty, LoopClassesRelatedByReflectionAgree) {
    EXPECT_NEAR(npa1_upper_bound(to_bell_instance(torus_loops(4, 4, 3, 1, 1))),
                npa1_upper_bound(to_bell_instance(torus_loops(4, 4, 3, 2, 2))), 1e-6);
    EXPECT_NEAR(npa1_upper_bound(to_bell_instance(torus_loops(4, 4, 3, 1, 2))),
                npa1_upper_bound(to_bell_instance(torus_loops(4, 4, 3, 2, 1))), 1e-6);
}

TEST(Additivity, LoopsAreAdditive) {
    std::map<std::string, GameValues> res;
    res["1,0"] = {0.875, 0.926777, 0.926777};
    res["0,1"] = {0.875, 0.926777, 0.926777};
    res["1,1"] = {0.75, 0.853553, std::nullopt};
    const auto rows = additivity_report(res);
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_EQ(rows[0].quantity, "C");
    EXPECT_NEAR(rows[0].residual, 0.0, 1e-12);
    EXPECT_NEAR(rows[1].residual, 0.0, 1e-5);
}

TEST(Additivity, SingleEdgesAreNot) {
    std::map<std::string, GameValues> res;
    res["x"] = {0.96875, std::nullopt, std::nullopt};
    res["z"] = {0.96875, std::nullopt, std::nullopt};
    res["xz"] = {0.9375, std::nullopt, std::nullopt};
    EXPECT_NEAR(additivity_report(res, "x", "z", "xz")[0].residual, 0.0, 1e-12);
    res["x"].q_upper = res["z"].q_upper = 0.949843;
    res["xz"].q_upper = 0.922388;
    const auto rows = additivity_report(res, "x", "z", "xz");
    ASSERT_EQ(rows.size(), 2u);
    EXPECT_GT(std::abs(rows[1].residual), 1e-3);
}

TEST(Additivity, IdentityTripleAndMissingKey) {
    std::map<std::string, GameValues> res;
    for (const char* key : {"1,0", "0,1", "1,1"}) res[key] = {1.0, 1.0, 1.0};
    for (const auto& r : additivity_report(res)) EXPECT_EQ(r.residual, 0.0);
    res.erase("0,1");
    EXPECT_THROW(additivity_report(res), InvalidArgument);
}
