#include <gtest/gtest.h>

#include <random>

#include "nlgame/classical.hpp"
#include "support.hpp"

using namespace nlgame;
using nlgame::testing::lattice;
using nlgame::testing::random_shift_labeling;
using nlgame::testing::random_switches;

namespace {

/// sigma_x on the Right edges of column 0 (crossing the row-0 ring), sigma_y on the Down edges of row 0.
Labeling torus_loops(int rows, int cols, int d, int x, int y) {
    auto lat = lattice(rows, cols, Boundary::Torus);
    Labeling k = Labeling::identity(lat, d);
    for (int r = 0; r < rows; ++r) k.set(*lat->edge_id(r, 0, Orientation::Right), Perm::shift(d, x));
    for (int c = 0; c < cols; ++c) k.set(*lat->edge_id(0, c, Orientation::Down), Perm::shift(d, y));
    return k;
}

} // namespace

TEST(Classical, OracleExamples) {
    auto tor = lattice(4, 4, Boundary::Torus);
    const auto ki = classical_value_oracle(Labeling::identity(tor, 3));
    EXPECT_EQ(ki.beta_c, 0);
    EXPECT_EQ(ki.p_win, Rational(1));
    const auto loop = classical_value_oracle(torus_loops(4, 4, 2, 1, 0));
    EXPECT_EQ(loop.beta_c, 4);
    EXPECT_EQ(loop.p_win, Rational(7, 8));
    auto pl = lattice(4, 4, Boundary::Plane);
    Labeling one = Labeling::identity(pl, 2);
    one.set(*pl->edge_id(1, 1, Orientation::Right), Perm::shift(2, 1));
    EXPECT_EQ(classical_value_oracle(one).beta_c, 1);
    EXPECT_EQ(classical_value_enumerate(one).beta_c, 1);
}

TEST(Classical, OracleMatchesEnumerationIncludingGeneralPermutations) {
    std::mt19937_64 rng(301);
    for (int trial = 0; trial < 150; ++trial) {
        const int d = 2 + trial % 3;
        auto lat = lattice(2 + rng() % 2, 2 + rng() % 3, nlgame::testing::random_boundary(rng));
        if (lat->num_vertices() > 9 && d > 2) continue;
        std::vector<Perm> labels;
        for (int e = 0; e < lat->num_edges(); ++e) {
            std::vector<int> m(d);
            std::iota(m.begin(), m.end(), 0);
            if (rng() % 2) std::shuffle(m.begin(), m.end(), rng);
            labels.emplace_back(m);
        }
        const Labeling k(lat, d, labels);
        const auto a = classical_value_oracle(k), b = classical_value_enumerate(k);
        ASSERT_EQ(a.beta_c, b.beta_c);
        ASSERT_EQ(violations(k, a.optimal_assignment), a.beta_c);
    }
}

TEST(Classical, OracleBudget) {
    auto lat = lattice(12, 12, Boundary::Torus);
    EXPECT_THROW(classical_value_oracle(Labeling::identity(lat, 3)), BudgetExceeded);
}

TEST(Classical, DecoderExamples) {
    const auto both = classical_value_decoder(torus_loops(4, 4, 2, 1, 1));
    EXPECT_EQ(both.p_win, Rational(3, 4));
    const auto d3 = classical_value_decoder(torus_loops(4, 4, 3, 1, 2));
    EXPECT_EQ(d3.p_win, Rational(3, 4));

    auto pl = lattice(6, 6, Boundary::Plane);
    Labeling pair = Labeling::identity(pl, 2);
    pair.set(*pl->edge_id(2, 2, Orientation::Right), Perm::shift(2, 1));
    pair.set(*pl->edge_id(2, 3, Orientation::Right), Perm::shift(2, 1));
    std::mt19937_64 rng(5);
    pair = random_switches(pair, 20, rng);
    EXPECT_EQ(classical_value_decoder(pair).beta_c, 2);
    EXPECT_EQ(classical_value_oracle(pair).beta_c, 2);
}

TEST(Classical, DecoderRejectsNonShiftLabels) {
    auto pl = lattice(3, 3, Boundary::Plane);
    Labeling k = Labeling::identity(pl, 3);
    k.set(0, Perm::reflection(3, 0));
    EXPECT_THROW(classical_value_decoder(k), InvalidArgument);
}

TEST(Classical, TreeSearchExamples) {
    auto tor = lattice(3, 3, Boundary::Torus);
    EXPECT_EQ(classical_value_tree_search(Labeling::identity(tor, 3)).beta_c, 0);
    auto small = lattice(2, 3, Boundary::Plane);
    Labeling k = Labeling::identity(small, 2);
    k.set(*small->edge_id(0, 1, Orientation::Down), Perm::shift(2, 1));
    const auto ts = classical_value_tree_search(k);
    EXPECT_TRUE(ts.exact);
    EXPECT_EQ(ts.beta_c, classical_value_oracle(k).beta_c);
    std::mt19937_64 rng(11);
    const Labeling r = random_shift_labeling(tor, 3, 0.4, rng);
    EXPECT_EQ(classical_value_tree_search(r).beta_c, classical_value_decoder(r).beta_c);
}

TEST(Classical, TreeSearchBudget) {
    auto tor = lattice(4, 4, Boundary::Torus);
    TreeSearchOptions opt;
    opt.max_trees = 1000;
    EXPECT_THROW(classical_value_tree_search(Labeling::identity(tor, 2), opt), BudgetExceeded);
    opt.sample_when_over_budget = true;
    opt.samples = 200;
    const auto r = classical_value_tree_search(torus_loops(4, 4, 2, 1, 0), opt);
    EXPECT_FALSE(r.exact);
    EXPECT_GE(r.beta_c, 4);
}

TEST(Classical, Certificates) {
    std::mt19937_64 rng(302);
    auto tor = lattice(4, 4, Boundary::Torus);
    for (int i = 0; i < 50; ++i) {
        const Labeling k = random_shift_labeling(tor, 2, 0.3, rng);
        const auto r = classical_value_decoder(k);
        EXPECT_TRUE(optimal_labeling_certificate(k, r));
        EXPECT_TRUE(optimal_labeling_certificate(k, classical_value_oracle(k)));
    }
    const Labeling k = torus_loops(4, 4, 2, 1, 1);
    auto r = classical_value_decoder(k);
    ASSERT_TRUE(optimal_labeling_certificate(k, r));
    auto corrupted = r;
    Labeling bad = *r.optimal_labeling;
    bad.set(0, bad[0].is_identity() ? Perm::shift(2, 1) : Perm::identity(2));
    corrupted.optimal_labeling = bad;
    EXPECT_FALSE(optimal_labeling_certificate(k, corrupted));
    auto wrong_beta = r;
    wrong_beta.beta_c -= 1;
    EXPECT_FALSE(optimal_labeling_certificate(k, wrong_beta));
}

TEST(ClassicalProperties, TorusSingleLoopLaw) {
    for (int k = 2; k <= 4; ++k)
        for (int d = 2; d <= 3; ++d)
            for (int x = 1; x < d; ++x)
                for (bool vertical : {false, true}) {
                    const Labeling g = vertical ? torus_loops(k, k, d, 0, x) : torus_loops(k, k, d, x, 0);
                    const Rational want(2 * k - 1, 2 * k);
                    EXPECT_EQ(classical_value_oracle(g).p_win, want);
                    EXPECT_EQ(classical_value_decoder(g).p_win, want);
                }
}

TEST(ClassicalProperties, TwoLoopAdditivity) {
    for (int rows : {2, 4, 6})
        for (int cols : {2, 4})
            for (int d = 2; d <= 3; ++d) {
                const Rational one(1);
                const Rational c11 = classical_value_oracle(torus_loops(rows, cols, d, 1, 1)).p_win;
                const Rational c10 = classical_value_oracle(torus_loops(rows, cols, d, 1, 0)).p_win;
                const Rational c01 = classical_value_oracle(torus_loops(rows, cols, d, 0, 1)).p_win;
                EXPECT_EQ(one - c11, (one - c10) + (one - c01));
            }
}

TEST(ClassicalProperties, DefectParityOnClosedSurfaces) {
    std::mt19937_64 rng(303);
    for (int i = 0; i < 200; ++i) {
        const int d = 2 + i % 4;
        const Labeling k = random_shift_labeling(lattice(2 + rng() % 4, 2 + rng() % 4, Boundary::Torus), d, 0.5, rng);
        long long sum = 0;
        for (int c : signature(k).cells) sum += c;
        EXPECT_EQ(sum % d, 0);
    }
}

TEST(ClassicalProperties, RouteAgreement) {
    std::mt19937_64 rng(304);
    struct Shape {
        int r, c;
        Boundary b;
    };
    const Shape shapes[] = {{4, 4, Boundary::Torus},     {4, 4, Boundary::Plane},     {3, 3, Boundary::Torus},
                            {2, 4, Boundary::Torus},     {4, 3, Boundary::CylinderX}, {3, 4, Boundary::CylinderY},
                            {2, 2, Boundary::Torus},     {3, 4, Boundary::Plane},     {4, 2, Boundary::CylinderY},
                            {2, 3, Boundary::CylinderX}};
    int trials = 0, tree_checked = 0, skipped = 0;
    for (int i = 0; trials < 600; ++i) {
        const Shape& s = shapes[i % 10];
        const int d = 2 + static_cast<int>(rng() % 3);
        auto lat = lattice(s.r, s.c, s.b);
        const double density = 0.05 + 0.3 * static_cast<double>(rng() % 100) / 100.0;
        const Labeling k = random_switches(random_shift_labeling(lat, d, density, rng), 3, rng);
        ClassicalResult dec;
        try {
            dec = classical_value_decoder(k);
        } catch (const BudgetExceeded&) {
            ++skipped;
            continue;
        }
        ++trials;
        const auto orc = classical_value_oracle(k);
        ASSERT_EQ(dec.beta_c, orc.beta_c) << "shape " << s.r << "x" << s.c << " " << to_string(s.b) << " d=" << d
                                          << " " << signature(k).dump() << " method " << dec.method;
        ASSERT_TRUE(optimal_labeling_certificate(k, dec));
        if (lat->num_edges() <= 24) {
            const auto ts = classical_value_tree_search(k);
            ASSERT_EQ(ts.beta_c, orc.beta_c);
            ++tree_checked;
        }
    }
    EXPECT_GE(trials, 500);
    EXPECT_GE(tree_checked, 200);
    RecordProperty("skipped_over_budget", skipped);
}

TEST(ClassicalProperties, SwitchInvariance) {
    std::mt19937_64 rng(305);
    int trials = 0;
    for (; trials < 500; ++trials) {
        const int d = 2 + trials % 3;
        auto lat = lattice(2 + rng() % 3, 2 + rng() % 3, nlgame::testing::random_boundary(rng));
        const Labeling k = random_shift_labeling(lat, d, 0.3, rng);
        const int v = static_cast<int>(rng() % lat->num_vertices());
        const Labeling s = apply_switch(k, v, Perm::shift(d, 1 + static_cast<int>(rng() % (d - 1))));
        ASSERT_EQ(classical_value_oracle(k).beta_c, classical_value_oracle(s).beta_c);
    }
    EXPECT_GE(trials, 500);
}
