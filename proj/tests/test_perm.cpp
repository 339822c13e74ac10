#include <gtest/gtest.h>

#include "nlgame/perm.hpp"

using namespace nlgame;

TEST(Perm, ComposeExamples) {
    EXPECT_EQ(compose(Perm::shift(3, 1), Perm::shift(3, 2)), Perm::identity(3));
    const Perm p({2, 0, 1});
    EXPECT_EQ(compose(Perm::identity(3), p), p);
    // reflection conjugation of a shift negates it
    const Perm r = Perm::reflection(5, 1);
    EXPECT_EQ(compose(compose(r, Perm::shift(5, 2)), r), Perm::shift(5, 3));
}

TEST(Perm, ComposeConventionAppliesRightFirst) {
    const Perm p({1, 0, 2}), q({0, 2, 1});
    const Perm pq = compose(p, q);
    for (int x = 0; x < 3; ++x) EXPECT_EQ(pq(x), p(q(x)));
    EXPECT_NE(pq, compose(q, p));
}

TEST(Perm, ComposeRejectsMismatchedDimensions) {
    EXPECT_THROW(compose(Perm::shift(3, 1), Perm::shift(4, 1)), InvalidArgument);
}

TEST(Perm, InverseExamples) {
    EXPECT_EQ(inverse(Perm::shift(3, 2)), Perm::shift(3, 1));
    for (int i = 0; i < 5; ++i) EXPECT_EQ(inverse(Perm::reflection(5, i)), Perm::reflection(5, i));
    EXPECT_EQ(inverse(Perm::identity(4)), Perm::identity(4));
}

TEST(Perm, ConstructorValidates) {
    EXPECT_THROW(Perm({0, 0, 1}), InvalidArgument);
    EXPECT_THROW(Perm({0}), InvalidArgument);
    EXPECT_THROW(Perm({0, 3, 1}), InvalidArgument);
}

TEST(Perm, ClassifyFamily) {
    EXPECT_EQ(classify_family(Perm({1, 2, 0})), (Family{FamilyKind::Shift, 1}));
    EXPECT_EQ(classify_family(Perm({0, 1})), (Family{FamilyKind::Shift, 0}));
    EXPECT_EQ(classify_family(Perm({0, 2, 1, 3})).kind, FamilyKind::Other);
    // [1,0,3,2] is x -> 1 - x mod 4, a reflection rather than an outsider
    EXPECT_EQ(classify_family(Perm({1, 0, 3, 2})), (Family{FamilyKind::Reflection, 1}));
    for (int d = 2; d <= 6; ++d)
        for (int i = 0; i < d; ++i) EXPECT_EQ(classify_family(Perm::reflection(d, i)).kind, d == 2 ? FamilyKind::Shift : FamilyKind::Reflection);
    EXPECT_EQ(classify_family(Perm::reflection(5, 3)), (Family{FamilyKind::Reflection, 3}));
}

TEST(Perm, ConjugationUnit) {
    EXPECT_EQ(conjugation_unit(Perm::identity(3)), 1);
    EXPECT_EQ(conjugation_unit(Perm::reflection(3, 0)), 2);
    EXPECT_FALSE(conjugation_unit(Perm({0, 2, 1, 3})).has_value());
}

TEST(Perm, GroupLawsByExhaustion) {
    for (int d = 2; d <= 8; ++d) {
        for (int i = 0; i < d; ++i) {
            const Perm si = Perm::shift(d, i), ri = Perm::reflection(d, i);
            EXPECT_TRUE(compose(si, si.inverse()).is_identity());
            EXPECT_TRUE(compose(ri.inverse(), ri).is_identity());
            EXPECT_EQ(conjugation_unit(si), 1);
            for (int j = 0; j < d; ++j) {
                EXPECT_EQ(compose(si, Perm::shift(d, j)), Perm::shift(d, i + j));
                EXPECT_EQ(compose(ri, Perm::reflection(d, j)), Perm::shift(d, i - j));
            }
        }
    }
}

TEST(Perm, TokensRoundTrip) {
    EXPECT_EQ(to_token(Perm::shift(3, 2)), "s2");
    EXPECT_EQ(to_token(Perm::reflection(3, 1)), "r1");
    EXPECT_EQ(to_token(Perm({0, 2, 1, 3})), "[0,2,1,3]");
    for (const auto* t : {"s0", "s2", "r1", "[0,2,1,3]"}) {
        const int d = std::string(t).front() == '[' ? 4 : 3;
        EXPECT_EQ(to_token(parse_perm_token(t, d)), t);
    }
    EXPECT_EQ(to_token(parse_perm_token("[1,0,3,2]", 4)), "r1");
}

TEST(Perm, TokenErrorsNameTheToken) {
    try {
        parse_perm_token("s9", 3);
        FAIL();
    } catch (const InvalidArgument& e) {
        EXPECT_NE(std::string(e.what()).find("s9"), std::string::npos);
    }
    EXPECT_THROW(parse_perm_token("[0,0,1]", 3), InvalidArgument);
    EXPECT_THROW(parse_perm_token("x1", 3), InvalidArgument);
    EXPECT_THROW(parse_perm_token("[0,1]", 3), InvalidArgument);
}
