#include <gtest/gtest.h>

#include <helmbem/oracle.hpp>
#include <helmbem/shapes.hpp>

using namespace helmbem;

namespace {

const KernelContext kK1(1.0, HankelKind::First);
const SegmentGeom kUnit(Vec2(0, 0), Vec2(1, 0));

}  // namespace

TEST(Oracle, SingleCoincidentMatchesIndependentReference) {
    // mpmath 1D reduction, k = 1, l = 1
    const auto a = oracle_pair_integral(Operator::S, Method::NotApplicable, kK1, kUnit, kUnit, NodeAt::A, NodeAt::A);
    const auto b = oracle_pair_integral(Operator::S, Method::NotApplicable, kK1, kUnit, kUnit, NodeAt::B, NodeAt::A);
    EXPECT_LE(std::abs(a.value - cplx(7.22238586295691209e-02, 6.07960565688210400e-02)), 1e-9);
    EXPECT_LE(std::abs(b.value - cplx(5.08952232891098158e-02, 5.91238995173856419e-02)), 1e-9);
    EXPECT_GE(a.est_error, 0.0);
    EXPECT_FALSE(a.flagged);
}

TEST(Oracle, DoubleCoincidentIsZero) {
    const auto r = oracle_pair_integral(Operator::D, Method::NotApplicable, kK1, kUnit, kUnit, NodeAt::A, NodeAt::B);
    EXPECT_LE(std::abs(r.value), 1e-12);
}

TEST(Oracle, HyperCoincidentMatchesClosedForm) {
    const auto U = hyper_direct_coincident(kK1, 1.0);
    const auto r = oracle_pair_integral(Operator::N, Method::Direct, kK1, kUnit, kUnit, NodeAt::A, NodeAt::A);
    EXPECT_LE(std::abs(r.value - U.u11_reg), 1e-4);
}

TEST(Oracle, EpsilonLevels) {
    const auto r = oracle_pair_integral(Operator::S, Method::NotApplicable, kK1, kUnit, kUnit, NodeAt::A, NodeAt::A);
    ASSERT_GE(r.epsilons_used.size(), 3u);
    for (std::size_t i = 1; i < r.epsilons_used.size(); ++i) EXPECT_LT(r.epsilons_used[i], r.epsilons_used[i - 1]);
    EXPECT_THROW(oracle_pair_integral(Operator::S, Method::NotApplicable, kK1, kUnit, kUnit, NodeAt::A, NodeAt::A,
                                      {1e-3, 1e-4}),
                 ArgumentError);
    EXPECT_THROW(oracle_pair_integral(Operator::S, Method::NotApplicable, kK1, kUnit, kUnit, NodeAt::A, NodeAt::A,
                                      {1e-4, 1e-3, 1e-5}),
                 ArgumentError);
    EXPECT_THROW(oracle_pair_integral(Operator::S, Method::Direct, kK1, kUnit, kUnit, NodeAt::A, NodeAt::A),
                 ArgumentError);
}

TEST(Oracle, SpecDefaultLevelsAlsoWork) {
    const auto r = oracle_pair_integral(Operator::S, Method::NotApplicable, kK1, kUnit, kUnit, NodeAt::A, NodeAt::A,
                                        {1e-3, 1e-4, 1e-5});
    EXPECT_LE(std::abs(r.value - single_coincident(kK1, 1.0).i11), 1e-8);
}

// halving the smallest eps moves the value by less than 3 est_error (plus a roundoff floor)
TEST(Oracle, SelfConsistency) {
    const SegmentGeom sm(Vec2(0.5, 0.8), Vec2(0, 0)), sn(Vec2(0, 0), Vec2(1.2, 0));
    struct Case {
        Operator op;
        Method me;
        const SegmentGeom *a, *b;
    };
    for (Case c : {Case{Operator::S, Method::NotApplicable, &kUnit, &kUnit}, Case{Operator::N, Method::Direct, &kUnit, &kUnit},
                   Case{Operator::S, Method::NotApplicable, &sm, &sn}, Case{Operator::N, Method::Direct, &sm, &sn}}) {
        std::vector<double> eps;
        for (int i = 0; i < 5; ++i) eps.push_back(1e-3 * std::pow(0.25, i));
        const auto r1 = oracle_pair_integral(c.op, c.me, kK1, *c.a, *c.b, NodeAt::B, NodeAt::A, eps);
        eps.back() *= 0.5;
        const auto r2 = oracle_pair_integral(c.op, c.me, kK1, *c.a, *c.b, NodeAt::B, NodeAt::A, eps);
        EXPECT_LE(std::abs(r1.value - r2.value), 3 * r1.est_error + 1e-12) << to_string(c.op);
    }
}

TEST(Oracle, DisjointMatchesTensorRule) {
    const Mesh sq = shapes::unit_square();
    const PairBlock b = pair_block(sq, 0, 2, Operator::S, Method::NotApplicable, kK1, 20, 8);
    const auto r = oracle_pair_integral(Operator::S, Method::NotApplicable, kK1, sq.segment(0), sq.segment(2),
                                        NodeAt::A, NodeAt::B);
    EXPECT_LE(std::abs(r.value - b(0, 1)), 1e-13);
    EXPECT_LE(r.est_error, 1e-12);
}

TEST(Oracle, RejectsOverlappingSegments) {
    const SegmentGeom a(Vec2(0, 0), Vec2(1, 0)), b(Vec2(1, 0), Vec2(0, 0));
    EXPECT_THROW(oracle_pair_integral(Operator::S, Method::NotApplicable, kK1, a, b, NodeAt::A, NodeAt::A),
                 ArgumentError);
}
