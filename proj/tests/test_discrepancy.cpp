#include "support.hpp"

#include "sphcover/covering.hpp"
#include "sphcover/discrepancy.hpp"
#include "sphcover/errors.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sphcover;
using namespace sphcover::testing;
using Eigen::VectorXd;

TEST(EstimateTau, Simplex) {
    const auto r = estimate_tau(build_classical(6, ClassicalKind::simplex), 200, 0);
    EXPECT_NEAR(r.estimated_tau, 1.0 / 6.0, 1e-3);
}

TEST(EstimateTau, H2SixDimensions) {
    EXPECT_NEAR(estimate_tau(build_h2(6), 500, 0).estimated_tau, 0.835, 0.01);
}

TEST(EstimateTau, PlusMinusBasisWitnessIsDiagonal) {
    const HittingSet h = build_classical(3, ClassicalKind::pm_basis);
    const auto r = estimate_tau(h, 100, 0);
    EXPECT_NEAR(r.estimated_tau, 1.0 / std::sqrt(3.0), 1e-3);
    EXPECT_NEAR(r.witness.norm(), 1.0, 1e-12);
    EXPECT_LE((r.witness.cwiseAbs() - VectorXd::Constant(3, 1.0 / std::sqrt(3.0))).cwiseAbs().maxCoeff(), 1e-3);
    EXPECT_NEAR(h.max_inner(r.witness), r.estimated_tau, 1e-15);
}

TEST(EstimateTau, DeterministicForSeed) {
    const HittingSet h = build_random(5, 30, 4);
    const auto a = estimate_tau(h, 20, 7);
    const auto b = estimate_tau(h, 20, 7);
    EXPECT_EQ(a.estimated_tau, b.estimated_tau);
    EXPECT_EQ(a.witness, b.witness);
}

TEST(EstimateTau, NonCoveringSetsGoNegative) {
    EXPECT_NEAR(estimate_tau(build_classical(4, ClassicalKind::singleton), 10, 0).estimated_tau, -1.0, 1e-9);
    EXPECT_LE(estimate_tau(build_classical(4, ClassicalKind::antipodal), 10, 0).estimated_tau, 1e-9);
}

TEST(EstimateTau, LineSets) {
    const HittingSet pm1 = build_classical(1, ClassicalKind::pm_basis);
    EXPECT_EQ(estimate_tau(pm1, 5, 0).estimated_tau, 1.0);
}

TEST(EstimateTau, PropertyNeverBelowClaimForCertifiedSets) {
    for (const HittingSet& h : {build_h2(3), build_h3(4, kAlphaStar, kBetaStar), build_h4(7), build_h5(9),
                                build_grid(3, 4), build_classical(5, ClassicalKind::simplex)}) {
        // The simplex claim is tight, so allow rounding in the last place.
        EXPECT_GE(estimate_tau(h, 50, 1).estimated_tau, h.claimed_tau() - 1e-15) << h.provenance().to_string();
    }
}

TEST(VerifyCover, PlusMinusBasisFixedGrid) {
    const auto r = verify_cover(build_classical(3, ClassicalKind::pm_basis), 0.5, 60);
    ASSERT_TRUE(r.certified_at.has_value());
    EXPECT_EQ(r.certified_at->tau, 0.5);
    EXPECT_EQ(r.certified_at->grid_m, 60);
    EXPECT_EQ(r.samples_used, static_cast<std::int64_t>(grid_cardinality(3, 60)));
}

TEST(VerifyCover, SingletonFailsWithAntipodalWitness) {
    const HittingSet h = build_classical(3, ClassicalKind::singleton);
    const auto r = verify_cover(h, 0.0, 8);
    EXPECT_FALSE(r.certified_at.has_value());
    EXPECT_LT(h.max_inner(r.witness), 0.0);
    EXPECT_LE((r.witness + VectorXd::Unit(3, 0)).norm(), 1e-9);
}

TEST(VerifyCover, H2FourDimensions) {
    const auto r = verify_cover(build_h2(4), h2_tau(4), 40);
    EXPECT_TRUE(r.certified_at.has_value());
}

TEST(VerifyCover, ErrorsForCoarseGridsAndBudget) {
    const HittingSet h = build_classical(3, ClassicalKind::pm_basis);
    EXPECT_THROW(verify_cover(h, 0.5, 1), ParameterError);
    EXPECT_THROW(verify_cover(h, 0.5, 60, 1000), BudgetError);
    EXPECT_THROW(verify_cover(h, 1.5, 60), ParameterError);
}

TEST(VerifyCover, AutomaticGrid) {
    const auto ok = verify_cover_auto(build_h2(3), h2_tau(3));
    ASSERT_TRUE(ok.certified_at.has_value());
    EXPECT_GE(ok.estimated_tau, h2_tau(3));
    const auto bad = verify_cover_auto(build_classical(4, ClassicalKind::pm_basis), 0.6);
    EXPECT_FALSE(bad.certified_at.has_value());
    EXPECT_LT(bad.estimated_tau, 0.6);
}

TEST(VerifyCover, AutomaticGridRespectsBudget) {
    // True ratio 1/sqrt(5) leaves almost no slack at 0.447.
    EXPECT_THROW(verify_cover_auto(build_classical(5, ClassicalKind::pm_basis), 0.447, 100000), BudgetError);
}

TEST(GridAngle, MatchesGridTau) {
    EXPECT_NEAR(grid_angle(3, 10), std::acos(grid_tau(3, 10)), 1e-15);
    EXPECT_NEAR(grid_angle(6, 1), M_PI, 1e-15);
}
