#include "support.hpp"

#include "sphcover/covering.hpp"
#include "sphcover/errors.hpp"
#include "sphcover/nuclear.hpp"
#include "sphcover/odeco.hpp"

#include <gtest/gtest.h>

#include <cmath>

using namespace sphcover;
using namespace sphcover::testing;
using Eigen::VectorXd;

namespace {

constexpr double kTol = 1e-6;

std::vector<HittingSet> pm_sets(const Tensor& t) {
    std::vector<HittingSet> sets;
    std::vector<Index> dims(t.shape().begin(), t.shape().end());
    std::stable_sort(dims.begin(), dims.end());
    for (std::size_t k = 0; k + 2 < dims.size(); ++k) sets.push_back(build_classical(dims[k], ClassicalKind::pm_basis));
    return sets;
}

NuclearApproxResult solve(const Tensor& t, const std::vector<HittingSet>& sets, int max_iter = 5000) {
    return solve_nuclear_sdp(assemble_problem(t, std::span<const HittingSet>(sets)), kTol, max_iter);
}

/// Largest sigma_1 of Y(x, ., .) over every vector of an order-3 set,
/// recomputed with Eigen's SVD.
double worst_constraint(const Tensor& y, const HittingSet& h) {
    double worst = 0.0;
    for (Index i = 0; i < h.size(); ++i) {
        const Eigen::MatrixXd m = slice_matrix_from_weight(y, VectorXd(h.vector(i)));
        worst = std::max(worst, Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()[0]);
    }
    return worst;
}

double matrix_nuclear(const Eigen::MatrixXd& m) { return Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues().sum(); }

/// Maximum nuclear norm of the three unfoldings, each built by explicit
/// index loops.
double loop_flattening(const Tensor& t) {
    const Index a = t.dim(0), b = t.dim(1), c = t.dim(2);
    Eigen::MatrixXd m1(a, b * c), m2(b, a * c), m3(c, a * b);
    for (Index i = 0; i < a; ++i)
        for (Index j = 0; j < b; ++j)
            for (Index k = 0; k < c; ++k) {
                m1(i, j * c + k) = t(i, j, k);
                m2(j, i * c + k) = t(i, j, k);
                m3(k, i * b + j) = t(i, j, k);
            }
    return std::max({matrix_nuclear(m1), matrix_nuclear(m2), matrix_nuclear(m3)});
}

}  // namespace

TEST(AssembleProblem, TupleCounts) {
    const Tensor t2 = basis_cube(2, 3);
    EXPECT_EQ(assemble_problem(t2, pm_sets(t2)).constraint_count(), 4);

    const Tensor t5 = random_tensor(Shape{5, 10, 10}, 1);
    const std::vector<HittingSet> h4{build_h4(5)};
    EXPECT_EQ(assemble_problem(t5, h4).constraint_count(), h4[0].size());
    EXPECT_EQ(h4[0].size(), 18);

    const Tensor t4 = random_tensor(Shape{2, 2, 3, 3}, 2);
    const auto p4 = assemble_problem(t4, pm_sets(t4));
    EXPECT_EQ(p4.constraint_count(), 16);
    EXPECT_EQ(p4.slice_rows, 3);
    EXPECT_EQ(p4.slice_cols, 3);
}

TEST(AssembleProblem, Errors) {
    const Tensor t = random_tensor(Shape{3, 3, 3}, 3);
    EXPECT_THROW(assemble_problem(t, std::vector<HittingSet>{}), ShapeError);
    EXPECT_THROW(assemble_problem(t, std::vector<HittingSet>{build_classical(2, ClassicalKind::pm_basis)}), ShapeError);
    const std::vector<HittingSet> big{build_h2(6)};
    EXPECT_THROW(assemble_problem(random_tensor(Shape{6, 6, 6}, 1), big, 100), BudgetError);
    const std::vector<HittingSet> flat{build_classical(3, ClassicalKind::antipodal)};
    EXPECT_THROW(assemble_problem(t, flat), ParameterError);
    EXPECT_THROW(assemble_problem(random_tensor(Shape{3, 3}, 1), std::vector<HittingSet>{}), ShapeError);
}

TEST(SolveNuclear, RankOneBasisCube) {
    const Tensor t = basis_cube(2, 3);
    const auto sets = pm_sets(t);
    const auto r = solve(t, sets);
    EXPECT_NEAR(r.u, 1.0, 1e-5);
    EXPECT_TRUE(r.certified);
    EXPECT_NEAR(r.lower, r.u / std::sqrt(2.0), 1e-15);
    EXPECT_LE(r.lower, 1.0);
    EXPECT_GE(r.upper, 1.0 - 1e-5);
    EXPECT_NEAR(r.u, frobenius_inner(t, r.y), 1e-12);
    EXPECT_LE(worst_constraint(r.y, sets[0]), 1.0 + 10 * kTol);
}

TEST(SolveNuclear, OdecoSandwich) {
    const std::vector<double> weights{2.0, 1.0};
    const auto inst = gen_odeco({3, 3, 3}, weights, 5);
    EXPECT_NEAR(inst.true_nuclear, 3.0, 1e-12);
    const auto sets = pm_sets(inst.tensor);
    const auto r = solve(inst.tensor, sets);
    EXPECT_LE(r.lower, 3.0 + 1e-5);
    EXPECT_GE(r.u, 3.0 - 10 * kTol);
    EXPECT_LE(r.lower, r.upper);
}

TEST(SolveNuclear, PropertyFeasibleAndAboveNuclearNorm) {
    for (std::uint64_t seed = 0; seed < 8; ++seed) {
        const auto inst = gen_odeco({3, 4, 4}, 3, derive_seed(21, seed));
        const auto sets = pm_sets(inst.tensor);
        const auto r = solve(inst.tensor, sets);
        EXPECT_LE(r.max_violation, 10 * kTol) << seed;
        EXPECT_LE(worst_constraint(r.y, sets[0]), 1.0 + 10 * kTol) << seed;
        EXPECT_GE(r.u, inst.true_nuclear - 10 * kTol) << seed;
        EXPECT_LE(r.lower, inst.true_nuclear + 1e-5) << seed;
        EXPECT_LE(loop_flattening(inst.tensor), r.u + 10 * kTol) << seed;
    }
}

TEST(SolveNuclear, RandomSetIsUncertified) {
    const Tensor t = random_tensor(Shape{3, 3, 3}, 4);
    const std::vector<HittingSet> sets{build_random(3, 12, 6)};
    const auto r = solve(t, sets);
    EXPECT_FALSE(r.certified);
    EXPECT_TRUE(std::isnan(r.lower));
    EXPECT_LE(r.max_violation, 10 * kTol);
}

TEST(SolveNuclear, Deterministic) {
    const Tensor t = random_tensor(Shape{3, 4, 5}, 7);
    const auto sets = pm_sets(t);
    const auto a = solve(t, sets, 300);
    const auto b = solve(t, sets, 300);
    EXPECT_EQ(a.u, b.u);
    EXPECT_EQ(a.iterations, b.iterations);
    EXPECT_EQ(a.y.data(), b.y.data());
}

TEST(SolveNuclear, IterationCapFlagsNonConvergence) {
    const Tensor t = random_tensor(Shape{4, 4, 4}, 8);
    const auto r = solve(t, pm_sets(t), 3);
    EXPECT_FALSE(r.converged);
    EXPECT_EQ(r.iterations, 3);
    EXPECT_LE(r.max_violation, 1e-12);
}

TEST(SolveNuclear, Errors) {
    const Tensor t = basis_cube(2, 3);
    const auto problem = assemble_problem(t, pm_sets(t));
    EXPECT_THROW(solve_nuclear_sdp(problem, 0.0), ParameterError);
    EXPECT_THROW(solve_nuclear_sdp(problem, 1e-6, 0), ParameterError);
}

TEST(FlatteningBaseline, RankOne) {
    Rng rng(3);
    const std::vector<VectorXd> xs{rng.sphere_point(2), rng.sphere_point(3), rng.sphere_point(4)};
    EXPECT_NEAR(flattening_baseline(2.5 * outer_product(xs)), 2.5, 1e-10);
}

TEST(FlatteningBaseline, OrthogonalOdeco) {
    const std::vector<VectorXd> a{basis(3, 0), basis(3, 0), basis(3, 0)};
    const std::vector<VectorXd> b{basis(3, 1), basis(3, 1), basis(3, 1)};
    EXPECT_NEAR(flattening_baseline(2.0 * outer_product(a) + outer_product(b)), 3.0, 1e-10);
}

TEST(FlatteningBaseline, MatchesLoopOracleAndSdp) {
    const Tensor t = random_tensor(Shape{3, 3, 3}, 5);
    const double base = flattening_baseline(t);
    EXPECT_NEAR(base, loop_flattening(t), 1e-10);
    EXPECT_LE(base, solve(t, pm_sets(t)).u + 10 * kTol);
    for (std::uint64_t seed = 0; seed < 10; ++seed) {
        const Tensor s = random_tensor(Shape{2, 3, 4}, 50 + seed);
        EXPECT_NEAR(flattening_baseline(s), loop_flattening(s), 1e-10);
    }
    EXPECT_THROW(flattening_baseline(random_tensor(Shape{2, 2}, 1)), ShapeError);
}
