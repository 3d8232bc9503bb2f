#pragma once

#include "sphcover/covering.hpp"
#include "sphcover/hitting_set.hpp"
#include "sphcover/tensor.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sphcover {

struct SpectralApproxResult {
    /// multilinear_form(T, solution).
    double value = 0.0;
    /// One unit vector per mode of T, in T's mode order.
    std::vector<Eigen::VectorXd> solution;
    /// Product of the claimed ratios of the enumerated sets; NaN when a
    /// set is not certified.
    double bound_factor = 1.0;
    bool certified = true;
    std::int64_t enumerated_count = 0;
    /// Position k of the enumeration handled mode mode_permutation[k] of T.
    std::vector<Index> mode_permutation;
    // ALS diagnostics.
    int iterations = 0;
    bool converged = true;
    bool degenerate = false;
    /// Objective after each ALS sweep.
    std::vector<double> history;
};

/// Modes sorted by ascending dimension (stable); the first d - 2 are
/// enumerated over hitting sets and the last two are solved exactly.
std::vector<Index> enumeration_order(const Shape& shape);

/// Enumerates every tuple of H_1 x ... x H_{d-2}, reduces T to a matrix
/// and keeps the largest leading singular value; the first tuple in
/// lexicographic order wins ties. The sets may be passed in any order:
/// they are matched to the d - 2 smallest modes by ascending dimension.
SpectralApproxResult approx_spectral_norm(const Tensor& t, std::span<const HittingSet> sets);

/// Hitting sets for the enumerated modes of `t`: build_h5 at the optimal
/// parameters, or build_h4 when H3 exceeds the vector budget.
std::vector<HittingSet> default_hitting_sets(const Tensor& t, std::int64_t budget = kDefaultVectorBudget);

/// approx_spectral_norm with default_hitting_sets.
SpectralApproxResult approx_spectral_norm(const Tensor& t);

/// Cyclic alternating maximization x_k <- T(.., x_k = ., ..) / norm. Stops
/// when the relative objective change drops below tol. A zero
/// contraction returns the start unchanged with degenerate = true.
SpectralApproxResult als_refine(const Tensor& t, std::span<const Eigen::VectorXd> start, int max_iter = 500,
                                double tol = 1e-10);

}  // namespace sphcover
