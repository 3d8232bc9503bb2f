#pragma once

#include "sphcover/hitting_set.hpp"
#include "sphcover/tensor.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace sphcover {

inline constexpr std::int64_t kDefaultConstraintBudget = 5000;

/// max <T, Z> subject to |Z(x_1, ..., x_{d-2}, ., .)|_sigma <= 1 for every
/// tuple of the hitting-set product. Stored with the enumerated modes
/// first (same ordering rule as approx_spectral_norm), so each constraint
/// map is A_x(Z) = w_x^T Zmat with w_x = x_1 (x) ... (x) x_{d-2} and Zmat
/// the P x Q unfolding.
struct NuclearSdpProblem {
    Tensor tensor;
    std::vector<Index> mode_permutation;
    std::vector<HittingSet> sets;
    /// P x K, one Kronecker weight per constraint tuple.
    Eigen::MatrixXd weights;
    Index slice_rows = 0;
    Index slice_cols = 0;
    /// Product of claimed ratios (NaN unless every set is certified).
    double tau_product = 1.0;
    bool certified = true;

    Index constraint_count() const { return weights.cols(); }
};

struct NuclearApproxResult {
    /// <T, Y>.
    double u = 0.0;
    /// Feasible maximizer in T's mode order.
    Tensor y;
    /// u * tau_product; NaN when the sets are not certified.
    double lower = 0.0;
    double upper = 0.0;
    /// max_x sigma_1(A_x(Y)) - 1.
    double max_violation = 0.0;
    double primal_residual = 0.0;
    double dual_residual = 0.0;
    int iterations = 0;
    bool converged = false;
    bool certified = false;
};

/// Materializes the constraint tuples. Throws BudgetError above `budget`
/// constraints and ParameterError when the tuple weights do not span the
/// enumerated space (the program would be unbounded).
NuclearSdpProblem assemble_problem(const Tensor& t, std::span<const HittingSet> sets,
                                   std::int64_t budget = kDefaultConstraintBudget);

/// ADMM on the consensus splitting M_x = A_x(Z): Z-update by the normal
/// equations (Gram matrix W W^T factored once), M-update by spectral-ball
/// projection, dual ascent on Lambda_x. The penalty starts at 1 and is
/// doubled or halved every 50 iterations when the normalized primal and
/// dual residuals differ by more than a factor 10. The returned Y is the
/// best iterate scaled into the feasible set.
NuclearApproxResult solve_nuclear_sdp(const NuclearSdpProblem& problem, double tol = 1e-6, int max_iter = 5000);

/// Largest matrix nuclear norm over the three mode unfoldings of an
/// order-3 tensor; a lower bound on the tensor nuclear norm.
double flattening_baseline(const Tensor& t);

}  // namespace sphcover
