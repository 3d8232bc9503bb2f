#pragma once

#include "sphcover/tensor.hpp"

#include <array>
#include <cstdint>
#include <span>

namespace sphcover {

/// T = sum_i lambda_i x_i (x) y_i (x) z_i with unit x_i and orthonormal
/// y_i, z_i, so that |T|_sigma = max lambda and |T|_* = sum lambda.
struct OdecoInstance {
    Tensor tensor;
    Eigen::VectorXd weights;
    /// Factors as columns: n_1 x r, n_2 x r, n_3 x r.
    Eigen::MatrixXd x;
    Eigen::MatrixXd y;
    Eigen::MatrixXd z;
    double true_spectral = 0.0;
    double true_nuclear = 0.0;
    std::uint64_t seed = 0;
};

using Dims3 = std::array<Index, 3>;

/// lambda_i = |N(0,1)|, x_i normalized Gaussians, y_i and z_i orthonormal
/// columns from QR of Gaussian matrices. Needs 1 <= r <= min(n_2, n_3).
OdecoInstance gen_odeco(const Dims3& dims, Index r, std::uint64_t seed);

/// Same factors, with the weights given (all must be positive).
OdecoInstance gen_odeco(const Dims3& dims, std::span<const double> weights, std::uint64_t seed);

/// max |(x_i^T x_j)(y_i^T y_j)| and max |z_i^T z_j| over i != j.
double odeco_orthogonality_residual(const OdecoInstance& inst);
/// |T - sum lambda_i x_i (x) y_i (x) z_i|_F.
double odeco_reconstruction_residual(const OdecoInstance& inst);

}  // namespace sphcover
