#pragma once

#include "sphcover/hitting_set.hpp"
#include "sphcover/spectral.hpp"
#include "sphcover/tensor.hpp"

#include <span>

namespace sphcover {

/// p(x) = T(x, ..., x).
double homogeneous_poly(const Tensor& t, const Eigen::VectorXd& x);

/// Throws SymmetryError when some entry changes by more than
/// 1e-10 max(1, max|T|) under a transposition of modes.
void require_symmetric(const Tensor& t);

/// (1 / 2^d) sum over xi in {-1, 1}^d of (prod xi) p(sum xi_k x_k), which
/// equals d! T(x_1, ..., x_d) for symmetric T.
double polarization_eval(const Tensor& t, std::span<const Eigen::VectorXd> xs);

struct PolyOptResult {
    Eigen::VectorXd z;
    /// p(z).
    double value;
    /// Even degree only: p at the best candidate for -p, an upper
    /// estimate of min p on the sphere. NaN for odd degree.
    double min_estimate;
    SpectralApproxResult spectral;
};

/// Runs approx_spectral_norm with `h` on the d - 2 enumerated modes and
/// returns the best normalized sign combination sum xi_k z_k. For odd
/// degree p(z) >= d! d^-d bound_factor max p.
PolyOptResult approx_poly_opt(const Tensor& t, const HittingSet& h);

}  // namespace sphcover
