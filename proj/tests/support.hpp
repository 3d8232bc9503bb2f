#pragma once

#include "sphcover/random.hpp"
#include "sphcover/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

namespace sphcover::testing {

inline Tensor random_tensor(const Shape& shape, std::uint64_t seed) {
    Rng rng(seed);
    Tensor t(shape);
    t.data() = rng.gaussian_vector(t.size());
    return t;
}

inline std::vector<Eigen::VectorXd> random_vectors(const Shape& shape, Rng& rng) {
    std::vector<Eigen::VectorXd> xs;
    for (Index n : shape) xs.push_back(rng.gaussian_vector(n));
    return xs;
}

inline Eigen::VectorXd basis(Index n, Index i) { return Eigen::VectorXd::Unit(n, i); }

/// e_i (x) ... (x) e_i in R^{n x ... x n}.
inline Tensor basis_cube(Index n, Index d, Index i = 0) {
    const std::vector<Eigen::VectorXd> xs(static_cast<std::size_t>(d), basis(n, i));
    return outer_product(xs);
}

/// Random shape of order d with dimensions in [1, max_dim].
inline Shape random_shape(Rng& rng, Index d, Index max_dim) {
    Shape s;
    for (Index k = 0; k < d; ++k) s.push_back(1 + static_cast<Index>(rng.uniform() * static_cast<double>(max_dim)));
    return s;
}

inline double relative_error(double a, double b) {
    const double scale = std::max({std::abs(a), std::abs(b), 1e-300});
    return std::abs(a - b) / scale;
}

}  // namespace sphcover::testing
