#include "sphcover/odeco.hpp"

#include "sphcover/random.hpp"

#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

namespace sphcover {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

MatrixXd gaussian_matrix(Rng& rng, Index rows, Index cols) {
    MatrixXd m(rows, cols);
    for (Index j = 0; j < cols; ++j) m.col(j) = rng.gaussian_vector(rows);
    return m;
}

/// Thin Q factor with the signs fixed so that diag(R) > 0.
MatrixXd orthonormal_columns(const MatrixXd& a) {
    const Eigen::HouseholderQR<MatrixXd> qr(a);
    MatrixXd q = qr.householderQ() * MatrixXd::Identity(a.rows(), a.cols());
    const MatrixXd r = qr.matrixQR().topRows(a.cols()).triangularView<Eigen::Upper>();
    for (Index j = 0; j < a.cols(); ++j)
        if (r(j, j) < 0.0) q.col(j) = -q.col(j);
    return q;
}

Tensor assemble(const Dims3& dims, const VectorXd& w, const MatrixXd& x, const MatrixXd& y, const MatrixXd& z) {
    Tensor t(Shape(dims.begin(), dims.end()));
    for (Index i = 0; i < w.size(); ++i) {
        const std::vector<VectorXd> f{x.col(i), y.col(i), z.col(i)};
        t.data() += w[i] * outer_product(f).data();
    }
    return t;
}

OdecoInstance generate(const Dims3& dims, Index r, std::uint64_t seed, const VectorXd* forced) {
    for (Index n : dims)
        if (n < 1) throw ShapeError("odeco dimensions must be positive");
    if (r < 1) throw ParameterError("odeco needs r >= 1");
    if (r > std::min(dims[1], dims[2]))
        throw ParameterError("odeco r = " + std::to_string(r) + " exceeds min(n2, n3) = " +
                             std::to_string(std::min(dims[1], dims[2])));
    Rng rng(seed);
    OdecoInstance inst;
    inst.seed = seed;
    inst.weights = VectorXd(r);
    for (Index i = 0; i < r; ++i) inst.weights[i] = std::abs(rng.gaussian());
    if (forced) inst.weights = *forced;
    inst.x = gaussian_matrix(rng, dims[0], r).colwise().normalized();
    inst.y = orthonormal_columns(gaussian_matrix(rng, dims[1], r));
    inst.z = orthonormal_columns(gaussian_matrix(rng, dims[2], r));
    inst.tensor = assemble(dims, inst.weights, inst.x, inst.y, inst.z);
    inst.true_spectral = inst.weights.maxCoeff();
    inst.true_nuclear = inst.weights.sum();
    return inst;
}

}  // namespace

OdecoInstance gen_odeco(const Dims3& dims, Index r, std::uint64_t seed) {
    return generate(dims, r, seed, nullptr);
}

OdecoInstance gen_odeco(const Dims3& dims, std::span<const double> weights, std::uint64_t seed) {
    if (weights.empty()) throw ParameterError("odeco needs at least one weight");
    VectorXd w(static_cast<Index>(weights.size()));
    for (std::size_t i = 0; i < weights.size(); ++i) {
        if (!(weights[i] > 0.0)) throw ParameterError("odeco weights must be positive");
        w[static_cast<Index>(i)] = weights[i];
    }
    return generate(dims, w.size(), seed, &w);
}

double odeco_orthogonality_residual(const OdecoInstance& inst) {
    const MatrixXd gx = inst.x.transpose() * inst.x;
    const MatrixXd gy = inst.y.transpose() * inst.y;
    const MatrixXd gz = inst.z.transpose() * inst.z;
    double worst = 0.0;
    for (Index i = 0; i < gx.rows(); ++i)
        for (Index j = 0; j < gx.cols(); ++j)
            if (i != j) worst = std::max({worst, std::abs(gx(i, j) * gy(i, j)), std::abs(gz(i, j))});
    return worst;
}

double odeco_reconstruction_residual(const OdecoInstance& inst) {
    const Tensor& t = inst.tensor;
    double sum = 0.0;
    for (Index i = 0; i < t.dim(0); ++i)
        for (Index j = 0; j < t.dim(1); ++j)
            for (Index k = 0; k < t.dim(2); ++k) {
                double entry = 0.0;
                for (Index r = 0; r < inst.weights.size(); ++r)
                    entry += inst.weights[r] * inst.x(i, r) * inst.y(j, r) * inst.z(k, r);
                const double diff = t(i, j, k) - entry;
                sum += diff * diff;
            }
    return std::sqrt(sum);
}

}  // namespace sphcover
