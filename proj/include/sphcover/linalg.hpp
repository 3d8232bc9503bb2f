#pragma once

#include "sphcover/errors.hpp"
#include "sphcover/tensor.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

namespace sphcover {

template <typename Scalar>
struct SingularTriple {
    Scalar value;
    VectorX<Scalar> u;
    VectorX<Scalar> v;
};

/// Thin SVD: U is rows x k, V is cols x k with k = min(rows, cols).
template <typename Scalar>
struct SvdResult {
    VectorX<Scalar> singular_values;
    MatrixX<Scalar> u;
    MatrixX<Scalar> v;

    MatrixX<Scalar> reconstruct() const {
        return u * singular_values.asDiagonal() * v.transpose();
    }
};

namespace detail {

template <typename Derived>
void require_finite(const Eigen::MatrixBase<Derived>& a, const char* what) {
    if (a.size() == 0) throw ShapeError(std::string(what) + ": empty matrix");
    if (!a.allFinite()) throw NumericError(std::string(what) + ": non-finite entries");
}

/// Power iteration on A^T A from `v`; returns the converged Rayleigh
/// quotient and leaves the iterate in `v`.
template <typename Scalar>
Scalar gram_power_iteration(const MatrixX<Scalar>& a, VectorX<Scalar>& v, int max_iter, Scalar tol) {
    Scalar lambda(0);
    for (int it = 0; it < max_iter; ++it) {
        VectorX<Scalar> w = a.transpose() * (a * v);
        const Scalar next = v.dot(w);
        const Scalar norm = w.norm();
        if (norm == Scalar(0)) return Scalar(0);
        v = w / norm;
        if (it > 0 && std::abs(next - lambda) <= tol * std::abs(next)) return next;
        lambda = next;
    }
    return lambda;
}

}  // namespace detail

/// Largest singular value with unit singular vectors, u^T A v = value.
/// Power iteration on A^T A from the normalized all-ones vector. A short
/// run from a perturbed e_1, orthogonal to the first result, detects a
/// start vector that missed the top singular subspace.
template <typename Derived>
SingularTriple<typename Derived::Scalar> spectral_norm_matrix(const Eigen::MatrixBase<Derived>& a_in) {
    using Scalar = typename Derived::Scalar;
    detail::require_finite(a_in, "spectral_norm_matrix");
    const MatrixX<Scalar> a = a_in;
    const Index n = a.cols();
    constexpr int max_iter = 10000;
    const Scalar tol(1e-12);

    VectorX<Scalar> v = VectorX<Scalar>::Ones(n) / std::sqrt(Scalar(n));
    Scalar lambda = detail::gram_power_iteration(a, v, max_iter, tol);

    if (n > 1) {
        VectorX<Scalar> probe = VectorX<Scalar>::Constant(n, Scalar(0.1) / std::sqrt(Scalar(n)));
        probe[0] += Scalar(1);
        if (lambda > Scalar(0)) probe -= v.dot(probe) * v;
        const Scalar pn = probe.norm();
        if (pn > Scalar(0)) {
            probe /= pn;
            VectorX<Scalar> q = probe;
            const Scalar alt = detail::gram_power_iteration(a, q, 50, tol);
            if (alt > lambda * (Scalar(1) + Scalar(1e-10))) {
                v = q;
                lambda = detail::gram_power_iteration(a, v, max_iter, tol);
            }
        }
    }

    VectorX<Scalar> av = a * v;
    const Scalar value = av.norm();
    if (value == Scalar(0)) {
        VectorX<Scalar> u = VectorX<Scalar>::Zero(a.rows());
        u[0] = Scalar(1);
        VectorX<Scalar> e = VectorX<Scalar>::Zero(n);
        e[0] = Scalar(1);
        return {Scalar(0), u, e};
    }
    return {value, av / value, v};
}

/// One-sided Jacobi (Hestenes) SVD. Singular values are sorted
/// non-increasing; left vectors of zero singular values are completed to
/// an orthonormal set.
template <typename Derived>
SvdResult<typename Derived::Scalar> thin_svd(const Eigen::MatrixBase<Derived>& a_in) {
    using Scalar = typename Derived::Scalar;
    detail::require_finite(a_in, "thin_svd");
    if (a_in.rows() < a_in.cols()) {
        auto t = thin_svd(a_in.transpose().eval());
        std::swap(t.u, t.v);
        return t;
    }

    MatrixX<Scalar> w = a_in;
    const Index m = w.rows();
    const Index n = w.cols();
    MatrixX<Scalar> v = MatrixX<Scalar>::Identity(n, n);
    const Scalar tol(1e-13);
    constexpr int max_sweeps = 60;

    bool converged = n < 2;
    Scalar worst(0);
    for (int sweep = 0; sweep < max_sweeps && !converged; ++sweep) {
        worst = Scalar(0);
        bool rotated = false;
        for (Index p = 0; p + 1 < n; ++p) {
            for (Index q = p + 1; q < n; ++q) {
                const Scalar alpha = w.col(p).squaredNorm();
                const Scalar beta = w.col(q).squaredNorm();
                const Scalar gamma = w.col(p).dot(w.col(q));
                if (alpha == Scalar(0) || beta == Scalar(0)) continue;
                const Scalar off = std::abs(gamma) / std::sqrt(alpha * beta);
                worst = std::max(worst, off);
                if (off <= tol) continue;
                rotated = true;
                const Scalar zeta = (beta - alpha) / (Scalar(2) * gamma);
                const Scalar t = (zeta >= Scalar(0) ? Scalar(1) : Scalar(-1)) /
                                 (std::abs(zeta) + std::sqrt(Scalar(1) + zeta * zeta));
                const Scalar c = Scalar(1) / std::sqrt(Scalar(1) + t * t);
                const Scalar s = c * t;
                for (Index i = 0; i < m; ++i) {
                    const Scalar wp = w(i, p);
                    const Scalar wq = w(i, q);
                    w(i, p) = c * wp - s * wq;
                    w(i, q) = s * wp + c * wq;
                }
                for (Index i = 0; i < n; ++i) {
                    const Scalar vp = v(i, p);
                    const Scalar vq = v(i, q);
                    v(i, p) = c * vp - s * vq;
                    v(i, q) = s * vp + c * vq;
                }
            }
        }
        converged = !rotated;
    }
    if (!converged)
        throw NumericError("thin_svd: no convergence after " + std::to_string(max_sweeps) +
                           " sweeps, off-diagonal residual " + std::to_string(worst));

    VectorX<Scalar> sigma(n);
    for (Index j = 0; j < n; ++j) sigma[j] = w.col(j).norm();
    std::vector<Index> order(static_cast<std::size_t>(n));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index i, Index j) { return sigma[i] > sigma[j]; });

    SvdResult<Scalar> out{VectorX<Scalar>(n), MatrixX<Scalar>::Zero(m, n), MatrixX<Scalar>(n, n)};
    const Scalar floor = sigma.maxCoeff() * std::numeric_limits<Scalar>::epsilon() * Scalar(m);
    std::vector<Index> missing;
    for (Index k = 0; k < n; ++k) {
        const Index j = order[static_cast<std::size_t>(k)];
        out.singular_values[k] = sigma[j];
        out.v.col(k) = v.col(j);
        if (sigma[j] > floor && sigma[j] > Scalar(0))
            out.u.col(k) = w.col(j) / sigma[j];
        else
            missing.push_back(k);
    }
    // Complete U with Gram-Schmidt against standard basis candidates.
    Index candidate = 0;
    for (Index k : missing) {
        for (; candidate < m; ++candidate) {
            VectorX<Scalar> e = VectorX<Scalar>::Zero(m);
            e[candidate] = Scalar(1);
            for (int pass = 0; pass < 2; ++pass)
                for (Index j = 0; j < n; ++j)
                    if (j != k) e -= out.u.col(j).dot(e) * out.u.col(j);
            const Scalar en = e.norm();
            if (en > Scalar(0.5)) {
                out.u.col(k) = e / en;
                ++candidate;
                break;
            }
        }
    }
    return out;
}

/// Nearest matrix (Frobenius) in the spectral-norm unit ball: singular
/// values clipped at 1.
template <typename Derived>
MatrixX<typename Derived::Scalar> project_spectral_ball(const Eigen::MatrixBase<Derived>& a) {
    using Scalar = typename Derived::Scalar;
    const auto svd = thin_svd(a);
    if (svd.singular_values[0] <= Scalar(1)) return a;
    const VectorX<Scalar> excess = (svd.singular_values.array() - Scalar(1)).cwiseMax(Scalar(0)).matrix();
    return a - svd.u * excess.asDiagonal() * svd.v.transpose();
}

/// Sum of singular values.
template <typename Derived>
typename Derived::Scalar nuclear_norm_matrix(const Eigen::MatrixBase<Derived>& a) {
    return thin_svd(a).singular_values.sum();
}

}  // namespace sphcover
