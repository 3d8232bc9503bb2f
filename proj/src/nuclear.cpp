#include "sphcover/nuclear.hpp"

#include "sphcover/linalg.hpp"
#include "sphcover/parallel.hpp"
#include "sphcover/spectral.hpp"

#include <Eigen/Cholesky>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sphcover {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr int kRhoCheckInterval = 50;

using RowMap = Eigen::Map<RowMatrixX<double>>;
using ConstRowMap = Eigen::Map<const RowMatrixX<double>>;

/// Each row of `rows` is a row-major slice; project every slice onto the
/// spectral-norm unit ball.
void project_rows(RowMatrixX<double>& rows, Index r, Index c) {
    parallel_for(rows.rows(), [&](std::int64_t k) {
        RowMap slice(rows.row(k).data(), r, c);
        slice = project_spectral_ball(slice);
    });
}

double max_slice_sigma(const RowMatrixX<double>& rows, Index r, Index c) {
    std::vector<double> sigma(static_cast<std::size_t>(rows.rows()));
    parallel_for(rows.rows(), [&](std::int64_t k) {
        const ConstRowMap slice(rows.row(k).data(), r, c);
        sigma[static_cast<std::size_t>(k)] = thin_svd(slice).singular_values[0];
    });
    return *std::max_element(sigma.begin(), sigma.end());
}

struct Feasible {
    double u = -std::numeric_limits<double>::infinity();
    RowMatrixX<double> y;
    double violation = 0.0;
};

/// Z scaled onto the boundary of the feasible set.
Feasible scale_feasible(const NuclearSdpProblem& p, const RowMatrixX<double>& tmat, const RowMatrixX<double>& z) {
    const RowMatrixX<double> az = p.weights.transpose() * z;
    const double smax = max_slice_sigma(az, p.slice_rows, p.slice_cols);
    Feasible f;
    if (!(smax > 0.0)) {
        f.u = 0.0;
        f.y = RowMatrixX<double>::Zero(z.rows(), z.cols());
        return f;
    }
    const double scale = (tmat.cwiseProduct(z).sum() > 0.0) ? smax : std::max(1.0, smax);
    f.y = z / scale;
    f.u = tmat.cwiseProduct(f.y).sum();
    const RowMatrixX<double> ay = p.weights.transpose() * f.y;
    f.violation = max_slice_sigma(ay, p.slice_rows, p.slice_cols) - 1.0;
    return f;
}

std::vector<Index> inverse(const std::vector<Index>& perm) {
    std::vector<Index> inv(perm.size());
    for (std::size_t k = 0; k < perm.size(); ++k) inv[static_cast<std::size_t>(perm[k])] = static_cast<Index>(k);
    return inv;
}

}  // namespace

NuclearSdpProblem assemble_problem(const Tensor& t, std::span<const HittingSet> sets, std::int64_t budget) {
    const Index d = t.order();
    if (d < 3) throw ShapeError("nuclear SDP needs a tensor of order >= 3");
    if (static_cast<Index>(sets.size()) != d - 2)
        throw ShapeError("expected " + std::to_string(d - 2) + " hitting sets, got " + std::to_string(sets.size()));
    if (!t.data().allFinite()) throw NumericError("tensor has non-finite entries");

    NuclearSdpProblem p;
    p.mode_permutation = enumeration_order(t.shape());
    std::vector<const HittingSet*> hs;
    for (const auto& h : sets) hs.push_back(&h);
    std::stable_sort(hs.begin(), hs.end(), [](const HittingSet* a, const HittingSet* b) { return a->dim() < b->dim(); });

    double count = 1.0;
    for (std::size_t k = 0; k < hs.size(); ++k) {
        const Index mode = p.mode_permutation[k];
        if (hs[k]->dim() != t.dim(mode))
            throw ShapeError("hitting set of dimension " + std::to_string(hs[k]->dim()) + " does not match mode " +
                             std::to_string(mode + 1));
        count *= static_cast<double>(hs[k]->size());
    }
    if (count > static_cast<double>(budget))
        throw BudgetError(format_param(count) + " constraints exceed the budget of " + std::to_string(budget) +
                          "; use smaller hitting sets");

    p.tensor = permute_modes(t, std::span<const Index>(p.mode_permutation));
    p.slice_rows = p.tensor.dim(d - 2);
    p.slice_cols = p.tensor.dim(d - 1);
    for (const auto* h : hs) p.sets.push_back(*h);
    p.certified = std::all_of(hs.begin(), hs.end(), [](const HittingSet* h) { return h->certified(); });
    p.tau_product = 1.0;
    for (const auto* h : hs) p.tau_product *= h->claimed_tau();
    if (!p.certified) p.tau_product = std::numeric_limits<double>::quiet_NaN();

    const auto total = static_cast<Index>(count);
    const Index dim_p = p.tensor.unfold(d - 2).rows();
    p.weights.resize(dim_p, total);
    for (Index tuple = 0; tuple < total; ++tuple) {
        Index rest = tuple;
        std::vector<Index> digits(hs.size());
        for (std::size_t k = hs.size(); k-- > 0;) {
            digits[k] = rest % hs[k]->size();
            rest /= hs[k]->size();
        }
        VectorXd w = VectorXd::Ones(1);
        for (std::size_t k = 0; k < hs.size(); ++k) {
            const auto z = hs[k]->vector(digits[k]);
            VectorXd next(w.size() * z.size());
            for (Index i = 0; i < w.size(); ++i) next.segment(i * z.size(), z.size()) = w[i] * z;
            w = std::move(next);
        }
        p.weights.col(tuple) = w;
    }

    const Eigen::SelfAdjointEigenSolver<MatrixXd> eig(p.weights * p.weights.transpose(), Eigen::EigenvaluesOnly);
    if (!(eig.eigenvalues().minCoeff() > 1e-10 * eig.eigenvalues().maxCoeff()))
        throw ParameterError("hitting-set tuples do not span the enumerated modes; the program is unbounded");
    return p;
}

NuclearApproxResult solve_nuclear_sdp(const NuclearSdpProblem& p, double tol, int max_iter) {
    if (!(tol > 0.0)) throw ParameterError("tol must be positive");
    if (max_iter < 1) throw ParameterError("max_iter must be >= 1");
    const Index d = p.tensor.order();
    const auto unfolded = p.tensor.unfold(d - 2);
    const RowMatrixX<double> tmat = unfolded;
    const MatrixXd& w = p.weights;
    const Index rows = p.slice_rows;
    const Index cols = p.slice_cols;

    NuclearApproxResult out;
    out.certified = p.certified;
    const double tnorm = tmat.norm();
    if (tnorm == 0.0) {
        out.y = Tensor(p.tensor.shape());
        out.converged = true;
        out.lower = p.certified ? 0.0 : std::numeric_limits<double>::quiet_NaN();
        return out;
    }

    const Eigen::LLT<MatrixXd> gram(w * w.transpose());
    RowMatrixX<double> z = tmat / tnorm;
    RowMatrixX<double> az = w.transpose() * z;
    RowMatrixX<double> m = az;
    project_rows(m, rows, cols);
    RowMatrixX<double> lambda = RowMatrixX<double>::Zero(az.rows(), az.cols());
    double rho = 1.0;

    Feasible best;
    const auto keep_best = [&] {
        Feasible f = scale_feasible(p, tmat, z);
        if (f.u > best.u) best = std::move(f);
    };

    int it = 0;
    double r_norm = 0.0;
    double s_norm = 0.0;
    while (it < max_iter) {
        ++it;
        const RowMatrixX<double> rhs = tmat / rho + w * (m - lambda / rho);
        z = gram.solve(rhs);
        az.noalias() = w.transpose() * z;
        const RowMatrixX<double> m_old = m;
        m = az + lambda / rho;
        project_rows(m, rows, cols);
        const RowMatrixX<double> gap = az - m;
        lambda += rho * gap;

        const double primal = gap.norm();
        const double dual = rho * (w * (m - m_old)).norm();
        r_norm = primal / std::max({az.norm(), m.norm(), 1e-300});
        s_norm = dual / std::max((w * lambda).norm(), 1e-300);
        if (r_norm <= tol && s_norm <= tol) {
            out.converged = true;
            break;
        }
        if (it % kRhoCheckInterval == 0) {
            keep_best();
            if (r_norm > 10.0 * s_norm)
                rho *= 2.0;
            else if (s_norm > 10.0 * r_norm)
                rho /= 2.0;
        }
    }
    keep_best();

    out.iterations = it;
    out.primal_residual = r_norm;
    out.dual_residual = s_norm;
    out.u = best.u;
    out.upper = best.u;
    out.lower = p.certified ? best.u * p.tau_product : std::numeric_limits<double>::quiet_NaN();
    out.max_violation = best.violation;
    const Tensor y_perm(p.tensor.shape(), Eigen::Map<const VectorXd>(best.y.data(), best.y.size()));
    const auto inv = inverse(p.mode_permutation);
    out.y = permute_modes(y_perm, std::span<const Index>(inv));
    return out;
}

double flattening_baseline(const Tensor& t) {
    if (t.order() != 3) throw ShapeError("flattening_baseline needs an order-3 tensor");
    double best = 0.0;
    const std::vector<std::vector<Index>> orders = {{0, 1, 2}, {1, 0, 2}, {2, 0, 1}};
    for (const auto& perm : orders) {
        const Tensor p = permute_modes(t, std::span<const Index>(perm));
        best = std::max(best, nuclear_norm_matrix(p.unfold(1)));
    }
    return best;
}

}  // namespace sphcover
