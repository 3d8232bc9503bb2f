#include "sphcover/polynomial.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace sphcover {

using Eigen::VectorXd;

namespace {

struct SignSearch {
    VectorXd z;
    double value;
};

/// Best normalized sum xi_k z_k under `score`; sign patterns are visited
/// in binary order and the first maximum is kept.
template <typename Score>
SignSearch best_sign_combination(std::span<const VectorXd> zs, Score&& score) {
    const auto d = static_cast<int>(zs.size());
    SignSearch best{VectorXd(), -std::numeric_limits<double>::infinity()};
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        VectorXd w = VectorXd::Zero(zs[0].size());
        for (int k = 0; k < d; ++k) w += ((mask >> k) & 1u ? -1.0 : 1.0) * zs[static_cast<std::size_t>(k)];
        const double norm = w.norm();
        if (norm <= 1e-12) continue;
        w /= norm;
        const double s = score(w);
        if (s > best.value) best = {std::move(w), s};
    }
    if (best.z.size() == 0) throw NumericError("every sign combination of the solution vectors vanishes");
    return best;
}

}  // namespace

double homogeneous_poly(const Tensor& t, const VectorXd& x) {
    const std::vector<VectorXd> xs(static_cast<std::size_t>(t.order()), x);
    return multilinear_form(t, std::span<const VectorXd>(xs));
}

void require_symmetric(const Tensor& t) {
    const double dev = symmetry_deviation(t);
    const double scale = std::max(1.0, t.data().cwiseAbs().maxCoeff());
    if (!(dev <= 1e-10 * scale))
        throw SymmetryError("tensor is not symmetric (max deviation " + format_param(dev) + ")");
}

double polarization_eval(const Tensor& t, std::span<const VectorXd> xs) {
    const Index d = t.order();
    if (d > 12) throw UnsupportedError("polarization_eval supports order <= 12");
    require_symmetric(t);
    if (static_cast<Index>(xs.size()) != d) throw ShapeError("expected " + std::to_string(d) + " vectors");
    for (const auto& x : xs)
        if (x.size() != t.dim(0)) throw ShapeError("vector length does not match tensor dimension");
    double sum = 0.0;
    for (std::uint32_t mask = 0; mask < (1u << d); ++mask) {
        VectorXd w = VectorXd::Zero(t.dim(0));
        double sign = 1.0;
        for (Index k = 0; k < d; ++k) {
            const double xi = (mask >> k) & 1u ? -1.0 : 1.0;
            sign *= xi;
            w += xi * xs[static_cast<std::size_t>(k)];
        }
        sum += sign * homogeneous_poly(t, w);
    }
    return sum / std::ldexp(1.0, static_cast<int>(d));
}

PolyOptResult approx_poly_opt(const Tensor& t, const HittingSet& h) {
    const Index d = t.order();
    if (d < 3) throw ShapeError("approx_poly_opt needs degree >= 3");
    if (d > 12) throw UnsupportedError("approx_poly_opt supports degree <= 12");
    require_symmetric(t);
    const std::vector<HittingSet> sets(static_cast<std::size_t>(d - 2), h);

    PolyOptResult out;
    out.spectral = approx_spectral_norm(t, std::span<const HittingSet>(sets));
    const auto best = best_sign_combination(std::span<const VectorXd>(out.spectral.solution),
                                            [&](const VectorXd& z) { return homogeneous_poly(t, z); });
    out.z = best.z;
    out.value = best.value;
    out.min_estimate = std::numeric_limits<double>::quiet_NaN();
    if (d % 2 == 0) {
        const Tensor neg = -1.0 * t;
        const auto low = approx_spectral_norm(neg, std::span<const HittingSet>(sets));
        const auto lowest = best_sign_combination(std::span<const VectorXd>(low.solution),
                                                  [&](const VectorXd& z) { return -homogeneous_poly(t, z); });
        out.min_estimate = -lowest.value;
    }
    return out;
}

}  // namespace sphcover
