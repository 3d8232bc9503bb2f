#pragma once

#include "sphcover/hitting_set.hpp"

#include <Eigen/Dense>

#include <cmath>
#include <cstdint>
#include <string_view>
#include <vector>

namespace sphcover {

inline constexpr std::int64_t kDefaultVectorBudget = 10'000'000;

/// Parameters maximizing the H3 ratio: alpha = 2 + sqrt 5, beta = alpha + 1.
inline const double kAlphaStar = 2.0 + std::sqrt(5.0);
inline const double kBetaStar = 3.0 + std::sqrt(5.0);

// --- spherical-coordinate grid ------------------------------------------

/// 1 - pi^2 (n-1) / (8 m^2), unclamped.
double grid_tau(Eigen::Index n, Eigen::Index m);
/// Number of distinct grid points (as a double, so huge grids do not
/// overflow): N(2) = 2m, N(n) = 2 + (m-1) N(n-1).
double grid_cardinality(Eigen::Index n, Eigen::Index m);
/// Grid points with polar angles k pi / m, k = 0..m, and azimuth
/// k pi / m, k = 0..2m-1. claimed_tau is grid_tau clamped to -1.
HittingSet build_grid(Eigen::Index n, Eigen::Index m, std::int64_t budget = kDefaultVectorBudget);

/// Calls `visit(batch)` with successive n x k blocks of grid points
/// (columns), without materializing the whole grid.
template <typename Visitor>
void for_each_grid_batch(Eigen::Index n, Eigen::Index m, Eigen::Index batch, Visitor&& visit);

// --- randomized and ternary sets ----------------------------------------

/// Normalized i.i.d. Gaussians; claimed_tau is NaN, certified = false.
HittingSet build_random(Eigen::Index n, Eigen::Index count, std::uint64_t seed);

/// 2 / sqrt(ln n + 5).
double h2_tau(Eigen::Index n);
/// {z / |z| : z in {-1,0,1}^n, z != 0}.
HittingSet build_h2(Eigen::Index n, std::int64_t budget = kDefaultVectorBudget);

// --- H3 ------------------------------------------------------------------

/// Level count m = ceil(log_beta(alpha n)) and block sizes |I_1|..|I_m|.
struct H3Blocks {
    Eigen::Index levels;
    std::vector<Eigen::Index> sizes;
};
H3Blocks h3_blocks(Eigen::Index n, double alpha, double beta);

/// (alpha - 1) / sqrt(alpha beta (alpha + 1)).
double h3_tau(double alpha, double beta);
/// Vectors in the union before normalization and deduplication.
double h3_raw_cardinality(Eigen::Index n, double alpha, double beta);
HittingSet build_h3(Eigen::Index n, double alpha, double beta, std::int64_t budget = kDefaultVectorBudget);

struct H3Formulas {
    double tau;
    double card_base;
};
/// Ratio and cardinality base t (|H3(alpha, gamma + 1)| <= t^n asymptotically).
H3Formulas h3_formulas(double alpha, double gamma);

/// Member of build_h3(n, alpha, beta) with inner product against the unit
/// vector x at least h3_tau(alpha, beta).
Eigen::VectorXd h3_witness(const Eigen::Ref<const Eigen::VectorXd>& x, double alpha, double beta);

// --- composition ----------------------------------------------------------

double kron_tau(double tau, Eigen::Index n2);
double append_tau(double tau1, double tau2);

/// {e_i (x) z : i <= n2, z in H} in R^{n1 n2}.
HittingSet kron_compose(const HittingSet& h, Eigen::Index n2);
/// (H1 v 0) u (0 v H2) in R^{n1 + n2}.
HittingSet append_compose(const HittingSet& h1, const HittingSet& h2);

struct SplitDims {
    Eigen::Index n1;
    Eigen::Index n2;
    Eigen::Index n3;
};
/// n1 = ceil(ln n), n2 = floor(n / n1), n3 = n - n1 n2.
SplitDims log_split(Eigen::Index n);

HittingSet build_h4(Eigen::Index n, std::int64_t budget = kDefaultVectorBudget);
/// claimed_tau = mu / sqrt(n2 + 1) with mu = h3_tau(alpha, beta).
HittingSet build_h5(Eigen::Index n, double alpha = kAlphaStar, double beta = kBetaStar,
                    std::int64_t budget = kDefaultVectorBudget);

// --- classical sets -------------------------------------------------------

enum class ClassicalKind { simplex, pm_basis, antipodal, singleton };

ClassicalKind parse_classical_kind(std::string_view name);
std::string_view to_string(ClassicalKind kind);

/// simplex: n + 1 regular-simplex vertices (tau 1/n); pm_basis: +-e_i
/// (tau 1/sqrt n); antipodal: +-e_1 (tau 0); singleton: e_1 (tau -1).
HittingSet build_classical(Eigen::Index n, ClassicalKind kind);

// --- implementation -------------------------------------------------------

namespace detail {

/// cos and sin of k pi / m with exact zeros and units at quarter turns.
void angle_cos_sin(Eigen::Index k, Eigen::Index m, double& c, double& s);

}  // namespace detail

template <typename Visitor>
void for_each_grid_batch(Eigen::Index n, Eigen::Index m, Eigen::Index batch, Visitor&& visit) {
    if (n < 2 || m < 1) throw ParameterError("grid needs n >= 2 and m >= 1");
    Eigen::MatrixXd buf(n, batch);
    Eigen::Index filled = 0;
    Eigen::VectorXd point = Eigen::VectorXd::Zero(n);
    const auto flush = [&] {
        if (filled > 0) visit(buf.leftCols(filled));
        filled = 0;
    };
    const auto emit = [&] {
        buf.col(filled++) = point;
        if (filled == batch) flush();
    };
    // Depth-first over angles; `scale` is the product of the sines so far.
    const auto recurse = [&](auto&& self, Eigen::Index level, double scale) -> void {
        double c = 0;
        double s = 0;
        if (level == n - 2) {
            for (Eigen::Index k = 0; k < 2 * m; ++k) {
                detail::angle_cos_sin(k, m, c, s);
                point[level] = scale * c;
                point[level + 1] = scale * s;
                emit();
            }
            return;
        }
        for (Eigen::Index k = 0; k <= m; ++k) {
            detail::angle_cos_sin(k, m, c, s);
            point[level] = scale * c;
            if (k == 0 || k == m) {
                point.tail(n - level - 1).setZero();
                emit();
            } else {
                self(self, level + 1, scale * s);
            }
        }
    };
    recurse(recurse, 0, 1.0);
    flush();
}

}  // namespace sphcover
