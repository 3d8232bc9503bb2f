#include "sphcover/discrepancy.hpp"

#include "sphcover/covering.hpp"
#include "sphcover/parallel.hpp"
#include "sphcover/random.hpp"

#include <Eigen/LU>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>
#include <vector>

namespace sphcover {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr int kDescentSteps = 400;
constexpr double kTempStart = 10.0;
constexpr double kTempEnd = 1000.0;
constexpr int kMaxPivots = 2000;

struct Candidate {
    double value;
    VectorXd x;
};

double objective(const MatrixXd& v, const VectorXd& x) { return (v.transpose() * x).maxCoeff(); }

Candidate descend(const MatrixXd& v, VectorXd x) {
    Candidate best{objective(v, x), x};
    for (int k = 0; k < kDescentSteps; ++k) {
        const double temp = kTempStart * std::pow(kTempEnd / kTempStart, static_cast<double>(k) / (kDescentSteps - 1));
        const VectorXd s = v.transpose() * x;
        const VectorXd w = (temp * (s.array() - s.maxCoeff())).exp().matrix();
        const VectorXd grad = v * (w / w.sum());
        x -= 0.5 / std::sqrt(static_cast<double>(k + 1)) * grad;
        const double norm = x.norm();
        if (!(norm > 0.0)) break;
        x /= norm;
        const double f = objective(v, x);
        if (f < best.value) best = {f, x};
    }
    return best;
}

/// Ray direction d with V^T d <= 0 as a sphere point.
Candidate from_ray(const MatrixXd& v, const VectorXd& d) {
    VectorXd x = d.normalized();
    return {objective(v, x), x};
}

/// Local maximization of |y| over P = {y : V^T y <= 1}, starting from
/// y0 = x / f(x) on the boundary of P. Phase 1 walks away from the
/// active constraints until n independent ones are tight; phase 2 moves
/// along strictly improving edges. The returned point is y / |y| with its
/// true objective.
Candidate vertex_climb(const MatrixXd& v, const VectorXd& x0, double f0) {
    const Index n = v.rows();
    const Index m = v.cols();
    VectorXd y = x0 / f0;
    std::vector<Index> active;
    MatrixXd basis(n, 0);  // orthonormal basis of the active normals

    const auto try_add = [&](Index i) {
        VectorXd q = v.col(i);
        for (int pass = 0; pass < 2; ++pass) q -= basis * (basis.transpose() * q);
        const double qn = q.norm();
        if (qn < 1e-9) return false;
        basis.conservativeResize(Eigen::NoChange, basis.cols() + 1);
        basis.col(basis.cols() - 1) = q / qn;
        active.push_back(i);
        return true;
    };
    const auto is_active = [&](Index i) { return std::find(active.begin(), active.end(), i) != active.end(); };

    {
        const VectorXd r = v.transpose() * y;
        for (Index i = 0; i < m && static_cast<Index>(active.size()) < n; ++i)
            if (r[i] >= 1.0 - 1e-10) try_add(i);
    }

    // Phase 1.
    while (static_cast<Index>(active.size()) < n) {
        VectorXd d = y - basis * (basis.transpose() * y);
        if (d.norm() < 1e-14 * y.norm()) {
            for (Index j = 0; j < n; ++j) {
                d = VectorXd::Unit(n, j);
                d -= basis * (basis.transpose() * d);
                if (d.norm() > 1e-6) break;
            }
        }
        const VectorXd s = v.transpose() * d;
        const VectorXd r = v.transpose() * y;
        double t_best = std::numeric_limits<double>::infinity();
        Index block = -1;
        for (Index i = 0; i < m; ++i) {
            if (s[i] <= 1e-15 * d.norm() || is_active(i)) continue;
            const double t = std::max(0.0, 1.0 - r[i]) / s[i];
            if (t < t_best) {
                t_best = t;
                block = i;
            }
        }
        if (block < 0) return from_ray(v, d);
        y += t_best * d;
        if (!try_add(block)) break;
    }

    // Phase 2.
    if (static_cast<Index>(active.size()) == n) {
        for (int pivot = 0; pivot < kMaxPivots; ++pivot) {
            MatrixXd b(n, n);
            for (Index k = 0; k < n; ++k) b.col(k) = v.col(active[static_cast<std::size_t>(k)]);
            const Eigen::PartialPivLU<MatrixXd> lu(b.transpose());
            const MatrixXd dirs = lu.solve(-MatrixXd::Identity(n, n));
            const VectorXd r = v.transpose() * y;
            const double base = y.squaredNorm();
            double best_gain = 1e-12 * base;
            Index best_leave = -1;
            Index best_enter = -1;
            double best_t = 0.0;
            for (Index j = 0; j < n; ++j) {
                const VectorXd d = dirs.col(j);
                if (!d.allFinite()) continue;
                const VectorXd s = v.transpose() * d;
                double t_max = std::numeric_limits<double>::infinity();
                Index enter = -1;
                for (Index i = 0; i < m; ++i) {
                    if (s[i] <= 1e-12 * d.norm() || is_active(i)) continue;
                    const double t = std::max(0.0, 1.0 - r[i]) / s[i];
                    if (t < t_max) {
                        t_max = t;
                        enter = i;
                    }
                }
                if (enter < 0) return from_ray(v, d);
                if (t_max <= 1e-14) continue;
                const double gain = (y + t_max * d).squaredNorm() - base;
                if (gain > best_gain) {
                    best_gain = gain;
                    best_leave = j;
                    best_enter = enter;
                    best_t = t_max;
                }
            }
            if (best_leave < 0) break;
            y += best_t * dirs.col(best_leave);
            active[static_cast<std::size_t>(best_leave)] = best_enter;
        }
    }

    const VectorXd x = y.normalized();
    return {objective(v, x), x};
}

Candidate improve(const MatrixXd& v, const VectorXd& start) {
    Candidate best = descend(v, start);
    if (best.value > 0.0) {
        Candidate polished = vertex_climb(v, best.x, best.value);
        if (polished.value < best.value) best = std::move(polished);
    }
    return best;
}

struct GridScan {
    double min_value;
    VectorXd witness;
    std::int64_t points;
};

GridScan scan_grid(const HittingSet& h, Index m) {
    const Index n = h.dim();
    const Index batch = std::clamp<Index>(4'000'000 / std::max<Index>(h.size(), 1), 64, 65536);
    GridScan scan{std::numeric_limits<double>::infinity(), VectorXd(), 0};
    MatrixXd s;
    for_each_grid_batch(n, m, batch, [&](const auto& points) {
        s.noalias() = h.vectors().transpose() * points;
        for (Index j = 0; j < points.cols(); ++j) {
            const double f = s.col(j).maxCoeff();
            if (f < scan.min_value) {
                scan.min_value = f;
                scan.witness = points.col(j);
            }
        }
        scan.points += points.cols();
    });
    return scan;
}

CoverReport verify_line(const HittingSet& h, double tau) {
    // The sphere in R^1 is {+1, -1}.
    const double up = h.vectors().row(0).maxCoeff();
    const double down = (-h.vectors().row(0)).maxCoeff();
    VectorXd w(1);
    w[0] = up <= down ? 1.0 : -1.0;
    const double worst = std::min(up, down);
    std::optional<CoverCertificate> cert;
    if (worst >= tau) cert = CoverCertificate{tau, 0};
    return {worst, w, cert, 2};
}

void check_tau(double tau) {
    if (!(tau > -1.0 && tau <= 1.0)) throw ParameterError("tau must lie in (-1, 1]");
}

double threshold_for(double tau, double angle) {
    return std::cos(std::acos(tau) - angle) + 1e-12;
}

}  // namespace

CoverReport estimate_tau(const HittingSet& h, std::int64_t restarts, std::uint64_t seed) {
    if (restarts < 1) throw ParameterError("estimate_tau needs restarts >= 1");
    const Index n = h.dim();
    const MatrixXd& v = h.vectors();
    if (n == 1) {
        const auto r = verify_line(h, -1.0);
        return {r.estimated_tau, r.witness, std::nullopt, 2};
    }

    const HittingSet grid = build_grid(n, 2);
    const std::int64_t total = restarts + grid.size();
    std::vector<Candidate> results(static_cast<std::size_t>(total));
    parallel_for(total, [&](std::int64_t i) {
        VectorXd start;
        if (i < restarts) {
            Rng rng(derive_seed(seed, static_cast<std::uint64_t>(i)));
            start = rng.sphere_point(n);
        } else {
            start = grid.vector(i - restarts);
        }
        results[static_cast<std::size_t>(i)] = improve(v, start);
    });

    std::size_t best = 0;
    for (std::size_t i = 1; i < results.size(); ++i)
        if (results[i].value < results[best].value) best = i;
    return {results[best].value, results[best].x, std::nullopt, total};
}

double grid_angle(Index n, Index m) { return std::acos(std::max(-1.0, grid_tau(n, m))); }

CoverReport verify_cover(const HittingSet& h, double tau, Index grid_m, std::int64_t budget) {
    check_tau(tau);
    const Index n = h.dim();
    if (n == 1) return verify_line(h, tau);
    if (grid_m < 1) throw ParameterError("grid_m must be >= 1");
    const double angle = grid_angle(n, grid_m);
    if (angle >= std::acos(tau))
        throw ParameterError("grid at m = " + std::to_string(grid_m) +
                             " is too coarse to certify tau = " + format_param(tau));
    if (grid_cardinality(n, grid_m) > static_cast<double>(budget))
        throw BudgetError("verification grid exceeds the budget of " + std::to_string(budget) +
                          " points; use estimate_tau instead");
    const GridScan scan = scan_grid(h, grid_m);
    std::optional<CoverCertificate> cert;
    if (scan.min_value >= threshold_for(tau, angle)) cert = CoverCertificate{tau, grid_m};
    return {scan.min_value, scan.witness, cert, scan.points};
}

CoverReport verify_cover_auto(const HittingSet& h, double tau, std::int64_t budget) {
    check_tau(tau);
    const Index n = h.dim();
    if (n == 1) return verify_line(h, tau);
    const double nd = static_cast<double>(n - 1);
    Index m = 4;
    std::int64_t scanned = 0;
    for (;;) {
        if (grid_cardinality(n, m) > static_cast<double>(budget))
            throw BudgetError("automatic certification needs a grid beyond the budget of " +
                              std::to_string(budget) + " points; use estimate_tau instead");
        GridScan scan = scan_grid(h, m);
        scanned += scan.points;
        if (scan.min_value < tau) return {scan.min_value, scan.witness, std::nullopt, scanned};
        const double angle = grid_angle(n, m);
        if (angle < std::acos(tau) && scan.min_value >= threshold_for(tau, angle))
            return {scan.min_value, scan.witness, CoverCertificate{tau, m}, scanned};
        const double room = std::acos(tau) - std::acos(std::min(1.0, scan.min_value));
        Index next = 2 * m;
        if (room > 0.0) {
            const double need = std::numbers::pi * std::sqrt(nd / (8.0 * (1.0 - std::cos(room))));
            if (std::isfinite(need) && need < 1e9) next = static_cast<Index>(std::ceil(need)) + 1;
        }
        m = std::max(m + 1, next);
    }
}

}  // namespace sphcover
