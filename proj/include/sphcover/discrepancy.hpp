#pragma once

#include "sphcover/hitting_set.hpp"

#include <cstdint>

namespace sphcover {

/// Default cap on grid points streamed by verify_cover.
inline constexpr std::int64_t kDefaultGridBudget = 100'000'000;

/// Multi-start minimization of f(x) = max_i v_i^T x over the sphere.
/// Each start runs 400 projected-subgradient steps on a log-sum-exp
/// smoothing of f, followed by a vertex hill-climb on the polytope
/// {y : V^T y <= 1} (f = 1 / |y| at its boundary). Starts are `restarts`
/// seeded random points plus the points of build_grid(n, 2). The result
/// is f evaluated at an actual sphere point, hence an upper bound on the
/// true ratio.
CoverReport estimate_tau(const HittingSet& h, std::int64_t restarts, std::uint64_t seed);

/// Angular radius arccos(grid_tau(n, m)) within which every sphere point
/// has a grid point.
double grid_angle(Eigen::Index n, Eigen::Index m);

/// Certifies that the caps at level tau cover the sphere: every point of
/// the grid at parameter grid_m must reach cos(arccos tau - grid_angle).
/// The grid is streamed, never stored. estimated_tau and witness refer to
/// the worst grid point.
CoverReport verify_cover(const HittingSet& h, double tau, Eigen::Index grid_m,
                         std::int64_t budget = kDefaultGridBudget);

/// verify_cover with the grid parameter derived from the observed grid
/// minimum, refined until the slack suffices or the budget runs out.
CoverReport verify_cover_auto(const HittingSet& h, double tau, std::int64_t budget = kDefaultGridBudget);

}  // namespace sphcover
