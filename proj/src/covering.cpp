#include "sphcover/covering.hpp"

#include "sphcover/random.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <string>

namespace sphcover {

using Eigen::Index;

namespace {

void check_budget(double count, std::int64_t budget, const std::string& what) {
    if (count > static_cast<double>(budget))
        throw BudgetError(what + " would have " + format_param(std::floor(count)) + " vectors, over the budget of " +
                          std::to_string(budget));
}

Provenance leaf(std::string kind, std::vector<std::pair<std::string, std::string>> params) {
    return Provenance{std::move(kind), std::move(params), {}};
}

std::string int_param(Index v) { return std::to_string(v); }

/// {+1, -1} in R^1 with ratio 1.
HittingSet plus_minus_one() {
    Eigen::MatrixXd v(1, 2);
    v << 1.0, -1.0;
    return HittingSet(v, 1.0, leaf("pm_basis", {{"n", "1"}}), true);
}

}  // namespace

namespace detail {

void angle_cos_sin(Index k, Index m, double& c, double& s) {
    if ((2 * k) % m == 0) {
        static constexpr double cs[4][2] = {{1, 0}, {0, 1}, {-1, 0}, {0, -1}};
        const auto q = static_cast<std::size_t>(((2 * k) / m) % 4);
        c = cs[q][0];
        s = cs[q][1];
        return;
    }
    const double phi = std::numbers::pi * static_cast<double>(k) / static_cast<double>(m);
    c = std::cos(phi);
    s = std::sin(phi);
}

}  // namespace detail

double grid_tau(Index n, Index m) {
    const double md = static_cast<double>(m);
    return 1.0 - std::numbers::pi * std::numbers::pi * static_cast<double>(n - 1) / (8.0 * md * md);
}

double grid_cardinality(Index n, Index m) {
    if (n < 2 || m < 1) throw ParameterError("grid needs n >= 2 and m >= 1");
    double count = 2.0 * static_cast<double>(m);
    for (Index k = 3; k <= n; ++k) count = 2.0 + static_cast<double>(m - 1) * count;
    return count;
}

HittingSet build_grid(Index n, Index m, std::int64_t budget) {
    check_budget(grid_cardinality(n, m), budget, "grid(n=" + int_param(n) + ", m=" + int_param(m) + ")");
    const auto count = static_cast<Index>(grid_cardinality(n, m));
    Eigen::MatrixXd v(n, count);
    Index col = 0;
    for_each_grid_batch(n, m, 4096, [&](const auto& batch) {
        v.middleCols(col, batch.cols()) = batch;
        col += batch.cols();
    });
    return HittingSet(normalize_dedup(v), std::max(-1.0, grid_tau(n, m)),
                      leaf("grid", {{"n", int_param(n)}, {"m", int_param(m)}}), true);
}

HittingSet build_random(Index n, Index count, std::uint64_t seed) {
    if (n < 1 || count < 1) throw ParameterError("random set needs n >= 1 and count >= 1");
    Rng rng(seed);
    Eigen::MatrixXd v(n, count);
    for (Index j = 0; j < count; ++j) v.col(j) = rng.sphere_point(n);
    return HittingSet(normalize_dedup(v), std::numeric_limits<double>::quiet_NaN(),
                      leaf("random", {{"n", int_param(n)}, {"count", int_param(count)}, {"seed", std::to_string(seed)}}),
                      false);
}

double h2_tau(Index n) { return 2.0 / std::sqrt(std::log(static_cast<double>(n)) + 5.0); }

HittingSet build_h2(Index n, std::int64_t budget) {
    if (n < 1) throw ParameterError("h2 needs n >= 1");
    check_budget(std::pow(3.0, static_cast<double>(n)) - 1.0, budget, "h2(n=" + int_param(n) + ")");
    Index total = 1;
    for (Index i = 0; i < n; ++i) total *= 3;
    Eigen::MatrixXd v(n, total - 1);
    for (Index t = 1; t < total; ++t) {
        Index r = t;
        for (Index i = 0; i < n; ++i) {
            static constexpr double digit[3] = {0.0, 1.0, -1.0};
            v(i, t - 1) = digit[r % 3];
            r /= 3;
        }
    }
    return HittingSet(normalize_dedup(v), h2_tau(n), leaf("h2", {{"n", int_param(n)}}), true);
}

namespace {

void check_h3_params(Index n, double alpha, double beta) {
    if (n < 1) throw ParameterError("h3 needs n >= 1");
    if (!(alpha >= 1.0)) throw ParameterError("h3 needs alpha >= 1");
    if (!(beta >= alpha + 1.0)) throw ParameterError("h3 needs beta >= alpha + 1");
}

/// Level of |x_i| for the witness classification: 1 covers both the
/// lowest band and the first band, both mapped to magnitude 1.
Index witness_level(double ax, double alpha, double beta, Index n, Index levels) {
    const double an = alpha * static_cast<double>(n);
    for (Index k = 1; k < levels; ++k)
        if (ax * ax <= std::pow(beta, static_cast<double>(k)) / an) return k;
    return levels;
}

}  // namespace

H3Blocks h3_blocks(Index n, double alpha, double beta) {
    check_h3_params(n, alpha, beta);
    const double an = alpha * static_cast<double>(n);
    auto levels = static_cast<Index>(std::ceil(std::log(an) / std::log(beta) - 1e-12));
    levels = std::max<Index>(levels, 1);
    H3Blocks b{levels, std::vector<Index>(static_cast<std::size_t>(levels), 0)};
    Index rest = n;
    for (Index k = 2; k <= levels; ++k) {
        const auto s = static_cast<Index>(std::floor(an / std::pow(beta, static_cast<double>(k - 1)) + 1e-9));
        b.sizes[static_cast<std::size_t>(k - 1)] = s;
        rest -= s;
    }
    if (rest < 0) throw ParameterError("h3 block sizes exceed n");
    b.sizes[0] = rest;
    return b;
}

double h3_tau(double alpha, double beta) {
    return (alpha - 1.0) / std::sqrt(alpha * beta * (alpha + 1.0));
}

double h3_raw_cardinality(Index n, double alpha, double beta) {
    const auto b = h3_blocks(n, alpha, beta);
    // ways[j] = number of ways to place the levels >= 2 on j coordinates,
    // counted as ordered multinomial coefficients over the levels so far.
    std::vector<double> ways(static_cast<std::size_t>(n + 1), 0.0);
    ways[0] = 1.0;
    for (Index k = 2; k <= b.levels; ++k) {
        const Index cap = b.sizes[static_cast<std::size_t>(k - 1)];
        std::vector<double> next(ways.size(), 0.0);
        for (Index used = 0; used <= n; ++used) {
            if (ways[static_cast<std::size_t>(used)] == 0.0) continue;
            double choose = 1.0;
            for (Index c = 0; c <= cap && used + c <= n; ++c) {
                if (c > 0) choose *= static_cast<double>(n - used - c + 1) / static_cast<double>(c);
                next[static_cast<std::size_t>(used + c)] += ways[static_cast<std::size_t>(used)] * choose;
            }
        }
        ways = std::move(next);
    }
    double total = 0.0;
    for (double w : ways) total += w;
    return total * std::pow(2.0, static_cast<double>(n));
}

HittingSet build_h3(Index n, double alpha, double beta, std::int64_t budget) {
    const auto b = h3_blocks(n, alpha, beta);
    const std::string label = "h3(n=" + int_param(n) + ")";
    check_budget(h3_raw_cardinality(n, alpha, beta), budget, label);
    const auto count = static_cast<Index>(h3_raw_cardinality(n, alpha, beta));

    std::vector<double> magnitude(static_cast<std::size_t>(b.levels));
    for (Index k = 1; k <= b.levels; ++k)
        magnitude[static_cast<std::size_t>(k - 1)] = std::pow(beta, 0.5 * static_cast<double>(k - 1));

    // A vector lies in the union iff, for every level k >= 2, at most
    // |I_k| coordinates have magnitude beta^((k-1)/2); +-1 entries can
    // fill any block.
    Eigen::MatrixXd v(n, count);
    Eigen::VectorXd z(n);
    std::vector<Index> room(b.sizes.begin(), b.sizes.end());
    Index col = 0;
    const auto recurse = [&](auto&& self, Index i) -> void {
        if (i == n) {
            v.col(col++) = z;
            return;
        }
        for (Index k = 1; k <= b.levels; ++k) {
            auto& r = room[static_cast<std::size_t>(k - 1)];
            if (k >= 2 && r == 0) continue;
            if (k >= 2) --r;
            for (double sign : {1.0, -1.0}) {
                z[i] = sign * magnitude[static_cast<std::size_t>(k - 1)];
                self(self, i + 1);
            }
            if (k >= 2) ++r;
        }
    };
    recurse(recurse, 0);
    if (col != count) throw NumericError("h3 enumeration count mismatch");
    return HittingSet(normalize_dedup(v), h3_tau(alpha, beta),
                      leaf("h3", {{"n", int_param(n)}, {"alpha", format_param(alpha)}, {"beta", format_param(beta)}}),
                      true);
}

H3Formulas h3_formulas(double alpha, double gamma) {
    if (!(alpha >= 1.0)) throw ParameterError("h3_formulas needs alpha >= 1");
    if (!(gamma >= alpha)) throw ParameterError("h3_formulas needs gamma >= alpha");
    const double tau = (alpha - 1.0) / std::sqrt(alpha * (alpha + 1.0) * (gamma + 1.0));
    const double r = (gamma - alpha) / gamma;
    // (gamma / (gamma - alpha))^r = exp(-r ln r), which tends to 1 as r -> 0.
    const double tail = r > 0.0 ? -r * std::log(r) : 0.0;
    const double log_base = (gamma + alpha) / gamma * std::numbers::ln2 - alpha / gamma * std::log(alpha) +
                            alpha * (gamma + 1.0) / (gamma * gamma) * std::log(gamma + 1.0) + tail;
    return {tau, std::exp(log_base)};
}

Eigen::VectorXd h3_witness(const Eigen::Ref<const Eigen::VectorXd>& x, double alpha, double beta) {
    const Index n = x.size();
    const auto b = h3_blocks(n, alpha, beta);
    if (std::abs(x.norm() - 1.0) > 1e-9) throw ParameterError("h3_witness needs a unit vector");
    Eigen::VectorXd z(n);
    for (Index i = 0; i < n; ++i) {
        const Index k = witness_level(std::abs(x[i]), alpha, beta, n, b.levels);
        const double sign = x[i] < 0.0 ? -1.0 : 1.0;
        z[i] = sign * std::pow(beta, 0.5 * static_cast<double>(k - 1));
    }
    return z / z.norm();
}

double kron_tau(double tau, Index n2) { return tau / std::sqrt(static_cast<double>(n2)); }

double append_tau(double tau1, double tau2) { return tau1 * tau2 / std::sqrt(tau1 * tau1 + tau2 * tau2); }

HittingSet kron_compose(const HittingSet& h, Index n2) {
    if (n2 < 1) throw ParameterError("kron_compose needs n2 >= 1");
    if (!(h.claimed_tau() >= 0.0))
        throw ParameterError("kron_compose requires a set with claimed tau >= 0");
    const Index n1 = h.dim();
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n1 * n2, h.size() * n2);
    for (Index i = 0; i < n2; ++i) v.block(i * n1, i * h.size(), n1, h.size()) = h.vectors();
    return HittingSet(std::move(v), kron_tau(h.claimed_tau(), n2),
                      Provenance{"kron", {{"n2", int_param(n2)}}, {h.provenance()}}, h.certified());
}

HittingSet append_compose(const HittingSet& h1, const HittingSet& h2) {
    if (!(h1.claimed_tau() > 0.0) || !(h2.claimed_tau() > 0.0))
        throw ParameterError("append_compose requires both claimed taus > 0");
    const Index n1 = h1.dim();
    const Index n2 = h2.dim();
    Eigen::MatrixXd v = Eigen::MatrixXd::Zero(n1 + n2, h1.size() + h2.size());
    v.topLeftCorner(n1, h1.size()) = h1.vectors();
    v.bottomRightCorner(n2, h2.size()) = h2.vectors();
    return HittingSet(std::move(v), append_tau(h1.claimed_tau(), h2.claimed_tau()),
                      Provenance{"append", {}, {h1.provenance(), h2.provenance()}},
                      h1.certified() && h2.certified());
}

SplitDims log_split(Index n) {
    if (n < 2) throw ParameterError("log split needs n >= 2");
    const auto n1 = static_cast<Index>(std::ceil(std::log(static_cast<double>(n))));
    const Index n2 = n / n1;
    return {n1, n2, n - n1 * n2};
}

namespace {

/// Kronecker block from `base(n1)` appended with `base(n3)`; n3 = 0 skips
/// the append and n3 = 1 (or n1 = 1) uses {+1, -1}.
template <typename Base>
HittingSet split_compose(Index n, Base&& base) {
    const auto s = log_split(n);
    const auto pick = [&](Index k) { return k == 1 ? plus_minus_one() : base(k); };
    HittingSet left = kron_compose(pick(s.n1), s.n2);
    if (s.n3 == 0) return left;
    return append_compose(left, pick(s.n3));
}

}  // namespace

HittingSet build_h4(Index n, std::int64_t budget) {
    HittingSet composed = split_compose(n, [&](Index k) { return build_h2(k, budget); });
    return HittingSet(composed.vectors(), composed.claimed_tau(),
                      Provenance{"h4", {{"n", int_param(n)}}, {composed.provenance()}}, true);
}

HittingSet build_h5(Index n, double alpha, double beta, std::int64_t budget) {
    check_h3_params(n, alpha, beta);
    HittingSet composed = split_compose(n, [&](Index k) { return build_h3(k, alpha, beta, budget); });
    const double tau = h3_tau(alpha, beta) / std::sqrt(static_cast<double>(log_split(n).n2 + 1));
    return HittingSet(composed.vectors(), tau,
                      Provenance{"h5",
                                 {{"n", int_param(n)}, {"alpha", format_param(alpha)}, {"beta", format_param(beta)}},
                                 {composed.provenance()}},
                      true);
}

ClassicalKind parse_classical_kind(std::string_view name) {
    if (name == "simplex") return ClassicalKind::simplex;
    if (name == "pm_basis") return ClassicalKind::pm_basis;
    if (name == "antipodal") return ClassicalKind::antipodal;
    if (name == "singleton") return ClassicalKind::singleton;
    throw ParameterError("unknown classical kind '" + std::string(name) + "'");
}

std::string_view to_string(ClassicalKind kind) {
    switch (kind) {
        case ClassicalKind::simplex: return "simplex";
        case ClassicalKind::pm_basis: return "pm_basis";
        case ClassicalKind::antipodal: return "antipodal";
        case ClassicalKind::singleton: return "singleton";
    }
    return "?";
}

HittingSet build_classical(Index n, ClassicalKind kind) {
    if (n < 1) throw ParameterError("classical sets need n >= 1");
    const double nd = static_cast<double>(n);
    Eigen::MatrixXd v;
    double tau = 0.0;
    switch (kind) {
        case ClassicalKind::simplex: {
            if (n < 2) throw ParameterError("simplex needs n >= 2");
            // e_1..e_n plus a point on the diagonal at equal distance sqrt 2
            // from each, recentred at the centroid.
            v = Eigen::MatrixXd::Zero(n, n + 1);
            v.leftCols(n).setIdentity();
            v.col(n).setConstant((1.0 - std::sqrt(nd + 1.0)) / nd);
            const Eigen::VectorXd centroid = v.rowwise().mean();
            v.colwise() -= centroid;
            v.colwise().normalize();
            tau = 1.0 / nd;
            break;
        }
        case ClassicalKind::pm_basis:
            v.resize(n, 2 * n);
            v << Eigen::MatrixXd::Identity(n, n), -Eigen::MatrixXd::Identity(n, n);
            tau = 1.0 / std::sqrt(nd);
            break;
        case ClassicalKind::antipodal:
            v = Eigen::MatrixXd::Zero(n, 2);
            v(0, 0) = 1.0;
            v(0, 1) = -1.0;
            tau = 0.0;
            break;
        case ClassicalKind::singleton:
            v = Eigen::MatrixXd::Zero(n, 1);
            v(0, 0) = 1.0;
            tau = -1.0;
            break;
    }
    return HittingSet(std::move(v), tau, leaf(std::string(to_string(kind)), {{"n", int_param(n)}}), true);
}

}  // namespace sphcover
