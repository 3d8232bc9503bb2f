// Acceptance gate: one PASS/FAIL line per criterion, nonzero exit if any fails.

#include "sphcover/covering.hpp"
#include "sphcover/discrepancy.hpp"
#include "sphcover/linalg.hpp"
#include "sphcover/nuclear.hpp"
#include "sphcover/odeco.hpp"
#include "sphcover/polynomial.hpp"
#include "sphcover/random.hpp"
#include "sphcover/spectral.hpp"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

using namespace sphcover;
using Eigen::VectorXd;

namespace {

struct Outcome {
    bool pass = true;
    std::string detail;

    void require(bool ok, const std::string& what) {
        if (!ok) {
            pass = false;
            detail += (detail.empty() ? "" : "; ") + what;
        }
    }
};

std::string fmt(const char* f, auto... args) {
    char buf[256];
    std::snprintf(buf, sizeof buf, f, args...);
    return buf;
}

Outcome ac1_table2() {
    Outcome o;
    struct Row {
        double alpha, tau, base;
    };
    const std::array<Row, 7> rows{{{17.42, 0.213, 5.00},
                                   {7.64, 0.278, 6.00},
                                   {4.75, 0.299, 7.00},
                                   {4.24, 0.30028, 7.31},
                                   {4.00, 0.300, 7.48},
                                   {3.00, 0.288, 8.47},
                                   {2.00, 0.235, 10.40}}};
    for (const auto& r : rows) {
        const auto f = h3_formulas(r.alpha, r.alpha);
        o.require(std::abs(f.tau - r.tau) <= 0.005 && std::abs(f.card_base - r.base) <= 0.05,
                  fmt("alpha %.2f gives (%.5f, %.4f), reference (%.3f, %.2f)", r.alpha, f.tau, f.card_base, r.tau, r.base));
    }
    const auto star = h3_formulas(kAlphaStar, kAlphaStar);
    o.require(std::abs(star.tau - 0.30028) <= 1e-4, fmt("alpha* tau %.6f", star.tau));
    o.require(std::abs(star.card_base - 7.31) <= 0.01, fmt("alpha* base %.4f", star.card_base));
    o.detail = o.pass ? fmt("alpha* -> tau %.5f, base %.4f", star.tau, star.card_base) : o.detail;
    return o;
}

Outcome ac2_table3() {
    Outcome o;
    constexpr Index n = 6;
    constexpr std::int64_t restarts = 500;
    struct Case {
        std::string name;
        HittingSet set;
        Index card;
        double lo, hi;
    };
    const std::vector<Case> cases{
        {"simplex", build_classical(n, ClassicalKind::simplex), 7, 0.1667 - 0.002, 0.1667 + 0.002},
        {"pm_basis", build_classical(n, ClassicalKind::pm_basis), 12, 0.4082 - 0.002, 0.4082 + 0.002},
        {"H2", build_h2(n), 728, 0.835 - 0.01, 0.835 + 0.01},
        {"H4", build_h4(n), 24, 0.48, 0.56},
        {"H5", build_h5(n), 36, 0.50, 0.56},
    };
    std::string summary;
    for (const auto& c : cases) {
        const double tau = estimate_tau(c.set, restarts, 0).estimated_tau;
        o.require(c.set.size() == c.card, fmt("%s has %ld vectors, want %ld", c.name.c_str(), c.set.size(), c.card));
        o.require(tau >= c.lo && tau <= c.hi, fmt("%s tau %.5f outside [%.4f, %.4f]", c.name.c_str(), tau, c.lo, c.hi));
        summary += fmt("%s %ld/%.4f ", c.name.c_str(), c.set.size(), tau);
    }
    if (o.pass) o.detail = summary;
    return o;
}

Outcome ac3_certification() {
    Outcome o;
    std::string summary;
    for (Index n = 2; n <= 4; ++n) {
        const auto r = verify_cover_auto(build_h2(n), h2_tau(n));
        o.require(r.certified_at.has_value(), fmt("H2(%ld) not certified at %.4f", n, h2_tau(n)));
        if (r.certified_at) summary += fmt("H2(%ld)@m=%ld ", n, r.certified_at->grid_m);
    }
    for (Index n = 2; n <= 5; ++n) {
        const double tau = 0.9 / std::sqrt(static_cast<double>(n));
        const auto r = verify_cover_auto(build_classical(n, ClassicalKind::pm_basis), tau);
        o.require(r.certified_at.has_value(), fmt("pm_basis(%ld) not certified at %.4f", n, tau));
        if (r.certified_at) summary += fmt("pm(%ld)@m=%ld ", n, r.certified_at->grid_m);
    }
    for (Index n = 2; n <= 4; ++n) {
        const auto r = verify_cover_auto(build_classical(n, ClassicalKind::singleton), 0.1);
        const HittingSet s = build_classical(n, ClassicalKind::singleton);
        o.require(!r.certified_at.has_value(), fmt("singleton(%ld) certified", n));
        o.require(r.witness.size() == n && s.max_inner(r.witness) < 0.1,
                  fmt("singleton(%ld) witness does not refute", n));
    }
    if (o.pass) o.detail = summary + "singletons refuted";
    return o;
}

struct SpectralStudy {
    double min_ratio = 1e300;
    double mean_ratio = 0.0;
    double max_ratio = 0.0;
    int floor_violations = 0;
    int bound_violations = 0;
    int upper_violations = 0;
    int optimal = 0;
    int count = 0;
};

/// 200 odeco 5x10x10 instances with H5(5), shared by AC4 and AC5.
const SpectralStudy& spectral_study() {
    static const SpectralStudy study = [] {
        SpectralStudy s;
        const std::vector<HittingSet> sets{build_h5(5)};
        const double floor = 0.3 * std::sqrt(std::log(5.0) / 5.0);
        for (int i = 0; i < 200; ++i) {
            const auto inst = gen_odeco({5, 10, 10}, 5, derive_seed(2024, static_cast<std::uint64_t>(i)));
            const auto r = approx_spectral_norm(inst.tensor, std::span<const HittingSet>(sets));
            const double ratio = r.value / inst.true_spectral;
            s.min_ratio = std::min(s.min_ratio, ratio);
            s.max_ratio = std::max(s.max_ratio, ratio);
            s.mean_ratio += ratio;
            if (ratio < floor) ++s.floor_violations;
            if (r.value < r.bound_factor * inst.true_spectral) ++s.bound_violations;
            if (r.value > inst.true_spectral + 1e-9) ++s.upper_violations;
            const auto refined = als_refine(inst.tensor, r.solution);
            if (refined.value >= inst.true_spectral * (1.0 - 1e-6)) ++s.optimal;
            ++s.count;
        }
        s.mean_ratio /= s.count;
        return s;
    }();
    return study;
}

Outcome ac4_spectral_floor() {
    Outcome o;
    const auto& s = spectral_study();
    o.require(s.floor_violations == 0, fmt("%d instances below 0.3 sqrt(ln 5 / 5)", s.floor_violations));
    o.require(s.bound_violations == 0, fmt("%d instances below bound_factor", s.bound_violations));
    o.require(s.upper_violations == 0, fmt("%d instances above the norm", s.upper_violations));
    o.require(s.mean_ratio >= 0.80 && s.mean_ratio <= 0.95, fmt("mean ratio %.4f outside [0.80, 0.95]", s.mean_ratio));
    if (o.pass) o.detail = fmt("ratio min %.4f mean %.4f max %.4f", s.min_ratio, s.mean_ratio, s.max_ratio);
    return o;
}

Outcome ac5_als() {
    Outcome o;
    const auto& s = spectral_study();
    const double pct = 100.0 * s.optimal / s.count;
    o.require(pct >= 70.0, fmt("only %.1f%% optimal after ALS", pct));
    if (o.pass) o.detail = fmt("%.1f%% optimal after ALS", pct);
    return o;
}

Outcome ac6_nuclear_sandwich() {
    Outcome o;
    double mean = 0.0;
    double worst_violation = -1.0;
    int below = 0;
    int iterations = 0;
    constexpr int instances = 20;
    for (int i = 0; i < instances; ++i) {
        const std::uint64_t seed = derive_seed(4048, static_cast<std::uint64_t>(i));
        const auto inst = gen_odeco({5, 10, 10}, 5, seed);
        const std::vector<HittingSet> sets{build_random(5, 60, derive_seed(seed, 1))};
        const auto r = solve_nuclear_sdp(assemble_problem(inst.tensor, sets), 1e-6, 5000);
        if (r.u < inst.true_nuclear - 1e-4) ++below;
        worst_violation = std::max(worst_violation, r.max_violation);
        mean += r.u / inst.true_nuclear;
        iterations += r.iterations;
    }
    mean /= instances;
    o.require(below == 0, fmt("%d instances with u < |T|_* - 1e-4", below));
    o.require(worst_violation <= 1e-5, fmt("constraint violation %.3e", worst_violation));
    o.require(mean >= 1.15 && mean <= 1.55, fmt("mean u/|T|_* %.4f outside [1.15, 1.55]", mean));
    if (o.pass)
        o.detail = fmt("mean u/|T|_* %.4f, worst violation %.2e, mean iterations %d", mean, worst_violation,
                       iterations / instances);
    return o;
}

Outcome ac7_certified_nuclear() {
    Outcome o;
    const std::vector<HittingSet> sets{build_classical(3, ClassicalKind::pm_basis)};
    int violations = 0;
    double worst_gap = 0.0;
    for (int i = 0; i < 20; ++i) {
        const auto inst = gen_odeco({3, 3, 3}, 3, derive_seed(777, static_cast<std::uint64_t>(i)));
        const auto r = solve_nuclear_sdp(assemble_problem(inst.tensor, sets));
        const bool ok = r.lower <= inst.true_nuclear + 1e-5 && inst.true_nuclear <= r.u + 1e-5 &&
                        std::abs(r.lower - r.u / std::sqrt(3.0)) <= 1e-12 * r.u && r.max_violation <= 1e-5;
        if (!ok) ++violations;
        worst_gap = std::max(worst_gap, inst.true_nuclear - r.u);
    }
    o.require(violations == 0, fmt("%d sandwich violations (worst |T|_* - u = %.2e)", violations, worst_gap));
    if (o.pass) o.detail = fmt("20 instances, max(|T|_* - u) = %.2e", worst_gap);
    return o;
}

Outcome ac8_polarization() {
    Outcome o;
    const std::array<std::pair<Index, Index>, 3> cases{{{3, 5}, {4, 4}, {5, 3}}};
    double worst = 0.0;
    Rng rng(8);
    for (const auto& [d, n] : cases) {
        double factorial = 1.0;
        for (Index k = 2; k <= d; ++k) factorial *= static_cast<double>(k);
        for (int trial = 0; trial < 100; ++trial) {
            Tensor t(Shape(static_cast<std::size_t>(d), n));
            t.data() = rng.gaussian_vector(t.size());
            t = symmetrize(t);
            std::vector<VectorXd> xs;
            for (Index k = 0; k < d; ++k) xs.push_back(rng.gaussian_vector(n));
            const double lhs = polarization_eval(t, xs);
            const double rhs = factorial * multilinear_form(t, xs);
            worst = std::max(worst, std::abs(lhs - rhs) / std::max(std::abs(lhs), std::abs(rhs)));
        }
    }
    o.require(worst <= 1e-9, fmt("worst relative error %.3e", worst));
    if (o.pass) o.detail = fmt("300 tensors, worst relative error %.2e", worst);
    return o;
}

HittingSet random_certified_child(Rng& rng) {
    const Index n = 2 + static_cast<Index>(rng.uniform() * 3.0);
    switch (static_cast<int>(rng.uniform() * 4.0)) {
    case 0:
        return build_classical(n, ClassicalKind::pm_basis);
    case 1:
        return build_h2(n);
    case 2:
        return build_h3(n, kAlphaStar, kBetaStar);
    default: {
        const Index m = static_cast<Index>(std::ceil(std::numbers::pi * std::sqrt((n - 1) / 8.0))) + 2;
        return build_grid(n, m);
    }
    }
}

double sampled_tau(const HittingSet& h, int samples, std::uint64_t seed) {
    Rng rng(seed);
    double worst = 1.0;
    for (int s = 0; s < samples; ++s) worst = std::min(worst, h.max_inner(rng.sphere_point(h.dim())));
    return worst;
}

Outcome ac9_composition() {
    Outcome o;
    Rng rng(9);
    int formula_mismatch = 0;
    int coverage_failures = 0;
    double tightest = 1.0;
    for (int i = 0; i < 50; ++i) {
        const HittingSet a = random_certified_child(rng);
        HittingSet composed = a;
        double expected = 0.0;
        if (i % 2 == 0) {
            const Index n2 = 1 + static_cast<Index>(rng.uniform() * 3.0);
            composed = kron_compose(a, n2);
            expected = a.claimed_tau() / std::sqrt(static_cast<double>(n2));
        } else {
            const HittingSet b = random_certified_child(rng);
            composed = append_compose(a, b);
            expected = 1.0 / std::sqrt(1.0 / (a.claimed_tau() * a.claimed_tau()) +
                                       1.0 / (b.claimed_tau() * b.claimed_tau()));
        }
        if (!composed.certified() || std::abs(composed.claimed_tau() - expected) > 1e-15 * expected)
            ++formula_mismatch;
        const double empirical = sampled_tau(composed, 100000, derive_seed(99, static_cast<std::uint64_t>(i)));
        if (empirical < composed.claimed_tau()) ++coverage_failures;
        tightest = std::min(tightest, empirical - composed.claimed_tau());
    }
    o.require(formula_mismatch == 0, fmt("%d claimed tau mismatches", formula_mismatch));
    o.require(coverage_failures == 0, fmt("%d sets with empirical tau below claim", coverage_failures));
    if (o.pass) o.detail = fmt("50 compositions, smallest empirical margin %.4f", tightest);
    return o;
}

double brute_force_spectral(const Tensor& t, int samples, std::uint64_t seed) {
    Rng rng(seed);
    double best = 0.0;
    for (int s = 0; s < samples; ++s) {
        const std::vector<VectorXd> lead{rng.sphere_point(t.dim(0))};
        const Eigen::MatrixXd m = slice_matrix(t, std::span<const VectorXd>(lead));
        best = std::max(best, Eigen::JacobiSVD<Eigen::MatrixXd>(m).singularValues()[0]);
    }
    return best;
}

Outcome ac10_grid_oracle() {
    Outcome o;
    const std::vector<HittingSet> sets{build_grid(3, 25)};
    Rng rng(10);
    double worst = 0.0;
    for (int i = 0; i < 10; ++i) {
        Tensor t(Shape{3, 3, 3});
        t.data() = rng.gaussian_vector(27);
        const double approx = approx_spectral_norm(t, std::span<const HittingSet>(sets)).value;
        const double brute = brute_force_spectral(t, 1'000'000, derive_seed(1010, static_cast<std::uint64_t>(i)));
        worst = std::max(worst, std::abs(approx - brute) / brute);
    }
    o.require(worst <= 0.02, fmt("worst relative gap %.4f", worst));
    if (o.pass) o.detail = fmt("10 tensors, worst relative gap %.2e", worst);
    return o;
}

}  // namespace

int main() {
    struct Criterion {
        const char* id;
        double limit_seconds;
        std::function<Outcome()> run;
    };
    const std::vector<Criterion> criteria{
        {"AC1", 1.0, ac1_table2},
        {"AC2", 300.0, ac2_table3},
        {"AC3", 120.0, ac3_certification},
        {"AC4", 600.0, ac4_spectral_floor},
        {"AC5", 600.0, ac5_als},
        {"AC6", 1800.0, ac6_nuclear_sandwich},
        {"AC7", 1800.0, ac7_certified_nuclear},
        {"AC8", 30.0, ac8_polarization},
        {"AC9", 120.0, ac9_composition},
        {"AC10", 300.0, ac10_grid_oracle},
    };
    int failures = 0;
    for (const auto& c : criteria) {
        const auto start = std::chrono::steady_clock::now();
        Outcome o;
        try {
            o = c.run();
        } catch (const std::exception& e) {
            o.pass = false;
            o.detail = std::string("exception: ") + e.what();
        }
        const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
        if (secs > c.limit_seconds) o.require(false, fmt("took %.1f s, limit %.0f s", secs, c.limit_seconds));
        if (!o.pass) ++failures;
        std::printf("%s %s (%.1f s) %s\n", c.id, o.pass ? "PASS" : "FAIL", secs, o.detail.c_str());
        std::fflush(stdout);
    }
    return failures == 0 ? 0 : 1;
}
