#include "cli.hpp"

#include "sphcover/covering.hpp"
#include "sphcover/discrepancy.hpp"
#include "sphcover/errors.hpp"
#include "sphcover/experiment.hpp"
#include "sphcover/hitting_set.hpp"
#include "sphcover/nuclear.hpp"
#include "sphcover/parallel.hpp"
#include "sphcover/random.hpp"
#include "sphcover/spectral.hpp"
#include "sphcover/tensor_io.hpp"

#include <CLI11.hpp>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

namespace sphcover::cli {

namespace {

struct Options {
    std::optional<std::uint64_t> seed;
    unsigned threads = 0;
    std::optional<std::int64_t> budget;
    std::string out;

    std::string kind;
    Index n = 0;
    Index m = 0;
    double alpha = kAlphaStar;
    double beta = kBetaStar;
    Index count = 0;
    std::int64_t restarts = 100;
    std::optional<double> tau;
    Index grid_m = 0;
    std::string tensor;
    std::vector<std::string> hits;
    double tol = 1e-6;
    std::optional<int> max_iter;
    std::string config;
};

std::string vector_text(const Eigen::Ref<const Eigen::VectorXd>& v) {
    std::string s;
    for (Index i = 0; i < v.size(); ++i) {
        if (i) s += ' ';
        s += format_param(v[i]);
    }
    return s;
}

/// Writes the record to --out when given, otherwise to `out`.
void emit(const Options& opt, std::ostream& out, const std::string& text) {
    if (opt.out.empty()) {
        out << text;
        return;
    }
    std::ofstream os(opt.out);
    if (!os) throw Error("cannot write " + opt.out);
    os << text;
}

HittingSet build_by_kind(const Options& opt) {
    const std::int64_t budget = opt.budget.value_or(kDefaultVectorBudget);
    const std::uint64_t seed = opt.seed.value_or(0);
    if (opt.n < 1) throw ParameterError("--n must be >= 1");
    if (opt.kind == "h2") return build_h2(opt.n, budget);
    if (opt.kind == "h3") return build_h3(opt.n, opt.alpha, opt.beta, budget);
    if (opt.kind == "h4") return build_h4(opt.n, budget);
    if (opt.kind == "h5") return build_h5(opt.n, opt.alpha, opt.beta, budget);
    if (opt.kind == "grid") return build_grid(opt.n, opt.m, budget);
    if (opt.kind == "random") return build_random(opt.n, opt.count, seed);
    return build_classical(opt.n, parse_classical_kind(opt.kind));
}

void cover_build(const Options& opt, std::ostream& out) {
    const HittingSet h = build_by_kind(opt);
    std::ostringstream os;
    write_hitting_set(os, h);
    emit(opt, out, os.str());
}

HittingSet single_set(const Options& opt) {
    if (opt.hits.size() != 1) throw ParameterError("expected exactly one --hits file");
    return load_hitting_set(opt.hits.front());
}

std::string report_text(const CoverReport& r) {
    std::ostringstream os;
    os << "estimated_tau " << format_param(r.estimated_tau) << '\n';
    os << "witness " << vector_text(r.witness) << '\n';
    os << "samples " << r.samples_used << '\n';
    os << "certified " << (r.certified_at ? 1 : 0) << '\n';
    if (r.certified_at) {
        os << "certified_tau " << format_param(r.certified_at->tau) << '\n';
        os << "grid_m " << r.certified_at->grid_m << '\n';
    }
    return os.str();
}

void cover_tau(const Options& opt, std::ostream& out) {
    const HittingSet h = single_set(opt);
    emit(opt, out, report_text(estimate_tau(h, opt.restarts, opt.seed.value_or(0))));
}

void cover_verify(const Options& opt, std::ostream& out) {
    const HittingSet h = single_set(opt);
    const double tau = opt.tau.value_or(h.claimed_tau());
    if (std::isnan(tau)) throw ParameterError("the set claims no tau; pass --tau");
    const std::int64_t budget = opt.budget.value_or(kDefaultGridBudget);
    const CoverReport r = opt.grid_m > 0 ? verify_cover(h, tau, opt.grid_m, budget) : verify_cover_auto(h, tau, budget);
    emit(opt, out, report_text(r));
}

/// Each --hits entry is a hitting-set file or, when no such file exists,
/// a construction spec (h5, random:60, ...) built for the k-th smallest
/// mode.
std::vector<HittingSet> resolve_sets(const Options& opt, const Tensor& t) {
    std::vector<HittingSet> sets;
    const auto order = enumeration_order(t.shape());
    for (std::size_t k = 0; k < opt.hits.size(); ++k) {
        const std::string& entry = opt.hits[k];
        if (std::filesystem::exists(entry)) {
            sets.push_back(load_hitting_set(entry));
        } else {
            if (k >= order.size()) throw ShapeError("too many --hits entries for this tensor");
            sets.push_back(hitting_set_from_spec(entry, t.dim(order[k]), derive_seed(opt.seed.value_or(0), k)));
        }
    }
    return sets;
}

Tensor load_input_tensor(const Options& opt) {
    if (opt.tensor.empty()) throw ParameterError("--tensor is required");
    return load_tensor(opt.tensor);
}

void spectral(const Options& opt, std::ostream& out) {
    const Tensor t = load_input_tensor(opt);
    SpectralApproxResult r;
    if (opt.hits.empty()) {
        const auto sets = default_hitting_sets(t, opt.budget.value_or(kDefaultVectorBudget));
        r = approx_spectral_norm(t, std::span<const HittingSet>(sets));
    } else {
        const auto sets = resolve_sets(opt, t);
        r = approx_spectral_norm(t, std::span<const HittingSet>(sets));
    }
    std::ostringstream os;
    os << "value " << format_param(r.value) << '\n';
    os << "bound_factor " << format_param(r.bound_factor) << '\n';
    os << "certified " << (r.certified ? 1 : 0) << '\n';
    os << "enumerated " << r.enumerated_count << '\n';
    for (std::size_t k = 0; k < r.solution.size(); ++k) os << "x" << k + 1 << ' ' << vector_text(r.solution[k]) << '\n';
    if (opt.max_iter && *opt.max_iter > 0) {
        const auto refined = als_refine(t, r.solution, *opt.max_iter);
        os << "refined_value " << format_param(refined.value) << '\n';
        os << "refined_iterations " << refined.iterations << '\n';
        os << "refined_converged " << (refined.converged ? 1 : 0) << '\n';
        for (std::size_t k = 0; k < refined.solution.size(); ++k)
            os << "refined_x" << k + 1 << ' ' << vector_text(refined.solution[k]) << '\n';
    }
    emit(opt, out, os.str());
}

void nuclear(const Options& opt, std::ostream& out) {
    const Tensor t = load_input_tensor(opt);
    std::vector<HittingSet> sets;
    if (opt.hits.empty()) {
        const auto order = enumeration_order(t.shape());
        for (Index k = 0; k + 2 < t.order(); ++k)
            sets.push_back(build_classical(t.dim(order[static_cast<std::size_t>(k)]), ClassicalKind::pm_basis));
    } else {
        sets = resolve_sets(opt, t);
    }
    const auto problem = assemble_problem(t, sets, opt.budget.value_or(kDefaultConstraintBudget));
    const auto r = solve_nuclear_sdp(problem, opt.tol, opt.max_iter.value_or(5000));
    std::ostringstream os;
    os << "u " << format_param(r.u) << '\n';
    os << "lower " << format_param(r.lower) << '\n';
    os << "upper " << format_param(r.upper) << '\n';
    os << "max_violation " << format_param(r.max_violation) << '\n';
    os << "primal_residual " << format_param(r.primal_residual) << '\n';
    os << "dual_residual " << format_param(r.dual_residual) << '\n';
    os << "iterations " << r.iterations << '\n';
    os << "converged " << (r.converged ? 1 : 0) << '\n';
    os << "certified " << (r.certified ? 1 : 0) << '\n';
    emit(opt, out, os.str());
}

void bench(const Options& opt, std::ostream& out) {
    if (opt.config.empty()) throw ParameterError("--config is required");
    ExperimentConfig cfg = load_config(opt.config);
    if (opt.seed) cfg.seed = *opt.seed;
    if (opt.budget) cfg.budget = *opt.budget;
    const std::filesystem::path prefix = opt.out.empty() ? std::filesystem::path(cfg.name) : std::filesystem::path(opt.out);
    const auto summary = run_experiment(cfg, prefix);
    std::ostringstream os;
    write_summary_csv(os, summary.aggregates);
    out << os.str();
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Sphere coverings and tensor norm approximation"};
    app.require_subcommand(1, 1);
    Options opt;

    const auto add_common = [&](CLI::App* sub) {
        sub->add_option("--seed", opt.seed, "Random seed (default 0)");
        sub->add_option("--threads", opt.threads, "Worker threads (0 = hardware)")->check(CLI::NonNegativeNumber);
        sub->add_option("--budget", opt.budget, "Vector, grid or constraint budget");
        sub->add_option("--out", opt.out, "Output path");
    };

    auto* build = app.add_subcommand("cover-build", "Construct a hitting set");
    add_common(build);
    build->add_option("--kind", opt.kind, "h2 h3 h4 h5 grid random simplex pm_basis antipodal singleton")->required();
    build->add_option("--n", opt.n, "Dimension")->required();
    build->add_option("--m", opt.m, "Grid parameter");
    build->add_option("--alpha", opt.alpha, "H3 alpha");
    build->add_option("--beta", opt.beta, "H3 beta");
    build->add_option("--count", opt.count, "Random set size");

    auto* tau = app.add_subcommand("cover-tau", "Estimate the covering ratio of a set");
    add_common(tau);
    tau->add_option("--hits", opt.hits, "Hitting-set file")->required();
    tau->add_option("--restarts", opt.restarts, "Random starts")->check(CLI::NonNegativeNumber);

    auto* verify = app.add_subcommand("cover-verify", "Certify a covering ratio on a grid");
    add_common(verify);
    verify->add_option("--hits", opt.hits, "Hitting-set file")->required();
    verify->add_option("--tau", opt.tau, "Ratio to certify (default: claimed)");
    verify->add_option("--grid-m", opt.grid_m, "Grid parameter (0 = automatic)");

    auto* spec = app.add_subcommand("spectral", "Approximate the spectral norm of a tensor");
    add_common(spec);
    spec->add_option("--tensor", opt.tensor, "Tensor file")->required();
    spec->add_option("--hits", opt.hits, "Hitting-set file or spec, one per enumerated mode");
    spec->add_option("--max-iter", opt.max_iter, "ALS sweeps after the approximation (0 = none)");

    auto* nuc = app.add_subcommand("nuclear", "Approximate the nuclear norm of a tensor");
    add_common(nuc);
    nuc->add_option("--tensor", opt.tensor, "Tensor file")->required();
    nuc->add_option("--hits", opt.hits, "Hitting-set file or spec, one per enumerated mode");
    nuc->add_option("--tol", opt.tol, "Relative residual tolerance");
    nuc->add_option("--max-iter", opt.max_iter, "ADMM iteration cap");

    auto* bch = app.add_subcommand("bench", "Run an experiment from a config file");
    add_common(bch);
    bch->add_option("--config", opt.config, "Config file")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    const std::map<CLI::App*, std::function<void(const Options&, std::ostream&)>> handlers{
        {build, cover_build}, {tau, cover_tau}, {verify, cover_verify},
        {spec, spectral},     {nuc, nuclear},   {bch, bench},
    };
    try {
        set_thread_count(opt.threads);
        handlers.at(app.get_subcommands().front())(opt, out);
    } catch (const Error& e) {
        err << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}

}  // namespace sphcover::cli
