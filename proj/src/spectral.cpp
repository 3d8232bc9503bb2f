#include "sphcover/spectral.hpp"

#include "sphcover/linalg.hpp"
#include "sphcover/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace sphcover {

using Eigen::MatrixXd;
using Eigen::VectorXd;

namespace {

constexpr std::int64_t kTupleChunk = 256;

struct ChunkBest {
    double value = -std::numeric_limits<double>::infinity();
    std::int64_t tuple = -1;
    VectorXd u;
    VectorXd v;
};

std::vector<Index> decode_tuple(std::int64_t tuple, const std::vector<Index>& sizes) {
    std::vector<Index> digits(sizes.size());
    for (std::size_t k = sizes.size(); k-- > 0;) {
        digits[k] = static_cast<Index>(tuple % sizes[k]);
        tuple /= sizes[k];
    }
    return digits;
}

}  // namespace

std::vector<Index> enumeration_order(const Shape& shape) {
    std::vector<Index> perm(shape.size());
    std::iota(perm.begin(), perm.end(), Index{0});
    std::stable_sort(perm.begin(), perm.end(), [&](Index a, Index b) {
        return shape[static_cast<std::size_t>(a)] < shape[static_cast<std::size_t>(b)];
    });
    return perm;
}

SpectralApproxResult approx_spectral_norm(const Tensor& t, std::span<const HittingSet> sets) {
    const Index d = t.order();
    if (d < 2) throw ShapeError("approx_spectral_norm needs a tensor of order >= 2");
    if (static_cast<Index>(sets.size()) != d - 2)
        throw ShapeError("expected " + std::to_string(d - 2) + " hitting sets, got " + std::to_string(sets.size()));
    if (!t.data().allFinite()) throw NumericError("tensor has non-finite entries");

    const auto perm = enumeration_order(t.shape());
    std::vector<const HittingSet*> hs;
    for (const auto& h : sets) hs.push_back(&h);
    std::stable_sort(hs.begin(), hs.end(), [](const HittingSet* a, const HittingSet* b) { return a->dim() < b->dim(); });
    for (std::size_t k = 0; k < hs.size(); ++k)
        if (hs[k]->dim() != t.dim(perm[k]))
            throw ShapeError("hitting set of dimension " + std::to_string(hs[k]->dim()) + " does not match mode " +
                             std::to_string(perm[k] + 1) + " of dimension " + std::to_string(t.dim(perm[k])));

    const Tensor p = permute_modes(t, std::span<const Index>(perm));
    const auto unfolded = p.unfold(d - 2);
    const Index rows = p.dim(d - 2);
    const Index cols = p.dim(d - 1);

    std::vector<Index> sizes;
    std::int64_t total = 1;
    for (const auto* h : hs) {
        sizes.push_back(h->size());
        if (total > std::numeric_limits<std::int64_t>::max() / h->size())
            throw BudgetError("hitting-set product is too large to enumerate");
        total *= h->size();
    }

    const std::int64_t chunks = (total + kTupleChunk - 1) / kTupleChunk;
    std::vector<ChunkBest> best(static_cast<std::size_t>(chunks));
    parallel_for(chunks, [&](std::int64_t c) {
        const std::int64_t begin = c * kTupleChunk;
        const std::int64_t end = std::min(total, begin + kTupleChunk);
        MatrixXd weights(unfolded.rows(), end - begin);
        for (std::int64_t tuple = begin; tuple < end; ++tuple) {
            const auto digits = decode_tuple(tuple, sizes);
            VectorXd w = VectorXd::Ones(1);
            for (std::size_t k = 0; k < hs.size(); ++k) {
                const auto z = hs[k]->vector(digits[k]);
                VectorXd next(w.size() * z.size());
                for (Index i = 0; i < w.size(); ++i) next.segment(i * z.size(), z.size()) = w[i] * z;
                w = std::move(next);
            }
            weights.col(tuple - begin) = w;
        }
        const RowMatrixX<double> slices = weights.transpose() * unfolded;
        auto& b = best[static_cast<std::size_t>(c)];
        for (Index r = 0; r < slices.rows(); ++r) {
            const Eigen::Map<const RowMatrixX<double>> m(slices.row(r).data(), rows, cols);
            auto top = spectral_norm_matrix(m);
            if (top.value > b.value) {
                b.value = top.value;
                b.tuple = begin + r;
                b.u = std::move(top.u);
                b.v = std::move(top.v);
            }
        }
    });

    const ChunkBest* winner = &best.front();
    for (const auto& b : best)
        if (b.value > winner->value) winner = &b;

    SpectralApproxResult out;
    out.solution.resize(static_cast<std::size_t>(d));
    const auto digits = decode_tuple(winner->tuple, sizes);
    for (std::size_t k = 0; k < hs.size(); ++k) out.solution[static_cast<std::size_t>(perm[k])] = hs[k]->vector(digits[k]);
    out.solution[static_cast<std::size_t>(perm[static_cast<std::size_t>(d - 2)])] = winner->u;
    out.solution[static_cast<std::size_t>(perm[static_cast<std::size_t>(d - 1)])] = winner->v;
    out.value = multilinear_form(t, std::span<const VectorXd>(out.solution));
    out.enumerated_count = total;
    out.mode_permutation = perm;
    out.certified = std::all_of(hs.begin(), hs.end(), [](const HittingSet* h) { return h->certified(); });
    out.bound_factor = 1.0;
    for (const auto* h : hs) out.bound_factor *= h->claimed_tau();
    if (!out.certified) out.bound_factor = std::numeric_limits<double>::quiet_NaN();
    return out;
}

std::vector<HittingSet> default_hitting_sets(const Tensor& t, std::int64_t budget) {
    const auto perm = enumeration_order(t.shape());
    std::vector<HittingSet> sets;
    for (Index k = 0; k + 2 < t.order(); ++k) {
        const Index n = t.dim(perm[static_cast<std::size_t>(k)]);
        if (n == 1) {
            sets.push_back(build_classical(1, ClassicalKind::pm_basis));
            continue;
        }
        try {
            sets.push_back(build_h5(n, kAlphaStar, kBetaStar, budget));
        } catch (const BudgetError&) {
            sets.push_back(build_h4(n, budget));
        }
    }
    return sets;
}

SpectralApproxResult approx_spectral_norm(const Tensor& t) {
    const auto sets = default_hitting_sets(t);
    return approx_spectral_norm(t, std::span<const HittingSet>(sets));
}

SpectralApproxResult als_refine(const Tensor& t, std::span<const VectorXd> start, int max_iter, double tol) {
    const Index d = t.order();
    if (static_cast<Index>(start.size()) != d)
        throw ShapeError("als_refine expects " + std::to_string(d) + " start vectors");
    std::vector<VectorXd> xs(start.begin(), start.end());
    for (Index k = 0; k < d; ++k) {
        auto& x = xs[static_cast<std::size_t>(k)];
        if (x.size() != t.dim(k)) throw ShapeError("start vector " + std::to_string(k + 1) + " has wrong length");
        const double norm = x.norm();
        if (!(norm > 0.0)) throw ParameterError("start vectors must be non-zero");
        x /= norm;
    }

    SpectralApproxResult out;
    out.mode_permutation.resize(static_cast<std::size_t>(d));
    std::iota(out.mode_permutation.begin(), out.mode_permutation.end(), Index{0});
    out.converged = false;
    double f = multilinear_form(t, std::span<const VectorXd>(xs));
    for (int it = 1; it <= max_iter; ++it) {
        for (Index k = 0; k < d; ++k) {
            const VectorXd g = contract_all_but(t, std::span<const VectorXd>(xs), k);
            const double norm = g.norm();
            if (!(norm > 0.0)) {
                out.solution.assign(start.begin(), start.end());
                out.value = multilinear_form(t, start);
                out.degenerate = true;
                out.iterations = it;
                return out;
            }
            xs[static_cast<std::size_t>(k)] = g / norm;
        }
        const double next = multilinear_form(t, std::span<const VectorXd>(xs));
        out.history.push_back(next);
        out.iterations = it;
        const bool done = std::abs(next - f) <= tol * std::max(std::abs(next), std::numeric_limits<double>::min());
        f = next;
        if (done) {
            out.converged = true;
            break;
        }
    }
    out.value = f;
    out.solution = std::move(xs);
    return out;
}

}  // namespace sphcover
