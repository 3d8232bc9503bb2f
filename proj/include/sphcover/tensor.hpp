#pragma once

#include "sphcover/errors.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <array>
#include <functional>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace sphcover {

using Index = Eigen::Index;
using Shape = std::vector<Index>;

template <typename Scalar>
using VectorX = Eigen::Matrix<Scalar, Eigen::Dynamic, 1>;
template <typename Scalar>
using MatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Scalar>
using RowMatrixX = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

inline Index shape_size(const Shape& shape) {
    return std::accumulate(shape.begin(), shape.end(), Index{1}, std::multiplies<>());
}

inline std::string shape_string(const Shape& shape) {
    std::string s;
    for (std::size_t k = 0; k < shape.size(); ++k) {
        if (k) s += 'x';
        s += std::to_string(shape[k]);
    }
    return s;
}

/// Dense real tensor of order d >= 1, row-major with the last index
/// fastest. Order-1 and order-2 tensors are ordinary vectors and
/// matrices; they are allowed so that the matrix case can be used as an
/// oracle for the higher-order algorithms.
template <typename Scalar>
class DenseTensor {
public:
    using Vector = VectorX<Scalar>;

    DenseTensor() : shape_{1}, data_(Vector::Zero(1)) {}

    explicit DenseTensor(Shape shape) : shape_(std::move(shape)) {
        validate_shape();
        data_ = Vector::Zero(shape_size(shape_));
    }

    DenseTensor(Shape shape, Vector data) : shape_(std::move(shape)), data_(std::move(data)) {
        validate_shape();
        if (data_.size() != shape_size(shape_))
            throw ShapeError("tensor data length " + std::to_string(data_.size()) +
                             " does not match shape " + shape_string(shape_));
    }

    Index order() const { return static_cast<Index>(shape_.size()); }
    const Shape& shape() const { return shape_; }
    Index dim(Index mode) const { return shape_[static_cast<std::size_t>(mode)]; }
    Index size() const { return data_.size(); }

    const Vector& data() const { return data_; }
    Vector& data() { return data_; }

    std::vector<Index> strides() const {
        std::vector<Index> s(shape_.size(), 1);
        for (std::size_t k = shape_.size(); k-- > 1;) s[k - 1] = s[k] * shape_[k];
        return s;
    }

    Index offset(std::span<const Index> idx) const {
        Index off = 0;
        for (std::size_t k = 0; k < shape_.size(); ++k) off = off * shape_[k] + idx[k];
        return off;
    }

    template <typename... Idx>
    Scalar operator()(Idx... idx) const {
        const std::array<Index, sizeof...(Idx)> i{static_cast<Index>(idx)...};
        return data_[offset(i)];
    }

    template <typename... Idx>
    Scalar& operator()(Idx... idx) {
        const std::array<Index, sizeof...(Idx)> i{static_cast<Index>(idx)...};
        return data_[offset(i)];
    }

    /// Row-major matricization: the first `split` modes index rows, the
    /// remaining modes index columns.
    Eigen::Map<const RowMatrixX<Scalar>> unfold(Index split) const {
        Index rows = 1;
        for (Index k = 0; k < split; ++k) rows *= dim(k);
        return {data_.data(), rows, size() / rows};
    }

    template <typename NewScalar>
    DenseTensor<NewScalar> cast() const {
        return DenseTensor<NewScalar>(shape_, data_.template cast<NewScalar>());
    }

    DenseTensor& operator*=(Scalar c) {
        data_ *= c;
        return *this;
    }

    friend DenseTensor operator*(Scalar c, DenseTensor t) { return t *= c; }
    friend DenseTensor operator*(DenseTensor t, Scalar c) { return t *= c; }

    friend DenseTensor operator+(const DenseTensor& a, const DenseTensor& b) {
        a.require_same_shape(b);
        return DenseTensor(a.shape_, a.data_ + b.data_);
    }

    friend DenseTensor operator-(const DenseTensor& a, const DenseTensor& b) {
        a.require_same_shape(b);
        return DenseTensor(a.shape_, a.data_ - b.data_);
    }

    void require_same_shape(const DenseTensor& other) const {
        if (shape_ != other.shape_)
            throw ShapeError("shape mismatch: " + shape_string(shape_) + " vs " +
                             shape_string(other.shape_));
    }

private:
    void validate_shape() const {
        if (shape_.empty()) throw ShapeError("tensor order must be at least 1");
        for (std::size_t k = 0; k < shape_.size(); ++k)
            if (shape_[k] < 1)
                throw ShapeError("mode " + std::to_string(k + 1) + " has non-positive dimension");
    }

    Shape shape_;
    Vector data_;
};

using Tensor = DenseTensor<double>;

/// Per-mode argument list for partial contraction: a concrete vector or
/// a hole (std::nullopt) that survives as an output mode.
template <typename Scalar>
struct ModeAssignment {
    std::vector<std::optional<VectorX<Scalar>>> modes;

    Index hole_count() const {
        return static_cast<Index>(
            std::count_if(modes.begin(), modes.end(), [](const auto& m) { return !m.has_value(); }));
    }
};

namespace detail {

template <typename Scalar, typename Vec>
void check_mode_vectors(const DenseTensor<Scalar>& t, std::span<const Vec> xs) {
    if (static_cast<Index>(xs.size()) != t.order())
        throw ShapeError("expected " + std::to_string(t.order()) + " vectors, got " +
                         std::to_string(xs.size()));
    for (std::size_t k = 0; k < xs.size(); ++k)
        if (xs[k].size() != t.dim(static_cast<Index>(k)))
            throw ShapeError("mode " + std::to_string(k + 1) + ": vector length " +
                             std::to_string(xs[k].size()) + " does not match dimension " +
                             std::to_string(t.dim(static_cast<Index>(k))));
}

}  // namespace detail

/// <T, x_1 (x) x_2 (x) ... (x) x_d>. Contracts from the last mode inward
/// so each step is one row-major matrix-vector product.
template <typename Scalar>
Scalar multilinear_form(const DenseTensor<Scalar>& t, std::span<const VectorX<Scalar>> xs) {
    detail::check_mode_vectors(t, xs);
    VectorX<Scalar> cur = t.data();
    for (Index k = t.order(); k-- > 0;) {
        const Index n = t.dim(k);
        Eigen::Map<const RowMatrixX<Scalar>> m(cur.data(), cur.size() / n, n);
        cur = m * xs[static_cast<std::size_t>(k)];
    }
    return cur[0];
}

template <typename Scalar>
Scalar multilinear_form(const DenseTensor<Scalar>& t, const std::vector<VectorX<Scalar>>& xs) {
    return multilinear_form(t, std::span<const VectorX<Scalar>>(xs));
}

/// Kronecker product x_1 [x] x_2 [x] ... (first vector varies slowest),
/// matching the row-major flattening of the corresponding modes.
template <typename Scalar>
VectorX<Scalar> kronecker(std::span<const VectorX<Scalar>> xs) {
    VectorX<Scalar> out = VectorX<Scalar>::Ones(1);
    for (const auto& x : xs) {
        VectorX<Scalar> next(out.size() * x.size());
        for (Index i = 0; i < out.size(); ++i) next.segment(i * x.size(), x.size()) = out[i] * x;
        out = std::move(next);
    }
    return out;
}

/// T(x_1, ..., x_{d-2}, ., .) given the Kronecker weight of the leading
/// modes; the result is n_{d-1} x n_d.
template <typename Scalar>
MatrixX<Scalar> slice_matrix_from_weight(const DenseTensor<Scalar>& t, const VectorX<Scalar>& weight) {
    const Index d = t.order();
    const Index rows = t.dim(d - 2);
    const Index cols = t.dim(d - 1);
    const auto unfolded = t.unfold(d - 2);
    if (weight.size() != unfolded.rows())
        throw ShapeError("leading weight length does not match leading modes");
    const RowMatrixX<Scalar> flat = weight.transpose() * unfolded;
    return Eigen::Map<const RowMatrixX<Scalar>>(flat.data(), rows, cols);
}

/// T(x_1, ..., x_{d-2}, ., .) for an order d >= 2 tensor.
template <typename Scalar>
MatrixX<Scalar> slice_matrix(const DenseTensor<Scalar>& t, std::span<const VectorX<Scalar>> leading) {
    if (t.order() < 2) throw ShapeError("slice_matrix needs a tensor of order >= 2");
    if (static_cast<Index>(leading.size()) != t.order() - 2)
        throw ShapeError("slice_matrix expects " + std::to_string(t.order() - 2) + " vectors");
    for (std::size_t k = 0; k < leading.size(); ++k)
        if (leading[k].size() != t.dim(static_cast<Index>(k)))
            throw ShapeError("mode " + std::to_string(k + 1) + ": vector length does not match");
    return slice_matrix_from_weight(t, kronecker(leading));
}

/// Contract every concrete mode of `assign`; the 1 or 2 holes remain, in
/// their original mode order.
template <typename Scalar>
DenseTensor<Scalar> partial_contract(const DenseTensor<Scalar>& t, const ModeAssignment<Scalar>& assign) {
    const Index d = t.order();
    if (static_cast<Index>(assign.modes.size()) != d)
        throw ShapeError("mode assignment has " + std::to_string(assign.modes.size()) +
                         " entries for an order-" + std::to_string(d) + " tensor");
    const Index holes = assign.hole_count();
    if (holes == 0) throw ParameterError("no holes in mode assignment; use multilinear_form");
    if (holes > 2) throw UnsupportedError("partial_contract supports at most two holes");

    Shape out_shape;
    std::vector<Index> hole_modes;
    for (Index k = 0; k < d; ++k) {
        const auto& m = assign.modes[static_cast<std::size_t>(k)];
        if (!m) {
            hole_modes.push_back(k);
            out_shape.push_back(t.dim(k));
        } else if (m->size() != t.dim(k)) {
            throw ShapeError("mode " + std::to_string(k + 1) + ": vector length " +
                             std::to_string(m->size()) + " does not match dimension " +
                             std::to_string(t.dim(k)));
        }
    }

    DenseTensor<Scalar> out(out_shape);
    std::vector<Index> idx(static_cast<std::size_t>(d), 0);
    const auto& data = t.data();
    for (Index flat = 0; flat < t.size(); ++flat) {
        Scalar coeff = data[flat];
        for (Index k = 0; k < d && coeff != Scalar(0); ++k) {
            const auto& m = assign.modes[static_cast<std::size_t>(k)];
            if (m) coeff *= (*m)[idx[static_cast<std::size_t>(k)]];
        }
        Index out_off = 0;
        for (Index h : hole_modes) out_off = out_off * t.dim(h) + idx[static_cast<std::size_t>(h)];
        out.data()[out_off] += coeff;
        for (Index k = d; k-- > 0;) {
            if (++idx[static_cast<std::size_t>(k)] < t.dim(k)) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
    }
    return out;
}

/// T(x_1, ..., x_{k-1}, ., x_{k+1}, ..., x_d): contracts the trailing
/// modes from the back and the leading modes from the front with
/// matrix-vector products. xs[k] is ignored.
template <typename Scalar>
VectorX<Scalar> contract_all_but(const DenseTensor<Scalar>& t, std::span<const VectorX<Scalar>> xs, Index k) {
    detail::check_mode_vectors(t, xs);
    if (k < 0 || k >= t.order()) throw ShapeError("free mode out of range");
    VectorX<Scalar> cur = t.data();
    for (Index j = t.order() - 1; j > k; --j) {
        const Index n = t.dim(j);
        Eigen::Map<const RowMatrixX<Scalar>> m(cur.data(), cur.size() / n, n);
        cur = m * xs[static_cast<std::size_t>(j)];
    }
    for (Index j = 0; j < k; ++j) {
        const Index n = t.dim(j);
        Eigen::Map<const RowMatrixX<Scalar>> m(cur.data(), n, cur.size() / n);
        cur = m.transpose() * xs[static_cast<std::size_t>(j)];
    }
    return cur;
}

template <typename Scalar>
Scalar frobenius_inner(const DenseTensor<Scalar>& a, const DenseTensor<Scalar>& b) {
    a.require_same_shape(b);
    return a.data().dot(b.data());
}

template <typename Scalar>
Scalar frobenius_norm(const DenseTensor<Scalar>& a) {
    return a.data().norm();
}

/// x_1 (x) x_2 (x) ... (x) x_d as an order-d tensor.
template <typename Scalar>
DenseTensor<Scalar> outer_product(std::span<const VectorX<Scalar>> xs) {
    Shape shape;
    for (const auto& x : xs) shape.push_back(x.size());
    return DenseTensor<Scalar>(shape, kronecker(xs));
}

template <typename Scalar>
DenseTensor<Scalar> outer_product(const std::vector<VectorX<Scalar>>& xs) {
    return outer_product(std::span<const VectorX<Scalar>>(xs));
}

/// Tensor whose mode k is mode perm[k] of `t`.
template <typename Scalar>
DenseTensor<Scalar> permute_modes(const DenseTensor<Scalar>& t, std::span<const Index> perm) {
    const Index d = t.order();
    if (static_cast<Index>(perm.size()) != d) throw ShapeError("permutation length does not match order");
    std::vector<bool> seen(static_cast<std::size_t>(d), false);
    Shape shape(static_cast<std::size_t>(d));
    for (Index k = 0; k < d; ++k) {
        const Index p = perm[static_cast<std::size_t>(k)];
        if (p < 0 || p >= d || seen[static_cast<std::size_t>(p)])
            throw ParameterError("invalid mode permutation");
        seen[static_cast<std::size_t>(p)] = true;
        shape[static_cast<std::size_t>(k)] = t.dim(p);
    }
    const auto src_strides = t.strides();
    DenseTensor<Scalar> out(shape);
    std::vector<Index> idx(static_cast<std::size_t>(d), 0);
    for (Index flat = 0; flat < out.size(); ++flat) {
        Index src = 0;
        for (Index k = 0; k < d; ++k)
            src += idx[static_cast<std::size_t>(k)] *
                   src_strides[static_cast<std::size_t>(perm[static_cast<std::size_t>(k)])];
        out.data()[flat] = t.data()[src];
        for (Index k = d; k-- > 0;) {
            if (++idx[static_cast<std::size_t>(k)] < shape[static_cast<std::size_t>(k)]) break;
            idx[static_cast<std::size_t>(k)] = 0;
        }
    }
    return out;
}

/// Largest absolute change of any entry under a transposition of two
/// adjacent modes; zero iff the tensor is symmetric (adjacent
/// transpositions generate the symmetric group).
template <typename Scalar>
Scalar symmetry_deviation(const DenseTensor<Scalar>& t) {
    const Index d = t.order();
    for (Index k = 1; k < d; ++k)
        if (t.dim(k) != t.dim(0)) return std::numeric_limits<Scalar>::infinity();
    Scalar dev(0);
    std::vector<Index> perm(static_cast<std::size_t>(d));
    for (Index k = 0; k + 1 < d; ++k) {
        std::iota(perm.begin(), perm.end(), Index{0});
        std::swap(perm[static_cast<std::size_t>(k)], perm[static_cast<std::size_t>(k + 1)]);
        const auto swapped = permute_modes(t, std::span<const Index>(perm));
        dev = std::max(dev, (swapped.data() - t.data()).cwiseAbs().maxCoeff());
    }
    return dev;
}

/// Average of `t` over all d! mode permutations.
template <typename Scalar>
DenseTensor<Scalar> symmetrize(const DenseTensor<Scalar>& t) {
    const Index d = t.order();
    std::vector<Index> perm(static_cast<std::size_t>(d));
    std::iota(perm.begin(), perm.end(), Index{0});
    DenseTensor<Scalar> acc(t.shape());
    Index count = 0;
    do {
        acc.data() += permute_modes(t, std::span<const Index>(perm)).data();
        ++count;
    } while (std::next_permutation(perm.begin(), perm.end()));
    acc.data() /= static_cast<Scalar>(count);
    return acc;
}

}  // namespace sphcover
