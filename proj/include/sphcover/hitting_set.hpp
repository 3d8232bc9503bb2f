#pragma once

#include "sphcover/errors.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace sphcover {

/// Construction record of a hitting set, e.g.
/// `h4(n=6|kron(n2=3|h2(n=2)))`. No whitespace, so it fits the header
/// line of the text format.
struct Provenance {
    std::string kind;
    std::vector<std::pair<std::string, std::string>> params;
    std::vector<Provenance> children;

    std::string to_string() const;
    static Provenance parse(std::string_view text);

    /// Value of parameter `key`; throws ParseError when absent.
    const std::string& param(std::string_view key) const;

    friend bool operator==(const Provenance&, const Provenance&) = default;
};

/// Formats a real parameter so that it parses back to the same double.
std::string format_param(double x);

/// Finite set of unit vectors in R^n stored as the columns of an n x m
/// matrix, together with the covering ratio its construction guarantees.
/// Immutable after construction.
class HittingSet {
public:
    /// Validates unit norms (1e-12) and the absence of duplicates.
    HittingSet(Eigen::MatrixXd vectors, double claimed_tau, Provenance provenance, bool certified);

    Eigen::Index dim() const { return vectors_.rows(); }
    Eigen::Index size() const { return vectors_.cols(); }
    const Eigen::MatrixXd& vectors() const { return vectors_; }
    auto vector(Eigen::Index i) const { return vectors_.col(i); }

    /// NaN for randomized sets.
    double claimed_tau() const { return claimed_tau_; }
    bool certified() const { return certified_; }
    const Provenance& provenance() const { return provenance_; }

    /// max_i v_i^T x.
    double max_inner(const Eigen::Ref<const Eigen::VectorXd>& x) const;

private:
    Eigen::MatrixXd vectors_;
    double claimed_tau_;
    Provenance provenance_;
    bool certified_;
};

/// Normalizes the columns and removes duplicates (coordinates compared
/// after rounding to 12 decimals); the surviving columns keep their first
/// occurrence order. Zero columns are rejected.
Eigen::MatrixXd normalize_dedup(const Eigen::MatrixXd& raw);

struct CoverCertificate {
    double tau;
    std::int64_t grid_m;
};

struct CoverReport {
    /// Smallest max_i v_i^T x found, an upper bound on the true ratio.
    double estimated_tau;
    Eigen::VectorXd witness;
    std::optional<CoverCertificate> certified_at;
    std::int64_t samples_used;
};

/// Text format: `n m claimed_tau certified provenance` on the first line,
/// then m lines of n coordinates with 17 significant digits.
void write_hitting_set(std::ostream& os, const HittingSet& h);
HittingSet read_hitting_set(std::istream& is);

void save_hitting_set(const std::filesystem::path& path, const HittingSet& h);
HittingSet load_hitting_set(const std::filesystem::path& path);

}  // namespace sphcover
