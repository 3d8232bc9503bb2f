#include "sphcover/hitting_set.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

namespace sphcover {

namespace {

using Key = std::vector<long long>;

Key rounded_key(const Eigen::Ref<const Eigen::VectorXd>& v) {
    Key k(static_cast<std::size_t>(v.size()));
    for (Eigen::Index i = 0; i < v.size(); ++i) k[static_cast<std::size_t>(i)] = std::llround(v[i] * 1e12);
    return k;
}

/// Index order sorted by rounded key, ties by column index.
std::vector<Eigen::Index> sorted_by_key(const std::vector<Key>& keys) {
    std::vector<Eigen::Index> order(keys.size());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
        return keys[static_cast<std::size_t>(a)] < keys[static_cast<std::size_t>(b)];
    });
    return order;
}

std::vector<Key> column_keys(const Eigen::MatrixXd& m) {
    std::vector<Key> keys;
    keys.reserve(static_cast<std::size_t>(m.cols()));
    for (Eigen::Index j = 0; j < m.cols(); ++j) keys.push_back(rounded_key(m.col(j)));
    return keys;
}

class ProvenanceParser {
public:
    explicit ProvenanceParser(std::string_view text) : text_(text) {}

    Provenance parse_all() {
        Provenance p = parse_node();
        if (pos_ != text_.size()) fail("trailing characters");
        return p;
    }

private:
    Provenance parse_node() {
        Provenance p;
        p.kind = token("(");
        if (p.kind.empty()) fail("missing kind");
        expect('(');
        if (peek() != '|' && peek() != ')') {
            for (;;) {
                std::string key = token("=");
                expect('=');
                std::string value = token(",|)");
                if (key.empty() || value.empty()) fail("empty parameter");
                p.params.emplace_back(std::move(key), std::move(value));
                if (peek() != ',') break;
                ++pos_;
            }
        }
        if (peek() == '|') {
            ++pos_;
            for (;;) {
                p.children.push_back(parse_node());
                if (peek() != ';') break;
                ++pos_;
            }
        }
        expect(')');
        return p;
    }

    std::string token(std::string_view stops) {
        const std::size_t start = pos_;
        while (pos_ < text_.size() && stops.find(text_[pos_]) == std::string_view::npos &&
               std::string_view("(),;|=").find(text_[pos_]) == std::string_view::npos)
            ++pos_;
        return std::string(text_.substr(start, pos_ - start));
    }

    char peek() const { return pos_ < text_.size() ? text_[pos_] : '\0'; }

    void expect(char c) {
        if (peek() != c) fail(std::string("expected '") + c + "'");
        ++pos_;
    }

    [[noreturn]] void fail(const std::string& what) const {
        throw ParseError("provenance '" + std::string(text_) + "' at offset " + std::to_string(pos_) + ": " +
                         what);
    }

    std::string_view text_;
    std::size_t pos_ = 0;
};

double parse_double(const std::string& tok, const char* what) {
    std::size_t used = 0;
    double v = 0;
    try {
        v = std::stod(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size()) throw ParseError(std::string("hitting-set file: bad ") + what + " '" + tok + "'");
    return v;
}

}  // namespace

std::string format_param(double x) {
    if (std::isnan(x)) return "nan";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string Provenance::to_string() const {
    std::string s = kind + "(";
    for (std::size_t i = 0; i < params.size(); ++i) {
        if (i) s += ',';
        s += params[i].first + "=" + params[i].second;
    }
    if (!children.empty()) {
        s += '|';
        for (std::size_t i = 0; i < children.size(); ++i) {
            if (i) s += ';';
            s += children[i].to_string();
        }
    }
    return s + ")";
}

Provenance Provenance::parse(std::string_view text) {
    return ProvenanceParser(text).parse_all();
}

const std::string& Provenance::param(std::string_view key) const {
    for (const auto& [k, v] : params)
        if (k == key) return v;
    throw ParseError("provenance " + kind + " has no parameter '" + std::string(key) + "'");
}

HittingSet::HittingSet(Eigen::MatrixXd vectors, double claimed_tau, Provenance provenance, bool certified)
    : vectors_(std::move(vectors)),
      claimed_tau_(claimed_tau),
      provenance_(std::move(provenance)),
      certified_(certified) {
    if (vectors_.rows() < 1 || vectors_.cols() < 1) throw ParameterError("hitting set must be non-empty");
    if (!vectors_.allFinite()) throw NumericError("hitting set has non-finite coordinates");
    for (Eigen::Index j = 0; j < vectors_.cols(); ++j)
        if (std::abs(vectors_.col(j).norm() - 1.0) > 1e-12)
            throw ParameterError("hitting-set vector " + std::to_string(j) + " is not a unit vector");
    if (!std::isnan(claimed_tau_) && (claimed_tau_ < -1.0 || claimed_tau_ > 1.0))
        throw ParameterError("claimed tau outside [-1, 1]");
    if (certified_ && std::isnan(claimed_tau_)) throw ParameterError("certified set needs a claimed tau");
    const auto keys = column_keys(vectors_);
    const auto order = sorted_by_key(keys);
    for (std::size_t i = 1; i < order.size(); ++i)
        if (keys[static_cast<std::size_t>(order[i])] == keys[static_cast<std::size_t>(order[i - 1])])
            throw ParameterError("hitting set contains duplicate vectors");
}

double HittingSet::max_inner(const Eigen::Ref<const Eigen::VectorXd>& x) const {
    if (x.size() != dim()) throw ShapeError("point dimension does not match hitting set");
    return (vectors_.transpose() * x).maxCoeff();
}

Eigen::MatrixXd normalize_dedup(const Eigen::MatrixXd& raw) {
    Eigen::MatrixXd m = raw;
    for (Eigen::Index j = 0; j < m.cols(); ++j) {
        const double norm = m.col(j).norm();
        if (!(norm > 0.0)) throw ParameterError("cannot normalize a zero vector");
        m.col(j) /= norm;
    }
    const auto keys = column_keys(m);
    const auto order = sorted_by_key(keys);
    std::vector<bool> keep(static_cast<std::size_t>(m.cols()), true);
    for (std::size_t i = 1; i < order.size(); ++i)
        if (keys[static_cast<std::size_t>(order[i])] == keys[static_cast<std::size_t>(order[i - 1])])
            keep[static_cast<std::size_t>(order[i])] = false;
    const auto kept = std::count(keep.begin(), keep.end(), true);
    Eigen::MatrixXd out(m.rows(), kept);
    Eigen::Index c = 0;
    for (Eigen::Index j = 0; j < m.cols(); ++j)
        if (keep[static_cast<std::size_t>(j)]) out.col(c++) = m.col(j);
    return out;
}

void write_hitting_set(std::ostream& os, const HittingSet& h) {
    os << h.dim() << ' ' << h.size() << ' ' << format_param(h.claimed_tau()) << ' ' << (h.certified() ? 1 : 0)
       << ' ' << h.provenance().to_string() << '\n';
    char buf[40];
    for (Eigen::Index j = 0; j < h.size(); ++j) {
        for (Eigen::Index i = 0; i < h.dim(); ++i) {
            std::snprintf(buf, sizeof buf, "%.17g", h.vectors()(i, j));
            if (i) os << ' ';
            os << buf;
        }
        os << '\n';
    }
}

HittingSet read_hitting_set(std::istream& is) {
    long long n = 0;
    long long m = 0;
    std::string tau_tok;
    int certified = 0;
    std::string prov;
    if (!(is >> n >> m >> tau_tok >> certified >> prov))
        throw ParseError("hitting-set file: malformed header line");
    if (n < 1 || m < 1) throw ParseError("hitting-set file: dimensions must be positive");
    if (certified != 0 && certified != 1) throw ParseError("hitting-set file: certified flag must be 0 or 1");
    const double tau = parse_double(tau_tok, "claimed tau");
    Eigen::MatrixXd v(n, m);
    for (long long j = 0; j < m; ++j)
        for (long long i = 0; i < n; ++i) {
            std::string tok;
            if (!(is >> tok)) throw ParseError("hitting-set file: truncated coordinates");
            v(i, j) = parse_double(tok, "coordinate");
        }
    std::string extra;
    if (is >> extra) throw ParseError("hitting-set file: trailing data");
    return HittingSet(std::move(v), tau, Provenance::parse(prov), certified == 1);
}

void save_hitting_set(const std::filesystem::path& path, const HittingSet& h) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    write_hitting_set(os, h);
    if (!os) throw Error("write failed: " + path.string());
}

HittingSet load_hitting_set(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open " + path.string());
    return read_hitting_set(is);
}

}  // namespace sphcover
