#include "sphcover/tensor_io.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>
#include <sstream>

namespace sphcover {

namespace {

std::string format_value(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.16e", x);
    return buf;
}

}  // namespace

void write_tensor(std::ostream& os, const Tensor& t) {
    os << t.order();
    for (Index n : t.shape()) os << ' ' << n;
    os << '\n';
    const Index fiber = t.dim(t.order() - 1);
    for (Index i = 0; i < t.size(); ++i) {
        os << format_value(t.data()[i]);
        os << ((i + 1) % fiber == 0 ? '\n' : ' ');
    }
}

Tensor read_tensor(std::istream& is) {
    long long d = 0;
    if (!(is >> d)) throw ParseError("tensor file: missing order");
    if (d < 1 || d > 6) throw ParseError("tensor file: order must be between 1 and 6");
    Shape shape(static_cast<std::size_t>(d));
    for (auto& n : shape) {
        long long v = 0;
        if (!(is >> v) || v < 1) throw ParseError("tensor file: invalid dimension");
        n = static_cast<Index>(v);
    }
    Tensor t(shape);
    for (Index i = 0; i < t.size(); ++i) {
        std::string tok;
        if (!(is >> tok))
            throw ParseError("tensor file: expected " + std::to_string(t.size()) + " values, got " +
                             std::to_string(i));
        std::size_t used = 0;
        double v = 0;
        try {
            v = std::stod(tok, &used);
        } catch (const std::exception&) {
            used = 0;
        }
        if (used != tok.size() || !std::isfinite(v))
            throw ParseError("tensor file: bad value '" + tok + "'");
        t.data()[i] = v;
    }
    std::string extra;
    if (is >> extra) throw ParseError("tensor file: trailing data");
    return t;
}

void save_tensor(const std::filesystem::path& path, const Tensor& t) {
    std::ofstream os(path);
    if (!os) throw Error("cannot open " + path.string() + " for writing");
    write_tensor(os, t);
    if (!os) throw Error("write failed: " + path.string());
}

Tensor load_tensor(const std::filesystem::path& path) {
    std::ifstream is(path);
    if (!is) throw ParseError("cannot open " + path.string());
    return read_tensor(is);
}

}  // namespace sphcover
