#pragma once

#include "sphcover/tensor.hpp"

#include <filesystem>
#include <iosfwd>

namespace sphcover {

/// Text format: first line `d n_1 ... n_d`, then the entries in row-major
/// order, one mode-d fiber per line, each printed with 17 significant
/// digits.
void write_tensor(std::ostream& os, const Tensor& t);
Tensor read_tensor(std::istream& is);

void save_tensor(const std::filesystem::path& path, const Tensor& t);
Tensor load_tensor(const std::filesystem::path& path);

}  // namespace sphcover
