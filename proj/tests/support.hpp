#pragma once

#include <doctest.h>

#include "qhelper/channel.hpp"
#include "qhelper/entropy.hpp"

namespace qhelper::test {

inline Rng make_rng(std::uint64_t seed) { return Rng(mix_seed(0x7e57u, seed)); }

inline DensityOperator random_state(const std::vector<int>& dims, std::uint64_t seed) {
  LabelList labels;
  static const char* names[] = {"A", "B", "C", "D"};
  for (std::size_t i = 0; i < dims.size(); ++i) labels.push_back(names[i]);
  Rng rng = make_rng(seed);
  return random_density(SystemLayout(labels, dims), rng);
}

inline PureState random_abr(std::uint64_t seed, int da = 2, int db = 2, int dr = 2) {
  Rng rng = make_rng(seed);
  return random_pure(SystemLayout({"A", "B", "R"}, {da, db, dr}), rng);
}

inline double max_abs_diff(const Matrix& a, const Matrix& b) {
  return (a - b).cwiseAbs().maxCoeff();
}

}  // namespace qhelper::test
