#pragma once

#include <cmath>
#include <random>
#include <span>
#include <vector>

#include "dsplit/core.hpp"

namespace dsplit::test {

/// Relative difference ||a - b|| / max(||b||, tiny).
template <Scalar S>
double rel_diff(std::span<const S> a, std::span<const S> b) {
  double num = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) num += std::norm(a[i] - b[i]);
  const double den = norm_l2(b);
  return std::sqrt(num) / (den > 0.0 ? den : 1e-300);
}

template <Scalar S>
double rel_diff(const std::vector<S>& a, const std::vector<S>& b) {
  return rel_diff<S>(std::span<const S>(a), std::span<const S>(b));
}

inline std::vector<double> random_vector(std::mt19937_64& rng, std::size_t n, double lo = -1.0, double hi = 1.0) {
  std::uniform_real_distribution<double> dist(lo, hi);
  std::vector<double> x(n);
  for (auto& v : x) v = dist(rng);
  return x;
}

inline std::vector<std::complex<double>> random_complex_vector(std::mt19937_64& rng, std::size_t n) {
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  std::vector<std::complex<double>> x(n);
  for (auto& v : x) v = {dist(rng), dist(rng)};
  return x;
}

}  // namespace dsplit::test
