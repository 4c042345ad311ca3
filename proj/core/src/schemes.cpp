#include "dsplit/schemes.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace dsplit {
namespace {

using Wide = long double;

constexpr double kSumTolerance = 1e-15;
constexpr double kTableauTolerance = 1e-14;
constexpr double kPalindromeTolerance = 1e-15;

Coefficient real_coeff(Wide x) { return {static_cast<double>(x), 0.0}; }

std::vector<Coefficient> to_coeffs(const std::vector<Wide>& xs) {
  std::vector<Coefficient> out;
  out.reserve(xs.size());
  for (Wide x : xs) out.push_back(real_coeff(x));
  return out;
}

std::complex<Wide> wide_sum(std::span<const Coefficient> xs) {
  std::complex<Wide> s{0, 0};
  for (const auto& x : xs) s += std::complex<Wide>(x.real(), x.imag());
  return s;
}

Coefficient narrow(std::complex<Wide> x) {
  return {static_cast<double>(x.real()), static_cast<double>(x.imag())};
}

bool close(Coefficient x, Coefficient y, double tol) { return std::abs(x - y) <= tol; }

bool is_zero(Coefficient x) { return x == Coefficient{0.0, 0.0}; }

// Expands a palindromic listing with b_s = 0:
//   a = [a_1..a_m, a_{m+1}, a_m..a_1]            (s = 2m + 1)
//   b = [b_1..b_m, b_m..b_1, 0]
// where the middle a and the last listed b come from closure relations.
SplittingScheme expand_palindromic(std::string name, std::vector<Wide> a_head,
                                   std::vector<Wide> b_head, int p, int q) {
  Wide sa = 0;
  for (Wide x : a_head) sa += x;
  const Wide a_mid = Wide(1) - 2 * sa;

  Wide sb = 0;
  for (Wide x : b_head) sb += x;
  b_head.push_back(Wide(1) / 2 - sb);

  std::vector<Wide> a = a_head;
  a.push_back(a_mid);
  a.insert(a.end(), a_head.rbegin(), a_head.rend());

  std::vector<Wide> b = b_head;
  b.insert(b.end(), b_head.rbegin(), b_head.rend());
  b.push_back(0);

  SplittingScheme s;
  s.name = std::move(name);
  s.a = to_coeffs(a);
  s.b = to_coeffs(b);
  s.p_component = p;
  s.q_averaged = q;
  s.symmetric = true;
  return s;
}

SplittingScheme make_lie_trotter() {
  SplittingScheme s;
  s.name = "LT";
  s.a = {1.0};
  s.b = {1.0};
  s.p_component = 1;
  s.q_averaged = 2;
  return s;
}

SplittingScheme make_strang() {
  SplittingScheme s;
  s.name = "S2";
  s.a = {0.5, 0.5};
  s.b = {1.0, 0.0};
  s.p_component = 2;
  s.q_averaged = 2;
  s.symmetric = true;
  return s;
}

SplittingScheme make_bm4() {
  return expand_palindromic(
      "BM4",
      {0.07920369643119565L, 0.353172906049774L, -0.04206508035771952L},
      {0.209515106613362L, -0.143851773179818L}, 4, 4);
}

SplittingScheme make_bm6() {
  return expand_palindromic(
      "BM6",
      {0.05026276440039223L, 0.413514300428344L, 0.04507988979439766L, -0.188054853819569L,
       0.541960678450780L},
      {0.148816447901042L, -0.132385865767784L, 0.06730760469218501L, 0.432666402578175L}, 6,
      6);
}

SplittingScheme make_2n_s6() {
  return expand_palindromic(
      "2N-S6",
      {0.34117711626608893L, -0.11556397880852943L, 0.0091007844006896624L},
      {-0.19048598865349396L, -0.43215518907354579L}, 4, 6);
}

const std::vector<std::string> kBuiltinNames = {"LT", "S2", "BM4", "BM6", "2N-S6", "SPL24+", "SPL24-"};
const std::vector<std::string> kTableauNames = {"RK2", "RK4"};

Symmetry detect_symmetry(const SplittingScheme& s) {
  const std::size_t n = s.stages();
  if (n == 0 || s.b.size() != n) return Symmetry::none;
  const auto& a = s.a;
  const auto& b = s.b;
  const double tol = kPalindromeTolerance;
  // Indices below are 0-based translations of the 1-based patterns.
  auto trailing_b_zero = [&] {
    if (!close(b[n - 1], 0.0, tol)) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (!close(a[i], a[n - 1 - i], tol)) return false;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!close(b[i], b[n - 2 - i], tol)) return false;
    return true;
  };
  auto trailing_a_zero = [&] {
    if (!close(a[n - 1], 0.0, tol)) return false;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!close(a[i], a[n - 2 - i], tol)) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (!close(b[i], b[n - 1 - i], tol)) return false;
    return true;
  };
  auto leading_a_zero = [&] {
    if (!close(a[0], 0.0, tol)) return false;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (!close(a[i + 1], a[n - 1 - i], tol)) return false;
    for (std::size_t i = 0; i < n; ++i)
      if (!close(b[i], b[n - 1 - i], tol)) return false;
    return true;
  };
  if (trailing_b_zero()) return Symmetry::trailing_b_zero;
  if (trailing_a_zero()) return Symmetry::trailing_a_zero;
  if (leading_a_zero()) return Symmetry::leading_a_zero;
  return Symmetry::none;
}

bool has_imaginary(std::span<const Coefficient> xs) {
  return std::any_of(xs.begin(), xs.end(), [](const Coefficient& x) { return x.imag() != 0.0; });
}

void fill_nodes(ButcherTableau& t) {
  t.c.assign(t.stages, 0.0);
  for (std::size_t i = 0; i < t.stages; ++i) {
    Coefficient row{0.0, 0.0};
    for (std::size_t j = 0; j < i; ++j) row += t.a(i, j);
    t.c[i] = row;
  }
}

}  // namespace

std::string_view to_string(Symmetry s) {
  switch (s) {
    case Symmetry::none: return "none";
    case Symmetry::trailing_b_zero: return "b_s=0";
    case Symmetry::trailing_a_zero: return "a_s=0";
    case Symmetry::leading_a_zero: return "a_1=0";
  }
  return "none";
}

int SplittingScheme::evals_per_step() const noexcept {
  int n = 0;
  for (const auto& x : a) n += is_zero(x) ? 0 : 1;
  for (const auto& x : b) n += is_zero(x) ? 0 : 1;
  return n;
}

bool ConsistencyReport::consistent(double tol) const {
  return std::abs(sum_a - Coefficient(1.0)) <= tol && std::abs(sum_b - Coefficient(1.0)) <= tol;
}

bool ButcherTableau::is_complex() const {
  return has_imaginary(A) || has_imaginary(b) || has_imaginary(c) ||
         (b_hat && has_imaginary(*b_hat));
}

const std::vector<std::string>& builtin_scheme_names() { return kBuiltinNames; }
const std::vector<std::string>& builtin_tableau_names() { return kTableauNames; }

SplittingScheme spl24_scheme(int sign) {
  if (sign != 1 && sign != -1) throw ContractViolation("SPL24 root sign must be +1 or -1");
  const std::complex<Wide> root{Wide(3) / 12, sign * std::sqrt(Wide(3)) / 12};
  SplittingScheme s;
  s.name = sign > 0 ? "SPL24+" : "SPL24-";
  const Coefficient a = narrow(root);
  s.a = {a, Coefficient(1.0) - 2.0 * a, a};
  s.b = {0.5, 0.5, 0.0};
  s.p_component = 2;
  s.q_averaged = 4;
  s.symmetric = true;
  s.complex_coeffs = true;
  return s;
}

SplittingScheme load_scheme(std::string_view name) {
  if (name == "LT") return make_lie_trotter();
  if (name == "S2") return make_strang();
  if (name == "BM4") return make_bm4();
  if (name == "BM6") return make_bm6();
  if (name == "2N-S6") return make_2n_s6();
  if (name == "SPL24+") return spl24_scheme(+1);
  if (name == "SPL24-") return spl24_scheme(-1);
  throw LookupError("unknown splitting scheme '" + std::string(name) + "'");
}

ConsistencyReport verify_consistency(const SplittingScheme& scheme) {
  ConsistencyReport r;
  r.sum_a = narrow(wide_sum(scheme.a));
  r.sum_b = narrow(wide_sum(scheme.b));
  r.pattern = detect_symmetry(scheme);
  r.palindrome_ok = r.pattern != Symmetry::none;
  r.evals_per_step = scheme.evals_per_step();
  return r;
}

void validate(const SplittingScheme& scheme) {
  const std::string who = "scheme '" + scheme.name + "': ";
  if (scheme.a.empty()) throw InvariantViolation(who + "stage count must be positive");
  if (scheme.a.size() != scheme.b.size())
    throw InvariantViolation(who + "a and b must have the same length");
  const auto r = verify_consistency(scheme);
  if (std::abs(r.sum_a - Coefficient(1.0)) > kSumTolerance)
    throw InvariantViolation(who + "consistency: sum(a) != 1");
  if (std::abs(r.sum_b - Coefficient(1.0)) > kSumTolerance)
    throw InvariantViolation(who + "consistency: sum(b) != 1");
  if (scheme.p_component < 1) throw InvariantViolation(who + "component order must be >= 1");
  if (scheme.q_averaged < scheme.p_component)
    throw InvariantViolation(who + "averaged order must be >= component order");
  if (scheme.symmetric && !r.palindrome_ok)
    throw InvariantViolation(who + "symmetric flag set but no palindromic pattern matches");
  if (!scheme.complex_coeffs && (has_imaginary(scheme.a) || has_imaginary(scheme.b)))
    throw InvariantViolation(who + "complex coefficients in a scheme not flagged complex");
}

void validate(const ButcherTableau& t) {
  const std::string who = "tableau '" + t.name + "': ";
  const std::size_t s = t.stages;
  if (s == 0) throw InvariantViolation(who + "stage count must be positive");
  if (t.A.size() != s * s || t.b.size() != s || t.c.size() != s)
    throw InvariantViolation(who + "shape mismatch");
  if (t.b_hat && t.b_hat->size() != s) throw InvariantViolation(who + "b_hat shape mismatch");
  for (std::size_t i = 0; i < s; ++i)
    for (std::size_t j = i; j < s; ++j)
      if (!is_zero(t.a(i, j))) throw InvariantViolation(who + "explicitness: A is not strictly lower triangular");
  if (std::abs(narrow(wide_sum(t.b)) - Coefficient(1.0)) > kTableauTolerance)
    throw InvariantViolation(who + "consistency: sum(b) != 1");
  for (std::size_t i = 0; i < s; ++i) {
    std::complex<Wide> row{0, 0};
    for (std::size_t j = 0; j < i; ++j) row += std::complex<Wide>(t.a(i, j).real(), t.a(i, j).imag());
    if (std::abs(narrow(row) - t.c[i]) > kTableauTolerance)
      throw InvariantViolation(who + "nodes: c_i != sum_j A_ij");
  }
}

void validate(const LowStorageScheme& scheme) {
  const std::string who = "low-storage scheme '" + scheme.name + "': ";
  if (scheme.format == LowStorageScheme::Format::williamson) {
    if (scheme.B.empty()) throw InvariantViolation(who + "stage count must be positive");
    if (scheme.A.size() != scheme.B.size()) throw InvariantViolation(who + "A and B must have the same length");
    if (!is_zero(scheme.A.front())) throw InvariantViolation(who + "Williamson format requires A_1 = 0");
  } else {
    if (scheme.b.empty()) throw InvariantViolation(who + "stage count must be positive");
    if (scheme.a_sub.size() + 1 != scheme.b.size())
      throw InvariantViolation(who + "vdH format needs s-1 subdiagonal entries");
  }
  validate(to_butcher(scheme));
}

ButcherTableau dsplit_to_butcher(const SplittingScheme& scheme) {
  const std::size_t s = scheme.stages();
  ButcherTableau t;
  t.name = scheme.name + "-tableau";
  t.stages = 2 * s;
  t.order = scheme.q_averaged;
  t.A.assign(t.stages * t.stages, 0.0);
  // Stage k = 2i (0-based 2i-1) evaluates f(v_i); stage 2i+1 evaluates f(u_i).
  for (std::size_t i = 1; i <= s; ++i) {
    const std::size_t v_row = 2 * i - 1;
    for (std::size_t j = 1; j <= i; ++j) t.a(v_row, 2 * j - 2) = scheme.a[j - 1];
    if (i < s) {
      const std::size_t u_row = 2 * i;
      for (std::size_t j = 1; j <= i; ++j) t.a(u_row, 2 * j - 1) = scheme.b[j - 1];
    }
  }
  t.b.assign(t.stages, 0.0);
  std::vector<Coefficient> u_row(t.stages, 0.0);
  for (std::size_t j = 1; j <= s; ++j) {
    t.b[2 * j - 2] = 0.5 * scheme.a[j - 1];
    t.b[2 * j - 1] = 0.5 * scheme.b[j - 1];
    u_row[2 * j - 1] = scheme.b[j - 1];
  }
  t.b_hat = std::move(u_row);
  fill_nodes(t);
  return t;
}

ButcherTableau builtin_tableau(std::string_view name) {
  ButcherTableau t;
  t.name = std::string(name);
  if (name == "RK2") {
    t.stages = 2;
    t.A = {0.0, 0.0, 1.0, 0.0};
    t.b = {0.5, 0.5};
    t.order = 2;
  } else if (name == "RK4") {
    t.stages = 4;
    t.A.assign(16, 0.0);
    t.a(1, 0) = 0.5;
    t.a(2, 1) = 0.5;
    t.a(3, 2) = 1.0;
    t.b = {1.0 / 6.0, 1.0 / 3.0, 1.0 / 3.0, 1.0 / 6.0};
    t.order = 4;
  } else {
    throw LookupError("unknown tableau '" + std::string(name) + "'");
  }
  fill_nodes(t);
  return t;
}

ButcherTableau to_butcher(const LowStorageScheme& scheme) {
  const std::size_t s = scheme.stages();
  ButcherTableau t;
  t.name = scheme.name;
  t.stages = s;
  t.order = scheme.order;
  t.A.assign(s * s, 0.0);
  t.b.assign(s, 0.0);
  if (scheme.format == LowStorageScheme::Format::williamson) {
    // weight(j, i) = sum_{l=j}^{i} B_l prod_{m=j+1}^{l} A_m  (0-based j..i)
    auto weight = [&](std::size_t j, std::size_t last) {
      std::complex<Wide> sum{0, 0};
      std::complex<Wide> prod{1, 0};
      for (std::size_t l = j; l <= last; ++l) {
        if (l > j) prod *= std::complex<Wide>(scheme.A[l].real(), scheme.A[l].imag());
        sum += std::complex<Wide>(scheme.B[l].real(), scheme.B[l].imag()) * prod;
      }
      return narrow(sum);
    };
    for (std::size_t i = 1; i < s; ++i)
      for (std::size_t j = 0; j < i; ++j) t.a(i, j) = weight(j, i - 1);
    for (std::size_t j = 0; j < s; ++j) t.b[j] = weight(j, s - 1);
  } else {
    for (std::size_t i = 1; i < s; ++i) {
      for (std::size_t j = 0; j + 1 < i; ++j) t.a(i, j) = scheme.b[j];
      t.a(i, i - 1) = scheme.a_sub[i - 1];
    }
    t.b = scheme.b;
  }
  fill_nodes(t);
  return t;
}

SchemeCatalog::SchemeCatalog() {
  for (const auto& name : kBuiltinNames) {
    schemes_.emplace(name, load_scheme(name));
    order_.push_back(name);
  }
}

void SchemeCatalog::add(SplittingScheme scheme) {
  if (std::find(kBuiltinNames.begin(), kBuiltinNames.end(), scheme.name) != kBuiltinNames.end())
    throw ContractViolation("cannot replace bundled scheme '" + scheme.name + "'");
  validate(scheme);
  const auto it = schemes_.find(scheme.name);
  if (it == schemes_.end()) {
    order_.push_back(scheme.name);
    schemes_.emplace(scheme.name, std::move(scheme));
  } else {
    it->second = std::move(scheme);
  }
}

bool SchemeCatalog::contains(std::string_view name) const { return schemes_.find(name) != schemes_.end(); }

SplittingScheme SchemeCatalog::get(std::string_view name) const {
  const auto it = schemes_.find(name);
  if (it == schemes_.end()) throw LookupError("unknown splitting scheme '" + std::string(name) + "'");
  return it->second;
}

std::vector<std::string> SchemeCatalog::names() const { return order_; }

}  // namespace dsplit
