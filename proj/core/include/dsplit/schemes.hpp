#pragma once

#include <complex>
#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dsplit/core.hpp"

namespace dsplit {

/// Which palindromic pattern a splitting scheme satisfies (1-based indices).
enum class Symmetry {
  none,
  trailing_b_zero,  ///< b_s = 0, a_i = a_{s+1-i}, b_i = b_{s-i}
  trailing_a_zero,  ///< a_s = 0, a_i = a_{s-i},   b_i = b_{s+1-i}
  leading_a_zero,   ///< a_1 = 0, a_{i+1} = a_{s+1-i}, b_i = b_{s+1-i}
};

std::string_view to_string(Symmetry s);

/// Splitting coefficients (a_i, b_i), i = 1..s, for the composition
/// e^{h b_s B} e^{h a_s A} ... e^{h b_1 B} e^{h a_1 A} applied in the
/// duplicated phase space u' = f(v), v' = f(u).
struct SplittingScheme {
  std::string name;
  std::vector<Coefficient> a;
  std::vector<Coefficient> b;
  int p_component = 1;  ///< order of u_s and v_s
  int q_averaged = 1;   ///< order of (u_s + v_s) / 2
  bool symmetric = false;
  bool complex_coeffs = false;

  std::size_t stages() const noexcept { return a.size(); }

  /// Vector-field evaluations per step; zero coefficients cost nothing.
  int evals_per_step() const noexcept;
};

struct ConsistencyReport {
  Coefficient sum_a;
  Coefficient sum_b;
  bool palindrome_ok = false;
  Symmetry pattern = Symmetry::none;
  int evals_per_step = 0;

  /// |sum_a - 1| and |sum_b - 1| both within `tol`.
  bool consistent(double tol = 1e-15) const;
};

/// Explicit Runge-Kutta tableau. A is stored dense row-major, s x s.
struct ButcherTableau {
  std::string name;
  std::size_t stages = 0;
  std::vector<Coefficient> A;
  std::vector<Coefficient> b;
  std::optional<std::vector<Coefficient>> b_hat;
  std::vector<Coefficient> c;
  int order = 0;

  Coefficient a(std::size_t i, std::size_t j) const { return A[i * stages + j]; }
  Coefficient& a(std::size_t i, std::size_t j) { return A[i * stages + j]; }
  bool is_complex() const;
};

/// Two-register RK formats: Williamson (A_i, B_i with A_1 = 0) and the
/// van der Houwen / 2R form (weights b_i and subdiagonal a_{i,i-1}).
struct LowStorageScheme {
  enum class Format { williamson, vdh };

  std::string name;
  Format format = Format::williamson;
  std::vector<Coefficient> A;      ///< Williamson A_i, size s
  std::vector<Coefficient> B;      ///< Williamson B_i, size s
  std::vector<Coefficient> b;      ///< vdH weights, size s
  std::vector<Coefficient> a_sub;  ///< vdH a_{i+1,i}, size s-1
  int order = 0;

  std::size_t stages() const noexcept { return format == Format::williamson ? B.size() : b.size(); }
};

/// Names of the bundled splitting schemes in listing order.
const std::vector<std::string>& builtin_scheme_names();

/// Bundled scheme by name: LT, S2, BM4, BM6, 2N-S6, SPL24+, SPL24-.
/// Throws LookupError for anything else.
SplittingScheme load_scheme(std::string_view name);

/// Strang-type composition with complex a = (3 + sign i sqrt(3)) / 12.
SplittingScheme spl24_scheme(int sign);

/// Field-checked variant: a real instantiation throws FieldCapabilityError.
template <Scalar S>
SplittingScheme spl24_scheme_for(int sign) {
  if constexpr (!is_complex_v<S>) {
    (void)sign;
    throw FieldCapabilityError("SPL24 requires the complex field");
  } else {
    return spl24_scheme(sign);
  }
}

ConsistencyReport verify_consistency(const SplittingScheme& scheme);

/// Throws InvariantViolation naming the failed check.
void validate(const SplittingScheme& scheme);
void validate(const ButcherTableau& tableau);
void validate(const LowStorageScheme& scheme);

/// Equivalent 2s-stage tableau. Stage 2i-1 evaluates f(u_{i-1}), stage 2i
/// evaluates f(v_i); weights are the halved interleaved (a_i, b_i) and b_hat
/// is the u_s row.
ButcherTableau dsplit_to_butcher(const SplittingScheme& scheme);

/// RK2 (Heun) or RK4 (classical).
ButcherTableau builtin_tableau(std::string_view name);
const std::vector<std::string>& builtin_tableau_names();

/// Full tableau reproducing a two-register scheme.
ButcherTableau to_butcher(const LowStorageScheme& scheme);

/// User-registered schemes on top of the bundled catalogue.
class SchemeCatalog {
 public:
  SchemeCatalog();

  /// Validates and stores; replaces an existing user entry of the same name.
  void add(SplittingScheme scheme);
  bool contains(std::string_view name) const;
  SplittingScheme get(std::string_view name) const;
  std::vector<std::string> names() const;

 private:
  std::map<std::string, SplittingScheme, std::less<>> schemes_;
  std::vector<std::string> order_;
};

}  // namespace dsplit
