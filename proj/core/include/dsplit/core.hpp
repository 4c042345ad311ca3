#pragma once

#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "dsplit/errors.hpp"

namespace dsplit {

/// Coefficients are stored complex so one scheme type covers both fields.
using Coefficient = std::complex<double>;

template <class S>
struct is_complex : std::false_type {};
template <class T>
struct is_complex<std::complex<T>> : std::true_type {};
template <class S>
inline constexpr bool is_complex_v = is_complex<S>::value;

/// State entries: real or complex double precision. The field is fixed at
/// instantiation so real problems never pay for complex arithmetic.
template <class S>
concept Scalar = std::same_as<S, double> || std::same_as<S, std::complex<double>>;

template <Scalar S>
using StateVector = std::vector<S>;

/// Narrows a stored coefficient to the state field. Real instantiations reject
/// coefficients with a nonzero imaginary part.
template <Scalar S>
S coefficient_cast(Coefficient c) {
  if constexpr (is_complex_v<S>) {
    return c;
  } else {
    if (c.imag() != 0.0) {
      throw FieldCapabilityError("complex coefficient used with a real state field");
    }
    return c.real();
  }
}

template <Scalar S>
std::vector<S> coefficient_cast(std::span<const Coefficient> cs) {
  std::vector<S> out;
  out.reserve(cs.size());
  for (const auto& c : cs) out.push_back(coefficient_cast<S>(c));
  return out;
}

template <Scalar S>
bool is_finite(S value) {
  if constexpr (is_complex_v<S>) {
    return std::isfinite(value.real()) && std::isfinite(value.imag());
  } else {
    return std::isfinite(value);
  }
}

template <Scalar S>
bool all_finite(std::span<const S> x) {
  for (const S& xi : x) {
    if (!is_finite(xi)) return false;
  }
  return true;
}

/// Euclidean norm with the conjugated inner product, sqrt(sum conj(x_i) x_i).
template <Scalar S>
double norm_l2(std::span<const S> x) {
  double sum = 0.0;
  for (const S& xi : x) sum += std::norm(xi);
  return std::sqrt(sum);
}

template <Scalar S>
double norm_l2(const StateVector<S>& x) {
  return norm_l2(std::span<const S>(x));
}

/// y <- y + c x
template <Scalar S>
void axpy(S c, std::span<const S> x, std::span<S> y) {
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) y[i] += c * x[i];
}

inline bool overlaps(const void* a, std::size_t a_bytes, const void* b, std::size_t b_bytes) {
  const auto* pa = static_cast<const unsigned char*>(a);
  const auto* pb = static_cast<const unsigned char*>(b);
  return std::less<>{}(pa, pb + b_bytes) && std::less<>{}(pb, pa + a_bytes);
}

/// How a right-hand side reaches the steppers. `accumulate` systems add
/// c*f(t,x) straight into the target register; `adapter` systems wrap a plain
/// f(t,x) -> buffer function and need an extra N-length buffer to do so.
enum class RhsContract { accumulate, adapter };

/// Vector field x' = f(t, x) exposed through the accumulate contract
/// y <- y + c f(t, x). Every evaluation bumps eval_count() by exactly one,
/// including evaluations with c == 0.
template <Scalar S>
class RhsSystem {
 public:
  explicit RhsSystem(std::size_t dimension, bool autonomous = true)
      : dimension_(dimension), autonomous_(autonomous) {
    if (dimension == 0) throw ContractViolation("rhs dimension must be positive");
  }
  virtual ~RhsSystem() = default;

  std::size_t dimension() const noexcept { return dimension_; }
  bool autonomous() const noexcept { return autonomous_; }
  std::uint64_t eval_count() const noexcept { return eval_count_; }
  void reset_eval_count() noexcept { eval_count_ = 0; }

  virtual RhsContract contract() const noexcept { return RhsContract::accumulate; }

  /// y <- y + c f(t, x); x is left untouched. x and y must not overlap.
  void accumulate(double t, std::span<const S> x, S c, std::span<S> y) {
    if (x.size() != dimension_ || y.size() != dimension_) {
      throw ContractViolation("rhs dimension mismatch: expected " + std::to_string(dimension_) +
                              ", got x=" + std::to_string(x.size()) +
                              " y=" + std::to_string(y.size()));
    }
    if (overlaps(x.data(), x.size_bytes(), y.data(), y.size_bytes())) {
      throw ContractViolation("rhs input and accumulation target alias");
    }
    ++eval_count_;
    accumulate_impl(t, x, c, y);
  }

 protected:
  RhsSystem(const RhsSystem&) = default;
  RhsSystem& operator=(const RhsSystem&) = default;

  virtual void accumulate_impl(double t, std::span<const S> x, S c, std::span<S> y) = 0;

 private:
  std::size_t dimension_;
  bool autonomous_;
  std::uint64_t eval_count_ = 0;
};

template <Scalar S>
void accumulate_rhs(RhsSystem<S>& rhs, double t, std::span<const S> x, S c, std::span<S> y) {
  rhs.accumulate(t, x, c, y);
}

/// Wraps a plain `f(t, x, dxdt)` function. Evaluating it needs an internal
/// N-length buffer, so steppers driven through this adapter hold three
/// registers instead of two.
template <Scalar S>
class FunctionRhs final : public RhsSystem<S> {
 public:
  using Function = std::function<void(double, std::span<const S>, std::span<S>)>;

  FunctionRhs(std::size_t dimension, Function f, bool autonomous = true)
      : RhsSystem<S>(dimension, autonomous), f_(std::move(f)), buffer_(dimension) {}

  RhsContract contract() const noexcept override { return RhsContract::adapter; }

 protected:
  void accumulate_impl(double t, std::span<const S> x, S c, std::span<S> y) override {
    f_(t, x, buffer_);
    axpy<S>(c, buffer_, y);
  }

 private:
  Function f_;
  StateVector<S> buffer_;
};

}  // namespace dsplit
