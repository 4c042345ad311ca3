#pragma once

#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "dsplit/core.hpp"
#include "dsplit/schemes.hpp"

namespace dsplit {

/// How time enters the stage evaluations.
enum class TimeCoupling {
  /// Every evaluation sees the step start time; for autonomous fields.
  frozen,
  /// Time is carried as two extra coordinates u_t, v_t: v-updates evaluate at
  /// u_t and u-updates at v_t, advancing alongside the state.
  duplicated,
};

struct StorageReport {
  int persistent_registers = 0;  ///< N-length buffers
  int auxiliary_scalars = 0;     ///< time coordinates

  friend bool operator==(const StorageReport&, const StorageReport&) = default;
};

/// Register count for a D-splitting step: u and v plus the two time
/// coordinates, plus the adapter buffer when the rhs is not accumulate-native.
StorageReport storage_report(const SplittingScheme& scheme, std::size_t dimension,
                             RhsContract contract = RhsContract::accumulate);

/// Two-register D-splitting stepper.
///
/// The stepper owns exactly two N-length registers u and v, allocated once in
/// the constructor. A step runs, for i = 1..s,
///
///   v <- v + h a_i f(u)
///   u <- u + h b_i f(v)
///
/// starting from u = v = x_n. The averaged solution is (u + v) / 2 and
/// ||u - v|| is the embedded error estimate. Updates with a zero coefficient
/// skip the rhs call. The stage loop run backwards with negated coefficients
/// is the exact inverse map, which lets a rejected step be undone without a
/// third register.
template <Scalar S>
class DSplitStepper {
 public:
  DSplitStepper(const SplittingScheme& scheme, std::size_t dimension)
      : scheme_(scheme),
        a_(coefficient_cast<S>(std::span<const Coefficient>(scheme.a))),
        b_(coefficient_cast<S>(std::span<const Coefficient>(scheme.b))) {
    if (scheme.a.size() != scheme.b.size() || scheme.a.empty())
      throw ContractViolation("malformed splitting scheme '" + scheme.name + "'");
    if (dimension == 0) throw ContractViolation("stepper dimension must be positive");
    u_.assign(dimension, S{});
    v_.assign(dimension, S{});
    register_allocations_ = 2;
  }

  const SplittingScheme& scheme() const noexcept { return scheme_; }
  std::size_t dimension() const noexcept { return u_.size(); }
  int evals_per_step() const noexcept { return scheme_.evals_per_step(); }

  /// u = v = x, u_t = v_t = t.
  void load(std::span<const S> x, double t) {
    check_dimension(x.size());
    std::copy(x.begin(), x.end(), u_.begin());
    std::copy(x.begin(), x.end(), v_.begin());
    u_t_ = v_t_ = t;
  }

  /// Loads distinct registers, e.g. the final pair of an earlier step.
  void load_pair(std::span<const S> u, std::span<const S> v, double t) {
    check_dimension(u.size());
    check_dimension(v.size());
    std::copy(u.begin(), u.end(), u_.begin());
    std::copy(v.begin(), v.end(), v_.begin());
    u_t_ = v_t_ = t;
  }

  void set_time(double t) noexcept { u_t_ = v_t_ = t; }

  /// One forward step of size h from the current registers.
  void advance(RhsSystem<S>& rhs, double h, TimeCoupling coupling = TimeCoupling::frozen) {
    check_rhs(rhs);
    check_time_field(coupling);
    const double t0 = u_t_;
    const S hs = S(h);
    const std::size_t s = a_.size();
    for (std::size_t i = 0; i < s; ++i) {
      const int stage = static_cast<int>(i) + 1;
      if (a_[i] != S{}) {
        rhs.accumulate(coupling == TimeCoupling::frozen ? t0 : u_t_, u_, hs * a_[i], v_);
        check_finite(v_, stage);
      }
      if (coupling == TimeCoupling::duplicated) v_t_ += h * real_part(a_[i]);
      if (b_[i] != S{}) {
        rhs.accumulate(coupling == TimeCoupling::frozen ? t0 : v_t_, v_, hs * b_[i], u_);
        check_finite(u_, stage);
      }
      if (coupling == TimeCoupling::duplicated) u_t_ += h * real_part(b_[i]);
    }
    if (coupling == TimeCoupling::frozen) u_t_ = v_t_ = t0 + h;
  }

  /// Exact inverse of advance(rhs, h, coupling): the stage loop in reverse
  /// order with negated coefficients.
  void retreat(RhsSystem<S>& rhs, double h, TimeCoupling coupling = TimeCoupling::frozen) {
    check_rhs(rhs);
    check_time_field(coupling);
    const double t1 = u_t_;
    const double t0 = t1 - h;
    const S hs = S(h);
    for (std::size_t k = a_.size(); k-- > 0;) {
      const int stage = static_cast<int>(k) + 1;
      if (coupling == TimeCoupling::duplicated) u_t_ -= h * real_part(b_[k]);
      if (b_[k] != S{}) {
        rhs.accumulate(coupling == TimeCoupling::frozen ? t0 : v_t_, v_, -hs * b_[k], u_);
        check_finite(u_, stage);
      }
      if (coupling == TimeCoupling::duplicated) v_t_ -= h * real_part(a_[k]);
      if (a_[k] != S{}) {
        rhs.accumulate(coupling == TimeCoupling::frozen ? t0 : u_t_, u_, -hs * a_[k], v_);
        check_finite(v_, stage);
      }
    }
    if (coupling == TimeCoupling::frozen) u_t_ = v_t_ = t0;
  }

  /// ||u - v|| in one fused pass over both registers.
  double error_estimate() const noexcept {
    double sum = 0.0;
    const std::size_t n = u_.size();
    for (std::size_t i = 0; i < n; ++i) sum += std::norm(u_[i] - v_[i]);
    return std::sqrt(sum);
  }

  /// ||(u + v) / 2||, fused.
  double average_norm() const noexcept {
    double sum = 0.0;
    const std::size_t n = u_.size();
    for (std::size_t i = 0; i < n; ++i) sum += std::norm(0.5 * (u_[i] + v_[i]));
    return std::sqrt(sum);
  }

  void average_into(std::span<S> out) const {
    check_dimension(out.size());
    const std::size_t n = u_.size();
    for (std::size_t i = 0; i < n; ++i) out[i] = 0.5 * (u_[i] + v_[i]);
  }

  /// u = v = (u + v) / 2, ready for the next step.
  void collapse() noexcept {
    const std::size_t n = u_.size();
    for (std::size_t i = 0; i < n; ++i) {
      const S mean = 0.5 * (u_[i] + v_[i]);
      u_[i] = mean;
      v_[i] = mean;
    }
    u_t_ = v_t_ = 0.5 * (u_t_ + v_t_);
  }

  /// v = u (continue from the u component alone).
  void collapse_to_u() noexcept {
    std::copy(u_.begin(), u_.end(), v_.begin());
    v_t_ = u_t_;
  }

  /// u = v (continue from the v component alone).
  void collapse_to_v() noexcept {
    std::copy(v_.begin(), v_.end(), u_.begin());
    u_t_ = v_t_;
  }

  std::span<const S> u() const noexcept { return u_; }
  std::span<const S> v() const noexcept { return v_; }
  double u_time() const noexcept { return u_t_; }
  double v_time() const noexcept { return v_t_; }

  StorageReport storage_report(const RhsSystem<S>& rhs) const noexcept {
    return {static_cast<int>(register_allocations_) + (rhs.contract() == RhsContract::adapter ? 1 : 0), 2};
  }

  /// N-length buffers allocated over the stepper's lifetime.
  std::size_t register_allocations() const noexcept { return register_allocations_; }

 private:
  static double real_part(S x) {
    if constexpr (is_complex_v<S>) return x.real();
    else return x;
  }

  void check_dimension(std::size_t n) const {
    if (n != u_.size())
      throw ContractViolation("state dimension " + std::to_string(n) + " does not match stepper dimension " +
                              std::to_string(u_.size()));
  }

  void check_rhs(const RhsSystem<S>& rhs) const { check_dimension(rhs.dimension()); }

  void check_time_field(TimeCoupling coupling) const {
    if (coupling == TimeCoupling::duplicated && scheme_.complex_coeffs)
      throw FieldCapabilityError("duplicated time coordinates need real coefficients (scheme '" + scheme_.name + "')");
  }

  static void check_finite(std::span<const S> r, int stage) {
    if (!all_finite(r)) throw DivergenceError("non-finite state in D-splitting step", stage);
  }

  SplittingScheme scheme_;
  std::vector<S> a_;
  std::vector<S> b_;
  StateVector<S> u_;
  StateVector<S> v_;
  double u_t_ = 0.0;
  double v_t_ = 0.0;
  std::size_t register_allocations_ = 0;
};

template <Scalar S>
struct StepOutput {
  StateVector<S> x_next;  ///< (u_s + v_s) / 2
  double err_est = 0.0;   ///< ||u_s - v_s||
  std::uint64_t nfev = 0;
  StateVector<S> u_s;
  StateVector<S> v_s;
};

namespace detail {

template <Scalar S>
StepOutput<S> run_step(const SplittingScheme& scheme, RhsSystem<S>& rhs, double t, std::span<const S> x, double h,
                       TimeCoupling coupling) {
  DSplitStepper<S> stepper(scheme, rhs.dimension());
  stepper.load(x, t);
  const auto before = rhs.eval_count();
  stepper.advance(rhs, h, coupling);
  StepOutput<S> out;
  out.nfev = rhs.eval_count() - before;
  out.err_est = stepper.error_estimate();
  out.x_next.resize(x.size());
  stepper.average_into(out.x_next);
  out.u_s.assign(stepper.u().begin(), stepper.u().end());
  out.v_s.assign(stepper.v().begin(), stepper.v().end());
  return out;
}

}  // namespace detail

/// One-shot D-splitting step. Convenience wrapper that copies the final
/// registers out; long integrations should drive a DSplitStepper directly.
template <Scalar S>
StepOutput<S> dstep(const SplittingScheme& scheme, RhsSystem<S>& rhs, double t, std::span<const S> x, double h) {
  return detail::run_step(scheme, rhs, t, x, h, TimeCoupling::frozen);
}

template <Scalar S>
StepOutput<S> dstep_nonautonomous(const SplittingScheme& scheme, RhsSystem<S>& rhs, double t, std::span<const S> x,
                                  double h) {
  return detail::run_step(scheme, rhs, t, x, h, TimeCoupling::duplicated);
}

/// Recovers x_n from the final registers of dstep(scheme, rhs, t_next - h, x_n, h).
template <Scalar S>
StateVector<S> dstep_inverse(const SplittingScheme& scheme, RhsSystem<S>& rhs, double t_next, std::span<const S> u_s,
                             std::span<const S> v_s, double h, TimeCoupling coupling = TimeCoupling::frozen) {
  DSplitStepper<S> stepper(scheme, rhs.dimension());
  stepper.load_pair(u_s, v_s, t_next);
  stepper.retreat(rhs, h, coupling);
  StateVector<S> x(u_s.size());
  stepper.average_into(x);
  return x;
}

}  // namespace dsplit
