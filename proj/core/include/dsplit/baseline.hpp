#pragma once

#include <optional>
#include <span>
#include <vector>

#include "dsplit/core.hpp"
#include "dsplit/schemes.hpp"

namespace dsplit {

/// Generic explicit Runge-Kutta stepper. Holds one slope vector per stage
/// plus a stage-argument buffer.
template <Scalar S>
class RkStepper {
 public:
  RkStepper(const ButcherTableau& tableau, std::size_t dimension)
      : stages_(tableau.stages),
        A_(coefficient_cast<S>(std::span<const Coefficient>(tableau.A))),
        b_(coefficient_cast<S>(std::span<const Coefficient>(tableau.b))),
        c_(tableau.c.size()) {
    if (tableau.b.size() != stages_ || tableau.A.size() != stages_ * stages_ || tableau.c.size() != stages_)
      throw ContractViolation("malformed tableau '" + tableau.name + "'");
    for (std::size_t i = 0; i < stages_; ++i) {
      c_[i] = tableau.c[i].real();
      for (std::size_t j = i; j < stages_; ++j)
        if (tableau.a(i, j) != Coefficient{}) throw ContractViolation("tableau '" + tableau.name + "' is not explicit");
    }
    if (tableau.b_hat) b_hat_ = coefficient_cast<S>(std::span<const Coefficient>(*tableau.b_hat));
    slopes_.assign(stages_, StateVector<S>(dimension));
    stage_.assign(dimension, S{});
  }

  std::size_t stages() const noexcept { return stages_; }
  bool has_embedded() const noexcept { return b_hat_.has_value(); }
  std::size_t slope_registers() const noexcept { return slopes_.size(); }
  /// Slopes plus the stage buffer.
  int registers() const noexcept { return static_cast<int>(slopes_.size()) + 1; }

  /// Computes the stage slopes k_i = f(t + c_i h, x + h sum_j A_ij k_j).
  void compute_stages(RhsSystem<S>& rhs, double t, std::span<const S> x, double h) {
    const std::size_t n = x.size();
    if (n != stage_.size() || rhs.dimension() != n) throw ContractViolation("rk_step dimension mismatch");
    const S hs = S(h);
    for (std::size_t i = 0; i < stages_; ++i) {
      std::copy(x.begin(), x.end(), stage_.begin());
      for (std::size_t j = 0; j < i; ++j) {
        const S aij = A_[i * stages_ + j];
        if (aij != S{}) axpy<S>(hs * aij, slopes_[j], stage_);
      }
      if (!all_finite<S>(stage_)) throw DivergenceError("non-finite stage in RK step", static_cast<int>(i) + 1);
      std::fill(slopes_[i].begin(), slopes_[i].end(), S{});
      rhs.accumulate(t + c_[i] * h, stage_, S(1), slopes_[i]);
    }
  }

  /// x <- x + h sum_i w_i k_i using the slopes of the last compute_stages.
  void combine(std::span<S> x, double h, bool embedded = false) const {
    const auto& w = embedded ? *b_hat_ : b_;
    const S hs = S(h);
    for (std::size_t i = 0; i < stages_; ++i)
      if (w[i] != S{}) axpy<S>(hs * w[i], slopes_[i], x);
  }

  void step(RhsSystem<S>& rhs, double t, std::span<S> x, double h) {
    compute_stages(rhs, t, x, h);
    combine(x, h);
  }

 private:
  std::size_t stages_;
  std::vector<S> A_;
  std::vector<S> b_;
  std::optional<std::vector<S>> b_hat_;
  std::vector<double> c_;
  std::vector<StateVector<S>> slopes_;
  StateVector<S> stage_;
};

template <Scalar S>
struct RkStepResult {
  StateVector<S> x_next;
  std::optional<StateVector<S>> x_hat;
};

template <Scalar S>
RkStepResult<S> rk_step(const ButcherTableau& tableau, RhsSystem<S>& rhs, double t, std::span<const S> x, double h) {
  RkStepper<S> stepper(tableau, x.size());
  stepper.compute_stages(rhs, t, x, h);
  RkStepResult<S> out;
  out.x_next.assign(x.begin(), x.end());
  stepper.combine(out.x_next, h);
  if (stepper.has_embedded()) {
    out.x_hat = StateVector<S>(x.begin(), x.end());
    stepper.combine(*out.x_hat, h, true);
  }
  return out;
}

/// Williamson 2N-storage recursion
///   dy <- A_i dy + h f(y),  y <- y + B_i dy.
/// The state y is advanced in place; the stepper owns only dy.
template <Scalar S>
class WilliamsonStepper {
 public:
  WilliamsonStepper(const LowStorageScheme& scheme, std::size_t dimension)
      : A_(coefficient_cast<S>(std::span<const Coefficient>(scheme.A))),
        B_(coefficient_cast<S>(std::span<const Coefficient>(scheme.B))),
        c_(),
        dy_(dimension) {
    if (scheme.format != LowStorageScheme::Format::williamson)
      throw ContractViolation("scheme '" + scheme.name + "' is not in Williamson format");
    if (A_.empty() || A_.size() != B_.size()) throw ContractViolation("malformed Williamson scheme '" + scheme.name + "'");
    if (A_.front() != S{}) throw ContractViolation("Williamson format requires A_1 = 0");
    for (const auto& ci : to_butcher(scheme).c) c_.push_back(ci.real());
  }

  /// State register plus dy.
  int registers() const noexcept { return 2; }

  void step(RhsSystem<S>& rhs, double t, std::span<S> y, double h) {
    if (y.size() != dy_.size() || rhs.dimension() != y.size()) throw ContractViolation("williamson_step dimension mismatch");
    const S hs = S(h);
    for (std::size_t i = 0; i < B_.size(); ++i) {
      if (i == 0) std::fill(dy_.begin(), dy_.end(), S{});
      else for (auto& d : dy_) d *= A_[i];
      rhs.accumulate(t + c_[i] * h, y, hs, dy_);
      axpy<S>(B_[i], dy_, y);
      if (!all_finite<S>(y)) throw DivergenceError("non-finite state in Williamson step", static_cast<int>(i) + 1);
    }
  }

 private:
  std::vector<S> A_;
  std::vector<S> B_;
  std::vector<double> c_;
  StateVector<S> dy_;
};

/// van der Houwen (2R) recursion with the standard convention
///   k_i = f(y_{i-2} + h a_{i,i-1} k_{i-1}),  y_i = y_{i-1} + h b_i k_i.
/// Besides the state it keeps the stage argument and one slope buffer.
template <Scalar S>
class VdhStepper {
 public:
  VdhStepper(const LowStorageScheme& scheme, std::size_t dimension)
      : b_(coefficient_cast<S>(std::span<const Coefficient>(scheme.b))),
        a_sub_(coefficient_cast<S>(std::span<const Coefficient>(scheme.a_sub))),
        stage_(dimension),
        slope_(dimension) {
    if (scheme.format != LowStorageScheme::Format::vdh)
      throw ContractViolation("scheme '" + scheme.name + "' is not in vdH format");
    if (b_.empty() || a_sub_.size() + 1 != b_.size()) throw ContractViolation("malformed vdH scheme '" + scheme.name + "'");
    for (const auto& ci : to_butcher(scheme).c) c_.push_back(ci.real());
  }

  /// State, stage argument and slope.
  int registers() const noexcept { return 3; }

  void step(RhsSystem<S>& rhs, double t, std::span<S> y, double h) {
    const std::size_t n = y.size();
    if (n != stage_.size() || rhs.dimension() != n) throw ContractViolation("vdh_step dimension mismatch");
    const S hs = S(h);
    std::copy(y.begin(), y.end(), stage_.begin());
    for (std::size_t i = 0; i < b_.size(); ++i) {
      std::fill(slope_.begin(), slope_.end(), S{});
      rhs.accumulate(t + c_[i] * h, stage_, S(1), slope_);
      if (i + 1 < b_.size()) {
        // stage_{i+1} = y_{i-1} + h a_{i+1,i} k_i, taken before y absorbs k_i.
        const S a = hs * a_sub_[i];
        for (std::size_t j = 0; j < n; ++j) stage_[j] = y[j] + a * slope_[j];
      }
      axpy<S>(hs * b_[i], slope_, y);
      if (!all_finite<S>(y)) throw DivergenceError("non-finite state in vdH step", static_cast<int>(i) + 1);
    }
  }

 private:
  std::vector<S> b_;
  std::vector<S> a_sub_;
  std::vector<double> c_;
  StateVector<S> stage_;
  StateVector<S> slope_;
};

template <Scalar S>
StateVector<S> williamson_step(const LowStorageScheme& scheme, RhsSystem<S>& rhs, double t, std::span<const S> x,
                               double h) {
  StateVector<S> y(x.begin(), x.end());
  WilliamsonStepper<S>(scheme, x.size()).step(rhs, t, y, h);
  return y;
}

template <Scalar S>
StateVector<S> vdh_step(const LowStorageScheme& scheme, RhsSystem<S>& rhs, double t, std::span<const S> x, double h) {
  StateVector<S> y(x.begin(), x.end());
  VdhStepper<S>(scheme, x.size()).step(rhs, t, y, h);
  return y;
}

}  // namespace dsplit
