#pragma once

#include <cmath>
#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "dsplit/core.hpp"
#include "dsplit/dsplit.hpp"
#include "dsplit/schemes.hpp"

namespace dsplit {

enum class Recovery {
  /// Undo a rejected step by running the inverse scheme; keeps 2 registers.
  inverse_step,
  /// Keep a copy of x_n; 3 registers, immune to round-off in the inverse.
  third_register,
};

struct ControllerConfig {
  double tol = 1e-6;
  double safety = 0.9;
  double fac_min = 0.2;
  double fac_max = 5.0;
  double h_init = 1e-2;
  double h_min = 1e-12;
  double h_max = 1.0;
  Recovery recovery = Recovery::inverse_step;

  /// Throws ContractViolation on an inconsistent configuration.
  void validate() const;
};

/// h * clamp(safety * (tol / err)^(1 / (p + 1)), fac_min, fac_max), with
/// |h_new| clamped to [h_min, h_max]. err == 0 selects fac_max.
double propose_step(double err, double tol, double h, int p_component, const ControllerConfig& cfg);

struct TraceRow {
  double t = 0.0;  ///< time after the attempt (unchanged on rejection)
  double h = 0.0;  ///< attempted step
  double err_est = 0.0;
  bool accepted = false;
  std::uint64_t nfev = 0;  ///< cumulative evaluations, including inverse steps
  std::vector<double> observables;
};

struct IntegrationTrace {
  std::vector<std::string> observable_names;
  std::vector<TraceRow> rows;
};

class StepSizeUnderflow : public Error {
 public:
  StepSizeUnderflow(const std::string& what, IntegrationTrace partial) : Error(what), trace_(std::move(partial)) {}
  const IntegrationTrace& trace() const noexcept { return trace_; }

 private:
  IntegrationTrace trace_;
};

template <Scalar S>
using Observer = std::function<std::vector<double>(double, std::span<const S>)>;

/// Step-by-step adaptive driver around a DSplitStepper.
///
/// A step is accepted when ||u_s - v_s|| <= tol (1 + ||x_n||). The state
/// lives in the stepper registers, so with inverse-step recovery the whole
/// integration touches two N-length registers.
template <Scalar S>
class AdaptiveIntegrator {
 public:
  AdaptiveIntegrator(const SplittingScheme& scheme, RhsSystem<S>& rhs, ControllerConfig cfg, double t0,
                     std::span<const S> x0, TimeCoupling coupling = TimeCoupling::frozen)
      : stepper_(scheme, rhs.dimension()), rhs_(rhs), cfg_(cfg), coupling_(coupling), t_(t0), h_(cfg.h_init) {
    cfg_.validate();
    stepper_.load(x0, t0);
    if (cfg_.recovery == Recovery::third_register) backup_.assign(rhs.dimension(), S{});
  }

  ControllerConfig& config() noexcept { return cfg_; }
  const ControllerConfig& config() const noexcept { return cfg_; }

  double time() const noexcept { return t_; }
  double step_size() const noexcept { return h_; }
  std::span<const S> state() const noexcept { return stepper_.u(); }
  const IntegrationTrace& trace() const noexcept { return trace_; }
  IntegrationTrace& trace() noexcept { return trace_; }
  std::uint64_t nfev() const noexcept { return nfev_; }

  /// N-length registers in use: u, v, plus the backup copy and adapter buffer.
  int peak_registers() const noexcept {
    return stepper_.storage_report(rhs_).persistent_registers + (backup_.empty() ? 0 : 1);
  }

  /// One attempt towards t_end. Returns true if the step was accepted.
  bool try_step(double t_end) {
    const double remaining = t_end - t_;
    if (remaining == 0.0) return true;
    const double dir = remaining > 0 ? 1.0 : -1.0;
    double h = dir * std::abs(h_);
    bool lands = false;
    if (std::abs(remaining) <= 1.01 * std::abs(h)) {
      h = remaining;
      lands = true;
    }

    const double scale = 1.0 + norm_l2(stepper_.u());
    if (!backup_.empty()) std::copy(stepper_.u().begin(), stepper_.u().end(), backup_.begin());

    const auto before = rhs_.eval_count();
    stepper_.advance(rhs_, h, coupling_);
    const double err = stepper_.error_estimate();
    const bool accept = err <= cfg_.tol * scale;

    TraceRow row;
    row.h = h;
    row.err_est = err;
    row.accepted = accept;
    if (accept) {
      stepper_.collapse();
      t_ = lands ? t_end : t_ + h;
      stepper_.set_time(t_);
    } else {
      recover(h);
    }
    nfev_ += rhs_.eval_count() - before;
    row.t = t_;
    row.nfev = nfev_;
    trace_.rows.push_back(std::move(row));

    const double proposed = propose_step(err / scale, cfg_.tol, std::abs(h), stepper_.scheme().p_component, cfg_);
    if (!accept && std::abs(h) <= cfg_.h_min) {
      throw StepSizeUnderflow("step size fell below h_min at t = " + std::to_string(t_), trace_);
    }
    // After a landing step keep the pre-clip proposal so a follow-up
    // integration does not inherit an artificially small step.
    if (!(accept && lands)) h_ = proposed;
    return accept;
  }

 private:
  void recover(double h) {
    if (cfg_.recovery == Recovery::inverse_step) {
      stepper_.retreat(rhs_, h, coupling_);
      stepper_.collapse();
      stepper_.set_time(t_);
    } else {
      stepper_.load(backup_, t_);
    }
  }

  DSplitStepper<S> stepper_;
  RhsSystem<S>& rhs_;
  ControllerConfig cfg_;
  TimeCoupling coupling_;
  double t_;
  double h_;
  StateVector<S> backup_;
  IntegrationTrace trace_;
  std::uint64_t nfev_ = 0;
};

template <Scalar S>
struct AdaptiveResult {
  IntegrationTrace trace;
  StateVector<S> x_final;
  double t_final = 0.0;
  std::uint64_t nfev = 0;
  int accepted = 0;
  int rejected = 0;
  int peak_registers = 0;
};

/// Integrates from t0 to tf (either direction). Observables are sampled on
/// every `stride`-th accepted step and on the final one.
template <Scalar S>
AdaptiveResult<S> integrate_adaptive(const SplittingScheme& scheme, RhsSystem<S>& rhs, double t0, double tf,
                                     std::span<const S> x0, const ControllerConfig& cfg,
                                     const Observer<S>& observer = {}, std::vector<std::string> observable_names = {},
                                     int stride = 1, TimeCoupling coupling = TimeCoupling::frozen) {
  if (stride < 1) throw ContractViolation("sample stride must be >= 1");
  AdaptiveIntegrator<S> driver(scheme, rhs, cfg, t0, x0, coupling);
  driver.trace().observable_names = std::move(observable_names);
  AdaptiveResult<S> out;
  if (observer) {
    TraceRow first;
    first.t = t0;
    first.accepted = true;
    first.observables = observer(t0, x0);
    driver.trace().rows.push_back(std::move(first));
  }
  int accepted = 0;
  while (driver.time() != tf) {
    if (driver.try_step(tf)) {
      ++accepted;
      if (observer && (accepted % stride == 0 || driver.time() == tf))
        driver.trace().rows.back().observables = observer(driver.time(), driver.state());
    } else {
      ++out.rejected;
    }
  }
  out.accepted = accepted;
  out.trace = driver.trace();
  out.x_final.assign(driver.state().begin(), driver.state().end());
  out.t_final = driver.time();
  out.nfev = driver.nfev();
  out.peak_registers = driver.peak_registers();
  return out;
}

}  // namespace dsplit
