#pragma once

#include <limits>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dsplit/adaptive.hpp"
#include "dsplit/baseline.hpp"
#include "dsplit/core.hpp"
#include "dsplit/dsplit.hpp"
#include "dsplit/scheme_io.hpp"

namespace dsplit {

using MethodSpec = std::variant<SplittingScheme, ButcherTableau, LowStorageScheme>;

/// Bundled splitting scheme, bundled tableau (RK2, RK4), or a scheme file.
MethodSpec resolve_method(std::string_view name_or_path);

std::string method_name(const MethodSpec& spec);
int method_evals_per_step(const MethodSpec& spec);
bool method_is_complex(const MethodSpec& spec);

/// Which register a D-splitting method continues from after each step.
enum class DSplitOutput { average, u_component, v_component };

/// Fixed-step integrator with its state held internally.
template <Scalar S>
class Method {
 public:
  virtual ~Method() = default;

  virtual std::string name() const = 0;
  virtual int evals_per_step() const = 0;
  /// N-length buffers held, including the state.
  virtual int registers() const = 0;

  virtual void load(std::span<const S> x, double t) = 0;
  virtual void step(RhsSystem<S>& rhs, double t, double h) = 0;
  virtual std::span<const S> state() const = 0;
  /// Embedded estimate of the last step, NaN when the method has none.
  virtual double last_error_estimate() const { return std::numeric_limits<double>::quiet_NaN(); }
};

template <Scalar S>
class DSplitMethod final : public Method<S> {
 public:
  DSplitMethod(const SplittingScheme& scheme, std::size_t dimension, DSplitOutput output = DSplitOutput::average)
      : stepper_(scheme, dimension), output_(output) {}

  std::string name() const override { return stepper_.scheme().name; }
  int evals_per_step() const override { return stepper_.evals_per_step(); }
  int registers() const override { return 2; }

  void load(std::span<const S> x, double t) override { stepper_.load(x, t); }

  void step(RhsSystem<S>& rhs, double t, double h) override {
    stepper_.set_time(t);
    stepper_.advance(rhs, h, rhs.autonomous() ? TimeCoupling::frozen : TimeCoupling::duplicated);
    err_ = stepper_.error_estimate();
    switch (output_) {
      case DSplitOutput::average: stepper_.collapse(); break;
      case DSplitOutput::u_component: stepper_.collapse_to_u(); break;
      case DSplitOutput::v_component: stepper_.collapse_to_v(); break;
    }
  }

  std::span<const S> state() const override { return stepper_.u(); }
  double last_error_estimate() const override { return err_; }

 private:
  DSplitStepper<S> stepper_;
  DSplitOutput output_;
  double err_ = std::numeric_limits<double>::quiet_NaN();
};

template <Scalar S>
class ButcherMethod final : public Method<S> {
 public:
  ButcherMethod(const ButcherTableau& tableau, std::size_t dimension)
      : name_(tableau.name), stepper_(tableau, dimension), x_(dimension) {}

  std::string name() const override { return name_; }
  int evals_per_step() const override { return static_cast<int>(stepper_.stages()); }
  int registers() const override { return stepper_.registers() + 1; }
  void load(std::span<const S> x, double) override { x_.assign(x.begin(), x.end()); }
  void step(RhsSystem<S>& rhs, double t, double h) override { stepper_.step(rhs, t, x_, h); }
  std::span<const S> state() const override { return x_; }

 private:
  std::string name_;
  RkStepper<S> stepper_;
  StateVector<S> x_;
};

template <Scalar S, class Stepper>
class LowStorageMethod final : public Method<S> {
 public:
  LowStorageMethod(const LowStorageScheme& scheme, std::size_t dimension)
      : name_(scheme.name), stages_(static_cast<int>(scheme.stages())), stepper_(scheme, dimension), x_(dimension) {}

  std::string name() const override { return name_; }
  int evals_per_step() const override { return stages_; }
  int registers() const override { return stepper_.registers(); }
  void load(std::span<const S> x, double) override { x_.assign(x.begin(), x.end()); }
  void step(RhsSystem<S>& rhs, double t, double h) override { stepper_.step(rhs, t, x_, h); }
  std::span<const S> state() const override { return x_; }

 private:
  std::string name_;
  int stages_;
  Stepper stepper_;
  StateVector<S> x_;
};

template <Scalar S>
std::unique_ptr<Method<S>> make_method(const MethodSpec& spec, std::size_t dimension,
                                       DSplitOutput output = DSplitOutput::average) {
  if (const auto* s = std::get_if<SplittingScheme>(&spec)) return std::make_unique<DSplitMethod<S>>(*s, dimension, output);
  if (const auto* t = std::get_if<ButcherTableau>(&spec)) return std::make_unique<ButcherMethod<S>>(*t, dimension);
  const auto& ls = std::get<LowStorageScheme>(spec);
  if (ls.format == LowStorageScheme::Format::williamson)
    return std::make_unique<LowStorageMethod<S, WilliamsonStepper<S>>>(ls, dimension);
  return std::make_unique<LowStorageMethod<S, VdhStepper<S>>>(ls, dimension);
}

struct FixedStepOptions {
  /// Sample observables every `stride` steps (0 disables sampling).
  int stride = 0;
  /// Stop and flag the run unstable once ||x|| exceeds this multiple of
  /// ||x_0|| (0 disables the check).
  double blowup_factor = 0.0;
};

template <Scalar S>
struct FixedRun {
  StateVector<S> x_final;
  double t_final = 0.0;
  std::size_t steps = 0;
  std::uint64_t nfev = 0;
  bool stable = true;
  IntegrationTrace trace;
};

/// `steps` uniform steps from t0 to tf; the last step lands exactly on tf.
template <Scalar S>
FixedRun<S> integrate_fixed(Method<S>& method, RhsSystem<S>& rhs, double t0, double tf, std::size_t steps,
                            std::span<const S> x0, const Observer<S>& observer = {},
                            std::vector<std::string> observable_names = {}, const FixedStepOptions& options = {}) {
  if (steps == 0 && tf != t0) throw ContractViolation("integrate_fixed: need at least one step");
  FixedRun<S> run;
  run.trace.observable_names = std::move(observable_names);
  method.load(x0, t0);
  const double h = steps == 0 ? 0.0 : (tf - t0) / static_cast<double>(steps);
  const double limit = options.blowup_factor > 0.0 ? options.blowup_factor * norm_l2(x0) : 0.0;
  const auto before = rhs.eval_count();
  auto sample = [&](double t, double err, bool force) {
    const bool due = options.stride > 0 && (run.steps % static_cast<std::size_t>(options.stride) == 0 || force);
    if (!due) return;
    TraceRow row;
    row.t = t;
    row.h = h;
    row.err_est = err;
    row.accepted = true;
    row.nfev = rhs.eval_count() - before;
    if (observer) row.observables = observer(t, method.state());
    run.trace.rows.push_back(std::move(row));
  };
  sample(t0, 0.0, true);
  double t = t0;
  for (std::size_t k = 0; k < steps; ++k) {
    try {
      method.step(rhs, t, h);
    } catch (const DivergenceError&) {
      if (limit == 0.0) throw;
      run.stable = false;
      break;
    }
    run.steps = k + 1;
    t = k + 1 == steps ? tf : t0 + static_cast<double>(k + 1) * h;
    if (limit > 0.0) {
      const double nrm = norm_l2(method.state());
      if (!(nrm <= limit)) {
        run.stable = false;
        break;
      }
    }
    sample(t, method.last_error_estimate(), k + 1 == steps);
  }
  run.t_final = t;
  run.nfev = rhs.eval_count() - before;
  run.x_final.assign(method.state().begin(), method.state().end());
  return run;
}

}  // namespace dsplit
