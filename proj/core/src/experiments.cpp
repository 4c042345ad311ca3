#include "dsplit/experiments.hpp"

#include <cmath>
#include <limits>

namespace dsplit {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

template <Scalar S>
double abs_error(std::span<const S> x, std::span<const S> exact) {
  double sum = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) sum += std::norm(x[i] - exact[i]);
  return std::sqrt(sum);
}

template <Scalar S>
double run_error(const MethodSpec& method, Problem<S>& problem, double tf, std::size_t steps, DSplitOutput output,
                 std::uint64_t* nfev) {
  auto m = make_method<S>(method, problem.x0.size(), output);
  auto run = integrate_fixed<S>(*m, *problem.rhs, problem.t0, tf, steps, problem.x0);
  if (nfev) *nfev = run.nfev;
  const auto exact = problem.exact(tf);
  return abs_error<S>(run.x_final, exact);
}

template <Scalar S>
ConvergenceResult convergence_impl(const MethodSpec& method, std::string_view problem_name, double tf,
                                   std::span<const double> hs, const ProblemParams& params, const FitOptions& fit) {
  auto problem = make_problem<S>(problem_name, params);
  if (!problem.exact) throw ContractViolation("problem '" + problem.name + "' has no exact solution");
  const double span = tf - problem.t0;
  const bool splitting = std::holds_alternative<SplittingScheme>(method);
  ConvergenceResult out;
  out.method = method_name(method);
  out.problem = problem.name;
  for (double h : hs) {
    if (!(h > 0.0) || !std::isfinite(h)) throw ContractViolation("step sizes must be positive and finite");
    const auto steps = static_cast<std::size_t>(std::llround(std::abs(span) / h));
    if (steps == 0) throw ContractViolation("step size larger than the integration interval");
    ConvergenceRow row;
    row.steps = steps;
    row.h = std::abs(span) / static_cast<double>(steps);
    row.err_avg = run_error<S>(method, problem, tf, steps, DSplitOutput::average, &row.nfev);
    row.err_u = splitting ? run_error<S>(method, problem, tf, steps, DSplitOutput::u_component, nullptr) : kNaN;
    row.err_v = splitting ? run_error<S>(method, problem, tf, steps, DSplitOutput::v_component, nullptr) : kNaN;
    out.rows.push_back(row);
  }
  std::vector<double> h, ea, eu, ev;
  for (const auto& r : out.rows) {
    h.push_back(r.h);
    ea.push_back(r.err_avg);
    eu.push_back(r.err_u);
    ev.push_back(r.err_v);
  }
  out.avg = convergence_slope(h, ea, fit);
  if (splitting) {
    try {
      out.u = convergence_slope(h, eu, fit);
    } catch (const InsufficientData&) {
    }
    try {
      out.v = convergence_slope(h, ev, fit);
    } catch (const InsufficientData&) {
    }
  }
  return out;
}

template <Scalar S>
KeplerRun kepler_impl(const MethodSpec& method, const KeplerConfig& cfg) {
  if (cfg.stride < 1) throw ContractViolation("sample stride must be >= 1");
  if (!(cfg.tf > 0.0)) throw ContractViolation("Kepler run needs tf > 0");
  auto problem = make_problem<S>("kepler", ProblemParams{.eccentricity = cfg.eccentricity});
  KeplerRun run;
  run.method = method_name(method);
  run.steps = kepler_steps_for_budget(method, cfg.budget);
  if (run.steps == 0) throw ContractViolation("evaluation budget too small for one step");
  run.h = cfg.tf / static_cast<double>(run.steps);
  auto m = make_method<S>(method, 4);
  m->load(problem.x0, 0.0);
  auto& rhs = *problem.rhs;
  const auto before = rhs.eval_count();
  const double e0 = kepler_energy(kepler_initial(cfg.eccentricity));
  auto sample = [&](double t) {
    const auto x = m->state();
    const std::array<double, 4> r{detail::real_of(x[0]), detail::real_of(x[1]), detail::real_of(x[2]),
                                  detail::real_of(x[3])};
    const auto ref = kepler_reference(t, cfg.eccentricity);
    KeplerSample s;
    s.t = t;
    s.energy_drift = std::abs(kepler_energy(r) - e0);
    s.position_error = std::hypot(r[0] - ref.q[0], r[1] - ref.q[1]);
    run.samples.push_back(s);
  };
  sample(0.0);
  for (std::size_t k = 0; k < run.steps; ++k) {
    const double t = static_cast<double>(k) * run.h;
    try {
      m->step(rhs, t, run.h);
    } catch (const CollisionError&) {
      run.collided = true;
      break;
    } catch (const DivergenceError&) {
      run.collided = true;
      break;
    }
    const bool last = k + 1 == run.steps;
    if ((k + 1) % static_cast<std::size_t>(cfg.stride) == 0 || last)
      sample(last ? cfg.tf : static_cast<double>(k + 1) * run.h);
  }
  run.nfev = rhs.eval_count() - before;
  return run;
}

}  // namespace

ConvergenceResult run_convergence(const MethodSpec& method, std::string_view problem, double tf,
                                  std::span<const double> hs, const ProblemParams& params, const FitOptions& fit) {
  if (method_is_complex(method) || problem == "wave")
    return convergence_impl<Complex>(method, problem, tf, hs, params, fit);
  return convergence_impl<double>(method, problem, tf, hs, params, fit);
}

WaveRow run_wave_cell(const MethodSpec& method, std::size_t steps, const WaveConfig& config) {
  auto problem = make_problem<Complex>("wave", ProblemParams{.grid_points = config.grid_points});
  auto m = make_method<Complex>(method, config.grid_points);
  FixedStepOptions opts;
  opts.blowup_factor = config.blowup_factor;
  auto run = integrate_fixed<Complex>(*m, *problem.rhs, 0.0, config.tf, steps, problem.x0, {}, {}, opts);
  WaveRow row;
  row.method = method_name(method);
  row.steps = steps;
  row.h = steps == 0 ? 0.0 : config.tf / static_cast<double>(steps);
  row.nfev = run.nfev;
  row.stable = run.stable;
  if (run.stable) {
    const auto exact = wave_exact(config.tf, SpectralGrid(config.grid_points));
    row.error = relative_error<Complex>(run.x_final, exact);
    row.norm_error = norm_error<Complex>(run.x_final, problem.x0);
  } else {
    row.error = kNaN;
    row.norm_error = kNaN;
  }
  return row;
}

std::vector<std::size_t> default_wave_steps() {
  return {4000, 5600, 8000, 11300, 16000, 22600, 32000, 45300, 64000};
}

std::size_t kepler_steps_for_budget(const MethodSpec& method, std::uint64_t budget) {
  const auto evals = static_cast<std::uint64_t>(method_evals_per_step(method));
  return static_cast<std::size_t>(budget / evals);
}

KeplerRun run_kepler(const MethodSpec& method, const KeplerConfig& config) {
  if (method_is_complex(method)) return kepler_impl<Complex>(method, config);
  return kepler_impl<double>(method, config);
}

}  // namespace dsplit
