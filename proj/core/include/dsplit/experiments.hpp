#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsplit/analysis.hpp"
#include "dsplit/methods.hpp"
#include "dsplit/problems.hpp"

namespace dsplit {

// ---------------------------------------------------------------------------
// Fixed-step convergence sweeps.

struct ConvergenceRow {
  double h = 0.0;
  std::size_t steps = 0;
  double err_avg = 0.0;  ///< averaged output (the method output for non-splitting methods)
  double err_u = 0.0;    ///< u component trajectory, NaN for non-splitting methods
  double err_v = 0.0;
  std::uint64_t nfev = 0;
};

struct ConvergenceResult {
  std::string method;
  std::string problem;
  std::vector<ConvergenceRow> rows;
  ConvergenceStudy avg;
  std::optional<ConvergenceStudy> u;
  std::optional<ConvergenceStudy> v;
};

/// Integrates `problem` to tf with each step size (rounded so tf / h is an
/// integer) and fits the global-error slopes. The u and v columns restart
/// every step from that register alone, so they measure the component order.
ConvergenceResult run_convergence(const MethodSpec& method, std::string_view problem, double tf,
                                  std::span<const double> hs, const ProblemParams& params = {},
                                  const FitOptions& fit = {});

// ---------------------------------------------------------------------------
// Spectral advection benchmark.

struct WaveConfig {
  std::size_t grid_points = 128;
  double tf = 50.0;
  /// A run is unstable once ||u|| exceeds this multiple of ||u_0||.
  double blowup_factor = 1e3;
};

struct WaveRow {
  std::string method;
  double h = 0.0;
  std::size_t steps = 0;
  std::uint64_t nfev = 0;
  double error = 0.0;       ///< ||u(tf) - exact|| / ||exact||
  double norm_error = 0.0;  ///< | ||u(tf)|| - ||u(0)|| | / ||u(0)||
  bool stable = true;
};

WaveRow run_wave_cell(const MethodSpec& method, std::size_t steps, const WaveConfig& config = {});

/// Default step counts for the wave sweep, roughly geometric from the
/// stability edge of the cheapest methods to well inside the asymptotic range.
std::vector<std::size_t> default_wave_steps();

// ---------------------------------------------------------------------------
// Kepler energy-drift benchmark at matched evaluation budget.

struct KeplerConfig {
  double eccentricity = 0.8;
  double tf = 2000.0;
  std::uint64_t budget = 520000;
  int stride = 100;  ///< sample every `stride` steps
};

struct KeplerSample {
  double t = 0.0;
  double energy_drift = 0.0;
  double position_error = 0.0;
};

struct KeplerRun {
  std::string method;
  std::size_t steps = 0;
  double h = 0.0;
  std::uint64_t nfev = 0;
  bool collided = false;
  std::vector<KeplerSample> samples;
};

/// steps = budget / evals_per_step, h = tf / steps.
std::size_t kepler_steps_for_budget(const MethodSpec& method, std::uint64_t budget);

KeplerRun run_kepler(const MethodSpec& method, const KeplerConfig& config = {});

}  // namespace dsplit
