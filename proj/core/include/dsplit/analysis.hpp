#pragma once

#include <cmath>
#include <limits>
#include <span>
#include <vector>

#include "dsplit/adaptive.hpp"
#include "dsplit/core.hpp"

namespace dsplit {

/// ||approx - exact|| / ||exact||
template <Scalar S>
double relative_error(std::span<const S> approx, std::span<const S> exact) {
  if (approx.size() != exact.size()) throw ContractViolation("relative_error: size mismatch");
  const double denom = norm_l2(exact);
  if (denom == 0.0) throw ContractViolation("relative_error: exact solution has zero norm");
  double sum = 0.0;
  for (std::size_t i = 0; i < approx.size(); ++i) sum += std::norm(approx[i] - exact[i]);
  return std::sqrt(sum) / denom;
}

/// | ||u_final|| - ||u_initial|| | / ||u_initial||
template <Scalar S>
double norm_error(std::span<const S> u_final, std::span<const S> u_initial) {
  const double n0 = norm_l2(u_initial);
  if (n0 == 0.0) throw ContractViolation("norm_error: initial state has zero norm");
  return std::abs(norm_l2(u_final) - n0) / n0;
}

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
  double rms_residual = 0.0;
  std::size_t points = 0;
};

/// Ordinary least squares y = slope x + intercept.
LinearFit fit_line(std::span<const double> xs, std::span<const double> ys);

struct FitOptions {
  std::size_t min_points = 3;
  /// Errors at or below 100 eps * floor_scale are round-off, not truncation.
  double floor_scale = 1.0;
};

struct ConvergenceStudy {
  std::vector<double> hs;
  std::vector<double> errs;
  std::vector<bool> used;  ///< points that entered the fit
  double slope = 0.0;
  double intercept = 0.0;
  double residual = 0.0;  ///< rms residual of the log-log fit
};

/// Least-squares slope of log(err) against log(h). Throws InsufficientData
/// when fewer than `min_points` usable points remain.
ConvergenceStudy convergence_slope(std::span<const double> hs, std::span<const double> errs,
                                   const FitOptions& options = {});

struct DriftSample {
  double t = 0.0;
  double drift = 0.0;
};

/// |H(t) - H(t_0)| for every trace row carrying observables; H is the
/// observable at `index` and H(t_0) comes from the first such row.
std::vector<DriftSample> energy_drift(const IntegrationTrace& trace, std::size_t index = 0);

}  // namespace dsplit
