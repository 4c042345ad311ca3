#include "dsplit/analysis.hpp"

#include <algorithm>
#include <numeric>

namespace dsplit {

LinearFit fit_line(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw ContractViolation("fit_line: size mismatch");
  const std::size_t n = xs.size();
  if (n < 2) throw InsufficientData("fit_line: need at least two points");
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(n);
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(n);
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx == 0.0) throw InsufficientData("fit_line: abscissae are all equal");
  LinearFit fit;
  fit.points = n;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = ys[i] - (fit.slope * xs[i] + fit.intercept);
    ss_res += r * r;
  }
  fit.rms_residual = std::sqrt(ss_res / static_cast<double>(n));
  fit.r_squared = syy > 0.0 ? 1.0 - ss_res / syy : 1.0;
  return fit;
}

ConvergenceStudy convergence_slope(std::span<const double> hs, std::span<const double> errs,
                                   const FitOptions& options) {
  if (hs.size() != errs.size()) throw ContractViolation("convergence_slope: hs and errs differ in length");
  ConvergenceStudy study;
  study.hs.assign(hs.begin(), hs.end());
  study.errs.assign(errs.begin(), errs.end());
  study.used.assign(hs.size(), false);
  const double floor = 100.0 * std::numeric_limits<double>::epsilon() * options.floor_scale;
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < hs.size(); ++i) {
    const double h = std::abs(hs[i]);
    const double e = errs[i];
    if (!(h > 0.0) || !std::isfinite(h) || !std::isfinite(e) || !(e > floor)) continue;
    study.used[i] = true;
    lx.push_back(std::log(h));
    ly.push_back(std::log(e));
  }
  if (lx.size() < std::max<std::size_t>(options.min_points, 2))
    throw InsufficientData("convergence_slope: " + std::to_string(lx.size()) + " usable points, need " +
                           std::to_string(std::max<std::size_t>(options.min_points, 2)));
  const auto fit = fit_line(lx, ly);
  study.slope = fit.slope;
  study.intercept = fit.intercept;
  study.residual = fit.rms_residual;
  return study;
}

std::vector<DriftSample> energy_drift(const IntegrationTrace& trace, std::size_t index) {
  std::vector<DriftSample> out;
  bool have_reference = false;
  double h0 = 0.0;
  for (const auto& row : trace.rows) {
    if (row.observables.size() <= index) continue;
    const double h = row.observables[index];
    if (!have_reference) {
      h0 = h;
      have_reference = true;
    }
    out.push_back({row.t, std::abs(h - h0)});
  }
  return out;
}

}  // namespace dsplit
