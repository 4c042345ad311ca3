#include "dsplit/adaptive.hpp"

#include <algorithm>

namespace dsplit {

void ControllerConfig::validate() const {
  if (!(tol > 0.0)) throw ContractViolation("controller: tol must be positive");
  if (!(safety > 0.0 && safety <= 1.0)) throw ContractViolation("controller: safety must lie in (0, 1]");
  if (!(fac_min > 0.0 && fac_min < 1.0 && fac_max > 1.0))
    throw ContractViolation("controller: need 0 < fac_min < 1 < fac_max");
  if (!(h_min > 0.0 && h_min <= h_max && h_init > 0.0))
    throw ContractViolation("controller: need 0 < h_min <= h_max and h_init > 0");
}

double propose_step(double err, double tol, double h, int p_component, const ControllerConfig& cfg) {
  if (!(h != 0.0) || !(tol > 0.0)) throw ContractViolation("propose_step: need h != 0 and tol > 0");
  double factor = cfg.fac_max;
  if (err > 0.0) {
    factor = cfg.safety * std::pow(tol / err, 1.0 / (p_component + 1));
    factor = std::clamp(factor, cfg.fac_min, cfg.fac_max);
  } else if (std::isnan(err)) {
    factor = cfg.fac_min;
  }
  const double magnitude = std::clamp(std::abs(h) * factor, cfg.h_min, cfg.h_max);
  return std::copysign(magnitude, h);
}

}  // namespace dsplit
