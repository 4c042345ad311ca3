#include "dsplit/problems.hpp"

#include <cmath>
#include <numbers>

namespace dsplit {

SpectralGrid::SpectralGrid(std::size_t n) : n_(n) {
  if (n == 0) throw ContractViolation("spectral grid needs at least one point");
}

double SpectralGrid::wavenumber(std::size_t j) const noexcept {
  const auto n = static_cast<std::ptrdiff_t>(n_);
  auto m = static_cast<std::ptrdiff_t>(j);
  if (n % 2 == 0 && m == n / 2) return 0.0;
  if (m > n / 2) m -= n;
  return 2.0 * std::numbers::pi * static_cast<double>(m);
}

AdvectionRhs::AdvectionRhs(std::size_t n)
    : RhsSystem<Complex>(n), grid_(n), plan_(n), multiplier_(n), work_(n) {
  for (std::size_t j = 0; j < n; ++j) multiplier_[j] = Complex(0.0, -grid_.wavenumber(j));
}

void AdvectionRhs::accumulate_impl(double, std::span<const Complex> x, Complex c, std::span<Complex> y) {
  std::copy(x.begin(), x.end(), work_.begin());
  plan_.forward(work_);
  for (std::size_t j = 0; j < work_.size(); ++j) work_[j] *= multiplier_[j];
  plan_.inverse(work_);
  axpy<Complex>(c, work_, y);
}

StateVector<Complex> wave_exact(double t, const SpectralGrid& grid) {
  StateVector<Complex> u(grid.size());
  for (std::size_t j = 0; j < grid.size(); ++j)
    u[j] = Complex(std::sin(8.0 * std::numbers::pi * (grid.point(j) - t)), 0.0);
  return u;
}

KeplerState KeplerState::from_flat(std::span<const double> x) {
  if (x.size() != 4) throw ContractViolation("Kepler state has 4 components");
  return {{x[0], x[1]}, {x[2], x[3]}};
}

KeplerState kepler_initial(double e) {
  if (!(e >= 0.0 && e < 1.0)) throw ContractViolation("eccentricity must lie in [0, 1)");
  return {{1.0 - e, 0.0}, {0.0, std::sqrt((1.0 + e) / (1.0 - e))}};
}

double kepler_energy(std::span<const double> x) {
  if (x.size() != 4) throw ContractViolation("Kepler state has 4 components");
  const double r = std::hypot(x[0], x[1]);
  if (r < kCollisionRadius) throw CollisionError("Kepler collision: r below 1e-12");
  return 0.5 * (x[2] * x[2] + x[3] * x[3]) - 1.0 / r;
}

double kepler_energy(const KeplerState& s) {
  const auto flat = s.flat();
  return kepler_energy(flat);
}

double kepler_angular_momentum(std::span<const double> x) {
  if (x.size() != 4) throw ContractViolation("Kepler state has 4 components");
  return x[0] * x[3] - x[1] * x[2];
}

KeplerState kepler_reference(double t, double e) {
  if (!(e >= 0.0 && e < 1.0)) throw ContractViolation("eccentricity must lie in [0, 1)");
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double mean = std::remainder(t, two_pi);  // in [-pi, pi]
  double E = e < 0.8 ? mean : (mean >= 0 ? std::numbers::pi : -std::numbers::pi);
  bool converged = false;
  for (int it = 0; it < 50; ++it) {
    const double residual = E - e * std::sin(E) - mean;
    const double step = residual / (1.0 - e * std::cos(E));
    E -= step;
    if (std::abs(step) <= 1e-15 * std::max(1.0, std::abs(E))) {
      converged = true;
      break;
    }
  }
  if (!converged && std::abs(E - e * std::sin(E) - mean) > 1e-14)
    throw NumericalError("Kepler equation: Newton iteration did not converge in 50 iterations");
  const double beta = std::sqrt(1.0 - e * e);
  const double cosE = std::cos(E);
  const double sinE = std::sin(E);
  const double rate = 1.0 / (1.0 - e * cosE);
  return {{cosE - e, beta * sinE}, {-sinE * rate, beta * cosE * rate}};
}

const std::vector<std::string>& problem_names() {
  static const std::vector<std::string> names = {"exp", "decay", "harmonic", "time", "sin-time", "kepler", "wave"};
  return names;
}

}  // namespace dsplit
