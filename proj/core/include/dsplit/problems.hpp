#pragma once

#include <array>
#include <cmath>
#include <complex>
#include <cstdint>
#include <functional>
#include <memory>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "dsplit/core.hpp"
#include "dsplit/fft.hpp"

namespace dsplit {

// ---------------------------------------------------------------------------
// Spectral advection u_t + u_x = 0 on the periodic unit interval.

/// Uniform periodic grid x_j = j / N with Fourier wavenumbers 2 pi m.
class SpectralGrid {
 public:
  explicit SpectralGrid(std::size_t n);

  std::size_t size() const noexcept { return n_; }
  double point(std::size_t j) const noexcept { return static_cast<double>(j) / static_cast<double>(n_); }

  /// 2 pi m for FFT bin j, with m in {0..N/2-1, -N/2+1..-1}; the Nyquist bin
  /// (even N) returns 0.
  double wavenumber(std::size_t j) const noexcept;

 private:
  std::size_t n_;
};

/// f(u) = -du/dx evaluated by spectral collocation, F^{-1} (-i k) F u.
/// Keeps a plan and one internal transform buffer; evaluation never allocates.
class AdvectionRhs final : public RhsSystem<Complex> {
 public:
  explicit AdvectionRhs(std::size_t n);

  const SpectralGrid& grid() const noexcept { return grid_; }

 protected:
  void accumulate_impl(double t, std::span<const Complex> x, Complex c, std::span<Complex> y) override;

 private:
  SpectralGrid grid_;
  FftPlan plan_;
  std::vector<Complex> multiplier_;  // -i k / 1
  std::vector<Complex> work_;
};

/// u_j = sin(8 pi (x_j - t)), the exact solution from u(x, 0) = sin(8 pi x).
StateVector<Complex> wave_exact(double t, const SpectralGrid& grid);

// ---------------------------------------------------------------------------
// Kepler two-body problem (q, p) with q' = p, p' = -q / r^3.

struct KeplerState {
  std::array<double, 2> q{};
  std::array<double, 2> p{};

  std::array<double, 4> flat() const noexcept { return {q[0], q[1], p[0], p[1]}; }
  static KeplerState from_flat(std::span<const double> x);
};

inline constexpr double kCollisionRadius = 1e-12;

/// q = (1 - e, 0), p = (0, sqrt((1 + e) / (1 - e))): pericentre of an orbit
/// with semi-major axis 1, period 2 pi and energy -1/2.
KeplerState kepler_initial(double e);

/// H = |p|^2 / 2 - 1 / r.
double kepler_energy(std::span<const double> x);
double kepler_energy(const KeplerState& s);
double kepler_angular_momentum(std::span<const double> x);

/// Exact state at time t from the pericentre epoch, by Newton iteration on
/// Kepler's equation E - e sin E = t.
KeplerState kepler_reference(double t, double e);

/// Complex instantiations use the analytic continuation r = sqrt(q . q).
template <Scalar S>
class KeplerRhs final : public RhsSystem<S> {
 public:
  KeplerRhs() : RhsSystem<S>(4) {}

 protected:
  void accumulate_impl(double, std::span<const S> x, S c, std::span<S> y) override {
    const S r2 = x[0] * x[0] + x[1] * x[1];
    const S r = std::sqrt(r2);
    if (std::abs(r) < kCollisionRadius) throw CollisionError("Kepler collision: r below 1e-12");
    const S inv_r3 = S(1) / (r2 * r);
    y[0] += c * x[2];
    y[1] += c * x[3];
    y[2] -= c * x[0] * inv_r3;
    y[3] -= c * x[1] * inv_r3;
  }
};

// ---------------------------------------------------------------------------
// Desk-scale fields for order and oracle tests.

/// x' = lambda x, componentwise.
template <Scalar S>
class LinearField final : public RhsSystem<S> {
 public:
  LinearField(std::size_t dimension, double lambda) : RhsSystem<S>(dimension), lambda_(lambda) {}
  double lambda() const noexcept { return lambda_; }

 protected:
  void accumulate_impl(double, std::span<const S> x, S c, std::span<S> y) override {
    const S k = c * lambda_;
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += k * x[i];
  }

 private:
  double lambda_;
};

/// (x, y)' = (y, -x).
template <Scalar S>
class HarmonicOscillator final : public RhsSystem<S> {
 public:
  HarmonicOscillator() : RhsSystem<S>(2) {}

 protected:
  void accumulate_impl(double, std::span<const S> x, S c, std::span<S> y) override {
    y[0] += c * x[1];
    y[1] -= c * x[0];
  }
};

/// x' = t.
template <Scalar S>
class TimeField final : public RhsSystem<S> {
 public:
  TimeField() : RhsSystem<S>(1, false) {}

 protected:
  void accumulate_impl(double t, std::span<const S>, S c, std::span<S> y) override { y[0] += c * t; }
};

/// x' = sin(t) x, exact solution x0 exp(cos t0 - cos t).
template <Scalar S>
class SinTimeField final : public RhsSystem<S> {
 public:
  SinTimeField() : RhsSystem<S>(1, false) {}

 protected:
  void accumulate_impl(double t, std::span<const S> x, S c, std::span<S> y) override {
    y[0] += c * std::sin(t) * x[0];
  }
};

/// Seeded random cubic polynomial field
///   f_i(x) = g_i + sum_j L_ij x_j + m_i x_i x_{i+1} + d_i x_i^3
/// with coefficients uniform in [-1, 1] (indices wrap).
template <Scalar S>
class CubicField final : public RhsSystem<S> {
 public:
  CubicField(std::size_t dimension, std::uint64_t seed) : RhsSystem<S>(dimension) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> coeff(-1.0, 1.0);
    g_.resize(dimension);
    L_.resize(dimension * dimension);
    m_.resize(dimension);
    d_.resize(dimension);
    for (auto& v : g_) v = coeff(rng);
    for (auto& v : L_) v = coeff(rng);
    for (auto& v : m_) v = coeff(rng);
    for (auto& v : d_) v = coeff(rng);
  }

 protected:
  void accumulate_impl(double, std::span<const S> x, S c, std::span<S> y) override {
    const std::size_t n = x.size();
    for (std::size_t i = 0; i < n; ++i) {
      S f = g_[i];
      for (std::size_t j = 0; j < n; ++j) f += L_[i * n + j] * x[j];
      f += m_[i] * x[i] * x[(i + 1) % n];
      f += d_[i] * x[i] * x[i] * x[i];
      y[i] += c * f;
    }
  }

 private:
  std::vector<double> g_, L_, m_, d_;
};

/// Nonlinear pendulum (theta, omega)' = (omega, -sin theta).
template <Scalar S>
class PendulumField final : public RhsSystem<S> {
 public:
  PendulumField() : RhsSystem<S>(2) {}

 protected:
  void accumulate_impl(double, std::span<const S> x, S c, std::span<S> y) override {
    y[0] += c * x[1];
    y[1] -= c * std::sin(x[0]);
  }
};

// ---------------------------------------------------------------------------
// Named problems used by the experiment drivers and the CLI.

struct ProblemParams {
  std::size_t grid_points = 128;  ///< wave
  double eccentricity = 0.8;      ///< kepler
};

template <Scalar S>
struct Problem {
  std::string name;
  std::unique_ptr<RhsSystem<S>> rhs;
  StateVector<S> x0;
  double t0 = 0.0;
  std::function<StateVector<S>(double)> exact;  ///< empty if unknown
  std::vector<std::string> observable_names;
  std::function<std::vector<double>(double, std::span<const S>)> observables;
};

/// exp, decay, harmonic, time, sin-time, kepler, wave (wave needs complex).
const std::vector<std::string>& problem_names();

template <Scalar S>
Problem<S> make_problem(std::string_view name, const ProblemParams& params = {});

namespace detail {

template <Scalar S>
double real_of(S x) {
  if constexpr (is_complex_v<S>) return x.real();
  else return x;
}

}  // namespace detail

template <Scalar S>
Problem<S> make_problem(std::string_view name, const ProblemParams& params) {
  Problem<S> pr;
  pr.name = std::string(name);
  auto norm_observable = [](double, std::span<const S> x) { return std::vector<double>{norm_l2(x)}; };
  if (name == "exp" || name == "decay") {
    const double lambda = name == "exp" ? 1.0 : -1.0;
    pr.rhs = std::make_unique<LinearField<S>>(1, lambda);
    pr.x0 = {S(1)};
    pr.exact = [lambda](double t) { return StateVector<S>{S(std::exp(lambda * t))}; };
    pr.observable_names = {"norm"};
    pr.observables = norm_observable;
  } else if (name == "harmonic") {
    pr.rhs = std::make_unique<HarmonicOscillator<S>>();
    pr.x0 = {S(1), S(0)};
    pr.exact = [](double t) { return StateVector<S>{S(std::cos(t)), S(-std::sin(t))}; };
    pr.observable_names = {"energy"};
    pr.observables = [](double, std::span<const S> x) {
      return std::vector<double>{0.5 * (std::norm(x[0]) + std::norm(x[1]))};
    };
  } else if (name == "time") {
    pr.rhs = std::make_unique<TimeField<S>>();
    pr.x0 = {S(0)};
    pr.exact = [](double t) { return StateVector<S>{S(0.5 * t * t)}; };
  } else if (name == "sin-time") {
    pr.rhs = std::make_unique<SinTimeField<S>>();
    pr.x0 = {S(1)};
    pr.exact = [](double t) { return StateVector<S>{S(std::exp(1.0 - std::cos(t)))}; };
  } else if (name == "kepler") {
    const double e = params.eccentricity;
    if (!(e >= 0.0 && e < 1.0)) throw ContractViolation("eccentricity must lie in [0, 1)");
    pr.rhs = std::make_unique<KeplerRhs<S>>();
    const auto init = kepler_initial(e).flat();
    pr.x0.assign(init.begin(), init.end());
    pr.exact = [e](double t) {
      const auto s = kepler_reference(t, e).flat();
      return StateVector<S>(s.begin(), s.end());
    };
    pr.observable_names = {"energy", "angular_momentum"};
    pr.observables = [](double, std::span<const S> x) {
      const std::array<double, 4> r{detail::real_of(x[0]), detail::real_of(x[1]), detail::real_of(x[2]),
                                    detail::real_of(x[3])};
      return std::vector<double>{kepler_energy(r), kepler_angular_momentum(r)};
    };
  } else if (name == "wave") {
    if constexpr (!is_complex_v<S>) {
      throw FieldCapabilityError("the wave problem needs the complex field");
    } else {
      auto rhs = std::make_unique<AdvectionRhs>(params.grid_points);
      const SpectralGrid grid = rhs->grid();
      pr.x0 = wave_exact(0.0, grid);
      pr.exact = [grid](double t) { return wave_exact(t, grid); };
      pr.rhs = std::move(rhs);
      pr.observable_names = {"mass"};
      pr.observables = norm_observable;
    }
  } else {
    throw LookupError("unknown problem '" + std::string(name) + "'");
  }
  return pr;
}

}  // namespace dsplit
