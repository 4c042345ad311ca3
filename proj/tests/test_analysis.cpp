#include <cmath>
#include <random>

#include "doctest.h"
#include "dsplit/analysis.hpp"
#include "dsplit/experiments.hpp"
#include "dsplit/problems.hpp"
#include "support/test_fields.hpp"

using namespace dsplit;

TEST_SUITE("analysis") {
  TEST_CASE("relative_error examples") {
    const std::vector<double> e{1.0, 2.0};
    CHECK(relative_error<double>(e, e) == 0.0);
    CHECK(relative_error<double>(std::vector<double>{1.1}, std::vector<double>{1.0}) == doctest::Approx(0.1));
    CHECK_THROWS_AS(relative_error<double>(e, std::vector<double>{0.0, 0.0}), ContractViolation);
    CHECK_THROWS_AS(relative_error<double>(e, std::vector<double>{1.0}), ContractViolation);
  }

  TEST_CASE("norm_error examples") {
    const std::vector<double> u{3.0, 4.0};
    CHECK(norm_error<double>(u, u) == 0.0);
    CHECK(norm_error<double>(std::vector<double>{6.0, 8.0}, u) == 1.0);
    CHECK_THROWS_AS(norm_error<double>(u, std::vector<double>{0.0, 0.0}), ContractViolation);
    SpectralGrid g(128);
    CHECK(norm_error<Complex>(wave_exact(3.7, g), wave_exact(0.0, g)) <= 1e-13);
  }

  TEST_CASE("property: error functionals are invariant under unitary rotation") {
    std::mt19937_64 rng(51);
    std::uniform_real_distribution<double> angle(0.0, 2.0 * M_PI);
    for (int trial = 0; trial < 50; ++trial) {
      const auto a = test::random_complex_vector(rng, 9);
      const auto b = test::random_complex_vector(rng, 9);
      const Complex r = std::polar(1.0, angle(rng));
      std::vector<Complex> ra(9), rb(9);
      for (std::size_t i = 0; i < 9; ++i) {
        ra[i] = r * a[i];
        rb[i] = r * b[i];
      }
      CHECK(relative_error<Complex>(ra, rb) == doctest::Approx(relative_error<Complex>(a, b)).epsilon(1e-13));
      CHECK(norm_error<Complex>(ra, rb) == doctest::Approx(norm_error<Complex>(a, b)).epsilon(1e-10));
    }
  }

  TEST_CASE("convergence_slope on synthetic data") {
    FitOptions two;
    two.min_points = 2;
    const std::vector<double> h2{0.1, 0.01}, e2{1e-2, 1e-4};
    CHECK(convergence_slope(h2, e2, two).slope == doctest::Approx(2.0).epsilon(1e-12));

    std::vector<double> hs, es;
    for (int k = 0; k < 4; ++k) {
      hs.push_back(0.1 * std::pow(0.5, k));
      es.push_back(3.0 * std::pow(hs.back(), 6));
    }
    const auto st = convergence_slope(hs, es);
    CHECK(std::abs(st.slope - 6.0) <= 1e-12);
    CHECK(st.residual <= 1e-12);
  }

  TEST_CASE("convergence_slope needs three usable points") {
    const std::vector<double> h2{0.1, 0.01}, e2{1e-2, 1e-4};
    CHECK_THROWS_AS(convergence_slope(h2, e2), InsufficientData);
    const std::vector<double> h3{0.1, 0.05, 0.025}, e3{1e-6, 1e-17, 1e-18};
    CHECK_THROWS_AS(convergence_slope(h3, e3), InsufficientData);
    const std::vector<double> bad{1.0};
    CHECK_THROWS_AS(convergence_slope(h3, bad), ContractViolation);
  }

  TEST_CASE("round-off points are excluded from the fit") {
    const std::vector<double> hs{0.4, 0.2, 0.1, 0.05, 0.025};
    const std::vector<double> es{4e-4, 1e-4, 2.5e-5, 1e-15, 2e-15};
    const auto st = convergence_slope(hs, es);
    CHECK(st.used == std::vector<bool>{true, true, true, false, false});
    CHECK(st.slope == doctest::Approx(2.0).epsilon(1e-12));
  }

  TEST_CASE("2N-S6 averaged output on x' = -x") {
    const std::vector<double> hs{0.5, 0.25, 0.125, 0.0625};
    const auto r = run_convergence(resolve_method("2N-S6"), "decay", 1.0, hs);
    CHECK(r.avg.slope >= 5.75);
    CHECK(r.avg.slope <= 6.25);
  }

  TEST_CASE("property: averaging raises the component order by q - p") {
    const std::vector<double> hs{0.5, 0.25, 0.125, 0.0625, 0.03125};
    for (const char* name : {"LT", "SPL24+", "SPL24-", "2N-S6"}) {
      CAPTURE(name);
      const auto spec = resolve_method(name);
      const auto& s = std::get<SplittingScheme>(spec);
      for (const char* problem : {"decay", "harmonic"}) {
        CAPTURE(problem);
        const auto r = run_convergence(spec, problem, 1.0, hs);
        REQUIRE(r.u.has_value());
        CHECK(std::abs((r.avg.slope - r.u->slope) - (s.q_averaged - s.p_component)) <= 0.35);
      }
    }
  }

  TEST_CASE("energy drift") {
    IntegrationTrace exact;
    exact.observable_names = {"energy"};
    for (double t = 0.0; t < 30.0; t += 0.5) {
      TraceRow row;
      row.t = t;
      row.accepted = true;
      row.observables = {kepler_energy(kepler_reference(t, 0.8))};
      exact.rows.push_back(row);
    }
    for (const auto& d : energy_drift(exact)) CHECK(d.drift <= 1e-12);

    IntegrationTrace flat;
    flat.observable_names = {"energy"};
    for (int k = 0; k < 5; ++k) flat.rows.push_back(TraceRow{double(k), 0.1, 0.0, true, 0, {1.25}});
    flat.rows.push_back(TraceRow{5.0, 0.1, 0.0, false, 0, {}});
    const auto d = energy_drift(flat);
    CHECK(d.size() == 5);
    for (const auto& s : d) CHECK(s.drift == 0.0);
    CHECK(energy_drift(flat, 3).empty());
  }

  TEST_CASE("fit_line") {
    const std::vector<double> x{0.0, 1.0, 2.0, 3.0}, y{1.0, 3.0, 5.0, 7.0};
    const auto f = fit_line(x, y);
    CHECK(f.slope == doctest::Approx(2.0));
    CHECK(f.intercept == doctest::Approx(1.0));
    CHECK(f.r_squared == doctest::Approx(1.0));
  }
}
