#include <complex>
#include <limits>
#include <random>

#include "doctest.h"
#include "dsplit/core.hpp"
#include "dsplit/problems.hpp"
#include "support/test_fields.hpp"

using namespace dsplit;
using C = std::complex<double>;

TEST_SUITE("core") {
  TEST_CASE("accumulate adds c f(x) into the target") {
    LinearField<double> f(1, 1.0);
    std::vector<double> x{2.0}, y{1.0};
    accumulate_rhs<double>(f, 0.0, x, 0.1, y);
    CHECK(y[0] == doctest::Approx(1.2).epsilon(1e-15));
    CHECK(x[0] == 2.0);
    CHECK(f.eval_count() == 1);
  }

  TEST_CASE("zero coefficient still counts one evaluation") {
    LinearField<double> f(1, 1.0);
    std::vector<double> x{2.0}, y{1.0};
    accumulate_rhs<double>(f, 0.0, x, 0.0, y);
    CHECK(y[0] == 1.0);
    CHECK(f.eval_count() == 1);
  }

  TEST_CASE("Kepler field at the e = 0.8 initial condition") {
    KeplerRhs<double> f;
    std::vector<double> x{0.2, 0.0, 0.0, 3.0}, y(4, 0.0);
    accumulate_rhs<double>(f, 0.0, x, 1.0, y);
    CHECK(y[0] == doctest::Approx(0.0));
    CHECK(y[1] == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(y[2] == doctest::Approx(-25.0).epsilon(1e-13));
    CHECK(y[3] == doctest::Approx(0.0));
  }

  TEST_CASE("dimension mismatch and aliasing are contract violations") {
    LinearField<double> f(2, 1.0);
    std::vector<double> x{1.0, 2.0}, y3(3, 0.0);
    CHECK_THROWS_AS(accumulate_rhs<double>(f, 0.0, x, 1.0, y3), ContractViolation);
    CHECK_THROWS_AS(accumulate_rhs<double>(f, 0.0, x, 1.0, x), ContractViolation);
    std::vector<double> buf{1.0, 2.0, 3.0};
    CHECK_THROWS_AS(f.accumulate(0.0, std::span<const double>(buf.data(), 2), 1.0, std::span<double>(buf.data() + 1, 2)),
                    ContractViolation);
    CHECK(f.eval_count() == 0);
  }

  TEST_CASE("zero dimension is rejected") {
    CHECK_THROWS_AS(LinearField<double>(0, 1.0), ContractViolation);
  }

  TEST_CASE("norm_l2 examples") {
    CHECK(norm_l2(std::vector<double>{3.0, 4.0}) == 5.0);
    CHECK(norm_l2(std::vector<C>{C(0.0, 1.0)}) == 1.0);
    CHECK(norm_l2(std::vector<double>{1.0, 1.0, 1.0, 1.0}) == 2.0);
    CHECK(norm_l2(std::vector<double>{0.0, 0.0}) == 0.0);
  }

  TEST_CASE("property: n evaluations increment the counter by n") {
    std::mt19937_64 rng(11);
    CubicField<double> f(5, 3);
    std::uniform_int_distribution<int> count(1, 40);
    for (int trial = 0; trial < 20; ++trial) {
      const int n = count(rng);
      f.reset_eval_count();
      auto x = test::random_vector(rng, 5);
      std::vector<double> y(5, 0.0);
      for (int k = 0; k < n; ++k) accumulate_rhs<double>(f, 0.0, x, 0.5, y);
      CHECK(f.eval_count() == static_cast<std::uint64_t>(n));
    }
  }

  TEST_CASE("property: +c then -c restores the target to round-off") {
    std::mt19937_64 rng(12);
    const double eps = std::numeric_limits<double>::epsilon();
    for (int trial = 0; trial < 100; ++trial) {
      CubicField<double> f(6, static_cast<std::uint64_t>(trial));
      auto x = test::random_vector(rng, 6);
      auto y = test::random_vector(rng, 6);
      const auto y0 = y;
      const double c = std::uniform_real_distribution<double>(-0.5, 0.5)(rng);
      accumulate_rhs<double>(f, 0.0, x, c, y);
      accumulate_rhs<double>(f, 0.0, x, -c, y);
      const double scale = norm_l2(y0);
      for (std::size_t i = 0; i < y.size(); ++i) CHECK(std::abs(y[i] - y0[i]) <= 10.0 * eps * scale);
    }
  }

  TEST_CASE("property: norm_l2 is a norm on random complex vectors") {
    std::mt19937_64 rng(13);
    std::uniform_real_distribution<double> scal(-3.0, 3.0);
    for (int trial = 0; trial < 200; ++trial) {
      const auto x = test::random_complex_vector(rng, 7);
      const auto y = test::random_complex_vector(rng, 7);
      std::vector<C> s(7);
      for (std::size_t i = 0; i < 7; ++i) s[i] = x[i] + y[i];
      CHECK(norm_l2(s) <= norm_l2(x) + norm_l2(y) + 1e-15);
      const C alpha(scal(rng), scal(rng));
      std::vector<C> ax(7);
      for (std::size_t i = 0; i < 7; ++i) ax[i] = alpha * x[i];
      CHECK(norm_l2(ax) == doctest::Approx(std::abs(alpha) * norm_l2(x)).epsilon(1e-14));
    }
  }

  TEST_CASE("coefficient narrowing") {
    CHECK(coefficient_cast<double>(Coefficient(0.5, 0.0)) == 0.5);
    CHECK_THROWS_AS(coefficient_cast<double>(Coefficient(0.5, 1e-3)), FieldCapabilityError);
    CHECK(coefficient_cast<C>(Coefficient(0.5, 1e-3)) == C(0.5, 1e-3));
  }

  TEST_CASE("finiteness helpers") {
    CHECK(is_finite(1.0));
    CHECK_FALSE(is_finite(std::numeric_limits<double>::infinity()));
    CHECK_FALSE(is_finite(C(0.0, std::numeric_limits<double>::quiet_NaN())));
    CHECK(all_finite<double>(std::vector<double>{1.0, 2.0}));
  }

  TEST_CASE("function adapter reports the adapter contract") {
    FunctionRhs<double> f(2, [](double, std::span<const double> x, std::span<double> out) {
      out[0] = x[1];
      out[1] = -x[0];
    });
    CHECK(f.contract() == RhsContract::adapter);
    std::vector<double> x{1.0, 2.0}, y{0.0, 0.0};
    accumulate_rhs<double>(f, 0.0, x, 2.0, y);
    CHECK(y[0] == 4.0);
    CHECK(y[1] == -2.0);
    CHECK(f.eval_count() == 1);
    CHECK(LinearField<double>(1, 1.0).contract() == RhsContract::accumulate);
  }
}
