#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "dsplit/baseline.hpp"
#include "dsplit/problems.hpp"
#include "dsplit/scheme_io.hpp"

using namespace dsplit;

namespace {
std::filesystem::path write_temp(const std::string& name, const std::string& text) {
  const auto path = std::filesystem::temp_directory_path() / ("dsplit_test_" + name);
  std::ofstream(path) << text;
  return path;
}
}  // namespace

TEST_SUITE("scheme_io") {
  TEST_CASE("LT round-trips through a file") {
    const auto path = write_temp("lt.json", R"({"kind": "splitting", "name": "LT", "a": [[1, 0]], "b": [[1, 0]], "p": 1, "q": 2})");
    const auto contents = load_scheme_file(path);
    const auto* s = std::get_if<SplittingScheme>(&contents);
    REQUIRE(s != nullptr);
    const auto lt = load_scheme("LT");
    CHECK(s->a == lt.a);
    CHECK(s->b == lt.b);
    CHECK(s->p_component == 1);
    CHECK(s->q_averaged == 2);
    CHECK(s->evals_per_step() == 2);
    std::filesystem::remove(path);
  }

  TEST_CASE("inconsistent coefficients are rejected") {
    CHECK_THROWS_AS(parse_scheme_json(R"({"kind": "splitting", "a": [[0.9, 0]], "b": [[1, 0]], "p": 1})"),
                    InvariantViolation);
  }

  TEST_CASE("single-stage Williamson file is explicit Euler") {
    const auto contents = parse_scheme_json(R"({"kind": "williamson", "name": "euler", "a": [[0, 0]], "b": [[1, 0]], "p": 1})");
    const auto* w = std::get_if<LowStorageScheme>(&contents);
    REQUIRE(w != nullptr);
    CHECK(w->format == LowStorageScheme::Format::williamson);
    LinearField<double> f(1, 1.0);
    const std::vector<double> x{1.0};
    CHECK(williamson_step<double>(*w, f, 0.0, x, 0.1)[0] == doctest::Approx(1.1).epsilon(1e-15));
  }

  TEST_CASE("bare numbers are accepted for real coefficients") {
    const auto contents = parse_scheme_json(R"({"kind": "splitting", "a": [0.5, 0.5], "b": [1, 0], "p": 2})");
    const auto& s = std::get<SplittingScheme>(contents);
    CHECK(s.symmetric);
    CHECK(s.q_averaged == 2);
  }

  TEST_CASE("syntax errors carry a line number") {
    try {
      parse_scheme_json("{\n  \"kind\": \"splitting\",\n  \"a\": [1,\n}");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
  }

  TEST_CASE("structural errors name the field") {
    try {
      parse_scheme_json(R"({"kind": "splitting", "a": "x", "b": [1]})");
      FAIL("expected a parse error");
    } catch (const ParseError& e) {
      CHECK(std::string(e.what()).find("'a'") != std::string::npos);
    }
    CHECK_THROWS_AS(parse_scheme_json(R"({"a": [1], "b": [1]})"), ParseError);
    CHECK_THROWS_AS(parse_scheme_json(R"({"kind": "magic", "a": [1], "b": [1]})"), ParseError);
    CHECK_THROWS_AS(load_scheme_file("/nonexistent/scheme.json"), ParseError);
  }

  TEST_CASE("every bundled scheme survives to_json and back") {
    for (const auto& name : builtin_scheme_names()) {
      CAPTURE(name);
      const auto s = load_scheme(name);
      const auto back = std::get<SplittingScheme>(parse_scheme_json(to_json(s)));
      CHECK(back.name == s.name);
      CHECK(back.a == s.a);
      CHECK(back.b == s.b);
      CHECK(back.p_component == s.p_component);
      CHECK(back.q_averaged == s.q_averaged);
      CHECK(back.symmetric == s.symmetric);
      CHECK(back.complex_coeffs == s.complex_coeffs);
    }
  }

  TEST_CASE("tableau and vdH files") {
    const auto rk4 = builtin_tableau("RK4");
    const auto back = std::get<ButcherTableau>(parse_scheme_json(to_json(rk4)));
    CHECK(back.A == rk4.A);
    CHECK(back.b == rk4.b);
    CHECK(back.c == rk4.c);

    const auto vdh = std::get<LowStorageScheme>(
        parse_scheme_json(R"({"kind": "vdh", "name": "heun", "a": [1], "b": [0.5, 0.5], "p": 2})"));
    CHECK(vdh.format == LowStorageScheme::Format::vdh);
    CHECK(vdh.stages() == 2);
    CHECK_THROWS_AS(parse_scheme_json(R"({"kind": "butcher", "A": [[0, 1], [0, 0]], "b": [0.5, 0.5], "p": 1})"),
                    InvariantViolation);
  }
}
