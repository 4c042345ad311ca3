#include <cmath>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "doctest.h"
#include "dsplit/experiments.hpp"
#include "dsplit/scheme_io.hpp"

using namespace dsplit;

namespace {
struct Result {
  int code;
  std::string out;
  std::string err;
};

Result run_cli(std::vector<std::string> args) {
  args.insert(args.begin(), "dsplit");
  std::vector<const char*> argv;
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = cli::run(static_cast<int>(argv.size()), argv.data(), out, err);
  return {code, out.str(), err.str()};
}

std::vector<std::vector<std::string>> parse_csv(const std::string& text) {
  std::vector<std::vector<std::string>> rows;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> cells;
    std::istringstream ls(line);
    std::string cell;
    while (std::getline(ls, cell, ',')) cells.push_back(cell);
    if (!line.empty() && line.back() == ',') cells.emplace_back();
    rows.push_back(cells);
  }
  return rows;
}

std::filesystem::path temp_path(const std::string& name) {
  return std::filesystem::temp_directory_path() / ("dsplit_cli_" + name);
}
}  // namespace

TEST_SUITE("cli") {
  TEST_CASE("list-methods rows") {
    const auto r = run_cli({"list-methods"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 1 + builtin_scheme_names().size() + builtin_tableau_names().size());
    const auto& header = rows[0];
    auto col = [&](const std::string& name) {
      return static_cast<std::size_t>(std::find(header.begin(), header.end(), name) - header.begin());
    };
    for (const auto& row : rows) {
      if (row[0] == "BM4") CHECK(row[col("evals_per_step")] == "13");
      if (row[0] == "BM6") CHECK(row[col("evals_per_step")] == "21");
      if (row[0] == "2N-S6") {
        CHECK(row[col("p_component")] == "4");
        CHECK(row[col("q_averaged")] == "6");
      }
      if (row[0] == "SPL24+") CHECK(row[col("complex")] == "true");
    }
  }

  TEST_CASE("converge S2 and SPL24+ on the exponential problem") {
    const auto s2 = run_cli({"converge", "--method", "S2", "--h", "0.2,0.1,0.05,0.025"});
    REQUIRE(s2.code == 0);
    auto rows = parse_csv(s2.out);
    CHECK(rows[0] == std::vector<std::string>{"h", "err_avg", "err_u", "err_v", "nfev"});
    CHECK(rows.size() == 6);
    CHECK(rows.back()[0] == "slope");
    CHECK(std::abs(std::stod(rows.back()[1]) - 2.0) <= 0.25);

    const auto spl = run_cli({"converge", "--method", "SPL24+", "--h", "0.5,0.25,0.125,0.0625"});
    REQUIRE(spl.code == 0);
    rows = parse_csv(spl.out);
    CHECK(std::abs(std::stod(rows.back()[1]) - 4.0) <= 0.25);
    CHECK(std::abs(std::stod(rows.back()[2]) - 2.0) <= 0.25);
  }

  TEST_CASE("converge without step sizes fails") {
    const auto r = run_cli({"converge", "--method", "S2"});
    CHECK(r.code != 0);
    CHECK(r.err.find("empty") != std::string::npos);
    CHECK(run_cli({"converge", "--method", "S2", "--h", "0.1,0.05"}).code != 0);
    CHECK(run_cli({"converge", "--h", "0.1,0.05,0.025"}).code != 0);
  }

  TEST_CASE("wave with zero final time reproduces the exact solution") {
    const auto r = run_cli({"wave", "--method", "BM4", "--tf", "0"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    REQUIRE(rows.size() == 2);
    CHECK(rows[1][0] == "BM4");
    CHECK(std::stod(rows[1][3]) == 0.0);
    CHECK(std::stod(rows[1][4]) == 0.0);
    CHECK(rows[1][5] == "true");
  }

  TEST_CASE("wave flags unstable cells without failing") {
    const auto r = run_cli({"wave", "--method", "RK2", "--h", "0.02", "--tf", "5"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(rows[1][5] == "false");
    CHECK(rows[1][3] == "nan");
  }

  TEST_CASE("Kepler budget arithmetic") {
    CHECK(kepler_steps_for_budget(resolve_method("BM4"), 520000) == 40000);
    CHECK(kepler_steps_for_budget(resolve_method("RK4"), 520000) == 130000);
    CHECK(kepler_steps_for_budget(resolve_method("RK2"), 520000) == 260000);
  }

  TEST_CASE("circular Kepler orbit conserves energy at small h") {
    for (const auto& name : {"RK2", "RK4", "S2", "BM4", "BM6", "2N-S6"}) {
      CAPTURE(name);
      KeplerConfig cfg;
      cfg.eccentricity = 0.0;
      cfg.tf = 2.0 * M_PI;
      cfg.budget = 200000;
      cfg.stride = 50;
      const auto run = run_kepler(resolve_method(name), cfg);
      CHECK_FALSE(run.collided);
      for (const auto& s : run.samples) CHECK(s.energy_drift <= 1e-10);
    }
  }

  TEST_CASE("kepler command output") {
    const auto r = run_cli({"kepler", "--method", "BM4", "--tf", "10", "--budget", "13000", "--stride", "100"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(rows[0] == std::vector<std::string>{"method", "t", "energy_drift", "position_error"});
    CHECK(rows.size() == 12);
    CHECK(std::stod(rows.back()[1]) == 10.0);
    CHECK(run_cli({"kepler", "--e", "1.0"}).code != 0);
  }

  TEST_CASE("fixed-step integrate lands on tf") {
    const auto r = run_cli({"integrate", "--method", "S2", "--h", "0.3", "--tf", "2"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    CHECK(rows[0] == std::vector<std::string>{"t", "h", "err_est", "accepted", "nfev_cumulative", "norm"});
    CHECK(std::stod(rows.back()[0]) == 2.0);
  }

  TEST_CASE("adaptive integrate has nondecreasing nfev") {
    const auto r = run_cli({"integrate", "--method", "BM4", "--tol", "1e-9", "--problem", "kepler", "--tf", "7"});
    REQUIRE(r.code == 0);
    const auto rows = parse_csv(r.out);
    double prev = 0.0;
    for (std::size_t i = 1; i < rows.size(); ++i) {
      const double n = std::stod(rows[i][4]);
      CHECK(n >= prev);
      prev = n;
    }
    CHECK(std::stod(rows.back()[0]) == 7.0);
  }

  TEST_CASE("h and tol are mutually exclusive") {
    CHECK(run_cli({"integrate", "--method", "S2", "--h", "0.1", "--tol", "1e-6"}).code != 0);
    CHECK(run_cli({"integrate", "--method", "S2"}).code != 0);
    CHECK(run_cli({"integrate", "--method", "RK4", "--tol", "1e-6"}).code != 0);
  }

  TEST_CASE("scheme file behaves like the bundled method") {
    const auto path = temp_path("bm4.json");
    std::ofstream(path) << to_json(load_scheme("BM4"));
    const auto a = run_cli({"integrate", "--method", "BM4", "--h", "0.1", "--problem", "harmonic", "--tf", "3"});
    const auto b = run_cli({"integrate", "--method", path.string(), "--h", "0.1", "--problem", "harmonic", "--tf", "3"});
    REQUIRE(a.code == 0);
    REQUIRE(b.code == 0);
    CHECK(a.out == b.out);
    std::filesystem::remove(path);
  }

  TEST_CASE("missing method file is reported") {
    const auto r = run_cli({"integrate", "--method", "/nonexistent/x.json", "--h", "0.1"});
    CHECK(r.code != 0);
    CHECK(r.err.find("method") != std::string::npos);
  }

  TEST_CASE("config file with flag overrides and output file") {
    const auto cfg = temp_path("cfg.json");
    const auto out = temp_path("out.csv");
    std::ofstream(cfg) << R"({"problem": "decay", "method": "BM4", "h": [0.5, 0.25, 0.125], "tf": 1.0, "output": ")"
                       << out.string() << "\"}";
    const auto r = run_cli({"converge", "--config", cfg.string(), "--method", "BM6"});
    REQUIRE(r.code == 0);
    CHECK(r.out.empty());
    std::ifstream in(out);
    std::stringstream ss;
    ss << in.rdbuf();
    const auto rows = parse_csv(ss.str());
    CHECK(rows.size() == 5);
    CHECK(std::stod(rows[1][4]) == 2.0 * 21.0);
    std::filesystem::remove(cfg);
    std::filesystem::remove(out);
  }

  TEST_CASE("config diagnostics") {
    try {
      cli::parse_config_json("{\n \"method\": \"S2\",\n \"h\": [0.1,\n}");
      FAIL("expected error");
    } catch (const cli::ConfigError& e) {
      CHECK(std::string(e.what()).find("line 4") != std::string::npos);
    }
    try {
      cli::parse_config_json(R"({"tf": "long"})");
      FAIL("expected error");
    } catch (const cli::ConfigError& e) {
      CHECK(std::string(e.what()).find("'tf'") != std::string::npos);
    }
    CHECK_THROWS_AS(cli::parse_config_json(R"({"colour": 1})"), cli::ConfigError);
    const auto c = cli::parse_config_json(R"({"method": ["RK4", "BM4"], "h": 0.1, "N": 64, "sample_stride": 5})");
    CHECK(c.methods.size() == 2);
    CHECK(c.hs == std::vector<double>{0.1});
    CHECK(*c.N == 64);
    CHECK(*c.sample_stride == 5);
    CHECK(run_cli({"converge", "--config", "/nonexistent.json"}).code != 0);
  }

  TEST_CASE("commands are deterministic") {
    const std::vector<std::string> args{"wave", "--method", "S2,BM4", "--h", "0.01", "--tf", "0.5", "--n", "64"};
    const auto a = run_cli(args);
    const auto b = run_cli(args);
    REQUIRE(a.code == 0);
    CHECK(a.out == b.out);
  }

  TEST_CASE("unknown subcommand or flag exits nonzero") {
    CHECK(run_cli({"frobnicate"}).code != 0);
    CHECK(run_cli({"wave", "--bogus"}).code != 0);
    CHECK(run_cli({}).code != 0);
  }
}
