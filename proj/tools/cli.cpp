#include "cli.hpp"

#include <algorithm>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "dsplit/adaptive.hpp"
#include "dsplit/csv.hpp"
#include "dsplit/experiments.hpp"
#include "dsplit/methods.hpp"
#include "dsplit/problems.hpp"
#include "dsplit/schemes.hpp"

namespace dsplit::cli {
namespace {

using nlohmann::json;

bool is_builtin_method(std::string_view name) {
  const auto& s = builtin_scheme_names();
  const auto& t = builtin_tableau_names();
  return std::find(s.begin(), s.end(), name) != s.end() || std::find(t.begin(), t.end(), name) != t.end();
}

double get_number(const json& doc, const char* field) {
  const json& v = doc.at(field);
  if (!v.is_number()) throw ConfigError(std::string("config field '") + field + "': expected a number");
  return v.get<double>();
}

template <class T>
T get_unsigned(const json& doc, const char* field) {
  const json& v = doc.at(field);
  if (!v.is_number_integer() || v.get<long long>() < 0)
    throw ConfigError(std::string("config field '") + field + "': expected a non-negative integer");
  return static_cast<T>(v.get<unsigned long long>());
}

std::string get_string(const json& doc, const char* field) {
  const json& v = doc.at(field);
  if (!v.is_string()) throw ConfigError(std::string("config field '") + field + "': expected a string");
  return v.get<std::string>();
}

std::size_t line_of(std::string_view text, std::size_t byte) {
  byte = std::min(byte, text.size());
  return 1 + static_cast<std::size_t>(std::count(text.begin(), text.begin() + static_cast<std::ptrdiff_t>(byte), '\n'));
}

std::string require_problem(const ExperimentConfig& c, const char* fallback) {
  return c.problem.empty() ? std::string(fallback) : c.problem;
}

const std::string& single_method(const ExperimentConfig& c, const char* command) {
  if (c.methods.size() != 1)
    throw ConfigError(std::string(command) + ": exactly one --method is required, got " +
                      std::to_string(c.methods.size()));
  return c.methods.front();
}

void no_tolerance(const ExperimentConfig& c, const char* command) {
  if (c.tol) throw ConfigError(std::string(command) + ": --tol is only valid for integrate");
}

template <Scalar S>
void integrate_impl(const ExperimentConfig& c, const MethodSpec& spec, std::ostream& out) {
  ProblemParams params;
  if (c.N) params.grid_points = *c.N;
  if (c.e) params.eccentricity = *c.e;
  auto problem = make_problem<S>(require_problem(c, "exp"), params);
  const double t0 = c.t0;
  const double tf = c.tf.value_or(1.0);
  const int stride = c.sample_stride.value_or(1);
  if (stride < 1) throw ConfigError("config field 'sample_stride': must be >= 1");

  IntegrationTrace trace;
  if (c.tol) {
    const auto* scheme = std::get_if<SplittingScheme>(&spec);
    if (!scheme) throw ConfigError("integrate: adaptive stepping (--tol) needs a D-splitting scheme");
    ControllerConfig cfg;
    cfg.tol = *c.tol;
    cfg.h_max = std::max(std::abs(tf - t0), cfg.h_min);
    cfg.h_init = std::min(cfg.h_init, cfg.h_max);
    const auto coupling = problem.rhs->autonomous() ? TimeCoupling::frozen : TimeCoupling::duplicated;
    auto result = integrate_adaptive<S>(*scheme, *problem.rhs, t0, tf, problem.x0, cfg, problem.observables,
                                        problem.observable_names, stride, coupling);
    trace = std::move(result.trace);
  } else {
    const double h = c.hs.front();
    if (!(h > 0.0)) throw ConfigError("config field 'h': must be positive");
    const auto steps = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(std::abs(tf - t0) / h)));
    auto method = make_method<S>(spec, problem.x0.size());
    FixedStepOptions opts;
    opts.stride = stride;
    auto run = integrate_fixed<S>(*method, *problem.rhs, t0, tf, steps, problem.x0, problem.observables,
                                  problem.observable_names, opts);
    trace = std::move(run.trace);
  }

  std::vector<std::string> header = {"t", "h", "err_est", "accepted", "nfev_cumulative"};
  header.insert(header.end(), trace.observable_names.begin(), trace.observable_names.end());
  csv::write_row(out, header);
  for (const auto& row : trace.rows) {
    std::vector<std::string> cells = {csv::number(row.t), csv::number(row.h), csv::number(row.err_est),
                                      csv::boolean(row.accepted), csv::number(row.nfev)};
    for (std::size_t i = 0; i < trace.observable_names.size(); ++i)
      cells.push_back(i < row.observables.size() ? csv::number(row.observables[i]) : std::string());
    csv::write_row(out, cells);
  }
}

}  // namespace

ExperimentConfig parse_config_json(std::string_view text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ConfigError("config line " + std::to_string(line_of(text, e.byte == 0 ? 0 : e.byte - 1)) + ": " +
                      e.what());
  }
  if (!doc.is_object()) throw ConfigError("config must be a JSON object");
  static const std::vector<std::string> known = {"problem", "method", "h", "tol", "t0", "tf",
                                                 "N", "e", "budget", "output", "sample_stride"};
  for (const auto& [key, _] : doc.items())
    if (std::find(known.begin(), known.end(), key) == known.end())
      throw ConfigError("config field '" + key + "': unknown field");

  ExperimentConfig c;
  if (doc.contains("problem")) c.problem = get_string(doc, "problem");
  if (doc.contains("method")) {
    const json& m = doc.at("method");
    if (m.is_string()) {
      c.methods.push_back(m.get<std::string>());
    } else if (m.is_array() && std::all_of(m.begin(), m.end(), [](const json& x) { return x.is_string(); })) {
      for (const auto& x : m) c.methods.push_back(x.get<std::string>());
    } else {
      throw ConfigError("config field 'method': expected a string or an array of strings");
    }
  }
  if (doc.contains("h")) {
    const json& h = doc.at("h");
    if (h.is_number()) {
      c.hs.push_back(h.get<double>());
    } else if (h.is_array() && std::all_of(h.begin(), h.end(), [](const json& x) { return x.is_number(); })) {
      for (const auto& x : h) c.hs.push_back(x.get<double>());
    } else {
      throw ConfigError("config field 'h': expected a number or an array of numbers");
    }
  }
  if (doc.contains("tol")) c.tol = get_number(doc, "tol");
  if (doc.contains("t0")) c.t0 = get_number(doc, "t0");
  if (doc.contains("tf")) c.tf = get_number(doc, "tf");
  if (doc.contains("N")) c.N = get_unsigned<std::size_t>(doc, "N");
  if (doc.contains("e")) c.e = get_number(doc, "e");
  if (doc.contains("budget")) c.budget = get_unsigned<std::uint64_t>(doc, "budget");
  if (doc.contains("output")) c.output = get_string(doc, "output");
  if (doc.contains("sample_stride")) c.sample_stride = static_cast<int>(get_unsigned<unsigned>(doc, "sample_stride"));
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file '" + path.string() + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  try {
    return parse_config_json(ss.str());
  } catch (const ConfigError& e) {
    throw ConfigError(path.string() + ": " + e.what());
  }
}

void check_references(const ExperimentConfig& c) {
  for (const auto& m : c.methods) {
    if (is_builtin_method(m)) continue;
    std::error_code ec;
    if (!std::filesystem::is_regular_file(m, ec))
      throw ConfigError("config field 'method': '" + m + "' is neither a bundled method nor an existing scheme file");
  }
  if (!c.output.empty()) {
    const auto parent = std::filesystem::path(c.output).parent_path();
    std::error_code ec;
    if (!parent.empty() && !std::filesystem::is_directory(parent, ec))
      throw ConfigError("config field 'output': directory '" + parent.string() + "' does not exist");
  }
  if (c.tol && !c.hs.empty()) throw ConfigError("set exactly one of 'h' (fixed step) or 'tol' (adaptive)");
}

void cmd_list_methods(std::ostream& out) {
  csv::write_row(out, {"name", "kind", "stages", "p_component", "q_averaged", "evals_per_step", "symmetric", "complex"});
  for (const auto& name : builtin_scheme_names()) {
    const auto s = load_scheme(name);
    csv::write_row(out, {s.name, "splitting", std::to_string(s.stages()), std::to_string(s.p_component),
                         std::to_string(s.q_averaged), std::to_string(s.evals_per_step()), csv::boolean(s.symmetric),
                         csv::boolean(s.complex_coeffs)});
  }
  for (const auto& name : builtin_tableau_names()) {
    const auto t = builtin_tableau(name);
    csv::write_row(out, {t.name, "butcher", std::to_string(t.stages), std::to_string(t.order),
                         std::to_string(t.order), std::to_string(t.stages), csv::boolean(false),
                         csv::boolean(false)});
  }
}

void cmd_converge(const ExperimentConfig& c, std::ostream& out) {
  no_tolerance(c, "converge");
  const auto spec = resolve_method(single_method(c, "converge"));
  if (c.hs.empty()) throw InsufficientData("converge: the h list is empty");
  ProblemParams params;
  if (c.N) params.grid_points = *c.N;
  if (c.e) params.eccentricity = *c.e;
  const auto result = run_convergence(spec, require_problem(c, "exp"), c.tf.value_or(1.0), c.hs, params);
  csv::write_row(out, {"h", "err_avg", "err_u", "err_v", "nfev"});
  for (const auto& r : result.rows)
    csv::write_row(out, {csv::number(r.h), csv::number(r.err_avg), csv::number(r.err_u), csv::number(r.err_v),
                         csv::number(r.nfev)});
  const double nan = std::numeric_limits<double>::quiet_NaN();
  csv::write_row(out, {"slope", csv::number(result.avg.slope), csv::number(result.u ? result.u->slope : nan),
                       csv::number(result.v ? result.v->slope : nan), ""});
}

void cmd_wave(const ExperimentConfig& c, std::ostream& out, std::ostream& log) {
  no_tolerance(c, "wave");
  WaveConfig cfg;
  if (c.N) cfg.grid_points = *c.N;
  if (c.tf) cfg.tf = *c.tf;
  if (!(cfg.tf >= 0.0)) throw ConfigError("config field 'tf': must be non-negative");
  if (!is_power_of_two(cfg.grid_points))
    log << "note: N = " << cfg.grid_points << " is not a power of two; using the direct DFT\n";
  std::vector<std::string> methods = c.methods;
  if (methods.empty()) methods = {"RK2", "RK4", "S2", "BM4", "BM6", "2N-S6"};
  std::vector<std::size_t> steps;
  if (cfg.tf == 0.0) {
    steps = {0};
  } else if (!c.hs.empty()) {
    for (double h : c.hs) {
      if (!(h > 0.0)) throw ConfigError("config field 'h': must be positive");
      steps.push_back(std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(cfg.tf / h))));
    }
  } else {
    steps = default_wave_steps();
  }
  csv::write_row(out, {"method", "h", "nfev", "ERROR", "NORM_ERROR", "stable"});
  for (const auto& name : methods) {
    const auto spec = resolve_method(name);
    for (auto n : steps) {
      const auto row = run_wave_cell(spec, n, cfg);
      csv::write_row(out, {row.method, csv::number(row.h), csv::number(row.nfev), csv::number(row.error),
                           csv::number(row.norm_error), csv::boolean(row.stable)});
    }
  }
}

void cmd_kepler(const ExperimentConfig& c, std::ostream& out, std::ostream& log) {
  no_tolerance(c, "kepler");
  KeplerConfig cfg;
  if (c.e) cfg.eccentricity = *c.e;
  if (c.tf) cfg.tf = *c.tf;
  if (c.budget) cfg.budget = *c.budget;
  if (c.sample_stride) cfg.stride = *c.sample_stride;
  if (!(cfg.eccentricity >= 0.0 && cfg.eccentricity < 1.0)) throw ConfigError("config field 'e': must lie in [0, 1)");
  std::vector<std::string> methods = c.methods;
  if (methods.empty()) methods = {"RK2", "RK4", "BM4"};
  csv::write_row(out, {"method", "t", "energy_drift", "position_error"});
  for (const auto& name : methods) {
    const auto run = run_kepler(resolve_method(name), cfg);
    log << run.method << ": " << run.steps << " steps, h = " << csv::number(run.h) << ", nfev = " << run.nfev
        << (run.collided ? " (collision, run truncated)" : "") << '\n';
    for (const auto& s : run.samples)
      csv::write_row(out, {run.method, csv::number(s.t), csv::number(s.energy_drift), csv::number(s.position_error)});
  }
}

void cmd_integrate(const ExperimentConfig& c, std::ostream& out) {
  const auto spec = resolve_method(single_method(c, "integrate"));
  if (c.tol.has_value() == (c.hs.size() == 1) || c.hs.size() > 1)
    throw ConfigError("integrate: set exactly one of --h (single fixed step) or --tol (adaptive)");
  const auto problem = require_problem(c, "exp");
  if (method_is_complex(spec) || problem == "wave") integrate_impl<Complex>(c, spec, out);
  else integrate_impl<double>(c, spec, out);
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"D-splitting 2N-storage integrators: experiments and drivers", "dsplit"};
  app.set_help_flag("--help", "Print this help message and exit");
  app.require_subcommand(1);

  struct Flags {
    std::string config;
    std::string problem;
    std::vector<std::string> methods;
    std::vector<double> hs;
    double tol = 0.0;
    double t0 = 0.0;
    double tf = 0.0;
    std::size_t n = 0;
    double e = 0.0;
    std::uint64_t budget = 0;
    std::string out;
    int stride = 0;
  } f;

  struct Bound {
    CLI::App* cmd;
    CLI::Option *problem = nullptr, *method = nullptr, *h = nullptr, *tol = nullptr, *t0 = nullptr, *tf = nullptr,
                *n = nullptr, *e = nullptr, *budget = nullptr, *out = nullptr, *stride = nullptr;
  };
  std::vector<Bound> bound;
  auto add_common = [&](CLI::App* cmd) {
    Bound b{cmd};
    cmd->add_option("--config", f.config, "JSON config file (flags override its fields)")->check(CLI::ExistingFile);
    b.method = cmd->add_option("--method", f.methods, "Bundled method name or scheme file")->delimiter(',');
    b.h = cmd->add_option("--h", f.hs, "Fixed step size(s)")->delimiter(',');
    b.tf = cmd->add_option("--tf", f.tf, "Final time");
    b.out = cmd->add_option("--out", f.out, "Output CSV path (default: stdout)");
    bound.push_back(b);
    return &bound.back();
  };

  auto* list = app.add_subcommand("list-methods", "List bundled schemes and tableaux");
  auto* converge = app.add_subcommand("converge", "Fixed-step convergence study with fitted slopes");
  auto* wave = app.add_subcommand("wave", "Spectral advection benchmark (ERROR / NORM_ERROR vs evaluations)");
  auto* kepler = app.add_subcommand("kepler", "Kepler energy drift at a matched evaluation budget");
  auto* integrate = app.add_subcommand("integrate", "Fixed-step or adaptive integration trace");

  bound.reserve(8);
  {
    auto* b = add_common(list);
    (void)b;
  }
  {
    auto* b = add_common(converge);
    b->problem = converge->add_option("--problem", f.problem, "Problem name");
    b->n = converge->add_option("--n", f.n, "Grid points (wave)");
    b->e = converge->add_option("--e", f.e, "Eccentricity (kepler)");
  }
  {
    auto* b = add_common(wave);
    b->n = wave->add_option("--n", f.n, "Grid points");
  }
  {
    auto* b = add_common(kepler);
    b->e = kepler->add_option("--e", f.e, "Eccentricity");
    b->budget = kepler->add_option("--budget", f.budget, "Vector-field evaluations per method");
    b->stride = kepler->add_option("--stride", f.stride, "Sample every STRIDE steps");
  }
  {
    auto* b = add_common(integrate);
    b->problem = integrate->add_option("--problem", f.problem, "Problem name");
    b->tol = integrate->add_option("--tol", f.tol, "Adaptive tolerance");
    b->n = integrate->add_option("--n", f.n, "Grid points (wave)");
    b->e = integrate->add_option("--e", f.e, "Eccentricity (kepler)");
    b->stride = integrate->add_option("--stride", f.stride, "Sample every STRIDE accepted steps");
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e, out, err);
  }

  try {
    if (list->parsed()) {
      cmd_list_methods(out);
      return 0;
    }
    const Bound* b = nullptr;
    for (const auto& x : bound)
      if (x.cmd->parsed()) b = &x;

    ExperimentConfig c = f.config.empty() ? ExperimentConfig{} : load_config(f.config);
    auto given = [](const CLI::Option* o) { return o != nullptr && o->count() > 0; };
    if (given(b->problem)) c.problem = f.problem;
    if (given(b->method)) c.methods = f.methods;
    if (given(b->h)) c.hs = f.hs;
    if (given(b->tol)) c.tol = f.tol;
    if (given(b->tf)) c.tf = f.tf;
    if (given(b->n)) c.N = f.n;
    if (given(b->e)) c.e = f.e;
    if (given(b->budget)) c.budget = f.budget;
    if (given(b->out)) c.output = f.out;
    if (given(b->stride)) c.sample_stride = f.stride;
    check_references(c);

    std::ofstream file;
    std::ostringstream buffer;
    std::ostream& sink = c.output.empty() ? out : static_cast<std::ostream&>(buffer);
    if (converge->parsed()) cmd_converge(c, sink);
    else if (wave->parsed()) cmd_wave(c, sink, err);
    else if (kepler->parsed()) cmd_kepler(c, sink, err);
    else if (integrate->parsed()) cmd_integrate(c, sink);
    if (!c.output.empty()) {
      file.open(c.output);
      if (!file) throw ConfigError("cannot write output file '" + c.output + "'");
      file << buffer.str();
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}

}  // namespace dsplit::cli
