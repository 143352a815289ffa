#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bohm/error.hpp"
#include "bohm/experiment.hpp"

namespace bohm {

using json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail(const std::string& field, const std::string& what) {
  throw ValidationError(field + ": " + what);
}

// Rejects keys outside `allowed` so that typos do not silently fall back to defaults.
void check_keys(const json& j, const std::string& field, std::initializer_list<std::string_view> allowed) {
  if (!j.is_object()) fail(field, "expected an object");
  for (const auto& [key, _] : j.items()) {
    bool ok = false;
    for (auto a : allowed) ok = ok || a == key;
    if (!ok) fail(field, "unknown key '" + key + "'");
  }
}

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::optional<double> parse_plain(std::string_view s) {
  s = trim(s);
  double v = 0.0;
  auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size()) return std::nullopt;
  return v;
}

// Numbers or expressions of the form [-][k][*]pi[/d], e.g. "pi/3", "-2pi/7", "3*pi/4".
std::optional<double> parse_expression(std::string_view s) {
  s = trim(s);
  if (auto v = parse_plain(s)) return v;
  const auto pos = s.find("pi");
  if (pos == std::string_view::npos) {
    const auto slash = s.find('/');
    if (slash == std::string_view::npos) return std::nullopt;
    auto n = parse_plain(s.substr(0, slash));
    auto d = parse_plain(s.substr(slash + 1));
    if (!n || !d || *d == 0.0) return std::nullopt;
    return *n / *d;
  }
  double sign = 1.0;
  std::string_view head = trim(s.substr(0, pos));
  if (!head.empty() && (head.front() == '-' || head.front() == '+')) {
    if (head.front() == '-') sign = -1.0;
    head = trim(head.substr(1));
  }
  if (!head.empty() && head.back() == '*') head = trim(head.substr(0, head.size() - 1));
  double k = 1.0;
  if (!head.empty()) {
    auto v = parse_plain(head);
    if (!v) return std::nullopt;
    k = *v;
  }
  std::string_view tail = trim(s.substr(pos + 2));
  double d = 1.0;
  if (!tail.empty()) {
    if (tail.front() != '/') return std::nullopt;
    auto v = parse_plain(tail.substr(1));
    if (!v || *v == 0.0) return std::nullopt;
    d = *v;
  }
  return sign * k * std::numbers::pi / d;
}

double get_number(const json& j, const std::string& field) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    if (auto v = parse_expression(j.get<std::string>())) return *v;
    fail(field, "cannot parse '" + j.get<std::string>() + "' as a number");
  }
  fail(field, "expected a number");
}

long get_integer(const json& j, const std::string& field) {
  if (j.is_number_integer()) return j.get<long>();
  if (j.is_number_float()) {
    const double v = j.get<double>();
    if (std::floor(v) == v && std::abs(v) < 9e15) return static_cast<long>(v);
  }
  fail(field, "expected an integer");
}

std::vector<double> get_numbers(const json& j, const std::string& field) {
  if (!j.is_array()) fail(field, "expected an array");
  std::vector<double> out;
  for (std::size_t i = 0; i < j.size(); ++i) out.push_back(get_number(j[i], field + "[" + std::to_string(i) + "]"));
  return out;
}

template <class F>
void maybe(const json& j, const char* key, F&& f) {
  if (auto it = j.find(key); it != j.end()) f(*it);
}

BasisState parse_factor(const json& j, const std::string& field) {
  check_keys(j, field, {"family", "qn", "nlm"});
  if (!j.contains("family") || !j["family"].is_string()) fail(field, "missing family");
  const auto family = parse_family(j["family"].get<std::string>());
  if (!family) fail(field, "unknown family '" + j["family"].get<std::string>() + "'");
  std::vector<int> qn;
  if (j.contains("nlm")) {
    if (*family != BasisFamily::Harm3DSph) fail(field, "nlm is only defined for Harm3DSph");
    if (j.contains("qn")) fail(field, "give either qn or nlm, not both");
    const json& v = j["nlm"];
    if (!v.is_array() || v.size() != 3) fail(field, "nlm needs three integers");
    const long n = get_integer(v[0], field + ".nlm[0]");
    const long l = get_integer(v[1], field + ".nlm[1]");
    const long m = get_integer(v[2], field + ".nlm[2]");
    if (l < 0 || n < l) fail(field, "nlm requires 0 <= l <= n");
    if ((n - l) % 2 != 0) fail(field, "nlm parity mismatch, n - l must be even (n=" + std::to_string(n) +
                                          ", l=" + std::to_string(l) + ")");
    qn = {static_cast<int>((n - l) / 2), static_cast<int>(l), static_cast<int>(m)};
  } else {
    if (!j.contains("qn") || !j["qn"].is_array()) fail(field, "missing qn");
    for (std::size_t i = 0; i < j["qn"].size(); ++i)
      qn.push_back(static_cast<int>(get_integer(j["qn"][i], field + ".qn[" + std::to_string(i) + "]")));
  }
  try {
    return BasisState(*family, qn);
  } catch (const ValidationError& e) {
    fail(field, e.what());
  }
}

json factor_json(const BasisState& s) {
  json j;
  j["family"] = std::string(to_string(s.family()));
  j["qn"] = std::vector<int>(s.quantum_numbers().begin(), s.quantum_numbers().end());
  return j;
}

cdouble parse_coefficient(const json& j, const std::string& field) {
  if (j.is_number()) return {j.get<double>(), 0.0};
  if (!j.is_object()) fail(field, "expected {abs, phase} or {re, im}");
  if (j.contains("abs") || j.contains("phase")) {
    check_keys(j, field, {"abs", "phase"});
    const double a = j.contains("abs") ? get_number(j["abs"], field + ".abs") : 1.0;
    const double p = j.contains("phase") ? get_number(j["phase"], field + ".phase") : 0.0;
    if (a < 0.0) fail(field + ".abs", "must be non-negative");
    return std::polar(a, p);
  }
  check_keys(j, field, {"re", "im"});
  const double re = j.contains("re") ? get_number(j["re"], field + ".re") : 0.0;
  const double im = j.contains("im") ? get_number(j["im"], field + ".im") : 0.0;
  return {re, im};
}

// x0 values for one particle converted from the chart to Cartesian.
std::vector<double> to_cartesian(const std::string& chart, const std::vector<double>& v, const std::string& field) {
  if (chart == "cartesian") return v;
  if (chart == "polar") {
    if (v.size() % 2 != 0) fail(field, "polar values come in (r, phi) pairs");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); i += 2) {
      out.push_back(v[i] * std::cos(v[i + 1]));
      out.push_back(v[i] * std::sin(v[i + 1]));
    }
    return out;
  }
  if (chart == "spherical") {
    if (v.size() % 3 != 0) fail(field, "spherical values come in (r, theta, phi) triples");
    std::vector<double> out;
    for (std::size_t i = 0; i < v.size(); i += 3) {
      const double r = v[i], th = v[i + 1], ph = v[i + 2];
      out.push_back(r * std::sin(th) * std::cos(ph));
      out.push_back(r * std::sin(th) * std::sin(ph));
      out.push_back(r * std::cos(th));
    }
    return out;
  }
  fail(field + ".chart", "expected cartesian, polar or spherical");
}

std::vector<double> parse_grid(const json& j, const std::string& field) {
  if (j.is_array()) return get_numbers(j, field);
  check_keys(j, field, {"start", "stop", "count"});
  for (auto k : {"start", "stop", "count"})
    if (!j.contains(k)) fail(field, std::string("missing ") + k);
  const double a = get_number(j["start"], field + ".start");
  const double b = get_number(j["stop"], field + ".stop");
  const long n = get_integer(j["count"], field + ".count");
  if (n < 1) fail(field + ".count", "must be at least 1");
  std::vector<double> g(static_cast<std::size_t>(n));
  for (long i = 0; i < n; ++i) g[i] = n == 1 ? a : a + (b - a) * static_cast<double>(i) / static_cast<double>(n - 1);
  if (n > 1) g.back() = b;
  return g;
}

std::string energy_name(EnergyCheck e) {
  switch (e) {
    case EnergyCheck::None: return "none";
    case EnergyCheck::Analytic: return "analytic";
    case EnergyCheck::FiniteDifference: return "finite-difference";
  }
  return "none";
}

}  // namespace

std::string_view to_string(Command c) {
  switch (c) {
    case Command::Trajectory: return "trajectory";
    case Command::Lyapunov: return "lyapunov";
    case Command::Ensemble: return "ensemble";
    case Command::Poincare: return "poincare";
    case Command::Measures: return "measures";
    case Command::Sweep: return "sweep";
    case Command::Benchmark: return "benchmark";
  }
  return "unknown";
}

std::optional<Command> parse_command(std::string_view name) {
  for (auto c : {Command::Trajectory, Command::Lyapunov, Command::Ensemble, Command::Poincare, Command::Measures,
                 Command::Sweep, Command::Benchmark})
    if (to_string(c) == name) return c;
  return std::nullopt;
}

ExperimentConfig parse_config(std::string_view text) {
  json root;
  try {
    root = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ValidationError(std::string("config: malformed JSON: ") + e.what());
  }
  check_keys(root, "config", {"name", "command", "state", "x0", "lyapunov", "integrator", "sampler", "trajectory",
                              "poincare", "qubits", "sweep", "benchmark", "seed", "output", "comment"});
  ExperimentConfig c;

  maybe(root, "name", [&](const json& j) {
    if (!j.is_string()) fail("name", "expected a string");
    c.name = j.get<std::string>();
  });
  if (!root.contains("command") || !root["command"].is_string()) fail("command", "missing");
  if (auto cmd = parse_command(root["command"].get<std::string>())) {
    c.command = *cmd;
  } else {
    fail("command", "unknown command '" + root["command"].get<std::string>() + "'");
  }

  maybe(root, "state", [&](const json& s) {
    check_keys(s, "state", {"terms"});
    if (!s.contains("terms") || !s["terms"].is_array()) fail("state.terms", "expected an array");
    for (std::size_t t = 0; t < s["terms"].size(); ++t) {
      const std::string field = "state.terms[" + std::to_string(t) + "]";
      const json& term = s["terms"][t];
      check_keys(term, field, {"coefficient", "factors"});
      ProductTerm pt;
      if (term.contains("coefficient")) pt.coefficient = parse_coefficient(term["coefficient"], field + ".coefficient");
      if (!term.contains("factors") || !term["factors"].is_array() || term["factors"].empty())
        fail(field + ".factors", "expected a nonempty array");
      for (std::size_t k = 0; k < term["factors"].size(); ++k)
        pt.factors.push_back(parse_factor(term["factors"][k], field + ".factors[" + std::to_string(k) + "]"));
      c.terms.push_back(std::move(pt));
    }
  });

  maybe(root, "x0", [&](const json& j) {
    if (j.is_array()) {
      c.x0 = get_numbers(j, "x0");
      return;
    }
    check_keys(j, "x0", {"chart", "values"});
    const std::string chart = j.contains("chart") && j["chart"].is_string() ? j["chart"].get<std::string>() : "cartesian";
    if (!j.contains("values")) fail("x0.values", "missing");
    c.x0 = to_cartesian(chart, get_numbers(j["values"], "x0.values"), "x0");
  });

  maybe(root, "lyapunov", [&](const json& j) {
    check_keys(j, "lyapunov", {"d0", "dt", "n_steps", "e0"});
    maybe(j, "d0", [&](const json& v) { c.lyapunov.d0 = get_number(v, "lyapunov.d0"); });
    maybe(j, "dt", [&](const json& v) { c.lyapunov.dt = get_number(v, "lyapunov.dt"); });
    maybe(j, "n_steps", [&](const json& v) { c.lyapunov.n_steps = get_integer(v, "lyapunov.n_steps"); });
    maybe(j, "e0", [&](const json& v) {
      if (v.is_string() && v.get<std::string>() == "random") return;
      auto e = get_numbers(v, "lyapunov.e0");
      double n2 = 0.0;
      for (double x : e) n2 += x * x;
      if (!(n2 > 0.0)) fail("lyapunov.e0", "must be nonzero");
      // Already-unit vectors are kept bit for bit so serialization round-trips.
      if (std::abs(std::sqrt(n2) - 1.0) > 1e-12)
        for (double& x : e) x /= std::sqrt(n2);
      c.lyapunov.e0 = std::move(e);
    });
  });

  maybe(root, "integrator", [&](const json& j) {
    check_keys(j, "integrator", {"rel_tol", "abs_tol", "max_step", "min_abs2", "step_budget", "masses"});
    auto& p = c.integrator;
    maybe(j, "rel_tol", [&](const json& v) { p.rel_tol = get_number(v, "integrator.rel_tol"); });
    maybe(j, "abs_tol", [&](const json& v) { p.abs_tol = get_number(v, "integrator.abs_tol"); });
    maybe(j, "max_step", [&](const json& v) { p.max_step = get_number(v, "integrator.max_step"); });
    maybe(j, "min_abs2", [&](const json& v) { p.min_abs2 = get_number(v, "integrator.min_abs2"); });
    maybe(j, "step_budget", [&](const json& v) { p.step_budget = get_number(v, "integrator.step_budget"); });
    maybe(j, "masses", [&](const json& v) { p.masses = get_numbers(v, "integrator.masses"); });
  });

  maybe(root, "sampler", [&](const json& j) {
    check_keys(j, "sampler", {"edge", "center", "count"});
    maybe(j, "edge", [&](const json& v) { c.sampler.edge = get_number(v, "sampler.edge"); });
    maybe(j, "center", [&](const json& v) { c.sampler.center = get_numbers(v, "sampler.center"); });
    maybe(j, "count", [&](const json& v) {
      const long n = get_integer(v, "sampler.count");
      if (n < 1) fail("sampler.count", "must be at least 1");
      c.samples = static_cast<std::size_t>(n);
    });
  });

  maybe(root, "trajectory", [&](const json& j) {
    check_keys(j, "trajectory", {"t_end", "sample_every", "energy"});
    maybe(j, "t_end", [&](const json& v) { c.trajectory.t_end = get_number(v, "trajectory.t_end"); });
    maybe(j, "sample_every", [&](const json& v) { c.trajectory.sample_every = get_number(v, "trajectory.sample_every"); });
    maybe(j, "energy", [&](const json& v) {
      const std::string e = v.is_string() ? v.get<std::string>() : "";
      if (e == "none") c.trajectory.energy = EnergyCheck::None;
      else if (e == "analytic") c.trajectory.energy = EnergyCheck::Analytic;
      else if (e == "finite-difference") c.trajectory.energy = EnergyCheck::FiniteDifference;
      else fail("trajectory.energy", "expected none, analytic or finite-difference");
    });
  });

  maybe(root, "poincare", [&](const json& j) {
    check_keys(j, "poincare", {"coordinate", "level", "t_max"});
    maybe(j, "coordinate", [&](const json& v) { c.section.plane.coordinate = static_cast<int>(get_integer(v, "poincare.coordinate")); });
    maybe(j, "level", [&](const json& v) { c.section.plane.level = get_number(v, "poincare.level"); });
    maybe(j, "t_max", [&](const json& v) { c.section.t_max = get_number(v, "poincare.t_max"); });
  });

  maybe(root, "qubits", [&](const json& j) {
    check_keys(j, "qubits", {"basis0", "basis1"});
    if (!j.contains("basis0") || !j.contains("basis1")) fail("qubits", "needs basis0 and basis1");
    c.qubits = QubitEncoding{parse_factor(j["basis0"], "qubits.basis0"), parse_factor(j["basis1"], "qubits.basis1")};
  });

  maybe(root, "sweep", [&](const json& j) {
    check_keys(j, "sweep", {"generator", "parameter", "grid", "fixed", "measures_only"});
    auto& s = c.sweep;
    if (!j.contains("generator") || !j["generator"].is_string()) fail("sweep.generator", "missing");
    s.generator = j["generator"].get<std::string>();
    if (!j.contains("parameter") || !j["parameter"].is_string()) fail("sweep.parameter", "missing");
    s.parameter = j["parameter"].get<std::string>();
    if (!j.contains("grid")) fail("sweep.grid", "missing");
    s.grid = parse_grid(j["grid"], "sweep.grid");
    maybe(j, "fixed", [&](const json& f) {
      check_keys(f, "sweep.fixed", {"alpha", "beta"});
      maybe(f, "alpha", [&](const json& v) { s.alpha = get_number(v, "sweep.fixed.alpha"); });
      maybe(f, "beta", [&](const json& v) { s.beta = get_number(v, "sweep.fixed.beta"); });
    });
    maybe(j, "measures_only", [&](const json& v) {
      if (!v.is_boolean()) fail("sweep.measures_only", "expected a boolean");
      s.measures_only = v.get<bool>();
    });
  });

  maybe(root, "benchmark", [&](const json& j) {
    check_keys(j, "benchmark", {"system", "energy", "start"});
    maybe(j, "system", [&](const json& v) {
      if (!v.is_string()) fail("benchmark.system", "expected a string");
      c.benchmark.system = v.get<std::string>();
    });
    maybe(j, "energy", [&](const json& v) { c.benchmark.energy = get_number(v, "benchmark.energy"); });
    maybe(j, "start", [&](const json& v) { c.benchmark.start = get_numbers(v, "benchmark.start"); });
  });

  maybe(root, "seed", [&](const json& v) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<long long>() >= 0))
      fail("seed", "expected a non-negative integer");
    c.seed = v.get<std::uint64_t>();
  });
  maybe(root, "output", [&](const json& v) {
    if (!v.is_string()) fail("output", "expected a string");
    c.output = v.get<std::string>();
  });

  validate(c);
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("config: cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string serialize_config(const ExperimentConfig& c) {
  json root;
  root["name"] = c.name;
  root["command"] = std::string(to_string(c.command));
  if (!c.terms.empty()) {
    json terms = json::array();
    for (const auto& t : c.terms) {
      json jt;
      jt["coefficient"] = {{"re", t.coefficient.real()}, {"im", t.coefficient.imag()}};
      json fs = json::array();
      for (const auto& f : t.factors) fs.push_back(factor_json(f));
      jt["factors"] = fs;
      terms.push_back(jt);
    }
    root["state"]["terms"] = terms;
  }
  if (!c.x0.empty()) root["x0"] = {{"chart", "cartesian"}, {"values", c.x0}};
  root["lyapunov"] = {{"d0", c.lyapunov.d0}, {"dt", c.lyapunov.dt}, {"n_steps", c.lyapunov.n_steps}};
  if (c.lyapunov.e0.empty()) root["lyapunov"]["e0"] = "random";
  else root["lyapunov"]["e0"] = c.lyapunov.e0;
  const auto& p = c.integrator;
  root["integrator"] = {{"rel_tol", p.rel_tol},   {"abs_tol", p.abs_tol},         {"max_step", p.max_step},
                        {"min_abs2", p.min_abs2}, {"step_budget", p.step_budget}, {"masses", p.masses}};
  root["sampler"] = {{"edge", c.sampler.edge}, {"center", c.sampler.center}, {"count", c.samples}};
  root["trajectory"] = {{"t_end", c.trajectory.t_end},
                        {"sample_every", c.trajectory.sample_every},
                        {"energy", energy_name(c.trajectory.energy)}};
  root["poincare"] = {{"coordinate", c.section.plane.coordinate},
                      {"level", c.section.plane.level},
                      {"t_max", c.section.t_max}};
  if (c.qubits) root["qubits"] = {{"basis0", factor_json(c.qubits->basis0)}, {"basis1", factor_json(c.qubits->basis1)}};
  if (c.command == Command::Sweep) {
    root["sweep"] = {{"generator", c.sweep.generator},
                     {"parameter", c.sweep.parameter},
                     {"grid", c.sweep.grid},
                     {"fixed", {{"alpha", c.sweep.alpha}, {"beta", c.sweep.beta}}},
                     {"measures_only", c.sweep.measures_only}};
  }
  if (c.command == Command::Benchmark) {
    root["benchmark"] = {{"system", c.benchmark.system}, {"energy", c.benchmark.energy}, {"start", c.benchmark.start}};
  }
  if (c.seed) root["seed"] = *c.seed;
  root["output"] = c.output;
  return root.dump(2) + "\n";
}

namespace {

bool needs_state(Command c) {
  return c == Command::Trajectory || c == Command::Lyapunov || c == Command::Ensemble || c == Command::Poincare ||
         c == Command::Measures;
}

bool needs_x0(Command c) { return c == Command::Trajectory || c == Command::Lyapunov || c == Command::Poincare; }

}  // namespace

void validate(const ExperimentConfig& c) {
  try {
    c.integrator.validate();
  } catch (const ValidationError& e) {
    fail("integrator", e.what());
  }

  std::optional<WaveFunction> wf;
  if (needs_state(c.command)) {
    if (c.terms.empty()) fail("state.terms", "required for command " + std::string(to_string(c.command)));
    try {
      wf = build(c.terms);
    } catch (const ValidationError& e) {
      fail("state.terms", e.what());
    }
  } else if (!c.terms.empty()) {
    fail("state", "not used by command " + std::string(to_string(c.command)));
  }

  const std::size_t n = wf ? static_cast<std::size_t>(wf->configuration_size()) : 0;
  if (wf && !c.integrator.masses.empty() && c.integrator.masses.size() != static_cast<std::size_t>(wf->particles()))
    fail("integrator.masses", "needs one mass per particle");

  if (needs_x0(c.command)) {
    if (c.x0.size() != n)
      fail("x0", "expected " + std::to_string(n) + " Cartesian coordinates, got " + std::to_string(c.x0.size()));
    try {
      const auto e = evaluate(*wf, Configuration{c.x0, 0.0});
      if (!(e.abs2 > 0.0)) fail("x0", "lies on a node of the wave function");
    } catch (const DomainError& e) {
      fail("x0", std::string("outside the domain: ") + e.what());
    }
  }

  const bool lyapunov_used = c.command == Command::Lyapunov || c.command == Command::Ensemble ||
                             c.command == Command::Benchmark ||
                             (c.command == Command::Sweep && !c.sweep.measures_only);
  if (lyapunov_used) {
    const std::size_t dim = c.command == Command::Benchmark ? 4 : n;
    if (dim > 0) {
      try {
        c.lyapunov.validate(dim);
      } catch (const ValidationError& e) {
        fail("lyapunov", e.what());
      }
    } else if (!(c.lyapunov.d0 > 0.0 && c.lyapunov.dt > 0.0 && c.lyapunov.n_steps >= 1)) {
      fail("lyapunov", "d0 and dt must be positive and n_steps >= 1");
    }
  }

  const bool sampled = c.command == Command::Ensemble || (c.command == Command::Sweep && !c.sweep.measures_only);
  if (sampled) {
    if (!(c.sampler.edge > 0.0)) fail("sampler.edge", "must be positive");
    if (n > 0 && c.sampler.center.size() > 1 && c.sampler.center.size() != n)
      fail("sampler.center", "needs 0, 1 or " + std::to_string(n) + " entries");
    if (c.samples < 1) fail("sampler.count", "must be at least 1");
  }

  const bool stochastic = sampled || (lyapunov_used && c.lyapunov.e0.empty());
  if (stochastic && !c.seed) fail("seed", "required for command " + std::string(to_string(c.command)));

  switch (c.command) {
    case Command::Trajectory:
      if (!(c.trajectory.t_end != 0.0 && std::isfinite(c.trajectory.t_end))) fail("trajectory.t_end", "must be nonzero");
      if (!(c.trajectory.sample_every > 0.0)) fail("trajectory.sample_every", "must be positive");
      if (c.trajectory.energy == EnergyCheck::Analytic && !wf->stationary())
        fail("trajectory.energy", "the analytic path needs a stationary state");
      break;
    case Command::Poincare:
      if (c.section.plane.coordinate < 0 || static_cast<std::size_t>(c.section.plane.coordinate) >= n)
        fail("poincare.coordinate", "out of range");
      if (!(c.section.t_max > 0.0)) fail("poincare.t_max", "must be positive");
      break;
    case Command::Measures:
      if (c.qubits && wf->particles() != 3) fail("qubits", "the qubit encoding needs three particles");
      break;
    case Command::Sweep: {
      if (!known_generator(c.sweep.generator)) fail("sweep.generator", "unknown generator '" + c.sweep.generator + "'");
      const auto params = generator_parameters(c.sweep.generator);
      if (std::find(params.begin(), params.end(), c.sweep.parameter) == params.end())
        fail("sweep.parameter", "generator " + c.sweep.generator + " has no parameter '" + c.sweep.parameter + "'");
      if (c.sweep.grid.empty()) fail("sweep.grid", "must not be empty");
      for (std::size_t i = 0; i < c.sweep.grid.size(); ++i) {
        if (!std::isfinite(c.sweep.grid[i])) fail("sweep.grid", "entries must be finite");
        if (i > 0 && !(c.sweep.grid[i] > c.sweep.grid[i - 1])) fail("sweep.grid", "must be strictly increasing");
      }
      // Builds the first grid point to catch out-of-range parameters early.
      try {
        (void)generate(c.sweep, c.sweep.grid.front());
        (void)generate(c.sweep, c.sweep.grid.back());
      } catch (const ValidationError& e) {
        fail("sweep.grid", e.what());
      }
      break;
    }
    case Command::Benchmark:
      if (c.benchmark.system != "henon-heiles") fail("benchmark.system", "only henon-heiles is available");
      if (!(c.benchmark.energy > 0.0 && c.benchmark.energy < 1.0 / 6.0))
        fail("benchmark.energy", "must lie in (0, 1/6) for bounded orbits");
      if (c.benchmark.start.size() != 3) fail("benchmark.start", "expected (x, y, py)");
      try {
        (void)henon_heiles_point(c.benchmark.energy, c.benchmark.start[0], c.benchmark.start[1], c.benchmark.start[2]);
      } catch (const ValidationError& e) {
        fail("benchmark.start", e.what());
      }
      break;
    default:
      break;
  }
}

}  // namespace bohm
