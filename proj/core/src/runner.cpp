#include <chrono>
#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "bohm/error.hpp"
#include "bohm/experiment.hpp"
#include "bohm/regularity.hpp"

#ifndef BOHM_VERSION
#define BOHM_VERSION "0.0.0"
#endif

namespace bohm {

using json = nlohmann::ordered_json;
namespace fs = std::filesystem;

std::string fnv1a_hex(std::string_view data) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016" PRIx64, h);
  return buf;
}

std::string_view library_version() { return BOHM_VERSION; }

namespace {

std::string num(double v) {
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> coordinate_names(int particles, int dimension) {
  static const char* axes[] = {"x", "y", "z"};
  std::vector<std::string> names;
  for (int p = 1; p <= particles; ++p)
    for (int d = 0; d < dimension; ++d) names.push_back(axes[d] + std::to_string(p));
  return names;
}

class Writer {
 public:
  explicit Writer(fs::path dir) : dir_(std::move(dir)) { fs::create_directories(dir_); }

  // Atomic replace; a later write of the same file updates its manifest entry.
  void write(const std::string& name, const std::string& content) {
    const fs::path target = dir_ / name;
    const fs::path tmp = dir_ / (name + ".tmp");
    {
      std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
      if (!out) throw std::runtime_error("cannot write " + tmp.string());
      out << content;
      if (!out.flush()) throw std::runtime_error("cannot write " + tmp.string());
    }
    fs::rename(tmp, target);
    OutputFile f{name, content.size(), fnv1a_hex(content)};
    for (auto& existing : files_)
      if (existing.name == name) {
        existing = f;
        return;
      }
    files_.push_back(f);
  }

  const std::vector<OutputFile>& files() const { return files_; }

 private:
  fs::path dir_;
  std::vector<OutputFile> files_;
};

json regularity_json(const WaveFunction& wf, const Trajectory* traj) {
  const StructureReport rep = detect_structure(wf);
  json j;
  j["independent_count"] = rep.independent_count;
  json matches = json::array();
  for (const auto& m : rep.matches) {
    json jm;
    jm["kind"] = std::string(to_string(m.kind));
    json coords = json::array();
    for (const auto& c : m.coordinates) coords.push_back(to_string(c));
    jm["coordinates"] = coords;
    json factors = json::array();
    for (const auto& pair : m.factors) factors.push_back({to_string(pair[0]), to_string(pair[1])});
    jm["factors"] = factors;
    if (traj) {
      const ResidualResult r = com_residual(wf, *traj, m);
      jm["residual"] = r.residual;
      jm["segments"] = r.segments;
      jm["skipped_segments"] = r.skipped;
    }
    matches.push_back(jm);
  }
  j["matches"] = matches;
  return j;
}

std::string lyapunov_csv(const LyapunovEstimate& est) {
  std::string s = "T,h\n";
  for (const auto& [t, h] : est.h_series) s += num(t) + "," + num(h) + "\n";
  return s;
}

json estimate_json(const LyapunovEstimate& est) {
  return {{"final_h", est.final_h}, {"status", std::string(to_string(est.status))}, {"warnings", est.warnings}};
}

struct Measures {
  double pr = NAN, q = NAN, eg = NAN, tau3 = NAN;
};

Measures compute_measures(const WaveFunction& wf, const std::optional<QubitEncoding>& qubits) {
  Measures m;
  const WaveFunction unit = normalize(wf);
  m.pr = participation_ratio(coefficient_vector(unit));
  if (qubits) {
    const ThreeQubitState s = qubit_coefficients(unit, qubits->basis0, qubits->basis1).normalized_copy();
    m.q = meyer_wallach(s);
    m.eg = geometric_entanglement(s);
    m.tau3 = three_tangle(s);
  }
  return m;
}

struct Context {
  const ExperimentConfig& cfg;
  Writer& out;
  json& summary;
  RunRecord& record;
  LyapunovParams lp;
  unsigned jobs;
};

void run_trajectory(Context& c, const WaveFunction& wf) {
  const auto& spec = c.cfg.trajectory;
  Trajectory tr = integrate(wf, Configuration{c.cfg.x0, 0.0}, 0.0, spec.t_end, c.cfg.integrator, spec.sample_every);
  const auto names = coordinate_names(wf.particles(), wf.dimension());
  std::string csv = "t";
  for (const auto& n : names) csv += "," + n;
  csv += "\n";
  for (const auto& s : tr.samples) {
    csv += num(s.t);
    for (double x : s.x) csv += "," + num(x);
    csv += "\n";
  }
  c.out.write("trajectory.csv", csv);
  c.record.statuses.push_back("trajectory: " + std::string(to_string(tr.status)));
  c.record.ok = tr.status == TrajectoryStatus::Completed;
  c.summary["status"] = std::string(to_string(tr.status));
  c.summary["samples"] = tr.samples.size();
  c.summary["accepted_steps"] = tr.accepted_steps;
  c.summary["rejected_steps"] = tr.rejected_steps;

  if (spec.energy != EnergyCheck::None) {
    attach_diagnostics(wf, tr, spec.energy == EnergyCheck::Analytic ? QuantumPotentialMethod::Analytic
                                                                    : QuantumPotentialMethod::FiniteDifference);
    std::string e = "t,kinetic,potential,quantum,total,abs2\n";
    double drift = 0.0;
    for (std::size_t i = 0; i < tr.samples.size(); ++i) {
      const auto& d = tr.diagnostics[i];
      e += num(tr.samples[i].t) + "," + num(d.energy.kinetic) + "," + num(d.energy.potential) + "," +
           num(d.energy.quantum) + "," + num(d.energy.total) + "," + num(d.abs2) + "\n";
      if (wf.stationary()) drift = std::max(drift, std::abs(d.energy.total - *wf.stationary_energy()));
    }
    c.out.write("energy.csv", e);
    if (wf.stationary()) c.summary["max_energy_deviation"] = drift;
  }
  c.summary["__regularity"] = regularity_json(wf, &tr);
}

void run_lyapunov(Context& c, const WaveFunction& wf) {
  const LyapunovEstimate est = lyapunov(wf, Configuration{c.cfg.x0, 0.0}, c.lp, c.cfg.integrator);
  c.out.write("lyapunov.csv", lyapunov_csv(est));
  c.record.statuses.push_back("lyapunov: " + std::string(to_string(est.status)));
  c.record.ok = !excluded(est.status);
  c.summary.update(estimate_json(est));
}

void run_ensemble(Context& c, const WaveFunction& wf) {
  const EnsembleResult res = average_lyapunov(wf, c.cfg.sampler, c.cfg.samples, c.lp, c.cfg.integrator, c.jobs);
  const auto names = coordinate_names(wf.particles(), wf.dimension());
  std::string csv = "sample";
  for (const auto& n : names) csv += "," + n;
  csv += ",final_h,status\n";
  for (const auto& s : res.per_sample) {
    csv += std::to_string(s.index);
    for (double x : s.x0) csv += "," + num(x);
    csv += "," + num(s.estimate.final_h) + "," + std::string(to_string(s.estimate.status)) + "\n";
  }
  c.out.write("ensemble.csv", csv);
  c.record.statuses.push_back("ensemble: " + std::to_string(res.included) + " included, " +
                              std::to_string(res.excluded) + " excluded");
  c.summary["mean_h"] = res.mean_h;
  c.summary["std_h"] = res.std_h;
  c.summary["included"] = res.included;
  c.summary["excluded"] = res.excluded;
}

void run_poincare(Context& c, const WaveFunction& wf) {
  const auto pts = poincare_section(wf, Configuration{c.cfg.x0, 0.0}, c.cfg.section.plane, c.cfg.section.t_max,
                                    c.cfg.integrator);
  const auto names = coordinate_names(wf.particles(), wf.dimension());
  std::string csv = "t";
  for (const auto& n : names) csv += "," + n;
  csv += ",direction\n";
  for (const auto& p : pts) {
    csv += num(p.t);
    for (double x : p.x) csv += "," + num(x);
    csv += "," + std::to_string(p.direction) + "\n";
  }
  c.out.write("section.csv", csv);
  c.record.statuses.push_back("poincare: " + std::to_string(pts.size()) + " crossings");
  c.summary["crossings"] = pts.size();
}

std::string measures_row(const Measures& m, bool qubits) {
  std::string s = num(m.pr);
  if (qubits) s += "," + num(m.q) + "," + num(m.eg) + "," + num(m.tau3);
  return s;
}

void run_measures(Context& c, const WaveFunction& wf) {
  const Measures m = compute_measures(wf, c.cfg.qubits);
  const bool q = c.cfg.qubits.has_value();
  c.out.write("measures.csv", std::string(q ? "PR,Q,EG,tau3\n" : "PR\n") + measures_row(m, q) + "\n");
  c.record.statuses.push_back("measures: ok");
  c.summary["PR"] = m.pr;
  if (q) {
    c.summary["Q"] = m.q;
    c.summary["EG"] = m.eg;
    c.summary["tau3"] = m.tau3;
  }
}

void run_sweep(Context& c) {
  const auto& sw = c.cfg.sweep;
  const bool qubits = generate(sw, sw.grid.front()).qubits.has_value();
  std::string header = "param";
  if (!sw.measures_only) header += ",mean_h,std_h,excluded";
  header += qubits ? ",PR,Q,EG,tau3\n" : ",PR\n";
  std::string csv = header;
  json points = json::array();
  std::size_t failed = 0;
  for (double value : sw.grid) {
    std::string row = num(value);
    json point{{"param", value}};
    try {
      const GeneratedState g = generate(sw, value);
      const WaveFunction wf = build(g.terms);
      if (!sw.measures_only) {
        const EnsembleResult res = average_lyapunov(wf, c.cfg.sampler, c.cfg.samples, c.lp, c.cfg.integrator, c.jobs);
        row += "," + num(res.mean_h) + "," + num(res.std_h) + "," + std::to_string(res.excluded);
        point["mean_h"] = res.mean_h;
        point["excluded"] = res.excluded;
      }
      row += "," + measures_row(compute_measures(wf, g.qubits), qubits);
      point["status"] = "ok";
    } catch (const std::exception& e) {
      ++failed;
      row = num(value);
      if (!sw.measures_only) row += ",nan,nan,nan";
      row += qubits ? ",nan,nan,nan,nan" : ",nan";
      point["status"] = std::string("failed: ") + e.what();
      c.record.statuses.push_back(sw.parameter + "=" + num(value) + ": failed: " + e.what());
    }
    csv += row + "\n";
    points.push_back(point);
    // Rewritten after every grid point so an interrupted sweep keeps its completed rows.
    c.out.write("sweep.csv", csv);
  }
  c.record.statuses.push_back("sweep: " + std::to_string(sw.grid.size() - failed) + " of " +
                              std::to_string(sw.grid.size()) + " grid points completed");
  c.record.ok = failed == 0;
  c.summary["points"] = points;
}

void run_benchmark(Context& c) {
  const auto& b = c.cfg.benchmark;
  const PhasePoint x0 = henon_heiles_point(b.energy, b.start[0], b.start[1], b.start[2]);
  // The guidance-flow defaults are far too loose for a drift check at 1e-8.
  const IntegratorParams ip = c.cfg.integrator == IntegratorParams{} ? henon_heiles_default_integrator() : c.cfg.integrator;
  const HenonHeilesResult res = henon_heiles_lyapunov(b.energy, x0, c.lp, ip);
  c.out.write("lyapunov.csv", lyapunov_csv(res.estimate));
  c.record.statuses.push_back("benchmark: " + std::string(to_string(res.estimate.status)));
  c.record.ok = !excluded(res.estimate.status);
  c.summary.update(estimate_json(res.estimate));
  c.summary["max_energy_drift"] = res.max_energy_drift;
  c.summary["start"] = {x0[0], x0[1], x0[2], x0[3]};
}

}  // namespace

RunRecord run(const ExperimentConfig& input, const RunOptions& options) {
  ExperimentConfig cfg = input;
  if (options.seed) cfg.seed = options.seed;
  if (options.output) cfg.output = options.output->string();
  validate(cfg);

  const auto start = std::chrono::steady_clock::now();
  RunRecord record;
  record.version = std::string(library_version());
  record.command = std::string(to_string(cfg.command));
  const std::string echo = serialize_config(cfg);
  {
    // Same physics, same id, wherever the files go.
    ExperimentConfig anonymous = cfg;
    anonymous.output.clear();
    record.run_id = fnv1a_hex(serialize_config(anonymous)).substr(0, 12);
  }

  Writer out{fs::path(cfg.output)};
  json summary = json::object();
  LyapunovParams lp = cfg.lyapunov;
  lp.seed = cfg.seed.value_or(0);
  Context ctx{cfg, out, summary, record, lp, std::max(1u, options.jobs)};

  std::optional<WaveFunction> wf;
  if (!cfg.terms.empty()) wf = build(cfg.terms);

  std::string failure;
  try {
    switch (cfg.command) {
      case Command::Trajectory: run_trajectory(ctx, *wf); break;
      case Command::Lyapunov: run_lyapunov(ctx, *wf); break;
      case Command::Ensemble: run_ensemble(ctx, *wf); break;
      case Command::Poincare: run_poincare(ctx, *wf); break;
      case Command::Measures: run_measures(ctx, *wf); break;
      case Command::Sweep: run_sweep(ctx); break;
      case Command::Benchmark: run_benchmark(ctx); break;
    }
  } catch (const ValidationError&) {
    throw;
  } catch (const std::exception& e) {
    failure = e.what();
    record.ok = false;
    record.statuses.push_back(std::string("failed: ") + e.what());
  }

  record.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  json rec;
  rec["run_id"] = record.run_id;
  rec["version"] = record.version;
  rec["command"] = record.command;
  rec["seed"] = cfg.seed ? json(*cfg.seed) : json(nullptr);
  rec["wall_seconds"] = record.wall_seconds;
  rec["ok"] = record.ok;
  rec["statuses"] = record.statuses;
  json regularity = summary.contains("__regularity") ? summary["__regularity"] : json(nullptr);
  summary.erase("__regularity");
  if (regularity.is_null() && wf) regularity = regularity_json(*wf, nullptr);
  rec["summary"] = summary;
  rec["regularity"] = regularity;
  json files = json::array();
  for (const auto& f : out.files()) files.push_back({{"name", f.name}, {"size", f.size}, {"fnv1a64", f.checksum}});
  rec["files"] = files;
  rec["config"] = json::parse(echo);
  out.write("run.json", rec.dump(2) + "\n");
  record.files = out.files();
  record.files.pop_back();  // run.json describes the others, not itself

  if (!failure.empty()) throw NumericalError(failure);
  return record;
}

}  // namespace bohm
