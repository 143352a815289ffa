#pragma once

// Declarative experiments: JSON configs, the published coefficient
// generators and a runner that writes CSV tables plus a JSON run record.

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "bohm/chaos.hpp"
#include "bohm/measures.hpp"
#include "bohm/wavefunction.hpp"

namespace bohm {

enum class Command { Trajectory, Lyapunov, Ensemble, Poincare, Measures, Sweep, Benchmark };
std::string_view to_string(Command c);
std::optional<Command> parse_command(std::string_view name);

enum class EnergyCheck { None, Analytic, FiniteDifference };

struct TrajectorySpec {
  double t_end = 100.0;
  double sample_every = 0.1;
  EnergyCheck energy = EnergyCheck::None;

  friend bool operator==(const TrajectorySpec&, const TrajectorySpec&) = default;
};

struct SectionSpec {
  SectionPlane plane;
  double t_max = 1000.0;

  friend bool operator==(const SectionSpec&, const SectionSpec&) = default;
};

/// Single-particle states encoding |0> and |1> for three-particle measures.
struct QubitEncoding {
  BasisState basis0;
  BasisState basis1;

  friend bool operator==(const QubitEncoding&, const QubitEncoding&) = default;
};

struct SweepSpec {
  std::string generator;  // eq31, eq32, eq100, eq101, eq101-prime
  std::string parameter;  // alpha, beta or a
  std::vector<double> grid;
  double alpha = 0.0;  // held fixed while beta is swept
  double beta = 0.0;   // held fixed while alpha is swept
  bool measures_only = false;

  friend bool operator==(const SweepSpec&, const SweepSpec&) = default;
};

struct BenchmarkSpec {
  std::string system = "henon-heiles";
  double energy = 0.125;
  std::vector<double> start{0.0, 0.1, 0.0};  // (x, y, py); px >= 0 from the energy shell

  friend bool operator==(const BenchmarkSpec&, const BenchmarkSpec&) = default;
};

struct ExperimentConfig {
  std::string name;
  Command command = Command::Lyapunov;
  std::vector<ProductTerm> terms;  // empty for sweeps and benchmarks
  std::vector<double> x0;          // Cartesian, flattened per particle
  LyapunovParams lyapunov;         // its seed field is ignored; see `seed`
  IntegratorParams integrator;
  CubeSampler sampler;
  std::size_t samples = 20;
  TrajectorySpec trajectory;
  SectionSpec section;
  std::optional<QubitEncoding> qubits;
  SweepSpec sweep;
  BenchmarkSpec benchmark;
  std::optional<std::uint64_t> seed;
  std::string output = "out";

  friend bool operator==(const ExperimentConfig&, const ExperimentConfig&) = default;
};

/// Parses and validates. Throws ValidationError whose message names the
/// offending field (e.g. "state.terms[1].factors[0]: ...").
ExperimentConfig parse_config(std::string_view json_text);
ExperimentConfig load_config(const std::filesystem::path& path);
std::string serialize_config(const ExperimentConfig& config);

/// Semantic checks beyond the schema: the state builds, x0 matches it,
/// stochastic commands carry a seed, sweep grids are sorted and nonempty.
void validate(const ExperimentConfig& config);

// Sweep generators.

bool known_generator(std::string_view id);
/// Names of the parameters a generator accepts, the swept one among them.
std::vector<std::string> generator_parameters(std::string_view id);

struct GeneratedState {
  std::vector<ProductTerm> terms;           // zero coefficients dropped
  std::optional<QubitEncoding> qubits;      // three-particle W families only
};

/// eq31(alpha, beta), eq32(alpha), eq100(a), eq101(a), eq101-prime(a).
GeneratedState generate(std::string_view id, double alpha, double beta, double a);
GeneratedState generate(const SweepSpec& sweep, double value);

// Running.

struct RunOptions {
  std::optional<std::filesystem::path> output;
  unsigned jobs = 1;
  std::optional<std::uint64_t> seed;
};

struct OutputFile {
  std::string name;
  std::uintmax_t size = 0;
  std::string checksum;  // FNV-1a 64, hex
};

struct RunRecord {
  std::string run_id;
  std::string version;
  std::string command;
  double wall_seconds = 0.0;
  std::vector<std::string> statuses;
  std::vector<OutputFile> files;
  bool ok = true;  // false when any job failed numerically
};

/// Executes the command, writing `<out>/*.csv` and `<out>/run.json`.
/// Throws ValidationError before doing any work when the config is invalid.
RunRecord run(const ExperimentConfig& config, const RunOptions& options = {});

std::string fnv1a_hex(std::string_view data);
std::string_view library_version();

}  // namespace bohm
