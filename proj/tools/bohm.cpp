#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <thread>

#include <CLI11.hpp>

#include "bohm/error.hpp"
#include "bohm/experiment.hpp"

namespace {

constexpr int exit_validation = 2;
constexpr int exit_numerical = 3;

unsigned default_jobs() {
  if (const char* env = std::getenv("BOHM_JOBS")) {
    char* end = nullptr;
    const unsigned long n = std::strtoul(env, &end, 10);
    if (end != env && *end == '\0' && n > 0) return static_cast<unsigned>(n);
    std::cerr << "warning: ignoring BOHM_JOBS=" << env << "\n";
  }
  return 1;
}

void print_record(const bohm::RunRecord& r, const std::string& dir) {
  std::cout << "run " << r.run_id << " (" << r.command << ", " << r.wall_seconds << " s) -> " << dir << "\n";
  for (const auto& s : r.statuses) std::cout << "  " << s << "\n";
  for (const auto& f : r.files) std::cout << "  " << f.name << "  " << f.size << " bytes  " << f.checksum << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Bohmian trajectory chaos experiments"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(bohm::library_version()));

  std::string config_path, out_dir;
  unsigned jobs = default_jobs();
  std::uint64_t seed = 0;

  auto* run = app.add_subcommand("run", "Run an experiment config");
  run->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);
  auto* out_opt = run->add_option("--out", out_dir, "Output directory (overrides the config)");
  run->add_option("--jobs", jobs, "Worker threads (default: $BOHM_JOBS or 1)")->check(CLI::PositiveNumber);
  auto* seed_opt = run->add_option("--seed", seed, "Seed override");

  auto* val = app.add_subcommand("validate", "Check a config without running it");
  val->add_option("config", config_path, "Experiment config (JSON)")->required()->check(CLI::ExistingFile);

  auto* bench = app.add_subcommand("benchmark", "Built-in benchmarks");
  auto* hh = bench->add_subcommand("henon-heiles", "Lyapunov exponent of a Henon-Heiles orbit");
  bench->require_subcommand(1);
  double energy = 0.125;
  std::vector<double> start{0.0, 0.1, 0.0};
  long n_steps = 10000;
  hh->add_option("--energy", energy, "Energy shell")->required();
  hh->add_option("--start", start, "Initial (x, y, py); px follows from the energy")->expected(3);
  hh->add_option("--n-steps", n_steps, "Rescaling intervals of length 1");
  hh->add_option("--seed", seed, "Seed for the initial separation direction");
  hh->add_option("--out", out_dir, "Output directory")->default_val("henon-heiles");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*val) {
      const auto cfg = bohm::load_config(config_path);
      std::cout << "ok: " << (cfg.name.empty() ? config_path : cfg.name) << " (" << bohm::to_string(cfg.command)
                << ")\n";
      return 0;
    }
    bohm::ExperimentConfig cfg;
    bohm::RunOptions opts;
    opts.jobs = jobs;
    if (*run) {
      cfg = bohm::load_config(config_path);
      if (*out_opt) opts.output = out_dir;
      if (*seed_opt) opts.seed = seed;
    } else {
      cfg.name = "henon-heiles";
      cfg.command = bohm::Command::Benchmark;
      cfg.benchmark.energy = energy;
      cfg.benchmark.start = start;
      cfg.lyapunov.n_steps = n_steps;
      cfg.seed = seed;
      cfg.output = out_dir;
    }
    const auto record = bohm::run(cfg, opts);
    print_record(record, opts.output ? opts.output->string() : cfg.output);
    return record.ok ? 0 : exit_numerical;
  } catch (const bohm::ValidationError& e) {
    std::cerr << "invalid config: " << e.what() << "\n";
    return exit_validation;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_numerical;
  }
}
