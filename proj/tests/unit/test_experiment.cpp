#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>

#include "bohm/error.hpp"
#include "bohm/experiment.hpp"
#include "bohm/measures.hpp"

using namespace bohm;
namespace fs = std::filesystem;
using std::numbers::pi;

namespace {

const fs::path config_dir = BOHM_CONFIG_DIR;

fs::path scratch(const std::string& name) {
  const auto p = fs::temp_directory_path() / ("bohm_test_" + name);
  fs::remove_all(p);
  return p;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::vector<std::vector<std::string>> read_csv(const fs::path& p) {
  std::vector<std::vector<std::string>> rows;
  std::ifstream in(p);
  std::string line;
  while (std::getline(in, line)) {
    std::vector<std::string> row;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) row.push_back(cell);
    rows.push_back(row);
  }
  return rows;
}

std::size_t column(const std::vector<std::string>& header, const std::string& name) {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  FAIL("missing column " << name);
  return 0;
}

std::string error_of(const std::string& text) {
  try {
    validate(parse_config(text));
  } catch (const ValidationError& e) {
    return e.what();
  }
  return {};
}

const char* small_ensemble = R"({
  "name": "small",
  "command": "ensemble",
  "state": {"terms": [
    {"coefficient": 1, "factors": [{"family": "Harm3DSph", "nlm": [3, 3, 1]}]},
    {"coefficient": {"abs": 1, "phase": "pi/3"}, "factors": [{"family": "Harm3DSph", "nlm": [3, 3, 0]}]},
    {"coefficient": {"abs": 1, "phase": "pi/7"}, "factors": [{"family": "Harm3DSph", "nlm": [3, 1, 0]}]}
  ]},
  "lyapunov": {"n_steps": 20, "e0": "random"},
  "sampler": {"count": 4},
  "seed": 7
})";

}  // namespace

TEST_CASE("bundled configs validate and round-trip") {
  int seen = 0;
  for (const auto& entry : fs::directory_iterator(config_dir)) {
    if (entry.path().extension() != ".json") continue;
    CAPTURE(entry.path().filename().string());
    const auto cfg = load_config(entry.path());
    CHECK_NOTHROW(validate(cfg));
    const auto again = parse_config(serialize_config(cfg));
    CHECK(again == cfg);
    CHECK(serialize_config(again) == serialize_config(cfg));
    ++seen;
  }
  CHECK(seen >= 15);
}

TEST_CASE("validation errors name the offending field") {
  const auto parity = error_of(R"({"command": "trajectory", "x0": [1, 0.5, 0.2], "state": {"terms": [
      {"coefficient": 1, "factors": [{"family": "Harm3DSph", "nlm": [2, 0, 0]}]},
      {"coefficient": 1, "factors": [{"family": "Harm3DSph", "nlm": [3, 2, 0]}]}]}})");
  CHECK(parity.find("state.terms[1].factors[0]") != std::string::npos);
  CHECK(parity.find("parity") != std::string::npos);

  CHECK(error_of(R"({"command": "fly"})").find("command") != std::string::npos);
  CHECK(error_of(R"({"command": "measures", "bogus": 1})").find("bogus") != std::string::npos);
  std::string no_seed = small_ensemble;
  no_seed.replace(no_seed.find(R"("seed": 7)"), 9, R"("output": "x")");
  CHECK(error_of(no_seed).find("seed") != std::string::npos);
  CHECK(error_of(R"({"command": "trajectory", "x0": [2, 0.5], "state": {"terms": [
      {"coefficient": 1, "factors": [{"family": "Box2D", "qn": [1, 2]}]}]}})")
            .find("x0") != std::string::npos);
  CHECK_THROWS_AS(parse_config("{not json"), ValidationError);
}

TEST_CASE("expressions in configs") {
  const auto cfg = parse_config(R"({"command": "benchmark", "benchmark": {"energy": "1/12", "start": [0, 0.1, 0]},
                                    "lyapunov": {"e0": [1, 0, 0, 0]}})");
  CHECK(cfg.benchmark.energy == doctest::Approx(1.0 / 12).epsilon(1e-15));
  const auto sweep = parse_config(R"({"command": "sweep", "sweep": {"generator": "eq31", "parameter": "alpha",
                                      "grid": {"start": 0, "stop": "pi/2", "count": 5}, "measures_only": true}})");
  REQUIRE(sweep.sweep.grid.size() == 5);
  CHECK(sweep.sweep.grid[4] == doctest::Approx(pi / 2).epsilon(1e-15));
  CHECK(sweep.sweep.grid[1] == doctest::Approx(pi / 8).epsilon(1e-15));
}

TEST_CASE("generators") {
  const auto w = generate("eq100", 0.0, 0.0, 0.25);
  REQUIRE(w.qubits.has_value());
  CHECK(w.terms.size() == 3);
  CHECK(w.terms[0].factors.size() == 3);
  const auto endpoint = generate("eq31", 0.0, 0.0, 0.0);
  CHECK(endpoint.terms.size() == 2);  // sin(0) terms dropped
  CHECK_THROWS_AS(generate("eq31", 2.0, 0.0, 0.0), ValidationError);
  CHECK_THROWS_AS(generate("nope", 0.0, 0.0, 0.0), ValidationError);

  // PR of eq31 at alpha = pi/4.
  const auto mid = generate("eq31", pi / 4, 0.0, 0.0);
  CoefficientVector v;
  double n2 = 0;
  for (const auto& t : mid.terms) n2 += std::norm(t.coefficient);
  for (const auto& t : mid.terms) v.entries.push_back(t.coefficient / std::sqrt(n2));
  CHECK(std::abs(participation_ratio(v) - 3.6) <= 1e-12);
}

TEST_CASE("measure sweep over the W family with constant tangle and geometric measure") {
  const auto out = scratch("eq100");
  auto cfg = load_config(config_dir / "eq100_measures.json");
  const auto rec = run(cfg, {out, 1, std::nullopt});
  CHECK(rec.ok);
  const auto rows = read_csv(out / "sweep.csv");
  REQUIRE(rows.size() == 6);
  const auto eg = column(rows[0], "EG"), tau = column(rows[0], "tau3"), q = column(rows[0], "Q"), pr = column(rows[0], "PR");
  double best_q = -1, best_pr = -1, arg_q = -1, arg_pr = -1;
  for (std::size_t i = 1; i < rows.size(); ++i) {
    CHECK(std::abs(std::stod(rows[i][eg]) - 0.5) <= 1e-8);
    CHECK(std::abs(std::stod(rows[i][tau])) <= 1e-8);
    const double a = std::stod(rows[i][0]);
    if (std::stod(rows[i][q]) > best_q) best_q = std::stod(rows[i][q]), arg_q = a;
    if (std::stod(rows[i][pr]) > best_pr) best_pr = std::stod(rows[i][pr]), arg_pr = a;
  }
  CHECK(arg_q == 0.25);
  CHECK(arg_pr == 0.25);
  CHECK(fs::exists(out / "run.json"));
}

TEST_CASE("participation ratio of eq32 is symmetric about pi/4") {
  const auto out = scratch("eq32pr");
  auto cfg = parse_config(R"({"command": "sweep", "sweep": {"generator": "eq32", "parameter": "alpha",
                              "grid": {"start": 0, "stop": "pi/2", "count": 17}, "measures_only": true}})");
  run(cfg, {out, 1, std::nullopt});
  const auto rows = read_csv(out / "sweep.csv");
  REQUIRE(rows.size() == 18);
  const auto pr = column(rows[0], "PR");
  for (std::size_t i = 1; i <= 17; ++i)
    CHECK(std::abs(std::stod(rows[i][pr]) - std::stod(rows[18 - i][pr])) <= 1e-10);
}

TEST_CASE("reruns are byte-identical and independent of the job count") {
  const auto cfg = parse_config(small_ensemble);
  const auto a = scratch("det_a"), b = scratch("det_b"), c = scratch("det_c");
  const auto ra = run(cfg, {a, 1, std::nullopt});
  const auto rb = run(cfg, {b, 1, std::nullopt});
  const auto rc = run(cfg, {c, 3, std::nullopt});
  CHECK(slurp(a / "ensemble.csv") == slurp(b / "ensemble.csv"));
  CHECK(slurp(a / "ensemble.csv") == slurp(c / "ensemble.csv"));
  CHECK(ra.run_id == rb.run_id);
  REQUIRE(ra.files.size() == rc.files.size());
  for (std::size_t i = 0; i < ra.files.size(); ++i) CHECK(ra.files[i].checksum == rc.files[i].checksum);

  // A different seed changes the sample points.
  const auto d = scratch("det_d");
  run(cfg, {d, 1, std::uint64_t{8}});
  CHECK(slurp(a / "ensemble.csv") != slurp(d / "ensemble.csv"));
}

TEST_CASE("trajectory output with energy diagnostics") {
  const auto out = scratch("traj");
  const auto cfg = parse_config(R"({"command": "trajectory", "x0": [0.9, -1.1, 0.6],
    "state": {"terms": [
      {"coefficient": 1, "factors": [{"family": "Harm3DSph", "nlm": [3, 3, 1]}]},
      {"coefficient": {"abs": 1, "phase": "pi/3"}, "factors": [{"family": "Harm3DSph", "nlm": [3, 3, 0]}]},
      {"coefficient": {"abs": 1, "phase": "pi/7"}, "factors": [{"family": "Harm3DSph", "nlm": [3, 1, 0]}]}]},
    "integrator": {"rel_tol": 1e-10, "abs_tol": 1e-10},
    "trajectory": {"t_end": 20, "sample_every": 0.5, "energy": "finite-difference"}})");
  const auto rec = run(cfg, {out, 1, std::nullopt});
  CHECK(rec.ok);
  const auto rows = read_csv(out / "trajectory.csv");
  CHECK(rows.size() == 42);
  const auto energy = read_csv(out / "energy.csv");
  const auto total = column(energy[0], "total");
  for (std::size_t i = 1; i < energy.size(); ++i) CHECK(std::abs(std::stod(energy[i][total]) - 4.5) <= 1e-6);
}

TEST_CASE("poincare output") {
  const auto out = scratch("section");
  const auto cfg = parse_config(R"({"command": "poincare", "x0": [0, 1.5],
    "state": {"terms": [{"coefficient": 1, "factors": [{"family": "Harm2DPolar", "qn": [1, 0]}]}]},
    "poincare": {"coordinate": 1, "level": 0, "t_max": 30}})");
  run(cfg, {out, 1, std::nullopt});
  const auto rows = read_csv(out / "section.csv");
  CHECK(rows.size() > 4);
}
