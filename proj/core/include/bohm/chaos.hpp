#pragma once

// Maximal Lyapunov exponents by the Benettin rescaling procedure, ensemble
// averages over sampled initial conditions, Poincare sections and the
// Henon-Heiles benchmark.

#include <array>
#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "bohm/dynamics.hpp"
#include "bohm/random.hpp"
#include "bohm/wavefunction.hpp"

namespace bohm {

struct LyapunovParams {
  double d0 = 1e-7;     // separation restored after every rescaling
  double dt = 1.0;      // rescaling interval
  long n_steps = 50000;  // total time T = n_steps * dt
  std::vector<double> e0;  // initial direction; empty draws one from `seed`
  std::uint64_t seed = 0;

  /// Throws ValidationError unless d0 > 0, dt > 0, n_steps >= 1 and e0 is
  /// empty or a unit vector of dimension n.
  void validate(std::size_t n) const;

  friend bool operator==(const LyapunovParams&, const LyapunovParams&) = default;
};

enum class LyapunovStatus { Converged, MaxTime, NodeEncounter, DomainExit, StepFailure };
std::string_view to_string(LyapunovStatus status);

/// Excluded from ensemble averages.
inline bool excluded(LyapunovStatus s) {
  return s == LyapunovStatus::NodeEncounter || s == LyapunovStatus::DomainExit || s == LyapunovStatus::StepFailure;
}

struct LyapunovEstimate {
  std::vector<std::pair<double, double>> h_series;  // (T_k, h(x0, T_k)) at every rescaling
  double final_h = 0.0;
  LyapunovStatus status = LyapunovStatus::MaxTime;
  std::vector<std::string> warnings;
};

/// Benettin estimate for the Bohmian flow of `wf` starting at x0 (x0.time
/// is the start time). A node encounter or domain exit of either
/// trajectory ends the run with a partial series.
LyapunovEstimate lyapunov(const WaveFunction& wf, const Configuration& x0, const LyapunovParams& params,
                          const IntegratorParams& iparams);

/// Uniform initial conditions in an axis-aligned cube.
struct CubeSampler {
  double edge = 10.0;
  std::vector<double> center;  // empty: origin; one entry: broadcast

  std::vector<double> sample(std::size_t n, SplitMix64& rng) const;

  friend bool operator==(const CubeSampler&, const CubeSampler&) = default;
};

struct EnsembleSample {
  std::uint64_t index = 0;
  std::vector<double> x0;
  LyapunovEstimate estimate;
};

struct EnsembleResult {
  double mean_h = 0.0;
  double std_h = 0.0;  // sample standard deviation over included members
  std::vector<EnsembleSample> per_sample;
  std::size_t included = 0;
  std::size_t excluded = 0;
};

/// Average final_h over n_samples initial conditions. Member i uses seed
/// params.seed ^ i for both its position and its direction, so the result
/// does not depend on `jobs`. Throws NumericalError when every member is
/// excluded.
EnsembleResult average_lyapunov(const WaveFunction& wf, const CubeSampler& sampler, std::size_t n_samples,
                                const LyapunovParams& params, const IntegratorParams& iparams, unsigned jobs = 1);

struct SectionPlane {
  int coordinate = 0;
  double level = 0.0;

  friend bool operator==(const SectionPlane&, const SectionPlane&) = default;
};

struct SectionPoint {
  double t = 0.0;
  std::vector<double> x;  // full configuration at the crossing
  int direction = 0;      // +1 when the coordinate increases through the plane
};

/// All transversal crossings of the trajectory from x0 with the plane over
/// [x0.time, x0.time + t_max], refined by bisection to a plane residual of
/// 1e-10. Stops early if the trajectory is truncated.
std::vector<SectionPoint> poincare_section(const WaveFunction& wf, const Configuration& x0, SectionPlane plane,
                                           double t_max, const IntegratorParams& iparams);

// Henon-Heiles: H = (px^2 + py^2)/2 + (x^2 + y^2)/2 + x^2 y - y^3/3,
// phase point ordered (x, y, px, py).
using PhasePoint = std::array<double, 4>;

double henon_heiles_energy(const PhasePoint& p);

/// Point (x, y, px, py) on the shell H = energy with px >= 0. Throws
/// ValidationError when the shell is not reachable at (x, y, py).
PhasePoint henon_heiles_point(double energy, double x, double y, double py);

/// Integrator settings used for the benchmark unless overridden.
IntegratorParams henon_heiles_default_integrator();

struct HenonHeilesResult {
  LyapunovEstimate estimate;
  double max_energy_drift = 0.0;  // max |H - energy| on the reference trajectory
};

/// Benettin estimate over the 4-d phase-space flow. Throws ValidationError
/// when x0 is off the shell by more than 1e-10 and NumericalError when the
/// orbit escapes (x^2 + y^2 > 4).
HenonHeilesResult henon_heiles_lyapunov(double energy, const PhasePoint& x0, const LyapunovParams& params,
                                        const IntegratorParams& iparams = henon_heiles_default_integrator());

/// Section of a Henon-Heiles orbit; coordinate indexes (x, y, px, py).
std::vector<SectionPoint> henon_heiles_section(const PhasePoint& x0, SectionPlane plane, double t_max,
                                               const IntegratorParams& iparams = henon_heiles_default_integrator());

}  // namespace bohm
