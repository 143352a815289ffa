#pragma once

// Guidance-equation velocity field, Bohmian energy diagnostics and
// adaptive trajectory integration (hbar = 1, unit masses by default).

#include <span>
#include <vector>

#include "bohm/ode.hpp"
#include "bohm/wavefunction.hpp"

namespace bohm {

struct IntegratorParams {
  double rel_tol = 1e-9;
  double abs_tol = 1e-9;
  double max_step = 0.1;
  /// Node-proximity floor on |psi|^2, relative to the running maximum of
  /// |psi|^2 seen along the trajectory.
  double min_abs2 = 1e-24;
  /// Per-particle masses; empty means all 1. Only rescales the velocity.
  std::vector<double> masses;
  /// Attempted steps allowed per unit of integrated time, counted over the
  /// whole trajectory (plus a fixed allowance of 10 time units). Orbits that
  /// wind ever tighter around a nodal line exceed it and end as StepFailure.
  double step_budget = 2e4;

  /// Cumulative step allowance after integrating for `elapsed` time units.
  long step_allowance(double elapsed) const;

  friend bool operator==(const IntegratorParams&, const IntegratorParams&) = default;

  /// Throws ValidationError unless all positive and tolerances <= 1e-3.
  void validate() const;
  StepControl step_control() const;
};

enum class TrajectoryStatus { Completed, NodeEncounter, DomainExit, StepFailure };
std::string_view to_string(TrajectoryStatus status);

struct EnergyDiagnostics {
  double kinetic = 0.0;    // sum_k |v_k|^2 / 2
  double potential = 0.0;  // V
  double quantum = 0.0;    // Q = -sum_k lap_k|psi| / 2|psi|
  double total = 0.0;      // kinetic + potential + quantum
};

struct TrajectorySample {
  double t;
  std::vector<double> x;
};

struct SampleDiagnostics {
  EnergyDiagnostics energy;
  double abs2;
};

struct Trajectory {
  std::vector<TrajectorySample> samples;  // monotone in the integration direction
  TrajectoryStatus status = TrajectoryStatus::Completed;
  std::vector<SampleDiagnostics> diagnostics;  // empty unless attached
  long accepted_steps = 0;
  long rejected_steps = 0;
};

/// v_k = Im(grad_k psi / psi) / m_k. Throws NodeProximityError when
/// |psi|^2 < min_abs2 (or psi == 0) and DomainError outside the domain.
std::vector<double> velocity(const WaveFunction& wf, const Configuration& q, double min_abs2 = 0.0,
                             std::span<const double> masses = {});

enum class QuantumPotentialMethod {
  /// Uses lap|psi|/|psi| = Re(lap psi/psi) + |grad S|^2 with the
  /// Schroedinger equation; requires a stationary wave function.
  Analytic,
  /// Central differences of the analytic gradient of |psi|, refined by two
  /// Richardson steps.
  FiniteDifference,
};

/// Kinetic, potential and quantum-potential energy at q. Throws
/// NodeProximityError near nodes and ValidationError for a non-stationary
/// wave function on the analytic path.
EnergyDiagnostics quantum_potential(const WaveFunction& wf, const Configuration& q,
                                    QuantumPotentialMethod method = QuantumPotentialMethod::Analytic,
                                    double min_abs2 = 0.0, double fd_step = 1e-4);

/// Integrates dx/dt = v(x, t) from t0 to t1 (t1 < t0 integrates backward),
/// recording a sample every `sample_every` time units (every accepted step
/// when <= 0) plus the end point. Truncates with NodeEncounter/DomainExit
/// instead of throwing. Throws for an invalid starting point.
Trajectory integrate(const WaveFunction& wf, const Configuration& x0, double t0, double t1,
                     const IntegratorParams& params, double sample_every);

/// Fills traj.diagnostics for every sample.
void attach_diagnostics(const WaveFunction& wf, Trajectory& traj, QuantumPotentialMethod method);

/// The velocity field as an ODE right-hand side. Tracks the running
/// maximum of |psi|^2 and why the last evaluation failed.
class GuidanceField {
 public:
  enum class Failure { None, Domain, Node };

  GuidanceField(const WaveFunction& wf, const IntegratorParams& params);

  bool operator()(double t, std::span<const double> x, std::span<double> v);

  Failure last_failure() const { return failure_; }
  double running_max_abs2() const { return max_abs2_; }
  const WaveFunction& wave_function() const { return *wf_; }

 private:
  const WaveFunction* wf_;
  double min_abs2_;
  std::vector<double> inv_mass_;  // per coordinate
  FieldEval eval_;
  double max_abs2_ = 0.0;
  Failure failure_ = Failure::None;
};

/// Maps an integrator outcome and the field's failure reason to a status.
TrajectoryStatus classify(AdvanceStatus status, GuidanceField::Failure failure);

}  // namespace bohm
