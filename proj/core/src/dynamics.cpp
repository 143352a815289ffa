#include "bohm/dynamics.hpp"

#include <algorithm>
#include <cmath>

#include "bohm/error.hpp"

namespace bohm {

void IntegratorParams::validate() const {
  if (!(rel_tol > 0.0 && abs_tol > 0.0 && max_step > 0.0 && min_abs2 > 0.0)) {
    throw ValidationError("integrator: rel_tol, abs_tol, max_step and min_abs2 must be positive");
  }
  if (rel_tol > 1e-3 || abs_tol > 1e-3) throw ValidationError("integrator: tolerances must not exceed 1e-3");
  for (double m : masses)
    if (!(m > 0.0)) throw ValidationError("integrator: masses must be positive");
  if (!(step_budget > 0.0)) throw ValidationError("integrator: step_budget must be positive");
}

long IntegratorParams::step_allowance(double elapsed) const {
  return static_cast<long>(std::min(step_budget * (std::abs(elapsed) + 10.0), 4e18));
}

StepControl IntegratorParams::step_control() const {
  StepControl c;
  c.rel_tol = rel_tol;
  c.abs_tol = abs_tol;
  c.max_step = max_step;
  return c;
}

std::string_view to_string(TrajectoryStatus status) {
  switch (status) {
    case TrajectoryStatus::Completed: return "Completed";
    case TrajectoryStatus::NodeEncounter: return "NodeEncounter";
    case TrajectoryStatus::DomainExit: return "DomainExit";
    case TrajectoryStatus::StepFailure: return "StepFailure";
  }
  return "?";
}

namespace {

std::vector<double> inverse_masses(const WaveFunction& wf, std::span<const double> masses) {
  std::vector<double> inv(wf.configuration_size(), 1.0);
  if (masses.empty()) return inv;
  if (static_cast<int>(masses.size()) != wf.particles()) {
    throw ValidationError("masses: expected one entry per particle");
  }
  for (int k = 0; k < wf.particles(); ++k)
    for (int a = 0; a < wf.dimension(); ++a) inv[k * wf.dimension() + a] = 1.0 / masses[k];
  return inv;
}

FieldEval checked_eval(const WaveFunction& wf, const Configuration& q, double min_abs2) {
  FieldEval e = evaluate(wf, q);
  if (e.abs2 == 0.0 || e.abs2 < min_abs2) {
    throw NodeProximityError("|psi|^2 below the node-proximity floor");
  }
  return e;
}

// d|psi|/dx_i = Re(conj(psi) dpsi/dx_i) / |psi|
double abs_gradient(const FieldEval& e, std::size_t i) {
  return std::real(std::conj(e.psi) * e.grad[i]) / std::sqrt(e.abs2);
}

}  // namespace

std::vector<double> velocity(const WaveFunction& wf, const Configuration& q, double min_abs2,
                             std::span<const double> masses) {
  const FieldEval e = checked_eval(wf, q, min_abs2);
  const auto inv = inverse_masses(wf, masses);
  std::vector<double> v(e.grad.size());
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = inv[i] * std::imag(e.grad[i] / e.psi);
  return v;
}

EnergyDiagnostics quantum_potential(const WaveFunction& wf, const Configuration& q, QuantumPotentialMethod method,
                                    double min_abs2, double fd_step) {
  const FieldEval e = checked_eval(wf, q, min_abs2);
  EnergyDiagnostics d;
  for (std::size_t i = 0; i < e.grad.size(); ++i) {
    const double v = std::imag(e.grad[i] / e.psi);
    d.kinetic += 0.5 * v * v;
  }
  d.potential = wf.potential(q.coordinates);

  if (method == QuantumPotentialMethod::Analytic) {
    if (!wf.stationary()) throw ValidationError("analytic quantum potential needs a stationary wave function");
    // Re(lap psi / psi) = 2 (V - E) and |grad S|^2 = 2 * kinetic.
    const double e_total = *wf.stationary_energy();
    d.quantum = -0.5 * (2.0 * (d.potential - e_total) + 2.0 * d.kinetic);
  } else {
    // Central differences of d|psi|/dx_i at h, h/2 and h/4, combined by two
    // Richardson steps so the truncation error is O(h^6). The extra level
    // matters for high quantum numbers close to a node.
    Configuration shifted = q;
    auto central = [&](std::size_t i, double h) {
      shifted.coordinates[i] = q.coordinates[i] + h;
      const FieldEval plus = checked_eval(wf, shifted, 0.0);
      shifted.coordinates[i] = q.coordinates[i] - h;
      const FieldEval minus = checked_eval(wf, shifted, 0.0);
      shifted.coordinates[i] = q.coordinates[i];
      return (abs_gradient(plus, i) - abs_gradient(minus, i)) / (2.0 * h);
    };
    double laplacian = 0.0;
    for (std::size_t i = 0; i < q.coordinates.size(); ++i)
      laplacian += (64.0 * central(i, 0.25 * fd_step) - 20.0 * central(i, 0.5 * fd_step) + central(i, fd_step)) / 45.0;
    d.quantum = -0.5 * laplacian / std::sqrt(e.abs2);
  }
  d.total = d.kinetic + d.potential + d.quantum;
  return d;
}

GuidanceField::GuidanceField(const WaveFunction& wf, const IntegratorParams& params)
    : wf_(&wf), min_abs2_(params.min_abs2), inv_mass_(inverse_masses(wf, params.masses)) {
  eval_.grad.resize(wf.configuration_size());
}

bool GuidanceField::operator()(double t, std::span<const double> x, std::span<double> v) {
  if (!wf_->evaluate_into(x, t, eval_)) {
    failure_ = Failure::Domain;
    return false;
  }
  const double a2 = eval_.abs2;
  if (a2 > max_abs2_) max_abs2_ = a2;
  if (!(a2 > 0.0) || a2 < min_abs2_ * max_abs2_) {
    failure_ = Failure::Node;
    return false;
  }
  // Im(g / psi) = Im(g conj(psi)) / |psi|^2
  const double pr = eval_.psi.real();
  const double pi = eval_.psi.imag();
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double gr = eval_.grad[i].real();
    const double gi = eval_.grad[i].imag();
    v[i] = inv_mass_[i] * (gi * pr - gr * pi) / a2;
  }
  failure_ = Failure::None;
  return true;
}

TrajectoryStatus classify(AdvanceStatus status, GuidanceField::Failure failure) {
  switch (status) {
    case AdvanceStatus::Reached:
    case AdvanceStatus::Stopped:
      return TrajectoryStatus::Completed;
    case AdvanceStatus::FieldInvalid:
      return failure == GuidanceField::Failure::Domain ? TrajectoryStatus::DomainExit
                                                       : TrajectoryStatus::NodeEncounter;
    case AdvanceStatus::StepTooSmall:
    case AdvanceStatus::TooManySteps:
      return TrajectoryStatus::StepFailure;
  }
  return TrajectoryStatus::StepFailure;
}

Trajectory integrate(const WaveFunction& wf, const Configuration& x0, double t0, double t1,
                     const IntegratorParams& params, double sample_every) {
  params.validate();
  if (static_cast<int>(x0.coordinates.size()) != wf.configuration_size()) {
    throw DomainError("integrate: initial configuration has the wrong size");
  }
  {
    Configuration start = x0;
    start.time = t0;
    checked_eval(wf, start, 0.0);
  }

  DormandPrince45<GuidanceField> solver(GuidanceField(wf, params), x0.coordinates.size(), params.step_control());
  Trajectory traj;
  if (!solver.reset(t0, x0.coordinates)) throw NodeProximityError("integrate: starting point is at a node");
  traj.samples.push_back({t0, x0.coordinates});

  const double dir = t1 >= t0 ? 1.0 : -1.0;
  AdvanceStatus status = AdvanceStatus::Reached;
  auto used = [&] { return solver.accepted_steps() + solver.rejected_steps(); };
  if (sample_every > 0.0) {
    for (long k = 1;; ++k) {
      double target = t0 + dir * static_cast<double>(k) * sample_every;
      if (dir * (target - t1) > -1e-12 * sample_every) target = t1;
      solver.set_max_steps(std::max(1L, params.step_allowance(target - t0) - used()));
      status = solver.advance_to(target);
      if (status != AdvanceStatus::Reached) break;
      traj.samples.push_back({solver.t(), std::vector<double>(solver.y().begin(), solver.y().end())});
      if (target == t1) break;
    }
  } else {
    solver.set_max_steps(params.step_allowance(t1 - t0));
    status = solver.advance_to(t1, [&](double, std::span<const double>, double t, std::span<const double> y) {
      traj.samples.push_back({t, std::vector<double>(y.begin(), y.end())});
      return true;
    });
  }
  traj.status = classify(status, solver.field().last_failure());
  traj.accepted_steps = solver.accepted_steps();
  traj.rejected_steps = solver.rejected_steps();
  return traj;
}

void attach_diagnostics(const WaveFunction& wf, Trajectory& traj, QuantumPotentialMethod method) {
  traj.diagnostics.clear();
  traj.diagnostics.reserve(traj.samples.size());
  for (const auto& s : traj.samples) {
    Configuration q{s.x, s.t};
    const FieldEval e = evaluate(wf, q);
    traj.diagnostics.push_back({quantum_potential(wf, q, method), e.abs2});
  }
}

}  // namespace bohm
