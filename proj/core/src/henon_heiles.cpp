#include <cmath>

#include "bohm/chaos.hpp"
#include "bohm/error.hpp"
#include "flow_tools.hpp"

namespace bohm {

namespace {

struct HenonHeilesField {
  bool operator()(double, std::span<const double> y, std::span<double> f) const {
    const double x = y[0];
    const double q = y[1];
    f[0] = y[2];
    f[1] = y[3];
    f[2] = -x - 2.0 * x * q;
    f[3] = -q - x * x + q * q;
    return true;
  }
};

}  // namespace

double henon_heiles_energy(const PhasePoint& p) {
  const auto [x, y, px, py] = p;
  return 0.5 * (px * px + py * py) + 0.5 * (x * x + y * y) + x * x * y - y * y * y / 3.0;
}

PhasePoint henon_heiles_point(double energy, double x, double y, double py) {
  const double rest = henon_heiles_energy({x, y, 0.0, py});
  const double px2 = 2.0 * (energy - rest);
  if (px2 < 0.0) throw ValidationError("henon-heiles: energy shell not reachable at this point");
  return {x, y, std::sqrt(px2), py};
}

IntegratorParams henon_heiles_default_integrator() {
  IntegratorParams p;
  p.rel_tol = 1e-13;
  p.abs_tol = 1e-13;
  p.max_step = 0.5;
  return p;
}

HenonHeilesResult henon_heiles_lyapunov(double energy, const PhasePoint& x0, const LyapunovParams& params,
                                        const IntegratorParams& iparams) {
  params.validate(4);
  iparams.validate();
  if (std::abs(henon_heiles_energy(x0) - energy) > 1e-10) {
    throw ValidationError("henon-heiles: initial point is not on the energy shell");
  }
  std::vector<double> e0 = params.e0;
  if (e0.empty()) {
    e0.resize(4);
    SplitMix64 rng(params.seed);
    rng.unit_vector(e0);
  }
  HenonHeilesResult result;
  auto fail = [](AdvanceStatus, auto&) { return LyapunovStatus::StepFailure; };
  auto check = [&](double t, std::span<const double> y) {
    if (y[0] * y[0] + y[1] * y[1] > 4.0) {
      throw NumericalError("henon-heiles: orbit escaped at t = " + std::to_string(t));
    }
    const double h = henon_heiles_energy({y[0], y[1], y[2], y[3]});
    result.max_energy_drift = std::max(result.max_energy_drift, std::abs(h - energy));
  };
  auto allowance = [&](double elapsed) { return iparams.step_allowance(elapsed); };
  result.estimate =
      detail::benettin(HenonHeilesField{}, x0, 0.0, e0, params, iparams.step_control(), fail, check, allowance);
  return result;
}

std::vector<SectionPoint> henon_heiles_section(const PhasePoint& x0, SectionPlane plane, double t_max,
                                               const IntegratorParams& iparams) {
  iparams.validate();
  if (plane.coordinate < 0 || plane.coordinate > 3) throw ValidationError("section: plane coordinate out of range");
  StepControl control = iparams.step_control();
  control.max_steps = iparams.step_allowance(t_max);
  return detail::section(HenonHeilesField{}, x0, 0.0, plane, t_max, control);
}

}  // namespace bohm
