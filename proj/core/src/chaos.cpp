#include "bohm/chaos.hpp"

#include <atomic>
#include <cmath>
#include <numeric>
#include <thread>

#include "bohm/error.hpp"
#include "flow_tools.hpp"

namespace bohm {

void LyapunovParams::validate(std::size_t n) const {
  if (!(d0 > 0.0) || !std::isfinite(d0)) throw ValidationError("lyapunov: d0 must be positive");
  if (!(dt > 0.0) || !std::isfinite(dt)) throw ValidationError("lyapunov: dt must be positive");
  if (n_steps < 1) throw ValidationError("lyapunov: n_steps must be at least 1");
  if (e0.empty()) return;
  if (e0.size() != n) throw ValidationError("lyapunov: e0 has the wrong dimension");
  const double norm = std::sqrt(std::inner_product(e0.begin(), e0.end(), e0.begin(), 0.0));
  if (std::abs(norm - 1.0) > 1e-12) throw ValidationError("lyapunov: e0 must be a unit vector");
}

std::string_view to_string(LyapunovStatus status) {
  switch (status) {
    case LyapunovStatus::Converged: return "Converged";
    case LyapunovStatus::MaxTime: return "MaxTime";
    case LyapunovStatus::NodeEncounter: return "NodeEncounter";
    case LyapunovStatus::DomainExit: return "DomainExit";
    case LyapunovStatus::StepFailure: return "StepFailure";
  }
  return "?";
}

namespace {

std::vector<double> direction(const LyapunovParams& p, std::size_t n) {
  if (!p.e0.empty()) return p.e0;
  std::vector<double> e(n);
  SplitMix64 rng(p.seed);
  rng.unit_vector(e);
  return e;
}

LyapunovStatus to_lyapunov(TrajectoryStatus s) {
  switch (s) {
    case TrajectoryStatus::NodeEncounter: return LyapunovStatus::NodeEncounter;
    case TrajectoryStatus::DomainExit: return LyapunovStatus::DomainExit;
    default: return LyapunovStatus::StepFailure;
  }
}

}  // namespace

LyapunovEstimate lyapunov(const WaveFunction& wf, const Configuration& x0, const LyapunovParams& params,
                          const IntegratorParams& iparams) {
  const std::size_t n = wf.configuration_size();
  params.validate(n);
  iparams.validate();
  if (x0.coordinates.size() != n) throw DomainError("lyapunov: initial configuration has the wrong size");
  evaluate(wf, x0);  // throws outside the domain

  const std::vector<double> e0 = direction(params, n);
  auto fail = [](AdvanceStatus s, auto& solver) { return to_lyapunov(classify(s, solver.field().last_failure())); };
  auto no_check = [](double, std::span<const double>) {};
  auto allowance = [&](double elapsed) { return iparams.step_allowance(elapsed); };
  LyapunovEstimate est = detail::benettin(GuidanceField(wf, iparams), x0.coordinates, x0.time, e0, params,
                                          iparams.step_control(), fail, no_check, allowance);
  if (params.d0 > 1e-4) est.warnings.emplace_back("d0 > 1e-4 probes beyond the linear regime");
  return est;
}

std::vector<double> CubeSampler::sample(std::size_t n, SplitMix64& rng) const {
  if (!(edge > 0.0)) throw ValidationError("sampler: edge must be positive");
  if (center.size() > 1 && center.size() != n) throw ValidationError("sampler: center has the wrong dimension");
  std::vector<double> x(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double c = center.empty() ? 0.0 : center[center.size() == 1 ? 0 : i];
    x[i] = c + edge * (rng.uniform() - 0.5);
  }
  return x;
}

EnsembleResult average_lyapunov(const WaveFunction& wf, const CubeSampler& sampler, std::size_t n_samples,
                                const LyapunovParams& params, const IntegratorParams& iparams, unsigned jobs) {
  const std::size_t n = wf.configuration_size();
  if (n_samples == 0) throw ValidationError("ensemble: n_samples must be positive");
  params.validate(n);
  iparams.validate();

  EnsembleResult result;
  result.per_sample.resize(n_samples);
  auto run_one = [&](std::size_t i) {
    EnsembleSample& s = result.per_sample[i];
    s.index = i;
    const std::uint64_t seed = params.seed ^ static_cast<std::uint64_t>(i);
    SplitMix64 rng(seed);
    s.x0 = sampler.sample(n, rng);
    LyapunovParams p = params;
    if (p.e0.empty()) {
      p.e0.resize(n);
      rng.unit_vector(p.e0);
    }
    try {
      s.estimate = lyapunov(wf, Configuration{s.x0, 0.0}, p, iparams);
    } catch (const DomainError&) {
      s.estimate.status = LyapunovStatus::DomainExit;
    } catch (const NodeProximityError&) {
      s.estimate.status = LyapunovStatus::NodeEncounter;
    }
  };

  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(n_samples)));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n_samples; ++i) run_one(i);
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::exception_ptr> errors(jobs);
    std::vector<std::thread> pool;
    for (unsigned w = 0; w < jobs; ++w) {
      pool.emplace_back([&, w] {
        try {
          for (std::size_t i; (i = next.fetch_add(1)) < n_samples;) run_one(i);
        } catch (...) {
          errors[w] = std::current_exception();
          next.store(n_samples);
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }

  double sum = 0.0;
  for (const auto& s : result.per_sample) {
    if (excluded(s.estimate.status)) {
      ++result.excluded;
    } else {
      ++result.included;
      sum += s.estimate.final_h;
    }
  }
  if (result.included == 0) throw NumericalError("ensemble: every sample was excluded");
  result.mean_h = sum / static_cast<double>(result.included);
  if (result.included > 1) {
    double ss = 0.0;
    for (const auto& s : result.per_sample)
      if (!excluded(s.estimate.status)) ss += std::pow(s.estimate.final_h - result.mean_h, 2);
    result.std_h = std::sqrt(ss / static_cast<double>(result.included - 1));
  }
  return result;
}

std::vector<SectionPoint> poincare_section(const WaveFunction& wf, const Configuration& x0, SectionPlane plane,
                                           double t_max, const IntegratorParams& iparams) {
  iparams.validate();
  if (plane.coordinate < 0 || plane.coordinate >= wf.configuration_size()) {
    throw ValidationError("section: plane coordinate out of range");
  }
  if (!(t_max > 0.0)) throw ValidationError("section: t_max must be positive");
  if (static_cast<int>(x0.coordinates.size()) != wf.configuration_size()) {
    throw DomainError("section: initial configuration has the wrong size");
  }
  evaluate(wf, x0);
  StepControl control = iparams.step_control();
  control.max_steps = iparams.step_allowance(t_max);
  return detail::section(GuidanceField(wf, iparams), x0.coordinates, x0.time, plane, t_max, control);
}

}  // namespace bohm
