#pragma once

// Flow-generic Benettin and section routines shared by the Bohmian and
// Henon-Heiles front ends.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

#include "bohm/chaos.hpp"
#include "bohm/ode.hpp"

namespace bohm::detail {

inline double distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += (a[i] - b[i]) * (a[i] - b[i]);
  return std::sqrt(s);
}

// The estimate counts as converged when h over the last tenth of the run
// moved by less than 5% (or 1e-3 absolute).
inline bool settled(const std::vector<std::pair<double, double>>& series) {
  if (series.size() < 10) return false;
  const double last = series.back().second;
  const double earlier = series[series.size() * 9 / 10 - 1].second;
  return std::abs(last - earlier) <= std::max(0.05 * std::abs(last), 1e-3);
}

// `fail(status, solver)` maps a non-Reached outcome to a LyapunovStatus.
// `check(t, y)` runs on the reference state after every interval.
// `allowance(elapsed)` bounds the cumulative attempted steps of each trajectory.
template <class Field, class Fail, class Check, class Allowance>
LyapunovEstimate benettin(const Field& field, std::span<const double> x0, double t0, std::span<const double> e0,
                          const LyapunovParams& p, const StepControl& control, Fail&& fail, Check&& check,
                          Allowance&& allowance) {
  const std::size_t n = x0.size();
  DormandPrince45<Field> ref(field, n, control);
  DormandPrince45<Field> comp(field, n, control);
  LyapunovEstimate out;
  std::vector<double> companion(n);
  for (std::size_t i = 0; i < n; ++i) companion[i] = x0[i] + p.d0 * e0[i];
  if (!ref.reset(t0, x0)) {
    out.status = fail(AdvanceStatus::FieldInvalid, ref);
    return out;
  }
  if (!comp.reset(t0, companion)) {
    out.status = fail(AdvanceStatus::FieldInvalid, comp);
    return out;
  }
  // Separation actually realised after rounding; a frozen flow then
  // accumulates exactly zero.
  double d_start = distance(comp.y(), ref.y());
  double sum = 0.0;
  out.h_series.reserve(static_cast<std::size_t>(p.n_steps));
  for (long k = 1; k <= p.n_steps; ++k) {
    const double target = t0 + static_cast<double>(k) * p.dt;
    const long allowed = allowance(static_cast<double>(k) * p.dt);
    ref.set_max_steps(std::max(1L, allowed - ref.accepted_steps() - ref.rejected_steps()));
    comp.set_max_steps(std::max(1L, allowed - comp.accepted_steps() - comp.rejected_steps()));
    AdvanceStatus s = ref.advance_to(target);
    if (s != AdvanceStatus::Reached) {
      out.status = fail(s, ref);
      break;
    }
    s = comp.advance_to(target);
    if (s != AdvanceStatus::Reached) {
      out.status = fail(s, comp);
      break;
    }
    check(target, ref.y());
    const double d = distance(comp.y(), ref.y());
    if (!(d > 0.0) || !std::isfinite(d)) {
      out.status = LyapunovStatus::StepFailure;
      break;
    }
    sum += std::log(d / d_start);
    const double elapsed = static_cast<double>(k) * p.dt;
    out.h_series.emplace_back(elapsed, sum / elapsed);
    const auto yr = ref.y();
    const auto yc = comp.y();
    for (std::size_t i = 0; i < n; ++i) companion[i] = yr[i] + p.d0 * (yc[i] - yr[i]) / d;
    if (!comp.set_state(target, companion)) {
      out.status = fail(AdvanceStatus::FieldInvalid, comp);
      break;
    }
    d_start = distance(comp.y(), ref.y());
    if (k == p.n_steps) out.status = settled(out.h_series) ? LyapunovStatus::Converged : LyapunovStatus::MaxTime;
  }
  if (!out.h_series.empty()) out.final_h = out.h_series.back().second;
  return out;
}

// Crossings of y[plane.coordinate] = plane.level over [t0, t0 + t_max].
template <class Field>
std::vector<SectionPoint> section(const Field& field, std::span<const double> x0, double t0, SectionPlane plane,
                                  double t_max, StepControl control) {
  const std::size_t n = x0.size();
  const auto c = static_cast<std::size_t>(plane.coordinate);
  DormandPrince45<Field> solver(field, n, control);
  std::vector<SectionPoint> points;
  if (!solver.reset(t0, x0)) return points;
  std::vector<double> ya(n);
  std::vector<double> trial(n);
  auto observer = [&](double ta, std::span<const double> y0, double tb, std::span<const double> y1) {
    const double sa = y0[c] - plane.level;
    const double sb = y1[c] - plane.level;
    // a start exactly on the plane was reported by the previous step
    const bool crossed = sa != 0.0 && (sb == 0.0 || (sa < 0.0) != (sb < 0.0));
    if (!crossed) return true;
    std::copy(y0.begin(), y0.end(), ya.begin());
    const std::vector<double> yb(y1.begin(), y1.end());
    double lo = 0.0;
    double hi = tb - ta;
    SectionPoint pt;
    pt.direction = sb > sa ? 1 : -1;
    pt.t = tb;
    pt.x = yb;
    double best = std::abs(sb);
    for (int it = 0; it < 200 && best > 1e-10; ++it) {
      const double mid = 0.5 * (lo + hi);
      if (mid == lo || mid == hi) break;
      if (!solver.fixed_step(ta, ya, mid, trial)) break;
      const double sm = trial[c] - plane.level;
      pt.t = ta + mid;
      pt.x = trial;
      best = std::abs(sm);
      if ((sm < 0.0) == (sa < 0.0)) lo = mid; else hi = mid;
    }
    points.push_back(std::move(pt));
    return true;
  };
  solver.advance_to(t0 + t_max, observer);
  return points;
}

}  // namespace bohm::detail
