#pragma once

// Embedded Dormand-Prince 5(4) integrator with PI step-size control
// (Hairer, Norsett & Wanner, Solving ODEs I, DOPRI5). Header-only so the
// right-hand side inlines into the stage loop.
//
// The field is any callable
//     bool f(double t, std::span<const double> y, std::span<double> dydt)
// returning false when y is outside the region where the field is
// defined; such a stage rejects the step and shrinks it.

#include <algorithm>
#include <cmath>
#include <span>
#include <vector>

namespace bohm {

struct StepControl {
  double rel_tol = 1e-9;
  double abs_tol = 1e-9;
  double max_step = 0.1;
  double min_step = 1e-12;
  long max_steps = 500'000'000;
};

enum class AdvanceStatus {
  Reached,        // t_end reached
  FieldInvalid,   // stages kept leaving the valid region down to min_step
  StepTooSmall,   // error control could not be met at min_step
  TooManySteps,
  Stopped,        // observer requested a stop
};

template <class Field>
class DormandPrince45 {
 public:
  DormandPrince45(Field field, std::size_t n, StepControl control)
      : field_(std::move(field)), n_(n), control_(control), y_(n), k_(7, std::vector<double>(n)), ytmp_(n), ynew_(n),
        err_(n) {}

  std::size_t size() const { return n_; }
  double t() const { return t_; }
  std::span<const double> y() const { return y_; }
  long accepted_steps() const { return accepted_; }
  long rejected_steps() const { return rejected_; }
  const StepControl& control() const { return control_; }
  /// Caps the attempted steps (accepted + rejected) of later advance_to calls.
  void set_max_steps(long n) { control_.max_steps = n; }
  Field& field() { return field_; }

  /// Sets the state; returns false if the field is invalid at (t, y).
  bool reset(double t, std::span<const double> y) {
    t_ = t;
    std::copy(y.begin(), y.end(), y_.begin());
    h_ = 0.0;
    err_old_ = 1e-4;
    return field_(t_, y_, k_[0]);
  }

  /// Replaces the state without discarding the step-size history.
  bool set_state(double t, std::span<const double> y) {
    t_ = t;
    std::copy(y.begin(), y.end(), y_.begin());
    return field_(t_, y_, k_[0]);
  }

  /// Integrates to t_end (either direction). After every accepted step the
  /// observer is called as obs(t0, y0, t1, y1) and may return false to stop.
  template <class Observer>
  AdvanceStatus advance_to(double t_end, Observer&& obs) {
    const double dir = t_end >= t_ ? 1.0 : -1.0;
    if (t_ == t_end) return AdvanceStatus::Reached;
    if (h_ == 0.0) h_ = initial_step(dir);
    long steps = 0;
    while (dir * (t_end - t_) > 0.0) {
      if (++steps > control_.max_steps) return AdvanceStatus::TooManySteps;
      double h = std::min(std::abs(h_), control_.max_step);
      bool last = false;
      if (h >= std::abs(t_end - t_) * (1.0 - 1e-14)) {
        h = std::abs(t_end - t_);
        last = true;
      }
      h *= dir;

      if (!stages(t_, y_, h)) {
        ++rejected_;
        h_ = 0.25 * std::abs(h);
        if (h_ < control_.min_step) return AdvanceStatus::FieldInvalid;
        continue;
      }
      const double err = error_norm();
      if (!std::isfinite(err)) {
        ++rejected_;
        h_ = 0.25 * std::abs(h);
        if (h_ < control_.min_step) return AdvanceStatus::StepTooSmall;
        continue;
      }
      // PI controller, DOPRI5 constants.
      constexpr double beta = 0.04;
      constexpr double expo1 = 0.2 - beta * 0.75;
      constexpr double safe = 0.9;
      double fac11 = std::pow(err, expo1);
      double fac = fac11 / std::pow(err_old_, beta) / safe;
      fac = std::clamp(fac, 0.1, 5.0);  // step may grow 10x or shrink 5x
      if (err <= 1.0) {
        err_old_ = std::max(err, 1e-4);
        const double hnew = std::abs(h) / fac;
        const double t0 = t_;
        ytmp_.swap(y_);  // ytmp_ holds y0 for the observer
        y_.swap(ynew_);  // y_ = y1, ynew_ free
        std::swap(k_[0], k_[6]);  // first-same-as-last
        t_ = last ? t_end : t_ + h;
        ++accepted_;
        // keep the controller proposal when the step was clipped to t_end
        if (!last || hnew > std::abs(h_)) h_ = hnew;
        if (!obs(t0, std::span<const double>(ytmp_), t_, std::span<const double>(y_))) return AdvanceStatus::Stopped;
      } else {
        ++rejected_;
        h_ = std::abs(h) / std::min(5.0, fac11 / safe);
        if (h_ < control_.min_step) return AdvanceStatus::StepTooSmall;
      }
    }
    return AdvanceStatus::Reached;
  }

  AdvanceStatus advance_to(double t_end) {
    return advance_to(t_end, [](double, std::span<const double>, double, std::span<const double>) { return true; });
  }

  /// One fixed step of size h from (t, y) without error control. Used to
  /// refine event locations inside an accepted step. Returns false if a
  /// stage left the valid region.
  bool fixed_step(double t, std::span<const double> y, double h, std::span<double> out) {
    if (!field_(t, y, k_[0])) return false;
    if (!stages(t, y, h)) return false;
    std::copy(ynew_.begin(), ynew_.end(), out.begin());
    // restore the derivative at the current state
    return field_(t_, y_, k_[0]);
  }

 private:
  // Fills k_[1..6] and ynew_ (5th order) and err_ (embedded difference)
  // assuming k_[0] = f(t, y).
  bool stages(double t, std::span<const double> y, double h) {
    constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
    constexpr double a21 = 1.0 / 5;
    constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
    constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
    constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561, a54 = -212.0 / 729;
    constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247, a64 = 49.0 / 176,
                     a65 = -5103.0 / 18656;
    constexpr double a71 = 35.0 / 384, a73 = 500.0 / 1113, a74 = 125.0 / 192, a75 = -2187.0 / 6784,
                     a76 = 11.0 / 84;
    constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920, e5 = -17253.0 / 339200,
                     e6 = 22.0 / 525, e7 = -1.0 / 40;
    auto& k1 = k_[0];
    auto& k2 = k_[1];
    auto& k3 = k_[2];
    auto& k4 = k_[3];
    auto& k5 = k_[4];
    auto& k6 = k_[5];
    auto& k7 = k_[6];
    for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * a21 * k1[i];
    if (!field_(t + c2 * h, ytmp_, k2)) return false;
    for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * (a31 * k1[i] + a32 * k2[i]);
    if (!field_(t + c3 * h, ytmp_, k3)) return false;
    for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y[i] + h * (a41 * k1[i] + a42 * k2[i] + a43 * k3[i]);
    if (!field_(t + c4 * h, ytmp_, k4)) return false;
    for (std::size_t i = 0; i < n_; ++i)
      ytmp_[i] = y[i] + h * (a51 * k1[i] + a52 * k2[i] + a53 * k3[i] + a54 * k4[i]);
    if (!field_(t + c5 * h, ytmp_, k5)) return false;
    for (std::size_t i = 0; i < n_; ++i)
      ytmp_[i] = y[i] + h * (a61 * k1[i] + a62 * k2[i] + a63 * k3[i] + a64 * k4[i] + a65 * k5[i]);
    if (!field_(t + h, ytmp_, k6)) return false;
    for (std::size_t i = 0; i < n_; ++i)
      ynew_[i] = y[i] + h * (a71 * k1[i] + a73 * k3[i] + a74 * k4[i] + a75 * k5[i] + a76 * k6[i]);
    if (!field_(t + h, ynew_, k7)) return false;
    for (std::size_t i = 0; i < n_; ++i) {
      err_[i] = h * (e1 * k1[i] + e3 * k3[i] + e4 * k4[i] + e5 * k5[i] + e6 * k6[i] + e7 * k7[i]);
    }
    // keep y for the error scale
    scale_ref_ = y.data();
    return true;
  }

  double error_norm() const {
    double sum = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sc = control_.abs_tol + control_.rel_tol * std::max(std::abs(scale_ref_[i]), std::abs(ynew_[i]));
      const double r = err_[i] / sc;
      sum += r * r;
    }
    return std::sqrt(sum / static_cast<double>(n_));
  }

  double initial_step(double dir) {
    // Hairer's starting step heuristic, bounded by max_step.
    double dnf = 0.0;
    double dny = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = control_.abs_tol + control_.rel_tol * std::abs(y_[i]);
      dnf += (k_[0][i] / sk) * (k_[0][i] / sk);
      dny += (y_[i] / sk) * (y_[i] / sk);
    }
    double h = (dnf <= 1e-10 || dny <= 1e-10) ? 1e-6 : 0.01 * std::sqrt(dny / dnf);
    h = std::min(h, control_.max_step);
    for (std::size_t i = 0; i < n_; ++i) ytmp_[i] = y_[i] + dir * h * k_[0][i];
    if (!field_(t_ + dir * h, ytmp_, k_[1])) return std::max(control_.min_step, h * 1e-3);
    double der2 = 0.0;
    for (std::size_t i = 0; i < n_; ++i) {
      const double sk = control_.abs_tol + control_.rel_tol * std::abs(y_[i]);
      const double d = (k_[1][i] - k_[0][i]) / sk;
      der2 += d * d;
    }
    der2 = std::sqrt(der2 / static_cast<double>(n_)) / h;
    const double der12 = std::max(der2, std::sqrt(dnf / static_cast<double>(n_)));
    const double h1 = der12 <= 1e-15 ? std::max(1e-6, h * 1e-3) : std::pow(0.01 / der12, 0.2);
    return std::min({100.0 * h, h1, control_.max_step});
  }

  Field field_;
  std::size_t n_;
  StepControl control_;
  double t_ = 0.0;
  double h_ = 0.0;
  double err_old_ = 1e-4;
  long accepted_ = 0;
  long rejected_ = 0;
  std::vector<double> y_;
  std::vector<std::vector<double>> k_;
  std::vector<double> ytmp_;
  std::vector<double> ynew_;
  std::vector<double> err_;
  const double* scale_ref_ = nullptr;
};

}  // namespace bohm
