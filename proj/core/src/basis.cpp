#include "bohm/basis.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

#include "bohm/error.hpp"

namespace bohm {
namespace {

constexpr double kPi = std::numbers::pi;

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double binomial(int n, int k) {
  if (k < 0 || k > n) return 0.0;
  return factorial(n) / (factorial(k) * factorial(n - k));
}

// Normalized 1-d oscillator eigenfunction (2^n n! sqrt(pi))^{-1/2} H_n(x) e^{-x^2/2}
// by the stable upward recurrence.
ValueDerivative oscillator_function(int n, double x) {
  double prev = 0.0;
  double cur = std::pow(kPi, -0.25) * std::exp(-0.5 * x * x);
  for (int k = 0; k < n; ++k) {
    const double next = std::sqrt(2.0 / (k + 1)) * x * cur - std::sqrt(static_cast<double>(k) / (k + 1)) * prev;
    prev = cur;
    cur = next;
  }
  return {cur, std::sqrt(2.0 * n) * prev - x * cur};
}

std::string family_error(BasisFamily family, std::span<const int> qn, const std::string& what) {
  std::ostringstream os;
  os << to_string(family) << "(";
  for (std::size_t i = 0; i < qn.size(); ++i) os << (i ? "," : "") << qn[i];
  os << "): " << what;
  return os.str();
}

}  // namespace

int spatial_dimension(BasisFamily family) {
  switch (family) {
    case BasisFamily::Box2D:
    case BasisFamily::Harm2DCart:
    case BasisFamily::Harm2DPolar:
      return 2;
    case BasisFamily::Harm3DCart:
    case BasisFamily::Harm3DSph:
      return 3;
  }
  return 0;
}

int quantum_number_count(BasisFamily family) { return spatial_dimension(family); }

PotentialKind potential_kind(BasisFamily family) {
  return family == BasisFamily::Box2D ? PotentialKind::Box : PotentialKind::Harmonic;
}

std::string_view to_string(BasisFamily family) {
  switch (family) {
    case BasisFamily::Box2D: return "Box2D";
    case BasisFamily::Harm2DCart: return "Harm2DCart";
    case BasisFamily::Harm2DPolar: return "Harm2DPolar";
    case BasisFamily::Harm3DCart: return "Harm3DCart";
    case BasisFamily::Harm3DSph: return "Harm3DSph";
  }
  return "?";
}

std::optional<BasisFamily> parse_family(std::string_view name) {
  for (auto f : {BasisFamily::Box2D, BasisFamily::Harm2DCart, BasisFamily::Harm2DPolar,
                 BasisFamily::Harm3DCart, BasisFamily::Harm3DSph}) {
    if (to_string(f) == name) return f;
  }
  return std::nullopt;
}

BasisState::BasisState(BasisFamily family, std::span<const int> qn) : family_(family) {
  const int count = quantum_number_count(family);
  if (static_cast<int>(qn.size()) != count) {
    throw ValidationError(family_error(family, qn, "expected " + std::to_string(count) + " quantum numbers"));
  }
  switch (family) {
    case BasisFamily::Box2D:
      for (int n : qn)
        if (n < 1) throw ValidationError(family_error(family, qn, "box quantum numbers must be >= 1"));
      break;
    case BasisFamily::Harm2DCart:
    case BasisFamily::Harm2DPolar:
    case BasisFamily::Harm3DCart:
      for (int n : qn)
        if (n < 0) throw ValidationError(family_error(family, qn, "quantum numbers must be >= 0"));
      break;
    case BasisFamily::Harm3DSph:
      if (qn[0] < 0 || qn[1] < 0) throw ValidationError(family_error(family, qn, "k and l must be >= 0"));
      if (std::abs(qn[2]) > qn[1]) throw ValidationError(family_error(family, qn, "|m| must not exceed l"));
      break;
  }
  count_ = count;
  for (int i = 0; i < count; ++i) numbers_[i] = qn[i];
}

BasisState BasisState::box(int nx, int ny) {
  const int q[] = {nx, ny};
  return BasisState(BasisFamily::Box2D, q);
}
BasisState BasisState::harm2d(int nx, int ny) {
  const int q[] = {nx, ny};
  return BasisState(BasisFamily::Harm2DCart, q);
}
BasisState BasisState::polar(int nr, int nl) {
  const int q[] = {nr, nl};
  return BasisState(BasisFamily::Harm2DPolar, q);
}
BasisState BasisState::harm3d(int nx, int ny, int nz) {
  const int q[] = {nx, ny, nz};
  return BasisState(BasisFamily::Harm3DCart, q);
}
BasisState BasisState::spherical(int k, int l, int m) {
  const int q[] = {k, l, m};
  return BasisState(BasisFamily::Harm3DSph, q);
}

int BasisState::angular_momentum() const {
  switch (family_) {
    case BasisFamily::Harm2DPolar: return numbers_[0] - numbers_[1];
    case BasisFamily::Harm3DSph: return numbers_[2];
    default: return 0;
  }
}

std::string BasisState::label() const {
  std::ostringstream os;
  os << to_string(family_) << "(";
  for (int i = 0; i < count_; ++i) os << (i ? "," : "") << numbers_[i];
  os << ")";
  return os.str();
}

ValueDerivative hermite(int n, double x) {
  double prev = 0.0;  // H_{-1}, only multiplied by 0
  double cur = 1.0;
  for (int k = 0; k < n; ++k) {
    const double next = 2.0 * x * cur - 2.0 * k * prev;
    prev = cur;
    cur = next;
  }
  return {cur, 2.0 * n * prev};
}

ValueDerivative laguerre_assoc(int n, double alpha, double x) {
  if (alpha <= -1.0) throw DomainError("laguerre_assoc: alpha must exceed -1");
  if (x < 0.0) throw DomainError("laguerre_assoc: x must be non-negative");
  if (n < 0) throw DomainError("laguerre_assoc: n must be non-negative");
  // Values of L_k^alpha and L_k^{alpha+1}; the derivative is -L_{n-1}^{alpha+1}.
  auto value = [x](int order, double a) {
    double prev = 0.0;
    double cur = 1.0;
    for (int k = 0; k < order; ++k) {
      const double next = ((2.0 * k + 1.0 + a - x) * cur - (k + a) * prev) / (k + 1.0);
      prev = cur;
      cur = next;
    }
    return cur;
  };
  return {value(n, alpha), n == 0 ? 0.0 : -value(n - 1, alpha + 1.0)};
}

std::vector<double> legendre_derivative_coefficients(int l, int m) {
  std::vector<double> c(static_cast<std::size_t>(l) + 1, 0.0);
  for (int k = 0; 2 * k <= l; ++k) {
    c[l - 2 * k] = std::ldexp((k % 2 ? -1.0 : 1.0) * binomial(l, k) * binomial(2 * l - 2 * k, l), -l);
  }
  for (int d = 0; d < m; ++d) {
    if (c.size() <= 1) {
      c.assign(1, 0.0);
      break;
    }
    std::vector<double> dc(c.size() - 1);
    for (std::size_t i = 1; i < c.size(); ++i) dc[i - 1] = static_cast<double>(i) * c[i];
    c = std::move(dc);
  }
  return c;
}

namespace {

double horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

double harmonic_norm(int l, int abs_m) {
  return std::sqrt((2.0 * l + 1.0) / (4.0 * kPi) * factorial(l - abs_m) / factorial(l + abs_m));
}

}  // namespace

SphericalHarmonicEval spherical_harmonic(int l, int m, double theta, double phi) {
  if (l < 0 || std::abs(m) > l) throw DomainError("spherical_harmonic: |m| must not exceed l");
  const int am = std::abs(m);
  const double c = std::cos(theta);
  const double s = std::sin(theta);
  const auto q = legendre_derivative_coefficients(l, am);
  const auto dq = legendre_derivative_coefficients(l, am + 1);
  const double sign = (m >= 0 && am % 2 == 1) ? -1.0 : 1.0;
  const double k = harmonic_norm(l, am) * sign;
  const double qv = horner(q, c);
  const double theta_part = k * std::pow(s, am) * qv;
  double dtheta_part = -k * std::pow(s, am + 1) * horner(dq, c);
  if (am > 0) dtheta_part += k * am * std::pow(s, am - 1) * c * qv;
  const cdouble phase = std::polar(1.0, m * phi);
  const cdouble value = theta_part * phase;
  return {value, dtheta_part * phase, cdouble(0.0, m) * value};
}

double energy(const BasisState& state) {
  const auto q = state.quantum_numbers();
  switch (state.family()) {
    case BasisFamily::Box2D: return 0.5 * kPi * kPi * (q[0] * q[0] + q[1] * q[1]);
    case BasisFamily::Harm2DCart:
    case BasisFamily::Harm2DPolar: return q[0] + q[1] + 1.0;
    case BasisFamily::Harm3DCart: return q[0] + q[1] + q[2] + 1.5;
    case BasisFamily::Harm3DSph: return 2.0 * q[0] + q[1] + 1.5;
  }
  return 0.0;
}

double potential(PotentialKind kind, std::span<const double> point) {
  if (kind == PotentialKind::Box) return 0.0;
  double r2 = 0.0;
  for (double c : point) r2 += c * c;
  return 0.5 * r2;
}

BasisFunction::BasisFunction(const BasisState& state) : state_(state) {
  const auto q = state.quantum_numbers();
  switch (state.family()) {
    case BasisFamily::Box2D:
    case BasisFamily::Harm2DCart:
    case BasisFamily::Harm3DCart:
      break;
    case BasisFamily::Harm2DPolar: {
      const int m = q[0] - q[1];
      abs_m_ = std::abs(m);
      m_sign_ = m >= 0 ? 1 : -1;
      lag_n_ = std::min(q[0], q[1]);
      lag_alpha_ = abs_m_;
      norm_ = std::sqrt(factorial(lag_n_) / (kPi * factorial(lag_n_ + abs_m_)));
      t_coeff_ = {1.0};
      t_zpow_ = {0};
      t_rhopow_ = {0};
      break;
    }
    case BasisFamily::Harm3DSph: {
      const int k = q[0];
      const int l = q[1];
      const int m = q[2];
      abs_m_ = std::abs(m);
      m_sign_ = m >= 0 ? 1 : -1;
      lag_n_ = k;
      lag_alpha_ = l + 0.5;
      // Radial normalization from int_0^inf R^2 r^2 dr = 1 with
      // R = r^l e^{-r^2/2} L_k^{l+1/2}(r^2).
      const double radial = std::sqrt(2.0 * factorial(k) / std::tgamma(k + l + 1.5));
      const double cs = (m >= 0 && abs_m_ % 2 == 1) ? -1.0 : 1.0;
      norm_ = radial * harmonic_norm(l, abs_m_) * cs;
      const auto c = legendre_derivative_coefficients(l, abs_m_);
      const int degree = l - abs_m_;
      for (int j = 0; j < static_cast<int>(c.size()); ++j) {
        if (c[j] == 0.0 || (degree - j) % 2 != 0) continue;
        t_coeff_.push_back(c[j]);
        t_zpow_.push_back(j);
        t_rhopow_.push_back((degree - j) / 2);
      }
      break;
    }
  }
}

bool BasisFunction::eval(std::span<const double> p, PointEval& out) const {
  switch (state_.family()) {
    case BasisFamily::Box2D:
      return eval_box(p, out);
    case BasisFamily::Harm2DCart:
      eval_hermite(p, 2, out);
      return true;
    case BasisFamily::Harm3DCart:
      eval_hermite(p, 3, out);
      return true;
    case BasisFamily::Harm2DPolar:
      eval_solid(p, 2, out);
      return true;
    case BasisFamily::Harm3DSph:
      eval_solid(p, 3, out);
      return true;
  }
  return false;
}

bool BasisFunction::eval_box(std::span<const double> p, PointEval& out) const {
  const double x = p[0];
  const double y = p[1];
  if (!(x >= 0.0 && x <= 1.0 && y >= 0.0 && y <= 1.0)) return false;
  const auto q = state_.quantum_numbers();
  const double kx = q[0] * kPi;
  const double ky = q[1] * kPi;
  const double sx = std::sin(kx * x);
  const double sy = std::sin(ky * y);
  out.value = 2.0 * sx * sy;
  out.gradient = {2.0 * kx * std::cos(kx * x) * sy, 2.0 * ky * sx * std::cos(ky * y), 0.0};
  return true;
}

void BasisFunction::eval_hermite(std::span<const double> p, int dim, PointEval& out) const {
  const auto q = state_.quantum_numbers();
  std::array<ValueDerivative, 3> f{};
  for (int i = 0; i < dim; ++i) f[i] = oscillator_function(q[i], p[i]);
  double value = 1.0;
  for (int i = 0; i < dim; ++i) value *= f[i].value;
  out.value = value;
  out.gradient = {0.0, 0.0, 0.0};
  for (int i = 0; i < dim; ++i) {
    double g = f[i].derivative;
    for (int j = 0; j < dim; ++j)
      if (j != i) g *= f[j].value;
    out.gradient[i] = g;
  }
}

namespace {

double ipow(double x, int n) {
  double r = 1.0;
  for (; n > 0; --n) r *= x;
  return r;
}

}  // namespace

void BasisFunction::eval_solid(std::span<const double> p, int dim, PointEval& out) const {
  const double x = p[0];
  const double y = p[1];
  const double z = dim == 3 ? p[2] : 0.0;
  const double rho = x * x + y * y + z * z;

  const auto lag = laguerre_assoc(lag_n_, lag_alpha_, rho);
  const double gauss = std::exp(-0.5 * rho);
  const double a = norm_ * gauss * lag.value;
  const double da = norm_ * gauss * (lag.derivative - 0.5 * lag.value);  // d/d rho

  const cdouble w(x, m_sign_ * y);
  cdouble wm1 = 1.0;  // w^{|m|-1}
  for (int i = 1; i < abs_m_; ++i) wm1 *= w;
  const cdouble wm = abs_m_ == 0 ? cdouble(1.0) : wm1 * w;

  double t = 0.0;
  double tz = 0.0;
  double trho = 0.0;
  for (std::size_t i = 0; i < t_coeff_.size(); ++i) {
    const int jz = t_zpow_[i];
    const int jr = t_rhopow_[i];
    const double zp = jz > 0 ? ipow(z, jz - 1) : 0.0;
    const double rp = jr > 0 ? ipow(rho, jr - 1) : 0.0;
    const double zj = jz > 0 ? zp * z : 1.0;
    const double rj = jr > 0 ? rp * rho : 1.0;
    t += t_coeff_[i] * zj * rj;
    if (jz > 0) tz += t_coeff_[i] * jz * zp * rj;
    if (jr > 0) trho += t_coeff_[i] * jr * zj * rp;
  }

  const cdouble s = wm * t;
  const cdouble dsx = static_cast<double>(abs_m_) * wm1 * t + wm * (2.0 * x * trho);
  const cdouble dsy = cdouble(0.0, m_sign_ * abs_m_) * wm1 * t + wm * (2.0 * y * trho);
  const cdouble dsz = wm * (tz + 2.0 * z * trho);

  out.value = a * s;
  out.gradient[0] = 2.0 * x * da * s + a * dsx;
  out.gradient[1] = 2.0 * y * da * s + a * dsy;
  out.gradient[2] = dim == 3 ? 2.0 * z * da * s + a * dsz : cdouble(0.0);
}

PointEval eval_state(const BasisState& state, std::span<const double> point) {
  if (static_cast<int>(point.size()) != state.dimension()) {
    throw DomainError("eval_state: point dimension does not match " + state.label());
  }
  PointEval out{};
  if (!BasisFunction(state).eval(point, out)) {
    throw DomainError("eval_state: point outside the unit square for " + state.label());
  }
  return out;
}

}  // namespace bohm
