#pragma once

// Single-particle energy eigenstates of the 2-d box, the 2-d harmonic
// oscillator (Cartesian and polar) and the 3-d harmonic oscillator
// (Cartesian and spherical). Units hbar = m = omega = 1, box side 1.
//
// Every state is evaluated in Cartesian coordinates. The polar and
// spherical families are written as radial polynomials times solid
// harmonics, (x +/- iy)^|m| T(z, r^2), so values and gradients are regular
// on the z-axis and at the origin.

#include <array>
#include <complex>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace bohm {

using cdouble = std::complex<double>;

enum class BasisFamily { Box2D, Harm2DCart, Harm2DPolar, Harm3DCart, Harm3DSph };

/// External potential a family belongs to; particles may not mix them.
enum class PotentialKind { Box, Harmonic };

int spatial_dimension(BasisFamily family);
int quantum_number_count(BasisFamily family);
PotentialKind potential_kind(BasisFamily family);
std::string_view to_string(BasisFamily family);
std::optional<BasisFamily> parse_family(std::string_view name);

/// A validated (family, quantum numbers) pair.
class BasisState {
 public:
  /// Throws ValidationError when the numbers violate the family's ranges
  /// (Box2D n >= 1; oscillators n >= 0; spherical |m| <= l).
  BasisState(BasisFamily family, std::span<const int> quantum_numbers);

  static BasisState box(int nx, int ny);
  static BasisState harm2d(int nx, int ny);
  static BasisState polar(int nr, int nl);
  static BasisState harm3d(int nx, int ny, int nz);
  static BasisState spherical(int k, int l, int m);

  BasisFamily family() const { return family_; }
  std::span<const int> quantum_numbers() const {
    return {numbers_.data(), static_cast<std::size_t>(count_)};
  }
  int dimension() const { return spatial_dimension(family_); }

  /// L_z eigenvalue for polar/spherical states, 0 for the real families.
  int angular_momentum() const;

  /// e.g. "Harm3DSph(0,3,1)"
  std::string label() const;

  friend bool operator==(const BasisState&, const BasisState&) = default;

 private:
  BasisFamily family_;
  std::array<int, 3> numbers_{};
  int count_ = 0;
};

struct PointEval {
  cdouble value;
  std::array<cdouble, 3> gradient{};  // unused trailing entries are zero in 2-d
};

struct ValueDerivative {
  double value;
  double derivative;
};

/// Physicists' Hermite polynomial H_n(x) and H_n'(x) = 2n H_{n-1}(x).
ValueDerivative hermite(int n, double x);

/// Generalized Laguerre L_n^alpha(x) and its x-derivative -L_{n-1}^{alpha+1}(x).
/// Throws DomainError when alpha <= -1 or x < 0.
ValueDerivative laguerre_assoc(int n, double alpha, double x);

struct SphericalHarmonicEval {
  cdouble value;
  cdouble dtheta;
  cdouble dphi;
};

/// Y_l^m(theta, phi) with the Condon-Shortley phase, and its partial
/// derivatives. Throws DomainError when |m| > l.
SphericalHarmonicEval spherical_harmonic(int l, int m, double theta, double phi);

/// phi(point) and its Cartesian gradient. Throws DomainError for Box2D
/// points outside the unit square.
PointEval eval_state(const BasisState& state, std::span<const double> point);

double energy(const BasisState& state);

/// External potential V for one particle at `point`.
double potential(PotentialKind kind, std::span<const double> point);

/// Precomputed form of a BasisState for repeated evaluation. Construction
/// does the factorials and polynomial coefficients once; eval is
/// allocation-free and reports out-of-domain points instead of throwing.
class BasisFunction {
 public:
  explicit BasisFunction(const BasisState& state);

  const BasisState& state() const { return state_; }

  /// Returns false when `point` is outside the family's domain.
  bool eval(std::span<const double> point, PointEval& out) const;

 private:
  bool eval_box(std::span<const double> p, PointEval& out) const;
  void eval_hermite(std::span<const double> p, int dim, PointEval& out) const;
  void eval_solid(std::span<const double> p, int dim, PointEval& out) const;

  BasisState state_;
  double norm_ = 1.0;
  // Solid-harmonic families: |m|, sign of m, radial Laguerre order/alpha,
  // and the polynomial T(z, rho) = sum_j coeff[j] z^j rho^power[j].
  int abs_m_ = 0;
  int m_sign_ = 1;
  int lag_n_ = 0;
  double lag_alpha_ = 0.0;
  std::vector<double> t_coeff_;
  std::vector<int> t_zpow_;
  std::vector<int> t_rhopow_;
};

/// Coefficients (ascending powers) of d^m/dx^m P_l(x).
std::vector<double> legendre_derivative_coefficients(int l, int m);

}  // namespace bohm
