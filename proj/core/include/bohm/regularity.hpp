#pragma once

// Structural detection of wave functions that carry constants of motion,
// numerical verification of those constants along trajectories, and the
// rotating frame of two-term single-particle superpositions.

#include <array>
#include <string>
#include <vector>

#include "bohm/basis.hpp"
#include "bohm/dynamics.hpp"
#include "bohm/wavefunction.hpp"

namespace bohm {

/// One-dimensional real factor of a basis state along a chart coordinate.
/// The Gaussian envelope shared by oscillator factors is dropped: it
/// cancels from every quotient used below.
enum class FactorKind {
  Hermite,          // H_n(x)
  Sine,             // sin(n pi x)
  PolarRadial,      // r^m L_n^m(r^2)
  SphericalRadial,  // r^l L_k^{l+1/2}(r^2)
  PolarAngle,       // sin^m(theta) P_l^(m)(cos theta)
};

struct Factor1D {
  FactorKind kind = FactorKind::Hermite;
  int n = 0;  // Hermite/sine order, Laguerre order, or l for PolarAngle
  int m = 0;  // |m| or l where relevant

  friend bool operator==(const Factor1D&, const Factor1D&) = default;
};

ValueDerivative eval_factor(const Factor1D& f, double u);
std::string to_string(const Factor1D& f);

enum class ChartAxis { X, Y, Z, R, Theta };

struct ChartCoordinate {
  int particle = 0;
  ChartAxis axis = ChartAxis::X;

  friend bool operator==(const ChartCoordinate&, const ChartCoordinate&) = default;
};

std::string to_string(const ChartCoordinate& c);  // e.g. "x1", "theta2"

/// Value of a chart coordinate at a Cartesian configuration.
double chart_value(const ChartCoordinate& c, std::span<const double> coordinates, int dimension);

enum class StructureKind {
  PairSeparable,       // f(u) du/dt = g(w) dw/dt for unit-metric u, w
  SphericalPair,       // (r, theta) of one particle, with the 1/r^2 metric
  ThreeTermSymmetric,  // sum_i f(u_i) du_i/dt = 0
};
std::string_view to_string(StructureKind kind);

struct StructureMatch {
  StructureKind kind = StructureKind::PairSeparable;
  std::vector<ChartCoordinate> coordinates;
  /// factors[i] = (f1, f2) along coordinates[i]. For the pair kinds, f1 of
  /// both coordinates comes from the same group of terms.
  std::vector<std::array<Factor1D, 2>> factors;
};

struct StructureReport {
  std::vector<StructureMatch> matches;
  int independent_count = 0;
};

/// Enumerates every coordinate pair and triple for which the term list has
/// one of the separable forms. Purely structural: coefficients and time
/// dependence are ignored.
StructureReport detect_structure(const WaveFunction& wf);

struct ResidualResult {
  double residual = 0.0;      // max deviation of the constant from its start value
  std::size_t segments = 0;   // sample-to-sample segments used
  std::size_t skipped = 0;    // segments crossing a singular denominator
};

/// Drift of the constant of `match` along the samples of `traj`. The
/// antiderivatives are accumulated segment by segment with Gauss-Legendre
/// quadrature; a segment whose quotient denominator vanishes is skipped and
/// the baseline restarts after it.
ResidualResult com_residual(const WaveFunction& wf, const Trajectory& traj, const StructureMatch& match);

struct RotatingFrame {
  double omega = 0.0;
  int m1 = 0;
  int m2 = 0;
  double e1 = 0.0;
  double e2 = 0.0;
};

/// omega = (E1 - E2) / (m2 - m1) for a two-term single-particle state of
/// polar or spherical oscillator factors. Throws ValidationError otherwise
/// or when m1 == m2.
RotatingFrame rotating_frame(const WaveFunction& wf);

}  // namespace bohm
