#pragma once

// Participation ratio and three-qubit entanglement measures computed from
// expansion coefficients. None of these depend on which physical
// eigenstates the labels stand for.

#include <array>
#include <complex>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

namespace bohm {

using cdouble = std::complex<double>;

/// Expansion coefficients over an orthonormal basis. PR requires them
/// normalized to sum |c_i|^2 = 1 within 1e-12.
struct CoefficientVector {
  std::vector<cdouble> entries;
  std::vector<std::string> labels;
};

/// c_{ijk} stored at index 4i + 2j + k.
class ThreeQubitState {
 public:
  ThreeQubitState() = default;
  explicit ThreeQubitState(const std::array<cdouble, 8>& tensor);

  cdouble operator()(int i, int j, int k) const { return tensor_[4 * i + 2 * j + k]; }
  cdouble& operator()(int i, int j, int k) { return tensor_[4 * i + 2 * j + k]; }
  const std::array<cdouble, 8>& tensor() const { return tensor_; }

  double norm2() const;
  bool normalized(double tol = 1e-12) const;

  /// Rescaled to unit norm. Throws ValidationError for the zero tensor.
  ThreeQubitState normalized_copy() const;

 private:
  std::array<cdouble, 8> tensor_{};
};

/// sqrt(a)|001> + sqrt(b)|010> + sqrt(c)|100> + sqrt(1-a-b-c)|000>.
struct WParams {
  double a = 0.0;
  double b = 0.0;
  double c = 0.0;
};

/// 1 / sum |c_i|^4. Throws ValidationError when not normalized.
double participation_ratio(const CoefficientVector& v);

/// Meyer-Wallach Q: mean linear entropy 2(1 - tr rho_k^2) of the three
/// single-qubit reductions.
double meyer_wallach(const ThreeQubitState& s);

struct GeometricOptions {
  int restarts = 50;
  double tolerance = 1e-14;   // stop when the overlap gain drops below this; degenerate maxima converge slowly
  int max_iterations = 100000;
  std::uint64_t seed = 0x5eed;
};

struct GeometricResult {
  double value;                 // E_G = 1 - max overlap
  double best_overlap;          // max |<a b c|psi>|^2 over restarts
  double worst_overlap;         // smallest converged overlap over restarts
  std::array<std::array<cdouble, 2>, 3> factors;  // maximizing product state
};

/// Geometric measure 1 - max_{product} |<abc|psi>|^2 by alternating
/// single-site updates with random restarts.
GeometricResult geometric_entanglement_detail(const ThreeQubitState& s, const GeometricOptions& opts = {});
double geometric_entanglement(const ThreeQubitState& s);

/// Coffman-Kundu-Wootters three-tangle 4|d1 - 2 d2 + 4 d3|.
double three_tangle(const ThreeQubitState& s);

/// Throws ValidationError unless a, b, c >= 0 and a + b + c <= 1.
ThreeQubitState w_state(const WParams& params);

}  // namespace bohm
