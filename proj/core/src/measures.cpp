#include "bohm/measures.hpp"

#include <cmath>

#include "bohm/error.hpp"
#include "bohm/random.hpp"

namespace bohm {

ThreeQubitState::ThreeQubitState(const std::array<cdouble, 8>& tensor) : tensor_(tensor) {}

double ThreeQubitState::norm2() const {
  double s = 0.0;
  for (const auto& c : tensor_) s += std::norm(c);
  return s;
}

bool ThreeQubitState::normalized(double tol) const { return std::abs(norm2() - 1.0) <= tol; }

ThreeQubitState ThreeQubitState::normalized_copy() const {
  const double n2 = norm2();
  if (!(n2 > 0.0)) throw ValidationError("three-qubit state: zero tensor cannot be normalized");
  ThreeQubitState out = *this;
  const double inv = 1.0 / std::sqrt(n2);
  for (auto& c : out.tensor_) c *= inv;
  return out;
}

namespace {

void require_normalized(const ThreeQubitState& s, const char* what) {
  if (!s.normalized()) throw ValidationError(std::string(what) + ": state is not normalized");
}

}  // namespace

double participation_ratio(const CoefficientVector& v) {
  if (v.entries.empty()) throw ValidationError("participation ratio: empty coefficient vector");
  double n2 = 0.0;
  double n4 = 0.0;
  for (const auto& c : v.entries) {
    const double p = std::norm(c);
    n2 += p;
    n4 += p * p;
  }
  if (std::abs(n2 - 1.0) > 1e-12) throw ValidationError("participation ratio: coefficients are not normalized");
  return 1.0 / n4;
}

double meyer_wallach(const ThreeQubitState& s) {
  require_normalized(s, "meyer-wallach");
  double sum = 0.0;
  for (int site = 0; site < 3; ++site) {
    // rho[a][b] = sum over the other two indices of c_a.. conj(c_b..)
    cdouble rho[2][2] = {};
    for (int idx = 0; idx < 8; ++idx) {
      const int bit = 2 - site;
      if ((idx >> bit) & 1) continue;
      const int partner = idx | (1 << bit);
      const cdouble c0 = s.tensor()[idx];
      const cdouble c1 = s.tensor()[partner];
      rho[0][0] += c0 * std::conj(c0);
      rho[0][1] += c0 * std::conj(c1);
      rho[1][0] += c1 * std::conj(c0);
      rho[1][1] += c1 * std::conj(c1);
    }
    double purity = 0.0;
    for (auto& row : rho)
      for (auto& e : row) purity += std::norm(e);
    sum += 2.0 * (1.0 - purity);
  }
  return sum / 3.0;
}

namespace {

using Qubit = std::array<cdouble, 2>;

// v_i = sum_{jk} conj(b_j) conj(c_k) psi_{ijk}, with the free index at `site`.
Qubit contract(const ThreeQubitState& s, const std::array<Qubit, 3>& f, int site) {
  Qubit v{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const int idx[3] = {i, j, k};
        cdouble w = s(i, j, k);
        for (int q = 0; q < 3; ++q)
          if (q != site) w *= std::conj(f[q][idx[q]]);
        v[idx[site]] += w;
      }
  return v;
}

double norm2(const Qubit& q) { return std::norm(q[0]) + std::norm(q[1]); }

}  // namespace

GeometricResult geometric_entanglement_detail(const ThreeQubitState& s, const GeometricOptions& opts) {
  require_normalized(s, "geometric measure");
  if (opts.restarts < 1) throw ValidationError("geometric measure: restarts must be positive");
  GeometricResult best{1.0, -1.0, 2.0, {}};
  for (int r = 0; r < opts.restarts; ++r) {
    SplitMix64 rng(opts.seed + static_cast<std::uint64_t>(r));
    std::array<Qubit, 3> f;
    for (auto& q : f) {
      double parts[4];
      rng.unit_vector(parts);
      q = {cdouble(parts[0], parts[1]), cdouble(parts[2], parts[3])};
    }
    double overlap = 0.0;
    for (int it = 0; it < opts.max_iterations; ++it) {
      double sweep_overlap = 0.0;
      for (int site = 0; site < 3; ++site) {
        const Qubit v = contract(s, f, site);
        const double n2 = norm2(v);
        if (n2 == 0.0) continue;  // keep the current factor; overlap is zero
        const double inv = 1.0 / std::sqrt(n2);
        f[site] = {v[0] * inv, v[1] * inv};
        sweep_overlap = n2;
      }
      const double gain = sweep_overlap - overlap;
      overlap = sweep_overlap;
      if (it > 0 && gain < opts.tolerance) break;
    }
    if (overlap > best.best_overlap) {
      best.best_overlap = overlap;
      best.factors = f;
    }
    best.worst_overlap = std::min(best.worst_overlap, overlap);
  }
  best.value = std::max(0.0, 1.0 - best.best_overlap);
  return best;
}

double geometric_entanglement(const ThreeQubitState& s) { return geometric_entanglement_detail(s).value; }

double three_tangle(const ThreeQubitState& s) {
  require_normalized(s, "three-tangle");
  auto c = [&](int i, int j, int k) { return s(i, j, k); };
  const cdouble d1 = c(0, 0, 0) * c(0, 0, 0) * c(1, 1, 1) * c(1, 1, 1) + c(0, 0, 1) * c(0, 0, 1) * c(1, 1, 0) * c(1, 1, 0) +
                     c(0, 1, 0) * c(0, 1, 0) * c(1, 0, 1) * c(1, 0, 1) + c(1, 0, 0) * c(1, 0, 0) * c(0, 1, 1) * c(0, 1, 1);
  const cdouble d2 = c(0, 0, 0) * c(1, 1, 1) * c(0, 1, 1) * c(1, 0, 0) + c(0, 0, 0) * c(1, 1, 1) * c(1, 0, 1) * c(0, 1, 0) +
                     c(0, 0, 0) * c(1, 1, 1) * c(1, 1, 0) * c(0, 0, 1) + c(0, 1, 1) * c(1, 0, 0) * c(1, 0, 1) * c(0, 1, 0) +
                     c(0, 1, 1) * c(1, 0, 0) * c(1, 1, 0) * c(0, 0, 1) + c(1, 0, 1) * c(0, 1, 0) * c(1, 1, 0) * c(0, 0, 1);
  const cdouble d3 = c(0, 0, 0) * c(1, 1, 0) * c(1, 0, 1) * c(0, 1, 1) + c(1, 1, 1) * c(0, 0, 1) * c(0, 1, 0) * c(1, 0, 0);
  return 4.0 * std::abs(d1 - 2.0 * d2 + 4.0 * d3);
}

ThreeQubitState w_state(const WParams& p) {
  const double rest = 1.0 - (p.a + p.b + p.c);
  if (p.a < 0.0 || p.b < 0.0 || p.c < 0.0 || rest < -1e-15) {
    throw ValidationError("w_state: need a, b, c >= 0 and a + b + c <= 1");
  }
  ThreeQubitState s;
  s(0, 0, 1) = std::sqrt(p.a);
  s(0, 1, 0) = std::sqrt(p.b);
  s(1, 0, 0) = std::sqrt(p.c);
  s(0, 0, 0) = std::sqrt(std::max(0.0, rest));
  return s;
}

}  // namespace bohm
