#include "bohm/regularity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <optional>

#include "bohm/error.hpp"

namespace bohm {

namespace {

double horner(const std::vector<double>& c, double x) {
  double v = 0.0;
  for (auto it = c.rbegin(); it != c.rend(); ++it) v = v * x + *it;
  return v;
}

// r^p L_n^alpha(r^2) and its r-derivative.
ValueDerivative radial(int n, int p, double alpha, double r) {
  const ValueDerivative lag = laguerre_assoc(n, alpha, r * r);
  const double rp = std::pow(r, p);
  double d = rp * 2.0 * r * lag.derivative;
  if (p > 0) d += p * std::pow(r, p - 1) * lag.value;
  return {rp * lag.value, d};
}

bool unit_metric(ChartAxis a) { return a != ChartAxis::Theta; }

}  // namespace

ValueDerivative eval_factor(const Factor1D& f, double u) {
  switch (f.kind) {
    case FactorKind::Hermite: return hermite(f.n, u);
    case FactorKind::Sine: {
      const double k = f.n * std::numbers::pi;
      return {std::sin(k * u), k * std::cos(k * u)};
    }
    case FactorKind::PolarRadial: return radial(f.n, f.m, f.m, u);
    case FactorKind::SphericalRadial: return radial(f.n, f.m, f.m + 0.5, u);
    case FactorKind::PolarAngle: {
      const double s = std::sin(u);
      const double c = std::cos(u);
      const double q = horner(legendre_derivative_coefficients(f.n, f.m), c);
      const double dq = horner(legendre_derivative_coefficients(f.n, f.m + 1), c);
      double d = -std::pow(s, f.m + 1) * dq;
      if (f.m > 0) d += f.m * std::pow(s, f.m - 1) * c * q;
      return {std::pow(s, f.m) * q, d};
    }
  }
  return {0.0, 0.0};
}

std::string to_string(const Factor1D& f) {
  switch (f.kind) {
    case FactorKind::Hermite: return "H" + std::to_string(f.n);
    case FactorKind::Sine: return "sin" + std::to_string(f.n);
    case FactorKind::PolarRadial: return "Rpol(" + std::to_string(f.n) + "," + std::to_string(f.m) + ")";
    case FactorKind::SphericalRadial: return "Rsph(" + std::to_string(f.n) + "," + std::to_string(f.m) + ")";
    case FactorKind::PolarAngle: return "Theta(" + std::to_string(f.n) + "," + std::to_string(f.m) + ")";
  }
  return "?";
}

std::string to_string(const ChartCoordinate& c) {
  static constexpr const char* names[] = {"x", "y", "z", "r", "theta"};
  return names[static_cast<int>(c.axis)] + std::to_string(c.particle + 1);
}

double chart_value(const ChartCoordinate& c, std::span<const double> q, int dimension) {
  const double* p = q.data() + static_cast<std::size_t>(c.particle) * dimension;
  switch (c.axis) {
    case ChartAxis::X: return p[0];
    case ChartAxis::Y: return p[1];
    case ChartAxis::Z: return p[2];
    case ChartAxis::R: {
      double s = 0.0;
      for (int a = 0; a < dimension; ++a) s += p[a] * p[a];
      return std::sqrt(s);
    }
    case ChartAxis::Theta: {
      const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
      return r > 0.0 ? std::acos(std::clamp(p[2] / r, -1.0, 1.0)) : 0.0;
    }
  }
  return 0.0;
}

std::string_view to_string(StructureKind kind) {
  switch (kind) {
    case StructureKind::PairSeparable: return "PairSeparable";
    case StructureKind::SphericalPair: return "SphericalPair";
    case StructureKind::ThreeTermSymmetric: return "ThreeTermSymmetric";
  }
  return "?";
}

namespace {

enum class Chart { Cartesian, Polar, Spherical, Mixed };

Chart chart_of(BasisFamily f) {
  switch (f) {
    case BasisFamily::Box2D:
    case BasisFamily::Harm2DCart:
    case BasisFamily::Harm3DCart: return Chart::Cartesian;
    case BasisFamily::Harm2DPolar: return Chart::Polar;
    case BasisFamily::Harm3DSph: return Chart::Spherical;
  }
  return Chart::Mixed;
}

Factor1D factor_along(const BasisState& s, ChartAxis axis) {
  const auto q = s.quantum_numbers();
  switch (s.family()) {
    case BasisFamily::Box2D: return {FactorKind::Sine, q[static_cast<int>(axis)], 0};
    case BasisFamily::Harm2DCart:
    case BasisFamily::Harm3DCart: return {FactorKind::Hermite, q[static_cast<int>(axis)], 0};
    case BasisFamily::Harm2DPolar: return {FactorKind::PolarRadial, std::min(q[0], q[1]), std::abs(q[0] - q[1])};
    case BasisFamily::Harm3DSph:
      if (axis == ChartAxis::R) return {FactorKind::SphericalRadial, q[0], q[1]};
      return {FactorKind::PolarAngle, q[1], std::abs(q[2])};
  }
  return {};
}

struct Table {
  std::vector<ChartCoordinate> coords;
  std::vector<std::vector<Factor1D>> keys;  // keys[term][coordinate]
};

Table factor_table(const WaveFunction& wf) {
  Table t;
  const auto& terms = wf.terms();
  for (int k = 0; k < wf.particles(); ++k) {
    Chart chart = chart_of(terms.front().factors[k].family());
    for (const auto& term : terms)
      if (chart_of(term.factors[k].family()) != chart) chart = Chart::Mixed;
    switch (chart) {
      case Chart::Cartesian:
        for (int a = 0; a < wf.dimension(); ++a) t.coords.push_back({k, static_cast<ChartAxis>(a)});
        break;
      case Chart::Polar: t.coords.push_back({k, ChartAxis::R}); break;
      case Chart::Spherical:
        t.coords.push_back({k, ChartAxis::R});
        t.coords.push_back({k, ChartAxis::Theta});
        break;
      case Chart::Mixed: break;
    }
  }
  for (const auto& term : terms) {
    std::vector<Factor1D> row;
    for (const auto& c : t.coords) row.push_back(factor_along(term.factors[c.particle], c.axis));
    t.keys.push_back(std::move(row));
  }
  return t;
}

template <class Tuple>
std::vector<Tuple> distinct(std::vector<Tuple> v) {
  std::vector<Tuple> out;
  for (auto& x : v)
    if (std::find(out.begin(), out.end(), x) == out.end()) out.push_back(x);
  return out;
}

std::optional<StructureMatch> pair_match(const Table& t, std::size_t u, std::size_t w, StructureKind kind) {
  std::vector<std::array<Factor1D, 2>> pairs;
  for (const auto& row : t.keys) pairs.push_back({row[u], row[w]});
  pairs = distinct(pairs);
  if (pairs.size() != 2 || pairs[0][0] == pairs[1][0] || pairs[0][1] == pairs[1][1]) return std::nullopt;
  StructureMatch m;
  m.kind = kind;
  m.coordinates = {t.coords[u], t.coords[w]};
  m.factors = {std::array<Factor1D, 2>{pairs[0][0], pairs[1][0]}, std::array<Factor1D, 2>{pairs[0][1], pairs[1][1]}};
  return m;
}

std::optional<StructureMatch> triple_match(const Table& t, std::size_t u1, std::size_t u2, std::size_t u3) {
  std::vector<std::array<Factor1D, 3>> triples;
  for (const auto& row : t.keys) triples.push_back({row[u1], row[u2], row[u3]});
  triples = distinct(triples);
  if (triples.size() != 3) return std::nullopt;
  // Each triple must be (b, b) plus a single a, with a in a different slot each time.
  std::optional<Factor1D> a;
  std::optional<Factor1D> b;
  std::array<bool, 3> slot_used{};
  for (const auto& tr : triples) {
    int odd = -1;
    if (tr[1] == tr[2] && !(tr[0] == tr[1])) odd = 0;
    else if (tr[0] == tr[2] && !(tr[1] == tr[0])) odd = 1;
    else if (tr[0] == tr[1] && !(tr[2] == tr[0])) odd = 2;
    if (odd < 0 || slot_used[odd]) return std::nullopt;
    slot_used[odd] = true;
    const Factor1D& ta = tr[odd];
    const Factor1D& tb = tr[(odd + 1) % 3];
    if (!a) a = ta, b = tb;
    if (!(*a == ta) || !(*b == tb)) return std::nullopt;
  }
  StructureMatch m;
  m.kind = StructureKind::ThreeTermSymmetric;
  m.coordinates = {t.coords[u1], t.coords[u2], t.coords[u3]};
  m.factors.assign(3, std::array<Factor1D, 2>{*a, *b});
  return m;
}

int matrix_rank(std::vector<std::vector<double>> rows) {
  int rank = 0;
  if (rows.empty()) return 0;
  const std::size_t cols = rows.front().size();
  for (std::size_t c = 0; c < cols && rank < static_cast<int>(rows.size()); ++c) {
    std::size_t pivot = rank;
    for (std::size_t r = rank; r < rows.size(); ++r)
      if (std::abs(rows[r][c]) > std::abs(rows[pivot][c])) pivot = r;
    if (std::abs(rows[pivot][c]) < 1e-9) continue;
    std::swap(rows[pivot], rows[rank]);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (r == static_cast<std::size_t>(rank)) continue;
      const double f = rows[r][c] / rows[rank][c];
      for (std::size_t k = c; k < cols; ++k) rows[r][k] -= f * rows[rank][k];
    }
    ++rank;
  }
  return rank;
}

}  // namespace

StructureReport detect_structure(const WaveFunction& wf) {
  StructureReport report;
  const Table t = factor_table(wf);
  const std::size_t n = t.coords.size();
  std::vector<std::vector<double>> rows;
  auto add = [&](StructureMatch m, std::initializer_list<std::pair<std::size_t, double>> weights) {
    std::vector<double> row(n, 0.0);
    for (auto [i, w] : weights) row[i] = w;
    rows.push_back(std::move(row));
    report.matches.push_back(std::move(m));
  };
  for (std::size_t u = 0; u < n; ++u) {
    for (std::size_t w = u + 1; w < n; ++w) {
      const auto& cu = t.coords[u];
      const auto& cw = t.coords[w];
      if (unit_metric(cu.axis) && unit_metric(cw.axis)) {
        if (auto m = pair_match(t, u, w, StructureKind::PairSeparable)) add(std::move(*m), {{u, 1.0}, {w, -1.0}});
      } else if (cu.particle == cw.particle && cu.axis == ChartAxis::R && cw.axis == ChartAxis::Theta) {
        if (auto m = pair_match(t, u, w, StructureKind::SphericalPair)) add(std::move(*m), {{u, 1.0}, {w, -1.0}});
      }
    }
  }
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        if (!unit_metric(t.coords[a].axis) || !unit_metric(t.coords[b].axis) || !unit_metric(t.coords[c].axis)) {
          continue;
        }
        if (auto m = triple_match(t, a, b, c)) add(std::move(*m), {{a, 1.0}, {b, 1.0}, {c, 1.0}});
      }
  report.independent_count = matrix_rank(rows);
  return report;
}

namespace {

// f1 f2 / (f1 f2' - f2 f1'), optionally times 1/u^2; `den` receives the
// denominator so callers can detect singular segments.
double quotient(const std::array<Factor1D, 2>& f, double u, bool inverse_square, double& den) {
  const ValueDerivative a = eval_factor(f[0], u);
  const ValueDerivative b = eval_factor(f[1], u);
  den = a.value * b.derivative - b.value * a.derivative;
  double q = a.value * b.value / den;
  if (inverse_square) q /= u * u;
  return q;
}

constexpr std::array<double, 8> kGaussNodes = {-0.9602898564975363, -0.7966664774136267, -0.5255324099163290,
                                               -0.1834346424956498, 0.1834346424956498,  0.5255324099163290,
                                               0.7966664774136267,  0.9602898564975363};
constexpr std::array<double, 8> kGaussWeights = {0.1012285362903763, 0.2223810344533745, 0.3137066458778873,
                                                 0.3626837833783620, 0.3626837833783620, 0.3137066458778873,
                                                 0.2223810344533745, 0.1012285362903763};

// Integral of the quotient from a to b; nullopt if its denominator
// vanishes or changes sign on the way.
std::optional<double> segment_integral(const std::array<Factor1D, 2>& f, double a, double b, bool inverse_square) {
  if (a == b) return 0.0;
  double den = 0.0;
  quotient(f, a, inverse_square, den);
  const double sign = den;
  if (sign == 0.0) return std::nullopt;
  auto same_side = [&](double d) { return d != 0.0 && (d > 0.0) == (sign > 0.0); };
  quotient(f, b, inverse_square, den);
  if (!same_side(den)) return std::nullopt;
  const int pieces = std::max(1, static_cast<int>(std::ceil(std::abs(b - a) / 0.05)));
  const double h = (b - a) / pieces;
  double sum = 0.0;
  for (int p = 0; p < pieces; ++p) {
    const double mid = a + (p + 0.5) * h;
    for (std::size_t i = 0; i < kGaussNodes.size(); ++i) {
      const double q = quotient(f, mid + 0.5 * h * kGaussNodes[i], inverse_square, den);
      if (!same_side(den) || !std::isfinite(q)) return std::nullopt;
      sum += kGaussWeights[i] * q;
    }
  }
  return 0.5 * h * sum;
}

}  // namespace

ResidualResult com_residual(const WaveFunction& wf, const Trajectory& traj, const StructureMatch& match) {
  const std::size_t k = match.coordinates.size();
  if (k != match.factors.size() || (k != 2 && k != 3)) throw ValidationError("com_residual: malformed match");
  for (const auto& c : match.coordinates) {
    if (c.particle < 0 || c.particle >= wf.particles()) throw ValidationError("com_residual: particle out of range");
  }
  std::vector<double> sign(k, 1.0);
  std::vector<bool> inverse_square(k, false);
  if (match.kind != StructureKind::ThreeTermSymmetric) sign[1] = -1.0;
  if (match.kind == StructureKind::SphericalPair) inverse_square[0] = true;

  ResidualResult out;
  double c = 0.0;  // constant relative to the current baseline
  for (std::size_t s = 1; s < traj.samples.size(); ++s) {
    const auto& xa = traj.samples[s - 1].x;
    const auto& xb = traj.samples[s].x;
    double delta = 0.0;
    bool ok = true;
    for (std::size_t i = 0; i < k && ok; ++i) {
      const double ua = chart_value(match.coordinates[i], xa, wf.dimension());
      const double ub = chart_value(match.coordinates[i], xb, wf.dimension());
      const auto piece = segment_integral(match.factors[i], ua, ub, inverse_square[i]);
      if (piece) delta += sign[i] * *piece; else ok = false;
    }
    ++out.segments;
    if (!ok) {
      ++out.skipped;
      c = 0.0;
      continue;
    }
    c += delta;
    out.residual = std::max(out.residual, std::abs(c));
  }
  return out;
}

RotatingFrame rotating_frame(const WaveFunction& wf) {
  const auto& terms = wf.terms();
  if (terms.size() != 2 || wf.particles() != 1) {
    throw ValidationError("rotating_frame: need a two-term single-particle superposition");
  }
  for (const auto& t : terms) {
    const auto f = t.factors[0].family();
    if (f != BasisFamily::Harm2DPolar && f != BasisFamily::Harm3DSph) {
      throw ValidationError("rotating_frame: factors must be angular-momentum eigenstates");
    }
  }
  RotatingFrame r;
  r.m1 = terms[0].factors[0].angular_momentum();
  r.m2 = terms[1].factors[0].angular_momentum();
  r.e1 = energy(terms[0].factors[0]);
  r.e2 = energy(terms[1].factors[0]);
  if (r.m1 == r.m2) throw ValidationError("rotating_frame: m1 == m2 has no rotating frame");
  r.omega = (r.e1 - r.e2) / (r.m2 - r.m1);
  return r;
}

}  // namespace bohm
