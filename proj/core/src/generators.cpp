#include <algorithm>
#include <cmath>
#include <numbers>

#include "bohm/error.hpp"
#include "bohm/experiment.hpp"

namespace bohm {

namespace {

constexpr double pi = std::numbers::pi;

// Coefficients below this are exact zeros that cos/sin could not produce (cos(pi/2) = 6e-17).
constexpr double drop_below = 1e-14;

using B = BasisState;

std::vector<ProductTerm> single_particle(const std::array<cdouble, 4>& c, const std::array<BasisState, 4>& s) {
  std::vector<ProductTerm> terms;
  for (int i = 0; i < 4; ++i)
    if (std::abs(c[i]) > drop_below) terms.push_back({c[i], {s[i]}});
  return terms;
}

GeneratedState spherical_family(double alpha, double beta, bool primed) {
  if (!(alpha >= 0.0 && alpha <= pi / 2 + 1e-12)) throw ValidationError("alpha must lie in [0, pi/2]");
  const double ca = std::cos(alpha), sa = std::sin(alpha);
  std::array<cdouble, 4> c;
  std::array<BasisState, 4> s = primed ? std::array{B::spherical(2, 3, 2), B::spherical(2, 3, -1), B::spherical(3, 1, 1),
                                                    B::spherical(3, 1, 0)}
                                       : std::array{B::spherical(1, 3, 0), B::spherical(1, 3, 1), B::spherical(2, 1, -1),
                                                    B::spherical(2, 1, 0)};
  c[0] = ca;
  c[1] = std::polar(sa, beta + pi / 3);
  // The primed family is only defined at beta = 0, where the phases reduce to pi/3, pi/5, pi/7.
  c[2] = std::polar(ca * ca, primed ? pi / 5 : 2 * pi * std::cos(beta) + pi / 5);
  c[3] = std::polar(sa * sa, -2 * beta + pi / 7);
  return {single_particle(c, s), std::nullopt};
}

GeneratedState w_family(const WParams& w, const QubitEncoding& enc) {
  const ThreeQubitState t = w_state(w);
  GeneratedState g;
  g.qubits = enc;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) {
        const cdouble c = t(i, j, k);
        if (std::abs(c) <= drop_below) continue;
        auto pick = [&](int bit) { return bit ? enc.basis1 : enc.basis0; };
        g.terms.push_back({c, {pick(i), pick(j), pick(k)}});
      }
  return g;
}

void check_a(double& a) {
  if (!(a >= -1e-15 && a <= 0.5 + 1e-15)) throw ValidationError("a must lie in [0, 1/2]");
  a = std::clamp(a, 0.0, 0.5);
}

}  // namespace

bool known_generator(std::string_view id) {
  return id == "eq31" || id == "eq32" || id == "eq100" || id == "eq101" || id == "eq101-prime";
}

std::vector<std::string> generator_parameters(std::string_view id) {
  if (id == "eq31") return {"alpha", "beta"};
  if (id == "eq32") return {"alpha"};
  if (known_generator(id)) return {"a"};
  return {};
}

GeneratedState generate(std::string_view id, double alpha, double beta, double a) {
  if (id == "eq31") return spherical_family(alpha, beta, false);
  if (id == "eq32") return spherical_family(alpha, 0.0, true);
  const QubitEncoding low{B::polar(4, 0), B::polar(3, 1)};
  const QubitEncoding high{B::polar(4, 2), B::polar(3, 3)};
  if (id == "eq100") {
    check_a(a);
    return w_family({a, std::max(0.5 - a, 0.0), 0.5}, low);
  }
  if (id == "eq101") {
    check_a(a);
    return w_family({a, 0.25, 0.25}, low);
  }
  if (id == "eq101-prime") {
    check_a(a);
    return w_family({a, 0.25, 0.25}, high);
  }
  throw ValidationError("unknown generator '" + std::string(id) + "'");
}

GeneratedState generate(const SweepSpec& sweep, double value) {
  double alpha = sweep.alpha, beta = sweep.beta, a = 0.0;
  if (sweep.parameter == "alpha") alpha = value;
  else if (sweep.parameter == "beta") beta = value;
  else if (sweep.parameter == "a") a = value;
  else throw ValidationError("unknown sweep parameter '" + sweep.parameter + "'");
  return generate(sweep.generator, alpha, beta, a);
}

}  // namespace bohm
