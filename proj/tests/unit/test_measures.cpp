#include <doctest.h>

#include <numbers>
#include <random>

#include "bohm/error.hpp"
#include "bohm/measures.hpp"
#include "oracles.hpp"

using namespace bohm;
using std::numbers::pi;

namespace {

ThreeQubitState basis000() {
  ThreeQubitState s;
  s(0, 0, 0) = 1.0;
  return s;
}

ThreeQubitState ghz(cdouble c1 = 1 / std::sqrt(2.0), cdouble c2 = 1 / std::sqrt(2.0)) {
  ThreeQubitState s;
  s(0, 0, 0) = c1;
  s(1, 1, 1) = c2;
  return s;
}

std::array<cdouble, 2> random_qubit(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  std::array<cdouble, 2> q{cdouble(n(rng), n(rng)), cdouble(n(rng), n(rng))};
  const double norm = std::sqrt(std::norm(q[0]) + std::norm(q[1]));
  return {q[0] / norm, q[1] / norm};
}

ThreeQubitState product(const std::array<cdouble, 2>& a, const std::array<cdouble, 2>& b,
                        const std::array<cdouble, 2>& c) {
  ThreeQubitState s;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) s(i, j, k) = a[i] * b[j] * c[k];
  return s;
}

ThreeQubitState random_state(std::mt19937_64& rng) {
  std::normal_distribution<double> n;
  ThreeQubitState s;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) s(i, j, k) = cdouble(n(rng), n(rng));
  return s.normalized_copy();
}

// Oracle: Q = 2 (1 - mean purity).
double q_oracle(const ThreeQubitState& s) {
  const auto p = oracle::purities(s);
  return 2.0 * (1.0 - (p[0] + p[1] + p[2]) / 3.0);
}

ThreeQubitState flip_all(const ThreeQubitState& s) {
  ThreeQubitState t;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) t(1 - i, 1 - j, 1 - k) = s(i, j, k);
  return t;
}

ThreeQubitState relabel(const ThreeQubitState& s) {  // particles (1,2,3) -> (2,3,1)
  ThreeQubitState t;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (int k = 0; k < 2; ++k) t(j, k, i) = s(i, j, k);
  return t;
}

}  // namespace

TEST_CASE("participation ratio") {
  CHECK(participation_ratio({{1.0, 0.0, 0.0, 0.0}, {}}) == 1.0);
  CHECK(participation_ratio({{0.5, 0.5, 0.5, 0.5}, {}}) == doctest::Approx(4.0).epsilon(1e-15));
  CHECK(participation_ratio({{cdouble(0, 0.5), -0.5, std::polar(0.5, 1.0), 0.5}, {}}) ==
        doctest::Approx(4.0).epsilon(1e-15));

  const double a = pi / 4;
  std::vector<cdouble> c{std::cos(a), std::polar(std::sin(a), pi / 3), std::polar(std::cos(a) * std::cos(a), pi / 5),
                         std::polar(std::sin(a) * std::sin(a), pi / 7)};
  double n2 = 0;
  for (auto x : c) n2 += std::norm(x);
  for (auto& x : c) x /= std::sqrt(n2);
  CHECK(std::abs(participation_ratio({c, {}}) - 3.6) <= 1e-12);

  CHECK_THROWS_AS(participation_ratio({{1.0, 1.0}, {}}), ValidationError);
  CHECK_THROWS_AS(participation_ratio({{}, {}}), ValidationError);
}

TEST_CASE("Meyer-Wallach Q") {
  CHECK(meyer_wallach(basis000()) == doctest::Approx(0.0).epsilon(1e-15));
  CHECK(meyer_wallach(ghz()) == doctest::Approx(1.0).epsilon(1e-14));
  const auto w = w_state({1.0 / 3, 1.0 / 3, 1.0 / 3});
  CHECK(std::abs(meyer_wallach(w) - 8.0 / 9) <= 1e-12);
  CHECK(std::abs(meyer_wallach(w) - q_oracle(w)) <= 1e-12);

  // GHZ with unequal weights: 2 (1 - |c1|^4 - |c2|^4).
  const double p = 0.3;
  CHECK(meyer_wallach(ghz(std::sqrt(p), std::polar(std::sqrt(1 - p), 0.7))) ==
        doctest::Approx(2 * (1 - p * p - (1 - p) * (1 - p))).epsilon(1e-13));

  std::mt19937_64 rng(17);
  for (int i = 0; i < 50; ++i) {
    const auto s = random_state(rng);
    CHECK(std::abs(meyer_wallach(s) - q_oracle(s)) <= 1e-12);
  }
}

TEST_CASE("Q vanishes exactly for product states") {
  std::mt19937_64 rng(23);
  for (int i = 0; i < 30; ++i) {
    const auto s = product(random_qubit(rng), random_qubit(rng), random_qubit(rng));
    CHECK(std::abs(meyer_wallach(s)) <= 1e-12);
    CHECK(geometric_entanglement(s) <= 1e-10);
    CHECK(three_tangle(s) <= 1e-12);
    const auto e = random_state(rng);
    CHECK(meyer_wallach(e) > 1e-6);
  }
}

TEST_CASE("three-tangle") {
  CHECK(three_tangle(basis000()) == 0.0);
  CHECK(three_tangle(ghz()) == doctest::Approx(1.0).epsilon(1e-14));
  const double p = 0.2;
  CHECK(three_tangle(ghz(std::sqrt(p), std::sqrt(1 - p))) == doctest::Approx(4 * p * (1 - p)).epsilon(1e-13));
  std::mt19937_64 rng(31);
  std::uniform_real_distribution<double> u(0, 1);
  for (int i = 0; i < 50; ++i) {
    double a = u(rng), b = u(rng), c = u(rng);
    const double s = a + b + c + u(rng);
    CHECK(three_tangle(w_state({a / s, b / s, c / s})) <= 1e-14);
  }
}

TEST_CASE("geometric measure") {
  CHECK(geometric_entanglement(basis000()) <= 1e-10);
  CHECK(std::abs(geometric_entanglement(ghz()) - 0.5) <= 1e-8);

  const auto w = w_state({1.0 / 3, 1.0 / 3, 1.0 / 3});
  const double grid = oracle::max_product_overlap_real(w);
  CHECK(std::abs(grid - 4.0 / 9) <= 1e-8);
  CHECK(std::abs(geometric_entanglement(w) - (1 - grid)) <= 1e-8);

  for (double a : {0.0, 0.125, 0.25, 0.375, 0.5}) {
    const auto s = w_state({a, 0.5 - a, 0.5});
    CHECK(std::abs(geometric_entanglement(s) - 0.5) <= 1e-8);
    CHECK(std::abs(geometric_entanglement(s) - (1 - oracle::max_product_overlap_real(s))) <= 1e-8);
    CHECK(three_tangle(s) <= 1e-14);
  }

  // Restarts agree on the maximum.
  const auto d = geometric_entanglement_detail(w);
  CHECK(d.best_overlap - d.worst_overlap <= 1e-8);
  CHECK(d.value == doctest::Approx(1 - d.best_overlap));
  const auto prod = product(d.factors[0], d.factors[1], d.factors[2]);
  cdouble overlap = 0;
  for (int i = 0; i < 8; ++i) overlap += std::conj(prod.tensor()[i]) * w.tensor()[i];
  CHECK(std::norm(overlap) == doctest::Approx(d.best_overlap).epsilon(1e-12));
}

TEST_CASE("measures are invariant under phase, relabeling and bit flips") {
  std::mt19937_64 rng(41);
  std::vector<ThreeQubitState> states{ghz(), w_state({0.2, 0.3, 0.4}), w_state({0.125, 0.375, 0.5})};
  for (int i = 0; i < 5; ++i) states.push_back(random_state(rng));
  for (const auto& s : states) {
    ThreeQubitState phased;
    for (int k = 0; k < 8; ++k) phased(k >> 2, (k >> 1) & 1, k & 1) = std::polar(1.0, 1.234) * s.tensor()[k];
    for (const auto& t : {phased, relabel(s), flip_all(s)}) {
      CHECK(meyer_wallach(t) == doctest::Approx(meyer_wallach(s)).epsilon(1e-12));
      CHECK(std::abs(three_tangle(t) - three_tangle(s)) <= 1e-12);
      CHECK(std::abs(geometric_entanglement(t) - geometric_entanglement(s)) <= 1e-8);
    }
  }
}

TEST_CASE("w_state") {
  const auto zero = w_state({0, 0, 0});
  CHECK(zero(0, 0, 0) == 1.0);
  for (int k = 1; k < 8; ++k) CHECK(zero.tensor()[k] == 0.0);

  const double a = 0.1;
  const auto s = w_state({a, 0.5 - a, 0.5});
  CHECK(s(0, 0, 1).real() == doctest::Approx(std::sqrt(a)));
  CHECK(s(0, 1, 0).real() == doctest::Approx(std::sqrt(0.4)));
  CHECK(s(1, 0, 0).real() == doctest::Approx(std::sqrt(0.5)));
  CHECK(std::abs(s(0, 0, 0)) <= 1e-8);
  CHECK(s.normalized());

  const auto w = w_state({1.0 / 3, 1.0 / 3, 1.0 / 3});
  for (int k : {1, 2, 4}) CHECK(w.tensor()[k].real() == doctest::Approx(1 / std::sqrt(3.0)));

  CHECK_THROWS_AS(w_state({0.5, 0.5, 0.1}), ValidationError);
  CHECK_THROWS_AS(w_state({-0.1, 0.5, 0.1}), ValidationError);
  CHECK_THROWS_AS(ThreeQubitState{}.normalized_copy(), ValidationError);
}
