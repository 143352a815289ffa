#include <doctest.h>

#include <numbers>
#include <random>

#include "bohm/dynamics.hpp"
#include "bohm/error.hpp"
#include "bohm/wavefunction.hpp"
#include "oracles.hpp"

using namespace bohm;
using B = BasisState;
using std::numbers::pi;

namespace {

cdouble ph(double a) { return std::polar(1.0, a); }

WaveFunction ho3d_stat() {
  return build({{1.0, {B::spherical(0, 3, 1)}}, {ph(pi / 3), {B::spherical(0, 3, 0)}}, {ph(pi / 7), {B::spherical(1, 1, 0)}}});
}

WaveFunction ho3d_cart() {
  return build({{1.0, {B::harm3d(1, 1, 1)}}, {ph(pi / 3), {B::harm3d(3, 0, 0)}}, {ph(pi / 7), {B::harm3d(1, 2, 0)}}});
}

WaveFunction polar_2p() {
  return build({{1.0, {B::polar(1, 1), B::polar(1, 1)}},
                {ph(pi / 3), {B::polar(1, 1), B::polar(2, 0)}},
                {ph(pi / 5), {B::polar(2, 0), B::polar(1, 1)}},
                {ph(pi / 7), {B::polar(2, 0), B::polar(2, 0)}}});
}

}  // namespace

TEST_CASE("stationarity detection") {
  const auto wf = ho3d_stat();
  REQUIRE(wf.stationary());
  CHECK(*wf.stationary_energy() == doctest::Approx(4.5));
  CHECK(wf.particles() == 1);
  CHECK(wf.dimension() == 3);

  const auto box = build({{1.0, {B::box(1, 1)}}});
  CHECK(*box.stationary_energy() == doctest::Approx(pi * pi));

  const auto mixed = build({{1.0, {B::harm2d(0, 0)}}, {1.0, {B::harm2d(1, 0)}}});
  CHECK_FALSE(mixed.stationary());
  CHECK(mixed.term_energy(0) == doctest::Approx(1.0));
  CHECK(mixed.term_energy(1) == doctest::Approx(2.0));
}

TEST_CASE("build rejects inconsistent term lists") {
  CHECK_THROWS_AS(build({}), ValidationError);
  CHECK_THROWS_AS(build({{1.0, {B::harm2d(0, 0)}}, {1.0, {B::harm2d(0, 0), B::harm2d(1, 0)}}}), ValidationError);
  CHECK_THROWS_AS(build({{1.0, {B::harm2d(0, 0)}}, {1.0, {B::harm3d(0, 0, 0)}}}), ValidationError);
  CHECK_THROWS_AS(build({{1.0, {B::harm2d(0, 0)}}, {1.0, {B::box(1, 1)}}}), ValidationError);
  CHECK_THROWS_AS(build({{0.0, {B::harm2d(0, 0)}}}), ValidationError);
}

TEST_CASE("stationarity agrees with per-term energies on random term sets") {
  std::mt19937_64 rng(11);
  std::uniform_int_distribution<int> q(0, 3), nterms(1, 4);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<ProductTerm> terms;
    std::vector<double> energies;
    const int n = nterms(rng);
    for (int t = 0; t < n; ++t) {
      const B a = B::harm2d(q(rng), q(rng)), b = B::polar(q(rng), q(rng));
      terms.push_back({1.0, {a, b}});
      energies.push_back(energy(a) + energy(b));
    }
    bool equal = true;
    for (double e : energies) equal = equal && std::abs(e - energies[0]) < 1e-12;
    const auto wf = build(terms);
    CHECK(wf.stationary() == equal);
    if (equal) CHECK(*wf.stationary_energy() == doctest::Approx(energies[0]));
  }
}

TEST_CASE("normalize") {
  const auto n = normalize(ho3d_stat());
  for (const auto& t : n.terms()) CHECK(std::abs(t.coefficient) == doctest::Approx(1 / std::sqrt(3.0)));
  const auto again = normalize(n);
  for (std::size_t i = 0; i < n.terms().size(); ++i)
    CHECK(std::abs(again.terms()[i].coefficient - n.terms()[i].coefficient) < 1e-15);

  const double a = pi / 4;
  const auto eq31 = build({{std::cos(a), {B::spherical(1, 3, 0)}},
                           {std::polar(std::sin(a), pi / 3), {B::spherical(1, 3, 1)}},
                           {std::polar(std::cos(a) * std::cos(a), pi / 5), {B::spherical(2, 1, -1)}},
                           {std::polar(std::sin(a) * std::sin(a), pi / 7), {B::spherical(2, 1, 0)}}});
  const auto u = normalize(eq31);
  const double expect[4] = {1 / 3.0, 1 / 3.0, 1 / 6.0, 1 / 6.0};
  for (int i = 0; i < 4; ++i) CHECK(std::norm(u.terms()[i].coefficient) == doctest::Approx(expect[i]).epsilon(1e-14));
}

TEST_CASE("evaluate") {
  const auto real = build({{2.5, {B::harm3d(2, 1, 0)}}});
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-3, 3);
  for (int i = 0; i < 20; ++i) {
    const Configuration q{{u(rng), u(rng), u(rng)}, 0.0};
    CHECK(evaluate(real, q).psi.imag() == 0.0);
    // Nodal plane x = 0 of the Cartesian state.
    const Configuration plane{{0.0, u(rng), u(rng)}, 0.0};
    CHECK(std::abs(evaluate(ho3d_cart(), plane).psi) == 0.0);
  }

  const auto wf = polar_2p();
  const std::vector<double> x0{2.37166, -0.374916, -0.522219, 2.99893};
  const auto ev = evaluate(wf, {x0, 0.0});
  CHECK(ev.abs2 == doctest::Approx(std::norm(ev.psi)).epsilon(1e-15));
  const auto fd = oracle::fd_gradient([&](const std::vector<double>& x) { return evaluate(wf, {x, 0.0}).psi; }, x0);
  for (int i = 0; i < 4; ++i) CHECK(std::abs(ev.grad[i] - fd[i]) <= 1e-6 * std::abs(ev.grad[i]) + 1e-12);

  CHECK_THROWS_AS(evaluate(build({{1.0, {B::box(1, 1)}}}), {{1.5, 0.5}, 0.0}), DomainError);
}

TEST_CASE("gradient linearity") {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(-2, 2);
  const B a = B::spherical(1, 2, 1), b = B::harm3d(2, 1, 1);
  const cdouble ca(0.3, -1.1), cb(-0.7, 0.2);
  const auto sum = build({{ca, {a}}, {cb, {b}}});
  const auto only_a = build({{ca, {a}}});
  const auto only_b = build({{cb, {b}}});
  for (int i = 0; i < 20; ++i) {
    const Configuration q{{u(rng), u(rng), u(rng)}, 0.0};
    const auto s = evaluate(sum, q), ea = evaluate(only_a, q), eb = evaluate(only_b, q);
    CHECK(std::abs(s.psi - ea.psi - eb.psi) < 1e-12);
    for (int d = 0; d < 3; ++d) CHECK(std::abs(s.grad[d] - ea.grad[d] - eb.grad[d]) < 1e-12);
  }
}

TEST_CASE("velocity is invariant under coefficient rescaling") {
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(-2.5, 2.5), mag(0.1, 10), arg(-pi, pi);
  const auto wf = polar_2p();
  for (int i = 0; i < 100; ++i) {
    const cdouble lambda = std::polar(mag(rng), arg(rng));
    const auto scaled = wf.scaled(lambda);
    const Configuration q{{u(rng), u(rng), u(rng), u(rng)}, 0.0};
    const auto v = velocity(wf, q), w = velocity(scaled, q);
    for (int d = 0; d < 4; ++d) CHECK(std::abs(v[d] - w[d]) <= 1e-12 * std::max(1.0, std::abs(v[d])));
  }
}

TEST_CASE("product states: a particle's velocity ignores the other particles") {
  const auto wf = build({{ph(0.4), {B::polar(2, 1), B::polar(0, 3)}}});
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> u(-2, 2);
  for (int i = 0; i < 20; ++i) {
    Configuration q{{u(rng), u(rng), u(rng), u(rng)}, 0.0};
    const auto v = velocity(wf, q);
    q.coordinates[2] = u(rng);
    q.coordinates[3] = u(rng);
    const auto w = velocity(wf, q);
    CHECK(std::abs(v[0] - w[0]) < 1e-12);
    CHECK(std::abs(v[1] - w[1]) < 1e-12);
  }
}

TEST_CASE("qubit coefficients") {
  const B p0 = B::polar(4, 0), p1 = B::polar(3, 1);
  const double r = 1 / std::sqrt(2.0);
  const auto ghz = build({{r, {p0, p0, p0}}, {r, {p1, p1, p1}}});
  const auto t = qubit_coefficients(ghz, p0, p1);
  CHECK(std::abs(t(0, 0, 0) - r) < 1e-15);
  CHECK(std::abs(t(1, 1, 1) - r) < 1e-15);
  CHECK(t.norm2() == doctest::Approx(1.0));

  const double a = 0.25;
  const auto w = build({{std::sqrt(a), {p0, p0, p1}}, {std::sqrt(0.5 - a), {p0, p1, p0}}, {std::sqrt(0.5), {p1, p0, p0}}});
  const auto tw = qubit_coefficients(w, p0, p1);
  CHECK(std::abs(tw(0, 0, 1) - 0.5) < 1e-15);
  CHECK(std::abs(tw(0, 1, 0) - 0.5) < 1e-15);
  CHECK(std::abs(tw(1, 0, 0) - r) < 1e-15);
  CHECK(std::abs(tw(0, 0, 0)) == 0.0);

  const auto other = build({{1.0, {p0, p0, B::polar(2, 2)}}});
  CHECK_THROWS_AS(qubit_coefficients(other, p0, p1), ValidationError);
  CHECK_THROWS_AS(qubit_coefficients(build({{1.0, {p0, p1}}}), p0, p1), ValidationError);
}
