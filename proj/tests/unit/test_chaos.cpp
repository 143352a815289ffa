#include <doctest.h>

#include <algorithm>
#include <numbers>

#include "bohm/chaos.hpp"
#include "bohm/error.hpp"

using namespace bohm;
using B = BasisState;
using std::numbers::pi;

namespace {

cdouble ph(double a) { return std::polar(1.0, a); }

WaveFunction ho3d_stat() {
  return build({{1.0, {B::spherical(0, 3, 1)}}, {ph(pi / 3), {B::spherical(0, 3, 0)}}, {ph(pi / 7), {B::spherical(1, 1, 0)}}});
}

LyapunovParams short_run(long n, std::uint64_t seed = 1) {
  LyapunovParams p;
  p.n_steps = n;
  p.seed = seed;
  return p;
}

}  // namespace

TEST_CASE("parameter validation") {
  LyapunovParams p;
  CHECK_NOTHROW(p.validate(3));
  p.d0 = 0;
  CHECK_THROWS_AS(p.validate(3), ValidationError);
  p = {};
  p.n_steps = 0;
  CHECK_THROWS_AS(p.validate(3), ValidationError);
  p = {};
  p.e0 = {1.0, 1.0, 0.0};
  CHECK_THROWS_AS(p.validate(3), ValidationError);
  p.e0 = {1.0, 0.0};
  CHECK_THROWS_AS(p.validate(3), ValidationError);
}

TEST_CASE("real eigenstates have exactly zero exponent") {
  const auto wf = build({{1.0, {B::harm3d(2, 0, 1)}}});
  const auto est = lyapunov(wf, {{0.3, 0.2, -0.5}, 0.0}, short_run(200), IntegratorParams{});
  CHECK(est.final_h == 0.0);
  CHECK(est.h_series.size() == 200);
  CHECK(est.status != LyapunovStatus::NodeEncounter);
  for (std::size_t i = 1; i < est.h_series.size(); ++i) CHECK(est.h_series[i].first > est.h_series[i - 1].first);
}

TEST_CASE("large d0 produces a warning") {
  const auto wf = build({{1.0, {B::harm3d(2, 0, 1)}}});
  LyapunovParams p = short_run(5);
  p.d0 = 1e-3;
  CHECK_FALSE(lyapunov(wf, {{0.3, 0.2, -0.5}, 0.0}, p, IntegratorParams{}).warnings.empty());
  CHECK(lyapunov(wf, {{0.3, 0.2, -0.5}, 0.0}, short_run(5), IntegratorParams{}).warnings.empty());
}

TEST_CASE("two form-(6) states give a vanishing exponent") {
  // Different energies, so the nodes rotate about the z axis.
  const auto wf = build({{ph(pi / 3), {B::spherical(0, 1, 1)}}, {ph(pi / 7), {B::spherical(1, 0, 0)}}});
  const auto est = lyapunov(wf, {{0.3, -1.2, 1.0}, 0.0}, short_run(10000, 4), IntegratorParams{});
  CHECK(est.final_h <= 1e-3);
  CHECK(est.final_h < est.h_series[999].second / 3);
  CHECK_FALSE(excluded(est.status));
}

TEST_CASE("exponent is invariant under coefficient rescaling") {
  const auto wf = ho3d_stat();
  const Configuration x0{{0.9, -1.1, 0.6}, 0.0};
  const auto a = lyapunov(wf, x0, short_run(100, 3), IntegratorParams{});
  const auto b = lyapunov(wf.scaled(std::polar(7.5, 1.2)), x0, short_run(100, 3), IntegratorParams{});
  CHECK(b.final_h == doctest::Approx(a.final_h).epsilon(1e-6));
}

TEST_CASE("cube sampler") {
  CubeSampler s;
  SplitMix64 rng(1);
  for (int i = 0; i < 1000; ++i)
    for (double x : s.sample(4, rng)) {
      CHECK(x >= -5.0);
      CHECK(x <= 5.0);
    }
  s.edge = 1.0;
  s.center = {0.5};
  for (double x : s.sample(3, rng)) {
    CHECK(x >= 0.0);
    CHECK(x <= 1.0);
  }
}

TEST_CASE("ensembles do not depend on the number of workers") {
  const auto wf = ho3d_stat();
  const auto one = average_lyapunov(wf, CubeSampler{}, 6, short_run(30, 99), IntegratorParams{}, 1);
  const auto three = average_lyapunov(wf, CubeSampler{}, 6, short_run(30, 99), IntegratorParams{}, 3);
  REQUIRE(one.per_sample.size() == 6);
  CHECK(one.mean_h == three.mean_h);
  CHECK(one.std_h == three.std_h);
  CHECK(one.excluded == three.excluded);
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(one.per_sample[i].x0 == three.per_sample[i].x0);
    CHECK(one.per_sample[i].estimate.h_series == three.per_sample[i].estimate.h_series);
  }
  CHECK(one.included + one.excluded == 6);
}

TEST_CASE("ensemble of real eigenstates") {
  const auto wf = build({{1.0, {B::harm2d(1, 2)}}});
  const auto res = average_lyapunov(wf, CubeSampler{}, 5, short_run(10, 5), IntegratorParams{});
  CHECK(res.mean_h == 0.0);
  CHECK(res.std_h == 0.0);
}

TEST_CASE("Poincare sections") {
  // Circle of radius 1.5 crossing y = 0 twice per revolution.
  const auto circle = build({{1.0, {B::polar(1, 0)}}});
  const auto pts = poincare_section(circle, {{0.0, 1.5}, 0.0}, SectionPlane{1, 0.0}, 60.0, IntegratorParams{});
  REQUIRE(pts.size() >= 4);
  for (std::size_t i = 0; i < pts.size(); ++i) {
    CHECK(std::abs(pts[i].x[1]) <= 1e-10);
    CHECK(std::abs(std::abs(pts[i].x[0]) - 1.5) < 1e-7);
    if (i > 0) CHECK(pts[i].direction == -pts[i - 1].direction);
  }
  // Two loci: x = -1.5 going down, x = +1.5 going up (counterclockwise motion).
  for (const auto& p : pts) CHECK(p.direction == (p.x[0] > 0 ? 1 : -1));

  const auto still = build({{1.0, {B::harm2d(1, 1)}}});
  CHECK(poincare_section(still, {{0.4, 0.3}, 0.0}, SectionPlane{1, 0.0}, 50.0, IntegratorParams{}).empty());

  const double r = 6.6969, th = 2.38696, phi = -0.249865;
  const Configuration x0{{r * std::sin(th) * std::cos(phi), r * std::sin(th) * std::sin(phi), r * std::cos(th)}, 0.0};
  const auto chaotic = poincare_section(ho3d_stat(), x0, SectionPlane{2, 0.0}, 5000.0, IntegratorParams{});
  CHECK(chaotic.size() >= 100);
  // Scattered, not a closed curve: nearest-neighbour spacings in the plane vary widely.
  std::vector<double> nn;
  for (std::size_t i = 0; i < chaotic.size(); ++i) {
    CHECK(std::abs(chaotic[i].x[2]) <= 1e-10);
    double best = 1e300;
    for (std::size_t j = 0; j < chaotic.size(); ++j)
      if (i != j) best = std::min(best, std::hypot(chaotic[i].x[0] - chaotic[j].x[0], chaotic[i].x[1] - chaotic[j].x[1]));
    nn.push_back(best);
  }
  double mean = 0, var = 0;
  for (double d : nn) mean += d / nn.size();
  for (double d : nn) var += (d - mean) * (d - mean) / (nn.size() - 1);
  CHECK(mean > 0.0);
  CHECK(std::sqrt(var) / mean > 0.3);
}

TEST_CASE("Henon-Heiles basics") {
  const auto origin = henon_heiles_point(0.0, 0.0, 0.0, 0.0);
  const auto still = henon_heiles_lyapunov(0.0, origin, short_run(50, 2));
  CHECK(std::abs(still.estimate.final_h) <= 1e-6);
  CHECK(still.max_energy_drift <= 1e-15);

  const auto p = henon_heiles_point(0.125, 0.0, -0.1, 0.0);
  CHECK(henon_heiles_energy(p) == doctest::Approx(0.125).epsilon(1e-14));
  CHECK(p[2] >= 0.0);
  CHECK_THROWS_AS(henon_heiles_point(0.01, 0.0, 0.5, 0.0), ValidationError);
  PhasePoint off = p;
  off[2] += 1e-6;
  CHECK_THROWS_AS(henon_heiles_lyapunov(0.125, off, short_run(10)), ValidationError);

  // Above the saddle energy 1/6 the orbit leaves through an opening.
  CHECK_THROWS_AS(henon_heiles_lyapunov(0.3, henon_heiles_point(0.3, 0.0, 0.0, 0.0), short_run(2000)), NumericalError);

  const auto chaotic = henon_heiles_lyapunov(0.125, p, short_run(3000, 1));
  CHECK(chaotic.estimate.final_h > 0.02);
  CHECK(chaotic.max_energy_drift <= 1e-8);
  const auto regular = henon_heiles_lyapunov(1.0 / 12, henon_heiles_point(1.0 / 12, 0.0, 0.1, 0.0), short_run(3000, 1));
  CHECK(regular.estimate.final_h < 0.01);
}
