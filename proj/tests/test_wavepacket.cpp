#include <catch2/catch_amalgamated.hpp>

#include "taudyn/wavepacket.hpp"

using namespace taudyn;
using walk::SpinorField;
using walk::WalkParams;
using wavepacket::GaussianSpec;

TEST_CASE("packet construction: norm, branch purity, support guard") {
  const WalkParams p = WalkParams::from_mass(0.6);
  GaussianSpec spec;
  spec.k0 = 0.8;
  spec.sigma_k = 0.05;
  spec.x0 = 100;
  const SpinorField f = wavepacket::make_packet(spec, p, 512);
  REQUIRE(f.norm() == Catch::Approx(1.0).margin(1e-12));

  // overlap with the opposite branch vanishes per k
  double overlap = 0.0;
  for (int j = 0; j < f.sites(); ++j) {
    const walk::WalkSpectrumPoint es = walk::eigensystem(p, walk::momentum_of(j, f.sites()));
    const Eigen::Vector2cd v(f.r[j], f.l[j]);
    overlap += std::norm(es.minus.dot(v));
  }
  REQUIRE(std::sqrt(overlap) < 1e-12);

  GaussianSpec bad = spec;
  bad.k0 = 3.0;
  bad.sigma_k = 0.1;  // 3.0 + 0.5 > pi
  REQUIRE_THROWS_AS(wavepacket::make_packet(bad, p, 512), std::invalid_argument);
}

TEST_CASE("centroid basics") {
  SpinorField f = SpinorField::delta(32, 5, 0);
  REQUIRE(wavepacket::centroid(f).value == 5.0);

  // symmetric two-site packet around x = 10
  SpinorField g = SpinorField::zero(64);
  g.r[9] = 0.5;
  g.r[11] = 0.5;
  g.l[10] = std::sqrt(0.5);
  REQUIRE(wavepacket::centroid(g, 10).value == Catch::Approx(10.0).margin(1e-9));

  // packet parked at the seam opposite the reference gets flagged
  SpinorField s = SpinorField::delta(32, 16, 0);
  REQUIRE(wavepacket::centroid(s, 0).seam_flagged);
  REQUIRE_FALSE(wavepacket::centroid(s, 16).seam_flagged);
}

TEST_CASE("m = 1 packet does not move") {
  const WalkParams p = WalkParams::from_mass(1.0);
  GaussianSpec spec;
  spec.k0 = 0.4;
  spec.sigma_k = 0.08;
  spec.x0 = 64;
  SpinorField f = walk::to_position(wavepacket::make_packet(spec, p, 128));
  const double before = wavepacket::centroid(f, 64).value;
  f = walk::evolve(p, f, 10);
  REQUIRE(wavepacket::centroid(f, 64).value == Catch::Approx(before).margin(1e-9));
}

TEST_CASE("massless packet translates exactly one site per step and stays component-pure") {
  const WalkParams p = WalkParams::from_mass(0.0);
  GaussianSpec spec;
  spec.k0 = 1.0;  // positive k: the + branch is the l component, moving toward +x
  spec.sigma_k = 0.05;
  spec.x0 = 128;
  spec.branch = +1;
  SpinorField f = walk::to_position(wavepacket::make_packet(spec, p, 256));
  REQUIRE(f.r.norm() < 1e-12);

  const double c0 = wavepacket::centroid(f, spec.x0).value;
  for (int t = 1; t <= 8; ++t) {
    f = walk::step(p, f);
    const double ct = wavepacket::centroid(f, spec.x0).value;
    REQUIRE(ct - c0 == Catch::Approx(static_cast<double>(t)).margin(1e-9));
  }
}

TEST_CASE("strict locality: no amplitude escapes the light cone") {
  const WalkParams p = WalkParams::from_mass(0.6);
  const int n = 64;
  const int x0 = 32;
  SpinorField f = SpinorField::delta(n, x0, 0);
  const int steps = 9;
  f = walk::evolve(p, f, steps);
  for (int x = 0; x < n; ++x) {
    int d = std::abs(x - x0);
    d = std::min(d, n - d);
    if (d > steps) {
      REQUIRE(std::abs(f.r[x]) == 0.0);
      REQUIRE(std::abs(f.l[x]) == 0.0);
    }
  }
  REQUIRE(f.norm() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("transport matches the closed-form group velocity") {
  GaussianSpec spec;
  spec.sigma_k = 0.05;
  spec.x0 = 1024;

  SECTION("m = 0.6 at k0 = pi/2 moves at 0.8") {
    spec.k0 = walk::pi / 2;
    const wavepacket::TransportReport rep =
        wavepacket::measure_group_velocity(spec, WalkParams::from_mass(0.6), 2048, 200);
    REQUIRE(rep.predicted_velocity == Catch::Approx(0.8).margin(1e-12));
    REQUIRE(std::abs(rep.fitted_velocity - rep.predicted_velocity) < 1e-2);
    REQUIRE(std::abs(rep.fitted_velocity) <= 1.0);
    REQUIRE_FALSE(rep.seam_flagged);
    REQUIRE(rep.times.size() >= 10);
  }
  SECTION("k0 = 0 stands still for massive walks") {
    spec.k0 = 0.0;
    spec.x0 = 512;
    const wavepacket::TransportReport rep =
        wavepacket::measure_group_velocity(spec, WalkParams::from_mass(0.4), 1024, 100);
    REQUIRE(std::abs(rep.fitted_velocity) < 1e-2);
  }
  SECTION("massless packets run at the causal speed") {
    spec.k0 = 1.3;
    spec.x0 = 256;
    const wavepacket::TransportReport rep =
        wavepacket::measure_group_velocity(spec, WalkParams::from_mass(0.0), 1024, 200);
    REQUIRE(std::abs(rep.fitted_velocity - 1.0) < 1e-3);
  }
  SECTION("negative branch reverses the drift") {
    spec.k0 = walk::pi / 2;
    spec.branch = -1;
    const wavepacket::TransportReport rep =
        wavepacket::measure_group_velocity(spec, WalkParams::from_mass(0.6), 2048, 200);
    REQUIRE(std::abs(rep.fitted_velocity + 0.8) < 1e-2);
  }
}

TEST_CASE("norm is conserved along a transport run") {
  GaussianSpec spec;
  spec.k0 = 0.9;
  spec.sigma_k = 0.06;
  spec.x0 = 256;
  const WalkParams p = WalkParams::from_mass(0.2);
  SpinorField f = walk::to_position(wavepacket::make_packet(spec, p, 512));
  for (int t = 0; t < 60; ++t) f = walk::step(p, f);
  REQUIRE(f.norm() == Catch::Approx(1.0).margin(1e-12));
}

TEST_CASE("wrap risk is rejected up front") {
  GaussianSpec spec;
  spec.k0 = walk::pi / 2;
  spec.sigma_k = 0.05;
  spec.x0 = 64;
  REQUIRE_THROWS_AS(
      wavepacket::measure_group_velocity(spec, WalkParams::from_mass(0.0), 128, 200),
      std::invalid_argument);
  REQUIRE_THROWS_AS(
      wavepacket::measure_group_velocity(spec, WalkParams::from_mass(0.6), 2048, 19),
      std::invalid_argument);
}
