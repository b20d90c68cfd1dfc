#include <catch2/catch_amalgamated.hpp>

#include "taudyn/bohr.hpp"

using namespace taudyn;
using bohr::AtomSpec;

TEST_CASE("gravitational expectation values") {
  AtomSpec spec;  // G = M = hbar = m = 1
  spec.n = 2;
  const bohr::GravExpectations g = bohr::grav_expectations(spec);
  REQUIRE(g.r_mean == Catch::Approx(3.0).epsilon(1e-15));
  REQUIRE(g.energy == Catch::Approx(-1.0 / 8.0).epsilon(1e-15));
  REQUIRE(g.omega_mean.has_value());
  // n (n^2 - 3n/2 + 1/2) = 2 * (4 - 3 + 0.5) = 3
  REQUIRE(*g.omega_mean == Catch::Approx(1.0 / 3.0).epsilon(1e-15));

  SECTION("cubic mass scaling of the energy") {
    AtomSpec doubled = spec;
    doubled.mass = 2.0;
    REQUIRE(bohr::grav_expectations(doubled).energy / g.energy ==
            Catch::Approx(8.0).epsilon(1e-14));
    REQUIRE(bohr::grav_expectations(doubled).r_mean / g.r_mean ==
            Catch::Approx(0.25).epsilon(1e-14));
  }
}

TEST_CASE("coulomb expectation values") {
  AtomSpec spec;  // a0 = 1 with hbar = m = e2 = 1
  spec.n = 2;
  const bohr::CoulombExpectations c = bohr::coulomb_expectations(spec);
  REQUIRE(c.bohr_radius == 1.0);
  REQUIRE(c.r_mean == Catch::Approx(3.0).epsilon(1e-15));
  REQUIRE(c.r2_mean == Catch::Approx(6.0).epsilon(1e-15));
  REQUIRE(c.energy == Catch::Approx(-1.0 / 8.0).epsilon(1e-15));

  AtomSpec ground = spec;
  ground.n = 1;
  const bohr::CoulombExpectations c1 = bohr::coulomb_expectations(ground);
  REQUIRE(c.energy / c1.energy == Catch::Approx(0.25).epsilon(1e-14));
}

TEST_CASE("n = 1 singularities are surfaced as undefined") {
  AtomSpec spec;
  spec.n = 1;
  const bohr::CoulombExpectations c = bohr::coulomb_expectations(spec);
  REQUIRE(c.r2_mean == 0.0);
  REQUIRE_FALSE(c.omega_mean.has_value());
  const bohr::GravExpectations g = bohr::grav_expectations(spec);
  REQUIRE_FALSE(g.omega_mean.has_value());
}

TEST_CASE("coupling substitution e^2 -> G M m reproduces the gravitational forms") {
  AtomSpec spec;
  spec.mass = 0.7;
  spec.big_m = 130.0;
  spec.g_newton = 2.3;
  spec.hbar = 1.4;
  for (int n = 2; n <= 6; ++n) {
    spec.n = n;
    AtomSpec subst = spec;
    subst.e2 = spec.g_newton * spec.big_m * spec.mass;
    const bohr::CoulombExpectations c = bohr::coulomb_expectations(subst);
    const bohr::GravExpectations g = bohr::grav_expectations(spec);
    REQUIRE(g.r_mean == Catch::Approx(c.r_mean).epsilon(1e-12));
    REQUIRE(g.energy == Catch::Approx(c.energy).epsilon(1e-12));
    REQUIRE(*g.omega_mean == Catch::Approx(*c.omega_mean).epsilon(1e-12));
  }
}

TEST_CASE("mass scaling exponents") {
  AtomSpec spec;
  spec.n = 3;
  SECTION("factor 2 gives exact exponents") {
    const bohr::ScalingReport rep = bohr::mass_scaling_report(spec, 2.0);
    REQUIRE(rep.grav_r_exponent == -2.0);
    REQUIRE(*rep.grav_omega_exponent == 3.0);
    REQUIRE(rep.grav_energy_exponent == 3.0);
    REQUIRE(rep.coulomb_energy_exponent == 1.0);
  }
  SECTION("factor 10 agrees to rounding") {
    const bohr::ScalingReport rep = bohr::mass_scaling_report(spec, 10.0);
    REQUIRE(rep.grav_r_exponent == Catch::Approx(-2.0).margin(1e-12));
    REQUIRE(*rep.grav_omega_exponent == Catch::Approx(3.0).margin(1e-12));
    REQUIRE(rep.grav_energy_exponent == Catch::Approx(3.0).margin(1e-12));
    REQUIRE(rep.coulomb_energy_exponent == Catch::Approx(1.0).margin(1e-12));
  }
  SECTION("binding energy per unit mass depends on the mass: violation flagged") {
    const bohr::ScalingReport rep = bohr::mass_scaling_report(spec, 2.0);
    REQUIRE(rep.grav_e_over_m_exponent == Catch::Approx(2.0).margin(1e-12));
    REQUIRE(rep.equivalence_violation);
  }
  SECTION("guards") {
    REQUIRE_THROWS_AS(bohr::mass_scaling_report(spec, 1.0), std::invalid_argument);
    AtomSpec bad = spec;
    bad.n = 0;
    REQUIRE_THROWS_AS(bohr::grav_expectations(bad), std::invalid_argument);
  }
}
