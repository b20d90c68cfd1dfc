#include <catch2/catch_amalgamated.hpp>

#include <cmath>

#include "taudyn/dynamics.hpp"

using namespace taudyn;
using dynamics::DecaySpec;
using dynamics::IntegratorConfig;
using dynamics::VarMassState;

TEST_CASE("free relativistic derivatives") {
  SECTION("rest frame") {
    VarMassState s;
    s.p = 0.0;
    s.mass = 2.0;
    const dynamics::Derivatives d = dynamics::derivatives_free(s);
    REQUIRE(d.dx == 0.0);
    REQUIRE(d.dtau == 1.0);
    REQUIRE(d.dp == 0.0);
    REQUIRE(d.dmass == 0.0);
  }
  SECTION("p = m c gives tau_dot = 1/sqrt(2)") {
    VarMassState s;
    s.mass = 1.3;
    s.p = 1.3;
    const dynamics::Derivatives d = dynamics::derivatives_free(s, 1.0);
    REQUIRE(d.dtau == Catch::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-14));
  }
  SECTION("tau_dot = sqrt(1 - v^2/c^2) with v = x_dot, any c") {
    const double c = 3.0;
    for (double p : {-2.0, 0.4, 5.0}) {
      VarMassState s;
      s.p = p;
      s.mass = 1.7;
      const dynamics::Derivatives d = dynamics::derivatives_free(s, c);
      const double v = d.dx;
      REQUIRE(d.dtau == Catch::Approx(std::sqrt(1.0 - v * v / (c * c))).margin(1e-12));
      // gamma tau_dot = 1
      REQUIRE(d.dtau / std::sqrt(1.0 - v * v / (c * c)) ==
              Catch::Approx(1.0).margin(1e-10));
    }
  }
}

TEST_CASE("free trajectories conserve p, m and keep gamma tau_dot = 1") {
  VarMassState init;
  init.p = 0.8;
  init.mass = 1.1;
  IntegratorConfig cfg;
  cfg.h = 1e-3;
  cfg.output_stride = 200;
  const auto run = dynamics::free_run(init, 2.0, cfg);
  for (const auto& pt : run) {
    REQUIRE(pt.s.p == init.p);        // dp = 0 exactly, bitwise conserved
    REQUIRE(pt.s.mass == init.mass);
    const dynamics::Derivatives d = dynamics::derivatives_free(pt.s);
    const double gamma = 1.0 / std::sqrt(1.0 - d.dx * d.dx);
    REQUIRE(gamma * d.dtau == Catch::Approx(1.0).margin(1e-10));
  }
  // straight line: endpoint position matches v * t to integrator accuracy
  const dynamics::Derivatives d0 = dynamics::derivatives_free(init);
  REQUIRE(run.back().s.x == Catch::Approx(d0.dx * 2.0).margin(1e-12));
  REQUIRE(run.back().s.tau == Catch::Approx(d0.dtau * 2.0).margin(1e-12));
}

TEST_CASE("gravitational derivatives") {
  SECTION("vanishing potential reduces to the Newtonian free particle") {
    VarMassState s;
    s.p = 0.6;
    s.mass = 2.0;
    const dynamics::PotentialModel none;
    const dynamics::Derivatives d = dynamics::derivatives_grav(s, none);
    REQUIRE(d.dx == 0.3);
    REQUIRE(d.dp == 0.0);
    REQUIRE(d.dmass == 0.0);
    REQUIRE(d.dtau == Catch::Approx(1.0 - 0.5 * 0.3 * 0.3).epsilon(1e-14));
  }
  SECTION("tau-independent potentials freeze the mass") {
    dynamics::PotentialModel phi;
    phi.value = [](const VarMassState& s) { return 0.3 * s.x; };
    phi.d_dx = [](const VarMassState&) { return 0.3; };
    VarMassState s;
    s.p = 0.2;
    s.mass = 1.5;
    const dynamics::Derivatives d = dynamics::derivatives_grav(s, phi);
    REQUIRE(d.dmass == 0.0);
    REQUIRE(d.dp == Catch::Approx(-1.5 * 0.3).epsilon(1e-14));
  }
  SECTION("non-positive mass aborts") {
    VarMassState s;
    s.mass = 0.0;
    const dynamics::PotentialModel none;
    REQUIRE_THROWS_AS(dynamics::derivatives_grav(s, none), std::runtime_error);
  }
}

TEST_CASE("energy conservation for time-independent potentials") {
  // static gravitational profile plus external harmonic potential
  dynamics::PotentialModel phi;
  phi.value = [](const VarMassState& s) { return 0.05 * s.x * s.x; };
  phi.d_dx = [](const VarMassState& s) { return 0.1 * s.x; };
  const dynamics::ExternalPotential vext = dynamics::harmonic_potential(0.7);

  VarMassState init;
  init.x = 0.9;
  init.p = 0.1;
  init.mass = 1.2;
  IntegratorConfig cfg;
  cfg.h = 1e-3;
  cfg.output_stride = 500;
  const auto run = dynamics::grav_run(init, 10.0, cfg, phi, &vext);
  const double h0 = dynamics::grav_hamiltonian(init, phi, &vext);
  double worst = 0.0;
  for (const auto& pt : run)
    worst = std::max(worst, std::abs(dynamics::grav_hamiltonian(pt.s, phi, &vext) - h0));
  REQUIRE(worst < 1e-10);  // O(h^4) at h = 1e-3
}

TEST_CASE("weak equivalence: trajectories are mass independent") {
  dynamics::PotentialModel phi;
  phi.value = [](const VarMassState& s) { return 0.4 * s.x; };
  phi.d_dx = [](const VarMassState&) { return 0.4; };
  IntegratorConfig cfg;
  cfg.h = 1e-3;
  cfg.output_stride = 250;

  const double v0 = 0.35;
  VarMassState a;
  a.mass = 1.0;
  a.p = a.mass * v0;
  VarMassState b;
  b.mass = 2.0;
  b.p = b.mass * v0;

  const auto run_a = dynamics::grav_run(a, 5.0, cfg, phi);
  const auto run_b = dynamics::grav_run(b, 5.0, cfg, phi);
  REQUIRE(run_a.size() == run_b.size());
  for (std::size_t i = 0; i < run_a.size(); ++i)
    REQUIRE(std::abs(run_a[i].s.x - run_b[i].s.x) < 1e-10);
}

TEST_CASE("rk4 is fourth order on the decay system") {
  DecaySpec spec;
  spec.m0 = 1.0;
  spec.mu = 0.05;
  spec.gamma = 1.0;
  // exact solution of m_dot = -m phi_dot / c^2 for the analytic profile
  const auto exact_mass = [&](double t) {
    const double phi0 = -spec.mu / spec.m0;
    const double phit = phi0 * std::exp(-spec.gamma * t);
    return (spec.m0 + spec.mu) * std::exp(-(phit - phi0));
  };
  auto endpoint_error = [&](double h) {
    IntegratorConfig cfg;
    cfg.h = h;
    cfg.output_stride = 1000000;
    const dynamics::DecayRun run = dynamics::decay_run(spec, cfg, 2.0);
    return std::abs(run.final_mass - exact_mass(2.0));
  };
  const double e1 = endpoint_error(4e-2);
  const double e2 = endpoint_error(2e-2);
  const double e3 = endpoint_error(1e-2);
  REQUIRE(e1 / e2 == Catch::Approx(16.0).epsilon(0.25));
  REQUIRE(e2 / e3 == Catch::Approx(16.0).epsilon(0.25));
}

TEST_CASE("decay run follows the first-order mass law and red shift") {
  SECTION("mu = 0 is static") {
    DecaySpec spec;
    spec.mu = 0.0;
    IntegratorConfig cfg;
    cfg.h = 1e-3;
    cfg.output_stride = 1000;
    const dynamics::DecayRun run = dynamics::decay_run(spec, cfg, 5.0);
    REQUIRE(run.final_mass == Catch::Approx(spec.m0).margin(1e-14));
    REQUIRE(run.final_tau == Catch::Approx(run.final_t).margin(1e-12));
    REQUIRE(dynamics::decay_redshift(spec) == 0.0);
  }
  SECTION("mu/m0 = 0.01: deficit 0.01 within 1e-4") {
    DecaySpec spec;  // m0 = 1, mu = 0.01, gamma = 1
    IntegratorConfig cfg;
    cfg.h = 1e-3;
    cfg.output_stride = 1000;
    const dynamics::DecayRun run = dynamics::decay_run(spec, cfg, 20.0);
    REQUIRE(run.proper_time_deficit() == Catch::Approx(0.01).margin(1e-4));
    REQUIRE(dynamics::decay_redshift(spec) == Catch::Approx(0.01).epsilon(1e-15));
    // two routes: closed form vs integrated limit
    REQUIRE(std::abs(run.proper_time_deficit() - dynamics::decay_redshift(spec)) <
            1e-4 * dynamics::decay_redshift(spec));
  }
  SECTION("mass law stays within the first-order window") {
    DecaySpec spec;
    spec.mu = 0.01;
    IntegratorConfig cfg;
    cfg.h = 1e-3;
    cfg.output_stride = 100;
    const dynamics::DecayRun run = dynamics::decay_run(spec, cfg, 10.0);
    const double bound = spec.m0 * (spec.mu / spec.m0) * (spec.mu / spec.m0) * 5.0;
    for (const auto& pt : run.samples) {
      const double law = dynamics::decay_mass_ansatz(spec, pt.s.t);
      REQUIRE(std::abs(pt.s.mass - law) <= bound);
    }
    // final mass has settled onto m0 up to the exponential tail
    REQUIRE(run.final_mass - spec.m0 <=
            spec.mu * std::exp(-spec.gamma * 10.0) + 1e-6 * spec.mu);
  }
  SECTION("doubling gamma halves the deficit") {
    DecaySpec a, b;
    b.gamma = 2.0 * a.gamma;
    REQUIRE(dynamics::decay_redshift(a) == 2.0 * dynamics::decay_redshift(b));
  }
  SECTION("spec guards") {
    DecaySpec bad;
    bad.mu = 0.5;  // mu/m0 > 0.1
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
  }
}

TEST_CASE("binding: gauge profile feeds the inertia") {
  SECTION("gauge off reduces to plain Newton with lambda = t") {
    dynamics::BindingSpec spec;
    spec.phi0 = 0.0;
    const dynamics::ExternalPotential vext = dynamics::harmonic_potential(1.0);
    IntegratorConfig cfg;
    cfg.h = 1e-3;
    cfg.output_stride = 100;
    const dynamics::BindingRun run = dynamics::binding_run(vext, spec, cfg, 10.0);
    REQUIRE(run.mu0 == spec.m0);
    for (std::size_t i = 0; i < run.samples.size(); ++i)
      REQUIRE(run.lambda[i] == Catch::Approx(run.samples[i].s.t).margin(1e-12));
  }
  SECTION("phi0/c^2 = -0.01 shifts the final mass to m0 e^{-0.01}") {
    dynamics::BindingSpec spec;  // phi0 = -0.01
    REQUIRE(spec.mu0() == Catch::Approx(0.99004983374916811).epsilon(1e-14));
    const dynamics::ExternalPotential vext = dynamics::harmonic_potential(1.0);
    IntegratorConfig cfg;
    cfg.h = 1e-3;
    cfg.output_stride = 10;
    const dynamics::BindingRun run = dynamics::binding_run(vext, spec, cfg, 80.0);
    REQUIRE(run.samples.back().s.mass == Catch::Approx(spec.mu0()).epsilon(1e-10));
    REQUIRE(run.dlambda_dt_end == Catch::Approx(1.0).margin(1e-9));

    // late-time oscillation frequency sqrt(K / mu0)
    const double fitted = dynamics::fit_frequency(run.samples, 0.0, 40.0);
    const double predicted = std::sqrt(1.0 / spec.mu0());
    REQUIRE(std::abs(fitted - predicted) / predicted < 1e-3);
  }
  SECTION("non-decaying gauge profile is a usage error") {
    dynamics::BindingSpec bad;
    bad.gamma = 0.0;
    REQUIRE_THROWS_AS(bad.validate(), std::invalid_argument);
  }
  SECTION("binding-energy helper inverts the mass shift") {
    const double phi0 = dynamics::gauge_value_for_binding_energy(-0.00995016625083195, 1.0);
    REQUIRE(1.0 * std::exp(phi0) == Catch::Approx(0.99004983374916811).epsilon(1e-12));
  }
}

TEST_CASE("euler homogeneity of the hamiltonians") {
  SECTION("free relativistic H") {
    auto h = [](double p, double m) { return std::hypot(p, m); };  // c = 1
    for (auto [p, m] : {std::pair{0.3, 1.0}, std::pair{-1.2, 0.4}, std::pair{2.0, 2.5}}) {
      const dynamics::HomogeneityResult r = dynamics::euler_homogeneity_check(h, p, m);
      REQUIRE(r.euler_residual < 1e-10);
      REQUIRE(r.scaling_residual < 1e-10);
    }
  }
  SECTION("gravitational H without external potential") {
    const double phi = -0.2;
    auto h = [phi](double p, double m) { return m + p * p / (2.0 * m) + m * phi; };
    const dynamics::HomogeneityResult r = dynamics::euler_homogeneity_check(h, 0.7, 1.3);
    REQUIRE(r.euler_residual < 1e-10);
    REQUIRE(r.scaling_residual < 1e-10);
  }
  SECTION("an external V breaks homogeneity by exactly |V|") {
    const double v = 0.37;
    auto h = [v](double p, double m) { return m + p * p / (2.0 * m) + v; };
    const dynamics::HomogeneityResult r = dynamics::euler_homogeneity_check(h, 0.7, 1.3);
    REQUIRE(r.euler_residual == Catch::Approx(v).margin(1e-9));
  }
}
