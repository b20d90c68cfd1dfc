#include <catch2/catch_amalgamated.hpp>

#include <random>

#include "taudyn/frames.hpp"

using namespace taudyn;
using frames::Trajectory;

TEST_CASE("egt phase closed forms") {
  SECTION("resting frame gives zero phase") {
    const Trajectory still = Trajectory::uniform_velocity(0.0);
    for (double x : {-3.0, 0.0, 7.5})
      for (double t : {0.0, 1.0, 9.0}) REQUIRE(frames::egt_phase(2.0, still, x, t) == 0.0);
  }
  SECTION("uniform velocity: f = (m/hbar)(-v x' + v^2 t / 2)") {
    const double m = 1.7, v = 0.8, x = 2.5, t = 3.0;
    const Trajectory traj = Trajectory::uniform_velocity(v);
    REQUIRE(frames::egt_phase(m, traj, x, t) ==
            Catch::Approx(m * (-v * x + 0.5 * v * v * t)).epsilon(1e-14));
  }
  SECTION("bump after return to rest: f(0, t > T) = m A^2 pi^2 / (4 hbar T)") {
    const double m = 1.0, a = 1.0, t_bump = 2.0;
    const Trajectory traj = Trajectory::bump(a, t_bump);
    const double expected = m * a * a * frames::pi * frames::pi / (4.0 * t_bump);
    REQUIRE(frames::egt_phase(m, traj, 0.0, 3.0) == Catch::Approx(expected).epsilon(1e-13));
    REQUIRE(expected == Catch::Approx(frames::pi * frames::pi / 8.0).epsilon(1e-15));
    // xi and xi_dot really vanish outside the bump
    REQUIRE(traj.xi(2.5) == 0.0);
    REQUIRE(traj.xi_dot(2.5) == 0.0);
    REQUIRE(traj.at_rest_after(2.0));
  }
}

TEST_CASE("bump integral matches quadrature") {
  const Trajectory traj = Trajectory::bump(0.7, 1.9);
  // trapezoid oracle for Int_0^t xi_dot^2
  auto quad = [&](double t) {
    const int n = 20000;
    double acc = 0.0;
    for (int i = 0; i < n; ++i) {
      const double u0 = t * i / n, u1 = t * (i + 1) / n;
      acc += 0.5 * (u1 - u0) *
             (traj.xi_dot(u0) * traj.xi_dot(u0) + traj.xi_dot(u1) * traj.xi_dot(u1));
    }
    return acc;
  };
  for (double t : {0.3, 0.95, 1.9, 4.0})
    REQUIRE(traj.xi_dot_sq_integral(t) == Catch::Approx(quad(std::min(t, 1.9))).margin(1e-7));
}

TEST_CASE("phase additivity over a matched-derivative concatenation") {
  // accelerate on [0, T1], then coast with the reached velocity
  const double a = 0.6, t1 = 1.25;
  const Trajectory ramp = Trajectory::uniform_acceleration(a);
  const Trajectory coast = Trajectory::uniform_velocity(a * t1);
  const double m = 1.3, x = -0.8;
  for (double t : {1.5, 2.0, 6.0}) {
    // segment decomposition: coast phase measured from t1 plus the frozen
    // ramp integral contribution
    const double seg =
        m * (-coast.xi_dot(t) * x + 0.5 * (coast.xi_dot_sq_integral(t) -
                                           coast.xi_dot_sq_integral(t1)));
    const double boundary = m * 0.5 * ramp.xi_dot_sq_integral(t1);
    // direct evaluation of the concatenated trajectory
    const double direct = m * (-(a * t1) * x + 0.5 * (ramp.xi_dot_sq_integral(t1) +
                                                      (a * t1) * (a * t1) * (t - t1)));
    REQUIRE(seg + boundary == Catch::Approx(direct).epsilon(1e-13));
  }
}

TEST_CASE("densities are phase-blind for a single mass") {
  // |e^{i f} psi| == |psi| for any EGT phase
  const Trajectory traj = Trajectory::uniform_acceleration(0.9, 0.2);
  const frames::FreeGaussian psi{1.0, 0.0, 0.4, 1.0, 1.0};
  for (double x : {-1.0, 0.3, 2.2}) {
    const double f = frames::egt_phase(1.0, traj, x, 1.1);
    const frames::cdouble mapped = std::exp(-frames::iunit * f) * psi(x, 1.1);
    REQUIRE(std::abs(mapped) == Catch::Approx(std::abs(psi(x, 1.1))).epsilon(1e-14));
  }
}

TEST_CASE("free Gaussian closed form solves the Schrodinger equation") {
  const frames::FreeGaussian psi{0.8, 0.3, 1.1, 1.4, 1.0};
  const double h = 1e-4;
  for (double x : {-0.5, 0.4, 1.5}) {
    for (double t : {0.2, 0.9}) {
      const frames::cdouble dt = (psi(x, t + h) - psi(x, t - h)) / (2.0 * h);
      const frames::cdouble dxx =
          (psi(x + h, t) - 2.0 * psi(x, t) + psi(x - h, t)) / (h * h);
      const frames::cdouble residual =
          frames::iunit * dt + dxx / (2.0 * psi.mass);
      REQUIRE(std::abs(residual) < 1e-5);
    }
  }
  // initial norm on a wide grid
  double norm = 0.0;
  const int n = 4001;
  for (int i = 0; i < n; ++i) {
    const double x = -10.0 + 20.0 * i / (n - 1);
    norm += std::norm(psi(x, 0.0)) * 20.0 / (n - 1);
  }
  REQUIRE(norm == Catch::Approx(1.0).margin(1e-6));
}

TEST_CASE("boost covariance of the free Gaussian") {
  SECTION("identity boost is exact") {
    const frames::BoostCheckResult r = frames::verify_boost_covariance(1.0, 0.0);
    REQUIRE(r.max_residual < 1e-14);
  }
  SECTION("unit boost stays below 1e-8") {
    const frames::BoostCheckResult r = frames::verify_boost_covariance(1.0, 1.0);
    REQUIRE(r.max_residual < 1e-8);
    REQUIRE(r.max_density_residual < 1e-10);
  }
  SECTION("offset packets and nonzero initial momentum") {
    frames::BoostCheckSpec spec;
    spec.x0 = 1.5;
    spec.p0 = -0.7;
    spec.sigma0 = 0.6;
    const frames::BoostCheckResult r = frames::verify_boost_covariance(2.3, 0.8, spec);
    REQUIRE(r.max_residual < 1e-8);
  }
}

TEST_CASE("bargmann composition") {
  SECTION("coordinate map closes exactly") {
    const frames::BargmannResult r = frames::bargmann_compose(3.0, 2.0, {1.0, 1.5});
    REQUIRE(r.coordinates_identity);
    REQUIRE(r.phase_form_per_mass.cx == 0.0);
    REQUIRE(r.phase_form_per_mass.ct == 0.0);
  }
  SECTION("equal masses leave no relative phase") {
    const frames::BargmannResult r = frames::bargmann_compose(1.7, 0.9, {2.0, 2.0});
    REQUIRE(r.relative_phase[1] == 0.0);
  }
  SECTION("degenerate compositions leave no phase at all") {
    for (auto [l, v] : {std::pair{0.0, 2.0}, std::pair{3.0, 0.0}}) {
      const frames::BargmannResult r = frames::bargmann_compose(l, v, {1.0, 1.5});
      REQUIRE(r.phase[0] == 0.0);
      REQUIRE(r.phase[1] == 0.0);
    }
  }
  SECTION("dm = 0.5, v = 2, l = 3 gives relative phase -3") {
    const frames::BargmannResult r = frames::bargmann_compose(3.0, 2.0, {1.0, 1.5});
    REQUIRE(r.relative_phase[1] == Catch::Approx(-3.0).margin(1e-12));
    // per-mass phases -m v l mod 2 pi
    REQUIRE(r.phase[0] == Catch::Approx(frames::wrap_phase(-6.0)).margin(1e-12));
  }
  SECTION("relative phases are blind to a uniform mass shift") {
    std::mt19937_64 rng(5);
    std::uniform_real_distribution<double> u(0.1, 3.0);
    for (int trial = 0; trial < 50; ++trial) {
      const double l = u(rng), v = u(rng), m1 = u(rng), dm = u(rng), shift = u(rng);
      const frames::BargmannResult a = frames::bargmann_compose(l, v, {m1, m1 + dm});
      const frames::BargmannResult b =
          frames::bargmann_compose(l, v, {m1 + shift, m1 + dm + shift});
      REQUIRE(frames::wrap_phase(a.relative_phase[1] - b.relative_phase[1]) ==
              Catch::Approx(0.0).margin(1e-10));
    }
  }
}

TEST_CASE("lorentz composition of the four frames") {
  SECTION("no boost, no offsets") {
    const frames::LorentzComposition r = frames::lorentz_compose(2.0, 0.0);
    REQUIRE(r.dx == 0.0);
    REQUIRE(r.dtau == 0.0);
  }
  SECTION("l = 1, v = 0.5, c = 1 leaves dtau = 0.5") {
    const frames::LorentzComposition r = frames::lorentz_compose(1.0, 0.5);
    REQUIRE(r.dx == Catch::Approx(0.0).margin(1e-14));
    REQUIRE(r.dtau == Catch::Approx(0.5).margin(1e-14));
    REQUIRE(r.linear_residual < 1e-14);
  }
  SECTION("superluminal boosts are rejected") {
    REQUIRE_THROWS_AS(frames::lorentz_compose(1.0, 2.0, 1.0), std::domain_error);
    REQUIRE_THROWS_AS(frames::lorentz_compose(1.0, 1.0, 1.0), std::domain_error);
  }
  SECTION("relative phase equals -dm c^2 dtau / hbar") {
    const double l = 1.3, v = 0.45, c = 2.0, hbar = 1.0;
    const double m1 = 1.0, m2 = 1.9;
    const frames::LorentzComposition lc = frames::lorentz_compose(l, v, c);
    const frames::BargmannResult br = frames::bargmann_compose(l, v, {m1, m2}, hbar);
    const double via_tau = frames::wrap_phase(-(m2 - m1) * c * c * lc.dtau / hbar);
    REQUIRE(br.relative_phase[1] == Catch::Approx(via_tau).margin(1e-12));
  }
}

TEST_CASE("minimal-packet mass estimate") {
  REQUIRE(frames::heisenberg_mass_estimate(1.0, 1.0, 1.0) == 1.0);
  REQUIRE(frames::heisenberg_mass_estimate(2.0, 0.5, 1.0) == 1.0);
  REQUIRE(frames::heisenberg_mass_estimate(1e-6, 1e-3, 1.0545718e-34) ==
          Catch::Approx(1.0545718e-25).epsilon(1e-12));
  REQUIRE_THROWS_AS(frames::heisenberg_mass_estimate(0.0, 1.0), std::domain_error);
}
