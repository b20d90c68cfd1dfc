#pragma once

// Classical variable-mass Hamiltonian dynamics on the extended phase
// space (x, p, tau, m): proper time is a coordinate and m c^2 its
// conjugate momentum, with Hamilton's equations
//
//     x_dot = dH/dp        p_dot   = -dH/dx
//     tau_dot = dH/dm / c^2  m_dot = -dH/dtau / c^2.
//
// Covers the relativistic free particle, the non-relativistic particle in
// a gravitational potential m phi(x, tau, t) plus an external V(x, t),
// exponential decay with its proper-time red shift, and binding energy
// acting as inertia.

#include <cmath>
#include <functional>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "taudyn/rk4.hpp"

namespace taudyn::dynamics {

struct VarMassState {
  double x = 0.0;
  double p = 0.0;
  double tau = 0.0;
  double mass = 1.0;
  double t = 0.0;

  double v() const { return p / mass; }
};

// Gravitational potential phi(x, tau, t) with the partial derivatives the
// equations of motion need.  Profiles are supplied analytically; callbacks
// see the full state so gauge-constrained gradients can use the velocity.
struct PotentialModel {
  std::function<double(const VarMassState&)> value = [](const VarMassState&) { return 0.0; };
  std::function<double(const VarMassState&)> d_dx = [](const VarMassState&) { return 0.0; };
  std::function<double(const VarMassState&)> d_dtau = [](const VarMassState&) { return 0.0; };
};

// External non-gravitational potential V(x, t).
struct ExternalPotential {
  std::function<double(const VarMassState&)> value = [](const VarMassState&) { return 0.0; };
  std::function<double(const VarMassState&)> d_dx = [](const VarMassState&) { return 0.0; };
};

inline ExternalPotential harmonic_potential(double k_spring, double x_center = 0.0) {
  ExternalPotential v;
  v.value = [k_spring, x_center](const VarMassState& s) {
    return 0.5 * k_spring * (s.x - x_center) * (s.x - x_center);
  };
  v.d_dx = [k_spring, x_center](const VarMassState& s) { return k_spring * (s.x - x_center); };
  return v;
}

struct Derivatives {
  double dx = 0.0;
  double dp = 0.0;
  double dtau = 0.0;
  double dmass = 0.0;
};

// Free relativistic particle, H = sqrt(p^2 c^2 + m^2 c^4).
inline Derivatives derivatives_free(const VarMassState& s, double c = 1.0) {
  const double energy = std::hypot(s.p * c, s.mass * c * c);
  if (!(energy > 0.0))
    throw std::domain_error("derivatives_free: p^2 c^2 + m^2 c^4 must be positive");
  Derivatives d;
  d.dx = s.p * c * c / energy;
  d.dp = 0.0;
  d.dtau = s.mass * c * c / energy;
  d.dmass = 0.0;
  return d;
}

// Particle in a gravitational potential, H = m c^2 + p^2/2m + m phi + V.
inline Derivatives derivatives_grav(const VarMassState& s, const PotentialModel& phi,
                                    const ExternalPotential* vext = nullptr, double c = 1.0) {
  if (!(s.mass > 0.0))
    throw std::runtime_error("derivatives_grav: non-positive mass encountered, aborting");
  Derivatives d;
  const double vel = s.p / s.mass;
  d.dx = vel;
  d.dp = -s.mass * phi.d_dx(s) - (vext ? vext->d_dx(s) : 0.0);
  d.dtau = 1.0 - 0.5 * vel * vel / (c * c) + phi.value(s) / (c * c);
  d.dmass = -s.mass * phi.d_dtau(s) / (c * c);
  return d;
}

inline double grav_hamiltonian(const VarMassState& s, const PotentialModel& phi,
                               const ExternalPotential* vext = nullptr, double c = 1.0) {
  return s.mass * c * c + s.p * s.p / (2.0 * s.mass) + s.mass * phi.value(s) +
         (vext ? vext->value(s) : 0.0);
}

struct IntegratorConfig {
  double h = 1e-3;
  long output_stride = 100;
};

struct TrajectoryPoint {
  VarMassState s;
  double phi = 0.0;
};

namespace detail {

// RK4 driver over the packed state (x, p, tau, mass).
template <typename DerivFn>
std::vector<TrajectoryPoint> integrate(const VarMassState& init, double t_end,
                                       const IntegratorConfig& cfg, DerivFn&& deriv,
                                       const PotentialModel* phi_for_record) {
  if (!(cfg.h > 0.0)) throw std::invalid_argument("IntegratorConfig: step h must be > 0");
  const long n_steps = std::lround((t_end - init.t) / cfg.h);
  std::vector<TrajectoryPoint> out;
  out.reserve(static_cast<std::size_t>(n_steps / std::max<long>(1, cfg.output_stride)) + 2);

  auto rhs = [&](double t, const num::StateVec<4>& y) -> num::StateVec<4> {
    VarMassState s{y[0], y[1], y[2], y[3], t};
    const Derivatives d = deriv(s);
    return {d.dx, d.dp, d.dtau, d.dmass};
  };
  auto record = [&](double t, const num::StateVec<4>& y) {
    VarMassState s{y[0], y[1], y[2], y[3], t};
    out.push_back({s, phi_for_record ? phi_for_record->value(s) : 0.0});
  };
  num::rk4_integrate<4>(rhs, init.t, {init.x, init.p, init.tau, init.mass}, cfg.h, n_steps,
                        cfg.output_stride, record);
  return out;
}

}  // namespace detail

inline std::vector<TrajectoryPoint> free_run(const VarMassState& init, double t_end,
                                             const IntegratorConfig& cfg, double c = 1.0) {
  return detail::integrate(init, t_end, cfg,
                           [c](const VarMassState& s) { return derivatives_free(s, c); },
                           nullptr);
}

inline std::vector<TrajectoryPoint> grav_run(const VarMassState& init, double t_end,
                                             const IntegratorConfig& cfg,
                                             const PotentialModel& phi,
                                             const ExternalPotential* vext = nullptr,
                                             double c = 1.0) {
  return detail::integrate(
      init, t_end, cfg,
      [&phi, vext, c](const VarMassState& s) { return derivatives_grav(s, phi, vext, c); }, &phi);
}

// ---------------------------------------------------------------------------
// Exponential decay.

struct DecaySpec {
  double m0 = 1.0;    // asymptotic mass
  double mu = 0.01;   // decaying mass excess
  double gamma = 1.0; // decay rate
  double c = 1.0;

  void validate() const {
    if (!(m0 > 0.0)) throw std::invalid_argument("DecaySpec: m0 must be > 0");
    if (!(mu >= 0.0) || mu / m0 > 0.1)
      throw std::invalid_argument("DecaySpec: require 0 <= mu/m0 <= 0.1 (first-order solution)");
    if (!(gamma > 0.0)) throw std::invalid_argument("DecaySpec: gamma must be > 0");
  }
};

// phi(t) = -(mu c^2 / m0) e^{-gamma t}, normalized to zero at late times.
// The gauge identity phi_dot = dphi/dtau supplies the tau partial.
inline PotentialModel decay_potential(const DecaySpec& spec) {
  const double amp = -spec.mu * spec.c * spec.c / spec.m0;
  const double gamma = spec.gamma;
  PotentialModel phi;
  phi.value = [amp, gamma](const VarMassState& s) { return amp * std::exp(-gamma * s.t); };
  phi.d_dtau = [amp, gamma](const VarMassState& s) {
    return -gamma * amp * std::exp(-gamma * s.t);
  };
  return phi;
}

struct DecayRun {
  std::vector<TrajectoryPoint> samples;
  double final_t = 0.0;
  double final_tau = 0.0;
  double final_mass = 0.0;

  double proper_time_deficit() const { return final_t - final_tau; }
};

// Particle at rest decaying from m0 + mu toward m0.
inline DecayRun decay_run(const DecaySpec& spec, const IntegratorConfig& cfg, double t_end) {
  spec.validate();
  const PotentialModel phi = decay_potential(spec);
  VarMassState init;
  init.mass = spec.m0 + spec.mu;
  DecayRun run;
  run.samples = grav_run(init, t_end, cfg, phi, nullptr, spec.c);
  const TrajectoryPoint& last = run.samples.back();
  run.final_t = last.s.t;
  run.final_tau = last.s.tau;
  run.final_mass = last.s.mass;
  return run;
}

// Asymptotic lag of the particle clock behind laboratory time.
inline double decay_redshift(const DecaySpec& spec) {
  spec.validate();
  return spec.mu / (spec.gamma * spec.m0);
}

// First-order mass law m0 + mu e^{-gamma t}.
inline double decay_mass_ansatz(const DecaySpec& spec, double t) {
  return spec.m0 + spec.mu * std::exp(-spec.gamma * t);
}

// ---------------------------------------------------------------------------
// Binding energy as inertia.

struct BindingSpec {
  double m0 = 1.0;
  double phi0 = -0.01;  // initial gauge potential value phi(t0); a convention,
                        // not inferred from V
  double gamma = 1.0;   // decay rate of the gauge profile
  double c = 1.0;

  void validate() const {
    if (!(m0 > 0.0)) throw std::invalid_argument("BindingSpec: m0 must be > 0");
    if (!(gamma > 0.0))
      throw std::invalid_argument("BindingSpec: gauge profile must decay (gamma > 0)");
  }

  double phi_at(double t) const { return phi0 * std::exp(-gamma * t); }
  double mu0() const { return m0 * std::exp(phi0 / (c * c)); }
};

// Gauge profile phi(t) = phi0 e^{-gamma t} with the moving-particle gauge
// gradient dphi/dx = (v / 2 c^2) dphi/dtau and dphi/dtau = phi_dot.
inline PotentialModel binding_potential(const BindingSpec& spec) {
  const double phi0 = spec.phi0;
  const double gamma = spec.gamma;
  const double c2 = spec.c * spec.c;
  PotentialModel phi;
  phi.value = [phi0, gamma](const VarMassState& s) { return phi0 * std::exp(-gamma * s.t); };
  phi.d_dtau = [phi0, gamma](const VarMassState& s) {
    return -gamma * phi0 * std::exp(-gamma * s.t);
  };
  phi.d_dx = [phi0, gamma, c2](const VarMassState& s) {
    return 0.5 * (s.p / s.mass) / c2 * (-gamma * phi0 * std::exp(-gamma * s.t));
  };
  return phi;
}

// Gauge value whose mass shift reproduces a given binding energy:
// mu0 = m0 + E_bind / c^2  <=>  phi(t0) = c^2 log(1 + E_bind / (m0 c^2)).
inline double gauge_value_for_binding_energy(double e_bind, double m0, double c = 1.0) {
  const double arg = e_bind / (m0 * c * c);
  if (!(arg > -1.0))
    throw std::domain_error("gauge_value_for_binding_energy: binding energy exceeds rest energy");
  return c * c * std::log1p(arg);
}

struct BindingRun {
  std::vector<TrajectoryPoint> samples;
  std::vector<double> lambda;  // lambda(t) = Int exp(phi / 2 c^2) dt at the samples
  double mu0 = 0.0;            // m0 e^{phi(t0)/c^2}, the late-time inertial mass
  double dlambda_dt_end = 0.0;
};

// Integrates the (x, p, tau, m) system plus the reduced time coordinate
// lambda.  Late-time motion is Newtonian in V with mass mu0.
inline BindingRun binding_run(const ExternalPotential& vext, const BindingSpec& spec,
                              const IntegratorConfig& cfg, double t_end, double x0 = 1.0,
                              double v0 = 0.0) {
  spec.validate();
  const PotentialModel phi = binding_potential(spec);
  const double c2 = spec.c * spec.c;

  BindingRun run;
  run.mu0 = spec.mu0();

  auto rhs = [&](double t, const num::StateVec<5>& y) -> num::StateVec<5> {
    VarMassState s{y[0], y[1], y[2], y[3], t};
    const Derivatives d = derivatives_grav(s, phi, &vext, spec.c);
    const double lam_dot = std::exp(0.5 * phi.value(s) / c2);
    return {d.dx, d.dp, d.dtau, d.dmass, lam_dot};
  };
  auto record = [&](double t, const num::StateVec<5>& y) {
    VarMassState s{y[0], y[1], y[2], y[3], t};
    run.samples.push_back({s, phi.value(s)});
    run.lambda.push_back(y[4]);
  };
  const long n_steps = std::lround(t_end / cfg.h);
  VarMassState init;
  init.x = x0;
  init.mass = spec.m0;
  init.p = spec.m0 * v0;
  num::rk4_integrate<5>(rhs, 0.0, {init.x, init.p, init.tau, init.mass, 0.0}, cfg.h, n_steps,
                        cfg.output_stride, record);
  VarMassState last = run.samples.back().s;
  run.dlambda_dt_end = std::exp(0.5 * phi.value(last) / c2);
  return run;
}

// Oscillation frequency from zero crossings of x(t) - x_center, by least
// squares on the crossing times.
inline double fit_frequency(const std::vector<TrajectoryPoint>& samples, double x_center = 0.0,
                            double t_min = 0.0) {
  std::vector<double> crossings;
  for (std::size_t i = 1; i < samples.size(); ++i) {
    const double a = samples[i - 1].s.x - x_center;
    const double b = samples[i].s.x - x_center;
    if (samples[i - 1].s.t < t_min) continue;
    if ((a <= 0.0 && b > 0.0) || (a >= 0.0 && b < 0.0)) {
      const double ta = samples[i - 1].s.t;
      const double tb = samples[i].s.t;
      crossings.push_back(ta + (tb - ta) * (-a) / (b - a));
    }
  }
  if (crossings.size() < 4)
    throw std::invalid_argument("fit_frequency: need at least 4 zero crossings");
  // crossing_i ~ t0 + i * (pi / omega)
  double mi = 0.0, mt = 0.0;
  const std::size_t n = crossings.size();
  for (std::size_t i = 0; i < n; ++i) {
    mi += static_cast<double>(i);
    mt += crossings[i];
  }
  mi /= n;
  mt /= n;
  double sii = 0.0, sit = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sii += (i - mi) * (i - mi);
    sit += (i - mi) * (crossings[i] - mt);
  }
  const double half_period = sit / sii;
  return std::numbers::pi / half_period;
}

// ---------------------------------------------------------------------------
// Euler homogeneity of H in (p, m).

struct HomogeneityResult {
  double euler_residual = 0.0;    // |H - p dH/dp - m dH/dm|
  double scaling_residual = 0.0;  // max_alpha |H(alpha p, alpha m) - alpha H|
};

// H is any callable double(double p, double mass) with the remaining
// coordinates bound.  Partials are central differences with power-of-two
// steps; the scaling route uses alpha in {1/2, 2} so the rescaled
// arguments are exact.
template <typename H>
HomogeneityResult euler_homogeneity_check(H&& h, double p, double mass) {
  const double h0 = h(p, mass);
  const double hp = std::ldexp(std::max(1.0, std::abs(p)), -17);
  const double hm = std::ldexp(std::max(1.0, std::abs(mass)), -17);
  const double dhdp = (h(p + hp, mass) - h(p - hp, mass)) / (2.0 * hp);
  const double dhdm = (h(p, mass + hm) - h(p, mass - hm)) / (2.0 * hm);
  HomogeneityResult out;
  out.euler_residual = std::abs(h0 - p * dhdp - mass * dhdm);
  for (double alpha : {0.5, 2.0}) {
    out.scaling_residual =
        std::max(out.scaling_residual, std::abs(h(alpha * p, alpha * mass) - alpha * h0));
  }
  return out;
}

}  // namespace taudyn::dynamics
