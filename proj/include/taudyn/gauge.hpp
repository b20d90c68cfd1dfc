#pragma once

// Gauge-condition solver for admissible gravitational potentials.
//
// The dimensionless potential psi = g phi / c^2 must satisfy the
// nonlinear constraint
//
//     dpsi/dt + psi dpsi/dtau = 0
//
// whose general solution is implicit: tau = t psi + f(psi) for an
// arbitrary profile f.  Roots are found by bracketed iteration; where the
// characteristics cross (wave breaking of the inviscid-Burgers-type
// equation) the point is flagged rather than resolved.
//
// The along-trajectory identity psi_dot = dpsi/dtau for a particle at
// rest holds in the g = 1 working normalization, which is the default.

#include <cmath>
#include <functional>
#include <stdexcept>
#include <vector>

#include "taudyn/roots.hpp"

namespace taudyn::dynamics {

struct GaugeProblem {
  // Profile f(x, psi) of the implicit solution tau = t psi + f(x, psi).
  std::function<double(double x, double psi)> f;
  double bracket_lo = -1.0;
  double bracket_hi = 1.0;
  double g = 1.0;  // coupling; identities below assume the g = 1 normalization
  double c = 1.0;
};

// Linear profile f(psi) = psi, closed-form root psi = tau / (t + 1).
inline GaugeProblem linear_gauge_problem(double bracket_lo = -100.0, double bracket_hi = 100.0) {
  GaugeProblem p;
  p.f = [](double, double psi) { return psi; };
  p.bracket_lo = bracket_lo;
  p.bracket_hi = bracket_hi;
  return p;
}

// Profile whose trajectory restriction reproduces the exponential-decay
// potential psi_traj(t) = -eps e^{-gamma t} with eps = mu / m0:
// f(psi) = -(1 - psi) log(-psi/eps) / gamma - (eps + psi) / gamma.
inline GaugeProblem decay_gauge_problem(double eps, double gamma) {
  if (!(eps > 0.0) || !(gamma > 0.0))
    throw std::invalid_argument("decay_gauge_problem: eps and gamma must be > 0");
  GaugeProblem p;
  p.f = [eps, gamma](double, double psi) {
    return (-(1.0 - psi) * std::log(-psi / eps) - (eps + psi)) / gamma;
  };
  p.bracket_lo = -eps * (1.0 - 1e-12);
  p.bracket_hi = -eps * 1e-8;
  return p;
}

struct GaugeRoot {
  double psi = 0.0;
  bool converged = false;
  bool shock_flagged = false;
  int iterations = 0;
};

// Solves tau = t psi + f(x, psi) for psi inside the bracket.  Residual
// monotonicity is scanned first: a non-monotone residual marks a
// multivalued (post-shock) region and the point is flagged.
inline GaugeRoot gauge_solve(const GaugeProblem& prob, double x, double t, double tau,
                             double tol = 1e-12) {
  if (!prob.f) throw std::invalid_argument("gauge_solve: problem has no profile f");
  auto residual = [&](double psi) { return t * psi + prob.f(x, psi) - tau; };

  constexpr int scan = 64;
  double prev = residual(prob.bracket_lo);
  int direction = 0;
  bool monotone = true;
  for (int i = 1; i <= scan; ++i) {
    const double psi = prob.bracket_lo + (prob.bracket_hi - prob.bracket_lo) * i / scan;
    const double cur = residual(psi);
    if (cur > prev) {
      if (direction < 0) monotone = false;
      direction = +1;
    } else if (cur < prev) {
      if (direction > 0) monotone = false;
      direction = -1;
    }
    prev = cur;
  }
  GaugeRoot out;
  if (!monotone) {
    out.shock_flagged = true;
    return out;
  }
  const double flo = residual(prob.bracket_lo);
  const double fhi = residual(prob.bracket_hi);
  if (flo != 0.0 && fhi != 0.0 && (flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("gauge_solve: root not bracketed");
  const num::RootResult r =
      num::find_root_bracketed(residual, prob.bracket_lo, prob.bracket_hi, tol);
  out.psi = r.value;
  out.converged = r.converged;
  out.iterations = r.iterations;
  return out;
}

// Central-difference residual of dpsi/dt + psi dpsi/dtau at (tau, t).
inline double gauge_pde_residual(const GaugeProblem& prob, double x, double t, double tau,
                                 double step = 1e-4) {
  const double psi0 = gauge_solve(prob, x, t, tau).psi;
  const double dpsidt =
      (gauge_solve(prob, x, t + step, tau).psi - gauge_solve(prob, x, t - step, tau).psi) /
      (2.0 * step);
  const double dpsidtau =
      (gauge_solve(prob, x, t, tau + step).psi - gauge_solve(prob, x, t, tau - step).psi) /
      (2.0 * step);
  return dpsidt + psi0 * dpsidtau;
}

struct GaugeIdentityReport {
  double max_pde_residual = 0.0;
  double max_identity_residual = 0.0;  // |psi_dot - dpsi/dtau| along rest trajectories
  int evaluated = 0;
  int flagged = 0;  // shock-flagged grid points, excluded from the maxima
};

// Checks both the gauge PDE and the rest-trajectory identity
// psi_dot = dpsi/dtau on a (tau, t) grid by finite differences.  The
// total derivative follows the particle clock, tau_dot = 1 + psi / g.
inline GaugeIdentityReport gauge_identity_check(const GaugeProblem& prob, double x,
                                                const std::vector<double>& taus,
                                                const std::vector<double>& times,
                                                double step = 1e-4) {
  GaugeIdentityReport rep;
  for (double t : times) {
    for (double tau : taus) {
      GaugeRoot root;
      try {
        root = gauge_solve(prob, x, t, tau);
      } catch (const std::invalid_argument&) {
        ++rep.flagged;
        continue;
      }
      if (!root.converged || root.shock_flagged) {
        ++rep.flagged;
        continue;
      }
      try {
        const double psi = root.psi;
        const double tau_dot = 1.0 + psi / prob.g;
        const double along =
            (gauge_solve(prob, x, t + step, tau + tau_dot * step).psi -
             gauge_solve(prob, x, t - step, tau - tau_dot * step).psi) /
            (2.0 * step);
        const double dpsidtau =
            (gauge_solve(prob, x, t, tau + step).psi - gauge_solve(prob, x, t, tau - step).psi) /
            (2.0 * step);
        rep.max_identity_residual =
            std::max(rep.max_identity_residual, std::abs(along - dpsidtau));
        rep.max_pde_residual =
            std::max(rep.max_pde_residual, std::abs(gauge_pde_residual(prob, x, t, tau, step)));
        ++rep.evaluated;
      } catch (const std::invalid_argument&) {
        ++rep.flagged;
      }
    }
  }
  return rep;
}

}  // namespace taudyn::dynamics
