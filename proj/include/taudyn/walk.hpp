#pragma once

// One-dimensional two-component quantum walk on a periodic lattice.
//
// The evolution is U = A (x) S + B (x) S~ + C (x) I on C^2 (x) l2(Z_N),
// with A = diag(n, 0), B = diag(0, n), C = -i m sigma_1 and n^2 + m^2 = 1.
// In the momentum representation (forward kernel e^{-i k x}) the walk is
// block diagonal with
//
//     U(k) = [ n e^{ik}   -i m     ]
//            [ -i m       n e^{-ik}]
//
// and dispersion relation omega(k) = arccos(n cos k).  Consistency of the
// momentum matrix with the e^{-ikx} transform pins the position-space
// stepping rule: component r hops toward -x and component l toward +x.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

#include "taudyn/fourier.hpp"

namespace taudyn::walk {

using cdouble = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr cdouble iunit{0.0, 1.0};

// Mass parameter m and hopping amplitude n, bound by n^2 + m^2 = 1.
// The non-negative n branch is the canonical representative; a sign flip
// of n is a unitary regauging of the walk.
struct WalkParams {
  double m = 0.0;
  double n = 1.0;

  static WalkParams from_mass(double mass) {
    if (!(mass >= -1.0 && mass <= 1.0))
      throw std::invalid_argument("WalkParams: mass parameter must lie in [-1, 1]");
    return WalkParams{mass, std::sqrt(1.0 - mass * mass)};
  }

  double constraint_residual() const { return n * n + m * m - 1.0; }
};

enum class Rep { position, momentum };

// Two complex amplitudes per site of a periodic 1-D lattice, tagged with
// the active representation.  Component order is (r, l).
struct SpinorField {
  Rep rep = Rep::position;
  Eigen::VectorXcd r;
  Eigen::VectorXcd l;

  int sites() const { return static_cast<int>(r.size()); }

  double squared_norm() const { return r.squaredNorm() + l.squaredNorm(); }
  double norm() const { return std::sqrt(squared_norm()); }

  static SpinorField zero(int n_sites, Rep rep = Rep::position) {
    SpinorField f;
    f.rep = rep;
    f.r = Eigen::VectorXcd::Zero(n_sites);
    f.l = Eigen::VectorXcd::Zero(n_sites);
    return f;
  }

  // Unit amplitude on a single site, in component 0 = r or 1 = l.
  static SpinorField delta(int n_sites, int x, int component) {
    SpinorField f = zero(n_sites);
    if (x < 0 || x >= n_sites) throw std::invalid_argument("SpinorField::delta: site out of range");
    if (component == 0)
      f.r[x] = 1.0;
    else if (component == 1)
      f.l[x] = 1.0;
    else
      throw std::invalid_argument("SpinorField::delta: component must be 0 (r) or 1 (l)");
    return f;
  }
};

inline void require_even_size(const SpinorField& f) {
  if (f.sites() < 2 || f.sites() % 2 != 0)
    throw std::invalid_argument("SpinorField: lattice size must be even and >= 2");
}

// Momentum grid point k_j = -pi + 2 pi j / N.
inline double momentum_of(int j, int n_sites) { return num::brillouin_k(j, n_sites); }

// One step of the walk in position representation, periodic wraparound.
inline SpinorField step(const WalkParams& p, const SpinorField& f) {
  if (f.rep != Rep::position)
    throw std::invalid_argument("step: field must be in position representation");
  require_even_size(f);
  const int n = f.sites();
  SpinorField out = SpinorField::zero(n);
  const cdouble hop = p.n;
  const cdouble mix = -iunit * p.m;
  for (int x = 0; x < n; ++x) {
    const int xp = (x + 1 == n) ? 0 : x + 1;
    const int xm = (x == 0) ? n - 1 : x - 1;
    out.r[x] = hop * f.r[xp] + mix * f.l[x];
    out.l[x] = hop * f.l[xm] + mix * f.r[x];
  }
  return out;
}

inline SpinorField to_momentum(const SpinorField& f) {
  if (f.rep != Rep::momentum) {
    SpinorField out;
    out.rep = Rep::momentum;
    out.r = num::to_momentum_grid(f.r);
    out.l = num::to_momentum_grid(f.l);
    return out;
  }
  throw std::invalid_argument("to_momentum: field already in momentum representation");
}

inline SpinorField to_position(const SpinorField& f) {
  if (f.rep != Rep::position) {
    SpinorField out;
    out.rep = Rep::position;
    out.r = num::to_position_grid(f.r);
    out.l = num::to_position_grid(f.l);
    return out;
  }
  throw std::invalid_argument("to_position: field already in position representation");
}

// Momentum-space walk matrix U(k).
inline Eigen::Matrix2cd walk_matrix(const WalkParams& p, double k) {
  Eigen::Matrix2cd u;
  const cdouble mix = -iunit * p.m;
  u << p.n * std::polar(1.0, k), mix, mix, p.n * std::polar(1.0, -k);
  return u;
}

// Dispersion relation, principal branch in [0, pi].
inline double omega(const WalkParams& p, double k) {
  const double arg = p.n * std::cos(k);
  return std::acos(std::clamp(arg, -1.0, 1.0));
}

// sin^2 omega - (1 - m^2) sin^2 k - m^2; identically zero on the spectrum.
inline double dispersion_residual(const WalkParams& p, double k) {
  const double w = omega(p, k);
  const double sw = std::sin(w);
  const double sk = std::sin(k);
  return sw * sw - (1.0 - p.m * p.m) * sk * sk - p.m * p.m;
}

// Group velocity v(k) = d omega / d k = n sin k / sin omega.  The singular
// set m = 0, k in {0, pi} is handled by limit: sign(k) at the band edge and
// the midpoint value 0 at the k = 0 kink of |k|.
inline double group_velocity(const WalkParams& p, double k) {
  if (p.m == 0.0) {
    // omega = |k|: v = sign(k) away from the kink, midpoint value at k = 0
    if (k == 0.0) return 0.0;
    return std::copysign(1.0, k);
  }
  const double w = omega(p, k);
  return p.n * std::sin(k) / std::sin(w);  // sin omega >= |m| > 0
}

// Spectral data of U(k): eigenphases e^{-i s omega} and eigenvectors for
// s = +1 (particle) and s = -1 (antiparticle).
struct WalkSpectrumPoint {
  double k = 0.0;
  double omega = 0.0;
  double v = 0.0;
  Eigen::Vector2cd plus;   // s = +1
  Eigen::Vector2cd minus;  // s = -1
  bool degenerate = false; // m = 0 with k in {0, pi}: any orthonormal pair works
};

inline WalkSpectrumPoint eigensystem(const WalkParams& p, double k) {
  WalkSpectrumPoint out;
  out.k = k;
  out.omega = omega(p, k);
  out.v = group_velocity(p, k);
  out.degenerate = (p.m == 0.0) && (std::sin(out.omega) < 1e-12);
  // Closed form (sqrt(1 - s v), s sqrt(1 + s v)) / sqrt(2); the relative
  // sign of the second component tracks the sign of the mass parameter.
  const double sm = (p.m < 0.0) ? -1.0 : 1.0;
  const double a = std::sqrt(std::max(0.0, 1.0 - out.v)) / std::numbers::sqrt2;
  const double b = std::sqrt(std::max(0.0, 1.0 + out.v)) / std::numbers::sqrt2;
  out.plus << a, sm * b;
  out.minus << b, -sm * a;
  return out;
}

// Effective Hamiltonian H(k) with exp(-i H(k)) = U(k) and eigenvalues
// +/- omega(k): H = (omega/sin omega) (-n sin k sigma_3 + m sigma_1).
// For m = 0 this reduces to -k sigma_3 on (-pi, pi); the band-edge point
// omega = pi has no continuous logarithm and is rejected.
inline Eigen::Matrix2cd hamiltonian(const WalkParams& p, double k) {
  Eigen::Matrix2cd h;
  if (p.m == 0.0) {
    if (pi - std::abs(k) < 1e-12)
      throw std::domain_error("hamiltonian: omega = pi band edge excluded (no continuous logarithm)");
    h << -k, 0.0, 0.0, k;
    return h;
  }
  const double w = omega(p, k);
  const double f = w / std::sin(w);  // sin omega >= |m| > 0 here
  const double a = -p.n * std::sin(k) * f;
  const double b = p.m * f;
  h << a, b, b, -a;
  return h;
}

// `steps` applications of the walk.  Position fields are stepped; momentum
// fields evolve per k through the spectral form of U(k)^steps.
inline SpinorField evolve(const WalkParams& p, const SpinorField& f, long steps) {
  if (steps < 0) throw std::invalid_argument("evolve: steps must be >= 0");
  if (f.rep == Rep::position) {
    SpinorField g = f;
    for (long i = 0; i < steps; ++i) g = step(p, g);
    return g;
  }
  const int n = f.sites();
  SpinorField g = f;
  for (int j = 0; j < n; ++j) {
    const WalkSpectrumPoint es = eigensystem(p, momentum_of(j, n));
    const Eigen::Vector2cd in(f.r[j], f.l[j]);
    const cdouble ap = es.plus.dot(in);
    const cdouble am = es.minus.dot(in);
    const cdouble php = std::polar(1.0, -es.omega * static_cast<double>(steps));
    const cdouble phm = std::polar(1.0, +es.omega * static_cast<double>(steps));
    const Eigen::Vector2cd out = ap * php * es.plus + am * phm * es.minus;
    g.r[j] = out(0);
    g.l[j] = out(1);
  }
  return g;
}

}  // namespace taudyn::walk
