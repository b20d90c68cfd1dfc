#pragma once

// Extended Galilean transformation phases, the four-frame Bargmann
// composition with its mass-dependent relative phase, the relativistic
// composition of the same frame sequence, and the free-Gaussian boost
// covariance check.
//
// A change to the frame x' = x + xi(t) maps a free solution psi to
// psi'(x', t) = e^{i f} phi(x', t) with
//
//     f(x', t) = (m / hbar) * ( -xi_dot(t) x' + 1/2 Int_0^t xi_dot^2 dt )
//
// where phi again solves the free equation (plus the inertial-force
// potential when xi_ddot != 0).

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace taudyn::frames {

using cdouble = std::complex<double>;
inline constexpr double pi = std::numbers::pi;
inline constexpr cdouble iunit{0.0, 1.0};

// Wraps an angle into the principal interval [-pi, pi].
inline double wrap_phase(double a) { return std::remainder(a, 2.0 * pi); }

// Frame trajectory xi(t) with analytic derivative and analytic
// Int_0^t xi_dot^2 dt.  The sine-squared bump returns to rest: xi and
// xi_dot vanish outside [0, T].  Its xi_ddot is discontinuous at the
// endpoints, which the phase functional (depending on xi_dot only)
// never sees.
struct Trajectory {
  enum class Kind { uniform_velocity, uniform_acceleration, sine_squared_bump };

  Kind kind = Kind::uniform_velocity;
  double offset = 0.0;
  double v = 0.0;
  double a = 0.0;
  double amplitude = 0.0;
  double duration = 0.0;
  double hbar = 1.0;
  double c = 1.0;

  static Trajectory uniform_velocity(double v, double offset = 0.0) {
    Trajectory t;
    t.kind = Kind::uniform_velocity;
    t.v = v;
    t.offset = offset;
    return t;
  }

  static Trajectory uniform_acceleration(double a, double v = 0.0, double offset = 0.0) {
    Trajectory t;
    t.kind = Kind::uniform_acceleration;
    t.a = a;
    t.v = v;
    t.offset = offset;
    return t;
  }

  static Trajectory bump(double amplitude, double duration) {
    if (!(duration > 0.0)) throw std::invalid_argument("Trajectory::bump: duration must be > 0");
    Trajectory t;
    t.kind = Kind::sine_squared_bump;
    t.amplitude = amplitude;
    t.duration = duration;
    return t;
  }

  double xi(double t) const {
    switch (kind) {
      case Kind::uniform_velocity: return offset + v * t;
      case Kind::uniform_acceleration: return offset + v * t + 0.5 * a * t * t;
      case Kind::sine_squared_bump: {
        if (t <= 0.0 || t >= duration) return 0.0;
        const double s = std::sin(pi * t / duration);
        return amplitude * s * s;
      }
    }
    return 0.0;
  }

  double xi_dot(double t) const {
    switch (kind) {
      case Kind::uniform_velocity: return v;
      case Kind::uniform_acceleration: return v + a * t;
      case Kind::sine_squared_bump: {
        if (t <= 0.0 || t >= duration) return 0.0;
        return amplitude * (pi / duration) * std::sin(2.0 * pi * t / duration);
      }
    }
    return 0.0;
  }

  // Int_0^t xi_dot(u)^2 du, closed form per kind.
  double xi_dot_sq_integral(double t) const {
    switch (kind) {
      case Kind::uniform_velocity: return v * v * t;
      case Kind::uniform_acceleration:
        return v * v * t + v * a * t * t + a * a * t * t * t / 3.0;
      case Kind::sine_squared_bump: {
        const double w = amplitude * pi / duration;
        if (t <= 0.0) return 0.0;
        if (t >= duration) return w * w * duration / 2.0;
        return w * w * (0.5 * t - duration / (8.0 * pi) * std::sin(4.0 * pi * t / duration));
      }
    }
    return 0.0;
  }

  bool at_rest_after(double t_rest) const {
    return xi(t_rest) == 0.0 && xi_dot(t_rest) == 0.0 &&
           (kind == Kind::sine_squared_bump ? t_rest >= duration
                                            : (v == 0.0 && a == 0.0));
  }
};

// Phase f(x', t) of the transformed wave function, in radians.
inline double egt_phase(double mass, const Trajectory& traj, double x_prime, double t) {
  return mass / traj.hbar * (-traj.xi_dot(t) * x_prime + 0.5 * traj.xi_dot_sq_integral(t));
}

// Affine form c_x * x + c_t * t + c_0; used both for composed coordinate
// maps and for accumulated plane-wave phases.  The translation/boost
// parameters cancel additively, so the four-frame sequence closes exactly
// in floating point.
struct AffineForm {
  double cx = 0.0;
  double ct = 0.0;
  double c0 = 0.0;
};

struct FrameOp {
  enum class Kind { translation, boost };
  Kind kind = Kind::translation;
  double value = 0.0;

  static FrameOp translation(double l) { return {Kind::translation, l}; }
  static FrameOp boost(double v) { return {Kind::boost, v}; }
};

// The four instantaneous relabelings: translate by l, boost by v,
// translate by -l, boost by -v.
inline std::vector<FrameOp> bargmann_sequence(double l, double v) {
  return {FrameOp::translation(l), FrameOp::boost(v), FrameOp::translation(-l),
          FrameOp::boost(-v)};
}

struct BargmannResult {
  std::vector<double> masses;
  std::vector<double> phase;           // wrapped per-mass total phase
  std::vector<double> relative_phase;  // wrapped phase[i] - phase[0]
  AffineForm coordinate;               // composed map x -> cx x + ct t + c0
  AffineForm phase_form_per_mass;      // accumulated phase / m; cx = ct = 0 on closure
  bool coordinates_identity = false;
};

// Sequentially applies the plane-wave phase factors of the frame sequence
// to each mass component.  A translation changes coordinates only; a boost
// by w maps x -> x - w t and multiplies by e^{i (m/hbar)(w x_new + w^2 t / 2)}.
inline BargmannResult compose_frames(const std::vector<FrameOp>& ops,
                                     const std::vector<double>& masses, double hbar) {
  if (masses.empty()) throw std::invalid_argument("compose_frames: need at least one mass");
  AffineForm coord{1.0, 0.0, 0.0};
  AffineForm phase{0.0, 0.0, 0.0};  // per unit mass
  for (const FrameOp& op : ops) {
    if (op.kind == FrameOp::Kind::translation) {
      coord.c0 -= op.value;
    } else {
      const double w = op.value;
      coord.ct -= w;
      phase.cx += w * coord.cx / hbar;
      phase.ct += (w * coord.ct + 0.5 * w * w) / hbar;
      phase.c0 += w * coord.c0 / hbar;
    }
  }
  BargmannResult out;
  out.masses = masses;
  out.coordinate = coord;
  out.phase_form_per_mass = phase;
  out.coordinates_identity = (coord.cx == 1.0 && coord.ct == 0.0 && coord.c0 == 0.0);
  for (double m : masses) out.phase.push_back(wrap_phase(m * phase.c0));
  for (double ph : out.phase) out.relative_phase.push_back(wrap_phase(ph - out.phase.front()));
  return out;
}

// Four-frame composition with the canonical (l, v, -l, -v) sequence.
// Per-mass total phase is -m v l / hbar; between two masses the relative
// phase -dm v l / hbar survives as the measurable imprint.
inline BargmannResult bargmann_compose(double l, double v, const std::vector<double>& masses,
                                       double hbar = 1.0) {
  return compose_frames(bargmann_sequence(l, v), masses, hbar);
}

struct LorentzComposition {
  double dx = 0.0;               // x4 - x
  double dtau = 0.0;             // t4 - t = l v / c^2
  double linear_residual = 0.0;  // max deviation of the composed linear map from identity
};

// Relativistic version of the same frame sequence (the return translation
// contracts to l/gamma).  Composing the four maps leaves the coordinates
// fixed up to a proper-time offset l v / c^2.
inline LorentzComposition lorentz_compose(double l, double v, double c = 1.0) {
  if (!(std::abs(v) < c)) throw std::domain_error("lorentz_compose: require |v| < c");
  const double gamma = 1.0 / std::sqrt(1.0 - v * v / (c * c));

  // Affine map (x, t) -> A (x, t) + b, composed left to right.
  double axx = 1.0, axt = 0.0, atx = 0.0, att = 1.0;
  double bx = 0.0, bt = 0.0;
  auto boost = [&](double w) {
    const double nxx = gamma * (axx - w * atx);
    const double nxt = gamma * (axt - w * att);
    const double ntx = gamma * (atx - w / (c * c) * axx);
    const double ntt = gamma * (att - w / (c * c) * axt);
    const double nbx = gamma * (bx - w * bt);
    const double nbt = gamma * (bt - w / (c * c) * bx);
    axx = nxx; axt = nxt; atx = ntx; att = ntt; bx = nbx; bt = nbt;
  };

  bx -= l;           // T1: x1 = x - l
  boost(v);          // T2
  bx += l / gamma;   // T3: contracted return translation
  boost(-v);         // T4

  LorentzComposition out;
  out.dx = bx;
  out.dtau = bt;
  out.linear_residual = std::max({std::abs(axx - 1.0), std::abs(axt), std::abs(atx),
                                  std::abs(att - 1.0)});
  return out;
}

// ---------------------------------------------------------------------------
// Free Gaussian packets and boost covariance.

struct FreeGaussian {
  double sigma0 = 1.0;  // initial position spread
  double x0 = 0.0;
  double p0 = 0.0;
  double mass = 1.0;
  double hbar = 1.0;

  // Closed-form evolution: psi(x, t) = C sigma0/sqrt(A') ... implemented via
  // the standard Gaussian integral; exact for all t.
  cdouble operator()(double x, double t) const {
    const double a = 1.0 / (4.0 * sigma0 * sigma0);
    const double k0 = p0 / hbar;
    const double beta = hbar * t / (2.0 * mass);
    const cdouble big_a = cdouble(1.0 / (4.0 * a), 0.0) + iunit * beta;  // 1/(4a) + i beta
    const double b = (x - x0) - 2.0 * beta * k0;
    const cdouble c_norm = std::pow(2.0 * pi * sigma0 * sigma0, -0.25);
    const cdouble pref = c_norm * std::sqrt(cdouble(1.0 / (4.0 * a), 0.0)) / std::sqrt(big_a);
    const cdouble phase = iunit * (k0 * (x - x0) - beta * k0 * k0);
    return pref * std::exp(phase - b * b / (4.0 * big_a));
  }
};

struct BoostCheckSpec {
  double sigma0 = 1.0;
  double x0 = 0.0;
  double p0 = 0.0;
  double t = 1.0;
  double hbar = 1.0;
  double x_min = -12.0;
  double x_max = 12.0;
  int n_points = 801;
};

struct BoostCheckResult {
  double max_residual = 0.0;          // pointwise |route A - route B|
  double max_density_residual = 0.0;  // | |psi_boosted| - |psi(x - v t)| |
};

// Evaluates the analytic free Gaussian in the lab frame, maps it with the
// EGT phase for xi = v t, and compares pointwise against the analytic
// solution with boosted initial data (momentum kicked by m v).
inline BoostCheckResult verify_boost_covariance(double mass, double v,
                                                const BoostCheckSpec& spec = {}) {
  FreeGaussian lab{spec.sigma0, spec.x0, spec.p0, mass, spec.hbar};
  FreeGaussian boosted{spec.sigma0, spec.x0, spec.p0 + mass * v, mass, spec.hbar};
  Trajectory xi = Trajectory::uniform_velocity(v);
  xi.hbar = spec.hbar;
  // The kicked initial data e^{i m v x / hbar} psi0(x) equals the boosted
  // Gaussian times a constant phase e^{i m v x0 / hbar}.
  const cdouble global = std::exp(iunit * (mass * v * spec.x0 / spec.hbar));

  BoostCheckResult out;
  const double t = spec.t;
  for (int i = 0; i < spec.n_points; ++i) {
    const double xp = spec.x_min + (spec.x_max - spec.x_min) * i / (spec.n_points - 1);
    const double f = egt_phase(mass, xi, xp, t);
    const cdouble route_a = std::exp(-iunit * f) * lab(xp - xi.xi(t), t);
    const cdouble route_b = global * boosted(xp, t);
    out.max_residual = std::max(out.max_residual, std::abs(route_a - route_b));
    out.max_density_residual =
        std::max(out.max_density_residual, std::abs(std::abs(route_b) - std::abs(lab(xp - v * t, t))));
  }
  return out;
}

// Minimal-packet mass inferred from kinematic spreads: hbar / (dx dv).
inline double heisenberg_mass_estimate(double delta_x, double delta_v, double hbar = 1.0) {
  if (!(delta_x > 0.0) || !(delta_v > 0.0))
    throw std::domain_error("heisenberg_mass_estimate: spreads must be positive");
  return hbar / (delta_x * delta_v);
}

}  // namespace taudyn::frames
