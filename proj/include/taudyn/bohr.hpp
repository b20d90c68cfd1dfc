#pragma once

// Closed-form expectation values for the Bohr atom and its gravitational
// analogue (Coulomb coupling e^2 replaced by G M m), in the external-field
// approximation with total angular momentum fixed to l = n.  The angular
// velocity uses the approximation <omega> ~ n hbar / (m <r^2>), matching
// the tabulated forms; it is labeled approximate in exports.
//
// Known singular cases at n = 1 (the l = n formulas give <r^2> = 0) are
// surfaced as undefined, not patched.

#include <cmath>
#include <optional>
#include <stdexcept>

namespace taudyn::bohr {

struct AtomSpec {
  int n = 2;            // principal quantum number; l = n built in
  double mass = 1.0;    // orbiting mass
  double big_m = 1.0;   // central mass (gravitational case)
  double g_newton = 1.0;
  double hbar = 1.0;
  double e2 = 1.0;      // squared charge e^2, CGS-electrostatic

  void validate() const {
    if (n < 1) throw std::invalid_argument("AtomSpec: n must be >= 1");
    if (!(mass > 0.0) || !(big_m > 0.0))
      throw std::invalid_argument("AtomSpec: masses must be positive");
    if (!(hbar > 0.0)) throw std::invalid_argument("AtomSpec: hbar must be positive");
  }

  // External-field approximation wants M >> m.
  bool external_field_ok() const { return big_m / mass >= 100.0; }
};

struct CoulombExpectations {
  double r_mean = 0.0;
  double r2_mean = 0.0;
  std::optional<double> omega_mean;  // empty when undefined (n = 1)
  double energy = 0.0;
  double bohr_radius = 0.0;
};

struct GravExpectations {
  double r_mean = 0.0;
  std::optional<double> omega_mean;
  double energy = 0.0;
};

// Bohr-atom forms with a0 = hbar^2 / (m e^2):
//   <r>_n  = a0 n (n - 1/2)
//   <r^2>_n = n^2 a0^2 (2 n^2 - 3 n + 1) / 2
//   <omega>_n ~ n hbar / (m <r^2>_n)
//   E_n    = -m e^4 / (2 hbar^2 n^2)
inline CoulombExpectations coulomb_expectations(const AtomSpec& spec) {
  spec.validate();
  CoulombExpectations out;
  const double n = spec.n;
  const double a0 = spec.hbar * spec.hbar / (spec.mass * spec.e2);
  out.bohr_radius = a0;
  out.r_mean = a0 * n * (n - 0.5);
  out.r2_mean = 0.5 * n * n * a0 * a0 * (2.0 * n * n - 3.0 * n + 1.0);
  if (out.r2_mean > 0.0) out.omega_mean = n * spec.hbar / (spec.mass * out.r2_mean);
  out.energy = -spec.mass * spec.e2 * spec.e2 / (2.0 * spec.hbar * spec.hbar * n * n);
  return out;
}

// Gravitational analogue, written out directly:
//   <r>_n  = n (n - 1/2) hbar^2 / (G M m^2)
//   <omega>_n ~ G^2 M^2 m^3 / (n (n^2 - 3n/2 + 1/2) hbar^3)
//   E_n    = -G^2 M^2 m^3 / (2 n^2 hbar^2)
inline GravExpectations grav_expectations(const AtomSpec& spec) {
  spec.validate();
  GravExpectations out;
  const double n = spec.n;
  const double gm = spec.g_newton * spec.big_m;
  out.r_mean = n * (n - 0.5) * spec.hbar * spec.hbar / (gm * spec.mass * spec.mass);
  const double denom = n * (n * n - 1.5 * n + 0.5);
  if (denom != 0.0) {
    out.omega_mean = gm * gm * spec.mass * spec.mass * spec.mass /
                     (denom * spec.hbar * spec.hbar * spec.hbar);
  }
  out.energy = -gm * gm * spec.mass * spec.mass * spec.mass /
               (2.0 * n * n * spec.hbar * spec.hbar);
  return out;
}

struct ScalingReport {
  double factor = 2.0;
  double grav_r_exponent = 0.0;       // -2
  std::optional<double> grav_omega_exponent;  // +3
  double grav_energy_exponent = 0.0;  // +3
  double coulomb_energy_exponent = 0.0;  // +1
  // E_n / m scales as m^grav_e_over_m_exponent; nonzero means the binding
  // energy per unit mass depends on the mass, against weak equivalence.
  double grav_e_over_m_exponent = 0.0;
  bool equivalence_violation = false;
};

// Fits the scaling exponent of each observable under m -> factor * m by
// the log-ratio of the closed forms.
inline ScalingReport mass_scaling_report(const AtomSpec& spec, double factor) {
  spec.validate();
  if (!(factor > 0.0) || factor == 1.0)
    throw std::invalid_argument("mass_scaling_report: factor must be positive and != 1");
  AtomSpec scaled = spec;
  scaled.mass = factor * spec.mass;

  const GravExpectations g0 = grav_expectations(spec);
  const GravExpectations g1 = grav_expectations(scaled);
  const CoulombExpectations c0 = coulomb_expectations(spec);
  const CoulombExpectations c1 = coulomb_expectations(scaled);

  auto exponent = [factor](double after, double before) {
    return std::log2(std::abs(after / before)) / std::log2(factor);
  };

  ScalingReport rep;
  rep.factor = factor;
  rep.grav_r_exponent = exponent(g1.r_mean, g0.r_mean);
  if (g0.omega_mean && g1.omega_mean)
    rep.grav_omega_exponent = exponent(*g1.omega_mean, *g0.omega_mean);
  rep.grav_energy_exponent = exponent(g1.energy, g0.energy);
  rep.coulomb_energy_exponent = exponent(c1.energy, c0.energy);
  rep.grav_e_over_m_exponent = exponent(g1.energy / scaled.mass, g0.energy / spec.mass);
  rep.equivalence_violation = std::abs(rep.grav_e_over_m_exponent) > 1e-9;
  return rep;
}

}  // namespace taudyn::bohr
