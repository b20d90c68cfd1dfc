#pragma once

// Gaussian wave packets on a single dispersion branch of the walk and
// ballistic transport measurement against the closed-form group velocity.

#include <cmath>
#include <stdexcept>
#include <vector>

#include "taudyn/walk.hpp"

namespace taudyn::wavepacket {

using walk::SpinorField;
using walk::WalkParams;

struct GaussianSpec {
  double k0 = 0.0;      // central momentum, in (-pi, pi)
  double sigma_k = 0.1; // momentum spread
  int x0 = 0;           // integer center site
  int branch = +1;      // s = +1 or -1

  void validate() const {
    if (!(sigma_k > 0.0)) throw std::invalid_argument("GaussianSpec: sigma_k must be > 0");
    if (branch != 1 && branch != -1)
      throw std::invalid_argument("GaussianSpec: branch must be +1 or -1");
    if (!(std::abs(k0) + 5.0 * sigma_k < walk::pi))
      throw std::invalid_argument(
          "GaussianSpec: momentum support |k0| + 5 sigma_k must stay inside the Brillouin zone");
  }
};

// Packet built in momentum space: a(k) ~ exp(-(k - k0)^2 / (4 sigma_k^2))
// times the branch eigenvector at each k, centered on site x0, unit norm.
inline SpinorField make_packet(const GaussianSpec& spec, const WalkParams& params, int n_sites) {
  spec.validate();
  if (n_sites < 2 || n_sites % 2 != 0)
    throw std::invalid_argument("make_packet: lattice size must be even and >= 2");
  SpinorField f = SpinorField::zero(n_sites, walk::Rep::momentum);
  for (int j = 0; j < n_sites; ++j) {
    const double k = walk::momentum_of(j, n_sites);
    const double dk = k - spec.k0;
    const double env = std::exp(-dk * dk / (4.0 * spec.sigma_k * spec.sigma_k));
    const walk::cdouble a = env * std::polar(1.0, -k * spec.x0);
    const walk::WalkSpectrumPoint es = walk::eigensystem(params, k);
    const Eigen::Vector2cd& vec = (spec.branch > 0) ? es.plus : es.minus;
    f.r[j] = a * vec(0);
    f.l[j] = a * vec(1);
  }
  const double nrm = f.norm();
  if (!(nrm > 0.0)) throw std::invalid_argument("make_packet: zero norm");
  f.r /= nrm;
  f.l /= nrm;
  return f;
}

struct Centroid {
  double value = 0.0;
  bool seam_flagged = false;  // probability mass touching the seam opposite the reference
};

// Mean position with seam-aware unwrapping: sites are mapped into the
// window of width N centered on `ref` before averaging.
inline Centroid centroid(const SpinorField& f, int ref) {
  if (f.rep != walk::Rep::position)
    throw std::invalid_argument("centroid: field must be in position representation");
  const int n = f.sites();
  Centroid out;
  double total = 0.0;
  double acc = 0.0;
  double seam_mass = 0.0;
  for (int x = 0; x < n; ++x) {
    const double p = std::norm(f.r[x]) + std::norm(f.l[x]);
    int off = (x - ref) % n;
    if (off < -n / 2) off += n;
    if (off >= n / 2) off -= n;
    total += p;
    acc += p * off;
    if (std::abs(off) >= n / 2 - 2) seam_mass += p;
  }
  if (!(total > 0.0)) throw std::invalid_argument("centroid: zero-norm field");
  out.value = ref + acc / total;
  out.seam_flagged = seam_mass > 1e-10 * total;
  return out;
}

// Reference-free overload: unwraps around the most probable site.
inline Centroid centroid(const SpinorField& f) {
  if (f.rep != walk::Rep::position)
    throw std::invalid_argument("centroid: field must be in position representation");
  int best = 0;
  double best_p = -1.0;
  for (int x = 0; x < f.sites(); ++x) {
    const double p = std::norm(f.r[x]) + std::norm(f.l[x]);
    if (p > best_p) {
      best_p = p;
      best = x;
    }
  }
  return centroid(f, best);
}

struct TransportReport {
  std::vector<long> times;
  std::vector<double> centroids;
  double fitted_velocity = 0.0;
  double predicted_velocity = 0.0;  // branch * v(k0)
  double m = 0.0;
  double k0 = 0.0;
  double sigma_k = 0.0;
  bool seam_flagged = false;
};

// Least-squares slope of y against t.
inline double fit_slope(const std::vector<double>& t, const std::vector<double>& y) {
  const std::size_t n = t.size();
  if (n < 2 || y.size() != n) throw std::invalid_argument("fit_slope: need >= 2 samples");
  double mt = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mt += t[i];
    my += y[i];
  }
  mt /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (t[i] - mt) * (t[i] - mt);
    sxy += (t[i] - mt) * (y[i] - my);
  }
  return sxy / sxx;
}

// Evolves the packet by position stepping and fits the centroid drift.
// The fit uses the second half of the run only, so transient spreading
// settles before the slope is taken.
inline TransportReport measure_group_velocity(const GaussianSpec& spec, const WalkParams& params,
                                              int n_sites, long steps) {
  spec.validate();
  if (steps < 20) throw std::invalid_argument("measure_group_velocity: need steps >= 20");
  const double vk = walk::group_velocity(params, spec.k0);
  if (!(steps * std::abs(vk) + 5.0 / spec.sigma_k < n_sites / 2.0))
    throw std::invalid_argument("measure_group_velocity: packet would wrap around the lattice");

  SpinorField f = walk::to_position(make_packet(spec, params, n_sites));

  TransportReport rep;
  rep.m = params.m;
  rep.k0 = spec.k0;
  rep.sigma_k = spec.sigma_k;
  rep.predicted_velocity = spec.branch * vk;

  // The no-wrap precondition keeps the whole run inside the half-lattice
  // window around x0, so a fixed unwrap reference cannot jump.
  const long stride = std::max<long>(1, steps / 20);
  const int ref = spec.x0;
  long t = 0;
  auto sample = [&]() {
    const Centroid c = centroid(f, ref);
    rep.times.push_back(t);
    rep.centroids.push_back(c.value);
    rep.seam_flagged = rep.seam_flagged || c.seam_flagged;
  };
  sample();
  while (t < steps) {
    const long chunk = std::min(stride, steps - t);
    for (long i = 0; i < chunk; ++i) f = walk::step(params, f);
    t += chunk;
    sample();
  }

  std::vector<double> ft, fy;
  for (std::size_t i = 0; i < rep.times.size(); ++i) {
    if (rep.times[i] * 2 >= steps) {
      ft.push_back(static_cast<double>(rep.times[i]));
      fy.push_back(rep.centroids[i]);
    }
  }
  rep.fitted_velocity = fit_slope(ft, fy);
  return rep;
}

}  // namespace taudyn::wavepacket
