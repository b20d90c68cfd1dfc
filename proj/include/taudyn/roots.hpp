#pragma once

// Bracketed scalar root finding (Illinois variant of regula falsi with a
// bisection fallback).  Deterministic, no derivatives needed.

#include <cmath>
#include <stdexcept>

namespace taudyn::num {

struct RootResult {
  double value = 0.0;
  bool converged = false;
  int iterations = 0;
};

template <typename F>
RootResult find_root_bracketed(F&& f, double lo, double hi, double tol = 1e-12,
                               int max_iter = 200) {
  double flo = f(lo);
  double fhi = f(hi);
  if (flo == 0.0) return {lo, true, 0};
  if (fhi == 0.0) return {hi, true, 0};
  if ((flo > 0.0) == (fhi > 0.0))
    throw std::invalid_argument("find_root_bracketed: no sign change in bracket");

  RootResult res;
  int side = 0;
  double x_prev = lo;
  for (int it = 0; it < max_iter; ++it) {
    double x = (flo * hi - fhi * lo) / (flo - fhi);
    if (!(x > lo && x < hi)) x = 0.5 * (lo + hi);
    const double fx = f(x);
    res.iterations = it + 1;
    res.value = x;
    if (fx == 0.0 || std::abs(x - x_prev) <= tol || hi - lo <= tol) {
      res.converged = true;
      return res;
    }
    x_prev = x;
    if ((fx > 0.0) == (fhi > 0.0)) {
      hi = x;
      fhi = fx;
      if (side == +1) flo *= 0.5;
      side = +1;
    } else {
      lo = x;
      flo = fx;
      if (side == -1) fhi *= 0.5;
      side = -1;
    }
  }
  res.converged = false;
  return res;
}

}  // namespace taudyn::num
