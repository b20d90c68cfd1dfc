#pragma once

// Classical fixed-step 4th-order explicit Runge-Kutta over small
// std::array states.  The systems integrated here are smooth and
// non-stiff, so a fixed step with an order check is enough.

#include <array>
#include <cstddef>
#include <functional>
#include <vector>

namespace taudyn::num {

template <std::size_t Dim>
using StateVec = std::array<double, Dim>;

namespace detail {

template <std::size_t Dim>
StateVec<Dim> axpy(const StateVec<Dim>& y, double a, const StateVec<Dim>& d) {
  StateVec<Dim> out;
  for (std::size_t i = 0; i < Dim; ++i) out[i] = y[i] + a * d[i];
  return out;
}

}  // namespace detail

template <std::size_t Dim, typename Deriv>
StateVec<Dim> rk4_step(Deriv&& f, double t, const StateVec<Dim>& y, double h) {
  const StateVec<Dim> k1 = f(t, y);
  const StateVec<Dim> k2 = f(t + 0.5 * h, detail::axpy(y, 0.5 * h, k1));
  const StateVec<Dim> k3 = f(t + 0.5 * h, detail::axpy(y, 0.5 * h, k2));
  const StateVec<Dim> k4 = f(t + h, detail::axpy(y, h, k3));
  StateVec<Dim> out;
  for (std::size_t i = 0; i < Dim; ++i)
    out[i] = y[i] + (h / 6.0) * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
  return out;
}

// Integrates n_steps of size h, invoking observer(t, y) at t0 and then
// after every stride-th step (and always at the final step).
template <std::size_t Dim, typename Deriv, typename Observer>
StateVec<Dim> rk4_integrate(Deriv&& f, double t0, StateVec<Dim> y, double h,
                            long n_steps, long stride, Observer&& observer) {
  if (stride < 1) stride = 1;
  observer(t0, y);
  for (long i = 1; i <= n_steps; ++i) {
    const double t = t0 + (i - 1) * h;
    y = rk4_step(f, t, y, h);
    if (i % stride == 0 || i == n_steps) observer(t0 + i * h, y);
  }
  return y;
}

}  // namespace taudyn::num
