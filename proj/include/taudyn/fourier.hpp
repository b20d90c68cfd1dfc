#pragma once

// Unitary discrete Fourier transforms on the centered momentum grid
// k_j = -pi + 2*pi*j/N.  Forward kernel is e^{-i k x} / sqrt(N), so a
// round trip is the identity and norms are preserved exactly.

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>

#include <Eigen/Dense>

namespace taudyn::num {

using cdouble = std::complex<double>;

inline double brillouin_k(int j, int n_sites) {
  return -std::numbers::pi + 2.0 * std::numbers::pi * j / n_sites;
}

namespace detail {

inline bool is_pow2(int n) { return n > 0 && (n & (n - 1)) == 0; }

// In-place radix-2 Cooley-Tukey with kernel e^{sign * 2 pi i j x / N}.
inline void fft_pow2(Eigen::VectorXcd& a, int sign) {
  const int n = static_cast<int>(a.size());
  for (int i = 1, j = 0; i < n; ++i) {
    int bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (int len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / len;
    const cdouble wl(std::cos(ang), std::sin(ang));
    for (int i = 0; i < n; i += len) {
      cdouble w(1.0, 0.0);
      for (int j = 0; j < len / 2; ++j) {
        const cdouble u = a[i + j];
        const cdouble v = a[i + j + len / 2] * w;
        a[i + j] = u + v;
        a[i + j + len / 2] = u - v;
        w *= wl;
      }
    }
  }
}

inline Eigen::VectorXcd dft_direct(const Eigen::VectorXcd& in, int sign) {
  const int n = static_cast<int>(in.size());
  Eigen::VectorXcd out(n);
  for (int j = 0; j < n; ++j) {
    cdouble acc(0.0, 0.0);
    const double base = sign * 2.0 * std::numbers::pi * j / n;
    for (int x = 0; x < n; ++x) acc += in[x] * std::polar(1.0, base * x);
    out[j] = acc;
  }
  return out;
}

inline void dft(Eigen::VectorXcd& a, int sign) {
  if (is_pow2(static_cast<int>(a.size())))
    fft_pow2(a, sign);
  else
    a = dft_direct(a, sign);
}

}  // namespace detail

// f_hat(k_j) = (1/sqrt(N)) sum_x e^{-i k_j x} f(x).
// The -pi offset of the grid turns into a (-1)^x pre-factor.
inline Eigen::VectorXcd to_momentum_grid(Eigen::VectorXcd f) {
  const int n = static_cast<int>(f.size());
  if (n < 1) throw std::invalid_argument("to_momentum_grid: empty input");
  for (int x = 1; x < n; x += 2) f[x] = -f[x];
  detail::dft(f, -1);
  return f / std::sqrt(static_cast<double>(n));
}

// f(x) = (1/sqrt(N)) sum_j e^{+i k_j x} f_hat(k_j).
inline Eigen::VectorXcd to_position_grid(Eigen::VectorXcd f) {
  const int n = static_cast<int>(f.size());
  if (n < 1) throw std::invalid_argument("to_position_grid: empty input");
  detail::dft(f, +1);
  for (int x = 1; x < n; x += 2) f[x] = -f[x];
  return f / std::sqrt(static_cast<double>(n));
}

}  // namespace taudyn::num
