#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "minklab/scalar_field.hpp"

namespace minklab {

// Ghost rule across the poles: a quantity sampled past theta=0 (or theta=pi)
// is read at the antipodal longitude, v(-theta, phi) = s * v(theta, phi+pi).
// Plain scalars have s=+1 (Even); frame components with one e_theta or
// e_phihat factor flip sign (Odd), since both frame vectors reverse across
// the pole; two-tensor frame components are Even again.
enum class Parity : int { Even = +1, Odd = -1 };

namespace detail {

// value at logical row index i (may fall outside [0, n_theta)), column j
inline double at(const SphereGrid& g, const std::vector<double>& v, int i, int j, Parity par) {
  const int M = g.n_phi;
  double s = 1.0;
  if (i < 0) {
    i = -1 - i;
    j += M / 2;
    s = static_cast<double>(par);
  } else if (i >= g.n_theta) {
    i = 2 * g.n_theta - 1 - i;
    j += M / 2;
    s = static_cast<double>(par);
  }
  j %= M;
  if (j < 0) j += M;
  return s * v[g.idx(i, j)];
}

}  // namespace detail

// 4th-order centred first derivative in theta
inline ScalarField d_theta(const ScalarField& f, Parity par) {
  const SphereGrid& g = *f.grid;
  ScalarField out(f.grid);
  const double h = g.dtheta();
  for (int i = 0; i < g.n_theta; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      const double fm2 = detail::at(g, f.values, i - 2, j, par);
      const double fm1 = detail::at(g, f.values, i - 1, j, par);
      const double fp1 = detail::at(g, f.values, i + 1, j, par);
      const double fp2 = detail::at(g, f.values, i + 2, j, par);
      out(i, j) = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    }
  return out;
}

// 4th-order centred second derivative in theta
inline ScalarField d2_theta(const ScalarField& f, Parity par) {
  const SphereGrid& g = *f.grid;
  ScalarField out(f.grid);
  const double h2 = g.dtheta() * g.dtheta();
  for (int i = 0; i < g.n_theta; ++i)
    for (int j = 0; j < g.n_phi; ++j) {
      const double fm2 = detail::at(g, f.values, i - 2, j, par);
      const double fm1 = detail::at(g, f.values, i - 1, j, par);
      const double f0 = f(i, j);
      const double fp1 = detail::at(g, f.values, i + 1, j, par);
      const double fp2 = detail::at(g, f.values, i + 2, j, par);
      out(i, j) = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h2);
    }
  return out;
}

// 4th-order centred first derivative in phi (periodic)
inline ScalarField d_phi(const ScalarField& f) {
  const SphereGrid& g = *f.grid;
  ScalarField out(f.grid);
  const int M = g.n_phi;
  const double h = g.dphi();
  for (int i = 0; i < g.n_theta; ++i)
    for (int j = 0; j < M; ++j) {
      const double fm2 = f(i, (j - 2 + M) % M);
      const double fm1 = f(i, (j - 1 + M) % M);
      const double fp1 = f(i, (j + 1) % M);
      const double fp2 = f(i, (j + 2) % M);
      out(i, j) = (fm2 - 8.0 * fm1 + 8.0 * fp1 - fp2) / (12.0 * h);
    }
  return out;
}

// 4th-order centred second derivative in phi (periodic)
inline ScalarField d2_phi(const ScalarField& f) {
  const SphereGrid& g = *f.grid;
  ScalarField out(f.grid);
  const int M = g.n_phi;
  const double h2 = g.dphi() * g.dphi();
  for (int i = 0; i < g.n_theta; ++i)
    for (int j = 0; j < M; ++j) {
      const double fm2 = f(i, (j - 2 + M) % M);
      const double fm1 = f(i, (j - 1 + M) % M);
      const double f0 = f(i, j);
      const double fp1 = f(i, (j + 1) % M);
      const double fp2 = f(i, (j + 2) % M);
      out(i, j) = (-fm2 + 16.0 * fm1 - 30.0 * f0 + 16.0 * fp1 - fp2) / (12.0 * h2);
    }
  return out;
}

// Azimuthal Fourier filter near the poles: in each latitude row, zonal
// wavenumbers above ~ (n_phi/2)*sin(theta) are removed. Standard remedy for
// the pole-clustering CFL restriction of explicit stepping on lat-lon grids.
inline void polar_filter(ScalarField& f) {
  const SphereGrid& g = *f.grid;
  const int M = g.n_phi;
  const int mmax_global = M / 2;
  static thread_local std::vector<std::complex<double>> buf, tmp;
  buf.resize(M);
  tmp.resize(M);
  const bool pow2 = (M & (M - 1)) == 0;

  auto fft = [&](std::vector<std::complex<double>>& a, bool inverse) {
    // iterative radix-2; falls back to naive DFT for non power-of-two n_phi
    const int n = M;
    if (pow2) {
      for (int i = 1, k = 0; i < n; ++i) {
        int bit = n >> 1;
        for (; k & bit; bit >>= 1) k ^= bit;
        k ^= bit;
        if (i < k) std::swap(a[i], a[k]);
      }
      for (int len = 2; len <= n; len <<= 1) {
        const double ang = 2.0 * std::numbers::pi / len * (inverse ? 1 : -1);
        const std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (int i = 0; i < n; i += len) {
          std::complex<double> w(1.0);
          for (int k = 0; k < len / 2; ++k) {
            const auto u = a[i + k], v = a[i + k + len / 2] * w;
            a[i + k] = u + v;
            a[i + k + len / 2] = u - v;
            w *= wl;
          }
        }
      }
    } else {
      for (int k = 0; k < n; ++k) {
        std::complex<double> s(0.0);
        for (int j = 0; j < n; ++j) {
          const double ang = 2.0 * std::numbers::pi * k * j / n * (inverse ? 1 : -1);
          s += a[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        tmp[k] = s;
      }
      a = tmp;
    }
    if (inverse)
      for (auto& z : a) z /= static_cast<double>(n);
  };

  for (int i = 0; i < g.n_theta; ++i) {
    const double st = g.sin_theta(i);
    const int mcut = std::max(2, static_cast<int>(mmax_global * st));
    if (mcut >= mmax_global) continue;  // row needs no filtering
    for (int j = 0; j < M; ++j) buf[j] = f(i, j);
    fft(buf, false);
    for (int m = mcut + 1; m <= M - mcut - 1; ++m) buf[m] = 0.0;
    fft(buf, true);
    for (int j = 0; j < M; ++j) f(i, j) = buf[j].real();
  }
}

}  // namespace minklab
