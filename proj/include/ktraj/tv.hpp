#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "ktraj/volume.hpp"

namespace ktraj {

namespace detail {

// Forward differences with zero-flux boundary (difference across the last
// face of each axis is zero).
inline void forward_diffs(const Volume &z, std::vector<double> &dx,
                          std::vector<double> &dy, std::vector<double> &dz) {
  const int n = z.n;
  dx.assign(z.size(), 0.0);
  dy.assign(z.size(), 0.0);
  dz.assign(z.size(), 0.0);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t at = (static_cast<std::size_t>(k) * n + j) * n + i;
        if (i + 1 < n) dx[at] = z.values[at + 1] - z.values[at];
        if (j + 1 < n) dy[at] = z.values[at + n] - z.values[at];
        if (k + 1 < n)
          dz[at] = z.values[at + static_cast<std::size_t>(n) * n] - z.values[at];
      }
}

// Negative divergence (transpose of forward_diffs) of a 3-field.
inline Volume neg_divergence(const std::vector<double> &px,
                             const std::vector<double> &py,
                             const std::vector<double> &pz, int n) {
  Volume out(n);
  for (int k = 0; k < n; ++k)
    for (int j = 0; j < n; ++j)
      for (int i = 0; i < n; ++i) {
        const std::size_t at = (static_cast<std::size_t>(k) * n + j) * n + i;
        double acc = 0.0;
        if (i + 1 < n) acc -= px[at];
        if (i > 0) acc += px[at - 1];
        if (j + 1 < n) acc -= py[at];
        if (j > 0) acc += py[at - n];
        if (k + 1 < n) acc -= pz[at];
        if (k > 0) acc += pz[at - static_cast<std::size_t>(n) * n];
        out.values[at] = acc;
      }
  return out;
}

} // namespace detail

// Smoothed total variation: sum over voxels of sqrt(|grad z|^2 + eps^2) - eps,
// plus its exact analytic gradient. Flat regions contribute exactly zero.
inline std::pair<double, Volume> tv_smoothed(const Volume &z, double eps) {
  if (eps <= 0) throw std::invalid_argument("tv_smoothed: eps must be positive");
  std::vector<double> dx, dy, dz;
  detail::forward_diffs(z, dx, dy, dz);
  double value = 0.0;
  std::vector<double> px(z.size()), py(z.size()), pz(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double s =
        std::sqrt(dx[i] * dx[i] + dy[i] * dy[i] + dz[i] * dz[i] + eps * eps);
    value += s - eps;
    px[i] = dx[i] / s;
    py[i] = dy[i] / s;
    pz[i] = dz[i] / s;
  }
  return {value, detail::neg_divergence(px, py, pz, z.n)};
}

// Hessian-vector product of the smoothed TV at z applied to direction u.
// Used by the unrolled reconstruction backward pass.
inline Volume tv_hvp(const Volume &z, double eps, const Volume &u) {
  if (eps <= 0) throw std::invalid_argument("tv_hvp: eps must be positive");
  std::vector<double> dx, dy, dz, ex, ey, ez;
  detail::forward_diffs(z, dx, dy, dz);
  detail::forward_diffs(u, ex, ey, ez);
  std::vector<double> jx(z.size()), jy(z.size()), jz(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    const double s2 = dx[i] * dx[i] + dy[i] * dy[i] + dz[i] * dz[i] + eps * eps;
    const double s = std::sqrt(s2);
    const double dot = dx[i] * ex[i] + dy[i] * ey[i] + dz[i] * ez[i];
    const double c = dot / (s2 * s);
    jx[i] = ex[i] / s - dx[i] * c;
    jy[i] = ey[i] / s - dy[i] * c;
    jz[i] = ez[i] / s - dz[i] * c;
  }
  return detail::neg_divergence(jx, jy, jz, z.n);
}

} // namespace ktraj
