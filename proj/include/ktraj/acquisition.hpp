#pragma once

#include <cmath>
#include <vector>

#include "ktraj/errors.hpp"
#include "ktraj/rng.hpp"
#include "ktraj/trajectory.hpp"
#include "ktraj/volume.hpp"

namespace ktraj {

// Complex measurements along a trajectory, n_shots x m.
struct Measurements {
  int n_shots = 0;
  int m = 0;
  std::vector<cplx> values;

  Measurements() = default;
  Measurements(int n_shots_, int m_)
      : n_shots(n_shots_), m(m_),
        values(static_cast<std::size_t>(n_shots_) * m_) {}

  cplx &at(int shot, int sample) {
    return values[static_cast<std::size_t>(shot) * m + sample];
  }
  cplx at(int shot, int sample) const {
    return values[static_cast<std::size_t>(shot) * m + sample];
  }
  std::size_t size() const { return values.size(); }
};

namespace detail {

// One axis of the trilinear stencil: cell index and fractional offset.
// Grid-aligned coordinates use the left cell (f = 1) so the one-sided
// derivative convention is uniform; index 0 has no left cell and uses the
// right one.
struct AxisCell {
  int i0;
  double f;
};

inline AxisCell axis_cell(double idx, int n, int shot, int sample, int axis) {
  if (!(idx >= 0.0) || idx > n - 1.0)
    throw BoundsError(shot, sample, axis, idx, n);
  int i0 = static_cast<int>(std::ceil(idx)) - 1;
  if (i0 < 0) i0 = 0;
  return {i0, idx - i0};
}

struct Stencil {
  AxisCell x, y, z;
};

inline Stencil stencil_at(const Trajectory &t, int shot, int sample) {
  const int n = t.n;
  return {axis_cell(coord_to_index(t.at(shot, sample, 0), t.fov, n), n, shot, sample, 0),
          axis_cell(coord_to_index(t.at(shot, sample, 1), t.fov, n), n, shot, sample, 1),
          axis_cell(coord_to_index(t.at(shot, sample, 2), t.fov, n), n, shot, sample, 2)};
}

} // namespace detail

// Trilinear sampling of the Cartesian k-space along the trajectory.
// Coordinates must map into [0, n-1] on every axis; offenders raise
// BoundsError naming the shot and sample.
inline Measurements sample(const KSpaceVolume &ks, const Trajectory &traj) {
  Measurements out(traj.n_shots, traj.m);
  const int n = ks.n;
  for (int s = 0; s < traj.n_shots; ++s)
    for (int i = 0; i < traj.m; ++i) {
      const auto st = detail::stencil_at(traj, s, i);
      const double wx[2] = {1.0 - st.x.f, st.x.f};
      const double wy[2] = {1.0 - st.y.f, st.y.f};
      const double wz[2] = {1.0 - st.z.f, st.z.f};
      cplx acc(0.0, 0.0);
      for (int cz = 0; cz < 2; ++cz)
        for (int cy = 0; cy < 2; ++cy)
          for (int cx = 0; cx < 2; ++cx)
            acc += wz[cz] * wy[cy] * wx[cx] *
                   ks.values[(static_cast<std::size_t>(st.z.i0 + cz) * n +
                              (st.y.i0 + cy)) * n + (st.x.i0 + cx)];
      out.at(s, i) = acc;
    }
  return out;
}

// Adjoint of sample with respect to the grid: spreads each cotangent onto
// its 8 neighbors with the same trilinear weights. This is also the
// regridding spread operator.
inline KSpaceVolume sample_vjp_grid(const Measurements &cot, const Trajectory &traj) {
  KSpaceVolume grad(traj.n);
  const int n = traj.n;
  for (int s = 0; s < traj.n_shots; ++s)
    for (int i = 0; i < traj.m; ++i) {
      const auto st = detail::stencil_at(traj, s, i);
      const double wx[2] = {1.0 - st.x.f, st.x.f};
      const double wy[2] = {1.0 - st.y.f, st.y.f};
      const double wz[2] = {1.0 - st.z.f, st.z.f};
      const cplx v = cot.at(s, i);
      for (int cz = 0; cz < 2; ++cz)
        for (int cy = 0; cy < 2; ++cy)
          for (int cx = 0; cx < 2; ++cx)
            grad.values[(static_cast<std::size_t>(st.z.i0 + cz) * n +
                         (st.y.i0 + cy)) * n + (st.x.i0 + cx)] +=
                wz[cz] * wy[cy] * wx[cx] * v;
    }
  return grad;
}

inline KSpaceVolume spread(const Measurements &v, const Trajectory &traj) {
  return sample_vjp_grid(v, traj);
}

// Gradient of <cot, sample(ks, .)> with respect to the trajectory
// coordinates (real-pair convention: real and imaginary parts are
// independent channels). Shape matches traj.coords.
inline std::vector<double> sample_vjp_traj(const Measurements &cot,
                                           const KSpaceVolume &ks,
                                           const Trajectory &traj) {
  std::vector<double> grad(traj.coords.size(), 0.0);
  const int n = ks.n;
  for (int s = 0; s < traj.n_shots; ++s)
    for (int i = 0; i < traj.m; ++i) {
      const auto st = detail::stencil_at(traj, s, i);
      const double wx[2] = {1.0 - st.x.f, st.x.f};
      const double wy[2] = {1.0 - st.y.f, st.y.f};
      const double wz[2] = {1.0 - st.z.f, st.z.f};
      const double dw[2] = {-1.0, 1.0};
      cplx dx(0, 0), dy(0, 0), dz(0, 0);
      for (int cz = 0; cz < 2; ++cz)
        for (int cy = 0; cy < 2; ++cy)
          for (int cx = 0; cx < 2; ++cx) {
            const cplx v =
                ks.values[(static_cast<std::size_t>(st.z.i0 + cz) * n +
                           (st.y.i0 + cy)) * n + (st.x.i0 + cx)];
            dx += dw[cx] * wy[cy] * wz[cz] * v;
            dy += wx[cx] * dw[cy] * wz[cz] * v;
            dz += wx[cx] * wy[cy] * dw[cz] * v;
          }
      const cplx c = cot.at(s, i);
      const std::size_t base = (static_cast<std::size_t>(s) * traj.m + i) * 3;
      // d(index)/d(coord) = fov
      grad[base + 0] = (c.real() * dx.real() + c.imag() * dx.imag()) * traj.fov;
      grad[base + 1] = (c.real() * dy.real() + c.imag() * dy.imag()) * traj.fov;
      grad[base + 2] = (c.real() * dz.real() + c.imag() * dz.imag()) * traj.fov;
    }
  return grad;
}

// Additive i.i.d. complex Gaussian noise with E|eta|^2 = sigma^2,
// deterministic per seed. sigma = 0 is the identity.
inline Measurements add_noise(const Measurements &x, double sigma, std::uint64_t seed) {
  if (sigma < 0) throw std::invalid_argument("add_noise: sigma must be >= 0");
  if (sigma == 0.0) return x;
  Measurements out = x;
  SplitMix64 rng(seed);
  const double s = sigma / std::sqrt(2.0);
  for (auto &v : out.values) v += cplx(s * rng.normal(), s * rng.normal());
  return out;
}

} // namespace ktraj
