#pragma once

#include <vector>

#include "ktraj/acquisition.hpp"
#include "ktraj/fft.hpp"

namespace ktraj {

// Reciprocal-spread-count density compensation: spread all-ones onto the
// grid, re-sample that grid at each trajectory point, take the reciprocal
// (floored at epsilon). Isolated node-aligned samples get weight 1, two
// coincident ones get 1/2 each.
inline std::vector<double> density_weights(const Trajectory &traj, int n,
                                           double epsilon = 1e-8) {
  (void)n; // grid size travels with the trajectory
  Measurements ones(traj.n_shots, traj.m);
  for (auto &v : ones.values) v = cplx(1.0, 0.0);
  const KSpaceVolume counts = spread(ones, traj);
  const Measurements local = sample(counts, traj);
  std::vector<double> w(local.size());
  for (std::size_t i = 0; i < w.size(); ++i)
    w[i] = 1.0 / std::max(local.values[i].real(), epsilon);
  return w;
}

// Regridding front end: spread the density-weighted measurements onto the
// Cartesian grid and inverse-FFT. Weights are constants during backprop
// (they are recomputed from the current trajectory each optimizer step,
// but no gradient flows through them).
inline KSpaceVolume adjoint_nufft(const Measurements &x, const Trajectory &traj,
                                  const std::vector<double> &weights) {
  Measurements wx = x;
  for (std::size_t i = 0; i < wx.values.size(); ++i) wx.values[i] *= weights[i];
  return ifft3c(spread(wx, traj));
}

// VJP of adjoint_nufft w.r.t. the measurements: w ⊙ sample(fft(cot)).
inline Measurements adjoint_nufft_vjp_meas(const KSpaceVolume &cot,
                                           const Trajectory &traj,
                                           const std::vector<double> &weights) {
  Measurements g = sample(fft3c(cot), traj);
  for (std::size_t i = 0; i < g.values.size(); ++i) g.values[i] *= weights[i];
  return g;
}

// VJP of adjoint_nufft w.r.t. the trajectory coordinates (spread-location
// term only; weights are frozen).
inline std::vector<double> adjoint_nufft_vjp_traj(const KSpaceVolume &cot,
                                                  const Measurements &x,
                                                  const Trajectory &traj,
                                                  const std::vector<double> &weights) {
  Measurements wx = x;
  for (std::size_t i = 0; i < wx.values.size(); ++i) wx.values[i] *= weights[i];
  return sample_vjp_traj(wx, fft3c(cot), traj);
}

} // namespace ktraj
