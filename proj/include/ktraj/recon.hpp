#pragma once

#include <cmath>
#include <limits>
#include <vector>

#include "ktraj/regrid.hpp"
#include "ktraj/tv.hpp"

namespace ktraj {

// Learnable parameters of the unrolled reconstructor. Step sizes and the TV
// weight are optimized through their logs so positivity is structural; a log
// of -inf encodes an exactly disabled TV term.
struct ReconParams {
  int k_unroll = 8;
  std::vector<double> log_steps;
  double log_tv_weight = 0.0;
  double tv_epsilon = 1e-3;

  static ReconParams make(int k_unroll, double step_init, double tv_weight_init,
                          double tv_epsilon = 1e-3) {
    ReconParams p;
    p.k_unroll = k_unroll;
    p.log_steps.assign(k_unroll, std::log(step_init));
    p.log_tv_weight = tv_weight_init > 0.0
                          ? std::log(tv_weight_init)
                          : -std::numeric_limits<double>::infinity();
    p.tv_epsilon = tv_epsilon;
    return p;
  }

  double step(int t) const { return std::exp(log_steps[t]); }
  double tv_weight() const { return std::exp(log_tv_weight); }

  // Flat learnable vector: [log_steps..., log_tv_weight].
  std::vector<double> pack() const {
    std::vector<double> v = log_steps;
    v.push_back(log_tv_weight);
    return v;
  }
  void unpack(const std::vector<double> &v) {
    for (int t = 0; t < k_unroll; ++t) log_steps[t] = v[t];
    log_tv_weight = v[k_unroll];
  }
  int dof() const { return k_unroll + 1; }
};

namespace detail {

constexpr double mag_floor = 1e-12;

// Phase of z, zero where the magnitude vanishes.
inline cplx phase_or_zero(cplx z) {
  const double m = std::abs(z);
  return m > mag_floor ? z / m : cplx(0.0, 0.0);
}

// Gradient of the reconstruction energy
//   E(z) = || sample(fft(z)) - x ||^2 + alpha * TV_eps(|z|)
// at a complex iterate z, under the real-pair convention.
inline KSpaceVolume energy_gradient(const KSpaceVolume &z, const Measurements &x,
                                    const Trajectory &traj, double alpha,
                                    double eps) {
  Measurements r = sample(fft3c(z), traj);
  for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= x.values[i];
  KSpaceVolume g = ifft3c(spread(r, traj));
  for (auto &v : g.values) v *= 2.0;
  if (alpha > 0.0) {
    const Volume mu = magnitude(z);
    auto [tv, gtv] = tv_smoothed(mu, eps);
    (void)tv;
    for (std::size_t i = 0; i < g.values.size(); ++i)
      g.values[i] += alpha * gtv.values[i] * phase_or_zero(z.values[i]);
  }
  return g;
}

} // namespace detail

// Saved iterates of one unrolled forward pass, consumed by recon_vjp.
struct ReconTape {
  std::vector<KSpaceVolume> iterates; // z_0 .. z_K
};

// Unrolled smoothed-TV gradient descent seeded with the regridded adjoint.
// k_unroll = 0 reduces to the pure adjoint baseline |Z_dis|.
inline Volume recon_unrolled(const Measurements &x, const Trajectory &traj,
                             const ReconParams &params,
                             const std::vector<double> &weights,
                             ReconTape *tape = nullptr) {
  KSpaceVolume z = adjoint_nufft(x, traj, weights);
  if (tape) {
    tape->iterates.clear();
    tape->iterates.push_back(z);
  }
  const double alpha = params.tv_weight();
  for (int t = 0; t < params.k_unroll; ++t) {
    const KSpaceVolume g =
        detail::energy_gradient(z, x, traj, alpha, params.tv_epsilon);
    const double s = params.step(t);
    for (std::size_t i = 0; i < z.values.size(); ++i) z.values[i] -= s * g.values[i];
    if (tape) tape->iterates.push_back(z);
  }
  return magnitude(z);
}

struct ReconGrads {
  Measurements meas;            // w.r.t. the measurements
  std::vector<double> traj;     // w.r.t. dense trajectory coords
  std::vector<double> params;   // w.r.t. the packed log-parameters
};

// Reverse-mode pass through the unrolled loop. The tape must come from a
// recon_unrolled call with identical inputs.
inline ReconGrads recon_vjp(const Volume &cotangent, const ReconTape &tape,
                            const Measurements &x, const Trajectory &traj,
                            const ReconParams &params,
                            const std::vector<double> &weights) {
  const int K = params.k_unroll;
  const double alpha = params.tv_weight();
  const double eps = params.tv_epsilon;

  ReconGrads out;
  out.meas = Measurements(x.n_shots, x.m);
  out.traj.assign(traj.coords.size(), 0.0);
  out.params.assign(params.dof(), 0.0);

  // Output magnitude: zbar = cot .* phase(z_K).
  const KSpaceVolume &zK = tape.iterates[K];
  KSpaceVolume zbar(zK.n);
  for (std::size_t i = 0; i < zK.size(); ++i)
    zbar.values[i] = cotangent.values[i] * detail::phase_or_zero(zK.values[i]);

  double alpha_bar = 0.0;

  for (int t = K - 1; t >= 0; --t) {
    const KSpaceVolume &z = tape.iterates[t];
    const double s = params.step(t);

    // Recompute forward intermediates at z.
    const KSpaceVolume Fz = fft3c(z);
    Measurements r = sample(Fz, traj);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= x.values[i];

    Volume mu(z.n);
    std::vector<cplx> u(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
      mu.values[i] = std::abs(z.values[i]);
      u[i] = detail::phase_or_zero(z.values[i]);
    }

    // g at z, for the step-size gradient.
    KSpaceVolume g = ifft3c(spread(r, traj));
    for (auto &v : g.values) v *= 2.0;
    Volume gtv(z.n);
    if (alpha > 0.0) {
      auto [tv, grad_tv] = tv_smoothed(mu, eps);
      (void)tv;
      gtv = std::move(grad_tv);
      for (std::size_t i = 0; i < g.values.size(); ++i)
        g.values[i] += alpha * gtv.values[i] * u[i];
    }

    double sbar = 0.0;
    for (std::size_t i = 0; i < g.values.size(); ++i)
      sbar -= g.values[i].real() * zbar.values[i].real() +
              g.values[i].imag() * zbar.values[i].imag();
    out.params[t] = sbar * s; // d/d log s

    // Measurement gradient: dg/dx = -2 A  =>  xbar += 2 s A zbar.
    const KSpaceVolume Fv = fft3c(zbar);
    const Measurements Av = sample(Fv, traj);
    for (std::size_t i = 0; i < out.meas.values.size(); ++i)
      out.meas.values[i] += 2.0 * s * Av.values[i];

    // Trajectory gradient: spread-location term plus the term through r.
    {
      std::vector<double> g1 = sample_vjp_traj(r, Fv, traj);
      Measurements rho = Av;
      for (auto &v : rho.values) v *= 2.0;
      std::vector<double> g2 = sample_vjp_traj(rho, Fz, traj);
      for (std::size_t i = 0; i < out.traj.size(); ++i)
        out.traj[i] -= s * (2.0 * g1[i] + g2[i]);
    }

    // TV-weight gradient: dg/dalpha = gtv .* u.
    if (alpha > 0.0) {
      double acc = 0.0;
      for (std::size_t i = 0; i < z.size(); ++i) {
        const cplx d = gtv.values[i] * u[i];
        acc += d.real() * zbar.values[i].real() + d.imag() * zbar.values[i].imag();
      }
      alpha_bar -= s * acc;
    }

    // Iterate gradient: zbar_{t-1} = zbar - s * (dg/dz)^T zbar.
    KSpaceVolume hv = ifft3c(spread(Av, traj));
    for (auto &v : hv.values) v *= 2.0;
    if (alpha > 0.0) {
      Volume a(z.n);
      for (std::size_t i = 0; i < z.size(); ++i)
        a.values[i] = u[i].real() * zbar.values[i].real() +
                      u[i].imag() * zbar.values[i].imag();
      const Volume ha = tv_hvp(mu, eps, a);
      for (std::size_t i = 0; i < z.size(); ++i) {
        cplx term = ha.values[i] * u[i];
        if (mu.values[i] > detail::mag_floor)
          term += (gtv.values[i] / mu.values[i]) *
                  (zbar.values[i] - u[i] * a.values[i]);
        hv.values[i] += alpha * term;
      }
    }
    for (std::size_t i = 0; i < zbar.values.size(); ++i)
      zbar.values[i] -= s * hv.values[i];
  }

  out.params[K] = alpha_bar * alpha; // d/d log alpha (zero when alpha == 0)

  // z_0 = adjoint_nufft(x, traj, w).
  {
    const Measurements mg = adjoint_nufft_vjp_meas(zbar, traj, weights);
    for (std::size_t i = 0; i < out.meas.values.size(); ++i)
      out.meas.values[i] += mg.values[i];
    const std::vector<double> tg = adjoint_nufft_vjp_traj(zbar, x, traj, weights);
    for (std::size_t i = 0; i < out.traj.size(); ++i) out.traj[i] += tg[i];
  }
  return out;
}

// --- frozen TV-regularized solver -------------------------------------------

struct CsTvResult {
  Volume image;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
};

// Non-learned reference reconstruction: gradient descent with Armijo
// backtracking on || sample(fft(z)) - x ||^2 + alpha * TV_eps(z) over real z.
// Deterministic; never differentiated through.
inline CsTvResult cs_tv_solve(const Measurements &x, const Trajectory &traj,
                              double alpha, int iters, double tv_epsilon = 1e-3) {
  if (iters < 1) throw std::invalid_argument("cs_tv_solve: iters must be >= 1");

  const std::vector<double> w = density_weights(traj, traj.n);
  Volume z = magnitude(adjoint_nufft(x, traj, w));

  auto objective = [&](const Volume &v) {
    Measurements r = sample(fft3c(v), traj);
    double e = 0.0;
    for (std::size_t i = 0; i < r.values.size(); ++i) {
      const cplx d = r.values[i] - x.values[i];
      e += d.real() * d.real() + d.imag() * d.imag();
    }
    if (alpha > 0.0) e += alpha * tv_smoothed(v, tv_epsilon).first;
    return e;
  };
  auto gradient = [&](const Volume &v) {
    Measurements r = sample(fft3c(v), traj);
    for (std::size_t i = 0; i < r.values.size(); ++i) r.values[i] -= x.values[i];
    Volume g = real_part(ifft3c(spread(r, traj)));
    for (auto &gi : g.values) gi *= 2.0;
    if (alpha > 0.0) {
      const Volume gtv = tv_smoothed(v, tv_epsilon).second;
      for (std::size_t i = 0; i < g.values.size(); ++i)
        g.values[i] += alpha * gtv.values[i];
    }
    return g;
  };

  double fz = objective(z);
  double step = 1.0;
  bool stationary = false;
  int it = 0;
  const double c1 = 1e-4;

  for (; it < iters; ++it) {
    const Volume g = gradient(z);
    double gnorm2 = 0.0;
    for (double gi : g.values) gnorm2 += gi * gi;
    if (gnorm2 == 0.0) {
      stationary = true;
      break;
    }
    step = std::min(step * 2.0, 1e6);
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      Volume trial = z;
      for (std::size_t i = 0; i < trial.values.size(); ++i)
        trial.values[i] -= step * g.values[i];
      const double ft = objective(trial);
      if (ft <= fz - c1 * step * gnorm2) {
        const double decrease = (fz - ft) / std::max(std::abs(fz), 1e-30);
        z = std::move(trial);
        fz = ft;
        accepted = true;
        if (decrease < 1e-12) stationary = true;
        break;
      }
      step *= 0.5;
    }
    if (!accepted || stationary) {
      stationary = stationary || !accepted;
      break;
    }
  }

  CsTvResult res;
  for (auto &v : z.values) v = std::abs(v);
  res.image = std::move(z);
  res.converged = stationary;
  res.iterations = it;
  res.objective = fz;
  return res;
}

} // namespace ktraj
