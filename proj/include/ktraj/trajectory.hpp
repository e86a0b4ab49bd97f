#pragma once

#include <array>
#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "ktraj/binio.hpp"
#include "ktraj/constraints.hpp"
#include "ktraj/errors.hpp"

namespace ktraj {

// Dense sampling path: n_shots x m x 3 physical coordinates in m^-1,
// stored shot-major, sample-major, axis-minor (x, y, z).
struct Trajectory {
  int n_shots = 0;
  int m = 0;
  std::vector<double> coords;
  double fov = 0.2; // field of view, m
  int n = 0;        // target grid size per axis

  Trajectory() = default;
  Trajectory(int n_shots_, int m_, double fov_, int n_)
      : n_shots(n_shots_), m(m_),
        coords(static_cast<std::size_t>(n_shots_) * m_ * 3, 0.0), fov(fov_),
        n(n_) {}

  double &at(int shot, int sample, int axis) {
    return coords[(static_cast<std::size_t>(shot) * m + sample) * 3 + axis];
  }
  double at(int shot, int sample, int axis) const {
    return coords[(static_cast<std::size_t>(shot) * m + sample) * 3 + axis];
  }

  double k_max() const { return n / (2.0 * fov); }
  std::size_t sample_count() const { return static_cast<std::size_t>(n_shots) * m; }
};

// The learnable coarse path. The dense trajectory is its cubic-spline
// interpolation; learn_mask selects which axes receive gradient updates
// (x, y, z order).
struct AnchorTrajectory {
  int n_shots = 0;
  int m_anchors = 0;
  std::vector<double> coords;
  std::array<bool, 3> learn_mask = {true, true, true};
  double fov = 0.2;
  int n = 0;

  AnchorTrajectory() = default;
  AnchorTrajectory(int n_shots_, int m_anchors_, double fov_, int n_)
      : n_shots(n_shots_), m_anchors(m_anchors_),
        coords(static_cast<std::size_t>(n_shots_) * m_anchors_ * 3, 0.0),
        fov(fov_), n(n_) {
    if (m_anchors_ < 4)
      throw std::invalid_argument("AnchorTrajectory: need at least 4 anchors");
  }

  double &at(int shot, int anchor, int axis) {
    return coords[(static_cast<std::size_t>(shot) * m_anchors + anchor) * 3 + axis];
  }
  double at(int shot, int anchor, int axis) const {
    return coords[(static_cast<std::size_t>(shot) * m_anchors + anchor) * 3 + axis];
  }

  double k_max() const { return n / (2.0 * fov); }
};

// --- coordinate <-> grid index conversion ----------------------------------
//
// Physical coordinate k (m^-1) maps to the fractional grid index
//   idx = k * fov + n/2
// so DC sits at index n/2. Valid interpolation range is [0, n-1]; because
// the DC-centered grid covers frequencies -n/2 .. n/2-1, the in-grid
// coordinate range is asymmetric: [-k_max, k_max - 1/fov].

inline double coord_to_index(double k, double fov, int n) {
  return k * fov + n / 2.0;
}

// Largest/smallest coordinates that stay strictly inside the interpolation
// range, with a hair of slack so the bound survives rounding.
inline double grid_coord_min(double fov, int n) {
  return (1e-9 - n / 2.0) / fov;
}
inline double grid_coord_max(double fov, int n) {
  return ((n - 1.0) - 1e-9 - n / 2.0) / fov;
}

// Copy of the trajectory with every coordinate clipped into the sampled
// grid's support. The acquisition model cannot measure outside the grid;
// the spline path itself (used for the physical constraints) is left alone.
inline Trajectory clamp_to_grid(const Trajectory &t) {
  Trajectory out = t;
  const double lo = grid_coord_min(t.fov, t.n);
  const double hi = grid_coord_max(t.fov, t.n);
  for (auto &c : out.coords) c = std::clamp(c, lo, hi);
  return out;
}

inline void clamp_anchors_to_grid(AnchorTrajectory &a) {
  const double lo = grid_coord_min(a.fov, a.n);
  const double hi = grid_coord_max(a.fov, a.n);
  for (auto &c : a.coords) c = std::clamp(c, lo, hi);
}

// --- reference trajectories -------------------------------------------------

// 3D radial (kooshball): n_shots full-diameter spokes through the origin,
// directions quasi-uniform over the hemisphere by the spherical Fibonacci
// (golden-angle) layout, m equispaced samples from -k_max*d to +k_max*d.
inline Trajectory make_radial_3d(int n_shots, int m, double k_max,
                                 double fov = 0.2) {
  if (n_shots < 1) throw std::invalid_argument("make_radial_3d: n_shots must be >= 1");
  if (m < 2) throw std::invalid_argument("make_radial_3d: m must be >= 2");
  if (k_max <= 0) throw std::invalid_argument("make_radial_3d: k_max must be positive");
  const int n = static_cast<int>(std::lround(2.0 * fov * k_max));
  Trajectory t(n_shots, m, fov, n);
  const double golden_angle = 2.39996322972865332223; // pi * (3 - sqrt(5))
  for (int s = 0; s < n_shots; ++s) {
    const double z = (s + 0.5) / n_shots; // upper hemisphere
    const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden_angle * s;
    const double dx = r * std::cos(phi);
    const double dy = r * std::sin(phi);
    for (int i = 0; i < m; ++i) {
      const double a = -1.0 + 2.0 * i / (m - 1.0);
      t.at(s, i, 0) = a * k_max * dx;
      t.at(s, i, 1) = a * k_max * dy;
      t.at(s, i, 2) = a * k_max * z;
    }
  }
  return t;
}

// Stack-of-stars: per k_z slice, n_shots/n_slices 2D spokes evenly
// distributed around the center (angles equispaced modulo 180 degrees);
// k_z values equispaced in [-k_max, k_max].
inline Trajectory make_stack_of_stars(int n_shots, int m, double k_max,
                                      int n_slices, double fov = 0.2) {
  if (n_shots < 1 || n_slices < 1)
    throw std::invalid_argument("make_stack_of_stars: counts must be >= 1");
  if (m < 2) throw std::invalid_argument("make_stack_of_stars: m must be >= 2");
  if (k_max <= 0) throw std::invalid_argument("make_stack_of_stars: k_max must be positive");
  if (n_shots % n_slices != 0)
    throw std::invalid_argument("make_stack_of_stars: n_shots not divisible by n_slices");
  const int spokes = n_shots / n_slices;
  const int n = static_cast<int>(std::lround(2.0 * fov * k_max));
  Trajectory t(n_shots, m, fov, n);
  const double pi = 3.14159265358979323846;
  for (int sl = 0; sl < n_slices; ++sl) {
    const double kz = (n_slices == 1)
                          ? 0.0
                          : -k_max + 2.0 * k_max * sl / (n_slices - 1.0);
    for (int sp = 0; sp < spokes; ++sp) {
      const double theta = pi * sp / spokes;
      const double dx = std::cos(theta), dy = std::sin(theta);
      const int shot = sl * spokes + sp;
      for (int i = 0; i < m; ++i) {
        const double a = -1.0 + 2.0 * i / (m - 1.0);
        t.at(shot, i, 0) = a * k_max * dx;
        t.at(shot, i, 1) = a * k_max * dy;
        t.at(shot, i, 2) = kz;
      }
    }
  }
  return t;
}

// --- kinematics and feasibility ---------------------------------------------

// Per-axis finite-difference speeds |k_{i+1}-k_i|/dt (n_shots x (m-1) x 3)
// and accelerations |k_{i+1}-2k_i+k_{i-1}|/dt^2 (n_shots x (m-2) x 3).
struct Kinematics {
  int n_shots = 0;
  int m = 0;
  std::vector<double> speeds;
  std::vector<double> accels;

  double speed(int shot, int i, int axis) const {
    return speeds[(static_cast<std::size_t>(shot) * (m - 1) + i) * 3 + axis];
  }
  double accel(int shot, int i, int axis) const {
    return accels[(static_cast<std::size_t>(shot) * (m - 2) + i) * 3 + axis];
  }
};

inline Kinematics kinematics(const Trajectory &t, const MachineConstraints &c) {
  if (t.m < 3) throw std::invalid_argument("kinematics: need m >= 3");
  Kinematics k;
  k.n_shots = t.n_shots;
  k.m = t.m;
  k.speeds.resize(static_cast<std::size_t>(t.n_shots) * (t.m - 1) * 3);
  k.accels.resize(static_cast<std::size_t>(t.n_shots) * (t.m - 2) * 3);
  const double inv_dt = 1.0 / c.dt;
  const double inv_dt2 = inv_dt * inv_dt;
  for (int s = 0; s < t.n_shots; ++s) {
    for (int i = 0; i + 1 < t.m; ++i)
      for (int a = 0; a < 3; ++a)
        k.speeds[(static_cast<std::size_t>(s) * (t.m - 1) + i) * 3 + a] =
            std::abs(t.at(s, i + 1, a) - t.at(s, i, a)) * inv_dt;
    for (int i = 1; i + 1 < t.m; ++i)
      for (int a = 0; a < 3; ++a)
        k.accels[(static_cast<std::size_t>(s) * (t.m - 2) + (i - 1)) * 3 + a] =
            std::abs(t.at(s, i + 1, a) - 2.0 * t.at(s, i, a) + t.at(s, i - 1, a)) *
            inv_dt2;
  }
  return k;
}

inline FeasibilityReport feasibility_report(const Trajectory &t,
                                            const MachineConstraints &c) {
  const Kinematics k = kinematics(t, c);
  FeasibilityReport r;
  const double v_max = c.v_max(), a_max = c.a_max();
  for (double s : k.speeds) {
    r.max_speed = std::max(r.max_speed, s);
    if (s > v_max) ++r.violation_count;
  }
  for (double a : k.accels) {
    r.max_accel = std::max(r.max_accel, a);
    if (a > a_max) ++r.violation_count;
  }
  r.speed_margin = r.max_speed / v_max;
  r.accel_margin = r.max_accel / a_max;
  return r;
}

// --- F3DT trajectory format --------------------------------------------------
//
//   magic   "F3DT"
//   version u32 (=1)
//   n_shots u32
//   m       u32
//   fov     f64
//   k_max   f64   (n is recovered as round(2*fov*k_max))
//   coords  f64, shot-major, sample-major, axis-minor

namespace detail {
constexpr std::uint32_t f3dt_version = 1;
constexpr char f3dt_magic[4] = {'F', '3', 'D', 'T'};
} // namespace detail

inline void save_trajectory(const Trajectory &t, const std::string &path) {
  auto os = binio::open_out(path);
  binio::write_magic(os, detail::f3dt_magic);
  binio::write_le<std::uint32_t>(os, detail::f3dt_version);
  binio::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(t.n_shots));
  binio::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(t.m));
  binio::write_le<double>(os, t.fov);
  binio::write_le<double>(os, t.k_max());
  for (double c : t.coords) binio::write_le<double>(os, c);
  if (!os) throw FormatError("write failed: " + path);
}

inline Trajectory load_trajectory(const std::string &path) {
  auto is = binio::open_in(path);
  binio::check_magic(is, detail::f3dt_magic, path);
  auto ver = binio::read_le<std::uint32_t>(is, path);
  if (ver != detail::f3dt_version)
    throw FormatError("format mismatch: unsupported F3DT version in " + path);
  auto n_shots = binio::read_le<std::uint32_t>(is, path);
  auto m = binio::read_le<std::uint32_t>(is, path);
  double fov = binio::read_le<double>(is, path);
  double k_max = binio::read_le<double>(is, path);
  if (n_shots < 1 || m < 1 || fov <= 0 || k_max <= 0)
    throw FormatError("implausible F3DT header in " + path);
  Trajectory t(static_cast<int>(n_shots), static_cast<int>(m), fov,
               static_cast<int>(std::lround(2.0 * fov * k_max)));
  for (auto &c : t.coords) c = binio::read_le<double>(is, path);
  return t;
}

// Anchors share the F3DT layout (m = anchor count); the learn mask is a
// training-time setting, not part of the geometry.
inline void save_anchors(const AnchorTrajectory &a, const std::string &path) {
  Trajectory t(a.n_shots, a.m_anchors, a.fov, a.n);
  t.coords = a.coords;
  save_trajectory(t, path);
}

inline AnchorTrajectory load_anchors(const std::string &path) {
  Trajectory t = load_trajectory(path);
  if (t.m < 4) throw FormatError("anchor file has fewer than 4 anchors: " + path);
  AnchorTrajectory a(t.n_shots, t.m, t.fov, t.n);
  a.coords = t.coords;
  return a;
}

} // namespace ktraj
