#pragma once

#include <algorithm>
#include <cmath>

#include "ktraj/errors.hpp"
#include "ktraj/rng.hpp"
#include "ktraj/volume.hpp"

namespace ktraj {

namespace detail {

// Axis-aligned-after-rotation ellipsoid with additive intensity. Rotation is
// about the z axis by phi (degrees), matching the classic head-phantom tables.
struct Ellipsoid {
  double amplitude;
  double a, b, c;    // semi-axes along x, y, z (normalized [-1,1] coords)
  double x0, y0, z0; // center
  double phi_deg;    // rotation about z
};

inline bool inside(const Ellipsoid &e, double x, double y, double z) {
  const double rad = e.phi_deg * (3.14159265358979323846 / 180.0);
  const double cp = std::cos(rad), sp = std::sin(rad);
  const double dx = x - e.x0, dy = y - e.y0, dz = z - e.z0;
  const double u = dx * cp + dy * sp;
  const double v = -dx * sp + dy * cp;
  const double s = (u * u) / (e.a * e.a) + (v * v) / (e.b * e.b) +
                   (dz * dz) / (e.c * e.c);
  return s <= 1.0;
}

// Head phantom ellipsoids. This is the usual ten-ellipsoid table with the
// two ventricles and the pair of small lesions symmetrized so the whole set
// is mirror-symmetric under x -> -x.
inline const Ellipsoid *shepp_logan_table(int &count) {
  static const Ellipsoid table[] = {
      {1.00, 0.690, 0.920, 0.810, 0.00, 0.0000, 0.00, 0.0},
      {-0.80, 0.6624, 0.874, 0.780, 0.00, -0.0184, 0.00, 0.0},
      {-0.20, 0.110, 0.310, 0.220, 0.22, 0.0000, 0.00, -18.0},
      {-0.20, 0.110, 0.310, 0.220, -0.22, 0.0000, 0.00, 18.0},
      {0.10, 0.210, 0.250, 0.410, 0.00, 0.3500, -0.15, 0.0},
      {0.10, 0.046, 0.046, 0.050, 0.00, 0.1000, 0.25, 0.0},
      {0.10, 0.046, 0.046, 0.050, 0.00, -0.1000, 0.25, 0.0},
      {0.10, 0.046, 0.023, 0.050, -0.06, -0.6050, 0.00, 0.0},
      {0.10, 0.046, 0.023, 0.050, 0.06, -0.6050, 0.00, 0.0},
      {0.10, 0.023, 0.023, 0.020, 0.00, -0.6060, 0.00, 0.0},
  };
  count = static_cast<int>(sizeof(table) / sizeof(table[0]));
  return table;
}

} // namespace detail

// Standard 3D head phantom on an n^3 grid, scaled so max intensity is 1.
// Voxel centers sit at (2i+1)/n - 1, symmetric about the origin, so the
// mirror symmetry of the table is exact on the grid.
inline Volume shepp_logan_3d(int n) {
  if (n < 8) throw std::invalid_argument("shepp_logan_3d: n must be >= 8");
  int count = 0;
  const detail::Ellipsoid *table = detail::shepp_logan_table(count);
  Volume v(n);
  auto coord = [n](int i) { return (2.0 * i + 1.0) / n - 1.0; };
  double vmax = 0.0;
  for (int z = 0; z < n; ++z) {
    const double pz = coord(z);
    for (int y = 0; y < n; ++y) {
      const double py = coord(y);
      for (int x = 0; x < n; ++x) {
        const double px = coord(x);
        double acc = 0.0;
        for (int e = 0; e < count; ++e)
          if (detail::inside(table[e], px, py, pz)) acc += table[e].amplitude;
        v.at(z, y, x) = acc;
        vmax = std::max(vmax, acc);
      }
    }
  }
  if (vmax > 0.0)
    for (auto &x : v.values) x = std::max(0.0, x / vmax);
  return v;
}

// Sum of `count` random ellipsoids, clipped to [0, 1]. Fully determined by
// the seed (splitmix64 stream).
inline Volume random_ellipsoids(int n, int count, std::uint64_t seed) {
  if (n < 8) throw std::invalid_argument("random_ellipsoids: n must be >= 8");
  if (count < 1) throw std::invalid_argument("random_ellipsoids: count must be >= 1");
  SplitMix64 rng(seed);
  std::vector<detail::Ellipsoid> es;
  es.reserve(count);
  for (int i = 0; i < count; ++i) {
    detail::Ellipsoid e;
    e.amplitude = rng.uniform(0.5, 1.0);
    e.a = rng.uniform(0.12, 0.35);
    e.b = rng.uniform(0.12, 0.35);
    e.c = rng.uniform(0.12, 0.35);
    e.x0 = rng.uniform(-0.4, 0.4);
    e.y0 = rng.uniform(-0.4, 0.4);
    e.z0 = rng.uniform(-0.4, 0.4);
    e.phi_deg = rng.uniform(0.0, 180.0);
    es.push_back(e);
  }
  Volume v(n);
  auto coord = [n](int i) { return (2.0 * i + 1.0) / n - 1.0; };
  for (int z = 0; z < n; ++z) {
    const double pz = coord(z);
    for (int y = 0; y < n; ++y) {
      const double py = coord(y);
      for (int x = 0; x < n; ++x) {
        const double px = coord(x);
        double acc = 0.0;
        for (const auto &e : es)
          if (detail::inside(e, px, py, pz)) acc += e.amplitude;
        v.at(z, y, x) = std::clamp(acc, 0.0, 1.0);
      }
    }
  }
  return v;
}

} // namespace ktraj
