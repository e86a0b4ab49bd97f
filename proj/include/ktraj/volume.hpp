#pragma once

#include <cmath>
#include <complex>
#include <cstdint>
#include <string>
#include <vector>

#include "ktraj/binio.hpp"
#include "ktraj/errors.hpp"

namespace ktraj {

using cplx = std::complex<double>;

// Real image on an n^3 grid, row-major z-y-x (z slowest, x fastest).
struct Volume {
  int n = 0;
  std::vector<double> values;

  Volume() = default;
  explicit Volume(int n_, double fill = 0.0)
      : n(n_), values(static_cast<std::size_t>(n_) * n_ * n_, fill) {}

  double &at(int z, int y, int x) {
    return values[(static_cast<std::size_t>(z) * n + y) * n + x];
  }
  double at(int z, int y, int x) const {
    return values[(static_cast<std::size_t>(z) * n + y) * n + x];
  }
  std::size_t size() const { return values.size(); }
};

// Complex Fourier samples on an n^3 grid, DC-centered (DC at index n/2 on
// each axis), same z-y-x layout as Volume.
struct KSpaceVolume {
  int n = 0;
  std::vector<cplx> values;

  KSpaceVolume() = default;
  explicit KSpaceVolume(int n_)
      : n(n_), values(static_cast<std::size_t>(n_) * n_ * n_) {}

  cplx &at(int z, int y, int x) {
    return values[(static_cast<std::size_t>(z) * n + y) * n + x];
  }
  cplx at(int z, int y, int x) const {
    return values[(static_cast<std::size_t>(z) * n + y) * n + x];
  }
  std::size_t size() const { return values.size(); }
};

// --- F3DV volume format ---------------------------------------------------
//
//   magic   "F3DV"
//   version u32 (=1)
//   n       u32 (grid size per axis)
//   dtype   u32 (0 = real float32, 1 = complex float32 pairs)
//   payload little-endian float32; complex interleaved re,im

namespace detail {
constexpr std::uint32_t f3dv_version = 1;
constexpr char f3dv_magic[4] = {'F', '3', 'D', 'V'};
} // namespace detail

inline void save_volume(const Volume &v, const std::string &path) {
  auto os = binio::open_out(path);
  binio::write_magic(os, detail::f3dv_magic);
  binio::write_le<std::uint32_t>(os, detail::f3dv_version);
  binio::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(v.n));
  binio::write_le<std::uint32_t>(os, 0u);
  for (double x : v.values) binio::write_le<float>(os, static_cast<float>(x));
  if (!os) throw FormatError("write failed: " + path);
}

inline Volume load_volume(const std::string &path) {
  auto is = binio::open_in(path);
  binio::check_magic(is, detail::f3dv_magic, path);
  auto ver = binio::read_le<std::uint32_t>(is, path);
  if (ver != detail::f3dv_version)
    throw FormatError("format mismatch: unsupported F3DV version in " + path);
  auto n = binio::read_le<std::uint32_t>(is, path);
  auto dtype = binio::read_le<std::uint32_t>(is, path);
  if (dtype != 0)
    throw FormatError("dimension mismatch: expected real volume in " + path);
  if (n < 1 || n > 4096) throw FormatError("implausible grid size in " + path);
  Volume v(static_cast<int>(n));
  for (auto &x : v.values) x = binio::read_le<float>(is, path);
  return v;
}

inline void save_kspace(const KSpaceVolume &k, const std::string &path) {
  auto os = binio::open_out(path);
  binio::write_magic(os, detail::f3dv_magic);
  binio::write_le<std::uint32_t>(os, detail::f3dv_version);
  binio::write_le<std::uint32_t>(os, static_cast<std::uint32_t>(k.n));
  binio::write_le<std::uint32_t>(os, 1u);
  for (const cplx &c : k.values) {
    binio::write_le<float>(os, static_cast<float>(c.real()));
    binio::write_le<float>(os, static_cast<float>(c.imag()));
  }
  if (!os) throw FormatError("write failed: " + path);
}

inline KSpaceVolume load_kspace(const std::string &path) {
  auto is = binio::open_in(path);
  binio::check_magic(is, detail::f3dv_magic, path);
  auto ver = binio::read_le<std::uint32_t>(is, path);
  if (ver != detail::f3dv_version)
    throw FormatError("format mismatch: unsupported F3DV version in " + path);
  auto n = binio::read_le<std::uint32_t>(is, path);
  auto dtype = binio::read_le<std::uint32_t>(is, path);
  if (dtype != 1)
    throw FormatError("dimension mismatch: expected complex volume in " + path);
  if (n < 1 || n > 4096) throw FormatError("implausible grid size in " + path);
  KSpaceVolume k(static_cast<int>(n));
  for (auto &c : k.values) {
    float re = binio::read_le<float>(is, path);
    float im = binio::read_le<float>(is, path);
    c = cplx(re, im);
  }
  return k;
}

} // namespace ktraj
