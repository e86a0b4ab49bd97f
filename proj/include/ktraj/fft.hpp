#pragma once

#include <cmath>
#include <map>
#include <mutex>

#include <fftw3.h>

#include "ktraj/volume.hpp"

namespace ktraj {

// Centered orthonormal 3D FFT pair:
//   fft3c  = fftshift . FFT  . ifftshift, scaled by n^{-3/2}
//   ifft3c = fftshift . IFFT . ifftshift, scaled by n^{-3/2}
// With this normalization the pair is unitary (Parseval holds exactly) and
// each transform is the adjoint of the other, which the hand-written
// reverse-mode passes rely on.

namespace detail {

// FFTW planning is not thread-safe; execution via the new-array interface is.
// Plans are created FFTW_UNALIGNED so they accept any heap buffer.
inline fftw_plan fft_plan(int n, int sign) {
  static std::mutex mtx;
  static std::map<std::pair<int, int>, fftw_plan> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto key = std::make_pair(n, sign);
  auto it = cache.find(key);
  if (it != cache.end()) return it->second;
  std::vector<cplx> dummy(static_cast<std::size_t>(n) * n * n);
  fftw_plan p = fftw_plan_dft_3d(
      n, n, n, reinterpret_cast<fftw_complex *>(dummy.data()),
      reinterpret_cast<fftw_complex *>(dummy.data()), sign,
      FFTW_ESTIMATE | FFTW_UNALIGNED);
  cache.emplace(key, p);
  return p;
}

// Rolls every axis by n/2 (ifftshift for sign -1, fftshift for +1; the two
// coincide for even n).
inline std::vector<cplx> roll_half(const std::vector<cplx> &src, int n, int dir) {
  const int s = (dir > 0) ? n / 2 : (n - n / 2);
  std::vector<cplx> dst(src.size());
  for (int z = 0; z < n; ++z) {
    const int zz = (z + s) % n;
    for (int y = 0; y < n; ++y) {
      const int yy = (y + s) % n;
      const std::size_t row_src = (static_cast<std::size_t>(z) * n + y) * n;
      const std::size_t row_dst = (static_cast<std::size_t>(zz) * n + yy) * n;
      for (int x = 0; x < n; ++x) dst[row_dst + (x + s) % n] = src[row_src + x];
    }
  }
  return dst;
}

inline std::vector<cplx> fft_centered(const std::vector<cplx> &in, int n, int sign) {
  std::vector<cplx> work = roll_half(in, n, -1);
  std::vector<cplx> out(work.size());
  fftw_execute_dft(fft_plan(n, sign),
                   reinterpret_cast<fftw_complex *>(work.data()),
                   reinterpret_cast<fftw_complex *>(out.data()));
  out = roll_half(out, n, +1);
  const double scale = 1.0 / std::pow(static_cast<double>(n), 1.5);
  for (auto &c : out) c *= scale;
  return out;
}

} // namespace detail

// Spatial volume -> DC-centered k-space.
inline KSpaceVolume fft3c(const Volume &v) {
  std::vector<cplx> in(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) in[i] = cplx(v.values[i], 0.0);
  KSpaceVolume out(v.n);
  out.values = detail::fft_centered(in, v.n, FFTW_FORWARD);
  return out;
}

// Complex-image variants used inside the reconstruction iterations.
inline KSpaceVolume fft3c(const KSpaceVolume &v) {
  KSpaceVolume out(v.n);
  out.values = detail::fft_centered(v.values, v.n, FFTW_FORWARD);
  return out;
}

inline KSpaceVolume ifft3c(const KSpaceVolume &k) {
  KSpaceVolume out(k.n);
  out.values = detail::fft_centered(k.values, k.n, FFTW_BACKWARD);
  return out;
}

// Magnitude of a complex image.
inline Volume magnitude(const KSpaceVolume &z) {
  Volume m(z.n);
  for (std::size_t i = 0; i < z.size(); ++i) m.values[i] = std::abs(z.values[i]);
  return m;
}

inline Volume real_part(const KSpaceVolume &z) {
  Volume m(z.n);
  for (std::size_t i = 0; i < z.size(); ++i) m.values[i] = z.values[i].real();
  return m;
}

} // namespace ktraj
