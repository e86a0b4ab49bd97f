#pragma once

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <string>

#include "ktraj/errors.hpp"

namespace ktraj::binio {

// Little-endian scalar I/O. Byte-swaps on big-endian hosts so the on-disk
// formats are identical everywhere.

template <typename T> inline T byteswap_if_needed(T v) {
  if constexpr (std::endian::native == std::endian::little) {
    return v;
  } else {
    unsigned char b[sizeof(T)];
    std::memcpy(b, &v, sizeof(T));
    for (std::size_t i = 0; i < sizeof(T) / 2; ++i)
      std::swap(b[i], b[sizeof(T) - 1 - i]);
    T out;
    std::memcpy(&out, b, sizeof(T));
    return out;
  }
}

template <typename T> inline void write_le(std::ostream &os, T v) {
  T le = byteswap_if_needed(v);
  os.write(reinterpret_cast<const char *>(&le), sizeof(T));
}

template <typename T> inline T read_le(std::istream &is, const std::string &what) {
  T v;
  is.read(reinterpret_cast<char *>(&v), sizeof(T));
  if (!is) throw FormatError("truncated payload while reading " + what);
  return byteswap_if_needed(v);
}

inline void write_magic(std::ostream &os, const char magic[4]) {
  os.write(magic, 4);
}

inline void check_magic(std::istream &is, const char expect[4], const std::string &path) {
  char got[4] = {0, 0, 0, 0};
  is.read(got, 4);
  if (!is) throw FormatError("truncated payload while reading magic of " + path);
  if (std::memcmp(got, expect, 4) != 0)
    throw FormatError("format mismatch: bad magic in " + path + " (expected " +
                      std::string(expect, 4) + ")");
}

inline std::ofstream open_out(const std::string &path) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw FormatError("cannot open for writing: " + path);
  return os;
}

inline std::ifstream open_in(const std::string &path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw FormatError("cannot open for reading: " + path);
  return is;
}

} // namespace ktraj::binio
