#pragma once

#include <string>
#include <utility>
#include <vector>

#include "ktraj/fft.hpp"
#include "ktraj/phantom.hpp"
#include "ktraj/volume.hpp"

namespace ktraj {

// Training pair: fully sampled k-space X with its ground-truth image Z.
// Pairs are always generated from Z (X = fft3c(Z)), never supplied
// independently, so X and Z stay consistent by construction.
struct Pair {
  KSpaceVolume kspace;
  Volume image;
};

struct Dataset {
  std::vector<Pair> train;
  std::vector<Pair> val;
};

inline Pair make_pair(const Volume &z) {
  Pair p;
  p.image = z;
  p.kspace = fft3c(z);
  return p;
}

// 90/10 train/val split by integer arithmetic: floor(9*count/10) train items.
inline int train_count(int count) { return (count * 9) / 10; }

// In-memory dataset of random-ellipsoid phantoms. Item i draws from the
// stream mix(seed, i), so any prefix of the dataset is stable under growth.
inline Dataset make_ellipsoid_dataset(int n, int count, int ellipsoids_per_volume,
                                      std::uint64_t seed) {
  Dataset ds;
  const int ntrain = train_count(count);
  for (int i = 0; i < count; ++i) {
    Volume z = random_ellipsoids(n, ellipsoids_per_volume, SplitMix64::mix(seed, i));
    Pair p = make_pair(z);
    if (i < ntrain)
      ds.train.push_back(std::move(p));
    else
      ds.val.push_back(std::move(p));
  }
  return ds;
}

} // namespace ktraj
