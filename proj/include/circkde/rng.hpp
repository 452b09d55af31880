#pragma once

#include <cstdint>
#include <random>

namespace circkde {

//! Seedable random stream. The engine is std::mt19937_64; uniforms are
//! built from the top 53 bits of each draw and normals come from the
//! Marsaglia polar method, so a (seed, stream) pair reproduces the same
//! variates on every platform.
class Rng
{
public:
  explicit Rng(std::uint64_t seed = 0);

  //! Independent substream for repetition `index` of a run seeded with
  //! `seed`. Seeds are mixed with SplitMix64.
  static Rng substream(std::uint64_t seed, std::uint64_t index);

  //! Uniform on [0, 1).
  double uniform();
  //! Uniform on (0, 1).
  double uniform_open();
  //! Standard normal.
  double normal();

  std::uint64_t next_u64() { return engine_(); }

private:
  std::mt19937_64 engine_;
  double spare_ = 0.0;
  bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x);

} // namespace circkde
