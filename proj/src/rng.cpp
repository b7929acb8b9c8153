// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#include "ergofit/rng.hpp"

#include <cmath>

namespace ergofit {
namespace {

constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;

// Stafford's mix13 finalizer (the splitmix64 output function).
inline std::uint64_t mix64(std::uint64_t z) {
  z ^= z >> 30;
  z *= 0xBF58476D1CE4E5B9ULL;
  z ^= z >> 27;
  z *= 0x94D049BB133111EBULL;
  z ^= z >> 31;
  return z;
}

inline std::uint64_t derive_key(std::uint64_t seed, std::uint64_t stream_id) {
  std::uint64_t h = mix64(seed + kGolden);
  h = mix64(h ^ (stream_id + 0xD1B54A32D192ED03ULL));
  return h;
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), key_(derive_key(seed, stream_id)) {}

std::uint64_t RngStream::next_u64() {
  counter_ += 1;
  return mix64(key_ + counter_ * kGolden);
}

double RngStream::uniform01() {
  // 53 random bits, centered in the cell: value in {0.5, 1.5, ...}*2^-53.
  return (static_cast<double>(next_u64() >> 11) + 0.5) * 0x1.0p-53;
}

double RngStream::normal() {
  if (has_cached_normal_) {
    has_cached_normal_ = false;
    return cached_normal_;
  }
  const double u1 = uniform01();
  const double u2 = uniform01();
  const double r = std::sqrt(-2.0 * std::log(u1));
  const double phi = 6.283185307179586476925286766559 * u2;
  cached_normal_ = r * std::sin(phi);
  has_cached_normal_ = true;
  return r * std::cos(phi);
}

RngStream RngStream::substream(std::uint64_t tag) const {
  RngStream s;
  s.seed_ = seed_;
  s.stream_id_ = stream_id_;
  s.key_ = mix64(key_ ^ mix64(tag + 0xA0761D6478BD642FULL));
  return s;
}

}  // namespace ergofit
