// Copyright (c) 2026 The ergofit authors
// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstdint>

namespace ergofit {

// Counter-based splittable random stream keyed by (seed, stream_id).
//
// Output k of a stream is mix64(key + (k+1)*GOLDEN), i.e. a splitmix64 walk
// whose starting state is derived from the key pair. Identical (seed,
// stream_id) therefore reproduces an identical sequence no matter how calls
// are interleaved across replicates or threads, which is the reproducibility
// contract every sampler in this library relies on.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t next_u64();

  // Uniform on the open interval (0, 1); never returns an exact 0 or 1.
  double uniform01();

  // Standard normal via Box-Muller; the second variate of each pair is cached.
  double normal();

  // Independent stream derived from this stream's key and a tag. Used for
  // sub-channels of one replicate (e.g. stationary init vs path noise).
  RngStream substream(std::uint64_t tag) const;

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

 private:
  RngStream() = default;

  std::uint64_t seed_ = 0;
  std::uint64_t stream_id_ = 0;
  std::uint64_t key_ = 0;
  std::uint64_t counter_ = 0;
  double cached_normal_ = 0.0;
  bool has_cached_normal_ = false;
};

}  // namespace ergofit
