#pragma once

#include <cstdint>
#include <random>
#include <string_view>

namespace ntnsim {

/// Deterministic random stream derived from (seed, component tag). Streams
/// with different tags are independent, so adding a consumer never perturbs
/// the draws seen by another.
class RngStream {
  public:
    RngStream(std::uint64_t seed, std::string_view tag);

    std::uint64_t next_u64() { return engine_(); }
    double uniform01();  // [0, 1)
    bool bernoulli(double p) { return uniform01() < p; }

  private:
    std::mt19937_64 engine_;
};

/// splitmix64 finalizer; used for seed derivation and tests.
std::uint64_t mix_u64(std::uint64_t x);

/// FNV-1a over the tag bytes.
std::uint64_t hash_tag(std::string_view tag);

/// Derived engine seed for (seed, tag); exposed for collision tests.
std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view tag);

}  // namespace ntnsim
