#include "ntnsim/rng.hpp"

namespace ntnsim {

std::uint64_t mix_u64(std::uint64_t x) {
    x += 0x9e3779b97f4a7c15ULL;
    x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
    x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
    return x ^ (x >> 31);
}

std::uint64_t hash_tag(std::string_view tag) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : tag) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::uint64_t derive_stream_seed(std::uint64_t seed, std::string_view tag) {
    return mix_u64(mix_u64(seed) ^ hash_tag(tag));
}

RngStream::RngStream(std::uint64_t seed, std::string_view tag)
    : engine_(derive_stream_seed(seed, tag)) {}

double RngStream::uniform01() {
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

}  // namespace ntnsim
