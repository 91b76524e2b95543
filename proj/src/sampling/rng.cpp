#include "knlb/sampling/rng.hpp"

namespace knlb {

namespace {

constexpr std::uint64_t splitmix(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

}  // namespace

std::uint64_t hash64(std::uint64_t master_seed, std::uint64_t stream_id) {
  return splitmix(splitmix(master_seed) ^ (stream_id * 0xd6e8feb86659fd93ULL + 0x632be59bd9b4e019ULL));
}

std::uint64_t stream_id(std::uint64_t point, std::uint64_t trial, std::uint64_t role) {
  return splitmix(splitmix(point) ^ splitmix(trial + 0x1000)) ^ (role << 56);
}

RandomStream::RandomStream(std::uint64_t master_seed, std::uint64_t stream)
    : engine_(hash64(master_seed, stream)) {}

}  // namespace knlb
