#pragma once

#include <cstdint>
#include <random>

namespace knlb {

// Substream seed for (master seed, stream id): two rounds of the splitmix64
// finalizer over the pair. Every experiment derives its per-trial, per-role
// streams through this function.
std::uint64_t hash64(std::uint64_t master_seed, std::uint64_t stream_id);

// Stream id for (grid point, trial, role) triples.
std::uint64_t stream_id(std::uint64_t point, std::uint64_t trial, std::uint64_t role);

// Roles that get distinct streams inside one trial.
namespace role {
inline constexpr std::uint64_t data = 1;
inline constexpr std::uint64_t decoupled = 2;
inline constexpr std::uint64_t z_samples = 3;
inline constexpr std::uint64_t inner_mc = 4;
inline constexpr std::uint64_t test_points = 5;
inline constexpr std::uint64_t noise = 6;
}  // namespace role

// Single-owner random stream.
class RandomStream {
 public:
  RandomStream(std::uint64_t master_seed, std::uint64_t stream);

  double gaussian() { return normal_(engine_); }
  double uniform() { return uniform_(engine_); }
  std::uint64_t bits() { return engine_(); }

 private:
  std::mt19937_64 engine_;
  std::normal_distribution<double> normal_{0.0, 1.0};
  std::uniform_real_distribution<double> uniform_{0.0, 1.0};
};

}  // namespace knlb
