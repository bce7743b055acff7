#pragma once

// Seeded sampling and deterministic point-level parallelism.

#include <cstdint>
#include <functional>
#include <random>
#include <vector>

#include "gkv/chart.hpp"
#include "gkv/report.hpp"

namespace gkv {

// Independent stream seed for item `index` of a run seeded with `seed`.
std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index);

// Seed for the random probe vectors used at point `index`.
inline std::uint64_t probe_seed(std::uint64_t seed, std::uint64_t index) {
  return derive_seed(derive_seed(seed, index) ^ 0x5bd1e9955bd1e995ULL, 1);
}

class Rng {
 public:
  explicit Rng(std::uint64_t seed) : engine_(seed) {}

  // Uniform on [0, 1) from the top 53 bits, independent of <random>'s
  // distribution implementations.
  double uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  // Vector with entries uniform on [-1, 1].
  Vec direction(std::size_t n);

 private:
  std::mt19937_64 engine_;
};

// Point i is drawn from its own stream, so a run with more points extends
// a run with fewer.
std::vector<Vec> sample_points(const std::vector<Interval>& box, std::size_t count,
                               std::uint64_t seed);

// Runs fn(0..count-1) on a small thread pool.  If any call throws, the
// exception from the lowest index is rethrown after all workers finish.
void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned threads = 0);

// Runs fn(index, point, tally) for every point and merges the per-point
// tallies in index order, so the result does not depend on scheduling.
Tally sample_tally(const std::vector<IdentitySpec>& specs, const std::vector<Vec>& points,
                   const std::function<void(std::size_t, const Vec&, Tally&)>& fn,
                   unsigned threads = 0);

}  // namespace gkv
