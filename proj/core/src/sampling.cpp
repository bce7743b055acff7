#include "gkv/sampling.hpp"

#include <atomic>
#include <exception>
#include <thread>

namespace gkv {

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  // splitmix64 finalizer over a mix of both inputs
  std::uint64_t z = seed + 0x9e3779b97f4a7c15ULL * (index + 1);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
  return z ^ (z >> 31);
}

Vec Rng::direction(std::size_t n) {
  Vec v(n);
  for (double& x : v) x = uniform(-1.0, 1.0);
  return v;
}

std::vector<Vec> sample_points(const std::vector<Interval>& box, std::size_t count,
                               std::uint64_t seed) {
  std::vector<Vec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Rng rng(derive_seed(seed, i));
    Vec p(box.size());
    for (std::size_t k = 0; k < box.size(); ++k) p[k] = rng.uniform(box[k].lo, box[k].hi);
    out.push_back(std::move(p));
  }
  return out;
}

void parallel_for(std::size_t count, const std::function<void(std::size_t)>& fn,
                  unsigned threads) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, count));
  std::vector<std::exception_ptr> errors(count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        fn(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      for (std::size_t i; (i = next.fetch_add(1)) < count;) {
        try {
          fn(i);
        } catch (...) {
          errors[i] = std::current_exception();
        }
      }
    };
    std::vector<std::thread> pool;
    for (unsigned t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  for (auto& e : errors)
    if (e) std::rethrow_exception(e);
}

Tally sample_tally(const std::vector<IdentitySpec>& specs, const std::vector<Vec>& points,
                   const std::function<void(std::size_t, const Vec&, Tally&)>& fn,
                   unsigned threads) {
  std::vector<Tally> per_point(points.size(), Tally(&specs));
  parallel_for(
      points.size(), [&](std::size_t i) { fn(i, points[i], per_point[i]); }, threads);
  Tally total(&specs);
  for (const auto& t : per_point) total.merge(t);
  return total;
}

}  // namespace gkv
