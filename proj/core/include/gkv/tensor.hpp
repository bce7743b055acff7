#pragma once

#include <array>
#include <cstddef>
#include <vector>

namespace gkv {

// Dense row-major array with a fixed number of indices.
template <class T, std::size_t Rank>
class Tensor {
 public:
  Tensor() = default;
  explicit Tensor(std::array<std::size_t, Rank> extents, const T& fill = T(0.0))
      : extents_(extents) {
    std::size_t n = 1;
    for (std::size_t e : extents) n *= e;
    data_.assign(n, fill);
  }

  std::size_t extent(std::size_t r) const { return extents_[r]; }

  template <class... I>
  T& operator()(I... idx) {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }
  template <class... I>
  const T& operator()(I... idx) const {
    static_assert(sizeof...(I) == Rank);
    return data_[offset({static_cast<std::size_t>(idx)...})];
  }

  const std::vector<T>& data() const noexcept { return data_; }

 private:
  std::size_t offset(std::array<std::size_t, Rank> idx) const {
    std::size_t off = 0;
    for (std::size_t r = 0; r < Rank; ++r) off = off * extents_[r] + idx[r];
    return off;
  }

  std::array<std::size_t, Rank> extents_{};
  std::vector<T> data_;
};

}  // namespace gkv
