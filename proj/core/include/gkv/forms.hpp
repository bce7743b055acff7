#pragma once

// Differential forms on a chart, stored by strictly increasing index sets.
// A set {i0 < i1 < ... } is encoded as the bitmask sum 2^i, so a form over
// at most 8 coordinates has at most 256 components.
//
// Component conventions (the usual determinant normalization):
//   (dw)_{i0..ik}    = sum_a (-1)^a d_{ia} w_{i0..^ia..ik}
//   (a ^ b)_{S}      = sum over shuffles A|B of S of sign(A,B) a_A b_B

#include <bit>
#include <cstdint>
#include <span>
#include <vector>

#include "gkv/error.hpp"
#include "gkv/jet.hpp"
#include "gkv/linalg.hpp"

namespace gkv {

template <class T>
class Form {
 public:
  Form() = default;
  Form(int degree, int dim) : degree_(degree), dim_(dim), comps_(std::size_t{1} << dim, T(0.0)) {
    if (dim < 0 || dim > kMaxJetVars || degree < 0 || degree > dim)
      throw InvalidArgument("form degree/dimension out of range");
  }

  int degree() const noexcept { return degree_; }
  int dim() const noexcept { return dim_; }

  // Component on an increasing index set given as a bitmask.
  T& operator[](unsigned mask) { return comps_[mask]; }
  const T& operator[](unsigned mask) const { return comps_[mask]; }

  // Component for an arbitrary index tuple (zero on repeats, sign from sorting).
  T component(std::span<const int> idx) const {
    unsigned mask = 0;
    int inversions = 0;
    for (std::size_t a = 0; a < idx.size(); ++a) {
      if (mask & (1u << idx[a])) return T(0.0);
      mask |= 1u << idx[a];
      for (std::size_t b = a + 1; b < idx.size(); ++b) inversions += idx[b] < idx[a];
    }
    return inversions % 2 ? T(0.0) - comps_[mask] : comps_[mask];
  }

  // Masks with popcount == degree, in increasing order.
  std::vector<unsigned> masks() const {
    std::vector<unsigned> out;
    for (unsigned m = 0; m < comps_.size(); ++m)
      if (std::popcount(m) == degree_) out.push_back(m);
    return out;
  }

 private:
  int degree_ = 0;
  int dim_ = 0;
  std::vector<T> comps_;
};

// Sign of the shuffle that puts the indices of `a` before those of `b`.
inline int shuffle_sign(unsigned a, unsigned b) {
  int inversions = 0;
  for (unsigned rest = a; rest; rest &= rest - 1) {
    const int i = std::countr_zero(rest);
    inversions += std::popcount(b & ((1u << i) - 1));
  }
  return inversions % 2 ? -1 : 1;
}

template <class T>
Form<T> wedge(const Form<T>& a, const Form<T>& b) {
  if (a.dim() != b.dim()) throw InvalidArgument("wedge of forms on different charts");
  const int p = a.degree(), q = b.degree();
  if (p + q > a.dim()) return Form<T>(a.dim(), a.dim());  // identically zero
  Form<T> out(p + q, a.dim());
  for (unsigned s : out.masks()) {
    T acc(0.0);
    // enumerate subsets of s with popcount p
    for (unsigned sub = s;; sub = (sub - 1) & s) {
      if (std::popcount(sub) == p) {
        const unsigned rest = s & ~sub;
        const T term = a[sub] * b[rest];
        if (shuffle_sign(sub, rest) > 0)
          acc += term;
        else
          acc -= term;
      }
      if (sub == 0) break;
    }
    out[s] = acc;
  }
  return out;
}

inline Form<double> values(const Form<Jet>& f) {
  Form<double> out(f.degree(), f.dim());
  for (unsigned m : f.masks()) out[m] = f[m].value();
  return out;
}

// Exterior derivative; jets lose one order.
Form<Jet> exterior_derivative(const Form<Jet>& w);

// 1-form from lower-index components.
Form<Jet> one_form(std::span<const Jet> comps);
// 2-form from a matrix, antisymmetrized: w_{ij} = (m_ij - m_ji) / 2.
Form<Jet> two_form(const Matrix<Jet>& m);

// w(v1, ..., vk) for real vectors.
double evaluate(const Form<double>& w, std::span<const Vec> vectors);

}  // namespace gkv
