#pragma once

// Truncated multivariate Taylor arithmetic ("jets").
//
// A Jet in `n` variables truncated at order `k` stores the Taylor
// coefficients c_alpha = (d^alpha f)(p) / alpha! for every multi-index
// |alpha| <= k.  Coefficients are kept densely in graded order (all degree-0
// entries, then degree-1, ...), so a jet of order k is a prefix of the same
// jet at any higher order and truncation is a resize.
//
// A jet with zero variables is a plain constant.  It combines with any other
// jet and never limits the order of a result, which keeps constant tensor
// components (zeros of a metric, literal numbers) cheap.

#include <array>
#include <cstdint>
#include <initializer_list>
#include <span>
#include <vector>

namespace gkv {

inline constexpr int kMaxJetOrder = 4;
inline constexpr int kMaxJetVars = 8;

using MultiIndex = std::array<std::uint8_t, kMaxJetVars>;

// Graded enumeration of multi-indices for a fixed variable count.
class MultiIndexSet {
 public:
  int num_vars() const noexcept { return num_vars_; }

  // Number of multi-indices with total degree <= order.
  std::size_t size(int order) const noexcept { return degree_end_[order]; }
  // First index whose degree equals `degree`.
  std::size_t degree_begin(int degree) const noexcept {
    return degree == 0 ? 0 : degree_end_[degree - 1];
  }

  const MultiIndex& operator[](std::size_t i) const { return indices_[i]; }
  int degree(std::size_t i) const { return degrees_[i]; }

  // Index of alpha, or -1 when alpha has degree above kMaxJetOrder.
  int index_of(const MultiIndex& alpha) const;
  // Index of alpha + e_var, or -1.
  int raised(std::size_t i, int var) const {
    return raise_[i * static_cast<std::size_t>(num_vars_) + var];
  }

  struct ProductTerm {
    std::uint16_t lhs, rhs, out;
  };
  // All (lhs, rhs) pairs whose degrees sum to at most `order`.
  std::span<const ProductTerm> products(int order) const {
    return {products_.data(), product_end_[order]};
  }

  static const MultiIndexSet& get(int num_vars);

 private:
  explicit MultiIndexSet(int num_vars);

  int num_vars_;
  std::vector<MultiIndex> indices_;
  std::vector<int> degrees_;
  std::array<std::size_t, kMaxJetOrder + 1> degree_end_{};
  std::vector<int> raise_;
  std::vector<ProductTerm> products_;
  std::array<std::size_t, kMaxJetOrder + 1> product_end_{};
};

class Jet {
 public:
  // The constant 0.
  Jet() = default;
  // A constant (zero-variable) jet.
  explicit Jet(double value);

  // Jet of `value` in `num_vars` variables with all derivatives zero.
  static Jet constant(int num_vars, int order, double value);
  // Coordinate function x_var at `point`.
  static Jet seed(std::span<const double> point, int var, int order);
  static Jet seed(std::initializer_list<double> point, int var, int order) {
    return seed(std::span<const double>(point.begin(), point.size()), var,
                order);
  }
  // One seeded jet per coordinate.
  static std::vector<Jet> seed_all(std::span<const double> point, int order);

  int num_vars() const noexcept { return num_vars_; }
  int order() const noexcept { return order_; }
  bool is_constant() const noexcept { return num_vars_ == 0; }

  double value() const noexcept { return coeffs_.empty() ? 0.0 : coeffs_[0]; }
  std::span<const double> coeffs() const noexcept { return coeffs_; }

  // Taylor coefficient for a multi-index given as a list of exponents.
  double coeff(std::span<const int> alpha) const;
  double coeff(std::initializer_list<int> alpha) const {
    return coeff(std::span<const int>(alpha.begin(), alpha.size()));
  }
  // Partial derivative d^alpha f at the base point (coefficient * alpha!).
  double partial(std::span<const int> alpha) const;
  double partial(std::initializer_list<int> alpha) const {
    return partial(std::span<const int>(alpha.begin(), alpha.size()));
  }
  // First partial derivative with respect to variable `var`.
  double d(int var) const;

  // Exact partial derivative as a jet of one lower order.  Throws
  // InsufficientOrderError on an order-0 jet.
  Jet derivative(int var) const;
  Jet truncated(int order) const;

  Jet& operator+=(const Jet& rhs);
  Jet& operator-=(const Jet& rhs);
  Jet& operator*=(const Jet& rhs);
  Jet& operator/=(const Jet& rhs);
  Jet& operator*=(double s);
  Jet& operator+=(double s);

  // a += s * b without a temporary.
  Jet& add_scaled(double s, const Jet& b);

  friend Jet operator-(const Jet& a);
  friend Jet operator+(const Jet& a, const Jet& b);
  friend Jet operator-(const Jet& a, const Jet& b);
  friend Jet operator*(const Jet& a, const Jet& b);
  friend Jet operator/(const Jet& a, const Jet& b);
  friend Jet operator*(double s, const Jet& a);
  friend Jet operator*(const Jet& a, double s) { return s * a; }
  friend Jet operator+(const Jet& a, double s);
  friend Jet operator+(double s, const Jet& a) { return a + s; }
  friend Jet operator-(const Jet& a, double s) { return a + (-s); }
  friend Jet operator-(double s, const Jet& a) { return (-a) + s; }

  friend Jet reciprocal(const Jet& a);
  friend Jet exp(const Jet& a);
  friend Jet sin(const Jet& a);
  friend Jet cos(const Jet& a);
  friend Jet sqrt(const Jet& a);
  friend Jet pow(const Jet& a, int k);

 private:
  Jet(int num_vars, int order);

  const MultiIndexSet& indices() const { return MultiIndexSet::get(num_vars_); }
  // Applies sum_k taylor[k] * (a - a0)^k.
  static Jet compose_univariate(const Jet& a, std::span<const double> taylor);

  int num_vars_ = 0;
  int order_ = kMaxJetOrder;
  std::vector<double> coeffs_ = std::vector<double>(1, 0.0);
};

// Magnitude below which a constant term counts as zero for division.
inline constexpr double kSingularThreshold = 1e-300;

inline double value_of(double x) { return x; }
inline double value_of(const Jet& x) { return x.value(); }

// Substitutes inner jets (one per variable of the outer jets) into the
// Taylor polynomials of outer jets: result(u) = outer(p + delta(u)) where
// delta = inner - inner.value().  Used to pull ambient fields back along an
// immersion.  The monomials of delta are built once per composer.
class JetComposer {
 public:
  JetComposer(std::span<const Jet> inner, int order);

  Jet apply(const Jet& outer) const;
  int order() const noexcept { return order_; }

 private:
  int outer_vars_;
  int order_;
  std::vector<Jet> monomials_;
};

}  // namespace gkv
