#include "gkv/jet.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <mutex>
#include <string>

#include "gkv/error.hpp"

namespace gkv {

namespace {

constexpr int kRadix = kMaxJetOrder + 1;

std::size_t encode(const MultiIndex& alpha, int num_vars) {
  std::size_t key = 0;
  for (int v = 0; v < num_vars; ++v) key = key * kRadix + alpha[v];
  return key;
}

void enumerate_degree(int num_vars, int var, int remaining, MultiIndex& cur,
                      std::vector<MultiIndex>& out) {
  if (var == num_vars - 1) {
    cur[var] = static_cast<std::uint8_t>(remaining);
    out.push_back(cur);
    cur[var] = 0;
    return;
  }
  for (int k = remaining; k >= 0; --k) {
    cur[var] = static_cast<std::uint8_t>(k);
    enumerate_degree(num_vars, var + 1, remaining - k, cur, out);
  }
  cur[var] = 0;
}

std::vector<int>& lookup_table(int num_vars) {
  static std::array<std::vector<int>, kMaxJetVars + 1> tables;
  return tables[num_vars];
}

}  // namespace

MultiIndexSet::MultiIndexSet(int num_vars) : num_vars_(num_vars) {
  MultiIndex zero{};
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    if (num_vars == 0) {
      if (d == 0) indices_.push_back(zero);
    } else {
      enumerate_degree(num_vars, 0, d, zero, indices_);
    }
    degree_end_[d] = indices_.size();
  }
  degrees_.reserve(indices_.size());
  for (const auto& alpha : indices_) {
    int deg = 0;
    for (int v = 0; v < num_vars; ++v) deg += alpha[v];
    degrees_.push_back(deg);
  }

  std::size_t table_size = 1;
  for (int v = 0; v < num_vars; ++v) table_size *= kRadix;
  auto& table = lookup_table(num_vars);
  table.assign(table_size, -1);
  for (std::size_t i = 0; i < indices_.size(); ++i)
    table[encode(indices_[i], num_vars)] = static_cast<int>(i);

  raise_.assign(indices_.size() * static_cast<std::size_t>(num_vars), -1);
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (degrees_[i] == kMaxJetOrder) continue;
    for (int v = 0; v < num_vars; ++v) {
      MultiIndex up = indices_[i];
      ++up[v];
      raise_[i * num_vars + v] = table[encode(up, num_vars)];
    }
  }

  for (std::size_t i = 0; i < indices_.size(); ++i) {
    for (std::size_t j = 0; j < indices_.size(); ++j) {
      if (degrees_[i] + degrees_[j] > kMaxJetOrder) continue;
      MultiIndex sum{};
      for (int v = 0; v < num_vars; ++v) sum[v] = indices_[i][v] + indices_[j][v];
      products_.push_back({static_cast<std::uint16_t>(i),
                           static_cast<std::uint16_t>(j),
                           static_cast<std::uint16_t>(table[encode(sum, num_vars)])});
    }
  }
  std::stable_sort(products_.begin(), products_.end(),
                   [this](const ProductTerm& a, const ProductTerm& b) {
                     return degrees_[a.out] < degrees_[b.out];
                   });
  std::size_t pos = 0;
  for (int d = 0; d <= kMaxJetOrder; ++d) {
    while (pos < products_.size() && degrees_[products_[pos].out] <= d) ++pos;
    product_end_[d] = pos;
  }
}

int MultiIndexSet::index_of(const MultiIndex& alpha) const {
  int deg = 0;
  for (int v = 0; v < num_vars_; ++v) deg += alpha[v];
  if (deg > kMaxJetOrder) return -1;
  return lookup_table(num_vars_)[encode(alpha, num_vars_)];
}

const MultiIndexSet& MultiIndexSet::get(int num_vars) {
  static std::array<std::once_flag, kMaxJetVars + 1> flags;
  static std::array<std::unique_ptr<MultiIndexSet>, kMaxJetVars + 1> sets;
  if (num_vars < 0 || num_vars > kMaxJetVars)
    throw InvalidArgument("jets support 0.." + std::to_string(kMaxJetVars) +
                          " variables, got " + std::to_string(num_vars));
  std::call_once(flags[num_vars], [num_vars] {
    sets[num_vars].reset(new MultiIndexSet(num_vars));
  });
  return *sets[num_vars];
}

// ---------------------------------------------------------------------------

Jet::Jet(double value) : coeffs_(1, value) {}

Jet::Jet(int num_vars, int order)
    : num_vars_(num_vars),
      order_(order),
      coeffs_(MultiIndexSet::get(num_vars).size(order), 0.0) {}

Jet Jet::constant(int num_vars, int order, double value) {
  if (order < 0 || order > kMaxJetOrder)
    throw InvalidArgument("jet order must lie in 0.." +
                          std::to_string(kMaxJetOrder));
  Jet r(num_vars, order);
  r.coeffs_[0] = value;
  return r;
}

Jet Jet::seed(std::span<const double> point, int var, int order) {
  const int n = static_cast<int>(point.size());
  if (n < 1 || n > kMaxJetVars)
    throw InvalidArgument("seed point must have 1.." +
                          std::to_string(kMaxJetVars) + " coordinates");
  if (var < 0 || var >= n)
    throw InvalidArgument("seed variable index " + std::to_string(var) +
                          " out of range for " + std::to_string(n) +
                          " variable(s)");
  Jet r = constant(n, order, point[var]);
  if (order >= 1) r.coeffs_[1 + var] = 1.0;
  return r;
}

std::vector<Jet> Jet::seed_all(std::span<const double> point, int order) {
  std::vector<Jet> out;
  out.reserve(point.size());
  for (std::size_t v = 0; v < point.size(); ++v)
    out.push_back(seed(point, static_cast<int>(v), order));
  return out;
}

double Jet::coeff(std::span<const int> alpha) const {
  if (is_constant()) {
    for (int a : alpha)
      if (a != 0) return 0.0;
    return value();
  }
  if (static_cast<int>(alpha.size()) != num_vars_)
    throw InvalidArgument("multi-index length does not match variable count");
  MultiIndex mi{};
  int deg = 0;
  for (int v = 0; v < num_vars_; ++v) {
    if (alpha[v] < 0) throw InvalidArgument("negative multi-index entry");
    deg += alpha[v];
    mi[v] = static_cast<std::uint8_t>(std::min(alpha[v], kMaxJetOrder + 1));
  }
  if (deg > order_)
    throw InsufficientOrderError("coefficient of degree " +
                                 std::to_string(deg) + " requested from a jet of order " +
                                 std::to_string(order_));
  return coeffs_[indices().index_of(mi)];
}

double Jet::partial(std::span<const int> alpha) const {
  double factor = 1.0;
  for (int a : alpha)
    for (int k = 2; k <= a; ++k) factor *= k;
  return coeff(alpha) * factor;
}

double Jet::d(int var) const {
  if (is_constant()) return 0.0;
  if (var < 0 || var >= num_vars_)
    throw InvalidArgument("variable index out of range");
  if (order_ < 1)
    throw InsufficientOrderError("first derivative requested from an order-0 jet");
  return coeffs_[1 + var];
}

Jet Jet::derivative(int var) const {
  if (is_constant()) return Jet(0.0);
  if (var < 0 || var >= num_vars_)
    throw InvalidArgument("variable index out of range");
  if (order_ < 1)
    throw InsufficientOrderError(
        "derivative of an order-0 jet: increase the jet order");
  const auto& set = indices();
  Jet r(num_vars_, order_ - 1);
  for (std::size_t i = 0; i < r.coeffs_.size(); ++i)
    r.coeffs_[i] = (set[i][var] + 1) * coeffs_[set.raised(i, var)];
  return r;
}

Jet Jet::truncated(int order) const {
  if (is_constant() || order >= order_) return *this;
  if (order < 0) throw InvalidArgument("negative truncation order");
  Jet r = *this;
  r.order_ = order;
  r.coeffs_.resize(indices().size(order));
  return r;
}

namespace {

void check_compatible(const Jet& a, const Jet& b) {
  if (!a.is_constant() && !b.is_constant() && a.num_vars() != b.num_vars())
    throw InvalidArgument("jets over different variable counts (" +
                          std::to_string(a.num_vars()) + " vs " +
                          std::to_string(b.num_vars()) + ")");
}

}  // namespace

Jet& Jet::operator+=(const Jet& rhs) { return add_scaled(1.0, rhs); }
Jet& Jet::operator-=(const Jet& rhs) { return add_scaled(-1.0, rhs); }

Jet& Jet::add_scaled(double s, const Jet& b) {
  check_compatible(*this, b);
  if (b.is_constant()) {
    coeffs_[0] += s * b.coeffs_[0];
    return *this;
  }
  if (is_constant()) {
    const double c = coeffs_[0];
    *this = b;
    for (double& x : coeffs_) x *= s;
    coeffs_[0] += c;
    return *this;
  }
  if (b.order_ < order_) {
    order_ = b.order_;
    coeffs_.resize(b.coeffs_.size());
  }
  for (std::size_t i = 0; i < coeffs_.size(); ++i) coeffs_[i] += s * b.coeffs_[i];
  return *this;
}

Jet& Jet::operator*=(double s) {
  for (double& x : coeffs_) x *= s;
  return *this;
}

Jet& Jet::operator+=(double s) {
  coeffs_[0] += s;
  return *this;
}

Jet& Jet::operator*=(const Jet& rhs) { return *this = *this * rhs; }
Jet& Jet::operator/=(const Jet& rhs) { return *this = *this / rhs; }

Jet operator-(const Jet& a) {
  Jet r = a;
  for (double& x : r.coeffs_) x = -x;
  return r;
}

Jet operator+(const Jet& a, const Jet& b) {
  Jet r = a;
  r += b;
  return r;
}

Jet operator-(const Jet& a, const Jet& b) {
  Jet r = a;
  r -= b;
  return r;
}

Jet operator+(const Jet& a, double s) {
  Jet r = a;
  r.coeffs_[0] += s;
  return r;
}

Jet operator*(double s, const Jet& a) {
  Jet r = a;
  r *= s;
  return r;
}

Jet operator*(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  if (a.is_constant()) return a.coeffs_[0] * b;
  if (b.is_constant()) return b.coeffs_[0] * a;
  const int order = std::min(a.order_, b.order_);
  Jet r(a.num_vars_, order);
  for (const auto& t : a.indices().products(order))
    r.coeffs_[t.out] += a.coeffs_[t.lhs] * b.coeffs_[t.rhs];
  return r;
}

Jet operator/(const Jet& a, const Jet& b) {
  check_compatible(a, b);
  if (b.is_constant()) {
    if (std::abs(b.coeffs_[0]) < kSingularThreshold)
      throw SingularValueError("division by zero");
    return (1.0 / b.coeffs_[0]) * a;
  }
  return a * reciprocal(b);
}

Jet Jet::compose_univariate(const Jet& a, std::span<const double> taylor) {
  if (a.is_constant()) return Jet(taylor[0]);
  Jet t = a;
  t.coeffs_[0] = 0.0;
  Jet r = constant(a.num_vars_, a.order_, taylor[a.order_]);
  for (int k = a.order_ - 1; k >= 0; --k) {
    r = r * t;
    r.coeffs_[0] += taylor[k];
  }
  return r;
}

Jet reciprocal(const Jet& a) {
  const double a0 = a.value();
  if (std::abs(a0) < kSingularThreshold)
    throw SingularValueError("division by a jet with zero constant term");
  std::array<double, kMaxJetOrder + 1> taylor{};
  double term = 1.0 / a0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    taylor[k] = term;
    term *= -1.0 / a0;
  }
  return Jet::compose_univariate(a, taylor);
}

Jet exp(const Jet& a) {
  std::array<double, kMaxJetOrder + 1> taylor{};
  const double e = std::exp(a.value());
  double fact = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    if (k > 0) fact *= k;
    taylor[k] = e / fact;
  }
  return Jet::compose_univariate(a, taylor);
}

namespace {

// Taylor coefficients of sin (phase 0) or cos (phase 1) about x.
std::array<double, kMaxJetOrder + 1> trig_taylor(double x, int phase) {
  const double s = std::sin(x), c = std::cos(x);
  // derivative cycle of sin: sin, cos, -sin, -cos
  const std::array<double, 4> cycle{s, c, -s, -c};
  std::array<double, kMaxJetOrder + 1> taylor{};
  double fact = 1.0;
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    if (k > 0) fact *= k;
    taylor[k] = cycle[(k + phase) % 4] / fact;
  }
  return taylor;
}

}  // namespace

Jet sin(const Jet& a) { return Jet::compose_univariate(a, trig_taylor(a.value(), 0)); }
Jet cos(const Jet& a) { return Jet::compose_univariate(a, trig_taylor(a.value(), 1)); }

Jet sqrt(const Jet& a) {
  const double a0 = a.value();
  if (!(a0 > 0.0))
    throw DomainError("sqrt of a jet with nonpositive constant term " +
                      std::to_string(a0));
  std::array<double, kMaxJetOrder + 1> taylor{};
  // binom(1/2, k) * a0^(1/2 - k)
  double binom = 1.0;
  double power = std::sqrt(a0);
  for (int k = 0; k <= kMaxJetOrder; ++k) {
    taylor[k] = binom * power;
    binom *= (0.5 - k) / (k + 1);
    power /= a0;
  }
  return Jet::compose_univariate(a, taylor);
}

Jet pow(const Jet& a, int k) {
  if (k < 0) return reciprocal(pow(a, -k));
  Jet result(1.0);
  Jet base = a;
  while (k > 0) {
    if (k & 1) result = result * base;
    k >>= 1;
    if (k > 0) base = base * base;
  }
  return result;
}

// ---------------------------------------------------------------------------

JetComposer::JetComposer(std::span<const Jet> inner, int order)
    : outer_vars_(static_cast<int>(inner.size())), order_(order) {
  if (order < 0 || order > kMaxJetOrder)
    throw InvalidArgument("composition order out of range");
  int inner_vars = 0;
  for (const auto& j : inner) {
    if (j.is_constant()) continue;
    if (inner_vars != 0 && j.num_vars() != inner_vars)
      throw InvalidArgument("inner jets over different variable counts");
    inner_vars = j.num_vars();
    order_ = std::min(order_, j.order());
  }
  const auto& set = MultiIndexSet::get(outer_vars_);
  std::vector<Jet> delta;
  delta.reserve(inner.size());
  for (const auto& j : inner) delta.push_back(j - j.value());

  monomials_.reserve(set.size(order_));
  monomials_.push_back(inner_vars == 0 ? Jet(1.0)
                                       : Jet::constant(inner_vars, order_, 1.0));
  for (std::size_t i = 1; i < set.size(order_); ++i) {
    MultiIndex parent = set[i];
    int var = 0;
    while (parent[var] == 0) ++var;
    --parent[var];
    monomials_.push_back(monomials_[set.index_of(parent)] * delta[var]);
  }
}

Jet JetComposer::apply(const Jet& outer) const {
  if (outer.is_constant()) return outer;
  if (outer.num_vars() != outer_vars_)
    throw InvalidArgument("outer jet variable count does not match composer");
  const int order = std::min(order_, outer.order());
  const auto c = outer.coeffs();
  const std::size_t n = MultiIndexSet::get(outer_vars_).size(order);
  Jet r = monomials_[0].truncated(order) * c[0];
  for (std::size_t i = 1; i < n; ++i)
    if (c[i] != 0.0) r.add_scaled(c[i], monomials_[i]);
  return r.truncated(order);
}

}  // namespace gkv
