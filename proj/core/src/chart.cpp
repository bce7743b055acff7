#include "gkv/chart.hpp"

#include <cstdio>
#include <set>

#include "gkv/error.hpp"

namespace gkv {

Expr Chart::bind(std::string_view text) const { return bind(parse(text)); }

Expr Chart::bind(const Expr& expr) const { return resolve(expr, coords, params); }

void Chart::validate() const {
  if (coords.empty() || coords.size() > static_cast<std::size_t>(kMaxJetVars))
    throw InvalidArgument("chart '" + name + "' needs between 1 and " +
                          std::to_string(kMaxJetVars) + " coordinates");
  std::set<std::string> seen;
  for (const auto& c : coords) {
    if (c.empty()) throw InvalidArgument("chart '" + name + "' has an empty coordinate name");
    if (!seen.insert(c).second)
      throw InvalidArgument("chart '" + name + "' repeats coordinate '" + c + "'");
  }
  if (sample_box.size() != coords.size())
    throw InvalidArgument("chart '" + name + "' sample box has " +
                          std::to_string(sample_box.size()) + " intervals for " +
                          std::to_string(coords.size()) + " coordinates");
  for (std::size_t i = 0; i < sample_box.size(); ++i)
    if (!(sample_box[i].lo < sample_box[i].hi))
      throw InvalidArgument("chart '" + name + "' has an empty sample interval for '" +
                            coords[i] + "'");
}

ChartManifold::ChartManifold(Chart chart, const std::vector<std::vector<Expr>>& metric)
    : chart_(std::move(chart)) {
  chart_.validate();
  const std::size_t n = chart_.dim();
  if (metric.size() != n)
    throw InvalidArgument("metric of '" + chart_.name + "' must have " + std::to_string(n) +
                          " rows");
  for (const auto& row : metric)
    if (row.size() != n)
      throw InvalidArgument("metric of '" + chart_.name + "' must be " + std::to_string(n) +
                            " x " + std::to_string(n));
  metric_.reserve(n * (n + 1) / 2);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      Expr a = chart_.bind(metric[i][j]);
      if (j != i && !a.structurally_equal(chart_.bind(metric[j][i])))
        throw InvalidArgument("metric of '" + chart_.name + "' is not symmetric at (" +
                              std::to_string(i) + ", " + std::to_string(j) + ")");
      metric_.push_back(std::move(a));
    }
  }
}

const Expr& ChartManifold::metric(std::size_t i, std::size_t j) const {
  if (i > j) std::swap(i, j);
  const std::size_t n = dim();
  return metric_[i * n - i * (i - 1) / 2 + (j - i)];
}

std::string describe_point(std::span<const double> p) {
  std::string out = "(";
  char buf[32];
  for (std::size_t i = 0; i < p.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%.6g", p[i]);
    if (i) out += ", ";
    out += buf;
  }
  return out + ")";
}

MetricAt metric_at(const ChartManifold& m, std::span<const double> p) {
  const std::size_t n = m.dim();
  if (p.size() != n) throw InvalidArgument("point dimension does not match the chart");
  MetricAt out{Matrix<double>(n, n), {}};
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) out.g(i, j) = out.g(j, i) = evaluate(m.metric(i, j), p);
  out.g_inv = spd_inverse(out.g, kMetricPivotThreshold, "point " + describe_point(p));
  return out;
}

ChartJets::ChartJets(const ChartManifold& m, std::span<const double> p, int order)
    : point_(p.begin(), p.end()), order_(order) {
  const std::size_t n = m.dim();
  if (p.size() != n) throw InvalidArgument("point dimension does not match the chart");
  if (order < 1) throw InsufficientOrderError("metric jets need order >= 1");
  coords_ = Jet::seed_all(p, order);
  g_ = Matrix<Jet>(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i; j < n; ++j) g_(i, j) = g_(j, i) = evaluate(m.metric(i, j), coords_);
  g_inv_ = spd_inverse(g_, kMetricPivotThreshold, "point " + describe_point(p));

  // dg(i, j, l) = d_i g_{jl}
  Tensor<Jet, 3> dg({n, n, n});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t l = j; l < n; ++l) dg(i, j, l) = dg(i, l, j) = g_(j, l).derivative(i);

  Matrix<Jet> inv_low(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t l = 0; l < n; ++l) inv_low(k, l) = g_inv_(k, l).truncated(order - 1);

  gamma_ = Tensor<Jet, 3>({n, n, n});
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      for (std::size_t l = 0; l < n; ++l) {
        Jet lowered = dg(i, j, l) + dg(j, i, l) - dg(l, i, j);
        if (lowered.is_constant() && lowered.value() == 0.0) continue;
        lowered *= 0.5;
        for (std::size_t k = 0; k < n; ++k) gamma_(k, i, j) += inv_low(k, l) * lowered;
      }
      for (std::size_t k = 0; k < n; ++k) gamma_(k, j, i) = gamma_(k, i, j);
    }
  }
}

CurvaturePack ChartJets::curvature() const {
  if (order_ < 2) throw InsufficientOrderError("curvature needs metric jets of order >= 2");
  const std::size_t n = dim();
  CurvaturePack pack;
  pack.point = point_;
  pack.g = values(g_);
  pack.g_inv = values(g_inv_);
  pack.christoffel = Tensor<double, 3>({n, n, n});
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) pack.christoffel(k, i, j) = gamma_(k, i, j).value();
  pack.riemann = riemann_from_christoffel(gamma_);
  return pack;
}

Tensor<double, 4> riemann_from_christoffel(const Tensor<Jet, 3>& gamma) {
  const std::size_t n = gamma.extent(0);
  // dG(l, j, k, i) = d_i Gamma^l_{jk}
  Tensor<double, 4> dG({n, n, n, n});
  Tensor<double, 3> G({n, n, n});
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t j = 0; j < n; ++j)
      for (std::size_t k = 0; k < n; ++k) {
        const Jet& x = gamma(l, j, k);
        G(l, j, k) = x.value();
        if (x.is_constant()) continue;
        for (std::size_t i = 0; i < n; ++i) dG(l, j, k, i) = x.d(static_cast<int>(i));
      }
  Tensor<double, 4> r({n, n, n, n});
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
          const double a = dG(l, j, k, i) - dG(l, i, k, j);
          double c = 0.0, d = 0.0;
          for (std::size_t m = 0; m < n; ++m) {
            c += G(l, i, m) * G(m, j, k);
            d += G(l, j, m) * G(m, i, k);
          }
          const double v = a + (c - d);
          r(l, k, i, j) = v;
          r(l, k, j, i) = -v;
        }
  return r;
}

double CurvaturePack::inner(std::span<const double> x, std::span<const double> y) const {
  return metric_dot<double>(g, x, y);
}

Matrix<double> CurvaturePack::curvature_operator(std::span<const double> x,
                                                 std::span<const double> y) const {
  const std::size_t n = dim();
  Matrix<double> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double w = x[i] * y[j] - x[j] * y[i];
      if (w == 0.0) continue;
      for (std::size_t l = 0; l < n; ++l)
        for (std::size_t k = 0; k < n; ++k) out(l, k) += riemann(l, k, i, j) * w;
    }
  return out;
}

Vec CurvaturePack::curvature(std::span<const double> x, std::span<const double> y,
                             std::span<const double> z) const {
  return act(curvature_operator(x, y), z);
}

double CurvaturePack::lowered(std::size_t l, std::size_t k, std::size_t i, std::size_t j) const {
  double s = 0.0;
  for (std::size_t m = 0; m < dim(); ++m) s += g(l, m) * riemann(m, k, i, j);
  return s;
}

CurvaturePack riemann(const ChartManifold& m, std::span<const double> p, int order) {
  return ChartJets(m, p, std::max(order, 2)).curvature();
}

Tensor<double, 3> christoffel(const ChartManifold& m, std::span<const double> p) {
  ChartJets cj(m, p, 1);
  const std::size_t n = m.dim();
  Tensor<double, 3> out({n, n, n});
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) out(k, i, j) = cj.christoffel()(k, i, j).value();
  return out;
}

std::vector<Jet> evaluate_field(std::span<const Expr> components, std::span<const Jet> coords) {
  std::vector<Jet> out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(evaluate(c, coords));
  return out;
}

Vec evaluate_field(std::span<const Expr> components, std::span<const double> coords) {
  Vec out;
  out.reserve(components.size());
  for (const auto& c : components) out.push_back(evaluate(c, coords));
  return out;
}

Matrix<Jet> evaluate_tensor(const TensorField11& t, std::span<const Jet> coords) {
  Matrix<Jet> out(t.dim, t.dim);
  for (std::size_t k = 0; k < t.dim; ++k)
    for (std::size_t j = 0; j < t.dim; ++j) out(k, j) = evaluate(t.at(k, j), coords);
  return out;
}

Matrix<double> evaluate_tensor(const TensorField11& t, std::span<const double> coords) {
  Matrix<double> out(t.dim, t.dim);
  for (std::size_t k = 0; k < t.dim; ++k)
    for (std::size_t j = 0; j < t.dim; ++j) out(k, j) = evaluate(t.at(k, j), coords);
  return out;
}

Vec covariant_derivative(const ChartJets& cj, std::span<const double> x, std::span<const Jet> y) {
  const std::size_t n = cj.dim();
  const auto& gamma = cj.christoffel();
  Vec out(n, 0.0);
  for (std::size_t k = 0; k < n; ++k) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      if (x[i] == 0.0) continue;
      double t = y[k].d(static_cast<int>(i));
      for (std::size_t j = 0; j < n; ++j) t += gamma(k, i, j).value() * y[j].value();
      s += x[i] * t;
    }
    out[k] = s;
  }
  return out;
}

Vec covariant_derivative(const ChartManifold& m, const VectorFieldC& x, const VectorFieldC& y,
                         std::span<const double> p, int order) {
  ChartJets cj(m, p, std::max(order, 1));
  const Vec xv = evaluate_field(x.components, p);
  const auto yj = evaluate_field(y.components, cj.coords());
  return covariant_derivative(cj, xv, yj);
}

Tensor<double, 3> covariant_derivative(const ChartJets& cj, const Matrix<Jet>& t) {
  const std::size_t n = cj.dim();
  const auto& gamma = cj.christoffel();
  Matrix<double> tv = values(t);
  Tensor<double, 3> out({n, n, n});
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) {
        double s = t(k, j).d(static_cast<int>(i));
        for (std::size_t m = 0; m < n; ++m)
          s += gamma(k, i, m).value() * tv(m, j) - gamma(m, i, j).value() * tv(k, m);
        out(i, k, j) = s;
      }
  return out;
}

Vec apply_nabla(const Tensor<double, 3>& nabla_t, std::span<const double> x,
                std::span<const double> y) {
  const std::size_t n = nabla_t.extent(0);
  Vec out(n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    if (x[i] == 0.0) continue;
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) out[k] += x[i] * nabla_t(i, k, j) * y[j];
  }
  return out;
}

std::vector<Jet> lie_bracket(std::span<const Jet> x, std::span<const Jet> y) {
  const std::size_t n = x.size();
  std::vector<Jet> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    Jet s;
    for (std::size_t i = 0; i < n; ++i) {
      const int v = static_cast<int>(i);
      if (!y[k].is_constant() && !(x[i].is_constant() && x[i].value() == 0.0))
        s += x[i] * y[k].derivative(v);
      if (!x[k].is_constant() && !(y[i].is_constant() && y[i].value() == 0.0))
        s -= y[i] * x[k].derivative(v);
    }
    out[k] = std::move(s);
  }
  return out;
}

Vec lie_bracket(const Chart& chart, const VectorFieldC& x, const VectorFieldC& y,
                std::span<const double> p, int order) {
  if (p.size() != chart.dim()) throw InvalidArgument("point dimension does not match the chart");
  const auto coords = Jet::seed_all(p, std::max(order, 1));
  return values(lie_bracket(evaluate_field(x.components, coords),
                            evaluate_field(y.components, coords)));
}

std::vector<Jet> act(const Matrix<Jet>& m, std::span<const Jet> v) { return mat_vec(m, v); }

Vec act(const Matrix<double>& m, std::span<const double> v) { return mat_vec(m, v); }

Vec nijenhuis(const Matrix<Jet>& t, std::span<const Jet> x, std::span<const Jet> y) {
  const Matrix<double> tv = values(t);
  const auto tx = act(t, x);
  const auto ty = act(t, y);
  const Vec xy = values(lie_bracket(x, y));
  const Vec txty = values(lie_bracket(tx, ty));
  const Vec txy = values(lie_bracket(tx, y));
  const Vec xty = values(lie_bracket(x, ty));
  Vec out = act(tv, act(tv, xy));
  out = add(out, txty);
  out = sub(out, act(tv, txy));
  out = sub(out, act(tv, xty));
  return out;
}

}  // namespace gkv
