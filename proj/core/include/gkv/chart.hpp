#pragma once

// Coordinate-chart tensor calculus.  Everything is expressed in the
// coordinate basis; derivatives come from jets seeded at the point.
//
// Conventions:
//   christoffel(k, i, j) = Gamma^k_{ij}
//   riemann(l, k, i, j)  = R^l_{kij}, with R(X,Y)Z = R^l_{kij} Z^k X^i Y^j
//   and R(X,Y) = nabla_X nabla_Y - nabla_Y nabla_X - nabla_[X,Y].

#include <span>
#include <string>
#include <vector>

#include "gkv/expr.hpp"
#include "gkv/jet.hpp"
#include "gkv/linalg.hpp"
#include "gkv/tensor.hpp"

namespace gkv {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Coordinates, named constants and the box points are sampled from.
struct Chart {
  std::string name;
  std::vector<std::string> coords;
  ParamTable params;
  std::vector<Interval> sample_box;

  std::size_t dim() const noexcept { return coords.size(); }
  // Parses and binds an expression against this chart.
  Expr bind(std::string_view text) const;
  Expr bind(const Expr& expr) const;
  void validate() const;
};

// Vector field by upper-index coordinate components.
struct VectorFieldC {
  std::vector<Expr> components;
};

// Covector field (1-form) by lower-index components.
struct CovectorFieldC {
  std::vector<Expr> components;
};

// (1,1)-tensor field: component(k, j) is the k-th component of T(d_j).
struct TensorField11 {
  std::size_t dim = 0;
  std::vector<Expr> components;

  TensorField11() = default;
  explicit TensorField11(std::size_t n) : dim(n), components(n * n) {}
  Expr& at(std::size_t k, std::size_t j) { return components[k * dim + j]; }
  const Expr& at(std::size_t k, std::size_t j) const { return components[k * dim + j]; }
};

class ChartManifold {
 public:
  // `metric` is a full dim x dim array of lower-index components; the two
  // triangles must hold structurally identical expressions.
  ChartManifold(Chart chart, const std::vector<std::vector<Expr>>& metric);

  const Chart& chart() const noexcept { return chart_; }
  const std::string& name() const noexcept { return chart_.name; }
  std::size_t dim() const noexcept { return chart_.dim(); }
  const Expr& metric(std::size_t i, std::size_t j) const;

 private:
  Chart chart_;
  std::vector<Expr> metric_;  // packed upper triangle
};

std::string describe_point(std::span<const double> p);

inline constexpr double kMetricPivotThreshold = 1e-12;

struct MetricAt {
  Matrix<double> g;
  Matrix<double> g_inv;
};

// Field values and derivatives at a point.
struct CurvaturePack {
  Vec point;
  Matrix<double> g;
  Matrix<double> g_inv;
  Tensor<double, 3> christoffel;
  Tensor<double, 4> riemann;

  std::size_t dim() const noexcept { return point.size(); }
  double inner(std::span<const double> x, std::span<const double> y) const;
  // Matrix M with R(X,Y)Z = M Z, computed from the antisymmetric part so
  // that R(X,X) is exactly zero.
  Matrix<double> curvature_operator(std::span<const double> x, std::span<const double> y) const;
  Vec curvature(std::span<const double> x, std::span<const double> y,
                std::span<const double> z) const;
  // R_{lkij} = g_{lm} R^m_{kij}
  double lowered(std::size_t l, std::size_t k, std::size_t i, std::size_t j) const;
};

// Jet-valued metric data in a neighbourhood of a point.
class ChartJets {
 public:
  ChartJets(const ChartManifold& m, std::span<const double> p, int order);

  std::size_t dim() const noexcept { return point_.size(); }
  int order() const noexcept { return order_; }
  const Vec& point() const noexcept { return point_; }
  std::span<const Jet> coords() const noexcept { return coords_; }
  const Matrix<Jet>& metric() const noexcept { return g_; }
  const Matrix<Jet>& metric_inverse() const noexcept { return g_inv_; }
  // Gamma^k_{ij} as jets of one order lower than the metric.
  const Tensor<Jet, 3>& christoffel() const noexcept { return gamma_; }

  // Requires order >= 2.
  CurvaturePack curvature() const;

 private:
  Vec point_;
  int order_;
  std::vector<Jet> coords_;
  Matrix<Jet> g_, g_inv_;
  Tensor<Jet, 3> gamma_;
};

MetricAt metric_at(const ChartManifold& m, std::span<const double> p);
Tensor<double, 3> christoffel(const ChartManifold& m, std::span<const double> p);
CurvaturePack riemann(const ChartManifold& m, std::span<const double> p, int order = 2);

// Riemann tensor from jet Christoffel symbols (needs their first partials).
Tensor<double, 4> riemann_from_christoffel(const Tensor<Jet, 3>& gamma);

std::vector<Jet> evaluate_field(std::span<const Expr> components, std::span<const Jet> coords);
Vec evaluate_field(std::span<const Expr> components, std::span<const double> coords);
Matrix<Jet> evaluate_tensor(const TensorField11& t, std::span<const Jet> coords);
Matrix<double> evaluate_tensor(const TensorField11& t, std::span<const double> coords);

// (nabla_X Y)^k = X^i (d_i Y^k + Gamma^k_{ij} Y^j) at the base point.
Vec covariant_derivative(const ChartJets& cj, std::span<const double> x, std::span<const Jet> y);
Vec covariant_derivative(const ChartManifold& m, const VectorFieldC& x, const VectorFieldC& y,
                         std::span<const double> p, int order = 1);

// (nabla_i T)^k_j at the base point, indexed (i, k, j).
Tensor<double, 3> covariant_derivative(const ChartJets& cj, const Matrix<Jet>& t);
// (nabla_X T)Y for a tensor computed by the overload above.
Vec apply_nabla(const Tensor<double, 3>& nabla_t, std::span<const double> x,
                std::span<const double> y);

// [X,Y]^k = X^i d_i Y^k - Y^i d_i X^k, one order lower than the inputs.
std::vector<Jet> lie_bracket(std::span<const Jet> x, std::span<const Jet> y);
Vec lie_bracket(const Chart& chart, const VectorFieldC& x, const VectorFieldC& y,
                std::span<const double> p, int order = 1);

// Nijenhuis torsion [T,T](X,Y) = T^2[X,Y] + [TX,TY] - T[TX,Y] - T[X,TY]
// of jet-valued fields, evaluated at the base point.
Vec nijenhuis(const Matrix<Jet>& t, std::span<const Jet> x, std::span<const Jet> y);

std::vector<Jet> act(const Matrix<Jet>& m, std::span<const Jet> v);
Vec act(const Matrix<double>& m, std::span<const double> v);

}  // namespace gkv
