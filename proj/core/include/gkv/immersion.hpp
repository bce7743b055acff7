#pragma once

// Immersions into a chart carrying an f-structure, and the geometry they
// induce at a point: tangent and normal frames, second fundamental form,
// shape operators, normal connection, induced and normal curvature, and
// the covariant derivative of h.
//
// Source vectors are given by components in the source coordinate basis;
// ambient vectors by components in the ambient coordinate basis; normal
// vectors either in the orthonormal normal frame ("frame components") or
// as ambient vectors.

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "gkv/chart.hpp"
#include "gkv/fstructure.hpp"

namespace gkv {

class Immersion {
 public:
  // `map` holds one expression per ambient coordinate, in source coordinates.
  Immersion(std::string name, Chart source, std::shared_ptr<const FStructure> target,
            std::vector<Expr> map);

  const std::string& name() const noexcept { return name_; }
  const Chart& source() const noexcept { return source_; }
  const FStructure& target() const noexcept { return *target_; }
  const std::shared_ptr<const FStructure>& target_ptr() const noexcept { return target_; }
  const std::vector<Expr>& map() const noexcept { return map_; }
  std::size_t dim() const noexcept { return source_.dim(); }
  std::size_t ambient_dim() const noexcept { return target_->dim(); }
  std::size_t codim() const noexcept { return ambient_dim() - dim(); }

 private:
  std::string name_;
  Chart source_;
  std::shared_ptr<const FStructure> target_;
  std::vector<Expr> map_;
};

inline constexpr double kRankThreshold = 1e-10;

struct InduceOptions {
  int order = 3;
  // When set, the normal frame is replaced by a seeded random orthogonal
  // mixture of itself.
  std::optional<std::uint64_t> normal_mixing_seed;
  // Ambient axes to orthogonalize against the tangent space, in order.  By
  // default the axis with the largest normal component is taken each step;
  // pinning the choice keeps the frame smooth across nearby points.
  std::optional<std::vector<std::size_t>> normal_pivots;
};

struct InducedGeometry {
  std::size_t m = 0;    // source dimension
  std::size_t dim = 0;  // ambient dimension
  std::size_t q = 0;    // codimension
  int order = 0;
  Vec point;
  Vec ambient_point;
  double min_singular_value = 0.0;

  Matrix<double> tangent;         // dim x m, column a = push of d_a
  Matrix<double> normal;          // dim x q, column alpha = N_alpha
  std::vector<std::size_t> normal_pivots;
  Matrix<double> metric;          // induced g_ab
  Matrix<double> metric_inv;

  Tensor<double, 3> h;            // (alpha, a, b): gbar(h(d_a, d_b), N_alpha)
  Tensor<double, 3> shape;        // (alpha, a, b): g(A_alpha d_a, d_b), from gbar_X N
  Tensor<double, 3> christoffel;  // (c, a, b), tangential projection of gbar_X Y
  Tensor<double, 3> christoffel_metric;  // (c, a, b), from the induced metric
  Tensor<double, 3> normal_connection;   // (beta, a, alpha): nabla-perp_a N_alpha = w N_beta

  std::optional<Tensor<double, 4>> riemann;           // (d, c, a, b) induced R^d_cab
  std::optional<Tensor<double, 4>> normal_curvature;  // (alpha, beta, a, b)
  std::optional<Tensor<double, 4>> nabla_h;           // (alpha, c, a, b): (nabla_c h)^alpha_ab

  CurvaturePack ambient;          // ambient metric data and curvature at F(p)
  Matrix<double> phi;             // ambient phi at F(p)
  std::vector<Vec> xi;            // ambient xi_i at F(p)
  std::vector<Vec> eta;           // ambient eta^i at F(p)
  Tensor<double, 3> nabla_xi_ambient;  // (i, A, B): (nabla-bar_B xi_i)^A at F(p)

  Matrix<double> phi_tangent;     // P^c_b: tangential part of phi(d_b)
  Matrix<double> phi_normal;      // (alpha, b): normal part of phi(d_b)
  Tensor<double, 3> nabla_phi_tangent;  // (a, c, b): (nabla_a P)^c_b
  std::vector<Vec> xi_tangent;    // source components of the tangential part of xi_i
  std::vector<Vec> xi_normal;     // frame components of the normal part of xi_i
  Tensor<double, 3> nabla_xi;     // (i, c, a): (nabla_a xi_i)^c, induced connection

  int s() const noexcept { return static_cast<int>(xi.size()); }

  // Source <-> ambient conversions.
  Vec push(std::span<const double> x) const;
  Vec tangential(std::span<const double> v) const;  // source components
  Vec normal_part(std::span<const double> v) const;  // frame components
  Vec from_frame(std::span<const double> nu) const;  // ambient vector

  double g(std::span<const double> x, std::span<const double> y) const;
  double gbar(std::span<const double> v, std::span<const double> w) const;

  // phi of a tangent vector, as source components (tangential part).
  Vec phi_t(std::span<const double> x) const { return act(phi_tangent, x); }
  double eta_t(int i, std::span<const double> x) const;

  Vec h_frame(std::span<const double> x, std::span<const double> y) const;
  Vec h_ambient(std::span<const double> x, std::span<const double> y) const {
    return from_frame(h_frame(x, y));
  }
  // A_nu X for a normal vector given by frame components.
  Vec shape_op(std::span<const double> nu, std::span<const double> x) const;
  // nabla_X xi_i (induced), source components.
  Vec nabla_xi_of(int i, std::span<const double> x) const;
  // (nabla_X P)Y, source components.
  Vec nabla_phi_of(std::span<const double> x, std::span<const double> y) const;

  // These need order >= 3 and throw InsufficientOrderError otherwise.
  Vec curvature(std::span<const double> x, std::span<const double> y,
                std::span<const double> z) const;
  Vec normal_curvature_of(std::span<const double> x, std::span<const double> y,
                          std::span<const double> nu) const;
  Vec nabla_h_of(std::span<const double> z, std::span<const double> u,
                 std::span<const double> v) const;

  // nabla-bar_X xi_i for a tangent X, as an ambient vector.
  Vec ambient_nabla_xi(int i, std::span<const double> x) const;

  // Ambient curvature on pushed-forward vectors, as an ambient vector.
  Vec ambient_curvature(std::span<const double> x, std::span<const double> y,
                        std::span<const double> z) const;
};

InducedGeometry induce(const Immersion& imm, std::span<const double> p,
                       const InduceOptions& opt = {});

// (Rbar(X,Y)h)(Z,U) = Rperp(X,Y)h(Z,U) - h(R(X,Y)Z,U) - h(Z,R(X,Y)U),
// with each term kept for inspection (frame components).
struct RbarH {
  Vec total;
  Vec normal_term;
  Vec z_term;
  Vec u_term;
};
RbarH rbar_dot_h(const InducedGeometry& geo, std::span<const double> x,
                 std::span<const double> y, std::span<const double> z,
                 std::span<const double> u);

// (Rbar(X,Y) nabla h)(Z,U,V), frame components.
Vec rbar_dot_nabla_h(const InducedGeometry& geo, std::span<const double> x,
                     std::span<const double> y, std::span<const double> z,
                     std::span<const double> u, std::span<const double> v);

}  // namespace gkv
