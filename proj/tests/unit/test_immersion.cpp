#include <gtest/gtest.h>

#include <cmath>

#include "fd.hpp"
#include "gkv/error.hpp"
#include "gkv/immersion.hpp"
#include "gkv/sampling.hpp"
#include "gkv/subman.hpp"
#include "gkv/zoo.hpp"

using namespace gkv;
using gkv::testing::central_diff;

namespace {

std::shared_ptr<const Immersion> make_immersion(const std::string& name,
                                                std::vector<std::string> coords,
                                                std::vector<Interval> box, ParamTable params,
                                                std::shared_ptr<const FStructure> target,
                                                const std::vector<std::string>& map) {
  Chart c{name, std::move(coords), std::move(params), std::move(box)};
  std::vector<Expr> m;
  for (const auto& t : map) m.push_back(parse(t));
  return std::make_shared<Immersion>(name, c, std::move(target), m);
}

// Cylinder of radius r around the z axis.
std::shared_ptr<const Immersion> cylinder(double r) {
  return make_immersion("cylinder", {"t", "h"}, {{-3.0, 3.0}, {-1.0, 1.0}}, {{"r", r}},
                        euclidean_structure(3), {"r * cos(t)", "r * sin(t)", "h"});
}

// Frame-independent ambient form of (Rbar(d_c, d_d) h)(d_a, d_b), by the
// Ricci identity applied to differenced nabla h.
Vec rbar_h_by_differences(const Immersion& imm, const Vec& p, std::size_t c, std::size_t d,
                          std::size_t a, std::size_t b) {
  const std::size_t m = imm.dim();
  const InducedGeometry geo = induce(imm, p);
  auto T = [&](const InducedGeometry& g, std::size_t i, std::size_t j, std::size_t k) {
    return g.from_frame(g.nabla_h_of(unit_vector(m, i), unit_vector(m, j), unit_vector(m, k)));
  };
  auto second = [&](std::size_t x, std::size_t y) {
    const Vec dT = central_diff([&](const Vec& q) { return T(induce(imm, q), y, a, b); }, p, x);
    Vec v = dT;
    const Vec Ty = T(geo, y, a, b);
    const auto& Gb = geo.ambient.christoffel;
    for (std::size_t A = 0; A < geo.dim; ++A)
      for (std::size_t B = 0; B < geo.dim; ++B)
        for (std::size_t C = 0; C < geo.dim; ++C)
          v[A] += Gb(A, B, C) * geo.tangent(B, x) * Ty[C];
    Vec out = geo.from_frame(geo.normal_part(v));
    for (std::size_t e = 0; e < m; ++e) {
      axpy(-geo.christoffel(e, x, y), T(geo, e, a, b), out);
      axpy(-geo.christoffel(e, x, a), T(geo, y, e, b), out);
      axpy(-geo.christoffel(e, x, b), T(geo, y, a, e), out);
    }
    return out;
  };
  return sub(second(c, d), second(d, c));
}

}  // namespace

TEST(Sphere, ShapeOperatorIsMinusIdentityOverRadius) {
  for (double r : {1.0, 2.0}) {
    const auto sph = sphere(r);
    for (const Vec& p : sample_points(sph->source().sample_box, 20, 1)) {
      const InducedGeometry geo = induce(*sph, p);
      const Vec N = geo.from_frame(Vec{1.0});
      const Vec nu = {geo.gbar(N, geo.ambient_point) > 0.0 ? 1.0 : -1.0};
      for (std::size_t a = 0; a < 2; ++a) {
        const Vec A = geo.shape_op(nu, unit_vector(2, a));
        EXPECT_NEAR(A[a], -1.0 / r, 1e-12);
        EXPECT_NEAR(A[1 - a], 0.0, 1e-12);
      }
    }
  }
}

TEST(Sphere, NormalCurvatureOfEveryDirectionIsInverseRadius) {
  for (double r : {1.0, 2.0}) {
    const auto sph = sphere(r);
    Rng rng(4);
    for (const Vec& p : sample_points(sph->source().sample_box, 20, 2)) {
      const InducedGeometry geo = induce(*sph, p);
      const Vec x = rng.direction(2);
      const double ratio = std::sqrt(geo.gbar(geo.h_ambient(x, x), geo.h_ambient(x, x))) /
                           geo.g(x, x);
      EXPECT_NEAR(ratio, 1.0 / r, 1e-12);
    }
  }
}

TEST(Sphere, GaussCurvatureAndFlatAmbient) {
  for (double r : {1.0, 2.0}) {
    const auto sph = sphere(r);
    for (const Vec& p : sample_points(sph->source().sample_box, 20, 3)) {
      const InducedGeometry geo = induce(*sph, p);
      const Vec x = {1.0, 0.0}, y = {0.0, 1.0};
      const double area = geo.g(x, x) * geo.g(y, y) - geo.g(x, y) * geo.g(x, y);
      EXPECT_NEAR(geo.g(geo.curvature(x, y, y), x) / area, 1.0 / (r * r), 1e-10);
      EXPECT_LT(norm_inf(geo.ambient.riemann.data()), 1e-12);
    }
  }
}

TEST(Sphere, RbarDotHMatchesRicciIdentityOracle) {
  const auto sph = sphere(1.5);
  for (const Vec& p : sample_points(sph->source().sample_box, 3, 4)) {
    const InducedGeometry geo = induce(*sph, p);
    for (std::size_t a = 0; a < 2; ++a)
      for (std::size_t b = 0; b < 2; ++b) {
        const Vec jet =
            geo.from_frame(rbar_dot_h(geo, unit_vector(2, 0), unit_vector(2, 1),
                                      unit_vector(2, a), unit_vector(2, b))
                               .total);
        const Vec fd = rbar_h_by_differences(*sph, p, 0, 1, a, b);
        for (std::size_t k = 0; k < 3; ++k) EXPECT_LE(gkv::testing::rel_err(jet[k], fd[k]), 1e-6);
      }
  }
}

TEST(Graph, RbarDotHMatchesRicciIdentityOracle) {
  // nonzero on this fixture, unlike the sphere
  const auto g = holomorphic_graph();
  const Vec p = {0.2, -0.1, 0.3, 0.1, -0.2};
  const InducedGeometry geo = induce(*g, p);
  double largest = 0.0;
  for (std::size_t a = 0; a < 2; ++a)
    for (std::size_t b = 0; b < 2; ++b) {
      const Vec jet = geo.from_frame(
          rbar_dot_h(geo, unit_vector(5, 0), unit_vector(5, 1), unit_vector(5, a),
                     unit_vector(5, b))
              .total);
      const Vec fd = rbar_h_by_differences(*g, p, 0, 1, a, b);
      for (std::size_t k = 0; k < jet.size(); ++k) {
        EXPECT_LE(gkv::testing::rel_err(jet[k], fd[k]), 1e-6);
        largest = std::max(largest, std::abs(fd[k]));
      }
    }
  EXPECT_GT(largest, 0.1);
}

TEST(Immersion, JetDataMatchesDifferences) {
  const std::vector<std::shared_ptr<const Immersion>> cases = {sphere(1.0), cylinder(0.7),
                                                               example2(), holomorphic_graph()};
  for (const auto& imm : cases)
    for (const Vec& p : sample_points(imm->source().sample_box, 3, 8))
      EXPECT_LE(gkv::testing::immersion_derivatives(*imm, p).worst, gkv::testing::kFdRelTol)
          << imm->name();
}

TEST(Immersion, CylinderIsFlatButCurvedInSpace) {
  const auto cyl = cylinder(0.7);
  const InducedGeometry geo = induce(*cyl, Vec{0.4, 0.2});
  EXPECT_LT(norm_inf(geo.riemann->data()), 1e-12);
  const Vec ht = geo.h_frame(Vec{1.0, 0.0}, Vec{1.0, 0.0});
  EXPECT_NEAR(std::abs(ht[0]), 0.7, 1e-12);  // |h(d_t, d_t)| = r for |d_t| = r
  const Vec hz = geo.h_frame(Vec{0.0, 1.0}, Vec{0.0, 1.0});
  EXPECT_NEAR(hz[0], 0.0, 1e-14);
  EXPECT_TRUE(check_induced(*cyl, RunOptions{20, 1, 1e-8, 3, 0}).passed());
}

TEST(Immersion, EuclideanSliceIsTotallyGeodesicAndFlat) {
  const auto plane = make_immersion("plane", {"a", "b"}, {{-1, 1}, {-1, 1}}, {},
                                    euclidean_structure(3), {"a", "b", "0"});
  for (const Vec& p : sample_points(plane->source().sample_box, 10, 2)) {
    const InducedGeometry geo = induce(*plane, p);
    EXPECT_EQ(norm_inf(geo.h.data()), 0.0);
    EXPECT_LT(norm_inf(geo.riemann->data()), 1e-12);
  }
}

TEST(Immersion, IdentityImmersionHasNoSecondFundamentalForm) {
  const auto id = identity_immersion(example1());
  EXPECT_EQ(id->codim(), 0u);
  const Vec p = {0.1, 0.2, -0.1, 0.3, 0.2, -0.2, 0.1};
  const InducedGeometry geo = induce(*id, p);
  EXPECT_EQ(geo.q, 0u);
  const CurvaturePack amb = riemann(example1()->base(), p);
  for (std::size_t k = 0; k < amb.riemann.data().size(); ++k)
    EXPECT_NEAR(geo.riemann->data()[k], amb.riemann.data()[k], 1e-11);
  for (std::size_t k = 0; k < amb.christoffel.data().size(); ++k)
    EXPECT_NEAR(geo.christoffel.data()[k], amb.christoffel.data()[k], 1e-13);
}

TEST(Immersion, NormalFrameMixingDoesNotChangeFrameFreeQuantities) {
  const auto g = holomorphic_graph();
  const Vec p = {0.1, 0.3, -0.2, 0.2, 0.1};
  const InducedGeometry a = induce(*g, p);
  const InducedGeometry b = induce(*g, p, {.order = 3, .normal_mixing_seed = 99});
  double moved = 0.0;
  for (std::size_t k = 0; k < a.normal.data().size(); ++k)
    moved = std::max(moved, std::abs(a.normal.data()[k] - b.normal.data()[k]));
  EXPECT_GT(moved, 1e-3);
  Rng rng(6);
  for (int trial = 0; trial < 5; ++trial) {
    const Vec x = rng.direction(5), y = rng.direction(5), z = rng.direction(5),
              u = rng.direction(5);
    auto close = [](const Vec& l, const Vec& r) {
      for (std::size_t k = 0; k < l.size(); ++k) EXPECT_NEAR(l[k], r[k], 1e-9);
    };
    close(a.h_ambient(x, y), b.h_ambient(x, y));
    close(a.from_frame(a.nabla_h_of(x, y, z)), b.from_frame(b.nabla_h_of(x, y, z)));
    close(a.from_frame(rbar_dot_h(a, x, y, z, u).total),
          b.from_frame(rbar_dot_h(b, x, y, z, u).total));
    close(a.from_frame(rbar_dot_nabla_h(a, x, y, z, u, x)),
          b.from_frame(rbar_dot_nabla_h(b, x, y, z, u, x)));
    const Vec nu = b.normal_part(a.h_ambient(x, y));
    close(a.shape_op(a.normal_part(b.from_frame(nu)), z), b.shape_op(nu, z));
  }
}

TEST(Immersion, OrderTwoRefusesCurvature) {
  const auto g = holomorphic_graph();
  const Vec p(5, 0.1);
  const InducedGeometry geo = induce(*g, p, {.order = 2});
  const Vec e = unit_vector(5, 0);
  EXPECT_FALSE(geo.riemann.has_value());
  EXPECT_THROW((void)geo.curvature(e, e, e), InsufficientOrderError);
  EXPECT_THROW((void)rbar_dot_h(geo, e, e, e, e), InsufficientOrderError);
  EXPECT_THROW((void)rbar_dot_nabla_h(geo, e, e, e, e, e), InsufficientOrderError);
  EXPECT_NO_THROW((void)geo.h_frame(e, e));
  EXPECT_THROW((void)induce(*g, p, {.order = 1}), InsufficientOrderError);
}

TEST(Immersion, RankDeficientMapIsRejected) {
  const auto fold = make_immersion("fold", {"a", "b"}, {{-1, 1}, {-1, 1}}, {},
                                   euclidean_structure(3), {"a", "a", "0"});
  EXPECT_THROW((void)induce(*fold, Vec{0.1, 0.2}), RankDeficiencyError);
  EXPECT_THROW(make_immersion("short", {"a"}, {{-1, 1}}, {}, euclidean_structure(3), {"a", "0"}),
               InvalidArgument);
}
