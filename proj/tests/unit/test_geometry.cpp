#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

#include "fd.hpp"
#include "gkv/chart.hpp"
#include "gkv/error.hpp"
#include "gkv/forms.hpp"
#include "gkv/sampling.hpp"
#include "gkv/fstructure.hpp"

using namespace gkv;

namespace {

ChartManifold make_chart(std::vector<std::string> coords, ParamTable params,
                         std::vector<Interval> box,
                         const std::vector<std::vector<std::string>>& metric) {
  Chart c{"test", std::move(coords), std::move(params), std::move(box)};
  std::vector<std::vector<Expr>> g;
  for (const auto& row : metric) {
    g.emplace_back();
    for (const auto& t : row) g.back().push_back(parse(t));
  }
  return ChartManifold(c, g);
}

// Round 2-sphere of radius r in colatitude/longitude.
ChartManifold round_sphere(double r) {
  return make_chart({"t", "p"}, {{"r", r}}, {{0.2, 2.9}, {-3.0, 3.0}},
                    {{"r^2", "0"}, {"0", "r^2 * sin(t)^2"}});
}

ChartManifold half_plane() {
  return make_chart({"x", "y"}, {}, {{-1.0, 1.0}, {0.3, 2.0}},
                    {{"1 / y^2", "0"}, {"0", "1 / y^2"}});
}

double gauss_curvature(const ChartManifold& m, const Vec& p) {
  const CurvaturePack pack = riemann(m, p);
  return pack.lowered(0, 1, 0, 1) / determinant(pack.g);
}

}  // namespace

TEST(Chart, SphereChristoffelClosedForm) {
  const auto m = round_sphere(2.0);
  const Vec p = {0.8, 0.3};
  const auto g = christoffel(m, p);
  EXPECT_NEAR(g(0, 1, 1), -std::sin(0.8) * std::cos(0.8), 1e-14);
  EXPECT_NEAR(g(1, 0, 1), std::cos(0.8) / std::sin(0.8), 1e-14);
  EXPECT_NEAR(g(1, 1, 0), std::cos(0.8) / std::sin(0.8), 1e-14);
  EXPECT_NEAR(g(0, 0, 0), 0.0, 1e-15);
}

TEST(Chart, SphereGaussCurvatureIsInverseSquareRadius) {
  for (double r : {1.0, 2.0, 0.5}) {
    const auto m = round_sphere(r);
    for (const Vec& p : sample_points(m.chart().sample_box, 20, 9))
      EXPECT_NEAR(gauss_curvature(m, p), 1.0 / (r * r), 1e-10) << "r = " << r;
  }
}

TEST(Chart, HalfPlaneHasCurvatureMinusOne) {
  const auto m = half_plane();
  for (const Vec& p : sample_points(m.chart().sample_box, 20, 3))
    EXPECT_NEAR(gauss_curvature(m, p), -1.0, 1e-10);
}

TEST(Chart, CurvatureOperatorIsAntisymmetricInItsArguments) {
  const auto m = round_sphere(1.5);
  const CurvaturePack pack = riemann(m, Vec{1.0, 0.2});
  const Vec x = {0.3, -1.2}, y = {0.7, 0.4}, z = {1.0, 2.0};
  const Vec a = pack.curvature(x, y, z), b = pack.curvature(y, x, z);
  for (std::size_t k = 0; k < 2; ++k) EXPECT_NEAR(a[k], -b[k], 1e-13);
  const Vec zero = pack.curvature(x, x, z);
  for (double v : zero) EXPECT_EQ(v, 0.0);
}

TEST(Chart, DerivativesMatchDifferences) {
  for (const auto& m : {round_sphere(1.3), half_plane()}) {
    for (const Vec& p : sample_points(m.chart().sample_box, 10, 5)) {
      EXPECT_LE(gkv::testing::metric_derivatives(m, p).worst, gkv::testing::kFdRelTol);
      EXPECT_LE(gkv::testing::christoffel_derivatives(m, p).worst, gkv::testing::kFdRelTol);
      EXPECT_LE(gkv::testing::riemann_derivatives(m, p).worst, gkv::testing::kFdRelTol);
    }
  }
}

TEST(Chart, EngineChecksPassOnCurvedCharts) {
  RunOptions opt;
  opt.points = 20;
  for (const auto& m : {round_sphere(1.3), half_plane()}) {
    const CheckReport r = check_curvature_engine(m, opt);
    EXPECT_TRUE(r.passed()) << format_text(r);
  }
}

TEST(Chart, LieBracketOfRotationGenerators) {
  Chart c{"plane", {"x", "y"}, {}, {{-1, 1}, {-1, 1}}};
  const VectorFieldC X{{c.bind("0"), c.bind("x")}};
  const VectorFieldC Y{{c.bind("y"), c.bind("0")}};
  const Vec b = lie_bracket(c, X, Y, Vec{0.4, -0.9});
  EXPECT_NEAR(b[0], 0.4, 1e-15);
  EXPECT_NEAR(b[1], 0.9, 1e-15);
}

TEST(Chart, CovariantDerivativeInPolarCoordinates) {
  // flat plane in polar coordinates: nabla_{d_theta} d_r = (1/r) d_theta
  const auto m = make_chart({"r", "t"}, {}, {{0.5, 2.0}, {-3.0, 3.0}},
                            {{"1", "0"}, {"0", "r^2"}});
  const Chart& c = m.chart();
  const VectorFieldC dr{{c.bind("1"), c.bind("0")}};
  const VectorFieldC dt{{c.bind("0"), c.bind("1")}};
  const Vec v = covariant_derivative(m, dt, dr, Vec{1.7, 0.3});
  EXPECT_NEAR(v[0], 0.0, 1e-15);
  EXPECT_NEAR(v[1], 1.0 / 1.7, 1e-15);
  const CurvaturePack pack = riemann(m, Vec{1.7, 0.3});
  EXPECT_LT(norm_inf(pack.riemann.data()), 1e-14);
}

TEST(Chart, NijenhuisOfConstantComplexStructureVanishes) {
  const auto v = Jet::seed_all(Vec{0.1, 0.2}, 2);
  Matrix<Jet> J(2, 2);
  J(0, 1) = Jet(-1.0);
  J(1, 0) = Jet(1.0);
  const std::vector<Jet> x = {v[0] * v[1], sin(v[0])};
  const std::vector<Jet> y = {Jet(1.0), v[1] * v[1]};
  const Vec n = nijenhuis(J, x, y);
  EXPECT_NEAR(norm_inf(n), 0.0, 1e-15);
}

TEST(Chart, MetricValidation) {
  EXPECT_THROW(make_chart({"x", "y"}, {}, {{-1, 1}, {-1, 1}}, {{"1", "x"}, {"y", "1"}}),
               InvalidArgument);
  EXPECT_THROW(make_chart({"x", "x"}, {}, {{-1, 1}, {-1, 1}}, {{"1", "0"}, {"0", "1"}}),
               InvalidArgument);
  EXPECT_THROW(make_chart({"x"}, {}, {{1, -1}}, {{"1"}}), InvalidArgument);
  EXPECT_THROW(make_chart({"x"}, {}, {{-1, 1}}, {{"w"}}), ResolveError);
  const auto degenerate = make_chart({"x", "y"}, {}, {{-1, 1}, {-1, 1}}, {{"x^2", "0"}, {"0", "1"}});
  EXPECT_THROW((void)metric_at(degenerate, Vec{0.0, 0.3}), DegenerateMetricError);
  EXPECT_THROW((void)ChartJets(degenerate, Vec{0.5, 0.3}, 1).curvature(), InsufficientOrderError);
}

TEST(Forms, WedgeOfCoordinateFormsEvaluatesToDeterminant) {
  const Form<Jet> dx = one_form(std::vector<Jet>{Jet(1.0), Jet(0.0), Jet(0.0)});
  const Form<Jet> dy = one_form(std::vector<Jet>{Jet(0.0), Jet(1.0), Jet(0.0)});
  const Form<double> w = values(wedge(dx, dy));
  const std::vector<Vec> u = {{1.0, 2.0, 0.5}, {3.0, -1.0, 4.0}};
  EXPECT_DOUBLE_EQ(evaluate(w, u), 1.0 * -1.0 - 2.0 * 3.0);
  const Form<double> wr = values(wedge(dy, dx));
  EXPECT_DOUBLE_EQ(evaluate(wr, u), -evaluate(w, u));
}

TEST(Forms, ExteriorDerivativeOfOneFormMatchesDifferences) {
  // w = x y dz + sin(z) dx + exp(x) y^2 dy
  auto comps = [](std::span<const Jet> v) {
    return std::vector<Jet>{sin(v[2]), exp(v[0]) * v[1] * v[1], v[0] * v[1]};
  };
  const Vec p = {0.3, -0.4, 0.9};
  const auto v = Jet::seed_all(p, 1);
  const Form<double> dw = values(exterior_derivative(one_form(comps(v))));
  auto comp_values = [&](const Vec& q) {
    const auto c = comps(Jet::seed_all(q, 0));
    return Vec{c[0].value(), c[1].value(), c[2].value()};
  };
  std::vector<Vec> d(3);
  for (int i = 0; i < 3; ++i) d[i] = gkv::testing::central_diff(comp_values, p, i);
  // (dw)_ij = d_i w_j - d_j w_i
  for (int i = 0; i < 3; ++i)
    for (int j = i + 1; j < 3; ++j)
      EXPECT_LE(gkv::testing::rel_err(dw[(1u << i) | (1u << j)], d[i][j] - d[j][i]), 1e-6);
}

TEST(Forms, DSquaredIsZero) {
  const auto v = Jet::seed_all(Vec{0.2, 0.5, -0.3, 0.8}, 3);
  const Form<Jet> w = one_form(
      std::vector<Jet>{v[1] * v[2], sin(v[0] * v[3]), exp(v[1]) * v[0], v[2] * v[2] * v[1]});
  const Form<double> dd = values(exterior_derivative(exterior_derivative(w)));
  for (unsigned m : dd.masks()) EXPECT_NEAR(dd[m], 0.0, 1e-14);
}

TEST(Forms, ComponentSignFollowsIndexOrder) {
  Form<double> w(2, 3);
  w[0b011] = 2.5;
  const int fwd[] = {0, 1}, rev[] = {1, 0}, rep[] = {1, 1};
  EXPECT_EQ(w.component(fwd), 2.5);
  EXPECT_EQ(w.component(rev), -2.5);
  EXPECT_EQ(w.component(rep), 0.0);
  EXPECT_THROW(Form<double>(4, 3), InvalidArgument);
}
