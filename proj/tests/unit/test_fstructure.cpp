#include <gtest/gtest.h>

#include <cmath>

#include "fd.hpp"
#include "gkv/error.hpp"
#include "gkv/fstructure.hpp"
#include "gkv/sampling.hpp"
#include "gkv/specfile.hpp"
#include "gkv/zoo.hpp"

using namespace gkv;

namespace {

RunOptions quick(std::size_t points = 20) {
  RunOptions o;
  o.points = points;
  o.seed = 5;
  return o;
}

std::shared_ptr<const FStructure> load(const std::string& file) {
  return load_target_file(std::string(GKV_TEST_DATA_DIR) + "/" + file).structure;
}

// phi = J on (x, y), xi = d_z, over a chosen metric.
std::shared_ptr<const FStructure> r3_structure(const std::string& gxx, const char* phi_xx = "0") {
  Chart c{"r3", {"x", "y", "z"}, {}, {{-1, 1}, {-1, 1}, {-0.5, 0.5}}};
  const Expr zero = Expr::number(0.0), one = Expr::number(1.0);
  std::vector<std::vector<Expr>> g = {
      {parse(gxx), zero, zero}, {zero, parse(gxx), zero}, {zero, zero, one}};
  TensorField11 phi(3);
  for (auto& e : phi.components) e = zero;
  phi.at(0, 0) = parse(phi_xx);
  phi.at(1, 0) = one;
  phi.at(0, 1) = Expr::number(-1.0);
  return std::make_shared<FStructure>(ChartManifold(c, g), 1, 1, phi,
                                      std::vector<VectorFieldC>{{{zero, zero, one}}},
                                      std::vector<CovectorFieldC>{{{zero, zero, one}}});
}

}  // namespace

TEST(Example1, MetricAtOriginFromTheDefiningFunctions) {
  // f1(0) = c2 and f2(0) = c1, so g(d_x1, d_x1) = 1 / (c1^2 + c2^2) there
  const Vec origin(7, 0.0);
  EXPECT_DOUBLE_EQ(metric_at(example1(1, 1)->base(), origin).g(0, 0), 0.5);
  EXPECT_NEAR(metric_at(example1(2, 3)->base(), origin).g(0, 0), 1.0 / 13.0, 1e-15);
  EXPECT_NEAR(metric_at(example1(2, 3)->base(), origin).g(4, 4), 1.0, 1e-15);
}

TEST(Example1, PhiKillsXiAndEtaIsDual) {
  const auto fs = example1();
  const Vec p = {0.1, -0.2, 0.3, 0.05, 0.2, -0.1, 0.4};
  const StructureJets sj(*fs, p, 1);
  const Vec phi_z1 = sj.phi_of(unit_vector(7, 4));
  for (double v : phi_z1) EXPECT_EQ(v, 0.0);
  EXPECT_DOUBLE_EQ(sj.eta_of(0, sj.xi_v[0]), 1.0);
  EXPECT_DOUBLE_EQ(sj.eta_of(0, sj.xi_v[1]), 0.0);
  EXPECT_DOUBLE_EQ(sj.eta_of(2, sj.xi_v[2]), 1.0);
  EXPECT_EQ(fs->n(), 2);
  EXPECT_EQ(fs->s(), 3);
}

TEST(Example1, PhiMapsFrameAsDefined) {
  const auto fs = example1(1.5, -0.7);
  const Vec p = {0.2, 0.1, -0.3, 0.4, 0.1, 0.2, -0.2};
  const Matrix<double> phi = evaluate_tensor(fs->phi(), p);
  std::map<std::string, Vec> e;
  for (const auto& [name, f] : fs->frame()) e[name] = evaluate_field(f.components, p);
  auto expect_eq = [](const Vec& a, const Vec& b) {
    for (std::size_t k = 0; k < a.size(); ++k) EXPECT_NEAR(a[k], b[k], 1e-14);
  };
  expect_eq(act(phi, e.at("e1")), e.at("e2"));
  expect_eq(act(phi, e.at("e2")), scaled(-1.0, e.at("e1")));
  expect_eq(act(phi, e.at("e3")), e.at("e4"));
  expect_eq(act(phi, e.at("e4")), scaled(-1.0, e.at("e3")));
}

TEST(Example1, AllStructureChecksPassForOtherConstants) {
  const auto fs = example1(2.0, -0.5);
  for (const auto& r : {check_axioms(*fs, quick()), check_gak(*fs, quick()),
                        check_kenmotsu_nabla_phi(*fs, quick()),
                        check_xi_and_curvature(*fs, quick()), check_normality(*fs, quick())})
    EXPECT_TRUE(r.passed()) << format_text(r);
}

TEST(Example1, NormalityIsReportedNotRequired) {
  const auto r = check_normality(*example1(), quick());
  EXPECT_FALSE(example1()->normality_required());
  EXPECT_EQ(r.find("normality.tensor")->status, Status::informational);
  EXPECT_LT(*r.find("normality.max_norm")->value, 1e-12);
}

TEST(Example1, JetDerivativesMatchDifferences) {
  const auto fs = example1();
  for (const Vec& p : sample_points(fs->base().chart().sample_box, 5, 17)) {
    EXPECT_LE(gkv::testing::structure_derivatives(*fs, p).worst, gkv::testing::kFdRelTol);
    EXPECT_LE(gkv::testing::riemann_derivatives(fs->base(), p).worst, gkv::testing::kFdRelTol);
  }
}

TEST(Example1, RejectsZeroConstants) {
  EXPECT_THROW((void)example1(0.0, 1.0), InvalidArgument);
  EXPECT_THROW((void)example1(1.0, 0.0), InvalidArgument);
  EXPECT_THROW((void)example2(0.0, 1.0), InvalidArgument);
}

TEST(Structure, WarpedKenmotsuFromFilePassesEverything) {
  const auto fs = load("kenmotsu3.json");
  for (const auto& r : {check_axioms(*fs, quick()), check_gak(*fs, quick()),
                        check_kenmotsu_nabla_phi(*fs, quick()),
                        check_xi_and_curvature(*fs, quick()), check_normality(*fs, quick())})
    EXPECT_TRUE(r.passed()) << format_text(r);
  EXPECT_TRUE(fs->normality_required());
}

TEST(Structure, CosymplecticIsNotKenmotsu) {
  const auto fs = r3_structure("1");
  EXPECT_TRUE(check_axioms(*fs, quick()).passed());
  const auto gak = check_gak(*fs, quick());
  EXPECT_EQ(gak.find("gak.eta_closed")->status, Status::pass);
  EXPECT_EQ(gak.find("gak.dPhi")->status, Status::fail);
  EXPECT_FALSE(check_kenmotsu_nabla_phi(*fs, quick()).passed());
  EXPECT_FALSE(check_xi_and_curvature(*fs, quick()).passed());
}

TEST(Structure, BrokenPhiFailsTheAxioms) {
  const auto fs = r3_structure("exp(2 * z)", "0.3");
  const auto r = check_axioms(*fs, quick());
  EXPECT_FALSE(r.passed());
  EXPECT_EQ(r.find("axioms.phi_squared")->status, Status::fail);
}

TEST(Structure, EuclideanTrivialStructureIsConsistent) {
  const auto fs = euclidean_structure(3);
  EXPECT_EQ(fs->s(), 3);
  EXPECT_TRUE(check_axioms(*fs, quick()).passed());
  EXPECT_TRUE(check_curvature_engine(fs->base(), quick()).passed());
}

TEST(Structure, ConstructorValidatesShapes) {
  Chart c{"r2", {"x", "y"}, {}, {{-1, 1}, {-1, 1}}};
  const Expr z = Expr::number(0.0), o = Expr::number(1.0);
  const ChartManifold m(c, {{o, z}, {z, o}});
  TensorField11 phi(2);
  for (auto& e : phi.components) e = z;
  EXPECT_THROW(FStructure(m, 1, 1, phi, {}, {}), InvalidArgument);
  EXPECT_THROW(FStructure(m, 0, 2, phi, {{{o, z}}}, {{{o, z}}}), InvalidArgument);
  EXPECT_THROW(FStructure(m, 0, 2, phi, {{{o}}, {{z, o}}}, {{{o, z}}, {{z, o}}}),
               InvalidArgument);
}

TEST(Structure, ProbeSetHasBasisExtrasAndRandoms) {
  const auto probes = probe_set({"x", "y"}, {{"extra", {1.0, 1.0}}}, 3, 9);
  ASSERT_EQ(probes.size(), 6u);
  EXPECT_EQ(probes[0].v, unit_vector(2, 0));
  EXPECT_EQ(probes[2].name, "extra");
  EXPECT_EQ(probes[3].v, probe_set({"x", "y"}, {{"extra", {1.0, 1.0}}}, 3, 9)[3].v);
}
