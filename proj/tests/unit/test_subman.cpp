#include <gtest/gtest.h>

#include "gkv/error.hpp"
#include "gkv/subman.hpp"
#include "gkv/zoo.hpp"

using namespace gkv;

namespace {

RunOptions quick(std::size_t points = 10) {
  RunOptions o;
  o.points = points;
  o.seed = 13;
  return o;
}

std::string verdict(const CheckReport& r, const std::string& name) {
  for (const auto& [k, v] : r.verdicts)
    if (k == name) return v;
  return "";
}

double value(const CheckReport& r, const std::string& id) {
  const IdentityRecord* rec = r.find(id);
  if (!rec) throw std::runtime_error("missing record " + id);
  return rec->value ? *rec->value : rec->max_residual;
}

}  // namespace

TEST(Verdict, AgreementIsConsistent) {
  EXPECT_EQ(semiparallel_verdict(0.0, 0.0, 1e-9), kTotallyGeodesicConsistent);
  EXPECT_EQ(semiparallel_verdict(1.0, 1.0, 1e-9), kTotallyGeodesicConsistent);
  EXPECT_EQ(semiparallel_verdict(1.0, 0.0, 1e-9), kTheoremViolationSuspect);
  EXPECT_EQ(semiparallel_verdict(0.0, 1.0, 1e-9), kTheoremViolationSuspect);
}

TEST(Example2, SliceIsInvariantAndTotallyGeodesic) {
  const auto ex2 = example2();
  for (const auto& r : {check_invariant(*ex2, quick()), check_induced(*ex2, quick()),
                        check_section3(*ex2, quick()), check_section4(*ex2, quick())})
    EXPECT_TRUE(r.passed()) << format_text(r);
  EXPECT_LT(value(check_section3(*ex2, quick()), "s3.h_max"), 1e-9);
  const CheckReport s4 = check_section4(*ex2, quick());
  EXPECT_LT(value(s4, "s4.h_max"), 1e-9);
  EXPECT_EQ(verdict(s4, "semiparallel"), kTotallyGeodesicConsistent);
  EXPECT_EQ(verdict(s4, "2-semiparallel"), kTotallyGeodesicConsistent);
}

TEST(Graph, CurvedInvariantSubmanifoldIsNotSemiparallel) {
  const auto g = holomorphic_graph();
  const CheckReport s3 = check_section3(*g, quick(6));
  EXPECT_TRUE(s3.passed()) << format_text(s3);
  const CheckReport s4 = check_section4(*g, quick(6));
  EXPECT_TRUE(s4.passed()) << format_text(s4);
  EXPECT_GT(value(s4, "s4.h_max"), 0.1);
  EXPECT_GT(value(s4, "s4.rbar_h_max"), 1e-8);
  EXPECT_GT(value(s4, "s4.rbar_nabla_h_max"), 1e-8);
  EXPECT_EQ(verdict(s4, "semiparallel"), kTotallyGeodesicConsistent);
  EXPECT_EQ(verdict(s4, "2-semiparallel"), kTotallyGeodesicConsistent);
}

TEST(Preconditions, SphereIsNotInvariant) {
  const auto s = sphere();
  EXPECT_FALSE(check_invariant(*s, quick()).passed());
  EXPECT_THROW((void)check_section3(*s, quick()), PreconditionError);
  EXPECT_THROW((void)check_section4(*s, quick()), PreconditionError);
}

TEST(Preconditions, CurvatureChecksNeedOrderThree) {
  RunOptions o = quick(3);
  o.jet_order = 2;
  EXPECT_THROW((void)check_section3(*example2(), o), InsufficientOrderError);
  EXPECT_THROW((void)check_section4(*example2(), o), InsufficientOrderError);
}

TEST(Graph, NormalMixingLeavesMaximaUnchanged) {
  const auto g = holomorphic_graph();
  const CheckReport a = check_section4(*g, quick(4));
  const CheckReport b = check_section4(*g, quick(4), {.normal_mixing_seed = 21});
  for (const char* id : {"s4.h_max", "s4.rbar_h_max", "s4.rbar_nabla_h_max"})
    EXPECT_NEAR(value(a, id), value(b, id), 1e-9 * std::max(1.0, value(a, id))) << id;
  EXPECT_EQ(a.verdicts, b.verdicts);
}
