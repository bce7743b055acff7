#include <gtest/gtest.h>

#include <set>

#include "gkv/error.hpp"
#include "gkv/specfile.hpp"
#include "gkv/suites.hpp"
#include "gkv/zoo.hpp"

using namespace gkv;
using nlohmann::json;

namespace {

std::string data(const std::string& file) { return std::string(GKV_TEST_DATA_DIR) + "/" + file; }

RunOptions quick(std::size_t points = 10) {
  RunOptions o;
  o.points = points;
  o.seed = 3;
  return o;
}

}  // namespace

TEST(Zoo, EntriesAreAddressableByName) {
  std::set<std::string> names;
  for (const auto& e : zoo_entries()) names.insert(e.name);
  for (const char* n : {"example1", "example2", "euclidean3", "sphere"})
    EXPECT_TRUE(names.count(n)) << n;
  for (const auto& n : names) {
    const Target t = zoo_target(n);
    EXPECT_EQ(t.name, n);
    ASSERT_TRUE(t.structure);
  }
}

TEST(Zoo, ParametersOverrideDefaults) {
  const Target t = zoo_target("example1", {{"c1", 2.0}});
  EXPECT_EQ(t.structure->base().chart().params.at("c1"), 2.0);
  EXPECT_EQ(t.structure->base().chart().params.at("c2"), 1.0);
  const Target s = zoo_target("sphere", {{"r", 3.0}});
  EXPECT_EQ(s.immersion->source().params.at("r"), 3.0);
}

TEST(Zoo, UnknownNamesAndParametersAreRejected) {
  EXPECT_THROW((void)zoo_target("nosuch"), InvalidArgument);
  EXPECT_THROW((void)zoo_target("example1", {{"c3", 1.0}}), InvalidArgument);
  EXPECT_THROW((void)zoo_target("sphere", {{"r", -1.0}}), InvalidArgument);
  EXPECT_THROW((void)euclidean(0), InvalidArgument);
  EXPECT_THROW((void)sphere(0.0), InvalidArgument);
}

TEST(Zoo, EuclideanChristoffelVanish) {
  const ChartManifold e = euclidean(3);
  EXPECT_EQ(e.chart().coords, (std::vector<std::string>{"x", "y", "z"}));
  const auto g = christoffel(e, Vec{0.3, -0.2, 0.9});
  for (double v : g.data()) EXPECT_EQ(v, 0.0);
}

TEST(Zoo, Example2PushesCoordinateFieldsToSliceDirections) {
  const auto ex2 = example2();
  const InducedGeometry geo = induce(*ex2, Vec{0.1, -0.3, 0.2, 0.05, -0.4});
  const std::size_t target_of[] = {0, 1, 4, 5, 6};
  for (std::size_t a = 0; a < 5; ++a) {
    const Vec v = geo.push(unit_vector(5, a));
    for (std::size_t A = 0; A < 7; ++A) EXPECT_EQ(v[A], A == target_of[a] ? 1.0 : 0.0);
  }
}

TEST(Zoo, SphereSamplingBoxAvoidsThePoles) {
  const auto s = sphere();
  const auto& box = s->source().sample_box;
  EXPECT_GE(box[0].lo, 0.1);
  EXPECT_LE(box[0].hi, 3.1415926535897931 - 0.1);
}

TEST(Specfile, LoadsStructureAndImmersionFiles) {
  const Target k = load_target_file(data("kenmotsu3.json"));
  EXPECT_EQ(k.name, "kenmotsu3");
  EXPECT_FALSE(k.immersion);
  EXPECT_EQ(k.structure->n(), 1);

  const Target slice = load_target_file(data("slice.json"));
  ASSERT_TRUE(slice.immersion);
  EXPECT_EQ(slice.immersion->target().base().chart().params.at("c1"), 2.0);
  EXPECT_TRUE(run_suite("submanifold", slice, quick()).passed());

  const Target plane = load_target_file(data("plane_in_kenmotsu3.json"));
  ASSERT_TRUE(plane.immersion);
  EXPECT_TRUE(check_induced(*plane.immersion, quick()).passed());
  EXPECT_FALSE(check_invariant(*plane.immersion, quick()).passed());
}

TEST(Specfile, ParameterOverridesReachTheDocument) {
  const Target k = load_target_file(data("kenmotsu3.json"), {{"k", 2.0}});
  EXPECT_EQ(k.structure->base().chart().params.at("k"), 2.0);
  EXPECT_THROW((void)load_target_file(data("kenmotsu3.json"), {{"nope", 1.0}}), SpecFileError);
  // exp(2kz)(dx^2 + dy^2) + dz^2 is Kenmotsu only for k = 1
  EXPECT_FALSE(run_suite("kenmotsu", k, quick()).passed());
}

TEST(Specfile, ResolveTriesZooThenFiles) {
  EXPECT_EQ(resolve_target("example1").name, "example1");
  EXPECT_EQ(resolve_target(data("cosymplectic3.json")).name, "cosymplectic3");
  EXPECT_THROW((void)resolve_target("nosuch"), InvalidArgument);
}

TEST(Specfile, ErrorsNameTheLocation) {
  try {
    (void)load_target_file(data("bad_metric.json"));
    ADD_FAILURE();
  } catch (const SpecFileError& e) {
    EXPECT_NE(std::string(e.what()).find("symmetric"), std::string::npos) << e.what();
  }
  EXPECT_THROW((void)load_target_file(data("malformed.json")), SpecFileError);
  EXPECT_THROW((void)load_target_file(data("does_not_exist.json")), SpecFileError);

  json doc = json::parse(R"({"coords": ["x"], "sample_box": [[0, 1]], "n": 0, "s": 1,
                            "metric": ["1"], "phi": [["0"]], "xi": [["1"]],
                            "eta": [["1 +"]]})");
  try {
    (void)structure_from_json(doc);
    ADD_FAILURE();
  } catch (const SpecFileError& e) {
    EXPECT_NE(std::string(e.what()).find("eta[0]"), std::string::npos) << e.what();
  }
  doc["eta"] = json::array({json::array({"1"})});
  EXPECT_NO_THROW((void)structure_from_json(doc));
  doc.erase("n");
  EXPECT_THROW((void)structure_from_json(doc), SpecFileError);
}

TEST(Specfile, FullMatrixAndDiagonalMetricsAgree) {
  const Target a = load_target_file(data("cosymplectic3.json"));
  json doc = json::parse(R"({"name": "diag", "coords": ["x", "y", "z"],
      "sample_box": [[-1, 1], [-1, 1], [-1, 1]], "n": 1, "s": 1,
      "metric": ["1", "1", "1"],
      "phi": [["0", "-1", "0"], ["1", "0", "0"], ["0", "0", "0"]],
      "xi": [["0", "0", "1"]], "eta": [["0", "0", "1"]]})");
  const auto b = structure_from_json(doc);
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t j = 0; j < 3; ++j)
      EXPECT_TRUE(a.structure->base().metric(i, j).structurally_equal(b->base().metric(i, j)));
}

TEST(Suites, DescribeListsFields) {
  const std::string text = describe_target(zoo_target("example2"));
  EXPECT_NE(text.find("immersion"), std::string::npos);
  EXPECT_NE(text.find("x1 = u"), std::string::npos);
  EXPECT_NE(text.find("xi1"), std::string::npos);
}

TEST(Suites, SubmanifoldSuiteNeedsAnImmersion) {
  EXPECT_THROW((void)run_suite("submanifold", zoo_target("example1"), quick()), InvalidArgument);
  EXPECT_THROW((void)run_suite("bogus", zoo_target("example1"), quick()), InvalidArgument);
}

TEST(Suites, NonInvariantTargetIsReportedNotSkippedSilently) {
  const CheckReport r = run_suite("submanifold", zoo_target("sphere"), quick());
  EXPECT_FALSE(r.passed());
  EXPECT_FALSE(r.notes.empty());
  EXPECT_EQ(r.find("s3.c.nabla_xi"), nullptr);
  EXPECT_NE(r.find("induced.gauss_equation"), nullptr);
}

TEST(Suites, ReportHeaderRecordsTheRun) {
  RunOptions o = quick(7);
  o.jet_order = 4;
  const CheckReport r = run_suite("kenmotsu", zoo_target("example1", {{"c2", 3.0}}), o);
  EXPECT_EQ(r.suite, "kenmotsu");
  EXPECT_EQ(r.target, "example1");
  EXPECT_EQ(r.params.at("c2"), 3.0);
  EXPECT_EQ(r.points, 7u);
  EXPECT_EQ(r.seed, 3u);
  EXPECT_EQ(r.jet_order, 4);
  EXPECT_TRUE(r.passed()) << format_text(r);
}
