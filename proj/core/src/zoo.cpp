#include "gkv/zoo.hpp"

#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "gkv/error.hpp"

namespace gkv {

namespace {

std::vector<Expr> parse_all(std::initializer_list<const char*> texts) {
  std::vector<Expr> out;
  for (const char* t : texts) out.push_back(parse(t));
  return out;
}

std::shared_ptr<const FStructure> build_example1(double c1, double c2) {
  Chart chart;
  chart.name = "example1";
  chart.coords = {"x1", "y1", "x2", "y2", "z1", "z2", "z3"};
  chart.params = {{"c1", c1}, {"c2", c2}};
  chart.sample_box.assign(7, Interval{-0.5, 0.5});

  const Expr f1 = parse("c2*exp(-(z1+z2+z3))*cos(z1+z2+z3) - c1*exp(-(z1+z2+z3))*sin(z1+z2+z3)");
  const Expr f2 = parse("c1*exp(-(z1+z2+z3))*cos(z1+z2+z3) + c2*exp(-(z1+z2+z3))*sin(z1+z2+z3)");
  const Expr F = f1 * f1 + f2 * f2;
  const Expr zero = Expr::number(0.0), one = Expr::number(1.0);

  std::vector<std::vector<Expr>> metric(7, std::vector<Expr>(7, zero));
  for (int i = 0; i < 4; ++i) metric[i][i] = one / F;
  for (int i = 4; i < 7; ++i) metric[i][i] = one;

  // On each (x_k, y_k) block the frame matrix is E = [[f1, -f2], [f2, f1]]
  // and phi acts on frame components as J = [[0, -1], [1, 0]], so
  // phi = E J E^{-1} with E^{-1} = (1/F) [[f1, f2], [-f2, f1]].
  const Expr E[2][2] = {{f1, -f2}, {f2, f1}};
  const Expr Einv[2][2] = {{f1 / F, f2 / F}, {-f2 / F, f1 / F}};
  const int J[2][2] = {{0, -1}, {1, 0}};
  TensorField11 phi(7);
  for (int k = 0; k < 7; ++k)
    for (int j = 0; j < 7; ++j) phi.components[k * 7 + j] = zero;
  for (int block = 0; block < 2; ++block)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) {
        Expr acc = zero;
        bool first = true;
        for (int a = 0; a < 2; ++a)
          for (int b = 0; b < 2; ++b) {
            if (J[a][b] == 0) continue;
            Expr term = E[r][a] * Einv[b][c];
            if (J[a][b] < 0) term = -term;
            acc = first ? term : acc + term;
            first = false;
          }
        phi.components[(2 * block + r) * 7 + (2 * block + c)] = acc;
      }

  std::vector<VectorFieldC> xi(3);
  std::vector<CovectorFieldC> eta(3);
  for (int i = 0; i < 3; ++i) {
    xi[i].components.assign(7, zero);
    xi[i].components[4 + i] = one;
    eta[i].components.assign(7, zero);
    eta[i].components[4 + i] = one;
  }

  auto fs = std::make_shared<FStructure>(ChartManifold(chart, metric), 2, 3, phi, xi, eta);
  fs->set_normality_required(false);

  std::vector<std::pair<std::string, VectorFieldC>> frame;
  for (int block = 0; block < 2; ++block) {
    VectorFieldC a, b;
    a.components.assign(7, zero);
    b.components.assign(7, zero);
    a.components[2 * block] = f1;
    a.components[2 * block + 1] = f2;
    b.components[2 * block] = -f2;
    b.components[2 * block + 1] = f1;
    frame.emplace_back("e" + std::to_string(2 * block + 1), a);
    frame.emplace_back("e" + std::to_string(2 * block + 2), b);
  }
  for (int i = 0; i < 3; ++i) frame.emplace_back("e" + std::to_string(5 + i), xi[i]);
  fs->set_frame(std::move(frame));
  return fs;
}

void self_check(const FStructure& fs) {
  RunOptions opt;
  opt.points = 25;
  opt.tolerance = 1e-8;
  const CheckReport r =
      combine("self-check", {check_axioms(fs, opt), check_gak(fs, opt),
                             check_kenmotsu_nabla_phi(fs, opt), check_xi_and_curvature(fs, opt)});
  if (r.passed()) return;
  std::string failed;
  for (const auto& rec : r.records)
    if (rec.status == Status::fail) failed += " " + rec.id;
  throw Error("structure '" + fs.name() + "' fails its construction self-check:" + failed);
}

}  // namespace

std::shared_ptr<const FStructure> example1(double c1, double c2) {
  if (c1 == 0.0 || c2 == 0.0 || !std::isfinite(c1) || !std::isfinite(c2))
    throw InvalidArgument("example1 needs nonzero finite c1 and c2");
  static std::mutex mutex;
  static std::map<std::pair<double, double>, std::shared_ptr<const FStructure>> cache;
  {
    std::lock_guard lock(mutex);
    auto it = cache.find({c1, c2});
    if (it != cache.end()) return it->second;
  }
  auto fs = build_example1(c1, c2);
  self_check(*fs);
  std::lock_guard lock(mutex);
  return cache.emplace(std::make_pair(c1, c2), std::move(fs)).first->second;
}

std::shared_ptr<const Immersion> example2(double c1, double c2) {
  auto target = example1(c1, c2);
  Chart src;
  src.name = "example2";
  src.coords = {"u", "v", "w1", "w2", "w3"};
  src.sample_box.assign(5, Interval{-0.5, 0.5});
  return std::make_shared<Immersion>("example2", src, target,
                                     parse_all({"u", "v", "0", "0", "w1", "w2", "w3"}));
}

std::shared_ptr<const Immersion> holomorphic_graph(double a, double c1, double c2) {
  if (!std::isfinite(a)) throw InvalidArgument("graph needs a finite coefficient a");
  auto target = example1(c1, c2);
  Chart src;
  src.name = "graph";
  src.coords = {"u", "v", "w1", "w2", "w3"};
  src.params = {{"a", a}};
  src.sample_box.assign(5, Interval{-0.5, 0.5});
  return std::make_shared<Immersion>(
      "graph", src, target, parse_all({"u", "v", "a*(u*u - v*v)", "2*a*u*v", "w1", "w2", "w3"}));
}

ChartManifold euclidean(std::size_t dim) {
  if (dim < 1 || dim > static_cast<std::size_t>(kMaxJetVars))
    throw InvalidArgument("euclidean needs 1 <= dim <= " + std::to_string(kMaxJetVars));
  Chart chart;
  chart.name = "euclidean" + std::to_string(dim);
  if (dim == 3)
    chart.coords = {"x", "y", "z"};
  else
    for (std::size_t i = 0; i < dim; ++i) chart.coords.push_back("x" + std::to_string(i + 1));
  chart.sample_box.assign(dim, Interval{-1.0, 1.0});
  std::vector<std::vector<Expr>> metric(dim, std::vector<Expr>(dim, Expr::number(0.0)));
  for (std::size_t i = 0; i < dim; ++i) metric[i][i] = Expr::number(1.0);
  return ChartManifold(chart, metric);
}

std::shared_ptr<const FStructure> euclidean_structure(std::size_t dim) {
  ChartManifold base = euclidean(dim);
  TensorField11 phi(dim);
  for (auto& e : phi.components) e = Expr::number(0.0);
  std::vector<VectorFieldC> xi(dim);
  std::vector<CovectorFieldC> eta(dim);
  for (std::size_t i = 0; i < dim; ++i) {
    xi[i].components.assign(dim, Expr::number(0.0));
    xi[i].components[i] = Expr::number(1.0);
    eta[i].components = xi[i].components;
  }
  return std::make_shared<FStructure>(std::move(base), 0, static_cast<int>(dim), phi, xi, eta);
}

std::shared_ptr<const Immersion> sphere(double r) {
  if (!(r > 0.0) || !std::isfinite(r)) throw InvalidArgument("sphere needs a positive radius");
  Chart src;
  src.name = "sphere";
  src.coords = {"theta", "lon"};
  src.params = {{"r", r}};
  const double pi = std::numbers::pi;
  src.sample_box = {Interval{0.1, pi - 0.1}, Interval{-pi + 0.1, pi - 0.1}};
  return std::make_shared<Immersion>(
      "sphere", src, euclidean_structure(3),
      parse_all({"r*sin(theta)*cos(lon)", "r*sin(theta)*sin(lon)", "r*cos(theta)"}));
}

std::shared_ptr<const Immersion> identity_immersion(std::shared_ptr<const FStructure> fs) {
  const Chart& c = fs->base().chart();
  std::vector<Expr> map;
  for (const auto& name : c.coords) map.push_back(Expr::identifier(name));
  return std::make_shared<Immersion>("identity:" + c.name, c, fs, map);
}

const std::vector<ZooEntry>& zoo_entries() {
  static const std::vector<ZooEntry> entries = {
      {"example1", "fstructure", "generalized Kenmotsu structure on R^7, n = 2, s = 3",
       {{"c1", 1.0}, {"c2", 1.0}}},
      {"example2", "immersion", "slice (u, v, 0, 0, w1, w2, w3) into example1",
       {{"c1", 1.0}, {"c2", 1.0}}},
      {"graph", "immersion", "graph x2 + i y2 = a (x1 + i y1)^2 into example1",
       {{"a", 0.5}, {"c1", 1.0}, {"c2", 1.0}}},
      {"euclidean3", "fstructure", "flat R^3 with phi = 0, s = 3, xi_i = d_i", {}},
      {"sphere", "immersion", "round sphere of radius r in euclidean3", {{"r", 1.0}}},
  };
  return entries;
}

Target zoo_target(const std::string& name, const ParamTable& params) {
  const ZooEntry* entry = nullptr;
  for (const auto& e : zoo_entries())
    if (e.name == name) entry = &e;
  if (!entry) throw InvalidArgument("unknown target '" + name + "'");
  ParamTable p = entry->defaults;
  for (const auto& [k, v] : params) {
    if (!p.count(k))
      throw InvalidArgument("target '" + name + "' has no parameter '" + k + "'");
    p[k] = v;
  }
  Target t;
  t.name = name;
  if (name == "example1") {
    t.structure = example1(p["c1"], p["c2"]);
  } else if (name == "example2") {
    t.immersion = example2(p["c1"], p["c2"]);
  } else if (name == "graph") {
    t.immersion = holomorphic_graph(p["a"], p["c1"], p["c2"]);
  } else if (name == "euclidean3") {
    t.structure = euclidean_structure(3);
  } else if (name == "sphere") {
    t.immersion = sphere(p["r"]);
  }
  if (t.immersion) t.structure = t.immersion->target_ptr();
  return t;
}

}  // namespace gkv
