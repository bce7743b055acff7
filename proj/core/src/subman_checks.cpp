#include <algorithm>
#include <chrono>
#include <array>
#include <cmath>
#include <cstdio>

#include "gkv/error.hpp"
#include "gkv/fstructure.hpp"
#include "gkv/sampling.hpp"
#include "gkv/subman.hpp"

namespace gkv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

InducedGeometry induce_at(const Immersion& imm, const Vec& p, int order,
                          const SubmanifoldOptions& so, std::size_t index) {
  InduceOptions io;
  io.order = order;
  if (so.normal_mixing_seed) io.normal_mixing_seed = derive_seed(*so.normal_mixing_seed, index);
  return induce(imm, p, io);
}

ParamTable report_params(const Immersion& imm) {
  ParamTable out = imm.target().base().chart().params;
  for (const auto& [k, v] : imm.source().params) out[k] = v;
  return out;
}

// Source coordinate frame, its phi-images, the xi's and `random` directions.
std::vector<Probe> tangent_probes(const Immersion& imm, const InducedGeometry& geo,
                                  std::size_t random, std::uint64_t seed, bool with_phi = true) {
  const auto& coords = imm.source().coords;
  std::vector<Probe> extra;
  if (with_phi)
    for (std::size_t a = 0; a < geo.m; ++a)
      extra.push_back({"phi d_" + coords[a], geo.phi_t(unit_vector(geo.m, a))});
  for (int i = 0; i < geo.s(); ++i)
    extra.push_back({"xi" + std::to_string(i + 1), geo.xi_tangent[i]});
  return probe_set(coords, extra, random, seed);
}

std::vector<Probe> basis_probes(const Immersion& imm) {
  return probe_set(imm.source().coords, {}, 0, 0);
}

std::string join(std::initializer_list<std::string> parts) {
  std::string out;
  for (const auto& p : parts) {
    if (!out.empty()) out += ", ";
    out += p;
  }
  return out;
}

std::string idx(const char* name, int i) { return std::string(name) + "=" + std::to_string(i + 1); }

double inf_norm(std::span<const double> v) {
  double m = 0.0;
  for (double x : v) m = std::max(m, std::abs(x));
  return m;
}

// Running maximum with its location; merged in point order.
struct Peak {
  double value = 0.0;
  Vec point;
  std::string probe;
  bool set = false;

  void offer(double v, const Vec& p, const std::string& where) {
    if (!set || v > value || std::isnan(v)) {
      if (set && std::isnan(value)) return;
      value = v;
      point = p;
      probe = where;
      set = true;
    }
  }
};

Peak merge_peaks(const std::vector<Peak>& per_point) {
  Peak out;
  for (const auto& p : per_point)
    if (p.set) out.offer(p.value, p.point, p.probe);
  return out;
}

IdentityRecord peak_record(std::string id, std::string anchor, std::string group,
                           const Peak& peak, std::size_t samples, std::string note = {}) {
  IdentityRecord rec = value_record(std::move(id), std::move(anchor), std::move(group),
                                    peak.value, peak.point, std::move(note));
  rec.samples = samples;
  rec.worst_probe = peak.probe;
  return rec;
}

Vec phi2(const InducedGeometry& geo, std::span<const double> x) {
  return geo.phi_t(geo.phi_t(x));
}

void require_order(const RunOptions& opt, const char* what) {
  if (opt.jet_order < 3) throw InsufficientOrderError(std::string(what) + " needs jet order >= 3");
}

void require_invariant(const Immersion& imm, const RunOptions& opt,
                       const SubmanifoldOptions& so) {
  const CheckReport inv = check_invariant(imm, opt, so);
  if (inv.passed()) return;
  std::string detail;
  for (const auto& r : inv.records)
    if (r.status == Status::fail) {
      char buf[96];
      std::snprintf(buf, sizeof buf, " %s residual %.3e", r.id.c_str(), r.max_residual);
      detail += buf;
    }
  throw PreconditionError("immersion '" + imm.name() + "' is not invariant:" + detail);
}

}  // namespace

std::string semiparallel_verdict(double h_max, double operator_max, double tol) {
  const bool h_small = h_max < tol;
  const bool op_small = operator_max < tol;
  return h_small == op_small ? kTotallyGeodesicConsistent : kTheoremViolationSuspect;
}

CheckReport check_invariant(const Immersion& imm, const RunOptions& opt,
                            const SubmanifoldOptions& so) {
  const auto t0 = Clock::now();
  const std::vector<IdentitySpec> specs = {
      {"invariant.xi_tangent", "xi_i is tangent to M (normal part of xi_i vanishes)", "invariant",
       true, false, false, 1e-10},
      {"invariant.phi_tangent", "phi(T_x M) is contained in T_x M", "invariant", true, false,
       false, 1e-10},
  };
  const auto points = sample_points(imm.source().sample_box, opt.points, opt.seed);
  Tally tally = sample_tally(
      specs, points,
      [&](std::size_t i, const Vec& p, Tally& t) {
        const InducedGeometry geo = induce_at(imm, p, 2, so, i);
        const Vec zero(geo.dim, 0.0);
        for (int a = 0; a < geo.s(); ++a)
          t["invariant.xi_tangent"].observe(geo.from_frame(geo.xi_normal[a]), zero, p,
                                            idx("i", a));
        for (const auto& [xn, x] : tangent_probes(imm, geo, 10, probe_seed(opt.seed, i), false))
          t["invariant.phi_tangent"].observe(geo.from_frame(act(geo.phi_normal, x)), zero, p,
                                             "X=" + xn);
      },
      opt.threads);
  CheckReport report = start_report("invariant", imm.name(), report_params(imm), opt);
  report.records = tally.records(opt.tolerance);
  report.duration_seconds = seconds_since(t0);
  return report;
}

CheckReport check_induced(const Immersion& imm, const RunOptions& opt,
                          const SubmanifoldOptions& so) {
  const auto t0 = Clock::now();
  require_order(opt, "the Gauss equation");
  const std::vector<IdentitySpec> specs = {
      {"induced.normal_orthonormal",
       "gbar(N_a, N_b) = delta_ab and gbar(N_a, X) = 0 for tangent X", "induced", true, false,
       false, 1e-12},
      {"induced.h_symmetric", "h(X,Y) = h(Y,X)", "induced", true, false, false, 1e-10},
      {"induced.weingarten_duality", "gbar(h(X,Y), N) = g(A_N X, Y)", "induced", true, false,
       false, 1e-10},
      {"induced.connection_agreement",
       "tangential part of nabla-bar_X Y equals the Levi-Civita connection of g", "induced"},
      {"induced.gauss_equation",
       "gbar(Rbar(X,Y)Z,W) = g(R(X,Y)Z,W) + gbar(h(X,Z),h(Y,W)) - gbar(h(Y,Z),h(X,W))",
       "induced"},
      {"induced.gauss_codazzi_vector",
       "Rbar(X,Y)Z = R(X,Y)Z - A_h(Y,Z) X + A_h(X,Z) Y + (nabla_X h)(Y,Z) - (nabla_Y h)(X,Z)",
       "induced"},
  };
  const auto points = sample_points(imm.source().sample_box, opt.points, opt.seed);
  std::vector<Peak> rank(points.size());

  Tally tally = sample_tally(
      specs, points,
      [&](std::size_t i, const Vec& p, Tally& t) {
        const InducedGeometry geo = induce_at(imm, p, opt.jet_order, so, i);
        const std::size_t m = geo.m, q = geo.q;
        rank[i].offer(-geo.min_singular_value, p, "tangent frame");

        Vec gram, ident;
        for (std::size_t a = 0; a < q; ++a) {
          const Vec na = geo.from_frame(unit_vector(q, a));
          for (std::size_t b = 0; b < q; ++b) {
            gram.push_back(geo.gbar(na, geo.from_frame(unit_vector(q, b))));
            ident.push_back(a == b ? 1.0 : 0.0);
          }
          for (std::size_t c = 0; c < m; ++c) {
            gram.push_back(geo.gbar(na, geo.push(unit_vector(m, c))));
            ident.push_back(0.0);
          }
        }
        t["induced.normal_orthonormal"].observe(gram, ident, p, "normal frame");

        Vec gam, gam_metric;
        for (double x : geo.christoffel.data()) gam.push_back(x);
        for (double x : geo.christoffel_metric.data()) gam_metric.push_back(x);
        t["induced.connection_agreement"].observe(gam, gam_metric, p, "all components");

        const auto probes = tangent_probes(imm, geo, 10, probe_seed(opt.seed, i));
        for (const auto& [xn, x] : probes)
          for (const auto& [yn, y] : probes) {
            const std::string where = join({"X=" + xn, "Y=" + yn});
            const Vec hxy = geo.h_frame(x, y);
            t["induced.h_symmetric"].observe(geo.from_frame(hxy), geo.h_ambient(y, x), p, where);
            for (std::size_t a = 0; a < q; ++a)
              t["induced.weingarten_duality"].observe(
                  hxy[a], geo.g(geo.shape_op(unit_vector(q, a), x), y), p,
                  where + ", " + idx("N", static_cast<int>(a)));
          }

        // Four-slot Gauss equation on the coordinate basis and on random
        // probe quadruples; vector form on the basis.
        const auto basis = basis_probes(imm);
        std::vector<std::array<const Probe*, 4>> quads;
        for (const auto& a : basis)
          for (const auto& b : basis)
            for (const auto& c : basis)
              for (const auto& d : basis) quads.push_back({&a, &b, &c, &d});
        Rng rng(probe_seed(opt.seed, i) ^ 0x9e3779b97f4a7c15ULL);
        std::vector<Probe> random;
        for (int k = 0; k < 40; ++k) random.push_back({"r" + std::to_string(k + 1), rng.direction(m)});
        for (int k = 0; k < 10; ++k)
          quads.push_back({&random[4 * k], &random[4 * k + 1], &random[4 * k + 2], &random[4 * k + 3]});
        for (const auto& qd : quads) {
          const Vec &x = qd[0]->v, &y = qd[1]->v, &z = qd[2]->v, &w = qd[3]->v;
          const std::string where =
              join({"X=" + qd[0]->name, "Y=" + qd[1]->name, "Z=" + qd[2]->name, "W=" + qd[3]->name});
          const double lhs = geo.gbar(geo.ambient_curvature(x, y, z), geo.push(w));
          const double rhs = geo.g(geo.curvature(x, y, z), w) +
                             geo.gbar(geo.h_ambient(x, z), geo.h_ambient(y, w)) -
                             geo.gbar(geo.h_ambient(y, z), geo.h_ambient(x, w));
          t["induced.gauss_equation"].observe(lhs, rhs, p, where);
        }
        for (const auto& [xn, x] : basis)
          for (const auto& [yn, y] : basis)
            for (const auto& [zn, z] : basis) {
              Vec tangential = geo.curvature(x, y, z);
              tangential = sub(tangential, geo.shape_op(geo.h_frame(y, z), x));
              tangential = add(tangential, geo.shape_op(geo.h_frame(x, z), y));
              const Vec normal = sub(geo.nabla_h_of(x, y, z), geo.nabla_h_of(y, x, z));
              t["induced.gauss_codazzi_vector"].observe(
                  geo.ambient_curvature(x, y, z),
                  add(geo.push(tangential), geo.from_frame(normal)), p,
                  join({"X=" + xn, "Y=" + yn, "Z=" + zn}));
            }
      },
      opt.threads);

  CheckReport report = start_report("induced", imm.name(), report_params(imm), opt);
  report.records = tally.records(opt.tolerance);
  Peak worst = merge_peaks(rank);
  worst.value = -worst.value;
  report.records.insert(report.records.begin(),
                        peak_record("induced.rank",
                                    "smallest singular value of the differential (> 1e-10)",
                                    "induced", worst, points.size()));
  report.duration_seconds = seconds_since(t0);
  return report;
}

CheckReport check_section3(const Immersion& imm, const RunOptions& opt,
                           const SubmanifoldOptions& so) {
  const auto t0 = Clock::now();
  require_order(opt, "submanifold identities");
  require_invariant(imm, opt, so);
  const std::vector<IdentitySpec> specs = {
      {"s3.a.nabla_phi", "(nabla_X phi)Y = sum_i {g(phi X, Y) xi_i - eta^i(Y) phi X}", "s3.a",
       true, true},
      {"s3.a.h_phi", "h(X, phi Y) = phi h(X,Y)", "s3.a"},
      {"s3.b.h_phi_symmetric", "h(X, phi Y) = h(phi X, Y)", "s3.b"},
      {"s3.b.h_phi_phi", "h(phi X, phi Y) = -h(X,Y)", "s3.b"},
      {"s3.c.nabla_xi", "nabla_X xi_j = -phi^2 X", "s3.c", true, true},
      {"s3.c.nabla_xi_expanded", "nabla_X xi_j = X - sum_i eta^i(X) xi_i", "s3.c", true, true},
      {"s3.c.h_xi", "h(X, xi_j) = 0", "s3.c"},
      {"s3.c.gauss_xi", "nabla-bar_X xi_j = nabla_X xi_j + h(X, xi_j)", "s3.c", true, true},
      {"s3.d.R_XY_xi", "R(X,Y) xi_i = sum_j {eta^j(Y) phi^2 X - eta^j(X) phi^2 Y}", "s3.d",
       true, true},
      {"s3.d.Rbar_equals_R_on_xi", "Rbar(X,Y) xi_i = R(X,Y) xi_i", "s3.d", true, true},
      {"s3.d.R_xi_X_xi", "R(xi_j, X) xi_i = -phi^2 X", "s3.d", true, true},
      {"s3.d.R_X_xi_xi", "R(X, xi_j) xi_i = phi^2 X", "s3.d", true, true},
      {"s3.d.R_xi_xi_xi", "R(xi_k, xi_j) xi_i = 0", "s3.d"},
      {"s3.d.R_xi_xi_xi_repeated", "R(xi_j, xi_j) xi_i = 0 (exact)", "s3.d", true, false, true},
      {"s3.d.R_xi_X_Y", "R(xi_j, X) Y = sum_k {g(X, phi^2 Y) xi_k - eta^k(Y) phi^2 X}", "s3.d",
       true, true},
      {"s3.e.nabla_h_xi", "(nabla_X h)(Y, xi_i) = -h(Y, nabla_X xi_i)", "s3.e"},
      {"s3.e.nabla_h_xi_reduced", "(nabla_X h)(Y, xi_i) = -h(X,Y)", "s3.e"},
      {"s3.f.shape_xi", "A_N xi_i = 0", "s3.f"},
      {"s3.g.phi_shape", "phi(A_N X) = A_(phi N) X", "s3.g"},
      {"s3.g.shape_phi", "phi(A_N X) = -A_N phi X", "s3.g"},
      {"s3.h.eta_parallel_decomposition",
       "(nabla_X h)(phi^2 Y, phi^2 Z) = (nabla_X h)(Y,Z) + sum_i {eta^i(Y) h(X,Z) + eta^i(Z) "
       "h(X,Y)}",
       "s3.h"},
      {"s3.h.eta_parallel_equivalence",
       "(nabla_X h)(phi Y, phi Z) = -(nabla_X h)(Y,Z) - sum_i {eta^i(Y) h(X,Z) + eta^i(Z) h(X,Y)}",
       "s3.h"},
      {"s3.i.Rbar_xi_tangent", "Rbar(X,Y) xi_j is tangent to M", "s3.i", true, true},
      {"s3.j.sectional",
       "g(R(X,phi X)phi X, X) = gbar(Rbar(X,phi X)phi X, X) - 2 gbar(h(X,X), h(X,X))", "s3.j"},
  };
  const auto points = sample_points(imm.source().sample_box, opt.points, opt.seed);
  std::vector<Peak> h_peak(points.size()), nabla_h_peak(points.size()), eta_par(points.size());

  Tally tally = sample_tally(
      specs, points,
      [&](std::size_t i, const Vec& p, Tally& t) {
        const InducedGeometry geo = induce_at(imm, p, opt.jet_order, so, i);
        const std::size_t m = geo.m, q = geo.q;
        const int s = geo.s();
        const auto probes = tangent_probes(imm, geo, 10, probe_seed(opt.seed, i));
        const auto small = tangent_probes(imm, geo, 3, probe_seed(opt.seed, i), false);
        const Vec zero_m(m, 0.0), zero_amb(geo.dim, 0.0);

        auto eta_sum = [&](std::span<const double> x) {
          double e = 0.0;
          for (int a = 0; a < s; ++a) e += geo.eta_t(a, x);
          return e;
        };

        std::vector<Vec> p2;
        for (const auto& pr : probes) p2.push_back(phi2(geo, pr.v));

        for (std::size_t u = 0; u < probes.size(); ++u) {
          const auto& [xn, x] = probes[u];
          const Vec px = geo.phi_t(x);
          Vec expanded = x;
          for (int a = 0; a < s; ++a) axpy(-geo.eta_t(a, x), geo.xi_tangent[a], expanded);

          for (int j = 0; j < s; ++j) {
            const std::string where = join({"X=" + xn, idx("j", j)});
            const Vec nx = geo.nabla_xi_of(j, x);
            t["s3.c.nabla_xi"].observe(nx, scaled(-1.0, p2[u]), p, where);
            t["s3.c.nabla_xi_expanded"].observe(nx, expanded, p, where);
            t["s3.c.h_xi"].observe(geo.h_ambient(x, geo.xi_tangent[j]), zero_amb, p, where);
            t["s3.c.gauss_xi"].observe(
                geo.ambient_nabla_xi(j, x),
                add(geo.push(nx), geo.h_ambient(x, geo.xi_tangent[j])), p, where);
          }

          for (std::size_t a = 0; a < q; ++a) {
            const Vec e = unit_vector(q, a);
            const std::string where = join({"X=" + xn, idx("N", static_cast<int>(a))});
            const Vec ax = geo.shape_op(e, x);
            const Vec phi_n = geo.normal_part(act(geo.phi, geo.from_frame(e)));
            t["s3.g.phi_shape"].observe(geo.phi_t(ax), geo.shape_op(phi_n, x), p, where);
            t["s3.g.shape_phi"].observe(geo.phi_t(ax), scaled(-1.0, geo.shape_op(e, px)), p,
                                        where);
          }

          // Sectional-type identity on (X, phi X).
          {
            const double lhs = geo.g(geo.curvature(x, px, px), x);
            const Vec hxx = geo.h_ambient(x, x);
            const double rhs =
                geo.gbar(geo.ambient_curvature(x, px, px), geo.push(x)) - 2.0 * geo.gbar(hxx, hxx);
            t["s3.j.sectional"].observe(lhs, rhs, p, "X=" + xn);
          }

          for (std::size_t v = 0; v < probes.size(); ++v) {
            const auto& [yn, y] = probes[v];
            const std::string xy = join({"X=" + xn, "Y=" + yn});
            const Vec py = geo.phi_t(y);
            const Vec hxy = geo.h_ambient(x, y);
            h_peak[i].offer(inf_norm(hxy), p, xy);

            Vec rhs_a(m, 0.0);
            const double gpy = geo.g(px, y);
            for (int a = 0; a < s; ++a) {
              axpy(gpy, geo.xi_tangent[a], rhs_a);
              axpy(-geo.eta_t(a, y), px, rhs_a);
            }
            t["s3.a.nabla_phi"].observe(geo.nabla_phi_of(x, y), rhs_a, p, xy);
            const Vec h_x_py = geo.h_ambient(x, py);
            t["s3.a.h_phi"].observe(h_x_py, act(geo.phi, hxy), p, xy);
            t["s3.b.h_phi_symmetric"].observe(h_x_py, geo.h_ambient(px, y), p, xy);
            t["s3.b.h_phi_phi"].observe(geo.h_ambient(px, py), scaled(-1.0, hxy), p, xy);

            Vec rhs_d(m, 0.0);
            for (int a = 0; a < s; ++a) {
              axpy(geo.eta_t(a, y), p2[u], rhs_d);
              axpy(-geo.eta_t(a, x), p2[v], rhs_d);
            }
            for (int a = 0; a < s; ++a) {
              const std::string where = join({xy, idx("i", a)});
              const Vec rxy = geo.curvature(x, y, geo.xi_tangent[a]);
              t["s3.d.R_XY_xi"].observe(rxy, rhs_d, p, where);
              const Vec rbar = geo.ambient_curvature(x, y, geo.xi_tangent[a]);
              t["s3.d.Rbar_equals_R_on_xi"].observe(rbar, geo.push(rxy), p, where);
              t["s3.i.Rbar_xi_tangent"].observe(rbar, geo.push(geo.tangential(rbar)), p, where);
            }

            for (int j = 0; j < s; ++j) {
              Vec rhs(m, 0.0);
              const double g2 = geo.g(x, p2[v]);
              for (int k = 0; k < s; ++k) {
                axpy(g2, geo.xi_tangent[k], rhs);
                axpy(-geo.eta_t(k, y), p2[u], rhs);
              }
              t["s3.d.R_xi_X_Y"].observe(geo.curvature(geo.xi_tangent[j], x, y), rhs, p,
                                         join({xy, idx("j", j)}));
            }
          }

          for (int j = 0; j < s; ++j)
            for (int a = 0; a < s; ++a) {
              const std::string where = join({"X=" + xn, idx("i", a), idx("j", j)});
              t["s3.d.R_xi_X_xi"].observe(geo.curvature(geo.xi_tangent[j], x, geo.xi_tangent[a]),
                                          scaled(-1.0, p2[u]), p, where);
              t["s3.d.R_X_xi_xi"].observe(geo.curvature(x, geo.xi_tangent[j], geo.xi_tangent[a]),
                                          p2[u], p, where);
            }
        }

        for (int k = 0; k < s; ++k)
          for (int j = 0; j < s; ++j)
            for (int a = 0; a < s; ++a)
              t[j == k ? "s3.d.R_xi_xi_xi_repeated" : "s3.d.R_xi_xi_xi"].observe(
                  geo.curvature(geo.xi_tangent[k], geo.xi_tangent[j], geo.xi_tangent[a]), zero_m,
                  p, join({idx("i", a), idx("j", j), idx("k", k)}));

        for (int a = 0; a < s; ++a)
          for (std::size_t al = 0; al < q; ++al)
            t["s3.f.shape_xi"].observe(geo.push(geo.shape_op(unit_vector(q, al), geo.xi_tangent[a])),
                                       zero_amb, p,
                                       join({idx("i", a), idx("N", static_cast<int>(al))}));

        // Derivatives of h on the smaller probe set.
        for (const auto& [xn, x] : small)
          for (const auto& [yn, y] : small) {
            const Vec hxy = geo.h_ambient(x, y);
            for (int a = 0; a < s; ++a) {
              const std::string where = join({"X=" + xn, "Y=" + yn, idx("i", a)});
              const Vec lhs = geo.from_frame(geo.nabla_h_of(x, y, geo.xi_tangent[a]));
              t["s3.e.nabla_h_xi"].observe(
                  lhs, scaled(-1.0, geo.h_ambient(y, geo.nabla_xi_of(a, x))), p, where);
              t["s3.e.nabla_h_xi_reduced"].observe(lhs, scaled(-1.0, hxy), p, where);
            }
            const Vec py = geo.phi_t(y), p2y = phi2(geo, y);
            for (const auto& [zn, z] : small) {
              const std::string where = join({"X=" + xn, "Y=" + yn, "Z=" + zn});
              const Vec base = geo.from_frame(geo.nabla_h_of(x, y, z));
              nabla_h_peak[i].offer(inf_norm(base), p, where);
              Vec corr = scaled(eta_sum(y), geo.h_ambient(x, z));
              corr = add(corr, scaled(eta_sum(z), hxy));
              const Vec pz = geo.phi_t(z), p2z = phi2(geo, z);
              const Vec on_phi = geo.from_frame(geo.nabla_h_of(x, py, pz));
              eta_par[i].offer(inf_norm(on_phi), p, where);
              t["s3.h.eta_parallel_decomposition"].observe(
                  geo.from_frame(geo.nabla_h_of(x, p2y, p2z)), add(base, corr), p, where);
              t["s3.h.eta_parallel_equivalence"].observe(on_phi, scaled(-1.0, add(base, corr)), p,
                                                         where);
            }
          }
      },
      opt.threads);

  CheckReport report = start_report("section3", imm.name(), report_params(imm), opt);
  report.records = tally.records(opt.tolerance);
  const Peak hp = merge_peaks(h_peak), np = merge_peaks(nabla_h_peak), ep = merge_peaks(eta_par);
  report.records.push_back(peak_record("s3.h.eta_parallel_max",
                                       "max |(nabla_X h)(phi Y, phi Z)| (zero iff eta-parallel)",
                                       "s3.h", ep, points.size()));
  report.records.push_back(peak_record("s3.h_max", "max |h(X,Y)| over probes", "s3", hp,
                                       points.size()));
  report.records.push_back(peak_record("s3.nabla_h_max", "max |(nabla_X h)(Y,Z)| over probes",
                                       "s3", np, points.size()));
  report.verdicts.emplace_back("parallel_h",
                               semiparallel_verdict(hp.value, np.value, opt.tolerance));
  report.duration_seconds = seconds_since(t0);
  return report;
}

CheckReport check_section4(const Immersion& imm, const RunOptions& opt,
                           const SubmanifoldOptions& so) {
  const auto t0 = Clock::now();
  require_order(opt, "semiparallel operators");
  require_invariant(imm, opt, so);
  const std::vector<IdentitySpec> specs = {
      {"s4.t41.reduction", "(Rbar(xi_i,Y)h)(Z,xi_j) = -h(Z, R(xi_i,Y) xi_j)", "s4.t41"},
      {"s4.t41.curvature_step", "R(xi_i,Y) xi_j = Y - sum_t eta^t(Y) xi_t", "s4.t41", true, true},
      {"s4.t41.final", "(Rbar(xi_i,Y)h)(Z,xi_j) = -h(Z,Y)", "s4.t41"},
      {"s4.t42.nabla_h_xi", "(nabla-bar h)(Z, xi_j, V) = -h(Z,V)", "s4.t42"},
      {"s4.t42.nabla_h_xi_RV",
       "(nabla-bar h)(Z, xi_j, R(xi_i,Y)V) = -sum_l eta^l(V) h(Z,Y)", "s4.t42"},
      {"s4.t42.nabla_h_RZ_xi",
       "(nabla-bar h)(R(xi_i,Y)Z, xi_j, V) = -sum_l eta^l(Z) h(Y,V)", "s4.t42"},
  };
  const auto points = sample_points(imm.source().sample_box, opt.points, opt.seed);
  std::vector<Peak> h_peak(points.size()), rh_peak(points.size()), rnh_peak(points.size());

  Tally tally = sample_tally(
      specs, points,
      [&](std::size_t i, const Vec& p, Tally& t) {
        const InducedGeometry geo = induce_at(imm, p, opt.jet_order, so, i);
        const std::size_t m = geo.m;
        const int s = geo.s();
        const auto basis = basis_probes(imm);
        Rng rng(probe_seed(opt.seed, i));
        std::vector<Probe> random;
        for (int k = 0; k < 10; ++k) random.push_back({"r" + std::to_string(k + 1), rng.direction(m)});

        auto eta_sum = [&](std::span<const double> x) {
          double e = 0.0;
          for (int a = 0; a < s; ++a) e += geo.eta_t(a, x);
          return e;
        };

        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = a; b < m; ++b)
            h_peak[i].offer(inf_norm(geo.h_ambient(basis[a].v, basis[b].v)), p,
                            join({"X=" + basis[a].name, "Y=" + basis[b].name}));

        // Multilinear operators: the coordinate basis decides vanishing,
        // random quadruples exercise mixed arguments.
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = a + 1; b < m; ++b) {
            const Vec &x = basis[a].v, &y = basis[b].v;
            for (std::size_t c = 0; c < m; ++c)
              for (std::size_t d = 0; d < m; ++d) {
                const std::string where = join({"X=" + basis[a].name, "Y=" + basis[b].name,
                                                "Z=" + basis[c].name, "U=" + basis[d].name});
                if (d >= c)
                  rh_peak[i].offer(
                      inf_norm(geo.from_frame(rbar_dot_h(geo, x, y, basis[c].v, basis[d].v).total)),
                      p, where);
                for (std::size_t e = 0; e < m; ++e)
                  rnh_peak[i].offer(inf_norm(geo.from_frame(rbar_dot_nabla_h(
                                        geo, x, y, basis[c].v, basis[d].v, basis[e].v))),
                                    p, join({where, "V=" + basis[e].name}));
              }
          }
        for (int k = 0; k + 4 < 10; k += 5) {
          const std::string where = "random " + random[k].name + ".." + random[k + 4].name;
          rh_peak[i].offer(inf_norm(geo.from_frame(rbar_dot_h(geo, random[k].v, random[k + 1].v,
                                                              random[k + 2].v, random[k + 3].v)
                                                       .total)),
                           p, where);
          rnh_peak[i].offer(
              inf_norm(geo.from_frame(rbar_dot_nabla_h(geo, random[k].v, random[k + 1].v,
                                                       random[k + 2].v, random[k + 3].v,
                                                       random[k + 4].v))),
              p, where);
        }

        std::vector<Probe> probes = basis;
        probes.insert(probes.end(), random.begin(), random.begin() + 3);
        for (int a = 0; a < s; ++a) {
          const Vec& xi_i = geo.xi_tangent[a];
          for (const auto& [yn, y] : probes) {
            for (int j = 0; j < s; ++j) {
              const Vec& xi_j = geo.xi_tangent[j];
              const Vec r = geo.curvature(xi_i, y, xi_j);
              Vec expect = y;
              for (int l = 0; l < s; ++l) axpy(-geo.eta_t(l, y), geo.xi_tangent[l], expect);
              t["s4.t41.curvature_step"].observe(r, expect, p,
                                                 join({"Y=" + yn, idx("i", a), idx("j", j)}));
              for (const auto& [zn, z] : probes) {
                const std::string where = join({"Y=" + yn, "Z=" + zn, idx("i", a), idx("j", j)});
                const Vec lhs = geo.from_frame(rbar_dot_h(geo, xi_i, y, z, xi_j).total);
                t["s4.t41.reduction"].observe(lhs, scaled(-1.0, geo.h_ambient(z, r)), p, where);
                t["s4.t41.final"].observe(lhs, scaled(-1.0, geo.h_ambient(z, y)), p, where);
              }
            }
          }
        }

        std::vector<Probe> few = basis;
        few.insert(few.end(), random.begin(), random.begin() + 2);
        for (int j = 0; j < s; ++j) {
          const Vec& xi_j = geo.xi_tangent[j];
          for (const auto& [zn, z] : few)
            for (const auto& [vn, v] : few) {
              t["s4.t42.nabla_h_xi"].observe(geo.from_frame(geo.nabla_h_of(z, xi_j, v)),
                                             scaled(-1.0, geo.h_ambient(z, v)), p,
                                             join({"Z=" + zn, "V=" + vn, idx("j", j)}));
              for (int a = 0; a < s; ++a) {
                const Vec& xi_i = geo.xi_tangent[a];
                for (const auto& [yn, y] : few) {
                  const std::string where =
                      join({"Y=" + yn, "Z=" + zn, "V=" + vn, idx("i", a), idx("j", j)});
                  t["s4.t42.nabla_h_xi_RV"].observe(
                      geo.from_frame(geo.nabla_h_of(z, xi_j, geo.curvature(xi_i, y, v))),
                      scaled(-eta_sum(v), geo.h_ambient(z, y)), p, where);
                  t["s4.t42.nabla_h_RZ_xi"].observe(
                      geo.from_frame(geo.nabla_h_of(geo.curvature(xi_i, y, z), xi_j, v)),
                      scaled(-eta_sum(z), geo.h_ambient(y, v)), p, where);
                }
              }
            }
        }
      },
      opt.threads);

  CheckReport report = start_report("section4", imm.name(), report_params(imm), opt);
  report.records = tally.records(opt.tolerance);
  const Peak hp = merge_peaks(h_peak), rh = merge_peaks(rh_peak), rnh = merge_peaks(rnh_peak);
  report.records.push_back(
      peak_record("s4.h_max", "max |h(X,Y)| on the coordinate basis", "s4", hp, points.size()));
  report.records.push_back(peak_record(
      "s4.rbar_h_max",
      "max |(Rbar(X,Y)h)(Z,U)|, (Rbar(X,Y)h)(Z,U) = Rperp(X,Y)h(Z,U) - h(R(X,Y)Z,U) - "
      "h(Z,R(X,Y)U)",
      "s4", rh, points.size()));
  report.records.push_back(peak_record(
      "s4.rbar_nabla_h_max",
      "max |(Rbar(X,Y) nabla-bar h)(Z,U,V)|, Rperp(X,Y)(nabla-bar h)(Z,U,V) minus the three "
      "R(X,Y) insertions",
      "s4", rnh, points.size()));
  report.verdicts.emplace_back("semiparallel",
                               semiparallel_verdict(hp.value, rh.value, opt.tolerance));
  report.verdicts.emplace_back("2-semiparallel",
                               semiparallel_verdict(hp.value, rnh.value, opt.tolerance));
  report.duration_seconds = seconds_since(t0);
  return report;
}

}  // namespace gkv
