#include <chrono>
#include <cmath>
#include <limits>

#include "gkv/error.hpp"
#include "gkv/fstructure.hpp"
#include "gkv/sampling.hpp"

namespace gkv {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::vector<Probe> structure_probes(const FStructure& fs, const StructureJets& sj,
                                    std::uint64_t seed) {
  std::vector<Probe> extra;
  for (int i = 0; i < sj.s(); ++i) extra.push_back({"xi" + std::to_string(i + 1), sj.xi_v[i]});
  return probe_set(fs.base().chart().coords, extra, 10, seed);
}

std::string label(const std::string& a) { return "X=" + a; }
std::string label(const std::string& a, const std::string& b) { return "X=" + a + ", Y=" + b; }
std::string idx(const char* name, int i) { return std::string(name) + "=" + std::to_string(i + 1); }

bool depends_on_coords(const ExprNode& n) {
  switch (n.kind) {
    case NodeKind::variable:
    case NodeKind::identifier: return true;
    case NodeKind::number:
    case NodeKind::parameter: return false;
    case NodeKind::binary: return depends_on_coords(*n.lhs) || depends_on_coords(*n.rhs);
    default: return depends_on_coords(*n.lhs);
  }
}

Vec component_vector(const Form<double>& f) {
  Vec out;
  for (unsigned m : f.masks()) out.push_back(f[m]);
  return out;
}

Form<double> fundamental_form_values(const StructureJets& sj) {
  const int n = static_cast<int>(sj.dim());
  const Matrix<double> gphi = mat_mul(sj.g, sj.phi_v);
  Form<double> out(2, n);
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) out[(1u << i) | (1u << j)] = 0.5 * (gphi(i, j) - gphi(j, i));
  return out;
}

Vec phi_squared(const StructureJets& sj, std::span<const double> x) {
  return sj.phi_of(sj.phi_of(x));
}

}  // namespace

double structure_volume(const StructureJets& sj, int n) {
  const int dim = static_cast<int>(sj.dim());
  Form<double> acc(0, dim);
  acc[0] = 1.0;
  for (int i = 0; i < sj.s(); ++i) {
    Form<double> eta(1, dim);
    for (int k = 0; k < dim; ++k) eta[1u << k] = sj.eta_v[i][k];
    acc = wedge(acc, eta);
  }
  const Form<double> phi2 = fundamental_form_values(sj);
  for (int k = 0; k < n; ++k) acc = wedge(acc, phi2);
  return acc[(1u << dim) - 1];
}

CheckReport check_axioms(const FStructure& fs, const RunOptions& opt) {
  const auto t0 = Clock::now();
  const std::vector<IdentitySpec> specs = {
      {"axioms.phi_squared", "phi^2 X = -X + sum_i eta^i(X) xi_i", "axioms"},
      {"axioms.eta_xi_duality", "eta^i(xi_j) = delta_ij", "axioms"},
      {"axioms.metric_compatibility", "g(phi X, phi Y) = g(X,Y) - sum_i eta^i(X) eta^i(Y)",
       "axioms"},
      {"axioms.eta_is_metric_dual", "eta^i(X) = g(X, xi_i)", "axioms"},
      {"axioms.phi_skew", "g(X, phi Y) = -g(phi X, Y)", "axioms"},
      {"axioms.phi_kills_xi", "phi xi_i = 0", "axioms"},
      {"axioms.eta_after_phi", "eta^i(phi X) = 0", "axioms"},
      {"axioms.f_structure", "phi^3 X + phi X = 0 (within 3 x tolerance)", "axioms", true, false,
       false, 3.0 * opt.tolerance},
  };
  const int s = fs.s();
  const auto points = sample_points(fs.base().chart().sample_box, opt.points, opt.seed);
  std::vector<double> volumes(points.size());

  Tally tally = sample_tally(
      specs, points,
      [&](std::size_t i, const Vec& p, Tally& t) {
        StructureJets sj(fs, p, 1);
        const auto probes = structure_probes(fs, sj, probe_seed(opt.seed, i));
        for (const auto& [xn, x] : probes) {
          const Vec phix = sj.phi_of(x);
          const Vec phi2x = sj.phi_of(phix);
          Vec rhs = scaled(-1.0, x);
          for (int a = 0; a < s; ++a) axpy(sj.eta_of(a, x), sj.xi_v[a], rhs);
          t["axioms.phi_squared"].observe(phi2x, rhs, p, label(xn));
          const Vec phi3x = add(sj.phi_of(phi2x), phix);
          t["axioms.f_structure"].observe(phi3x, Vec(x.size(), 0.0), p, label(xn));
          for (int a = 0; a < s; ++a) {
            t["axioms.eta_is_metric_dual"].observe(sj.eta_of(a, x), sj.inner(x, sj.xi_v[a]), p,
                                                   label(xn) + ", " + idx("i", a));
            t["axioms.eta_after_phi"].observe(sj.eta_of(a, phix), 0.0, p,
                                              label(xn) + ", " + idx("i", a));
          }
          for (const auto& [yn, y] : probes) {
            const Vec phiy = sj.phi_of(y);
            double rhs_c = sj.inner(x, y);
            for (int a = 0; a < s; ++a) rhs_c -= sj.eta_of(a, x) * sj.eta_of(a, y);
            t["axioms.metric_compatibility"].observe(sj.inner(phix, phiy), rhs_c, p,
                                                     label(xn, yn));
            t["axioms.phi_skew"].observe(sj.inner(x, phiy), -sj.inner(phix, y), p,
                                         label(xn, yn));
          }
        }
        for (int a = 0; a < s; ++a) {
          t["axioms.phi_kills_xi"].observe(sj.phi_of(sj.xi_v[a]), Vec(sj.dim(), 0.0), p,
                                           idx("i", a));
          for (int b = 0; b < s; ++b)
            t["axioms.eta_xi_duality"].observe(sj.eta_of(a, sj.xi_v[b]), a == b ? 1.0 : 0.0, p,
                                               idx("i", a) + ", " + idx("j", b));
        }
        volumes[i] = structure_volume(sj, fs.n());
      },
      opt.threads);

  CheckReport report = start_report("axioms", fs.name(), fs.base().chart().params, opt);
  report.records = tally.records(opt.tolerance);

  IdentityRecord vol;
  vol.id = "axioms.volume_nondegenerate";
  vol.anchor = "eta^1 ^ ... ^ eta^s ^ Phi^n != 0 (|value| > 1e-12)";
  vol.group = "axioms";
  vol.tolerance = 1e-12;
  vol.samples = points.size();
  double worst = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < points.size(); ++i) {
    if (!(std::abs(volumes[i]) >= worst)) {
      worst = std::abs(volumes[i]);
      vol.worst_point = points[i];
    }
  }
  vol.value = points.empty() ? 0.0 : worst;
  vol.worst_probe = "coordinate basis";
  vol.status = (!points.empty() && worst > 1e-12) ? Status::pass : Status::fail;
  if (vol.status == Status::fail) vol.note = "top form vanishes";
  report.records.push_back(std::move(vol));
  report.duration_seconds = seconds_since(t0);
  return report;
}

CheckReport check_gak(const FStructure& fs, const RunOptions& opt) {
  const auto t0 = Clock::now();
  bool constant_eta = true;
  for (int i = 0; i < fs.s(); ++i)
    for (const auto& e : fs.eta(i).components) constant_eta &= !depends_on_coords(e.root());

  std::vector<IdentitySpec> specs = {
      {"gak.eta_closed", "d eta^i = 0", "gak", true, false, constant_eta},
      {"gak.dPhi", "d Phi = 2 sum_i eta^i ^ Phi", "gak"},
      {"gak.d_squared", "d(d eta^i) = 0 and d(d Phi) = 0", "gak", true, false, false, 1e-10},
  };
  const int s = fs.s();
  const int order = std::max(opt.jet_order, 2);
  const auto points = sample_points(fs.base().chart().sample_box, opt.points, opt.seed);

  Tally tally = sample_tally(
      specs, points,
      [&](std::size_t, const Vec& p, Tally& t) {
        StructureJets sj(fs, p, order);
        const int dim = static_cast<int>(sj.dim());
        const Form<Jet> phi2 = two_form(sj.fundamental_form());
        const Form<Jet> dphi = exterior_derivative(phi2);
        const Form<double> phi2_v = values(phi2);

        Form<double> rhs(3 <= dim ? 3 : dim, dim);
        for (int a = 0; a < s; ++a) {
          const Form<Jet> eta = one_form(sj.eta[a]);
          const Form<Jet> deta = exterior_derivative(eta);
          const Vec d = component_vector(values(deta));
          t["gak.eta_closed"].observe(d, Vec(d.size(), 0.0), p, idx("i", a));
          const Vec dd = component_vector(values(exterior_derivative(deta)));
          t["gak.d_squared"].observe(dd, Vec(dd.size(), 0.0), p, "d d " + idx("eta", a));
          if (dim >= 3) {
            const Form<double> w = wedge(values(eta), phi2_v);
            for (unsigned m : w.masks()) rhs[m] += 2.0 * w[m];
          }
        }
        if (dim >= 3) {
          const Vec lhs = component_vector(values(dphi));
          t["gak.dPhi"].observe(lhs, component_vector(rhs), p, "all components");
          const Vec dd = component_vector(values(exterior_derivative(dphi)));
          t["gak.d_squared"].observe(dd, Vec(dd.size(), 0.0), p, "d d Phi");
        }
      },
      opt.threads);

  CheckReport report = start_report("gak", fs.name(), fs.base().chart().params, opt);
  report.records = tally.records(opt.tolerance);
  report.duration_seconds = seconds_since(t0);
  return report;
}

CheckReport check_normality(const FStructure& fs, const RunOptions& opt) {
  const auto t0 = Clock::now();
  const bool required = fs.normality_required();
  std::vector<IdentitySpec> specs = {
      {"normality.tensor", "[phi,phi](X,Y) + 2 sum_i d eta^i(X,Y) xi_i = 0", "normality",
       required},
  };
  const int s = fs.s();
  const int order = std::max(opt.jet_order, 1);
  const auto points = sample_points(fs.base().chart().sample_box, opt.points, opt.seed);
  const auto& coords = fs.base().chart().coords;

  Tally tally = sample_tally(
      specs, points,
      [&](std::size_t, const Vec& p, Tally& t) {
        StructureJets sj(fs, p, order);
        const std::size_t dim = sj.dim();
        std::vector<std::pair<std::string, std::vector<Jet>>> fields;
        for (std::size_t a = 0; a < dim; ++a) {
          std::vector<Jet> e(dim);
          e[a] = Jet(1.0);
          fields.emplace_back("d_" + coords[a], std::move(e));
        }
        for (int a = 0; a < s; ++a) fields.emplace_back("xi" + std::to_string(a + 1), sj.xi[a]);
        for (const auto& [name, f] : fs.frame())
          fields.emplace_back(name, evaluate_field(f.components, sj.chart.coords()));

        std::vector<Form<double>> deta;
        for (int a = 0; a < s; ++a) deta.push_back(values(exterior_derivative(one_form(sj.eta[a]))));

        for (std::size_t u = 0; u < fields.size(); ++u)
          for (std::size_t v = u + 1; v < fields.size(); ++v) {
            const auto& x = fields[u].second;
            const auto& y = fields[v].second;
            Vec n = nijenhuis(sj.phi, x, y);
            const std::vector<Vec> xy = {values(x), values(y)};
            for (int a = 0; a < s; ++a)
              if (dim >= 2) axpy(2.0 * evaluate(deta[a], xy), sj.xi_v[a], n);
            t["normality.tensor"].observe(n, Vec(dim, 0.0), p,
                                          label(fields[u].first, fields[v].first));
          }
      },
      opt.threads);

  CheckReport report = start_report("normality", fs.name(), fs.base().chart().params, opt);
  report.records = tally.records(opt.tolerance);
  const auto& rec = report.records.front();
  report.records.push_back(value_record(
      "normality.max_norm", "max |[phi,phi](X,Y) + 2 sum_i d eta^i(X,Y) xi_i| over frame pairs",
      "normality", rec.max_abs_residual, rec.worst_point,
      required ? "" : "reported only; not asserted for this structure"));
  report.duration_seconds = seconds_since(t0);
  return report;
}

CheckReport check_kenmotsu_nabla_phi(const FStructure& fs, const RunOptions& opt) {
  const auto t0 = Clock::now();
  const std::vector<IdentitySpec> specs = {
      {"kenmotsu.nabla_phi", "(nabla_X phi)Y = sum_i {g(phi X, Y) xi_i - eta^i(Y) phi X}",
       "kenmotsu"},
  };
  const int s = fs.s();
  const int order = std::max(opt.jet_order, 1);
  const auto points = sample_points(fs.base().chart().sample_box, opt.points, opt.seed);

  Tally tally = sample_tally(
      specs, points,
      [&](std::size_t i, const Vec& p, Tally& t) {
        StructureJets sj(fs, p, order);
        const auto nphi = covariant_derivative(sj.chart, sj.phi);
        const auto probes = structure_probes(fs, sj, probe_seed(opt.seed, i));
        for (const auto& [xn, x] : probes) {
          const Vec phix = sj.phi_of(x);
          for (const auto& [yn, y] : probes) {
            const Vec lhs = apply_nabla(nphi, x, y);
            Vec rhs(sj.dim(), 0.0);
            const double gpy = sj.inner(phix, y);
            for (int a = 0; a < s; ++a) {
              axpy(gpy, sj.xi_v[a], rhs);
              axpy(-sj.eta_of(a, y), phix, rhs);
            }
            t["kenmotsu.nabla_phi"].observe(lhs, rhs, p, label(xn, yn));
          }
        }
      },
      opt.threads);

  CheckReport report = start_report("kenmotsu", fs.name(), fs.base().chart().params, opt);
  report.records = tally.records(opt.tolerance);
  report.duration_seconds = seconds_since(t0);
  return report;
}

CheckReport check_xi_and_curvature(const FStructure& fs, const RunOptions& opt) {
  const auto t0 = Clock::now();
  std::vector<IdentitySpec> specs = {
      {"reeb.nabla_xi", "nabla_X xi_j = -phi^2 X", "reeb"},
      {"reeb.nabla_xi_expanded", "nabla_X xi_j = X - sum_i eta^i(X) xi_i", "reeb"},
      {"curvature.R_XY_xi", "R(X,Y) xi_i = sum_j {eta^j(Y) phi^2 X - eta^j(X) phi^2 Y}",
       "curvature"},
      {"curvature.R_X_xi_xi", "R(X, xi_j) xi_i = phi^2 X", "curvature"},
      {"curvature.R_xi_X_xi", "R(xi_j, X) xi_i = -phi^2 X", "curvature"},
      {"curvature.R_xi_xi_xi", "R(xi_k, xi_j) xi_i = 0", "curvature"},
      {"curvature.R_xi_xi_xi_repeated", "R(xi_j, xi_j) xi_i = 0 (exact)", "curvature", true,
       false, true},
      {"curvature.R_xi_X_Y", "R(xi_j, X) Y = sum_k {g(X, phi^2 Y) xi_k - eta^k(Y) phi^2 X}",
       "curvature"},
  };
  if (opt.jet_order < 2)
    throw InsufficientOrderError("curvature identities need jet order >= 2");
  const int s = fs.s();
  // distinct-index form is vacuous with a single xi
  if (s < 2) std::erase_if(specs, [](const IdentitySpec& sp) { return sp.id == "curvature.R_xi_xi_xi"; });
  const auto points = sample_points(fs.base().chart().sample_box, opt.points, opt.seed);

  Tally tally = sample_tally(
      specs, points,
      [&](std::size_t i, const Vec& p, Tally& t) {
        StructureJets sj(fs, p, opt.jet_order);
        const CurvaturePack pack = sj.chart.curvature();
        const auto probes = structure_probes(fs, sj, probe_seed(opt.seed, i));
        const std::size_t dim = sj.dim();
        const Vec zero(dim, 0.0);

        std::vector<Vec> phi2;
        for (const auto& pr : probes) phi2.push_back(phi_squared(sj, pr.v));

        for (std::size_t u = 0; u < probes.size(); ++u) {
          const auto& [xn, x] = probes[u];
          Vec expanded = x;
          for (int a = 0; a < s; ++a) axpy(-sj.eta_of(a, x), sj.xi_v[a], expanded);
          for (int j = 0; j < s; ++j) {
            const Vec nx = covariant_derivative(sj.chart, x, sj.xi[j]);
            t["reeb.nabla_xi"].observe(nx, scaled(-1.0, phi2[u]), p, label(xn) + ", " + idx("j", j));
            t["reeb.nabla_xi_expanded"].observe(nx, expanded, p, label(xn) + ", " + idx("j", j));
          }

          for (std::size_t v = 0; v < probes.size(); ++v) {
            const auto& [yn, y] = probes[v];
            const Matrix<double> op = pack.curvature_operator(x, y);
            Vec rhs = zero;
            for (int a = 0; a < s; ++a) {
              axpy(sj.eta_of(a, y), phi2[u], rhs);
              axpy(-sj.eta_of(a, x), phi2[v], rhs);
            }
            for (int a = 0; a < s; ++a)
              t["curvature.R_XY_xi"].observe(act(op, sj.xi_v[a]), rhs, p,
                                             label(xn, yn) + ", " + idx("i", a));
          }

          for (int j = 0; j < s; ++j) {
            const Matrix<double> op_x_xi = pack.curvature_operator(x, sj.xi_v[j]);
            const Matrix<double> op_xi_x = pack.curvature_operator(sj.xi_v[j], x);
            for (int a = 0; a < s; ++a) {
              const std::string where = label(xn) + ", " + idx("i", a) + ", " + idx("j", j);
              t["curvature.R_X_xi_xi"].observe(act(op_x_xi, sj.xi_v[a]), phi2[u], p, where);
              t["curvature.R_xi_X_xi"].observe(act(op_xi_x, sj.xi_v[a]), scaled(-1.0, phi2[u]),
                                               p, where);
            }
            for (std::size_t v = 0; v < probes.size(); ++v) {
              const auto& [yn, y] = probes[v];
              Vec rhs = zero;
              const double gxy = sj.inner(x, phi2[v]);
              for (int k = 0; k < s; ++k) {
                axpy(gxy, sj.xi_v[k], rhs);
                axpy(-sj.eta_of(k, y), phi2[u], rhs);
              }
              t["curvature.R_xi_X_Y"].observe(act(op_xi_x, y), rhs, p,
                                              label(xn, yn) + ", " + idx("j", j));
            }
          }
        }

        for (int k = 0; k < s; ++k)
          for (int j = 0; j < s; ++j) {
            const Matrix<double> op = pack.curvature_operator(sj.xi_v[k], sj.xi_v[j]);
            for (int a = 0; a < s; ++a) {
              const std::string where = idx("i", a) + ", " + idx("j", j) + ", " + idx("k", k);
              t[j == k ? "curvature.R_xi_xi_xi_repeated" : "curvature.R_xi_xi_xi"].observe(
                  act(op, sj.xi_v[a]), zero, p, where);
            }
          }
      },
      opt.threads);

  CheckReport report = start_report("curvature", fs.name(), fs.base().chart().params, opt);
  report.records = tally.records(opt.tolerance);
  report.duration_seconds = seconds_since(t0);
  return report;
}

CheckReport check_curvature_engine(const ChartManifold& m, const RunOptions& opt) {
  const auto t0 = Clock::now();
  const std::vector<IdentitySpec> specs = {
      {"engine.christoffel_symmetric", "Gamma^k_ij = Gamma^k_ji", "engine", true, false, false,
       1e-14},
      {"engine.riemann_antisymmetric", "R^l_kij = -R^l_kji", "engine", true, false, false, 1e-14},
      {"engine.riemann_lowered_antisymmetric", "R_lkij = -R_klij", "engine", true, false, false,
       1e-9},
      {"engine.riemann_pair_symmetry", "R_lkij = R_ijlk", "engine", true, false, false, 1e-9},
      {"engine.first_bianchi", "R(X,Y)Z + R(Y,Z)X + R(Z,X)Y = 0", "engine", true, false, false,
       1e-9},
      {"engine.metric_compatibility", "X g(Y,Z) = g(nabla_X Y, Z) + g(Y, nabla_X Z)", "engine",
       true, false, false, 1e-10},
  };
  const int order = std::max(opt.jet_order, 2);
  const std::size_t n = m.dim();
  const auto points = sample_points(m.chart().sample_box, opt.points, opt.seed);

  Tally tally = sample_tally(
      specs, points,
      [&](std::size_t i, const Vec& p, Tally& t) {
        ChartJets cj(m, p, order);
        const CurvaturePack pack = cj.curvature();
        Vec g1, g2, a1, a2, l1, l2, s1, s2;
        for (std::size_t k = 0; k < n; ++k)
          for (std::size_t a = 0; a < n; ++a)
            for (std::size_t b = 0; b < n; ++b) {
              g1.push_back(pack.christoffel(k, a, b));
              g2.push_back(pack.christoffel(k, b, a));
              for (std::size_t c = 0; c < n; ++c) {
                a1.push_back(pack.riemann(k, a, b, c));
                a2.push_back(-pack.riemann(k, a, c, b));
                l1.push_back(pack.lowered(k, a, b, c));
                l2.push_back(-pack.lowered(a, k, b, c));
                s2.push_back(pack.lowered(b, c, k, a));
              }
            }
        s1 = l1;
        t["engine.christoffel_symmetric"].observe(g1, g2, p, "all components");
        t["engine.riemann_antisymmetric"].observe(a1, a2, p, "all components");
        t["engine.riemann_lowered_antisymmetric"].observe(l1, l2, p, "all components");
        t["engine.riemann_pair_symmetry"].observe(s1, s2, p, "all components");

        const auto probes = probe_set(m.chart().coords, {}, 10, probe_seed(opt.seed, i));
        Rng rng(derive_seed(probe_seed(opt.seed, i), 2));
        auto pick = [&] {
          return static_cast<std::size_t>(rng.uniform() * static_cast<double>(probes.size()));
        };
        for (int trial = 0; trial < 64; ++trial) {
          const auto& x = probes[pick()];
          const auto& y = probes[pick()];
          const auto& z = probes[pick()];
          const Vec r1 = pack.curvature(x.v, y.v, z.v);
          const Vec r2 = pack.curvature(y.v, z.v, x.v);
          const Vec r3 = pack.curvature(z.v, x.v, y.v);
          const double scale = std::max({norm_inf(r1), norm_inf(r2), norm_inf(r3)});
          t["engine.first_bianchi"].observe(add(add(r1, r2), r3), Vec(n, 0.0), p,
                                            "X=" + x.name + ", Y=" + y.name + ", Z=" + z.name,
                                            scale);
        }

        // Affine fields Y = y0 + B (x - p) exercise the derivative terms.
        std::vector<Jet> delta;
        for (std::size_t k = 0; k < n; ++k) delta.push_back(cj.coords()[k] - p[k]);
        auto affine_field = [&] {
          std::vector<Jet> f(n);
          for (std::size_t k = 0; k < n; ++k) {
            Jet c(rng.uniform(-1.0, 1.0));
            for (std::size_t l = 0; l < n; ++l) c.add_scaled(rng.uniform(-1.0, 1.0), delta[l]);
            f[k] = std::move(c);
          }
          return f;
        };
        for (int trial = 0; trial < 8; ++trial) {
          const Vec x = rng.direction(n);
          const auto y = affine_field();
          const auto z = affine_field();
          const Jet gyz = metric_dot<Jet>(cj.metric(), y, z);
          double lhs = 0.0;
          for (std::size_t k = 0; k < n; ++k) lhs += x[k] * gyz.d(static_cast<int>(k));
          const Vec nxy = covariant_derivative(cj, x, y);
          const Vec nxz = covariant_derivative(cj, x, z);
          const Vec yv = values(y), zv = values(z);
          const double rhs = pack.inner(nxy, zv) + pack.inner(yv, nxz);
          t["engine.metric_compatibility"].observe(lhs, rhs, p,
                                                   "affine trial " + std::to_string(trial + 1));
        }
      },
      opt.threads);

  CheckReport report = start_report("engine", m.name(), m.chart().params, opt);
  report.records = tally.records(opt.tolerance);
  report.duration_seconds = seconds_since(t0);
  return report;
}

}  // namespace gkv
