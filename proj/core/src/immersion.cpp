#include "gkv/immersion.hpp"

#include <cmath>

#include "gkv/error.hpp"

namespace gkv {

Immersion::Immersion(std::string name, Chart source, std::shared_ptr<const FStructure> target,
                     std::vector<Expr> map)
    : name_(std::move(name)), source_(std::move(source)), target_(std::move(target)),
      map_(std::move(map)) {
  if (!target_) throw InvalidArgument("immersion '" + name_ + "' has no target");
  source_.validate();
  if (map_.size() != target_->dim())
    throw InvalidArgument("immersion '" + name_ + "' needs " + std::to_string(target_->dim()) +
                          " map components, got " + std::to_string(map_.size()));
  if (source_.dim() > target_->dim())
    throw InvalidArgument("immersion '" + name_ + "' has a source larger than its target");
  for (auto& e : map_) e = source_.bind(e);
}

namespace {

using JetVec = std::vector<Jet>;

bool is_zero(const Jet& j) { return j.is_constant() && j.value() == 0.0; }

Jet inner(const Matrix<Jet>& g, const JetVec& a, const JetVec& b) {
  Jet s;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (is_zero(a[i])) continue;
    Jet row;
    for (std::size_t j = 0; j < b.size(); ++j)
      if (!is_zero(b[j]) && !is_zero(g(i, j))) row += g(i, j) * b[j];
    s += a[i] * row;
  }
  return s;
}

double inner_v(const Matrix<double>& g, std::span<const double> a, std::span<const double> b) {
  return metric_dot<double>(g, a, b);
}

JetVec truncated(const JetVec& v, int order) {
  JetVec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.truncated(order));
  return out;
}

}  // namespace

InducedGeometry induce(const Immersion& imm, std::span<const double> p, const InduceOptions& opt) {
  const int K = opt.order;
  if (K < 2 || K > kMaxJetOrder)
    throw InsufficientOrderError("induced geometry needs jet order between 2 and " +
                                 std::to_string(kMaxJetOrder));
  const std::size_t m = imm.dim(), N = imm.ambient_dim(), q = N - m;
  if (p.size() != m) throw InvalidArgument("point dimension does not match the source chart");
  if (opt.normal_pivots && opt.normal_pivots->size() != q)
    throw InvalidArgument("pinned normal pivots must name one ambient axis per normal direction");
  const FStructure& fs = imm.target();
  const std::string where = "source point " + describe_point(p) + " of '" + imm.name() + "'";

  InducedGeometry geo;
  geo.m = m;
  geo.dim = N;
  geo.q = q;
  geo.order = K;
  geo.point.assign(p.begin(), p.end());

  const JetVec u = Jet::seed_all(p, K);
  JetVec F;
  for (const auto& e : imm.map()) F.push_back(evaluate(e, u));
  geo.ambient_point = values(F);

  const int amb_order = std::max(K - 1, 2);
  const StructureJets amb(fs, geo.ambient_point, amb_order);
  geo.ambient = amb.chart.curvature();
  geo.phi = amb.phi_v;
  geo.xi = amb.xi_v;
  geo.eta = amb.eta_v;
  geo.nabla_xi_ambient = Tensor<double, 3>({amb.xi.size(), N, N});
  for (std::size_t i = 0; i < amb.xi.size(); ++i)
    for (std::size_t B = 0; B < N; ++B) {
      const Vec v = covariant_derivative(amb.chart, unit_vector(N, B), amb.xi[i]);
      for (std::size_t A = 0; A < N; ++A) geo.nabla_xi_ambient(i, A, B) = v[A];
    }

  // Ambient fields along the immersion, as jets in the source variables.
  const JetComposer comp(F, K - 1);
  Matrix<Jet> gb(N, N);
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t B = A; B < N; ++B) gb(A, B) = gb(B, A) = comp.apply(amb.chart.metric()(A, B));
  Tensor<Jet, 3> gam({N, N, N});
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t B = 0; B < N; ++B)
      for (std::size_t C = B; C < N; ++C)
        gam(A, B, C) = gam(A, C, B) = comp.apply(amb.chart.christoffel()(A, B, C)).truncated(K - 2);
  Matrix<Jet> phi_u(N, N);
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t B = 0; B < N; ++B) phi_u(A, B) = comp.apply(amb.phi(A, B));
  std::vector<JetVec> xi_u;
  for (const auto& f : amb.xi) {
    JetVec v;
    for (const auto& c : f) v.push_back(comp.apply(c));
    xi_u.push_back(std::move(v));
  }

  // Tangent frame T_a = d_a F and the induced metric.
  std::vector<JetVec> T(m, JetVec(N));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t A = 0; A < N; ++A) T[a][A] = F[A].derivative(static_cast<int>(a));
  geo.tangent = Matrix<double>(N, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t A = 0; A < N; ++A) geo.tangent(A, a) = T[a][A].value();

  std::vector<JetVec> gT(m, JetVec(N));  // gbar T_a, lowered
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t A = 0; A < N; ++A) {
      Jet s;
      for (std::size_t B = 0; B < N; ++B)
        if (!is_zero(gb(A, B)) && !is_zero(T[a][B])) s += gb(A, B) * T[a][B];
      gT[a][A] = std::move(s);
    }
  Matrix<Jet> G(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a; b < m; ++b) {
      Jet s;
      for (std::size_t A = 0; A < N; ++A)
        if (!is_zero(T[a][A]) && !is_zero(gT[b][A])) s += T[a][A] * gT[b][A];
      G(a, b) = G(b, a) = std::move(s);
    }
  geo.metric = values(G);
  const double lmin = min_symmetric_eigenvalue(geo.metric);
  geo.min_singular_value = std::sqrt(std::max(lmin, 0.0));
  if (!(geo.min_singular_value > kRankThreshold))
    throw RankDeficiencyError("differential is rank deficient at " + where);
  const Matrix<Jet> Ginv = spd_inverse(G, 0.0, where);
  geo.metric_inv = values(Ginv);

  // Normal frame: modified Gram-Schmidt over the ambient coordinate
  // directions after the tangent frame, pivoting on the largest remainder.
  std::vector<JetVec> basis;
  for (std::size_t a = 0; a < m; ++a) {
    JetVec v = T[a];
    for (const auto& b : basis) {
      const Jet c = inner(gb, v, b);
      for (std::size_t A = 0; A < N; ++A) v[A] -= c * b[A];
    }
    const Jet nrm = sqrt(inner(gb, v, v));
    if (!(nrm.value() > kRankThreshold))
      throw RankDeficiencyError("tangent frame is rank deficient at " + where);
    for (auto& x : v) x /= nrm;
    basis.push_back(std::move(v));
  }
  const Matrix<double> gb_v = values(gb);
  std::vector<bool> used(N, false);
  std::vector<JetVec> normals;
  for (std::size_t alpha = 0; alpha < q; ++alpha) {
    int best = -1;
    double best_norm = 0.0;
    for (std::size_t A = 0; A < N; ++A) {
      if (used[A]) continue;
      if (opt.normal_pivots && A != opt.normal_pivots->at(alpha)) continue;
      Vec v = unit_vector(N, A);
      for (const auto& b : basis) {
        const Vec bv = values(b);
        axpy(-inner_v(gb_v, v, bv), bv, v);
      }
      const double nrm = std::sqrt(std::max(inner_v(gb_v, v, v), 0.0));
      if (nrm > best_norm) {
        best_norm = nrm;
        best = static_cast<int>(A);
      }
    }
    if (best < 0 || !(best_norm > kRankThreshold))
      throw RankDeficiencyError("normal frame is rank deficient at " + where);
    used[best] = true;
    geo.normal_pivots.push_back(static_cast<std::size_t>(best));
    JetVec v(N);
    v[best] = Jet(1.0);
    for (const auto& b : basis) {
      const Jet c = inner(gb, v, b);
      for (std::size_t A = 0; A < N; ++A) v[A] -= c * b[A];
    }
    const Jet nrm = sqrt(inner(gb, v, v));
    for (auto& x : v) x /= nrm;
    basis.push_back(v);
    normals.push_back(std::move(v));
  }
  if (opt.normal_mixing_seed && q > 0) {
    const Matrix<double> o = random_orthogonal(q, *opt.normal_mixing_seed);
    std::vector<JetVec> mixed(q, JetVec(N));
    for (std::size_t beta = 0; beta < q; ++beta)
      for (std::size_t A = 0; A < N; ++A) {
        Jet s;
        for (std::size_t alpha = 0; alpha < q; ++alpha) s.add_scaled(o(alpha, beta), normals[alpha][A]);
        mixed[beta][A] = std::move(s);
      }
    normals = std::move(mixed);
  }
  geo.normal = Matrix<double>(N, q);
  for (std::size_t alpha = 0; alpha < q; ++alpha)
    for (std::size_t A = 0; A < N; ++A) geo.normal(A, alpha) = normals[alpha][A].value();

  // Ambient derivatives along the tangent frame: D_ab = gbar_{d_a} T_b and
  // W_{a alpha} = gbar_{d_a} N_alpha.
  const int low = K - 2;
  Matrix<Jet> gb_low(N, N);
  for (std::size_t A = 0; A < N; ++A)
    for (std::size_t B = 0; B < N; ++B) gb_low(A, B) = gb(A, B).truncated(low);
  std::vector<JetVec> T_low, N_low;
  for (const auto& t : T) T_low.push_back(truncated(t, low));
  for (const auto& n : normals) N_low.push_back(truncated(n, low));

  // gt[a](A, C) = Gamma^A_{BC} T_a^B
  std::vector<Matrix<Jet>> gt(m, Matrix<Jet>(N, N));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t A = 0; A < N; ++A)
      for (std::size_t C = 0; C < N; ++C) {
        Jet s;
        for (std::size_t B = 0; B < N; ++B)
          if (!is_zero(gam(A, B, C)) && !is_zero(T_low[a][B])) s += gam(A, B, C) * T_low[a][B];
        gt[a](A, C) = std::move(s);
      }
  auto covariant = [&](std::size_t a, const JetVec& field) {
    JetVec out(N);
    for (std::size_t A = 0; A < N; ++A) {
      Jet s = field[A].derivative(static_cast<int>(a)).truncated(low);
      for (std::size_t C = 0; C < N; ++C)
        if (!is_zero(gt[a](A, C)) && !is_zero(field[C])) s += gt[a](A, C) * field[C].truncated(low);
      out[A] = std::move(s);
    }
    return out;
  };

  std::vector<std::vector<JetVec>> D(m, std::vector<JetVec>(m));
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) D[a][b] = covariant(a, T[b]);

  Tensor<Jet, 3> hj({q, m, m});
  for (std::size_t alpha = 0; alpha < q; ++alpha)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) hj(alpha, a, b) = inner(gb_low, D[a][b], N_low[alpha]);

  Matrix<Jet> Ginv_low(m, m);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) Ginv_low(a, b) = Ginv(a, b).truncated(low);
  Tensor<Jet, 3> gam_ind({m, m, m});
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      JetVec lowered(m);
      for (std::size_t d = 0; d < m; ++d) lowered[d] = inner(gb_low, D[a][b], T_low[d]);
      for (std::size_t c = 0; c < m; ++c) {
        Jet s;
        for (std::size_t d = 0; d < m; ++d) s += Ginv_low(c, d) * lowered[d];
        gam_ind(c, a, b) = std::move(s);
      }
    }

  Tensor<Jet, 3> omega({q, m, q});  // (beta, a, alpha)
  geo.shape = Tensor<double, 3>({q, m, m});
  for (std::size_t alpha = 0; alpha < q; ++alpha)
    for (std::size_t a = 0; a < m; ++a) {
      const JetVec W = covariant(a, normals[alpha]);
      for (std::size_t beta = 0; beta < q; ++beta)
        omega(beta, a, alpha) = inner(gb_low, W, N_low[beta]);
      const Vec Wv = values(W);
      for (std::size_t b = 0; b < m; ++b)
        geo.shape(alpha, a, b) = -inner_v(gb_v, Wv, values(T[b]));
    }

  geo.h = Tensor<double, 3>({q, m, m});
  for (std::size_t alpha = 0; alpha < q; ++alpha)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) geo.h(alpha, a, b) = hj(alpha, a, b).value();
  geo.christoffel = Tensor<double, 3>({m, m, m});
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) geo.christoffel(c, a, b) = gam_ind(c, a, b).value();
  geo.normal_connection = Tensor<double, 3>({q, m, q});
  for (std::size_t beta = 0; beta < q; ++beta)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t alpha = 0; alpha < q; ++alpha)
        geo.normal_connection(beta, a, alpha) = omega(beta, a, alpha).value();

  // Christoffel symbols of the induced metric, for cross-validation.
  geo.christoffel_metric = Tensor<double, 3>({m, m, m});
  {
    Tensor<double, 3> dG({m, m, m});  // d_i G_jl
    for (std::size_t i = 0; i < m; ++i)
      for (std::size_t j = 0; j < m; ++j)
        for (std::size_t l = 0; l < m; ++l) dG(i, j, l) = G(j, l).d(static_cast<int>(i));
    for (std::size_t c = 0; c < m; ++c)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          double s = 0.0;
          for (std::size_t l = 0; l < m; ++l)
            s += geo.metric_inv(c, l) * (dG(a, b, l) + dG(b, a, l) - dG(l, a, b));
          geo.christoffel_metric(c, a, b) = 0.5 * s;
        }
  }

  // phi restricted to the tangent space, its normal part, and nabla P.
  {
    std::vector<JetVec> phiT(m, JetVec(N));
    for (std::size_t b = 0; b < m; ++b)
      for (std::size_t A = 0; A < N; ++A) {
        Jet s;
        for (std::size_t B = 0; B < N; ++B)
          if (!is_zero(phi_u(A, B)) && !is_zero(T[b][B])) s += phi_u(A, B) * T[b][B];
        phiT[b][A] = std::move(s);
      }
    Matrix<Jet> P(m, m);
    for (std::size_t b = 0; b < m; ++b) {
      JetVec lowered(m);
      for (std::size_t d = 0; d < m; ++d) {
        Jet s;
        for (std::size_t A = 0; A < N; ++A) s += gT[d][A] * phiT[b][A];
        lowered[d] = std::move(s);
      }
      for (std::size_t c = 0; c < m; ++c) {
        Jet s;
        for (std::size_t d = 0; d < m; ++d) s += Ginv(c, d) * lowered[d];
        P(c, b) = std::move(s);
      }
    }
    geo.phi_tangent = values(P);
    geo.phi_normal = Matrix<double>(q, m);
    for (std::size_t b = 0; b < m; ++b) {
      const Vec pv = values(phiT[b]);
      for (std::size_t alpha = 0; alpha < q; ++alpha)
        geo.phi_normal(alpha, b) = inner_v(gb_v, pv, values(normals[alpha]));
    }
    geo.nabla_phi_tangent = Tensor<double, 3>({m, m, m});
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t b = 0; b < m; ++b) {
          double s = P(c, b).d(static_cast<int>(a));
          for (std::size_t d = 0; d < m; ++d)
            s += geo.christoffel(c, a, d) * geo.phi_tangent(d, b) -
                 geo.christoffel(d, a, b) * geo.phi_tangent(c, d);
          geo.nabla_phi_tangent(a, c, b) = s;
        }
  }

  // xi split into tangential and normal parts, and nabla xi on M.
  {
    const int s = static_cast<int>(xi_u.size());
    geo.nabla_xi = Tensor<double, 3>({static_cast<std::size_t>(s), m, m});
    for (int i = 0; i < s; ++i) {
      JetVec lowered(m);
      for (std::size_t d = 0; d < m; ++d) {
        Jet acc;
        for (std::size_t A = 0; A < N; ++A)
          if (!is_zero(xi_u[i][A])) acc += gT[d][A] * xi_u[i][A];
        lowered[d] = std::move(acc);
      }
      JetVec xt(m);
      for (std::size_t c = 0; c < m; ++c) {
        Jet acc;
        for (std::size_t d = 0; d < m; ++d) acc += Ginv(c, d) * lowered[d];
        xt[c] = std::move(acc);
      }
      const Vec xtv = values(xt);
      geo.xi_tangent.push_back(xtv);
      Vec nu(q);
      const Vec xv = values(xi_u[i]);
      for (std::size_t alpha = 0; alpha < q; ++alpha)
        nu[alpha] = inner_v(gb_v, xv, values(normals[alpha]));
      geo.xi_normal.push_back(std::move(nu));
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t a = 0; a < m; ++a) {
          double acc = xt[c].d(static_cast<int>(a));
          for (std::size_t b = 0; b < m; ++b) acc += geo.christoffel(c, a, b) * xtv[b];
          geo.nabla_xi(i, c, a) = acc;
        }
    }
  }

  // Quantities that need one more derivative of h, Gamma and omega.
  if (K >= 3) {
    geo.riemann = riemann_from_christoffel(gam_ind);

    Tensor<double, 4> rp({q, q, m, m});
    for (std::size_t al = 0; al < q; ++al)
      for (std::size_t be = 0; be < q; ++be)
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = a + 1; b < m; ++b) {
            const double d = omega(al, b, be).d(static_cast<int>(a)) -
                             omega(al, a, be).d(static_cast<int>(b));
            double c1 = 0.0, c2 = 0.0;
            for (std::size_t ga = 0; ga < q; ++ga) {
              c1 += geo.normal_connection(al, a, ga) * geo.normal_connection(ga, b, be);
              c2 += geo.normal_connection(al, b, ga) * geo.normal_connection(ga, a, be);
            }
            const double v = d + (c1 - c2);
            rp(al, be, a, b) = v;
            rp(al, be, b, a) = -v;
          }
    geo.normal_curvature = std::move(rp);

    Tensor<double, 4> nh({q, m, m, m});
    for (std::size_t al = 0; al < q; ++al)
      for (std::size_t c = 0; c < m; ++c)
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = 0; b < m; ++b) {
            double v = hj(al, a, b).d(static_cast<int>(c));
            for (std::size_t be = 0; be < q; ++be)
              v += geo.normal_connection(al, c, be) * geo.h(be, a, b);
            for (std::size_t d = 0; d < m; ++d)
              v -= geo.christoffel(d, c, a) * geo.h(al, d, b) +
                   geo.christoffel(d, c, b) * geo.h(al, a, d);
            nh(al, c, a, b) = v;
          }
    geo.nabla_h = std::move(nh);
  }
  return geo;
}

Vec InducedGeometry::push(std::span<const double> x) const { return act(tangent, x); }

Vec InducedGeometry::tangential(std::span<const double> v) const {
  Vec lowered(m, 0.0);
  for (std::size_t d = 0; d < m; ++d) {
    Vec t(dim);
    for (std::size_t A = 0; A < dim; ++A) t[A] = tangent(A, d);
    lowered[d] = gbar(t, v);
  }
  return act(metric_inv, lowered);
}

Vec InducedGeometry::normal_part(std::span<const double> v) const {
  Vec out(q);
  for (std::size_t alpha = 0; alpha < q; ++alpha) {
    Vec n(dim);
    for (std::size_t A = 0; A < dim; ++A) n[A] = normal(A, alpha);
    out[alpha] = gbar(n, v);
  }
  return out;
}

Vec InducedGeometry::from_frame(std::span<const double> nu) const { return act(normal, nu); }

double InducedGeometry::g(std::span<const double> x, std::span<const double> y) const {
  return metric_dot<double>(metric, x, y);
}

double InducedGeometry::gbar(std::span<const double> v, std::span<const double> w) const {
  return metric_dot<double>(ambient.g, v, w);
}

double InducedGeometry::eta_t(int i, std::span<const double> x) const {
  return dot(eta[i], push(x));
}

Vec InducedGeometry::h_frame(std::span<const double> x, std::span<const double> y) const {
  Vec out(q, 0.0);
  for (std::size_t alpha = 0; alpha < q; ++alpha) {
    double s = 0.0;
    for (std::size_t a = 0; a < m; ++a) {
      if (x[a] == 0.0) continue;
      for (std::size_t b = 0; b < m; ++b) s += x[a] * h(alpha, a, b) * y[b];
    }
    out[alpha] = s;
  }
  return out;
}

Vec InducedGeometry::shape_op(std::span<const double> nu, std::span<const double> x) const {
  Vec lowered(m, 0.0);
  for (std::size_t alpha = 0; alpha < q; ++alpha) {
    if (nu[alpha] == 0.0) continue;
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) lowered[b] += nu[alpha] * x[a] * shape(alpha, a, b);
  }
  return act(metric_inv, lowered);
}

Vec InducedGeometry::nabla_xi_of(int i, std::span<const double> x) const {
  Vec out(m, 0.0);
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t a = 0; a < m; ++a) out[c] += nabla_xi(i, c, a) * x[a];
  return out;
}

Vec InducedGeometry::nabla_phi_of(std::span<const double> x, std::span<const double> y) const {
  return apply_nabla(nabla_phi_tangent, x, y);
}

namespace {

void require(bool have, const char* what) {
  if (!have)
    throw InsufficientOrderError(std::string(what) + " needs jet order >= 3");
}

}  // namespace

Vec InducedGeometry::curvature(std::span<const double> x, std::span<const double> y,
                               std::span<const double> z) const {
  require(riemann.has_value(), "induced curvature");
  const auto& r = *riemann;
  Vec out(m, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      const double w = x[a] * y[b] - x[b] * y[a];
      if (w == 0.0) continue;
      for (std::size_t d = 0; d < m; ++d)
        for (std::size_t c = 0; c < m; ++c) out[d] += r(d, c, a, b) * w * z[c];
    }
  return out;
}

Vec InducedGeometry::normal_curvature_of(std::span<const double> x, std::span<const double> y,
                                         std::span<const double> nu) const {
  require(normal_curvature.has_value(), "normal curvature");
  const auto& r = *normal_curvature;
  Vec out(q, 0.0);
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = a + 1; b < m; ++b) {
      const double w = x[a] * y[b] - x[b] * y[a];
      if (w == 0.0) continue;
      for (std::size_t al = 0; al < q; ++al)
        for (std::size_t be = 0; be < q; ++be) out[al] += r(al, be, a, b) * w * nu[be];
    }
  return out;
}

Vec InducedGeometry::nabla_h_of(std::span<const double> z, std::span<const double> u,
                                std::span<const double> v) const {
  require(nabla_h.has_value(), "covariant derivative of h");
  const auto& t = *nabla_h;
  Vec out(q, 0.0);
  for (std::size_t al = 0; al < q; ++al) {
    double s = 0.0;
    for (std::size_t c = 0; c < m; ++c) {
      if (z[c] == 0.0) continue;
      for (std::size_t a = 0; a < m; ++a) {
        if (u[a] == 0.0) continue;
        for (std::size_t b = 0; b < m; ++b) s += z[c] * u[a] * v[b] * t(al, c, a, b);
      }
    }
    out[al] = s;
  }
  return out;
}

Vec InducedGeometry::ambient_nabla_xi(int i, std::span<const double> x) const {
  const Vec v = push(x);
  Vec out(dim, 0.0);
  for (std::size_t A = 0; A < dim; ++A)
    for (std::size_t B = 0; B < dim; ++B) out[A] += nabla_xi_ambient(i, A, B) * v[B];
  return out;
}

Vec InducedGeometry::ambient_curvature(std::span<const double> x, std::span<const double> y,
                                       std::span<const double> z) const {
  return ambient.curvature(push(x), push(y), push(z));
}

RbarH rbar_dot_h(const InducedGeometry& geo, std::span<const double> x,
                 std::span<const double> y, std::span<const double> z,
                 std::span<const double> u) {
  RbarH out;
  out.normal_term = geo.normal_curvature_of(x, y, geo.h_frame(z, u));
  out.z_term = scaled(-1.0, geo.h_frame(geo.curvature(x, y, z), u));
  out.u_term = scaled(-1.0, geo.h_frame(z, geo.curvature(x, y, u)));
  out.total = add(add(out.normal_term, out.z_term), out.u_term);
  return out;
}

Vec rbar_dot_nabla_h(const InducedGeometry& geo, std::span<const double> x,
                     std::span<const double> y, std::span<const double> z,
                     std::span<const double> u, std::span<const double> v) {
  require(geo.nabla_h.has_value() && geo.normal_curvature.has_value(),
          "the action of the curvature on nabla h");
  Vec out = geo.normal_curvature_of(x, y, geo.nabla_h_of(z, u, v));
  out = sub(out, geo.nabla_h_of(geo.curvature(x, y, z), u, v));
  out = sub(out, geo.nabla_h_of(z, geo.curvature(x, y, u), v));
  out = sub(out, geo.nabla_h_of(z, u, geo.curvature(x, y, v)));
  return out;
}

}  // namespace gkv
