#pragma once

// Central finite differences used as independent derivative oracles.
//
// Every comparison here uses the rule |jet - fd| <= tol * max(1, |fd|).

#include <algorithm>
#include <cmath>
#include <functional>
#include <span>
#include <vector>

#include "gkv/chart.hpp"
#include "gkv/fstructure.hpp"
#include "gkv/immersion.hpp"

namespace gkv::testing {

inline constexpr double kFdStep = 1e-5;
inline constexpr double kFdRelTol = 1e-6;

// d/dx_i of a vector-valued function at p.
inline Vec central_diff(const std::function<Vec(const Vec&)>& f, const Vec& p, std::size_t i,
                        double h = kFdStep) {
  Vec lo = p, hi = p;
  lo[i] -= h;
  hi[i] += h;
  const Vec a = f(lo), b = f(hi);
  Vec out(a.size());
  for (std::size_t k = 0; k < a.size(); ++k) out[k] = (b[k] - a[k]) / (2.0 * h);
  return out;
}

inline double rel_err(double jet, double fd) {
  return std::abs(jet - fd) / std::max(1.0, std::abs(fd));
}

// Worst relative error seen, plus a count of compared values.
struct Deviation {
  double worst = 0.0;
  std::size_t count = 0;

  void see(double jet, double fd) {
    worst = std::max(worst, rel_err(jet, fd));
    ++count;
  }
  void merge(const Deviation& o) {
    worst = std::max(worst, o.worst);
    count += o.count;
  }
};

inline Vec flatten(const Matrix<double>& m) { return Vec(m.data().begin(), m.data().end()); }

template <std::size_t R>
Vec flatten(const Tensor<double, R>& t) {
  return t.data();
}

// First partials of the metric from jets against differences of metric values.
inline Deviation metric_derivatives(const ChartManifold& m, const Vec& p) {
  Deviation dev;
  const ChartJets cj(m, p, 1);
  const std::size_t n = m.dim();
  for (std::size_t l = 0; l < n; ++l) {
    const Vec fd = central_diff([&](const Vec& q) { return flatten(metric_at(m, q).g); }, p, l);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) dev.see(cj.metric()(i, j).d(int(l)), fd[i * n + j]);
  }
  return dev;
}

// Christoffel symbols against the Koszul formula with differenced metric,
// and their jet derivatives against differences of Christoffel values.
inline Deviation christoffel_derivatives(const ChartManifold& m, const Vec& p) {
  Deviation dev;
  const std::size_t n = m.dim();
  std::vector<Vec> dg(n);
  for (std::size_t l = 0; l < n; ++l)
    dg[l] = central_diff([&](const Vec& q) { return flatten(metric_at(m, q).g); }, p, l);
  const MetricAt g = metric_at(m, p);
  const Tensor<double, 3> gamma = christoffel(m, p);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) {
        double s = 0.0;
        for (std::size_t l = 0; l < n; ++l)
          s += g.g_inv(k, l) * (dg[i][j * n + l] + dg[j][i * n + l] - dg[l][i * n + j]);
        dev.see(gamma(k, i, j), 0.5 * s);
      }
  const ChartJets cj(m, p, 2);
  for (std::size_t l = 0; l < n; ++l) {
    const Vec fd = central_diff([&](const Vec& q) { return flatten(christoffel(m, q)); }, p, l);
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
          dev.see(cj.christoffel()(k, i, j).d(int(l)), fd[(k * n + i) * n + j]);
  }
  return dev;
}

// R^l_kij = d_i G^l_jk - d_j G^l_ik + G^l_im G^m_jk - G^l_jm G^m_ik, with the
// derivatives of G taken by differences of Christoffel values.
inline Tensor<double, 4> riemann_by_differences(
    const std::function<Tensor<double, 3>(const Vec&)>& gamma_at, const Vec& p) {
  const Tensor<double, 3> g0 = gamma_at(p);
  const std::size_t n = g0.extent(0);
  std::vector<Vec> dG(n);
  for (std::size_t i = 0; i < n; ++i)
    dG[i] = central_diff([&](const Vec& q) { return flatten(gamma_at(q)); }, p, i);
  auto d = [&](std::size_t i, std::size_t l, std::size_t a, std::size_t b) {
    return dG[i][(l * n + a) * n + b];
  };
  Tensor<double, 4> r({n, n, n, n});
  for (std::size_t l = 0; l < n; ++l)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
          double v = d(i, l, j, k) - d(j, l, i, k);
          for (std::size_t mm = 0; mm < n; ++mm)
            v += g0(l, i, mm) * g0(mm, j, k) - g0(l, j, mm) * g0(mm, i, k);
          r(l, k, i, j) = v;
        }
  return r;
}

inline Deviation riemann_derivatives(const ChartManifold& m, const Vec& p) {
  Deviation dev;
  const CurvaturePack pack = riemann(m, p);
  const auto fd = riemann_by_differences([&](const Vec& q) { return christoffel(m, q); }, p);
  for (std::size_t k = 0; k < fd.data().size(); ++k) dev.see(pack.riemann.data()[k], fd.data()[k]);
  return dev;
}

// phi, xi and eta jets, d Phi, nabla phi and nabla xi against differences.
inline Deviation structure_derivatives(const FStructure& fs, const Vec& p) {
  Deviation dev;
  const std::size_t n = fs.dim();
  const StructureJets sj(fs, p, 2);
  auto phi_at = [&](const Vec& q) { return flatten(evaluate_tensor(fs.phi(), q)); };
  auto Phi_at = [&](const Vec& q) {
    const Matrix<double> g = metric_at(fs.base(), q).g;
    const Matrix<double> ph = evaluate_tensor(fs.phi(), q);
    return flatten(mat_mul(g, ph));
  };
  std::vector<Vec> dphi(n), dPhi(n);
  for (std::size_t l = 0; l < n; ++l) {
    dphi[l] = central_diff(phi_at, p, l);
    dPhi[l] = central_diff(Phi_at, p, l);
    for (std::size_t k = 0; k < n * n; ++k) dev.see(sj.phi(k / n, k % n).d(int(l)), dphi[l][k]);
    for (int i = 0; i < fs.s(); ++i) {
      const Vec dxi = central_diff(
          [&](const Vec& q) { return evaluate_field(fs.xi(i).components, q); }, p, l);
      const Vec deta = central_diff(
          [&](const Vec& q) { return evaluate_field(fs.eta(i).components, q); }, p, l);
      for (std::size_t k = 0; k < n; ++k) {
        dev.see(sj.xi[i][k].d(int(l)), dxi[k]);
        dev.see(sj.eta[i][k].d(int(l)), deta[k]);
      }
    }
  }

  // (d Phi)_{abc} = d_a Phi_bc - d_b Phi_ac + d_c Phi_ab
  const Form<double> dPhi_jet = values(exterior_derivative(two_form(sj.fundamental_form())));
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = a + 1; b < n; ++b)
      for (std::size_t c = b + 1; c < n; ++c) {
        const double fd = dPhi[a][b * n + c] - dPhi[b][a * n + c] + dPhi[c][a * n + b];
        dev.see(dPhi_jet[(1u << a) | (1u << b) | (1u << c)], fd);
      }

  // (nabla_i phi)^k_j = d_i phi^k_j + G^k_im phi^m_j - G^m_ij phi^k_m
  const Tensor<double, 3> gamma = christoffel(fs.base(), p);
  const Matrix<double> ph = evaluate_tensor(fs.phi(), p);
  const Tensor<double, 3> nphi = covariant_derivative(sj.chart, sj.phi);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < n; ++k)
      for (std::size_t j = 0; j < n; ++j) {
        double v = dphi[i][k * n + j];
        for (std::size_t mm = 0; mm < n; ++mm)
          v += gamma(k, i, mm) * ph(mm, j) - gamma(mm, i, j) * ph(k, mm);
        dev.see(nphi(i, k, j), v);
      }

  // (nabla_i xi)^k = d_i xi^k + G^k_im xi^m
  for (int s = 0; s < fs.s(); ++s) {
    const Vec xv = evaluate_field(fs.xi(s).components, p);
    for (std::size_t i = 0; i < n; ++i) {
      const Vec dxi = central_diff(
          [&](const Vec& q) { return evaluate_field(fs.xi(s).components, q); }, p, i);
      const Vec jet = covariant_derivative(sj.chart, unit_vector(n, i), sj.xi[s]);
      for (std::size_t k = 0; k < n; ++k) {
        double v = dxi[k];
        for (std::size_t mm = 0; mm < n; ++mm) v += gamma(k, i, mm) * xv[mm];
        dev.see(jet[k], v);
      }
    }
  }
  return dev;
}

// Immersion data: tangent map, second fundamental form, normal connection,
// induced and normal curvature, and nabla h, each against differences of
// lower-order quantities.  Order-2 geometry at shifted points supplies the
// differenced values.
inline Deviation immersion_derivatives(const Immersion& imm, const Vec& p) {
  Deviation dev;
  const std::size_t m = imm.dim();
  const std::size_t dim = imm.ambient_dim();
  const InducedGeometry geo = induce(imm, p, {.order = 3});
  // same pivots at shifted points, so the differenced frame is smooth
  auto low = [&](const Vec& q) {
    return induce(imm, q, {.order = 2, .normal_pivots = geo.normal_pivots});
  };
  auto map_at = [&](const Vec& q) {
    Vec out;
    for (const Expr& e : imm.map()) out.push_back(evaluate(e, q));
    return out;
  };

  std::vector<Vec> dT(m), dN(m), dh(m), domega(m);
  for (std::size_t a = 0; a < m; ++a) {
    const Vec dF = central_diff(map_at, p, a);
    for (std::size_t A = 0; A < dim; ++A) dev.see(geo.tangent(A, a), dF[A]);
    dT[a] = central_diff([&](const Vec& q) { return flatten(low(q).tangent); }, p, a);
    dN[a] = central_diff([&](const Vec& q) { return flatten(low(q).normal); }, p, a);
    // h as ambient vectors is independent of the normal frame
    dh[a] = central_diff(
        [&](const Vec& q) {
          const InducedGeometry g = low(q);
          Vec out;
          for (std::size_t b = 0; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c) {
              const Vec v = g.h_ambient(unit_vector(m, b), unit_vector(m, c));
              out.insert(out.end(), v.begin(), v.end());
            }
          return out;
        },
        p, a);
    domega[a] = central_diff([&](const Vec& q) { return flatten(low(q).normal_connection); }, p, a);
  }

  const Tensor<double, 3>& Gb = geo.ambient.christoffel;
  auto gamma_bar = [&](std::span<const double> x, std::span<const double> y) {
    Vec out(dim, 0.0);
    for (std::size_t A = 0; A < dim; ++A)
      for (std::size_t B = 0; B < dim; ++B)
        for (std::size_t C = 0; C < dim; ++C) out[A] += Gb(A, B, C) * x[B] * y[C];
    return out;
  };
  auto column = [&](const Matrix<double>& M, std::size_t c) {
    Vec v(M.rows());
    for (std::size_t r = 0; r < M.rows(); ++r) v[r] = M(r, c);
    return v;
  };

  // h(d_a, d_b) = normal part of d_a T_b + Gamma-bar(T_a, T_b)
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t b = 0; b < m; ++b) {
      Vec D(dim);
      for (std::size_t A = 0; A < dim; ++A) D[A] = dT[a][A * m + b];
      D = add(D, gamma_bar(column(geo.tangent, a), column(geo.tangent, b)));
      const Vec fd = geo.normal_part(D);
      const Vec jet = geo.h_frame(unit_vector(m, a), unit_vector(m, b));
      for (std::size_t al = 0; al < geo.q; ++al) dev.see(jet[al], fd[al]);
    }

  // omega(beta, a, alpha) = gbar(d_a N_alpha + Gamma-bar(T_a, N_alpha), N_beta)
  const std::size_t q = geo.q;
  for (std::size_t a = 0; a < m; ++a)
    for (std::size_t al = 0; al < q; ++al) {
      Vec W(dim);
      for (std::size_t A = 0; A < dim; ++A) W[A] = dN[a][A * q + al];
      W = add(W, gamma_bar(column(geo.tangent, a), column(geo.normal, al)));
      for (std::size_t be = 0; be < q; ++be)
        dev.see(geo.normal_connection(be, a, al), geo.gbar(W, column(geo.normal, be)));
    }

  // Induced curvature from differenced induced Christoffel symbols.
  const auto r_fd = riemann_by_differences([&](const Vec& q2) { return low(q2).christoffel; }, p);
  for (std::size_t k = 0; k < r_fd.data().size(); ++k)
    dev.see(geo.riemann->data()[k], r_fd.data()[k]);

  // Normal curvature from the differenced normal connection.
  for (std::size_t al = 0; al < q; ++al)
    for (std::size_t be = 0; be < q; ++be)
      for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b) {
          auto w = [&](std::size_t x, std::size_t y, std::size_t z) {
            return geo.normal_connection(x, y, z);
          };
          double v = domega[a][(al * m + b) * q + be] - domega[b][(al * m + a) * q + be];
          for (std::size_t ga = 0; ga < q; ++ga)
            v += w(al, a, ga) * w(ga, b, be) - w(al, b, ga) * w(ga, a, be);
          dev.see((*geo.normal_curvature)(al, be, a, b), v);
        }

  // (nabla_c h)(a,b) = nabla-perp_c h(a,b) - h(nabla_c d_a, d_b) - h(d_a, nabla_c d_b)
  for (std::size_t c = 0; c < m; ++c)
    for (std::size_t a = 0; a < m; ++a)
      for (std::size_t b = 0; b < m; ++b) {
        const Vec H = geo.h_ambient(unit_vector(m, a), unit_vector(m, b));
        Vec V(dim);
        for (std::size_t A = 0; A < dim; ++A) V[A] = dh[c][(a * m + b) * dim + A];
        V = add(V, gamma_bar(column(geo.tangent, c), H));
        Vec fd = geo.normal_part(V);
        for (std::size_t d = 0; d < m; ++d) {
          axpy(-geo.christoffel(d, c, a), geo.h_frame(unit_vector(m, d), unit_vector(m, b)), fd);
          axpy(-geo.christoffel(d, c, b), geo.h_frame(unit_vector(m, a), unit_vector(m, d)), fd);
        }
        const Vec jet = geo.nabla_h_of(unit_vector(m, c), unit_vector(m, a), unit_vector(m, b));
        for (std::size_t al = 0; al < q; ++al) dev.see(jet[al], fd[al]);
      }
  return dev;
}

}  // namespace gkv::testing
