#include "gkv/linalg.hpp"

#include <Eigen/Dense>
#include <random>

namespace gkv {

namespace {

Eigen::MatrixXd to_eigen(const Matrix<double>& m) {
  Eigen::MatrixXd out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j);
  return out;
}

}  // namespace

Matrix<double> values(const Matrix<Jet>& m) {
  Matrix<double> out(m.rows(), m.cols());
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out(i, j) = m(i, j).value();
  return out;
}

Vec values(std::span<const Jet> v) {
  Vec out;
  out.reserve(v.size());
  for (const auto& x : v) out.push_back(x.value());
  return out;
}

Vec add(std::span<const double> a, std::span<const double> b) {
  Vec out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] += b[i];
  return out;
}

Vec sub(std::span<const double> a, std::span<const double> b) {
  Vec out(a.begin(), a.end());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] -= b[i];
  return out;
}

Vec scaled(double s, std::span<const double> a) {
  Vec out(a.begin(), a.end());
  for (double& x : out) x *= s;
  return out;
}

void axpy(double s, std::span<const double> x, Vec& y) {
  for (std::size_t i = 0; i < y.size(); ++i) y[i] += s * x[i];
}

double norm_inf(std::span<const double> a) {
  double m = 0.0;
  for (double x : a) m = std::max(m, std::abs(x));
  return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

Vec unit_vector(std::size_t n, std::size_t i) {
  Vec v(n, 0.0);
  v[i] = 1.0;
  return v;
}

double min_symmetric_eigenvalue(const Matrix<double>& m) {
  if (m.rows() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> solver(to_eigen(m), Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

Matrix<double> random_orthogonal(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  Eigen::MatrixXd a(n, n);
  // Box-Muller keeps the draw sequence independent of the standard library.
  auto uniform = [&rng] { return (static_cast<double>(rng() >> 11) + 0.5) * 0x1.0p-53; };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      a(i, j) = std::sqrt(-2.0 * std::log(uniform())) * std::cos(2.0 * M_PI * uniform());
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(a);
  Eigen::MatrixXd q = qr.householderQ();
  Matrix<double> out(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j) out(i, j) = q(i, j);
  return out;
}

double determinant(const Matrix<double>& m) {
  if (m.rows() == 0) return 1.0;
  return to_eigen(m).partialPivLu().determinant();
}

}  // namespace gkv
