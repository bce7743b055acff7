#pragma once

// Small dense linear algebra shared by real-valued and jet-valued code.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "gkv/error.hpp"
#include "gkv/jet.hpp"

namespace gkv {

using Vec = std::vector<double>;

template <class T>
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, const T& fill = T(0.0))
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  static Matrix identity(std::size_t n) {
    Matrix m(n, n);
    for (std::size_t i = 0; i < n; ++i) m(i, i) = T(1.0);
    return m;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  std::span<const T> data() const noexcept { return data_; }

 private:
  std::size_t rows_ = 0, cols_ = 0;
  std::vector<T> data_;
};

// Value (constant term) of a jet matrix.
Matrix<double> values(const Matrix<Jet>& m);
Vec values(std::span<const Jet> v);

// Inverse of a symmetric positive-definite matrix through an LDL^T
// factorization.  A pivot whose value falls below `pivot_threshold` raises
// DegenerateMetricError with `context` in the message.
template <class T>
Matrix<T> spd_inverse(const Matrix<T>& a, double pivot_threshold, const std::string& context) {
  const std::size_t n = a.rows();
  Matrix<T> lower = Matrix<T>::identity(n);
  std::vector<T> diag(n, T(0.0));
  for (std::size_t j = 0; j < n; ++j) {
    T d = a(j, j);
    for (std::size_t k = 0; k < j; ++k) d -= lower(j, k) * lower(j, k) * diag[k];
    if (!(value_of(d) >= pivot_threshold))
      throw DegenerateMetricError("metric is not positive definite at " + context +
                                  " (pivot " + std::to_string(value_of(d)) + ")");
    diag[j] = d;
    for (std::size_t i = j + 1; i < n; ++i) {
      T s = a(i, j);
      for (std::size_t k = 0; k < j; ++k) s -= lower(i, k) * lower(j, k) * diag[k];
      lower(i, j) = s / d;
    }
  }
  Matrix<T> inv(n, n);
  std::vector<T> y(n, T(0.0));
  for (std::size_t col = 0; col < n; ++col) {
    for (std::size_t i = 0; i < n; ++i) {
      T s(i == col ? 1.0 : 0.0);
      for (std::size_t k = 0; k < i; ++k) s -= lower(i, k) * y[k];
      y[i] = s;
    }
    for (std::size_t i = 0; i < n; ++i) y[i] = y[i] / diag[i];
    for (std::size_t ii = n; ii-- > 0;) {
      T s = y[ii];
      for (std::size_t k = ii + 1; k < n; ++k) s -= lower(k, ii) * inv(k, col);
      inv(ii, col) = s;
    }
  }
  return inv;
}

// Metric inner product a^T g b.
template <class T>
T metric_dot(const Matrix<T>& g, std::span<const T> a, std::span<const T> b) {
  T s(0.0);
  for (std::size_t i = 0; i < a.size(); ++i) {
    T row(0.0);
    for (std::size_t j = 0; j < b.size(); ++j) row += g(i, j) * b[j];
    s += a[i] * row;
  }
  return s;
}

template <class T>
std::vector<T> mat_vec(const Matrix<T>& m, std::span<const T> v) {
  std::vector<T> out(m.rows(), T(0.0));
  for (std::size_t i = 0; i < m.rows(); ++i)
    for (std::size_t j = 0; j < m.cols(); ++j) out[i] += m(i, j) * v[j];
  return out;
}

template <class T>
Matrix<T> mat_mul(const Matrix<T>& a, const Matrix<T>& b) {
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k)
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += a(i, k) * b(k, j);
  return out;
}

// Real-vector helpers.
Vec add(std::span<const double> a, std::span<const double> b);
Vec sub(std::span<const double> a, std::span<const double> b);
Vec scaled(double s, std::span<const double> a);
void axpy(double s, std::span<const double> x, Vec& y);
double norm_inf(std::span<const double> a);
double dot(std::span<const double> a, std::span<const double> b);
Vec unit_vector(std::size_t n, std::size_t i);

// Smallest eigenvalue of a symmetric matrix.
double min_symmetric_eigenvalue(const Matrix<double>& m);

// Deterministic random orthogonal matrix (QR of a seeded Gaussian matrix).
Matrix<double> random_orthogonal(std::size_t n, std::uint64_t seed);

// Determinant of a square matrix (partial-pivot LU).
double determinant(const Matrix<double>& m);

}  // namespace gkv
