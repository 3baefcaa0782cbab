#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <concepts>
#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <type_traits>
#include <vector>

#include "hsvd/error.hpp"

namespace hsvd {

using cplx = std::complex<double>;

template <class T>
concept Scalar = std::same_as<T, double> || std::same_as<T, cplx>;

template <class T>
inline constexpr bool is_complex_v = std::same_as<T, cplx>;

// Scalar helpers that keep real arithmetic real (std::conj(double) would
// promote to complex).
inline double conj(double x) noexcept { return x; }
inline cplx conj(const cplx& z) noexcept { return std::conj(z); }
inline double abs2(double x) noexcept { return x * x; }
inline double abs2(const cplx& z) noexcept { return std::norm(z); }
inline double real_part(double x) noexcept { return x; }
inline double real_part(const cplx& z) noexcept { return z.real(); }
inline double imag_part(double) noexcept { return 0.0; }
inline double imag_part(const cplx& z) noexcept { return z.imag(); }

/// Dense row-major matrix over double or std::complex<double>.
///
/// A column vector is an m x 1 Matrix; there is no separate vector type.
template <Scalar T>
class Matrix {
 public:
  using value_type = T;

  Matrix() = default;

  Matrix(std::size_t rows, std::size_t cols, T fill = T{})
      : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

  Matrix(std::initializer_list<std::initializer_list<T>> rows) {
    rows_ = rows.size();
    cols_ = rows_ == 0 ? 0 : rows.begin()->size();
    data_.reserve(rows_ * cols_);
    for (const auto& r : rows) {
      if (r.size() != cols_)
        throw error(errc::dimension_mismatch, "ragged initializer list");
      data_.insert(data_.end(), r.begin(), r.end());
    }
  }

  static Matrix identity(std::size_t n) {
    Matrix out(n, n);
    for (std::size_t i = 0; i < n; ++i) out(i, i) = T{1};
    return out;
  }

  static Matrix column(std::span<const T> values) {
    Matrix out(values.size(), 1);
    std::copy(values.begin(), values.end(), out.data_.begin());
    return out;
  }

  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  std::size_t size() const noexcept { return data_.size(); }
  bool empty() const noexcept { return data_.empty(); }
  bool is_square() const noexcept { return rows_ == cols_; }

  T& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  const T& operator()(std::size_t i, std::size_t j) const {
    return data_[i * cols_ + j];
  }

  std::span<T> data() noexcept { return data_; }
  std::span<const T> data() const noexcept { return data_; }

  Matrix col(std::size_t j) const {
    Matrix out(rows_, 1);
    for (std::size_t i = 0; i < rows_; ++i) out(i, 0) = (*this)(i, j);
    return out;
  }

  void set_col(std::size_t j, const Matrix& v) {
    if (v.rows_ != rows_ || v.cols_ != 1)
      throw error(errc::dimension_mismatch, "set_col expects a column of matching height");
    for (std::size_t i = 0; i < rows_; ++i) (*this)(i, j) = v(i, 0);
  }

  Matrix block(std::size_t r0, std::size_t c0, std::size_t nr, std::size_t nc) const {
    if (r0 + nr > rows_ || c0 + nc > cols_)
      throw error(errc::dimension_mismatch, "block out of range");
    Matrix out(nr, nc);
    for (std::size_t i = 0; i < nr; ++i)
      for (std::size_t j = 0; j < nc; ++j) out(i, j) = (*this)(r0 + i, c0 + j);
    return out;
  }

  Matrix adjoint() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = hsvd::conj((*this)(i, j));
    return out;
  }

  Matrix transpose() const {
    Matrix out(cols_, rows_);
    for (std::size_t i = 0; i < rows_; ++i)
      for (std::size_t j = 0; j < cols_; ++j) out(j, i) = (*this)(i, j);
    return out;
  }

  Matrix& operator+=(const Matrix& o) {
    require_same_shape(o, "+=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] += o.data_[k];
    return *this;
  }

  Matrix& operator-=(const Matrix& o) {
    require_same_shape(o, "-=");
    for (std::size_t k = 0; k < data_.size(); ++k) data_[k] -= o.data_[k];
    return *this;
  }

  Matrix& operator*=(T s) {
    for (auto& x : data_) x *= s;
    return *this;
  }

  bool operator==(const Matrix&) const = default;

 private:
  void require_same_shape(const Matrix& o, const char* op) const {
    if (o.rows_ != rows_ || o.cols_ != cols_)
      throw error(errc::dimension_mismatch, std::string("shape mismatch in ") + op);
  }

  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<T> data_;
};

template <Scalar T>
Matrix<T> operator+(Matrix<T> a, const Matrix<T>& b) {
  a += b;
  return a;
}

template <Scalar T>
Matrix<T> operator-(Matrix<T> a, const Matrix<T>& b) {
  a -= b;
  return a;
}

template <Scalar T>
Matrix<T> operator*(Matrix<T> a, T s) {
  a *= s;
  return a;
}

template <Scalar T>
Matrix<T> operator*(T s, Matrix<T> a) {
  a *= s;
  return a;
}

template <Scalar T>
Matrix<T> operator*(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.rows())
    throw error(errc::dimension_mismatch,
                "product of " + std::to_string(a.rows()) + "x" + std::to_string(a.cols()) +
                    " and " + std::to_string(b.rows()) + "x" + std::to_string(b.cols()));
  Matrix<T> out(a.rows(), b.cols());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t k = 0; k < a.cols(); ++k) {
      const T aik = a(i, k);
      if (aik == T{}) continue;
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

// a^H * b without forming the adjoint.
template <Scalar T>
Matrix<T> adjoint_times(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.rows() != b.rows())
    throw error(errc::dimension_mismatch, "adjoint_times row mismatch");
  Matrix<T> out(a.cols(), b.cols());
  for (std::size_t k = 0; k < a.rows(); ++k)
    for (std::size_t i = 0; i < a.cols(); ++i) {
      const T aki = conj(a(k, i));
      for (std::size_t j = 0; j < b.cols(); ++j) out(i, j) += aki * b(k, j);
    }
  return out;
}

template <Scalar T>
double frobenius_norm(const Matrix<T>& a) {
  double s = 0.0;
  for (const T& x : a.data()) s += abs2(x);
  return std::sqrt(s);
}

template <Scalar T>
double max_abs(const Matrix<T>& a) {
  double m = 0.0;
  for (const T& x : a.data()) m = std::max(m, std::abs(x));
  return m;
}

// x^H y for column vectors.
template <Scalar T>
T dot(const Matrix<T>& x, const Matrix<T>& y) {
  if (x.rows() != y.rows() || x.cols() != 1 || y.cols() != 1)
    throw error(errc::dimension_mismatch, "dot expects equal-length columns");
  T s{};
  for (std::size_t i = 0; i < x.rows(); ++i) s += conj(x(i, 0)) * y(i, 0);
  return s;
}

template <Scalar T>
Matrix<T> hconcat(std::initializer_list<const Matrix<T>*> parts, std::size_t rows) {
  std::size_t cols = 0;
  for (const auto* p : parts) {
    if (p->cols() > 0 && p->rows() != rows)
      throw error(errc::dimension_mismatch, "hconcat height mismatch");
    cols += p->cols();
  }
  Matrix<T> out(rows, cols);
  std::size_t c0 = 0;
  for (const auto* p : parts) {
    for (std::size_t i = 0; i < p->rows(); ++i)
      for (std::size_t j = 0; j < p->cols(); ++j) out(i, c0 + j) = (*p)(i, j);
    c0 += p->cols();
  }
  return out;
}

template <Scalar T>
Matrix<T> select_columns(const Matrix<T>& a, std::span<const std::size_t> idx) {
  Matrix<T> out(a.rows(), idx.size());
  for (std::size_t c = 0; c < idx.size(); ++c)
    for (std::size_t i = 0; i < a.rows(); ++i) out(i, c) = a(i, idx[c]);
  return out;
}

template <Scalar To, Scalar From>
Matrix<To> matrix_cast(const Matrix<From>& a) {
  if constexpr (std::same_as<To, From>) {
    return a;
  } else if constexpr (std::same_as<To, cplx>) {
    Matrix<cplx> out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = cplx(a(i, j), 0.0);
    return out;
  } else {
    Matrix<double> out(a.rows(), a.cols());
    for (std::size_t i = 0; i < a.rows(); ++i)
      for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a(i, j).real();
    return out;
  }
}

// ||a^H a - I||_F
template <Scalar T>
double unitary_defect(const Matrix<T>& a) {
  return frobenius_norm(adjoint_times(a, a) - Matrix<T>::identity(a.cols()));
}

// Multiplies column v by a unit scalar so that its largest-magnitude entry is
// real and positive. Returns the applied factor.
template <Scalar T>
T normalize_phase(Matrix<T>& a, std::size_t j) {
  std::size_t best = 0;
  double best_mag = -1.0;
  for (std::size_t i = 0; i < a.rows(); ++i) {
    const double mag = std::abs(a(i, j));
    if (mag > best_mag * (1.0 + 1e-12)) {
      best_mag = mag;
      best = i;
    }
  }
  if (best_mag <= 0.0) return T{1};
  const T factor = conj(a(best, j)) / best_mag;
  for (std::size_t i = 0; i < a.rows(); ++i) a(i, j) *= factor;
  a(best, j) = T{best_mag};
  return factor;
}

}  // namespace hsvd
