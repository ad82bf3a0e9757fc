#pragma once

// Small dense linear algebra for dimensions up to kMaxDim. Storage is inline
// so vectors and matrices are cheap value types that never touch the heap.

#include <array>
#include <initializer_list>
#include <span>

namespace curvatura {

inline constexpr int kMaxDim = 8;

class Vector {
 public:
  Vector() = default;
  explicit Vector(int n, double fill = 0.0);
  Vector(std::initializer_list<double> values);

  int size() const noexcept { return n_; }
  double& operator[](int i) noexcept { return v_[i]; }
  double operator[](int i) const noexcept { return v_[i]; }

  std::span<double> span() noexcept { return {v_.data(), static_cast<std::size_t>(n_)}; }
  std::span<const double> span() const noexcept {
    return {v_.data(), static_cast<std::size_t>(n_)};
  }
  double* begin() noexcept { return v_.data(); }
  double* end() noexcept { return v_.data() + n_; }
  const double* begin() const noexcept { return v_.data(); }
  const double* end() const noexcept { return v_.data() + n_; }

  static Vector unit(int n, int axis);

 private:
  int n_ = 0;
  std::array<double, kMaxDim> v_{};
};

class Matrix {
 public:
  Matrix() = default;
  explicit Matrix(int n, double fill = 0.0);

  int dim() const noexcept { return n_; }
  double& operator()(int i, int j) noexcept { return a_[i * kMaxDim + j]; }
  double operator()(int i, int j) const noexcept { return a_[i * kMaxDim + j]; }

  Vector row(int i) const;
  Vector column(int j) const;
  void set_column(int j, const Vector& v);

  static Matrix identity(int n);
  static Matrix diagonal(const Vector& d);

 private:
  int n_ = 0;
  std::array<double, kMaxDim * kMaxDim> a_{};
};

Vector operator+(const Vector& a, const Vector& b);
Vector operator-(const Vector& a, const Vector& b);
Vector operator*(double s, const Vector& a);
Matrix operator+(const Matrix& a, const Matrix& b);
Matrix operator-(const Matrix& a, const Matrix& b);
Matrix operator*(double s, const Matrix& a);
Matrix operator*(const Matrix& a, const Matrix& b);
Vector operator*(const Matrix& a, const Vector& x);

double dot(const Vector& a, const Vector& b);
double norm(const Vector& a);
double max_abs(const Vector& a);
Matrix outer(const Vector& a, const Vector& b);
Matrix transpose(const Matrix& a);
double trace(const Matrix& a);
/// Frobenius inner product sum_ij A_ij B_ij.
double frobenius_dot(const Matrix& a, const Matrix& b);
double max_abs(const Matrix& a);
double determinant(const Matrix& a);
Matrix inverse(const Matrix& a);
/// Lower-triangular L with L L^T = a. Throws Argument if a is not positive definite.
Matrix cholesky_lower(const Matrix& a);
Matrix lower_triangular_inverse(const Matrix& l);

// Symmetric matrix. Every write goes to both (i,j) and (j,i) so the stored
// entries are exactly symmetric.
class SymMatrix {
 public:
  SymMatrix() = default;
  explicit SymMatrix(int n);

  /// Symmetrizes as (a + a^T)/2.
  static SymMatrix from(const Matrix& a);
  static SymMatrix identity(int n);
  static SymMatrix diagonal(const Vector& d);

  int dim() const noexcept { return m_.dim(); }
  double operator()(int i, int j) const noexcept { return m_(i, j); }
  void set(int i, int j, double value) noexcept {
    m_(i, j) = value;
    m_(j, i) = value;
  }
  const Matrix& matrix() const noexcept { return m_; }

 private:
  Matrix m_;
};

struct EigenSystem {
  Vector values;   // ascending
  Matrix vectors;  // column k belongs to values[k]
};

/// Cyclic Jacobi rotations with a fixed (p, q) sweep order; stops once the
/// off-diagonal Frobenius norm drops below 1e-13 * ||H||_F.
EigenSystem jacobi_eigen(const SymMatrix& h);

}  // namespace curvatura
