#include "linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "errors.hpp"

namespace curvatura {

Vector::Vector(int n, double fill) : n_(n) {
  require(n >= 0 && n <= kMaxDim, ErrorKind::Argument, "vector dimension out of range");
  v_.fill(0.0);
  std::fill_n(v_.begin(), n, fill);
}

Vector::Vector(std::initializer_list<double> values) : n_(static_cast<int>(values.size())) {
  require(n_ <= kMaxDim, ErrorKind::Argument, "vector dimension out of range");
  std::copy(values.begin(), values.end(), v_.begin());
}

Vector Vector::unit(int n, int axis) {
  Vector e(n);
  e[axis] = 1.0;
  return e;
}

Matrix::Matrix(int n, double fill) : n_(n) {
  require(n >= 0 && n <= kMaxDim, ErrorKind::Argument, "matrix dimension out of range");
  a_.fill(0.0);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) (*this)(i, j) = fill;
}

Vector Matrix::row(int i) const {
  Vector r(n_);
  for (int j = 0; j < n_; ++j) r[j] = (*this)(i, j);
  return r;
}

Vector Matrix::column(int j) const {
  Vector c(n_);
  for (int i = 0; i < n_; ++i) c[i] = (*this)(i, j);
  return c;
}

void Matrix::set_column(int j, const Vector& v) {
  for (int i = 0; i < n_; ++i) (*this)(i, j) = v[i];
}

Matrix Matrix::identity(int n) {
  Matrix m(n);
  for (int i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::diagonal(const Vector& d) {
  Matrix m(d.size());
  for (int i = 0; i < d.size(); ++i) m(i, i) = d[i];
  return m;
}

Vector operator+(const Vector& a, const Vector& b) {
  Vector c(a.size());
  for (int i = 0; i < a.size(); ++i) c[i] = a[i] + b[i];
  return c;
}

Vector operator-(const Vector& a, const Vector& b) {
  Vector c(a.size());
  for (int i = 0; i < a.size(); ++i) c[i] = a[i] - b[i];
  return c;
}

Vector operator*(double s, const Vector& a) {
  Vector c(a.size());
  for (int i = 0; i < a.size(); ++i) c[i] = s * a[i];
  return c;
}

Matrix operator+(const Matrix& a, const Matrix& b) {
  Matrix c(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) c(i, j) = a(i, j) + b(i, j);
  return c;
}

Matrix operator-(const Matrix& a, const Matrix& b) {
  Matrix c(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) c(i, j) = a(i, j) - b(i, j);
  return c;
}

Matrix operator*(double s, const Matrix& a) {
  Matrix c(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) c(i, j) = s * a(i, j);
  return c;
}

Matrix operator*(const Matrix& a, const Matrix& b) {
  const int n = a.dim();
  Matrix c(n);
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) {
      const double aik = a(i, k);
      if (aik == 0.0) continue;
      for (int j = 0; j < n; ++j) c(i, j) += aik * b(k, j);
    }
  return c;
}

Vector operator*(const Matrix& a, const Vector& x) {
  Vector y(a.dim());
  for (int i = 0; i < a.dim(); ++i) {
    double s = 0.0;
    for (int j = 0; j < a.dim(); ++j) s += a(i, j) * x[j];
    y[i] = s;
  }
  return y;
}

double dot(const Vector& a, const Vector& b) {
  double s = 0.0;
  for (int i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm(const Vector& a) { return std::sqrt(dot(a, a)); }

double max_abs(const Vector& a) {
  double m = 0.0;
  for (double v : a) m = std::max(m, std::abs(v));
  return m;
}

Matrix outer(const Vector& a, const Vector& b) {
  Matrix m(a.size());
  for (int i = 0; i < a.size(); ++i)
    for (int j = 0; j < b.size(); ++j) m(i, j) = a[i] * b[j];
  return m;
}

Matrix transpose(const Matrix& a) {
  Matrix t(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) t(j, i) = a(i, j);
  return t;
}

double trace(const Matrix& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a(i, i);
  return s;
}

double frobenius_dot(const Matrix& a, const Matrix& b) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) s += a(i, j) * b(i, j);
  return s;
}

double max_abs(const Matrix& a) {
  double m = 0.0;
  for (int i = 0; i < a.dim(); ++i)
    for (int j = 0; j < a.dim(); ++j) m = std::max(m, std::abs(a(i, j)));
  return m;
}

namespace {

// LU with partial pivoting in place; returns the permutation sign, 0 if singular.
int lu_decompose(Matrix& a, std::array<int, kMaxDim>& perm) {
  const int n = a.dim();
  std::iota(perm.begin(), perm.begin() + n, 0);
  int sign = 1;
  for (int k = 0; k < n; ++k) {
    int pivot = k;
    for (int i = k + 1; i < n; ++i)
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    if (a(pivot, k) == 0.0) return 0;
    if (pivot != k) {
      for (int j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      std::swap(perm[k], perm[pivot]);
      sign = -sign;
    }
    for (int i = k + 1; i < n; ++i) {
      a(i, k) /= a(k, k);
      for (int j = k + 1; j < n; ++j) a(i, j) -= a(i, k) * a(k, j);
    }
  }
  return sign;
}

}  // namespace

double determinant(const Matrix& a) {
  Matrix lu = a;
  std::array<int, kMaxDim> perm{};
  const int sign = lu_decompose(lu, perm);
  if (sign == 0) return 0.0;
  double det = sign;
  for (int i = 0; i < a.dim(); ++i) det *= lu(i, i);
  return det;
}

Matrix inverse(const Matrix& a) {
  const int n = a.dim();
  Matrix lu = a;
  std::array<int, kMaxDim> perm{};
  require(lu_decompose(lu, perm) != 0, ErrorKind::Argument, "matrix is singular");
  Matrix inv(n);
  for (int col = 0; col < n; ++col) {
    Vector x(n);
    for (int i = 0; i < n; ++i) {
      double s = perm[i] == col ? 1.0 : 0.0;
      for (int j = 0; j < i; ++j) s -= lu(i, j) * x[j];
      x[i] = s;
    }
    for (int i = n - 1; i >= 0; --i) {
      double s = x[i];
      for (int j = i + 1; j < n; ++j) s -= lu(i, j) * x[j];
      x[i] = s / lu(i, i);
    }
    inv.set_column(col, x);
  }
  return inv;
}

Matrix cholesky_lower(const Matrix& a) {
  const int n = a.dim();
  Matrix l(n);
  for (int j = 0; j < n; ++j) {
    double d = a(j, j);
    for (int k = 0; k < j; ++k) d -= l(j, k) * l(j, k);
    require(d > 0.0, ErrorKind::Argument, "metric is not positive definite");
    l(j, j) = std::sqrt(d);
    for (int i = j + 1; i < n; ++i) {
      double s = a(i, j);
      for (int k = 0; k < j; ++k) s -= l(i, k) * l(j, k);
      l(i, j) = s / l(j, j);
    }
  }
  return l;
}

Matrix lower_triangular_inverse(const Matrix& l) {
  const int n = l.dim();
  Matrix inv(n);
  for (int col = 0; col < n; ++col) {
    for (int i = col; i < n; ++i) {
      double s = i == col ? 1.0 : 0.0;
      for (int k = col; k < i; ++k) s -= l(i, k) * inv(k, col);
      inv(i, col) = s / l(i, i);
    }
  }
  return inv;
}

SymMatrix::SymMatrix(int n) : m_(n) {}

SymMatrix SymMatrix::from(const Matrix& a) {
  SymMatrix s(a.dim());
  for (int i = 0; i < a.dim(); ++i)
    for (int j = i; j < a.dim(); ++j) s.set(i, j, 0.5 * (a(i, j) + a(j, i)));
  return s;
}

SymMatrix SymMatrix::identity(int n) { return from(Matrix::identity(n)); }

SymMatrix SymMatrix::diagonal(const Vector& d) { return from(Matrix::diagonal(d)); }

EigenSystem jacobi_eigen(const SymMatrix& h) {
  const int n = h.dim();
  Matrix a = h.matrix();
  Matrix v = Matrix::identity(n);

  const double scale = std::sqrt(frobenius_dot(a, a));
  const double tol = 1e-13 * scale;

  auto off_norm = [&] {
    double s = 0.0;
    for (int p = 0; p < n; ++p)
      for (int q = p + 1; q < n; ++q) s += 2.0 * a(p, q) * a(p, q);
    return std::sqrt(s);
  };

  bool below_tol = false;
  for (int sweep = 0; sweep < 64 && scale > 0.0; ++sweep) {
    const double off = off_norm();
    if (off == 0.0) break;
    if (off <= tol) {
      // One sweep past the tolerance; convergence is quadratic so this lands at roundoff.
      if (below_tol) break;
      below_tol = true;
    }
    for (int p = 0; p < n; ++p) {
      for (int q = p + 1; q < n; ++q) {
        const double apq = a(p, q);
        if (apq == 0.0) continue;
        const double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        const double t = (theta >= 0.0 ? 1.0 : -1.0) /
                         (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        for (int k = 0; k < n; ++k) {
          const double akp = a(k, p);
          const double akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (int k = 0; k < n; ++k) {
          const double apk = a(p, k);
          const double aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        a(p, q) = 0.0;
        a(q, p) = 0.0;
        for (int k = 0; k < n; ++k) {
          const double vkp = v(k, p);
          const double vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
    }
  }

  std::array<int, kMaxDim> order{};
  std::iota(order.begin(), order.begin() + n, 0);
  std::stable_sort(order.begin(), order.begin() + n,
                   [&](int x, int y) { return a(x, x) < a(y, y); });
  EigenSystem out{Vector(n), Matrix(n)};
  for (int k = 0; k < n; ++k) {
    out.values[k] = a(order[k], order[k]);
    out.vectors.set_column(k, v.column(order[k]));
  }
  return out;
}

}  // namespace curvatura
