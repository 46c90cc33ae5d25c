#include "qlip/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "qlip/error.hpp"
#include "qlip/tol.hpp"

namespace qlip {

Matrix::Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries)
    : rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows_ * cols_)
    throw Error(ErrorCode::DimensionMismatch, "matrix entry count mismatch");
}

Matrix Matrix::identity(std::size_t n) {
  Matrix m(n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

Matrix Matrix::from_rows(const std::vector<Vector>& rows) {
  if (rows.empty()) return Matrix(0, 0);
  Matrix m(rows.size(), rows.front().size());
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m.cols())
      throw Error(ErrorCode::DimensionMismatch, "ragged rows");
    for (std::size_t j = 0; j < m.cols(); ++j) m(i, j) = rows[i][j];
  }
  return m;
}

Matrix Matrix::transposed() const {
  Matrix t(cols_, rows_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t j = 0; j < cols_; ++j) t(j, i) = (*this)(i, j);
  return t;
}

Matrix Matrix::operator*(const Matrix& rhs) const {
  if (cols_ != rhs.rows_)
    throw Error(ErrorCode::DimensionMismatch, "matrix product shape");
  Matrix out(rows_, rhs.cols_);
  for (std::size_t i = 0; i < rows_; ++i)
    for (std::size_t k = 0; k < cols_; ++k) {
      double a = (*this)(i, k);
      if (a == 0.0) continue;
      for (std::size_t j = 0; j < rhs.cols_; ++j) out(i, j) += a * rhs(k, j);
    }
  return out;
}

Vector Matrix::operator*(const Vector& v) const {
  if (cols_ != v.size())
    throw Error(ErrorCode::DimensionMismatch, "matrix-vector shape");
  Vector out(rows_, 0.0);
  for (std::size_t i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < cols_; ++j) s += (*this)(i, j) * v[j];
    out[i] = s;
  }
  return out;
}

Vector Matrix::row(std::size_t i) const {
  Vector r(cols_);
  for (std::size_t j = 0; j < cols_; ++j) r[j] = (*this)(i, j);
  return r;
}

Matrix Matrix::select_rows(const std::vector<int>& idx) const {
  Matrix out(idx.size(), cols_);
  for (std::size_t i = 0; i < idx.size(); ++i)
    for (std::size_t j = 0; j < cols_; ++j)
      out(i, j) = (*this)(static_cast<std::size_t>(idx[i]), j);
  return out;
}

double Matrix::max_abs() const {
  double m = 0.0;
  for (double v : data_) m = std::max(m, std::abs(v));
  return m;
}

bool Matrix::all_finite() const {
  return std::all_of(data_.begin(), data_.end(),
                     [](double v) { return std::isfinite(v); });
}

VectorNorm dual(VectorNorm k) {
  switch (k) {
    case VectorNorm::L1: return VectorNorm::LInf;
    case VectorNorm::L2: return VectorNorm::L2;
    case VectorNorm::LInf: return VectorNorm::L1;
  }
  return VectorNorm::L2;
}

double norm(const Vector& v, VectorNorm k) {
  double s = 0.0;
  switch (k) {
    case VectorNorm::L1:
      for (double x : v) s += std::abs(x);
      return s;
    case VectorNorm::L2:
      for (double x : v) s += x * x;
      return std::sqrt(s);
    case VectorNorm::LInf:
      for (double x : v) s = std::max(s, std::abs(x));
      return s;
  }
  return 0.0;
}

double dual_norm(const Vector& v, VectorNorm k) { return norm(v, dual(k)); }

double norm_inf(const Vector& v) { return norm(v, VectorNorm::LInf); }

double dot(const Vector& a, const Vector& b) {
  return std::inner_product(a.begin(), a.end(), b.begin(), 0.0);
}

LuFactors lu_factor(const Matrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "LU needs a square matrix");
  const std::size_t n = m.rows();
  LuFactors f;
  f.lu = m;
  f.perm.resize(n);
  std::iota(f.perm.begin(), f.perm.end(), 0);
  double minp = n == 0 ? 1.0 : 0.0, maxp = n == 0 ? 1.0 : 0.0;
  for (std::size_t k = 0; k < n; ++k) {
    std::size_t piv = k;
    double best = std::abs(f.lu(k, k));
    for (std::size_t i = k + 1; i < n; ++i) {
      double a = std::abs(f.lu(i, k));
      if (a > best) {
        best = a;
        piv = i;
      }
    }
    if (piv != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(f.lu(k, j), f.lu(piv, j));
      std::swap(f.perm[k], f.perm[piv]);
    }
    double p = std::abs(f.lu(k, k));
    if (k == 0) {
      minp = maxp = p;
    } else {
      minp = std::min(minp, p);
      maxp = std::max(maxp, p);
    }
    if (p == 0.0) continue;  // singular; remaining pivots stay zero
    for (std::size_t i = k + 1; i < n; ++i) {
      double l = f.lu(i, k) / f.lu(k, k);
      f.lu(i, k) = l;
      if (l == 0.0) continue;
      for (std::size_t j = k + 1; j < n; ++j) f.lu(i, j) -= l * f.lu(k, j);
    }
  }
  f.min_pivot = minp;
  f.max_pivot = maxp;
  return f;
}

bool LuFactors::nonsingular() const {
  if (max_pivot == 0.0) return perm.empty();  // 0x0 matrix counts as nonsingular
  return min_pivot / max_pivot >= tol().pivot;
}

Vector LuFactors::solve(const Vector& rhs) const {
  const std::size_t n = perm.size();
  Vector y(n);
  for (std::size_t i = 0; i < n; ++i) y[i] = rhs[static_cast<std::size_t>(perm[i])];
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < i; ++j) y[i] -= lu(i, j) * y[j];
  for (std::size_t i = n; i-- > 0;) {
    for (std::size_t j = i + 1; j < n; ++j) y[i] -= lu(i, j) * y[j];
    y[i] /= lu(i, i);
  }
  return y;
}

std::optional<Vector> lu_solve(const Matrix& m, const Vector& rhs) {
  if (m.rows() != rhs.size())
    throw Error(ErrorCode::DimensionMismatch, "rhs length mismatch");
  LuFactors f = lu_factor(m);
  if (!f.nonsingular()) return std::nullopt;
  return f.solve(rhs);
}

bool is_nonsingular(const Matrix& m) { return lu_factor(m).nonsingular(); }

std::vector<Vector> kernel_basis(const Matrix& m) {
  const std::size_t rows = m.rows(), cols = m.cols();
  Matrix r = m;
  const double thresh = tol().pivot * std::max(1.0, m.max_abs());
  std::vector<int> pivot_col_of_row;
  std::vector<bool> is_pivot_col(cols, false);
  std::size_t lead = 0;
  for (std::size_t col = 0; col < cols && lead < rows; ++col) {
    std::size_t piv = lead;
    double best = std::abs(r(lead, col));
    for (std::size_t i = lead + 1; i < rows; ++i) {
      double a = std::abs(r(i, col));
      if (a > best) {
        best = a;
        piv = i;
      }
    }
    if (best <= thresh) continue;
    if (piv != lead)
      for (std::size_t j = 0; j < cols; ++j) std::swap(r(lead, j), r(piv, j));
    double p = r(lead, col);
    for (std::size_t j = 0; j < cols; ++j) r(lead, j) /= p;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == lead) continue;
      double f = r(i, col);
      if (f == 0.0) continue;
      for (std::size_t j = 0; j < cols; ++j) r(i, j) -= f * r(lead, j);
    }
    pivot_col_of_row.push_back(static_cast<int>(col));
    is_pivot_col[col] = true;
    ++lead;
  }
  std::vector<Vector> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot_col[free]) continue;
    Vector v(cols, 0.0);
    v[free] = 1.0;
    for (std::size_t rr = 0; rr < pivot_col_of_row.size(); ++rr)
      v[static_cast<std::size_t>(pivot_col_of_row[rr])] = -r(rr, free);
    basis.push_back(std::move(v));
  }
  // Gram-Schmidt so the basis is orthonormal.
  std::vector<Vector> ortho;
  for (Vector v : basis) {
    for (const Vector& u : ortho) {
      double p = dot(v, u);
      for (std::size_t j = 0; j < v.size(); ++j) v[j] -= p * u[j];
    }
    double nv = norm(v, VectorNorm::L2);
    if (nv <= thresh) continue;
    for (double& x : v) x /= nv;
    ortho.push_back(std::move(v));
  }
  return ortho;
}

SymEig sym_eig(const Matrix& m) {
  if (m.rows() != m.cols())
    throw Error(ErrorCode::DimensionMismatch, "sym_eig needs a square matrix");
  const std::size_t n = m.rows();
  const double scale = std::max(1.0, m.max_abs());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (std::abs(m(i, j) - m(j, i)) > tol().sym * scale)
        throw Error(ErrorCode::NotSymmetric, "sym_eig: input not symmetric");

  Matrix a = m;
  // enforce exact symmetry before sweeping
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      double v = 0.5 * (a(i, j) + a(j, i));
      a(i, j) = a(j, i) = v;
    }
  Matrix v = Matrix::identity(n);

  auto offdiag = [&] {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = i + 1; j < n; ++j) s += a(i, j) * a(i, j);
    return std::sqrt(s);
  };

  const int max_sweeps = 100;
  for (int sweep = 0; sweep < max_sweeps && offdiag() > 1e-14 * scale; ++sweep) {
    for (std::size_t p = 0; p < n; ++p)
      for (std::size_t q = p + 1; q < n; ++q) {
        double apq = a(p, q);
        if (std::abs(apq) <= 1e-300) continue;
        double theta = (a(q, q) - a(p, p)) / (2.0 * apq);
        double t = (theta >= 0 ? 1.0 : -1.0) /
                   (std::abs(theta) + std::sqrt(theta * theta + 1.0));
        double c = 1.0 / std::sqrt(t * t + 1.0);
        double s = t * c;
        for (std::size_t k = 0; k < n; ++k) {
          double akp = a(k, p), akq = a(k, q);
          a(k, p) = c * akp - s * akq;
          a(k, q) = s * akp + c * akq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double apk = a(p, k), aqk = a(q, k);
          a(p, k) = c * apk - s * aqk;
          a(q, k) = s * apk + c * aqk;
        }
        for (std::size_t k = 0; k < n; ++k) {
          double vkp = v(k, p), vkq = v(k, q);
          v(k, p) = c * vkp - s * vkq;
          v(k, q) = s * vkp + c * vkq;
        }
      }
  }

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t i, std::size_t j) { return a(i, i) > a(j, j); });
  SymEig out;
  out.values.resize(n);
  out.vectors = Matrix(n, n);
  for (std::size_t j = 0; j < n; ++j) {
    out.values[j] = a(order[j], order[j]);
    for (std::size_t i = 0; i < n; ++i) out.vectors(i, j) = v(i, order[j]);
  }
  return out;
}

}  // namespace qlip
