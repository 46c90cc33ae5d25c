#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

namespace qlip {

using Vector = std::vector<double>;

/// Dense row-major matrix sized for desk-scale problems (n, m <= ~30).
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols)
      : rows_(rows), cols_(cols), data_(rows * cols, 0.0) {}
  Matrix(std::size_t rows, std::size_t cols, std::vector<double> entries);

  static Matrix identity(std::size_t n);
  static Matrix from_rows(const std::vector<Vector>& rows);

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }

  double& operator()(std::size_t i, std::size_t j) { return data_[i * cols_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * cols_ + j]; }

  const std::vector<double>& data() const { return data_; }

  Matrix transposed() const;
  Matrix operator*(const Matrix& rhs) const;
  Vector operator*(const Vector& v) const;

  Vector row(std::size_t i) const;
  Matrix select_rows(const std::vector<int>& idx) const;

  double max_abs() const;
  bool all_finite() const;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

enum class VectorNorm { L1, L2, LInf };

VectorNorm dual(VectorNorm k);

double norm(const Vector& v, VectorNorm k);
double dual_norm(const Vector& v, VectorNorm k);
double norm_inf(const Vector& v);
double dot(const Vector& a, const Vector& b);

/// LU factorization with partial pivoting.
struct LuFactors {
  Matrix lu;              // combined L\U storage
  std::vector<int> perm;  // row permutation
  double min_pivot = 0.0;
  double max_pivot = 0.0;
  bool nonsingular() const;
  Vector solve(const Vector& rhs) const;
};

LuFactors lu_factor(const Matrix& m);

/// Solves Mx = rhs; empty when a pivot ratio falls below the pivot tolerance.
std::optional<Vector> lu_solve(const Matrix& m, const Vector& rhs);

bool is_nonsingular(const Matrix& m);

/// Orthonormal basis of the null space of m (any shape).
std::vector<Vector> kernel_basis(const Matrix& m);

/// Cyclic Jacobi eigendecomposition of a symmetric matrix.
/// Eigenvalues descending, columns of the second member are the eigenvectors.
struct SymEig {
  Vector values;
  Matrix vectors;
};

SymEig sym_eig(const Matrix& m);

}  // namespace qlip
