#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <string>
#include <vector>

#include "pmrc/ffield.hpp"

namespace pmrc {

/// Dense row-major matrix over a prime field.
///
/// Zero-sized dimensions are legal: an MBR code with d == k has a k x 0
/// block, and every operation below accepts such shapes.
class Matrix {
 public:
  Matrix(const Field& field, std::size_t rows, std::size_t cols);
  // Entries are reduced mod q. Throws DimensionMismatch on a size mismatch.
  Matrix(const Field& field, std::size_t rows, std::size_t cols, std::vector<Symbol> entries);

  static Matrix identity(const Field& field, std::size_t n);
  static Matrix from_rows(const Field& field,
                          std::initializer_list<std::initializer_list<std::uint64_t>> rows);
  static Matrix column(const Field& field, std::span<const Symbol> values);
  static Matrix row_vector(const Field& field, std::span<const Symbol> values);

  const Field& field() const noexcept { return field_; }
  std::size_t rows() const noexcept { return rows_; }
  std::size_t cols() const noexcept { return cols_; }
  bool empty() const noexcept { return data_.empty(); }

  Symbol operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }
  Symbol& operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
  // Bounds-checked; throws IndexOutOfRange.
  Symbol at(std::size_t r, std::size_t c) const;
  FieldElement element(std::size_t r, std::size_t c) const { return {field_, at(r, c)}; }

  std::span<const Symbol> row(std::size_t r) const noexcept {
    return {data_.data() + r * cols_, cols_};
  }
  std::span<Symbol> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
  std::vector<Symbol> column_values(std::size_t c) const;
  const std::vector<Symbol>& data() const noexcept { return data_; }

  bool is_zero() const noexcept;
  bool is_symmetric() const noexcept;

  std::string to_string() const;

  friend bool operator==(const Matrix& a, const Matrix& b) {
    return a.field_ == b.field_ && a.rows_ == b.rows_ && a.cols_ == b.cols_ && a.data_ == b.data_;
  }

 private:
  Field field_;
  std::size_t rows_;
  std::size_t cols_;
  std::vector<Symbol> data_;
};

Matrix matmul(const Matrix& a, const Matrix& b);
inline Matrix operator*(const Matrix& a, const Matrix& b) { return matmul(a, b); }
Matrix add(const Matrix& a, const Matrix& b);
Matrix sub(const Matrix& a, const Matrix& b);
Matrix scale(const Matrix& a, Symbol factor);
Matrix transpose(const Matrix& a);

// Gauss-Jordan; throws Singular (or DimensionMismatch when not square).
Matrix invert(const Matrix& a);
std::size_t rank(const Matrix& a);
// Reduced row echelon form with zero rows removed.
Matrix rref(const Matrix& a);
// One solution of a x = b; throws Inconsistent when none exists.
std::vector<Symbol> solve(const Matrix& a, std::span<const Symbol> b);

// Indices are 0-based; the output keeps the order given.
Matrix submatrix(const Matrix& a, std::span<const std::size_t> row_ids,
                 std::span<const std::size_t> col_ids);
Matrix select_rows(const Matrix& a, std::span<const std::size_t> row_ids);
Matrix select_cols(const Matrix& a, std::span<const std::size_t> col_ids);
Matrix col_range(const Matrix& a, std::size_t first, std::size_t count);
Matrix row_range(const Matrix& a, std::size_t first, std::size_t count);
Matrix hstack(const Matrix& left, const Matrix& right);
Matrix vstack(const Matrix& top, const Matrix& bottom);

// a * x for a column vector x.
std::vector<Symbol> mat_vec(const Matrix& a, std::span<const Symbol> x);
// x^t * a.
std::vector<Symbol> vec_mat(std::span<const Symbol> x, const Matrix& a);
Symbol dot(const Field& field, std::span<const Symbol> a, std::span<const Symbol> b);

// Row i is [1, x_i, x_i^2, ..., x_i^(width-1)]. Points must be distinct and
// nonzero (DuplicatePoint / ZeroPoint).
Matrix vandermonde(const Field& field, std::span<const Symbol> points, std::size_t width);
// Entry (i, j) = 1 / (x_i - y_j). Throws DegeneratePoints unless the xs and
// ys are each distinct and disjoint.
Matrix cauchy(const Field& field, std::span<const Symbol> xs, std::span<const Symbol> ys);

struct PsiReport {
  bool ok = true;
  std::string failure;  // empty when ok
  // 1-based row ids of the first failing subset.
  std::vector<std::size_t> witness;
  std::size_t subsets_checked = 0;
};

// Exhaustive: every d-row subset of psi (d = psi.cols()) has rank d and every
// k-row subset of the leading n x k block has rank k.
PsiReport verify_mbr_psi(const Matrix& psi, std::size_t k);
// Exhaustive on Psi = [Phi, Lambda Phi]: every d-row subset of Psi full rank,
// every alpha-row subset of Phi full rank, lambdas pairwise distinct.
PsiReport verify_msr_psi(const Matrix& phi, std::span<const Symbol> lambda, std::size_t d);
// Every square submatrix nonsingular (the Cauchy property). witness holds the
// rows of the first singular minor.
PsiReport verify_square_minors(const Matrix& a);

}  // namespace pmrc
