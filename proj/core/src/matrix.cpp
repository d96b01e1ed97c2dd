#include "pmrc/matrix.hpp"

#include <algorithm>
#include <set>
#include <sstream>

#include "pmrc/combinatorics.hpp"

namespace pmrc {

namespace {

void require_same_field(const Matrix& a, const Matrix& b) {
  if (!(a.field() == b.field())) throw Error(Errc::FieldMismatch, "matrices over different fields");
}

std::string shape(const Matrix& m) {
  return std::to_string(m.rows()) + "x" + std::to_string(m.cols());
}

// In-place Gauss-Jordan to reduced row echelon form. Pivot = first nonzero
// entry in the column. Returns the pivot columns.
std::vector<std::size_t> reduce_in_place(Matrix& m, std::size_t pivot_cols) {
  const Field& f = m.field();
  std::vector<std::size_t> pivots;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < pivot_cols && pivot_row < m.rows(); ++c) {
    std::size_t r = pivot_row;
    while (r < m.rows() && m(r, c) == 0) ++r;
    if (r == m.rows()) continue;
    if (r != pivot_row) {
      auto a = m.row(r);
      auto b = m.row(pivot_row);
      std::swap_ranges(a.begin(), a.end(), b.begin());
    }
    auto prow = m.row(pivot_row);
    Symbol inv = f.inv(prow[c]);
    for (auto& v : prow) v = f.mul(v, inv);
    for (std::size_t other = 0; other < m.rows(); ++other) {
      if (other == pivot_row) continue;
      auto orow = m.row(other);
      Symbol factor = orow[c];
      if (factor == 0) continue;
      Symbol neg = f.neg(factor);
      for (std::size_t j = 0; j < m.cols(); ++j) orow[j] = f.mul_add(orow[j], neg, prow[j]);
    }
    pivots.push_back(c);
    ++pivot_row;
  }
  return pivots;
}

}  // namespace

Matrix::Matrix(const Field& field, std::size_t rows, std::size_t cols)
    : field_(field), rows_(rows), cols_(cols), data_(rows * cols, 0) {}

Matrix::Matrix(const Field& field, std::size_t rows, std::size_t cols, std::vector<Symbol> entries)
    : field_(field), rows_(rows), cols_(cols), data_(std::move(entries)) {
  if (data_.size() != rows * cols) {
    throw Error(Errc::DimensionMismatch, std::to_string(data_.size()) + " entries for " +
                                             std::to_string(rows) + "x" + std::to_string(cols));
  }
  for (auto& v : data_) v = field_.reduce(v);
}

Matrix Matrix::identity(const Field& field, std::size_t n) {
  Matrix m(field, n, n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = field.reduce(1);
  return m;
}

Matrix Matrix::from_rows(const Field& field,
                         std::initializer_list<std::initializer_list<std::uint64_t>> rows) {
  std::size_t cols = rows.size() == 0 ? 0 : rows.begin()->size();
  std::vector<Symbol> entries;
  entries.reserve(rows.size() * cols);
  for (const auto& r : rows) {
    if (r.size() != cols) throw Error(Errc::DimensionMismatch, "ragged row list");
    for (auto v : r) entries.push_back(field.reduce(v));
  }
  return Matrix(field, rows.size(), cols, std::move(entries));
}

Matrix Matrix::column(const Field& field, std::span<const Symbol> values) {
  return Matrix(field, values.size(), 1, {values.begin(), values.end()});
}

Matrix Matrix::row_vector(const Field& field, std::span<const Symbol> values) {
  return Matrix(field, 1, values.size(), {values.begin(), values.end()});
}

Symbol Matrix::at(std::size_t r, std::size_t c) const {
  if (r >= rows_ || c >= cols_) {
    throw Error(Errc::IndexOutOfRange, "(" + std::to_string(r) + "," + std::to_string(c) +
                                           ") in " + shape(*this));
  }
  return (*this)(r, c);
}

std::vector<Symbol> Matrix::column_values(std::size_t c) const {
  std::vector<Symbol> out(rows_);
  for (std::size_t r = 0; r < rows_; ++r) out[r] = (*this)(r, c);
  return out;
}

bool Matrix::is_zero() const noexcept {
  return std::all_of(data_.begin(), data_.end(), [](Symbol v) { return v == 0; });
}

bool Matrix::is_symmetric() const noexcept {
  if (rows_ != cols_) return false;
  for (std::size_t i = 0; i < rows_; ++i) {
    for (std::size_t j = i + 1; j < cols_; ++j) {
      if ((*this)(i, j) != (*this)(j, i)) return false;
    }
  }
  return true;
}

std::string Matrix::to_string() const {
  std::ostringstream out;
  for (std::size_t r = 0; r < rows_; ++r) {
    out << '[';
    for (std::size_t c = 0; c < cols_; ++c) out << (c ? " " : "") << (*this)(r, c);
    out << "]\n";
  }
  return out.str();
}

Matrix matmul(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.cols() != b.rows()) {
    throw Error(Errc::DimensionMismatch, shape(a) + " * " + shape(b));
  }
  const Field& f = a.field();
  const std::uint64_t q = f.modulus();
  Matrix out(f, a.rows(), b.cols());
  // Accumulate in 64 bits and reduce every few terms; (q-1)^2 < 2^64 and the
  // sum of two such products could overflow, so reduce each step once q is big.
  const bool small = q < (1ull << 16);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    for (std::size_t j = 0; j < b.cols(); ++j) {
      std::uint64_t acc = 0;
      for (std::size_t t = 0; t < a.cols(); ++t) {
        acc += std::uint64_t{a(i, t)} * b(t, j);
        if (!small || (t & 0x3FF) == 0x3FF) acc %= q;
      }
      out(i, j) = static_cast<Symbol>(acc % q);
    }
  }
  return out;
}

Matrix add(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(Errc::DimensionMismatch, shape(a) + " + " + shape(b));
  }
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a.field().add(a(i, j), b(i, j));
  return out;
}

Matrix sub(const Matrix& a, const Matrix& b) {
  require_same_field(a, b);
  if (a.rows() != b.rows() || a.cols() != b.cols()) {
    throw Error(Errc::DimensionMismatch, shape(a) + " - " + shape(b));
  }
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a.field().sub(a(i, j), b(i, j));
  return out;
}

Matrix scale(const Matrix& a, Symbol factor) {
  Matrix out = a;
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(i, j) = a.field().mul(a(i, j), factor);
  return out;
}

Matrix transpose(const Matrix& a) {
  Matrix out(a.field(), a.cols(), a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < a.cols(); ++j) out(j, i) = a(i, j);
  return out;
}

Matrix invert(const Matrix& a) {
  if (a.rows() != a.cols()) throw Error(Errc::DimensionMismatch, "invert of " + shape(a));
  const std::size_t n = a.rows();
  Matrix work = hstack(a, Matrix::identity(a.field(), n));
  auto pivots = reduce_in_place(work, n);
  if (pivots.size() != n) {
    throw Error(Errc::Singular, shape(a) + " matrix has rank " + std::to_string(pivots.size()));
  }
  return col_range(work, n, n);
}

std::size_t rank(const Matrix& a) {
  Matrix work = a;
  return reduce_in_place(work, a.cols()).size();
}

Matrix rref(const Matrix& a) {
  Matrix work = a;
  auto pivots = reduce_in_place(work, a.cols());
  return row_range(work, 0, pivots.size());
}

std::vector<Symbol> solve(const Matrix& a, std::span<const Symbol> b) {
  if (b.size() != a.rows()) {
    throw Error(Errc::DimensionMismatch, "rhs of length " + std::to_string(b.size()) +
                                             " for " + shape(a));
  }
  Matrix work = hstack(a, Matrix::column(a.field(), b));
  auto pivots = reduce_in_place(work, a.cols());
  for (std::size_t r = pivots.size(); r < work.rows(); ++r) {
    if (work(r, a.cols()) != 0) throw Error(Errc::Inconsistent, "system has no solution");
  }
  std::vector<Symbol> x(a.cols(), 0);
  for (std::size_t r = 0; r < pivots.size(); ++r) x[pivots[r]] = work(r, a.cols());
  return x;
}

Matrix submatrix(const Matrix& a, std::span<const std::size_t> row_ids,
                 std::span<const std::size_t> col_ids) {
  Matrix out(a.field(), row_ids.size(), col_ids.size());
  for (std::size_t i = 0; i < row_ids.size(); ++i) {
    for (std::size_t j = 0; j < col_ids.size(); ++j) out(i, j) = a.at(row_ids[i], col_ids[j]);
  }
  return out;
}

Matrix select_rows(const Matrix& a, std::span<const std::size_t> row_ids) {
  Matrix out(a.field(), row_ids.size(), a.cols());
  for (std::size_t i = 0; i < row_ids.size(); ++i) {
    if (row_ids[i] >= a.rows()) {
      throw Error(Errc::IndexOutOfRange, "row " + std::to_string(row_ids[i]) + " of " + shape(a));
    }
    auto src = a.row(row_ids[i]);
    std::copy(src.begin(), src.end(), out.row(i).begin());
  }
  return out;
}

Matrix select_cols(const Matrix& a, std::span<const std::size_t> col_ids) {
  std::vector<std::size_t> all(a.rows());
  std::iota(all.begin(), all.end(), std::size_t{0});
  return submatrix(a, all, col_ids);
}

Matrix col_range(const Matrix& a, std::size_t first, std::size_t count) {
  if (first + count > a.cols()) {
    throw Error(Errc::IndexOutOfRange, "columns [" + std::to_string(first) + ", +" +
                                           std::to_string(count) + ") of " + shape(a));
  }
  Matrix out(a.field(), a.rows(), count);
  for (std::size_t i = 0; i < a.rows(); ++i)
    for (std::size_t j = 0; j < count; ++j) out(i, j) = a(i, first + j);
  return out;
}

Matrix row_range(const Matrix& a, std::size_t first, std::size_t count) {
  if (first + count > a.rows()) {
    throw Error(Errc::IndexOutOfRange, "rows [" + std::to_string(first) + ", +" +
                                           std::to_string(count) + ") of " + shape(a));
  }
  std::vector<Symbol> entries(a.data().begin() + static_cast<std::ptrdiff_t>(first * a.cols()),
                              a.data().begin() + static_cast<std::ptrdiff_t>((first + count) * a.cols()));
  return Matrix(a.field(), count, a.cols(), std::move(entries));
}

Matrix hstack(const Matrix& left, const Matrix& right) {
  require_same_field(left, right);
  if (left.rows() != right.rows()) {
    throw Error(Errc::DimensionMismatch, "hstack " + shape(left) + " | " + shape(right));
  }
  Matrix out(left.field(), left.rows(), left.cols() + right.cols());
  for (std::size_t i = 0; i < left.rows(); ++i) {
    auto dst = out.row(i);
    std::copy(left.row(i).begin(), left.row(i).end(), dst.begin());
    std::copy(right.row(i).begin(), right.row(i).end(),
              dst.begin() + static_cast<std::ptrdiff_t>(left.cols()));
  }
  return out;
}

Matrix vstack(const Matrix& top, const Matrix& bottom) {
  require_same_field(top, bottom);
  if (top.cols() != bottom.cols()) {
    throw Error(Errc::DimensionMismatch, "vstack " + shape(top) + " / " + shape(bottom));
  }
  std::vector<Symbol> entries = top.data();
  entries.insert(entries.end(), bottom.data().begin(), bottom.data().end());
  return Matrix(top.field(), top.rows() + bottom.rows(), top.cols(), std::move(entries));
}

std::vector<Symbol> mat_vec(const Matrix& a, std::span<const Symbol> x) {
  if (x.size() != a.cols()) {
    throw Error(Errc::DimensionMismatch, shape(a) + " * vector of " + std::to_string(x.size()));
  }
  std::vector<Symbol> out(a.rows());
  for (std::size_t i = 0; i < a.rows(); ++i) out[i] = dot(a.field(), a.row(i), x);
  return out;
}

std::vector<Symbol> vec_mat(std::span<const Symbol> x, const Matrix& a) {
  if (x.size() != a.rows()) {
    throw Error(Errc::DimensionMismatch, "vector of " + std::to_string(x.size()) + " * " + shape(a));
  }
  const Field& f = a.field();
  std::vector<Symbol> out(a.cols(), 0);
  for (std::size_t i = 0; i < a.rows(); ++i) {
    if (x[i] == 0) continue;
    auto r = a.row(i);
    for (std::size_t j = 0; j < a.cols(); ++j) out[j] = f.mul_add(out[j], x[i], r[j]);
  }
  return out;
}

Symbol dot(const Field& field, std::span<const Symbol> a, std::span<const Symbol> b) {
  if (a.size() != b.size()) {
    throw Error(Errc::DimensionMismatch, "dot of lengths " + std::to_string(a.size()) + " and " +
                                             std::to_string(b.size()));
  }
  Symbol acc = 0;
  for (std::size_t i = 0; i < a.size(); ++i) acc = field.mul_add(acc, a[i], b[i]);
  return acc;
}

Matrix vandermonde(const Field& field, std::span<const Symbol> points, std::size_t width) {
  std::set<Symbol> seen;
  for (Symbol p : points) {
    Symbol x = field.reduce(p);
    if (x == 0) throw Error(Errc::ZeroPoint, "evaluation point 0");
    if (!seen.insert(x).second) throw Error(Errc::DuplicatePoint, "point " + std::to_string(x));
  }
  Matrix out(field, points.size(), width);
  for (std::size_t i = 0; i < points.size(); ++i) {
    Symbol x = field.reduce(points[i]);
    Symbol power = field.reduce(1);
    for (std::size_t j = 0; j < width; ++j) {
      out(i, j) = power;
      power = field.mul(power, x);
    }
  }
  return out;
}

Matrix cauchy(const Field& field, std::span<const Symbol> xs, std::span<const Symbol> ys) {
  std::set<Symbol> seen;
  for (Symbol v : xs) {
    if (!seen.insert(field.reduce(v)).second) {
      throw Error(Errc::DegeneratePoints, "repeated x " + std::to_string(v));
    }
  }
  std::set<Symbol> seen_y;
  for (Symbol v : ys) {
    if (seen.count(field.reduce(v)) || !seen_y.insert(field.reduce(v)).second) {
      throw Error(Errc::DegeneratePoints, "repeated or shared y " + std::to_string(v));
    }
  }
  Matrix out(field, xs.size(), ys.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    for (std::size_t j = 0; j < ys.size(); ++j) {
      out(i, j) = field.inv(field.sub(field.reduce(xs[i]), field.reduce(ys[j])));
    }
  }
  return out;
}

namespace {

// Checks every r-row subset of m for rank `want`; records the first failure.
bool all_subsets_full_rank(const Matrix& m, std::size_t r, std::size_t want, PsiReport& report,
                           const std::string& label) {
  return for_each_combination(m.rows(), r, [&](const std::vector<std::size_t>& rows) {
    ++report.subsets_checked;
    if (rank(select_rows(m, rows)) == want) return true;
    report.ok = false;
    report.failure = label;
    for (auto row : rows) report.witness.push_back(row + 1);
    return false;
  });
}

}  // namespace

PsiReport verify_mbr_psi(const Matrix& psi, std::size_t k) {
  PsiReport report;
  const std::size_t d = psi.cols();
  if (k > d || psi.rows() < d) {
    report.ok = false;
    report.failure = "shape: need k <= d <= n";
    return report;
  }
  if (!all_subsets_full_rank(psi, d, d, report, "some d rows of Psi are dependent")) return report;
  all_subsets_full_rank(col_range(psi, 0, k), k, k, report, "some k rows of Phi are dependent");
  return report;
}

PsiReport verify_msr_psi(const Matrix& phi, std::span<const Symbol> lambda, std::size_t d) {
  PsiReport report;
  const Field& f = phi.field();
  const std::size_t n = phi.rows();
  const std::size_t alpha = phi.cols();
  if (lambda.size() != n || d != 2 * alpha || n < d) {
    report.ok = false;
    report.failure = "shape: need |lambda| = n, d = 2 alpha <= n";
    return report;
  }
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < i; ++j) {
      if (f.reduce(lambda[i]) == f.reduce(lambda[j])) {
        report.ok = false;
        report.failure = "lambda entries are not distinct";
        report.witness = {j + 1, i + 1};
        return report;
      }
    }
  }
  Matrix psi(f, n, d);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < alpha; ++j) {
      psi(i, j) = phi(i, j);
      psi(i, alpha + j) = f.mul(f.reduce(lambda[i]), phi(i, j));
    }
  }
  if (!all_subsets_full_rank(psi, d, d, report, "some d rows of Psi are dependent")) return report;
  all_subsets_full_rank(phi, alpha, alpha, report, "some alpha rows of Phi are dependent");
  return report;
}

PsiReport verify_square_minors(const Matrix& a) {
  PsiReport report;
  const std::size_t rows = a.rows(), cols = a.cols();
  for (std::size_t r = 1; r <= std::min(rows, cols) && report.ok; ++r) {
    for_each_combination(rows, r, [&](const std::vector<std::size_t>& rs) {
      return for_each_combination(cols, r, [&](const std::vector<std::size_t>& cs) {
        ++report.subsets_checked;
        if (rank(submatrix(a, rs, cs)) == r) return true;
        report.ok = false;
        report.failure = "singular " + std::to_string(r) + "x" + std::to_string(r) + " minor";
        for (auto i : rs) report.witness.push_back(i + 1);
        return false;
      });
    });
  }
  return report;
}

}  // namespace pmrc
