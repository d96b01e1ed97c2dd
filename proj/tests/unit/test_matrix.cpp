#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "pmrc/combinatorics.hpp"
#include "pmrc/matrix.hpp"

using namespace pmrc;

namespace {

const Field F7(7);
const Field F13(13);

Matrix psi_q7() {
  return Matrix::from_rows(F7, {{1, 1, 1, 1}, {1, 2, 4, 1}, {1, 3, 2, 6}, {1, 4, 2, 1}, {1, 5, 4, 6}, {1, 6, 1, 6}});
}

Matrix psi_q13() {
  return Matrix::from_rows(F13, {{1, 1, 1, 1}, {1, 2, 4, 8}, {1, 3, 9, 1}, {1, 4, 3, 12}, {1, 5, 12, 8}, {1, 6, 10, 8}});
}

Matrix random_matrix(const Field& f, std::size_t r, std::size_t c, std::mt19937_64& rng) {
  Matrix m(f, r, c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) m(i, j) = static_cast<Symbol>(rng() % f.modulus());
  return m;
}

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Io;
}

}  // namespace

TEST_CASE("matmul") {
  std::mt19937_64 rng(3);
  const Matrix B = random_matrix(F13, 4, 3, rng);
  CHECK(Matrix::identity(F13, 4) * B == B);
  CHECK((B * Matrix(F13, 3, 2)).is_zero());

  // Row 1 of Psi M with u = (1..9) mod 7 against a triple loop.
  std::vector<oracle::u64> u{1, 2, 3, 4, 5, 6, 0, 1, 2};
  const oracle::Mat M = oracle::mbr_message(u, 3, 4);
  Matrix Mm(F7, 4, 4);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) Mm(i, j) = static_cast<Symbol>(M[i][j]);
  const Matrix C = psi_q7() * Mm;
  CHECK(oracle::of(C) == oracle::mul(oracle::of(psi_q7()), M, 7));
  const std::vector<Symbol> row1{(1 + 2 + 3 + 0) % 7, (2 + 4 + 5 + 1) % 7, (3 + 5 + 6 + 2) % 7, (0 + 1 + 2) % 7};
  CHECK(std::vector<Symbol>(C.row(0).begin(), C.row(0).end()) == row1);

  for (int trial = 0; trial < 20; ++trial) {
    const Matrix a = random_matrix(F13, 1 + rng() % 5, 1 + rng() % 5, rng);
    const Matrix b = random_matrix(F13, a.cols(), 1 + rng() % 5, rng);
    CHECK(oracle::of(a * b) == oracle::mul(oracle::of(a), oracle::of(b), 13));
  }
  CHECK(code_of([] { (void)(Matrix(F7, 2, 3) * Matrix(F7, 2, 3)); }) == Errc::DimensionMismatch);
  CHECK(code_of([] { (void)(Matrix(F7, 2, 2) * Matrix(F13, 2, 2)); }) == Errc::FieldMismatch);
}

TEST_CASE("invert") {
  CHECK(invert(Matrix::identity(F7, 4)) == Matrix::identity(F7, 4));

  const Matrix repair = Matrix::from_rows(F7, {{1, 2, 4, 1}, {1, 4, 2, 1}, {1, 5, 4, 6}, {1, 6, 1, 6}});
  const Matrix inv = invert(repair);
  CHECK(repair * inv == Matrix::identity(F7, 4));
  CHECK(inv * repair == Matrix::identity(F7, 4));
  // Cofactor oracle: inv(i,j) = (-1)^(i+j) det(minor_ji) / det.
  const oracle::Mat R = oracle::of(repair);
  const oracle::u64 det = oracle::det(R, 7);
  REQUIRE(det != 0);
  for (std::size_t i = 0; i < 4; ++i)
    for (std::size_t j = 0; j < 4; ++j) {
      oracle::Mat minor;
      for (std::size_t r = 0; r < 4; ++r) {
        if (r == j) continue;
        std::vector<oracle::u64> row;
        for (std::size_t c = 0; c < 4; ++c)
          if (c != i) row.push_back(R[r][c]);
        minor.push_back(row);
      }
      oracle::u64 cof = oracle::det(minor, 7);
      if ((i + j) % 2) cof = (7 - cof) % 7;
      CHECK(inv(i, j) == oracle::mulmod(cof, oracle::inv(det, 7), 7));
    }

  CHECK(code_of([] { (void)invert(Matrix(F7, 2, 2)); }) == Errc::Singular);
  CHECK(code_of([] { (void)invert(Matrix(F7, 2, 3)); }) == Errc::DimensionMismatch);
  CHECK(invert(Matrix(F7, 0, 0)).rows() == 0);
}

TEST_CASE("invert matches published GF(p) inverses") {
  const Field f11(11), f29(29);
  const Matrix a = Matrix::from_rows(f11, {{2, 1, 2}, {1, 2, 9}, {1, 2, 7}});
  CHECK(invert(a) == Matrix::from_rows(f11, {{8, 6, 1}, {7, 9, 10}, {0, 6, 5}}));
  const Matrix b = Matrix::from_rows(f29, {{22, 27, 18}, {18, 28, 5}, {4, 17, 1}});
  CHECK(invert(b) == Matrix::from_rows(f29, {{1, 18, 8}, {2, 8, 11}, {20, 24, 14}}));
}

TEST_CASE("rank, rref, solve") {
  CHECK(rank(Matrix::identity(F13, 5)) == 5);
  CHECK(rank(Matrix(F13, 3, 4)) == 0);
  const Matrix phi = col_range(psi_q7(), 0, 3);
  std::size_t subsets = 0;
  for_each_combination(6, 3, [&](const std::vector<std::size_t>& rows) {
    ++subsets;
    const Matrix sub = select_rows(phi, rows);
    CHECK(rank(sub) == 3);
    CHECK(oracle::det(oracle::of(sub), 7) != 0);
    return true;
  });
  CHECK(subsets == 20);

  const Matrix dup = Matrix::from_rows(F13, {{1, 2, 3}, {2, 4, 6}, {0, 1, 1}});
  CHECK(rank(dup) == 2);
  CHECK(rref(dup).rows() == 2);
  CHECK(rref(dup) == Matrix::from_rows(F13, {{1, 0, 1}, {0, 1, 1}}));

  std::mt19937_64 rng(11);
  for (int t = 0; t < 20; ++t) {
    Matrix a = random_matrix(F13, 4, 4, rng);
    if (oracle::det(oracle::of(a), 13) == 0) continue;
    std::vector<Symbol> x(4);
    for (auto& v : x) v = static_cast<Symbol>(rng() % 13);
    CHECK(solve(a, mat_vec(a, x)) == x);
  }
  // Consistent underdetermined system: any solution must satisfy it.
  const std::vector<Symbol> b{6, 12, 2};
  const auto x = solve(dup, b);
  CHECK(mat_vec(dup, x) == b);
  CHECK(code_of([&] { (void)solve(dup, std::vector<Symbol>{1, 1, 1}); }) == Errc::Inconsistent);
}

TEST_CASE("shape helpers") {
  const Matrix psi = psi_q13();
  const std::vector<std::size_t> rows{1, 3, 4, 5};
  CHECK(select_rows(psi, rows) ==
        Matrix::from_rows(F13, {{1, 2, 4, 8}, {1, 4, 3, 12}, {1, 5, 12, 8}, {1, 6, 10, 8}}));
  const std::vector<std::size_t> cols{0, 1, 2, 3};
  CHECK(submatrix(psi, rows, cols) == select_rows(psi, rows));
  CHECK(transpose(transpose(psi)) == psi);
  CHECK(transpose(psi)(2, 4) == psi(4, 2));
  CHECK(hstack(col_range(psi, 0, 2), col_range(psi, 2, 2)) == psi);
  CHECK(vstack(row_range(psi, 0, 1), row_range(psi, 1, 5)) == psi);
  CHECK(code_of([&] { (void)psi.at(6, 0); }) == Errc::IndexOutOfRange);
  CHECK(hstack(psi, Matrix(F13, 6, 0)) == psi);
  CHECK(Matrix::from_rows(F13, {{1, 2}, {2, 5}}).is_symmetric());
  CHECK_FALSE(Matrix::from_rows(F13, {{1, 2}, {3, 5}}).is_symmetric());
}

TEST_CASE("vandermonde") {
  const std::vector<Symbol> pts{1, 2, 3, 4, 5, 6};
  CHECK(vandermonde(F7, pts, 4) == psi_q7());
  CHECK(vandermonde(F13, pts, 4) == psi_q13());
  CHECK(oracle::of(vandermonde(F13, pts, 4)) == oracle::vandermonde(oracle::range(1, 6), 4, 13));
  const std::vector<Symbol> one{5};
  CHECK(vandermonde(F13, one, 1) == Matrix::from_rows(F13, {{1}}));
  const std::vector<Symbol> rep{1, 2, 2}, zero{0, 1};
  CHECK(code_of([&] { (void)vandermonde(F13, rep, 2); }) == Errc::DuplicatePoint);
  CHECK(code_of([&] { (void)vandermonde(F13, zero, 2); }) == Errc::ZeroPoint);
}

TEST_CASE("cauchy") {
  const std::vector<Symbol> x0{0}, y1{1};
  CHECK(cauchy(F7, x0, y1) == Matrix::from_rows(F7, {{6}}));
  const std::vector<Symbol> xs{0, 1}, ys{2, 3};
  const Matrix c = cauchy(F7, xs, ys);
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(c(i, j) != 0);
  CHECK(oracle::det(oracle::of(c), 7) != 0);
  CHECK(oracle::of(c) == oracle::cauchy({0, 1}, {2, 3}, 7));
  CHECK(verify_square_minors(c).ok);
  CHECK(code_of([&] { (void)cauchy(F7, y1, y1); }) == Errc::DegeneratePoints);
  const std::vector<Symbol> xx{1, 1};
  CHECK(code_of([&] { (void)cauchy(F7, xx, x0); }) == Errc::DegeneratePoints);
}

TEST_CASE("encoding matrix verification") {
  const PsiReport mbr = verify_mbr_psi(psi_q7(), 3);
  CHECK(mbr.ok);
  CHECK(mbr.subsets_checked == 15 + 20);

  const Matrix psi = psi_q13();
  const Matrix phi = col_range(psi, 0, 2);
  const std::vector<Symbol> lambda{1, 4, 9, 3, 12, 10};
  // Psi is exactly [Phi, Lambda Phi].
  for (std::size_t i = 0; i < 6; ++i)
    for (std::size_t j = 0; j < 2; ++j) CHECK(psi(i, 2 + j) == F13.mul(lambda[i], phi(i, j)));
  CHECK(verify_msr_psi(phi, lambda, 4).ok);

  const std::vector<Symbol> clash{1, 4, 9, 3, 12, 4};
  const PsiReport bad_lambda = verify_msr_psi(phi, clash, 4);
  CHECK_FALSE(bad_lambda.ok);
  CHECK(bad_lambda.witness == std::vector<std::size_t>{2, 6});

  const Matrix twins = Matrix::from_rows(F13, {{1, 2}, {1, 3}, {1, 2}, {1, 5}});
  const PsiReport r = verify_mbr_psi(twins, 2);
  CHECK_FALSE(r.ok);
  CHECK(r.witness == std::vector<std::size_t>{1, 3});
}
