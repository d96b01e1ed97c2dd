#include "pmrc/systematizer.hpp"

#include <random>
#include <set>

namespace pmrc {

Matrix GeneratorMatrix::block(NodeId node) const {
  if (node < 1 || node > n) {
    throw Error(Errc::IndexOutOfRange, "block " + std::to_string(node) + " of " + std::to_string(n));
  }
  return col_range(G, (node - 1) * alpha, alpha);
}

GeneratorMatrix extract_generator(const Codec& codec) {
  const auto& p = codec.params();
  GeneratorMatrix gen{Matrix(codec.field(), p.B, p.n * p.alpha), p.n, p.alpha};
  std::vector<Symbol> unit(p.B, 0);
  for (std::size_t b = 0; b < p.B; ++b) {
    unit[b] = 1;
    Matrix C = codec.encode(unit);
    unit[b] = 0;
    std::copy(C.data().begin(), C.data().end(), gen.G.row(b).begin());
  }
  return gen;
}

SystematicMap make_systematic(const Codec& codec, std::span<const NodeId> systematic_ids) {
  const auto& p = codec.params();
  std::set<NodeId> seen;
  for (NodeId id : systematic_ids) {
    if (id < 1 || id > p.n || !seen.insert(id).second) {
      throw Error(Errc::BadNodeCount, "systematic ids must be distinct nodes in 1..n");
    }
  }
  GeneratorMatrix gen = extract_generator(codec);
  const Field& f = codec.field();

  // Incremental rank test: keep a reduced basis of accepted columns.
  std::vector<std::size_t> chosen_cols;
  SystematicMap out{Matrix(f, p.B, 0), Matrix(f, 0, 0), {}};
  Matrix basis(f, 0, p.B);  // accepted columns as rows, in RREF
  for (NodeId node : systematic_ids) {
    for (std::size_t j = 0; j < p.alpha && chosen_cols.size() < p.B; ++j) {
      const std::size_t col = (node - 1) * p.alpha + j;
      Matrix candidate = vstack(basis, Matrix::row_vector(f, gen.G.column_values(col)));
      Matrix reduced = rref(candidate);
      if (reduced.rows() == basis.rows()) continue;
      basis = std::move(reduced);
      chosen_cols.push_back(col);
      out.positions.push_back({node, j});
    }
  }
  if (chosen_cols.size() != p.B) {
    throw Error(Errc::RankDeficient, "chosen nodes span rank " + std::to_string(chosen_cols.size()) +
                                         " < B=" + std::to_string(p.B));
  }
  out.selected = select_cols(gen.G, chosen_cols);
  out.remap = invert(out.selected);
  return out;
}

GeneratorRemapCodec::GeneratorRemapCodec(std::shared_ptr<const Codec> base,
                                         std::vector<NodeId> systematic_ids)
    : Codec(base->params()),
      base_(std::move(base)),
      ids_(std::move(systematic_ids)),
      map_(make_systematic(*base_, ids_)) {}

Matrix GeneratorRemapCodec::encode(std::span<const Symbol> message) const {
  check_message(message);
  return base_->encode(vec_mat(message, map_.remap));
}

std::vector<Symbol> GeneratorRemapCodec::reconstruct(std::span<const NodeId> nodes,
                                                     const Matrix& rows) const {
  // base input v = u^t G~^-1, so u^t = v^t G~
  return vec_mat(base_->reconstruct(nodes, rows), map_.selected);
}

std::string GeneratorRemapCodec::description() const {
  std::string ids;
  for (NodeId id : ids_) ids += (ids.empty() ? "" : ",") + std::to_string(id);
  return base_->description() + " remapped systematic on {" + ids + "}";
}

namespace {

void check_shapes(const GeneratorMatrix& a, const GeneratorMatrix& b) {
  if (a.n != b.n || a.alpha != b.alpha || a.G.rows() != b.G.rows() || a.G.cols() != b.G.cols() ||
      !(a.G.field() == b.G.field())) {
    throw Error(Errc::ShapeMismatch, "generator matrices differ in shape or field");
  }
}

// Basis of {x : A x = 0}, one vector per free column of rref(A).
std::vector<std::vector<Symbol>> nullspace(const Matrix& a) {
  const Field& f = a.field();
  const Matrix r = rref(a);
  std::vector<std::size_t> pivots;
  std::vector<bool> is_pivot(a.cols(), false);
  for (std::size_t i = 0; i < r.rows(); ++i) {
    std::size_t c = 0;
    while (r(i, c) == 0) ++c;
    pivots.push_back(c);
    is_pivot[c] = true;
  }
  std::vector<std::vector<Symbol>> basis;
  for (std::size_t free = 0; free < a.cols(); ++free) {
    if (is_pivot[free]) continue;
    std::vector<Symbol> x(a.cols(), 0);
    x[free] = 1;
    for (std::size_t i = 0; i < pivots.size(); ++i) x[pivots[i]] = f.neg(r(i, free));
    basis.push_back(std::move(x));
  }
  return basis;
}

}  // namespace

bool same_subspaces(const GeneratorMatrix& a, const GeneratorMatrix& b) {
  check_shapes(a, b);
  for (NodeId i = 1; i <= a.n; ++i) {
    if (!(rref(transpose(a.block(i))) == rref(transpose(b.block(i))))) return false;
  }
  return true;
}

bool check_equivalence(const GeneratorMatrix& a, const GeneratorMatrix& b) {
  check_shapes(a, b);
  const Field& f = a.G.field();
  const std::size_t B = a.G.rows();
  for (NodeId i = 1; i <= a.n; ++i) {
    if (rank(a.block(i)) != rank(b.block(i))) return false;
  }

  // Unknown X flattened row-major; y^t X w = sum_{r,c} y_r w_c X_rc.
  std::vector<Symbol> constraints;
  std::size_t rows = 0;
  for (NodeId i = 1; i <= a.n; ++i) {
    const Matrix wa = a.block(i);
    // Rows y with y^t W_i(b) = 0.
    const auto annihilator = nullspace(transpose(b.block(i)));
    for (const auto& y : annihilator) {
      for (std::size_t c = 0; c < wa.cols(); ++c) {
        const auto w = wa.column_values(c);
        for (std::size_t r = 0; r < B; ++r)
          for (std::size_t t = 0; t < B; ++t) constraints.push_back(f.mul(y[r], w[t]));
        ++rows;
      }
    }
  }
  const auto solutions = rows == 0 ? std::vector<std::vector<Symbol>>{}
                                   : nullspace(Matrix(f, rows, B * B, std::move(constraints)));
  if (rows == 0) return true;  // every block spans the whole space in both codes
  if (solutions.empty()) return false;

  auto invertible = [&](const std::vector<Symbol>& x) { return rank(Matrix(f, B, B, x)) == B; };
  for (const auto& x : solutions) {
    if (invertible(x)) return true;
  }
  if (solutions.size() == 1) return false;
  std::mt19937_64 rng(0x9e3779b97f4a7c15ull);
  for (int attempt = 0; attempt < 32; ++attempt) {
    std::vector<Symbol> x(B * B, 0);
    for (const auto& s : solutions) {
      const auto c = static_cast<Symbol>(rng() % f.modulus());
      for (std::size_t j = 0; j < x.size(); ++j) x[j] = f.mul_add(x[j], c, s[j]);
    }
    if (invertible(x)) return true;
  }
  return false;
}

}  // namespace pmrc
