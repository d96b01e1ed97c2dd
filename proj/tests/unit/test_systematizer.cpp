#include <doctest.h>

#include <algorithm>
#include <random>

#include "oracle.hpp"
#include "pmrc/combinatorics.hpp"
#include "pmrc/error.hpp"
#include "pmrc/factory.hpp"
#include "pmrc/mbr.hpp"
#include "pmrc/msr.hpp"
#include "pmrc/systematizer.hpp"
#include "suites.hpp"

using namespace pmrc;

namespace {

Errc code_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code();
  }
  return Errc::Io;
}

Matrix random_invertible(const Field& f, std::size_t n, std::mt19937_64& rng) {
  for (;;) {
    Matrix m(f, n, n);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j) m(i, j) = static_cast<Symbol>(rng() % f.modulus());
    if (rank(m) == n) return m;
  }
}

// X G blockdiag(Y_1..Y_n); pass X = identity for a per-node change only.
GeneratorMatrix transform(const GeneratorMatrix& g, const Matrix& x, std::mt19937_64& rng) {
  const Field& f = g.G.field();
  Matrix out(f, g.G.rows(), 0);
  for (NodeId i = 1; i <= g.n; ++i) out = hstack(out, g.block(i) * random_invertible(f, g.alpha, rng));
  return {x * out, g.n, g.alpha};
}

GeneratorMatrix zero_block(GeneratorMatrix g, NodeId node) {
  for (std::size_t r = 0; r < g.G.rows(); ++r)
    for (std::size_t c = 0; c < g.alpha; ++c) g.G(r, (node - 1) * g.alpha + c) = 0;
  return g;
}

}  // namespace

TEST_CASE("generator is linear and every k blocks have rank B") {
  for (const CodeParams& p : {derive_params(CodeKind::Mbr, 6, 3, 4), derive_params(CodeKind::Msr, 7, 3, 5),
                              derive_params(CodeKind::Miser, 6, 3, 5)}) {
    const auto codec = build_codec(p);
    const GeneratorMatrix g = extract_generator(*codec);
    CHECK(g.G.rows() == p.B);
    CHECK(g.G.cols() == p.n * p.alpha);
    std::mt19937_64 rng(p.n);
    for (int t = 0; t < 10; ++t) {
      const auto u = suites::random_message(p, rng);
      const Matrix C = codec->encode(u);
      CHECK(vec_mat(u, g.G) == C.data());
    }
    for_each_combination(p.n, p.k, [&](const std::vector<std::size_t>& nodes) {
      Matrix cols(codec->field(), p.B, 0);
      for (std::size_t i : nodes) cols = hstack(cols, g.block(i + 1));
      CHECK(rank(cols) == p.B);
      return true;
    });
  }
}

TEST_CASE("systematic positions store the message") {
  const CodeParams p = derive_params(CodeKind::Mbr, 6, 3, 4);
  auto base = build_codec(p);
  const std::vector<NodeId> ids{1, 2, 3};
  const GeneratorRemapCodec codec(base, ids);
  const SystematicMap& map = codec.map();
  REQUIRE(map.positions.size() == p.B);
  CHECK(map.selected * map.remap == Matrix::identity(codec.field(), p.B));
  for (const auto& pos : map.positions) CHECK((pos.node >= 1 && pos.node <= 3));

  std::mt19937_64 rng(4);
  for (int t = 0; t < 20; ++t) {
    const auto u = suites::random_message(p, rng);
    const Matrix C = codec.encode(u);
    for (std::size_t j = 0; j < p.B; ++j) CHECK(C(map.positions[j].node - 1, map.positions[j].index) == u[j]);
  }
  const suites::Stats st = suites::exhaustive(codec, 10, 6);
  CHECK_MESSAGE(st.ok(), st.summary());

  // The remap changes the message basis only.
  CHECK(check_equivalence(extract_generator(*base), extract_generator(codec)));
}

TEST_CASE("systematic remaps keep exact repair") {
  struct Case {
    CodeKind kind;
    std::size_t n, k, d;
    std::vector<NodeId> ids;
  };
  for (const Case& c : {Case{CodeKind::Mbr, 5, 2, 3, {4, 5}}, Case{CodeKind::Msr, 6, 3, 4, {2, 4, 6}},
                        Case{CodeKind::Msr, 8, 3, 6, {1, 2, 3}}, Case{CodeKind::Miser, 6, 3, 5, {4, 5, 6}}}) {
    const CodeParams p = derive_params(c.kind, c.n, c.k, c.d);
    CodecOptions opt;
    opt.systematic = c.ids;
    const auto codec = build_codec(p, opt);
    std::mt19937_64 rng(c.n);
    const auto u = suites::random_message(p, rng);
    const Matrix C = codec->encode(u);
    // The chosen nodes hold the message in some order.
    std::vector<Symbol> held;
    for (NodeId id : c.ids)
      for (std::size_t j = 0; j < p.alpha; ++j) held.push_back(C(id - 1, j));
    std::vector<Symbol> sorted_u = u, sorted_held = held;
    std::sort(sorted_u.begin(), sorted_u.end());
    std::sort(sorted_held.begin(), sorted_held.end());
    if (p.k * p.alpha == p.B) CHECK(sorted_held == sorted_u);
    CHECK(codec->reconstruct(c.ids, select_rows(C, [&] {
                               std::vector<std::size_t> r;
                               for (NodeId id : c.ids) r.push_back(id - 1);
                               return r;
                             }())) == u);
    const suites::Stats st = suites::exhaustive(*codec, 5, c.k);
    CHECK_MESSAGE(st.ok(), describe(p) << ": " << st.summary());
    CHECK(check_equivalence(extract_generator(*build_codec(p)), extract_generator(*codec)));
  }
}

TEST_CASE("equivalence under message and per-node changes of basis") {
  std::mt19937_64 rng(99);
  for (const CodeParams& p : {derive_params(CodeKind::Mbr, 6, 3, 4), derive_params(CodeKind::Msr, 6, 3, 4),
                              derive_params(CodeKind::Mbr, 5, 2, 3, 13)}) {
    const auto codec = build_codec(p);
    const GeneratorMatrix g = extract_generator(*codec);
    const Field& f = codec->field();
    for (int t = 0; t < 20; ++t) {
      const GeneratorMatrix y_only = transform(g, Matrix::identity(f, p.B), rng);
      CHECK(same_subspaces(g, y_only));
      CHECK(check_equivalence(g, y_only));

      const GeneratorMatrix xgy = transform(g, random_invertible(f, p.B, rng), rng);
      CHECK(check_equivalence(g, xgy));
      CHECK(check_equivalence(xgy, g));

      const NodeId victim = static_cast<NodeId>(1 + rng() % p.n);
      const GeneratorMatrix mutant = zero_block(xgy, victim);
      CHECK_FALSE(check_equivalence(g, mutant));
      CHECK_FALSE(check_equivalence(mutant, g));
      CHECK_FALSE(same_subspaces(g, zero_block(g, victim)));
    }
  }
}

TEST_CASE("a block that loses rank breaks equivalence") {
  const auto codec = build_codec(derive_params(CodeKind::Mbr, 6, 3, 4));
  const GeneratorMatrix g = extract_generator(*codec);
  GeneratorMatrix low = g;
  // Node 2's last column becomes a copy of its first.
  for (std::size_t r = 0; r < g.G.rows(); ++r) low.G(r, 2 * g.alpha - 1) = low.G(r, g.alpha);
  CHECK_FALSE(check_equivalence(g, low));
}

TEST_CASE("errors") {
  const auto mbr = build_codec(derive_params(CodeKind::Mbr, 6, 3, 4));
  const auto msr = build_codec(derive_params(CodeKind::Msr, 6, 3, 4));
  const GeneratorMatrix a = extract_generator(*mbr);
  const GeneratorMatrix b = extract_generator(*msr);
  CHECK(code_of([&] { (void)check_equivalence(a, b); }) == Errc::ShapeMismatch);
  CHECK(code_of([&] { (void)same_subspaces(a, b); }) == Errc::ShapeMismatch);

  const std::vector<NodeId> too_few{1, 2};
  CHECK(code_of([&] { (void)make_systematic(*mbr, too_few); }) == Errc::RankDeficient);
  const std::vector<NodeId> dup{1, 1, 2};
  CHECK(code_of([&] { (void)make_systematic(*mbr, dup); }) == Errc::BadNodeCount);
  const std::vector<NodeId> outside{1, 2, 7};
  CHECK(code_of([&] { (void)make_systematic(*mbr, outside); }) == Errc::BadNodeCount);
  CHECK(code_of([&] { (void)a.block(7); }) == Errc::IndexOutOfRange);
}
