#include <doctest.h>

#include <random>

#include "oracle.hpp"
#include "pmrc/error.hpp"
#include "pmrc/msr.hpp"
#include "pmrc/shortening.hpp"
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

std::vector<Symbol> row_of(const Matrix& m, std::size_t r) { return {m.row(r).begin(), m.row(r).end()}; }

}  // namespace

TEST_CASE("message packing") {
  const Field f(13);
  const std::vector<Symbol> u{1, 2, 3, 4, 5, 6};
  const MsrMessage msg = msr_pack_message(f, 2, u);
  CHECK(msg.S1 == Matrix::from_rows(f, {{1, 2}, {2, 3}}));
  CHECK(msg.S2 == Matrix::from_rows(f, {{4, 5}, {5, 6}}));
  CHECK(oracle::of(msg.M) == oracle::msr_message({1, 2, 3, 4, 5, 6}, 2));

  const std::vector<Symbol> two{7, 9};
  const MsrMessage tiny = msr_pack_message(f, 1, two);
  CHECK(tiny.S1 == Matrix::from_rows(f, {{7}}));
  CHECK(tiny.S2 == Matrix::from_rows(f, {{9}}));

  std::mt19937_64 rng(2);
  const Field big(257);
  for (int t = 0; t < 50; ++t) {
    std::vector<Symbol> w(4 * 5);
    for (auto& s : w) s = static_cast<Symbol>(rng() % 257);
    CHECK(msr_unpack_message(msr_pack_message(big, 4, w).M, 4) == w);
  }
  CHECK(code_of([&] { msr_pack_message(f, 2, two); }) == Errc::WrongLength);
}

TEST_CASE("small-field instance") {
  const CodeParams p = derive_params(CodeKind::Msr, 6, 3, 4, 13);
  const MsrCodec codec(p);
  CHECK(codec.points() == std::vector<Symbol>{1, 2, 3, 4, 5, 6});
  CHECK(codec.lambda() == std::vector<Symbol>{1, 4, 9, 3, 12, 10});
  CHECK(oracle::of(codec.psi()) == oracle::Mat{{1, 1, 1, 1}, {1, 2, 4, 8}, {1, 3, 9, 1},
                                               {1, 4, 3, 12}, {1, 5, 12, 8}, {1, 6, 10, 8}});
  CHECK(oracle::of(codec.phi()) == oracle::Mat{{1, 1}, {1, 2}, {1, 3}, {1, 4}, {1, 5}, {1, 6}});
  CHECK(codec.repair_vector(1) == std::vector<Symbol>{1, 1});

  const std::vector<Symbol> u{3, 1, 4, 1, 5, 9};
  const Matrix C = codec.encode(u);
  CHECK(oracle::of(C) == oracle::msr_codeword(suites::widen(u), 6, 2, 13));
  CHECK(codec.encode(std::vector<Symbol>(6, 0)).is_zero());
  // Node 1 stores phi_1^t S1 + lambda_1 phi_1^t S2.
  CHECK(row_of(C, 0) == std::vector<Symbol>{(3 + 1 + 1 + 5) % 13, (1 + 4 + 5 + 9) % 13});

  // Intermediates of the node-1 repair, as linear forms in u: feed unit
  // messages and read off coefficients.
  const std::vector<NodeId> helpers{2, 4, 5, 6};
  std::vector<std::vector<Symbol>> s1(2, std::vector<Symbol>(6)), s2 = s1;
  for (std::size_t j = 0; j < 6; ++j) {
    std::vector<Symbol> e(6, 0);
    e[j] = 1;
    const Matrix Ce = codec.encode(e);
    std::vector<Symbol> sent;
    for (NodeId h : helpers) sent.push_back(codec.helper_symbol(h, Ce.row(h - 1), 1));
    const auto trace = codec.repair_trace(1, helpers, sent);
    for (std::size_t r = 0; r < 2; ++r) {
      s1[r][j] = trace.s1_phi[r];
      s2[r][j] = trace.s2_phi[r];
    }
    CHECK(trace.row == row_of(Ce, 0));
  }
  CHECK(s1[0] == std::vector<Symbol>{1, 1, 0, 0, 0, 0});  // u1 + u2
  CHECK(s1[1] == std::vector<Symbol>{0, 1, 1, 0, 0, 0});  // u2 + u3
  CHECK(s2[0] == std::vector<Symbol>{0, 0, 0, 1, 1, 0});  // u4 + u5
  CHECK(s2[1] == std::vector<Symbol>{0, 0, 0, 0, 1, 1});  // u5 + u6

  const suites::Stats st = suites::exhaustive(codec, 20, 4, [&](const std::vector<Symbol>& m) {
    return oracle::msr_codeword(suites::widen(m), 6, 2, 13);
  });
  CHECK_MESSAGE(st.ok(), st.summary());
  CHECK(st.reconstructions == 20 * 20);
  CHECK(st.repairs == 20 * 6 * 5);
}

TEST_CASE("greedy evaluation points") {
  const Field f(13);
  // Squares mod 13 repeat at x and 13-x; the scan must skip the repeats.
  const auto pts = msr_evaluation_points(f, 6, 2);
  CHECK(pts == std::vector<Symbol>{1, 2, 3, 4, 5, 6});
  CHECK(suites::widen(msr_evaluation_points(Field(257), 12, 4)) == oracle::msr_points(12, 4, 257));
  CHECK(code_of([] { MsrCodec(derive_params(CodeKind::Msr, 6, 3, 4, 7)); }) == Errc::FieldTooSmall);
  CHECK(code_of([&] { msr_evaluation_points(f, 7, 2); }) == Errc::FieldTooSmall);
}

TEST_CASE("depth-zero codes at default field size") {
  for (std::size_t k : {2u, 3u, 4u}) {
    const std::size_t d = 2 * k - 2;
    for (std::size_t n : {d + 1, d + 2}) {
      const CodeParams p = derive_params(CodeKind::Msr, n, k, d);
      const MsrCodec codec(p);
      const suites::Stats st = suites::exhaustive(codec, 5, n * 7 + k, [&](const std::vector<Symbol>& m) {
        return oracle::msr_codeword(suites::widen(m), n, p.alpha, p.q);
      });
      CHECK_MESSAGE(st.ok(), describe(p) << ": " << st.summary());
    }
  }
}

TEST_CASE("shortened codes") {
  struct Triple {
    std::size_t n, k, d, depth;
  };
  for (Triple t : {Triple{7, 3, 5, 1}, Triple{8, 3, 6, 2}, Triple{6, 2, 4, 2}}) {
    const CodeParams p = derive_params(CodeKind::Msr, t.n, t.k, t.d);
    const auto codec = msr_build(p);
    const auto* shortened = dynamic_cast<const ShortenedCodec*>(codec.get());
    REQUIRE(shortened != nullptr);
    CHECK(shortened->depth() == t.depth);
    const Codec& parent = shortened->parent();
    CHECK(parent.params().n == t.n + t.depth);
    CHECK(parent.params().k == t.k + t.depth);
    CHECK(parent.params().d == 2 * parent.params().k - 2);
    CHECK(parent.params().B - p.B == t.depth * p.alpha);
    CHECK(p.B == t.k * (t.d - t.k + 1));
    CHECK(codec->helpers_required() == t.d);

    std::mt19937_64 rng(t.n);
    for (int trial = 0; trial < 10; ++trial) {
      const auto u = suites::random_message(p, rng);
      const Matrix C = codec->encode(u);
      // Zero rows on top give a parent codeword whose message pins the
      // first depth*alpha symbols to zero.
      const Matrix full = vstack(Matrix(codec->field(), t.depth, p.alpha), C);
      std::vector<NodeId> ids;
      for (NodeId i = 1; i <= parent.params().k; ++i) ids.push_back(i);
      const auto parent_u = parent.reconstruct(ids, row_range(full, 0, ids.size()));
      CHECK(parent.encode(parent_u) == full);
      for (std::size_t j = 0; j < t.depth * p.alpha; ++j) CHECK(parent_u[j] == 0);
      CHECK(std::vector<Symbol>(parent_u.begin() + static_cast<std::ptrdiff_t>(t.depth * p.alpha), parent_u.end()) == u);
      CHECK(shortened->embed(u) == parent_u);
      // Virtual helpers store zero rows, so they would send 0 for any failure.
      for (NodeId v = 1; v <= t.depth; ++v)
        for (NodeId f = t.depth + 1; f <= parent.params().n; ++f)
          CHECK(parent.helper_symbol(v, full.row(v - 1), f) == 0);
    }

    const suites::Stats st = suites::exhaustive(*codec, 5, t.d);
    CHECK_MESSAGE(st.ok(), describe(p) << ": " << st.summary());
  }
}

TEST_CASE("systematic remap") {
  const CodeParams p = derive_params(CodeKind::Msr, 6, 3, 4, 13);
  const auto base = std::make_shared<MsrCodec>(p);
  const auto sys = msr_systematic_remap(base, {1, 2, 3});
  std::mt19937_64 rng(8);
  for (int t = 0; t < 20; ++t) {
    const auto u = suites::random_message(p, rng);
    const Matrix C = sys->encode(u);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(row_of(C, i) == std::vector<Symbol>(u.begin() + 2 * i, u.begin() + 2 * i + 2));
    // The remapped codeword is still a base codeword.
    const std::vector<NodeId> ids{4, 5, 6};
    CHECK(base->encode(base->reconstruct(ids, row_range(C, 3, 3))) == C);
    // Remapping twice with the same ids gives the same map.
    const auto again = msr_systematic_remap(sys, {1, 2, 3});
    CHECK(again->encode(u) == C);
  }
  const suites::Stats st = suites::exhaustive(*sys, 10, 3);
  CHECK_MESSAGE(st.ok(), st.summary());

  const auto other = msr_systematic_remap(base, {6, 2, 4});
  const auto u = suites::random_message(p, rng);
  const Matrix C = other->encode(u);
  CHECK(row_of(C, 5) == std::vector<Symbol>{u[0], u[1]});
  CHECK(row_of(C, 1) == std::vector<Symbol>{u[2], u[3]});
  CHECK(row_of(C, 3) == std::vector<Symbol>{u[4], u[5]});
  CHECK(code_of([&] { msr_systematic_remap(base, {1, 1, 2}); }) == Errc::BadNodeCount);
}

TEST_CASE("lambda collision") {
  const CodeParams p = derive_params(CodeKind::Msr, 6, 3, 4, 13);
  const MsrCodec good(p);
  const std::vector<Symbol> clash{1, 4, 9, 3, 12, 4};
  const MsrCodec bad = MsrCodec::unchecked(p, good.phi(), clash);
  const auto u = std::vector<Symbol>{1, 2, 3, 4, 5, 6};
  const Matrix C = bad.encode(u);
  const std::vector<std::size_t> rows{1, 2, 5};
  const std::vector<NodeId> ids{2, 3, 6};
  CHECK(code_of([&] { bad.reconstruct(ids, select_rows(C, rows)); }) == Errc::Corruption);
  CHECK(code_of([&] { bad.ia_witness(5, 4, std::vector<NodeId>{1, 2}); }) == Errc::Corruption);
}

TEST_CASE("alignment witness") {
  const CodeParams p = derive_params(CodeKind::Msr, 6, 3, 4, 13);
  const MsrCodec codec(p);
  const std::vector<NodeId> basis{1, 2};
  const IaWitness w = codec.ia_witness(5, 4, basis);
  CHECK(w.a.size() == 2);
  CHECK(w.b.size() == 2);

  // Evaluate both sides with plain arithmetic.
  const oracle::Mat psi = oracle::of(codec.psi());
  const oracle::Mat phi = oracle::of(codec.phi());
  auto form = [&](const std::vector<oracle::u64>& left, const oracle::Mat& M,
                  const std::vector<oracle::u64>& right) {
    oracle::u64 acc = 0;
    for (std::size_t i = 0; i < left.size(); ++i)
      for (std::size_t j = 0; j < right.size(); ++j) acc = (acc + left[i] * M[i][j] % 13 * right[j]) % 13;
    return acc;
  };
  std::mt19937_64 rng(99);
  for (int t = 0; t < 100; ++t) {
    const auto u = suites::random_message(p, rng);
    const oracle::Mat M = oracle::msr_message(suites::widen(u), 2);
    const oracle::u64 lhs = form(psi[3], M, phi[4]);
    oracle::u64 rhs = form(psi[4], M, {w.b.begin(), w.b.end()});
    for (std::size_t i = 0; i < 2; ++i) rhs = (rhs + w.a[i] * form(psi[basis[i] - 1], M, phi[4])) % 13;
    CHECK(lhs == rhs);
  }

  CHECK(code_of([&] { codec.ia_witness(5, 5, basis); }) == Errc::SelfHelp);
  CHECK(code_of([&] { codec.ia_witness(1, 4, basis); }) == Errc::DependentBasis);
  CHECK(code_of([&] { codec.ia_witness(5, 4, std::vector<NodeId>{1}); }) == Errc::DependentBasis);

  // Two nodes with the same phi but distinct lambdas.
  const Matrix twin = Matrix::from_rows(Field(13), {{1, 1}, {1, 1}, {1, 3}, {1, 4}, {1, 5}, {1, 6}});
  const MsrCodec synthetic = MsrCodec::unchecked(p, twin, codec.lambda());
  CHECK(code_of([&] { synthetic.ia_witness(5, 4, basis); }) == Errc::DependentBasis);

  const IaSweep sweep = msr_ia_sweep(codec, 10, 7);
  CHECK(sweep.pairs == 30);
  CHECK(sweep.failures == 0);
}
