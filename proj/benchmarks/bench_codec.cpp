#include <benchmark/benchmark.h>

#include <random>

#include "pmrc/factory.hpp"
#include "pmrc/stripe_io.hpp"

using namespace pmrc;

namespace {

CodeParams params_for(int kind, int n, int k, int d) {
  return derive_params(static_cast<CodeKind>(kind), n, k, d);
}

std::vector<Symbol> message(const CodeParams& p, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Symbol> u(p.B);
  for (auto& s : u) s = static_cast<Symbol>(rng() % p.q);
  return u;
}

std::vector<std::uint8_t> bytes(std::size_t n) {
  std::mt19937_64 rng(n);
  std::vector<std::uint8_t> out(n);
  for (auto& b : out) b = static_cast<std::uint8_t>(rng());
  return out;
}

// args: kind (1 mbr, 2 msr, 3 miser), n, k, d
void codec_args(benchmark::internal::Benchmark* b) {
  b->Args({1, 6, 3, 4})->Args({1, 12, 6, 10})->Args({2, 6, 3, 4})->Args({2, 12, 6, 10})->Args({3, 6, 3, 5})
      ->Args({3, 10, 5, 9});
}

void BM_Encode(benchmark::State& state) {
  const CodeParams p = params_for(state.range(0), state.range(1), state.range(2), state.range(3));
  const auto codec = build_codec(p);
  const auto u = message(p, 1);
  for (auto _ : state) benchmark::DoNotOptimize(codec->encode(u));
  state.SetLabel(describe(p));
}
BENCHMARK(BM_Encode)->Apply(codec_args);

void BM_Repair(benchmark::State& state) {
  const CodeParams p = params_for(state.range(0), state.range(1), state.range(2), state.range(3));
  const auto codec = build_codec(p);
  const Matrix C = codec->encode(message(p, 2));
  std::vector<NodeId> helpers;
  std::vector<Symbol> sent;
  for (NodeId h = 2; helpers.size() < codec->helpers_required(); ++h) {
    helpers.push_back(h);
    sent.push_back(codec->helper_symbol(h, C.row(h - 1), 1));
  }
  for (auto _ : state) benchmark::DoNotOptimize(codec->repair(1, helpers, sent));
  state.SetLabel(describe(p));
}
BENCHMARK(BM_Repair)->Apply(codec_args);

void BM_Reconstruct(benchmark::State& state) {
  const CodeParams p = params_for(state.range(0), state.range(1), state.range(2), state.range(3));
  const auto codec = build_codec(p);
  const Matrix C = codec->encode(message(p, 3));
  // The last k nodes: parity-heavy for the systematic constructions.
  std::vector<NodeId> ids;
  for (NodeId i = p.n - p.k + 1; i <= p.n; ++i) ids.push_back(i);
  const Matrix rows = row_range(C, p.n - p.k, p.k);
  for (auto _ : state) benchmark::DoNotOptimize(codec->reconstruct(ids, rows));
  state.SetLabel(describe(p));
}
BENCHMARK(BM_Reconstruct)->Apply(codec_args);

void BM_FileEncode(benchmark::State& state) {
  const auto codec = build_codec(derive_params(CodeKind::Msr, 7, 3, 5));
  const auto payload = bytes(1 << 20);
  const auto threads = static_cast<unsigned>(state.range(0));
  for (auto _ : state) benchmark::DoNotOptimize(stripe_encode_file(*codec, payload, threads));
  state.SetBytesProcessed(static_cast<std::int64_t>(state.iterations()) * static_cast<std::int64_t>(payload.size()));
}
BENCHMARK(BM_FileEncode)->Arg(1)->Arg(4)->Unit(benchmark::kMillisecond);

}  // namespace
BENCHMARK_MAIN();
