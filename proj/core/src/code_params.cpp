#include "pmrc/code_params.hpp"

#include <algorithm>
#include <cctype>

#include "pmrc/error.hpp"
#include "pmrc/ffield.hpp"

namespace pmrc {

std::string_view kind_name(CodeKind kind) noexcept {
  switch (kind) {
    case CodeKind::Mbr: return "mbr";
    case CodeKind::Msr: return "msr";
    case CodeKind::Miser: return "miser";
  }
  return "?";
}

CodeKind parse_kind(std::string_view text) {
  std::string lower(text);
  std::transform(lower.begin(), lower.end(), lower.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  if (lower == "mbr") return CodeKind::Mbr;
  if (lower == "msr") return CodeKind::Msr;
  if (lower == "miser") return CodeKind::Miser;
  throw Error(Errc::ConfigError, "unknown code kind '" + std::string(text) + "'");
}

std::size_t cutset_B(std::size_t k, std::size_t d, std::size_t alpha, std::size_t beta) {
  std::size_t total = 0;
  for (std::size_t i = 0; i < k && i <= d; ++i) total += std::min(alpha, (d - i) * beta);
  return total;
}

std::uint64_t default_field_size(CodeKind kind, std::size_t n) {
  const std::uint64_t floor = 257;
  const std::uint64_t nn = n;
  const std::uint64_t want = kind == CodeKind::Mbr ? 2 * nn : nn * nn;
  return smallest_valid_prime(std::max(want, floor));
}

namespace {

[[noreturn]] void infeasible(const std::string& why) {
  throw Error(Errc::InfeasibleParameters, why);
}

}  // namespace

CodeParams derive_params(CodeKind kind, std::size_t n, std::size_t k, std::size_t d,
                         std::optional<std::uint64_t> q_override) {
  const std::string triple =
      "[n=" + std::to_string(n) + ", k=" + std::to_string(k) + ", d=" + std::to_string(d) + "]";
  if (k < 1) infeasible(triple + ": k must be at least 1");
  if (d < k || d + 1 > n) infeasible(triple + ": need k <= d <= n-1");

  CodeParams p;
  p.kind = kind;
  p.n = n;
  p.k = k;
  p.d = d;
  p.beta = 1;
  switch (kind) {
    case CodeKind::Mbr:
      p.alpha = d;
      p.B = k * d - k * (k - 1) / 2;
      break;
    case CodeKind::Msr:
      if (k < 2) infeasible(triple + ": MSR needs k >= 2");
      if (d + 2 < 2 * k) infeasible(triple + ": MSR needs d >= 2k-2");
      p.alpha = d - k + 1;
      p.B = k * p.alpha;
      break;
    case CodeKind::Miser:
      if (n != d + 1) infeasible(triple + ": MISER needs n = d+1");
      if (d + 1 < 2 * k) infeasible(triple + ": MISER needs d >= 2k-1");
      p.alpha = d - k + 1;
      p.B = k * p.alpha;
      break;
  }
  if (q_override) {
    if (*q_override > Field::kMaxModulus || !is_prime(*q_override)) {
      throw Error(Errc::BadFieldOverride, "q=" + std::to_string(*q_override) + " is not a prime");
    }
    p.q = *q_override;
  } else {
    p.q = default_field_size(kind, n);
  }
  if (p.B != cutset_B(k, d, p.alpha, p.beta)) {
    throw Error(Errc::Corruption, triple + ": B does not meet the cut-set bound");
  }
  return p;
}

std::size_t repair_bandwidth(const CodeParams& params) noexcept { return params.d * params.beta; }

std::size_t shortening_depth(const CodeParams& params) noexcept {
  switch (params.kind) {
    case CodeKind::Mbr: return 0;
    case CodeKind::Msr: return params.d + 2 - 2 * params.k;
    case CodeKind::Miser: return params.d + 1 - 2 * params.k;
  }
  return 0;
}

std::string describe(const CodeParams& p) {
  return std::string(kind_name(p.kind)) + "[n=" + std::to_string(p.n) + ", k=" +
         std::to_string(p.k) + ", d=" + std::to_string(p.d) + ", alpha=" +
         std::to_string(p.alpha) + ", B=" + std::to_string(p.B) + ", q=" + std::to_string(p.q) +
         "]";
}

}  // namespace pmrc
