#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace pmrc {

// Values double as the share-file kind byte.
enum class CodeKind : std::uint8_t { Mbr = 1, Msr = 2, Miser = 3 };

std::string_view kind_name(CodeKind kind) noexcept;
// Accepts "mbr", "msr", "miser" (case-insensitive); throws ConfigError.
CodeKind parse_kind(std::string_view text);

struct CodeParams {
  CodeKind kind = CodeKind::Mbr;
  std::size_t n = 0;
  std::size_t k = 0;
  std::size_t d = 0;
  std::size_t alpha = 0;  // symbols stored per node
  std::size_t beta = 1;   // symbols sent per helper per repair
  std::size_t B = 0;      // message symbols per stripe
  std::uint64_t q = 0;

  friend bool operator==(const CodeParams&, const CodeParams&) = default;
};

// sum_{i=0}^{k-1} min(alpha, (d - i) * beta)
std::size_t cutset_B(std::size_t k, std::size_t d, std::size_t alpha, std::size_t beta);

// Field-size policy: MBR -> smallest prime >= max(2n, 257); MSR and MISER ->
// smallest prime >= max(n^2, 257).
std::uint64_t default_field_size(CodeKind kind, std::size_t n);

// Throws InfeasibleParameters when (n, k, d) is outside the constructive range
// of the kind, BadFieldOverride when q_override is not prime.
CodeParams derive_params(CodeKind kind, std::size_t n, std::size_t k, std::size_t d,
                         std::optional<std::uint64_t> q_override = std::nullopt);

// d * beta symbols per stripe.
std::size_t repair_bandwidth(const CodeParams& params) noexcept;

// Shortening depth for MSR (i = d - 2k + 2) and MISER (i = d - 2k + 1).
std::size_t shortening_depth(const CodeParams& params) noexcept;

std::string describe(const CodeParams& params);

}  // namespace pmrc
