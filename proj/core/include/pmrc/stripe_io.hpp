#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <span>
#include <vector>

#include "pmrc/codec.hpp"

namespace pmrc {

// Share file layout (little-endian throughout):
//   "PMRC" | version u8 = 1 | kind u8 | reserved u16 = 0
//   q, n, k, d, node_index (1-based), stripe_count, payload_len   (u64 each)
//   stripe_count * alpha symbols, each symbol_width(q) bytes
//   CRC-32 of everything above (u32)
inline constexpr std::uint8_t kShareVersion = 1;
inline constexpr std::size_t kShareHeaderBytes = 4 + 1 + 1 + 2 + 7 * 8;

struct ShareHeader {
  CodeKind kind = CodeKind::Mbr;
  std::uint64_t q = 0;
  std::uint64_t n = 0;
  std::uint64_t k = 0;
  std::uint64_t d = 0;
  std::uint64_t node_index = 0;
  std::uint64_t stripe_count = 0;
  std::uint64_t payload_len = 0;

  friend bool operator==(const ShareHeader&, const ShareHeader&) = default;
};

// True when the two headers describe shares of the same encoded file.
bool same_file(const ShareHeader& a, const ShareHeader& b) noexcept;

struct Share {
  ShareHeader header;
  std::vector<Symbol> symbols;  // stripe_count * alpha, stripe-major

  std::span<const Symbol> stripe(std::size_t index, std::size_t alpha) const {
    return {symbols.data() + index * alpha, alpha};
  }
  friend bool operator==(const Share&, const Share&) = default;
};

// ceil(bitlen(q-1) / 8)
std::size_t symbol_width(std::uint64_t q) noexcept;

// Parameters a header implies; throws CorruptShare if they are infeasible.
CodeParams params_from_header(const ShareHeader& header);

std::vector<std::uint8_t> serialize_share(const Share& share);
// Throws CorruptShare on bad magic, version, reserved bits, length, symbol
// range or checksum.
Share parse_share(std::span<const std::uint8_t> bytes);

void write_share_file(const std::filesystem::path& path, const Share& share);
Share read_share_file(const std::filesystem::path& path);

struct StripePlan {
  CodeParams params;
  std::uint64_t payload_len = 0;
  std::uint64_t stripe_count = 0;  // ceil(payload_len / B), one byte per symbol
};

// Throws FieldTooSmallForBytes when q < 257.
StripePlan plan_stripes(const CodeParams& params, std::uint64_t payload_len);

// Stripes are processed independently; threads > 1 splits them across
// worker threads. Output never depends on the thread count.
std::vector<Share> stripe_encode_file(const Codec& codec, std::span<const std::uint8_t> payload,
                                      unsigned threads = 1);

// Uses the first k shares. Throws BadShareCount (fewer than k, or a node
// repeated), HeaderMismatch (different files or a codec for other
// parameters), CorruptShare (a stripe decodes to non-byte symbols).
std::vector<std::uint8_t> stripe_decode(const Codec& codec, std::span<const Share> shares,
                                        unsigned threads = 1);

// Everything one helper uploads to repair one failed node: one symbol per
// stripe.
struct RepairStream {
  ShareHeader header;  // the helper's share header
  NodeId helper_id = 0;
  NodeId failed_id = 0;
  std::vector<Symbol> values;

  std::size_t wire_bytes() const noexcept { return values.size() * symbol_width(header.q); }
};

RepairStream make_repair_stream(const Codec& codec, const Share& helper, NodeId failed);

Share stripe_repair(const Codec& codec, NodeId failed, std::span<const RepairStream> streams,
                    unsigned threads = 1);

}  // namespace pmrc
