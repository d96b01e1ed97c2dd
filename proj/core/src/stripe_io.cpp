#include "pmrc/stripe_io.hpp"

#include <zlib.h>

#include <algorithm>
#include <bit>
#include <cstring>
#include <exception>
#include <fstream>
#include <iterator>
#include <mutex>
#include <set>
#include <thread>

#include "pmrc/error.hpp"

namespace pmrc {
namespace {

constexpr std::uint8_t kMagic[4] = {'P', 'M', 'R', 'C'};

void put_le(std::vector<std::uint8_t>& out, std::uint64_t value, std::size_t width) {
  for (std::size_t i = 0; i < width; ++i) out.push_back(static_cast<std::uint8_t>(value >> (8 * i)));
}

std::uint64_t get_le(const std::uint8_t* p, std::size_t width) {
  std::uint64_t v = 0;
  for (std::size_t i = 0; i < width; ++i) v |= std::uint64_t{p[i]} << (8 * i);
  return v;
}

std::uint32_t crc32_of(std::span<const std::uint8_t> bytes) {
  uLong crc = crc32(0L, Z_NULL, 0);
  // zlib takes uInt lengths; feed large buffers in chunks.
  const std::uint8_t* p = bytes.data();
  std::size_t left = bytes.size();
  while (left > 0) {
    const auto chunk = static_cast<uInt>(std::min<std::size_t>(left, 1u << 30));
    crc = crc32(crc, p, chunk);
    p += chunk;
    left -= chunk;
  }
  return static_cast<std::uint32_t>(crc);
}

// Runs fn(s) for s in [0, count), split into contiguous ranges. The first
// exception thrown by any worker is rethrown on the caller's thread.
template <typename Fn>
void for_each_stripe(std::size_t count, unsigned threads, Fn&& fn) {
  const std::size_t workers = std::clamp<std::size_t>(threads, 1, std::max<std::size_t>(count, 1));
  if (workers == 1) {
    for (std::size_t s = 0; s < count; ++s) fn(s);
    return;
  }
  std::exception_ptr failure;
  std::mutex failure_mu;
  std::vector<std::thread> pool;
  pool.reserve(workers);
  const std::size_t per = (count + workers - 1) / workers;
  for (std::size_t w = 0; w < workers; ++w) {
    const std::size_t lo = w * per;
    const std::size_t hi = std::min(count, lo + per);
    pool.emplace_back([&, lo, hi] {
      try {
        for (std::size_t s = lo; s < hi; ++s) fn(s);
      } catch (...) {
        std::lock_guard lock(failure_mu);
        if (!failure) failure = std::current_exception();
      }
    });
  }
  for (auto& t : pool) t.join();
  if (failure) std::rethrow_exception(failure);
}

void check_codec_matches(const Codec& codec, const ShareHeader& h) {
  const auto& p = codec.params();
  if (static_cast<std::uint8_t>(p.kind) != static_cast<std::uint8_t>(h.kind) || p.q != h.q ||
      p.n != h.n || p.k != h.k || p.d != h.d) {
    throw Error(Errc::HeaderMismatch,
                "share parameters do not match codec " + describe(p));
  }
}

}  // namespace

bool same_file(const ShareHeader& a, const ShareHeader& b) noexcept {
  return a.kind == b.kind && a.q == b.q && a.n == b.n && a.k == b.k && a.d == b.d &&
         a.stripe_count == b.stripe_count && a.payload_len == b.payload_len;
}

std::size_t symbol_width(std::uint64_t q) noexcept {
  if (q <= 1) return 1;
  const auto bits = static_cast<std::size_t>(std::bit_width(q - 1));
  return std::max<std::size_t>(1, (bits + 7) / 8);
}

CodeParams params_from_header(const ShareHeader& h) {
  try {
    return derive_params(h.kind, h.n, h.k, h.d, h.q);
  } catch (const Error& e) {
    throw Error(Errc::CorruptShare, std::string("header describes no valid code: ") + e.what());
  }
}

std::vector<std::uint8_t> serialize_share(const Share& share) {
  const ShareHeader& h = share.header;
  const std::size_t w = symbol_width(h.q);
  std::vector<std::uint8_t> out;
  out.reserve(kShareHeaderBytes + share.symbols.size() * w + 4);
  for (std::uint8_t c : kMagic) out.push_back(c);
  out.push_back(kShareVersion);
  out.push_back(static_cast<std::uint8_t>(h.kind));
  put_le(out, 0, 2);
  for (std::uint64_t v : {h.q, h.n, h.k, h.d, h.node_index, h.stripe_count, h.payload_len}) {
    put_le(out, v, 8);
  }
  for (Symbol s : share.symbols) put_le(out, s, w);
  put_le(out, crc32_of(out), 4);
  return out;
}

Share parse_share(std::span<const std::uint8_t> bytes) {
  if (bytes.size() < kShareHeaderBytes + 4) {
    throw Error(Errc::CorruptShare, "share truncated (" + std::to_string(bytes.size()) + " bytes)");
  }
  const std::size_t body = bytes.size() - 4;
  if (crc32_of(bytes.first(body)) != get_le(bytes.data() + body, 4)) {
    throw Error(Errc::CorruptShare, "checksum mismatch");
  }
  const std::uint8_t* p = bytes.data();
  if (std::memcmp(p, kMagic, 4) != 0) throw Error(Errc::CorruptShare, "bad magic");
  if (p[4] != kShareVersion) {
    throw Error(Errc::CorruptShare, "unsupported version " + std::to_string(p[4]));
  }
  if (p[5] < 1 || p[5] > 3) throw Error(Errc::CorruptShare, "unknown code kind " + std::to_string(p[5]));
  if (get_le(p + 6, 2) != 0) throw Error(Errc::CorruptShare, "reserved bits set");

  Share share;
  ShareHeader& h = share.header;
  h.kind = static_cast<CodeKind>(p[5]);
  const std::uint8_t* f = p + 8;
  h.q = get_le(f, 8);
  h.n = get_le(f + 8, 8);
  h.k = get_le(f + 16, 8);
  h.d = get_le(f + 24, 8);
  h.node_index = get_le(f + 32, 8);
  h.stripe_count = get_le(f + 40, 8);
  h.payload_len = get_le(f + 48, 8);

  const CodeParams params = params_from_header(h);
  if (h.node_index < 1 || h.node_index > h.n) {
    throw Error(Errc::CorruptShare, "node index " + std::to_string(h.node_index) + " outside 1..n");
  }
  const std::size_t w = symbol_width(h.q);
  const std::size_t payload_bytes = body - kShareHeaderBytes;
  if (h.stripe_count > payload_bytes || payload_bytes != h.stripe_count * params.alpha * w) {
    throw Error(Errc::CorruptShare, "symbol section length disagrees with header");
  }
  if (h.payload_len > h.stripe_count * params.B) {
    throw Error(Errc::CorruptShare, "payload length exceeds stripe capacity");
  }
  share.symbols.resize(h.stripe_count * params.alpha);
  const std::uint8_t* s = p + kShareHeaderBytes;
  for (std::size_t i = 0; i < share.symbols.size(); ++i, s += w) {
    const std::uint64_t v = get_le(s, w);
    if (v >= h.q) throw Error(Errc::CorruptShare, "symbol out of field range");
    share.symbols[i] = static_cast<Symbol>(v);
  }
  return share;
}

void write_share_file(const std::filesystem::path& path, const Share& share) {
  const auto bytes = serialize_share(share);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "write failed: " + path.string());
}

Share read_share_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return parse_share(bytes);
}

StripePlan plan_stripes(const CodeParams& params, std::uint64_t payload_len) {
  if (params.q < 257) {
    throw Error(Errc::FieldTooSmallForBytes,
                "q=" + std::to_string(params.q) + " cannot hold every byte value");
  }
  return {params, payload_len, (payload_len + params.B - 1) / params.B};
}

std::vector<Share> stripe_encode_file(const Codec& codec, std::span<const std::uint8_t> payload,
                                      unsigned threads) {
  const CodeParams& p = codec.params();
  const StripePlan plan = plan_stripes(p, payload.size());
  std::vector<Share> shares(p.n);
  for (std::size_t i = 0; i < p.n; ++i) {
    shares[i].header = {p.kind, p.q, p.n, p.k, p.d, i + 1, plan.stripe_count, plan.payload_len};
    shares[i].symbols.resize(plan.stripe_count * p.alpha);
  }
  for_each_stripe(plan.stripe_count, threads, [&](std::size_t s) {
    std::vector<Symbol> message(p.B, 0);
    const std::size_t first = s * p.B;
    const std::size_t take = std::min<std::size_t>(p.B, payload.size() - first);
    std::copy_n(payload.begin() + static_cast<std::ptrdiff_t>(first), take, message.begin());
    const Matrix C = codec.encode(message);
    for (std::size_t i = 0; i < p.n; ++i) {
      std::ranges::copy(C.row(i), shares[i].symbols.begin() + static_cast<std::ptrdiff_t>(s * p.alpha));
    }
  });
  return shares;
}

std::vector<std::uint8_t> stripe_decode(const Codec& codec, std::span<const Share> shares,
                                        unsigned threads) {
  const CodeParams& p = codec.params();
  if (shares.size() < p.k) {
    throw Error(Errc::BadShareCount,
                "need " + std::to_string(p.k) + " shares, got " + std::to_string(shares.size()));
  }
  const auto used = shares.first(p.k);
  const ShareHeader& h0 = used[0].header;
  std::set<std::uint64_t> ids;
  std::vector<NodeId> nodes;
  for (const Share& sh : used) {
    if (!same_file(sh.header, h0)) throw Error(Errc::HeaderMismatch, "shares come from different files");
    if (!ids.insert(sh.header.node_index).second) {
      throw Error(Errc::BadShareCount, "node " + std::to_string(sh.header.node_index) + " given twice");
    }
    if (sh.symbols.size() != h0.stripe_count * p.alpha) {
      throw Error(Errc::CorruptShare, "share body length disagrees with header");
    }
    nodes.push_back(sh.header.node_index);
  }
  check_codec_matches(codec, h0);

  std::vector<std::uint8_t> out(h0.stripe_count * p.B);
  for_each_stripe(h0.stripe_count, threads, [&](std::size_t s) {
    Matrix rows(codec.field(), p.k, p.alpha);
    for (std::size_t j = 0; j < p.k; ++j) std::ranges::copy(used[j].stripe(s, p.alpha), rows.row(j).begin());
    const auto u = codec.reconstruct(nodes, rows);
    for (std::size_t b = 0; b < p.B; ++b) {
      if (u[b] > 0xFF) {
        throw Error(Errc::CorruptShare, "stripe " + std::to_string(s) + " decodes to a non-byte symbol");
      }
      out[s * p.B + b] = static_cast<std::uint8_t>(u[b]);
    }
  });
  out.resize(h0.payload_len);
  return out;
}

RepairStream make_repair_stream(const Codec& codec, const Share& helper, NodeId failed) {
  const CodeParams& p = codec.params();
  check_codec_matches(codec, helper.header);
  RepairStream rs{helper.header, helper.header.node_index, failed, {}};
  rs.values.resize(helper.header.stripe_count);
  for (std::size_t s = 0; s < rs.values.size(); ++s) {
    rs.values[s] = codec.helper_symbol(rs.helper_id, helper.stripe(s, p.alpha), failed);
  }
  return rs;
}

Share stripe_repair(const Codec& codec, NodeId failed, std::span<const RepairStream> streams,
                    unsigned threads) {
  const CodeParams& p = codec.params();
  if (streams.empty()) throw Error(Errc::BadHelperCount, "no repair streams");
  const ShareHeader& h0 = streams[0].header;
  check_codec_matches(codec, h0);
  std::vector<NodeId> helpers;
  for (const RepairStream& rs : streams) {
    if (!same_file(rs.header, h0)) throw Error(Errc::HeaderMismatch, "helpers hold different files");
    if (rs.failed_id != failed) {
      throw Error(Errc::HeaderMismatch, "stream computed for node " + std::to_string(rs.failed_id));
    }
    if (rs.values.size() != h0.stripe_count) {
      throw Error(Errc::CorruptShare, "repair stream length disagrees with header");
    }
    helpers.push_back(rs.helper_id);
  }

  Share out;
  out.header = h0;
  out.header.node_index = failed;
  out.symbols.resize(h0.stripe_count * p.alpha);
  for_each_stripe(h0.stripe_count, threads, [&](std::size_t s) {
    std::vector<Symbol> symbols(streams.size());
    for (std::size_t j = 0; j < streams.size(); ++j) symbols[j] = streams[j].values[s];
    const auto row = codec.repair(failed, helpers, symbols);
    std::ranges::copy(row, out.symbols.begin() + static_cast<std::ptrdiff_t>(s * p.alpha));
  });
  return out;
}

}  // namespace pmrc
