#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "pmrc/codec.hpp"
#include "pmrc/stripe_io.hpp"

namespace pmrc {

std::string sha256_hex(std::span<const std::uint8_t> bytes);

enum class HelperPolicy { LowestId, Random };

struct HelperChoice {
  HelperPolicy policy = HelperPolicy::LowestId;
  std::optional<std::uint64_t> seed;  // random(<seed>); otherwise the run's rng
};

struct SimEvent {
  enum class Type { Fail, Repair, Collect };
  Type type = Type::Fail;
  NodeId node = 0;             // fail / repair target
  HelperChoice helpers;        // repair only
  std::vector<NodeId> nodes;   // collect only
};

struct SimConfig {
  CodeKind kind = CodeKind::Mbr;
  std::size_t n = 0, k = 0, d = 0;
  std::optional<std::uint64_t> q;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> payload_path;
  std::uint64_t synthetic_bytes = 0;  // used when payload_path is empty
  std::vector<SimEvent> events;
  std::optional<std::filesystem::path> spill_dir;
};

// key=value lines; '#' starts a comment. Keys: kind, n, k, d, q, seed,
// payload=<path|synthetic:BYTES>, spill=<dir>, and repeated
// event=fail:<id> | repair:<id>[:lowest-id|random|random(<seed>)] |
// collect:<id,id,...>. Relative payload paths resolve against base_dir.
// Throws ConfigError.
SimConfig parse_sim_config(std::istream& in, const std::filesystem::path& base_dir = {});
SimConfig load_sim_config(const std::filesystem::path& path);

/// n in-memory nodes holding shares of one payload. Helpers only ever see
/// their own share and the failed node's id.
class Cluster {
 public:
  Cluster(std::shared_ptr<const Codec> codec, std::span<const std::uint8_t> payload,
          std::uint64_t seed);

  const Codec& codec() const noexcept { return *codec_; }
  bool alive(NodeId node) const;
  const Share& share(NodeId node) const;
  const Share& original(NodeId node) const;
  std::size_t stripe_count() const noexcept { return originals_.front().header.stripe_count; }

  void fail(NodeId node);

  struct RepairResult {
    std::vector<NodeId> helpers;
    std::uint64_t bytes = 0;  // total download
    bool exact = false;       // regenerated share == original share
  };
  // Throws RepairBlocked if too few helpers are alive, ConfigError if the
  // node is not failed.
  RepairResult repair(NodeId node, const HelperChoice& choice);

  // Throws RepairBlocked if any requested node is down.
  std::vector<std::uint8_t> collect(std::span<const NodeId> nodes, std::uint64_t* bytes = nullptr);

  void spill(const std::filesystem::path& dir) const;

 private:
  void check(NodeId node) const;

  std::shared_ptr<const Codec> codec_;
  std::vector<Share> originals_;
  std::vector<std::optional<Share>> nodes_;
  std::mt19937_64 rng_;
};

struct EventRecord {
  std::size_t index = 0;  // 1-based position in the schedule
  SimEvent::Type type = SimEvent::Type::Fail;
  NodeId node = 0;
  std::vector<NodeId> nodes;  // helpers used, or collected nodes
  std::string status;         // ok, blocked, mismatch, unavailable, noop
  std::uint64_t bytes = 0;
  std::uint64_t symbols_per_stripe = 0;
  std::uint64_t naive_bytes = 0;  // download-everything baseline, repairs only
};

struct SimReport {
  CodeParams params;
  std::string codec;
  std::uint64_t seed = 0;
  std::uint64_t payload_len = 0;
  std::uint64_t stripe_count = 0;
  std::size_t width = 0;
  std::string payload_hash;
  std::vector<EventRecord> events;
  std::uint64_t repair_bytes = 0;
  std::uint64_t collect_bytes = 0;
  std::size_t blocked = 0;
  std::size_t mismatches = 0;

  // Line-oriented report ending in "report-hash: <sha256 of the lines above>".
  std::string text() const;
  std::string csv() const;
  std::string hash() const;
};

// Runs the schedule in order. Blocked repairs are recorded, not thrown.
SimReport sim_run(const SimConfig& config);

struct RepairMetric {
  std::size_t event = 0;
  NodeId node = 0;
  std::uint64_t repair_symbols = 0;  // per stripe
  std::uint64_t naive_symbols = 0;   // B per stripe
  double ratio = 0;
  std::uint64_t per_helper_upload = 0;
};

struct SimMetrics {
  std::vector<RepairMetric> repairs;
  std::string table() const;
};

// Throws Corruption if a completed repair did not download exactly d
// symbols per stripe.
SimMetrics sim_metrics(const SimReport& report);

}  // namespace pmrc
