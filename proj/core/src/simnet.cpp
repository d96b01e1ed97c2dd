#include "pmrc/simnet.hpp"

#include <openssl/evp.h>

#include <algorithm>
#include <charconv>
#include <fstream>
#include <iomanip>
#include <iterator>
#include <sstream>

#include "pmrc/error.hpp"
#include "pmrc/factory.hpp"

namespace pmrc {

std::string sha256_hex(std::span<const std::uint8_t> bytes) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(bytes.data(), bytes.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error(Errc::Io, "sha256 failed");
  }
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(2 * len);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

namespace {

std::string trim(std::string_view s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string_view::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return std::string(s.substr(b, e - b + 1));
}

std::uint64_t parse_u64(std::string_view text, std::string_view what) {
  std::uint64_t v = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, v);
  if (text.empty() || ec != std::errc() || ptr != end) {
    throw Error(Errc::ConfigError, std::string(what) + ": not a number: '" + std::string(text) + "'");
  }
  return v;
}

std::vector<NodeId> parse_ids(std::string_view text, std::string_view what) {
  std::vector<NodeId> ids;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = trim(text.substr(start, comma == std::string_view::npos ? comma : comma - start));
    ids.push_back(parse_u64(piece, what));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return ids;
}

HelperChoice parse_policy(std::string_view text) {
  if (text.empty() || text == "lowest-id") return {};
  if (text == "random") return {HelperPolicy::Random, std::nullopt};
  if (text.starts_with("random(") && text.ends_with(")")) {
    return {HelperPolicy::Random, parse_u64(text.substr(7, text.size() - 8), "random seed")};
  }
  throw Error(Errc::ConfigError, "unknown helper policy '" + std::string(text) + "'");
}

SimEvent parse_event(std::string_view text) {
  const auto colon = text.find(':');
  if (colon == std::string_view::npos) {
    throw Error(Errc::ConfigError, "event needs a target: '" + std::string(text) + "'");
  }
  const auto verb = text.substr(0, colon);
  const auto rest = text.substr(colon + 1);
  SimEvent ev;
  if (verb == "fail") {
    ev.type = SimEvent::Type::Fail;
    ev.node = parse_u64(rest, "fail");
  } else if (verb == "repair") {
    ev.type = SimEvent::Type::Repair;
    const auto c2 = rest.find(':');
    ev.node = parse_u64(rest.substr(0, c2), "repair");
    if (c2 != std::string_view::npos) ev.helpers = parse_policy(rest.substr(c2 + 1));
  } else if (verb == "collect") {
    ev.type = SimEvent::Type::Collect;
    ev.nodes = parse_ids(rest, "collect");
  } else {
    throw Error(Errc::ConfigError, "unknown event '" + std::string(verb) + "'");
  }
  return ev;
}

std::string join(const std::vector<NodeId>& ids) {
  std::string s;
  for (NodeId id : ids) s += (s.empty() ? "" : ",") + std::to_string(id);
  return s;
}

std::string_view event_name(SimEvent::Type t) {
  switch (t) {
    case SimEvent::Type::Fail: return "fail";
    case SimEvent::Type::Repair: return "repair";
    case SimEvent::Type::Collect: return "collect";
  }
  return "?";
}

std::vector<std::uint8_t> synthetic_payload(std::uint64_t seed, std::uint64_t bytes) {
  std::mt19937_64 gen(seed);
  std::vector<std::uint8_t> out(bytes);
  for (auto& b : out) b = static_cast<std::uint8_t>(gen() & 0xFF);
  return out;
}

std::vector<std::uint8_t> read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::ConfigError, "cannot read payload " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

SimConfig parse_sim_config(std::istream& in, const std::filesystem::path& base_dir) {
  SimConfig cfg;
  bool have_kind = false, have_n = false, have_k = false, have_d = false, have_payload = false;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    const std::string body = trim(line);
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos) {
      throw Error(Errc::ConfigError, "line " + std::to_string(lineno) + ": expected key=value");
    }
    const std::string key = trim(std::string_view(body).substr(0, eq));
    const std::string value = trim(std::string_view(body).substr(eq + 1));
    if (key == "kind") {
      cfg.kind = parse_kind(value);
      have_kind = true;
    } else if (key == "n") {
      cfg.n = parse_u64(value, key);
      have_n = true;
    } else if (key == "k") {
      cfg.k = parse_u64(value, key);
      have_k = true;
    } else if (key == "d") {
      cfg.d = parse_u64(value, key);
      have_d = true;
    } else if (key == "q") {
      cfg.q = parse_u64(value, key);
    } else if (key == "seed") {
      cfg.seed = parse_u64(value, key);
    } else if (key == "payload") {
      if (value.starts_with("synthetic:")) {
        cfg.payload_path.reset();
        cfg.synthetic_bytes = parse_u64(std::string_view(value).substr(10), "synthetic payload");
      } else {
        const std::filesystem::path p(value);
        cfg.payload_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
      }
      have_payload = true;
    } else if (key == "spill") {
      cfg.spill_dir = value;
    } else if (key == "event") {
      cfg.events.push_back(parse_event(value));
    } else {
      throw Error(Errc::ConfigError, "line " + std::to_string(lineno) + ": unknown key '" + key + "'");
    }
  }
  if (!have_kind || !have_n || !have_k || !have_d || !have_payload) {
    throw Error(Errc::ConfigError, "config needs kind, n, k, d and payload");
  }
  for (const SimEvent& ev : cfg.events) {
    const auto bad = [&](NodeId id) { return id < 1 || id > cfg.n; };
    if (ev.type == SimEvent::Type::Collect) {
      if (std::ranges::any_of(ev.nodes, bad)) throw Error(Errc::ConfigError, "collect node outside 1..n");
    } else if (bad(ev.node)) {
      throw Error(Errc::ConfigError, std::string(event_name(ev.type)) + " node outside 1..n");
    }
  }
  return cfg;
}

SimConfig load_sim_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::ConfigError, "cannot open config " + path.string());
  return parse_sim_config(in, path.parent_path());
}

Cluster::Cluster(std::shared_ptr<const Codec> codec, std::span<const std::uint8_t> payload,
                 std::uint64_t seed)
    : codec_(std::move(codec)), rng_(seed) {
  originals_ = stripe_encode_file(*codec_, payload);
  nodes_.assign(originals_.begin(), originals_.end());
}

void Cluster::check(NodeId node) const {
  if (node < 1 || node > nodes_.size()) {
    throw Error(Errc::IndexOutOfRange, "node " + std::to_string(node) + " outside 1..n");
  }
}

bool Cluster::alive(NodeId node) const {
  check(node);
  return nodes_[node - 1].has_value();
}

const Share& Cluster::share(NodeId node) const {
  if (!alive(node)) throw Error(Errc::RepairBlocked, "node " + std::to_string(node) + " is down");
  return *nodes_[node - 1];
}

const Share& Cluster::original(NodeId node) const {
  check(node);
  return originals_[node - 1];
}

void Cluster::fail(NodeId node) {
  check(node);
  nodes_[node - 1].reset();
}

Cluster::RepairResult Cluster::repair(NodeId node, const HelperChoice& choice) {
  if (alive(node)) throw Error(Errc::ConfigError, "node " + std::to_string(node) + " is not failed");
  std::vector<NodeId> candidates;
  for (NodeId id = 1; id <= nodes_.size(); ++id) {
    if (nodes_[id - 1]) candidates.push_back(id);
  }
  const std::size_t need = codec_->helpers_required();
  if (candidates.size() < need) {
    throw Error(Errc::RepairBlocked, "node " + std::to_string(node) + " needs " + std::to_string(need) +
                                         " helpers, " + std::to_string(candidates.size()) + " alive");
  }
  if (choice.policy == HelperPolicy::Random) {
    std::mt19937_64 local(choice.seed.value_or(0));
    std::mt19937_64& gen = choice.seed ? local : rng_;
    // Partial Fisher-Yates with plain modulo, so the choice is reproducible
    // across standard libraries.
    for (std::size_t i = 0; i < need; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(gen() % (candidates.size() - i));
      std::swap(candidates[i], candidates[j]);
    }
    candidates.resize(need);
    std::ranges::sort(candidates);
  } else {
    candidates.resize(need);
  }

  RepairResult result;
  result.helpers = candidates;
  std::vector<RepairStream> streams;
  streams.reserve(need);
  for (NodeId h : candidates) {
    // The helper sees its own share and the failed id, nothing else.
    streams.push_back(make_repair_stream(*codec_, *nodes_[h - 1], node));
    result.bytes += streams.back().wire_bytes();
  }
  Share rebuilt = stripe_repair(*codec_, node, streams);
  result.exact = rebuilt == originals_[node - 1];
  nodes_[node - 1] = std::move(rebuilt);
  return result;
}

std::vector<std::uint8_t> Cluster::collect(std::span<const NodeId> nodes, std::uint64_t* bytes) {
  std::vector<Share> shares;
  std::uint64_t total = 0;
  for (NodeId id : nodes) {
    shares.push_back(share(id));
    total += shares.back().symbols.size() * symbol_width(shares.back().header.q);
  }
  auto out = stripe_decode(*codec_, shares);
  if (bytes) *bytes = total;
  return out;
}

void Cluster::spill(const std::filesystem::path& dir) const {
  std::filesystem::create_directories(dir);
  for (NodeId id = 1; id <= nodes_.size(); ++id) {
    const auto path = dir / ("share_" + std::to_string(id) + ".pmrc");
    if (nodes_[id - 1]) {
      write_share_file(path, *nodes_[id - 1]);
    } else {
      std::filesystem::remove(path);
    }
  }
}

SimReport sim_run(const SimConfig& config) {
  const CodeParams params = derive_params(config.kind, config.n, config.k, config.d, config.q);
  auto codec = build_codec(params);
  const auto payload = config.payload_path ? read_file(*config.payload_path)
                                           : synthetic_payload(config.seed, config.synthetic_bytes);
  Cluster cluster(codec, payload, config.seed);

  SimReport report;
  report.params = params;
  report.codec = codec->description();
  report.seed = config.seed;
  report.payload_len = payload.size();
  report.stripe_count = cluster.stripe_count();
  report.width = symbol_width(params.q);
  report.payload_hash = sha256_hex(payload);

  for (std::size_t i = 0; i < config.events.size(); ++i) {
    const SimEvent& ev = config.events[i];
    EventRecord rec;
    rec.index = i + 1;
    rec.type = ev.type;
    rec.node = ev.node;
    switch (ev.type) {
      case SimEvent::Type::Fail:
        rec.status = cluster.alive(ev.node) ? "ok" : "noop";
        cluster.fail(ev.node);
        break;
      case SimEvent::Type::Repair:
        rec.naive_bytes = report.stripe_count * params.B * report.width;
        if (cluster.alive(ev.node)) {
          rec.status = "noop";
          break;
        }
        try {
          const auto r = cluster.repair(ev.node, ev.helpers);
          rec.nodes = r.helpers;
          rec.bytes = r.bytes;
          rec.symbols_per_stripe = r.helpers.size();
          rec.status = r.exact ? "ok" : "mismatch";
          report.repair_bytes += r.bytes;
          if (!r.exact) ++report.mismatches;
        } catch (const Error& e) {
          if (e.code() != Errc::RepairBlocked) throw;
          rec.status = "blocked";
          ++report.blocked;
        }
        break;
      case SimEvent::Type::Collect: {
        rec.nodes = ev.nodes;
        if (!std::ranges::all_of(ev.nodes, [&](NodeId id) { return cluster.alive(id); })) {
          rec.status = "unavailable";
          break;
        }
        std::uint64_t bytes = 0;
        const auto got = cluster.collect(ev.nodes, &bytes);
        rec.bytes = bytes;
        rec.symbols_per_stripe = ev.nodes.size() * params.alpha;
        report.collect_bytes += bytes;
        rec.status = got == payload ? "ok" : "mismatch";
        if (got != payload) ++report.mismatches;
        break;
      }
    }
    report.events.push_back(std::move(rec));
  }
  if (config.spill_dir) cluster.spill(*config.spill_dir);
  return report;
}

namespace {

std::string report_body(const SimReport& r) {
  std::ostringstream out;
  out << "code: " << r.codec << "\n";
  out << "params: kind=" << kind_name(r.params.kind) << " n=" << r.params.n << " k=" << r.params.k
      << " d=" << r.params.d << " alpha=" << r.params.alpha << " beta=" << r.params.beta
      << " B=" << r.params.B << " q=" << r.params.q << "\n";
  out << "seed: " << r.seed << "\n";
  out << "payload: " << r.payload_len << " bytes, " << r.stripe_count << " stripes, symbol width "
      << r.width << ", sha256 " << r.payload_hash << "\n";
  for (const EventRecord& e : r.events) {
    out << "event " << e.index << ": " << event_name(e.type);
    if (e.type == SimEvent::Type::Collect) {
      out << " " << join(e.nodes);
    } else {
      out << " " << e.node;
    }
    if (e.type == SimEvent::Type::Repair && !e.nodes.empty()) out << " helpers=" << join(e.nodes);
    out << " status=" << e.status;
    if (e.bytes) out << " bytes=" << e.bytes << " symbols/stripe=" << e.symbols_per_stripe;
    out << "\n";
  }
  out << "totals: repair_bytes=" << r.repair_bytes << " collect_bytes=" << r.collect_bytes
      << " blocked=" << r.blocked << " mismatches=" << r.mismatches << "\n";
  return out.str();
}

}  // namespace

std::string SimReport::hash() const {
  const std::string body = report_body(*this);
  return sha256_hex({reinterpret_cast<const std::uint8_t*>(body.data()), body.size()});
}

std::string SimReport::text() const { return report_body(*this) + "report-hash: " + hash() + "\n"; }

std::string SimReport::csv() const {
  std::ostringstream out;
  out << "event,action,node,nodes,status,symbols_per_stripe,bytes,naive_bytes\n";
  for (const EventRecord& e : events) {
    out << e.index << ',' << event_name(e.type) << ',' << e.node << ",\"" << join(e.nodes) << "\","
        << e.status << ',' << e.symbols_per_stripe << ',' << e.bytes << ',' << e.naive_bytes << "\n";
  }
  return out.str();
}

SimMetrics sim_metrics(const SimReport& report) {
  SimMetrics m;
  const auto& p = report.params;
  for (const EventRecord& e : report.events) {
    if (e.type != SimEvent::Type::Repair || e.nodes.empty()) continue;
    RepairMetric row;
    row.event = e.index;
    row.node = e.node;
    row.repair_symbols = e.symbols_per_stripe;
    row.naive_symbols = p.B;
    row.ratio = static_cast<double>(row.repair_symbols) / static_cast<double>(p.B);
    row.per_helper_upload = p.beta;
    if (row.repair_symbols != p.d * p.beta ||
        e.bytes != report.stripe_count * p.d * p.beta * report.width) {
      throw Error(Errc::Corruption, "repair of node " + std::to_string(e.node) + " downloaded " +
                                        std::to_string(e.bytes) + " bytes, expected d*beta per stripe");
    }
    m.repairs.push_back(row);
  }
  return m;
}

std::string SimMetrics::table() const {
  std::ostringstream out;
  out << "event  node  repair/stripe  naive/stripe  ratio   per-helper\n";
  for (const RepairMetric& r : repairs) {
    out << std::setw(5) << r.event << "  " << std::setw(4) << r.node << "  " << std::setw(13)
        << r.repair_symbols << "  " << std::setw(12) << r.naive_symbols << "  " << std::fixed
        << std::setprecision(4) << r.ratio << "  " << std::setw(10) << r.per_helper_upload << "\n";
  }
  return out.str();
}

}  // namespace pmrc
