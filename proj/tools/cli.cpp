#include "cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <optional>
#include <ostream>
#include <set>

#include "pmrc/combinatorics.hpp"
#include "pmrc/error.hpp"
#include "pmrc/factory.hpp"
#include "pmrc/mbr.hpp"
#include "pmrc/miser.hpp"
#include "pmrc/msr.hpp"
#include "pmrc/simnet.hpp"
#include "pmrc/stripe_io.hpp"

namespace pmrc::cli {
namespace {

namespace fs = std::filesystem;

// Exhaustive checks in `verify` stop being attempted beyond this many subsets.
constexpr std::size_t kVerifySubsetBudget = 2'000'000;

struct CodeFlags {
  std::string kind;
  std::size_t n = 0, k = 0, d = 0;
  std::optional<std::uint64_t> q;
};

void add_code_flags(CLI::App* cmd, CodeFlags& f) {
  cmd->add_option("--kind", f.kind, "mbr, msr or miser")->required();
  cmd->add_option("-n,--n", f.n, "number of nodes")->required();
  cmd->add_option("-k,--k", f.k, "nodes needed to reconstruct")->required();
  cmd->add_option("-d,--d", f.d, "helpers per repair")->required();
  cmd->add_option("--q", f.q, "prime field size (default from the field policy)");
}

CodeParams params_of(const CodeFlags& f) {
  return derive_params(parse_kind(f.kind), f.n, f.k, f.d, f.q);
}

int exit_code(Errc code) {
  switch (code) {
    case Errc::ConfigError:
      return kUsage;
    case Errc::InfeasibleParameters:
    case Errc::BadFieldOverride:
    case Errc::FieldTooSmall:
    case Errc::FieldTooSmallForBytes:
    case Errc::NotPrime:
      return kInfeasible;
    case Errc::RepairBlocked:
      return kBlocked;
    default:
      return kCorrupt;
  }
}

// Systematic ids must be k distinct nodes in 1..n.
void check_systematic(const std::vector<NodeId>& ids, const CodeParams& p) {
  if (ids.empty()) return;
  std::set<NodeId> seen(ids.begin(), ids.end());
  if (ids.size() != p.k || seen.size() != ids.size() || *seen.begin() < 1 || *seen.rbegin() > p.n) {
    throw Error(Errc::ConfigError, "--systematic needs k=" + std::to_string(p.k) +
                                       " distinct node ids in 1.." + std::to_string(p.n));
  }
}

std::vector<std::uint8_t> read_bytes(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot open " + path.string());
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

void write_bytes(const fs::path& path, std::span<const std::uint8_t> bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw Error(Errc::Io, "cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw Error(Errc::Io, "write failed: " + path.string());
}

std::string join(const std::vector<NodeId>& ids) {
  std::string s;
  for (NodeId id : ids) s += (s.empty() ? "" : ",") + std::to_string(id);
  return s;
}

int cmd_params(const CodeFlags& f, std::ostream& out) {
  const CodeParams p = params_of(f);
  out << "kind: " << kind_name(p.kind) << "\n"
      << "n: " << p.n << "\nk: " << p.k << "\nd: " << p.d << "\n"
      << "alpha: " << p.alpha << "\nbeta: " << p.beta << "\nB: " << p.B << "\nq: " << p.q << "\n"
      << "repair bandwidth: " << repair_bandwidth(p) << " symbols per stripe\n"
      << "cut-set:\n"
      << "  i  min(alpha, (d-i)beta)\n";
  std::size_t total = 0;
  for (std::size_t i = 0; i < p.k; ++i) {
    const std::size_t term = std::min(p.alpha, (p.d - i) * p.beta);
    total += term;
    out << "  " << i << "  " << term << "\n";
  }
  out << "  sum " << total << (total == p.B ? " = B" : " != B") << "\n";
  return kOk;
}

int cmd_encode(const CodeFlags& f, const std::string& in, const std::string& dir,
               const std::vector<NodeId>& systematic, unsigned threads, std::ostream& out) {
  const CodeParams p = params_of(f);
  check_systematic(systematic, p);
  if (p.q < 257) {
    throw Error(Errc::FieldTooSmallForBytes, "q=" + std::to_string(p.q) + " cannot hold every byte value");
  }
  CodecOptions options;
  options.systematic = systematic;
  const auto codec = build_codec(p, options);

  const auto payload = read_bytes(in);
  const auto shares = stripe_encode_file(*codec, payload, threads);
  fs::create_directories(dir);
  for (const Share& s : shares) {
    const fs::path path = fs::path(dir) / ("share_" + std::to_string(s.header.node_index) + ".pmrc");
    write_share_file(path, s);
  }
  out << codec->description() << "\n"
      << "payload: " << payload.size() << " bytes, " << (shares.empty() ? 0 : shares[0].header.stripe_count)
      << " stripes, symbol width " << symbol_width(p.q) << "\n"
      << "wrote " << shares.size() << " shares to " << dir << "\n";
  return kOk;
}

int cmd_reconstruct(const std::vector<std::string>& files, const std::string& target,
                    const std::vector<NodeId>& systematic, unsigned threads, std::ostream& out) {
  std::vector<Share> shares;
  for (const auto& file : files) shares.push_back(read_share_file(file));
  const CodeParams p = params_from_header(shares.front().header);
  check_systematic(systematic, p);
  CodecOptions options;
  options.systematic = systematic;
  const auto codec = build_codec(p, options);
  const auto payload = stripe_decode(*codec, shares, threads);
  write_bytes(target, payload);
  std::vector<NodeId> used;
  for (std::size_t i = 0; i < std::min(shares.size(), p.k); ++i) used.push_back(shares[i].header.node_index);
  out << "reconstructed " << payload.size() << " bytes from nodes " << join(used) << "\n"
      << "sha256 " << sha256_hex(payload) << "\n";
  return kOk;
}

int cmd_repair(NodeId failed, const std::vector<std::string>& files, const std::string& target,
               unsigned threads, std::ostream& out) {
  std::vector<Share> helpers;
  for (const auto& file : files) helpers.push_back(read_share_file(file));
  const CodeParams p = params_from_header(helpers.front().header);
  if (failed < 1 || failed > p.n) {
    throw Error(Errc::ConfigError, "--failed must be in 1.." + std::to_string(p.n));
  }
  const auto codec = build_codec(p);
  if (helpers.size() != codec->helpers_required()) {
    throw Error(Errc::BadHelperCount, "repair needs exactly " + std::to_string(codec->helpers_required()) +
                                          " helper shares, got " + std::to_string(helpers.size()));
  }
  std::vector<RepairStream> streams;
  std::vector<NodeId> ids;
  std::uint64_t bytes = 0;
  for (const Share& h : helpers) {
    streams.push_back(make_repair_stream(*codec, h, failed));
    ids.push_back(h.header.node_index);
    bytes += streams.back().wire_bytes();
  }
  const Share rebuilt = stripe_repair(*codec, failed, streams, threads);
  write_share_file(target, rebuilt);
  out << "repaired node " << failed << " from helpers " << join(ids) << "\n"
      << "downloaded " << bytes << " bytes (" << streams.size() << " symbols per stripe, "
      << rebuilt.header.stripe_count << " stripes)\n";
  return kOk;
}

int cmd_simulate(const std::string& config_path, const std::string& csv_path, std::ostream& out) {
  const SimConfig cfg = load_sim_config(config_path);
  const SimReport report = sim_run(cfg);
  out << report.text();
  const SimMetrics metrics = sim_metrics(report);
  if (!metrics.repairs.empty()) out << "\n" << metrics.table();
  if (csv_path.empty()) {
    out << "\n" << report.csv();
  } else {
    const std::string csv = report.csv();
    write_bytes(csv_path, {reinterpret_cast<const std::uint8_t*>(csv.data()), csv.size()});
  }
  if (report.blocked > 0) return kBlocked;
  if (report.mismatches > 0) return kCorrupt;
  return kOk;
}

void print_report(std::ostream& out, std::string_view what, const PsiReport& r) {
  out << what << ": " << (r.ok ? "ok" : "FAILED");
  if (r.subsets_checked) out << " (" << r.subsets_checked << " subsets)";
  if (!r.ok) out << " - " << r.failure << " at rows " << join(r.witness);
  out << "\n";
}

int cmd_verify(const CodeFlags& f, bool ia, std::ostream& out) {
  const CodeParams p = params_of(f);
  if (ia && p.kind != CodeKind::Msr) throw Error(Errc::ConfigError, "--ia applies to msr codes only");
  const auto codec = build_codec(p);
  out << codec->description() << "\n";
  bool ok = true;
  switch (p.kind) {
    case CodeKind::Mbr: {
      const auto& mbr = dynamic_cast<const MbrCodec&>(*codec);
      if (binomial(p.n, p.d) + binomial(p.n, p.k) > kVerifySubsetBudget) {
        out << "psi: too many subsets for an exhaustive check\n";
        break;
      }
      const PsiReport r = verify_mbr_psi(mbr.psi(), p.k);
      print_report(out, "psi", r);
      ok = r.ok;
      break;
    }
    case CodeKind::Msr: {
      const std::size_t depth = shortening_depth(p);
      const CodeParams base_params =
          depth == 0 ? p : derive_params(CodeKind::Msr, p.n + depth, p.k + depth, p.d + depth, p.q);
      const MsrCodec base(base_params);
      if (depth > 0) out << "shortened by " << depth << "; checking the parent " << describe(base_params) << "\n";
      if (binomial(base_params.n, base_params.d) > kVerifySubsetBudget) {
        out << "psi: too many subsets for an exhaustive check\n";
      } else {
        const PsiReport r = verify_msr_psi(base.phi(), base.lambda(), base_params.d);
        print_report(out, "psi", r);
        ok = r.ok;
      }
      if (ia) {
        const IaSweep sweep = msr_ia_sweep(base, 100, 1);
        out << "alignment: " << (sweep.failures == 0 ? "ok" : "FAILED") << " (" << sweep.pairs
            << " pairs, " << sweep.checks << " checks, " << sweep.failures << " failures)\n";
        ok = ok && sweep.failures == 0;
      }
      break;
    }
    case CodeKind::Miser: {
      const std::size_t depth = shortening_depth(p);
      const CodeParams base_params =
          depth == 0 ? p : derive_params(CodeKind::Miser, p.n + depth, p.k + depth, p.d + depth, p.q);
      const MiserCodec base(base_params);
      if (depth > 0) out << "shortened by " << depth << "; checking the parent " << describe(base_params) << "\n";
      out << "rho: " << base.rho() << "\n";
      const PsiReport r = verify_square_minors(base.phi());
      print_report(out, "phi minors", r);
      ok = r.ok;
      break;
    }
  }
  return ok ? kOk : kCorrupt;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Product-matrix regenerating codes", "pmrc"};
  app.require_subcommand(1);

  CodeFlags code;
  std::string in_path, out_path, config_path, csv_path;
  std::vector<NodeId> systematic;
  std::vector<std::string> share_files;
  NodeId failed = 0;
  unsigned threads = 1;
  bool ia = false;

  auto* params = app.add_subcommand("params", "print code parameters and the cut-set table");
  add_code_flags(params, code);

  auto* encode = app.add_subcommand("encode", "split a file into n share files");
  add_code_flags(encode, code);
  encode->add_option("--in", in_path, "input file")->required()->check(CLI::ExistingFile);
  encode->add_option("--out", out_path, "output directory")->required();
  encode->add_option("--systematic", systematic, "k node ids that store the file uncoded")
      ->delimiter(',');
  encode->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* reconstruct = app.add_subcommand("reconstruct", "rebuild the file from k shares");
  reconstruct->add_option("--shares", share_files, "share files")->required()->check(CLI::ExistingFile);
  reconstruct->add_option("--out", out_path, "output file")->required();
  reconstruct->add_option("--systematic", systematic, "ids given to encode --systematic")
      ->delimiter(',');
  reconstruct->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* repair = app.add_subcommand("repair", "regenerate a lost share from d helper shares");
  repair->add_option("--failed", failed, "node to regenerate (1-based)")->required();
  repair->add_option("--helpers", share_files, "helper share files")->required()->check(CLI::ExistingFile);
  repair->add_option("--out", out_path, "output share file")->required();
  repair->add_option("--threads", threads, "worker threads")->check(CLI::PositiveNumber);

  auto* simulate = app.add_subcommand("simulate", "run a failure/repair schedule");
  simulate->add_option("--config", config_path, "key=value schedule")->required()->check(CLI::ExistingFile);
  simulate->add_option("--csv", csv_path, "write per-event bandwidth CSV here instead of stdout");

  auto* verify = app.add_subcommand("verify", "check the encoding matrix conditions");
  add_code_flags(verify, code);
  verify->add_flag("--ia", ia, "also check the interference-alignment identity (msr)");

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e, out, err);
    return rc == 0 ? kOk : kUsage;
  }

  try {
    if (*params) return cmd_params(code, out);
    if (*encode) return cmd_encode(code, in_path, out_path, systematic, threads, out);
    if (*reconstruct) return cmd_reconstruct(share_files, out_path, systematic, threads, out);
    if (*repair) return cmd_repair(failed, share_files, out_path, threads, out);
    if (*simulate) return cmd_simulate(config_path, csv_path, out);
    if (*verify) return cmd_verify(code, ia, out);
  } catch (const Error& e) {
    err << "pmrc: " << e.what() << "\n";
    return exit_code(e.code());
  } catch (const std::exception& e) {
    err << "pmrc: " << e.what() << "\n";
    return kCorrupt;
  }
  return kUsage;
}

}  // namespace pmrc::cli
