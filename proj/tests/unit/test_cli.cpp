#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <random>
#include <sstream>

#include "cli.hpp"
#include "pmrc/factory.hpp"
#include "pmrc/simnet.hpp"
#include "pmrc/stripe_io.hpp"

namespace fs = std::filesystem;
using namespace pmrc;

namespace {

struct Run {
  int rc;
  std::string out, err;
};

Run pmrc_cli(std::vector<std::string> args) {
  std::ostringstream out, err;
  const int rc = cli::run(args, out, err);
  return {rc, out.str(), err.str()};
}

struct TempDir {
  fs::path path;
  TempDir() {
    path = fs::temp_directory_path() / ("pmrc_cli_" + std::to_string(std::random_device{}()));
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
  std::string operator/(const std::string& name) const { return (path / name).string(); }
};

std::vector<std::uint8_t> write_random(const std::string& path, std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<std::uint8_t> bytes(n);
  for (auto& b : bytes) b = static_cast<std::uint8_t>(rng() & 0xFF);
  std::ofstream(path, std::ios::binary).write(reinterpret_cast<const char*>(bytes.data()), n);
  return bytes;
}

std::vector<std::uint8_t> slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

}  // namespace

TEST_CASE("params") {
  const Run r = pmrc_cli({"params", "--kind", "mbr", "-n", "6", "-k", "3", "-d", "4"});
  CHECK(r.rc == cli::kOk);
  CHECK(r.out ==
        "kind: mbr\nn: 6\nk: 3\nd: 4\nalpha: 4\nbeta: 1\nB: 9\nq: 257\n"
        "repair bandwidth: 4 symbols per stripe\n"
        "cut-set:\n  i  min(alpha, (d-i)beta)\n  0  4\n  1  3\n  2  2\n  sum 9 = B\n");

  const Run msr = pmrc_cli({"params", "--kind", "msr", "-n", "6", "-k", "3", "-d", "4"});
  CHECK(msr.rc == cli::kOk);
  CHECK(msr.out.find("alpha: 2\n") != std::string::npos);
  CHECK(msr.out.find("sum 6 = B") != std::string::npos);

  CHECK(pmrc_cli({"params", "--kind", "msr", "-n", "6", "-k", "3", "-d", "3"}).rc == cli::kInfeasible);
  CHECK(pmrc_cli({"params", "--kind", "mbr", "-n", "6", "-k", "3", "-d", "4", "--q", "12"}).rc ==
        cli::kInfeasible);
  CHECK(pmrc_cli({"params", "--kind", "rs", "-n", "6", "-k", "3", "-d", "4"}).rc == cli::kUsage);
  CHECK(pmrc_cli({"params", "--kind", "mbr", "-n", "6"}).rc == cli::kUsage);
  CHECK(pmrc_cli({"frobnicate"}).rc == cli::kUsage);
  CHECK(pmrc_cli({}).rc == cli::kUsage);
  CHECK(pmrc_cli({"--help"}).rc == cli::kOk);
}

TEST_CASE("encode, lose shares, reconstruct, repair") {
  const TempDir dir;
  const auto payload = write_random(dir / "in.bin", 10000, 1);
  const Run enc = pmrc_cli({"encode", "--kind", "msr", "-n", "7", "-k", "3", "-d", "5", "--in", dir / "in.bin",
                            "--out", dir / "shares", "--threads", "3"});
  REQUIRE(enc.rc == cli::kOk);

  // The files match the library's encoding byte for byte.
  const auto codec = build_codec(derive_params(CodeKind::Msr, 7, 3, 5));
  const auto lib = stripe_encode_file(*codec, payload);
  for (std::size_t i = 0; i < 7; ++i) {
    CHECK(slurp(dir / ("shares/share_" + std::to_string(i + 1) + ".pmrc")) == serialize_share(lib[i]));
  }

  const Run rec = pmrc_cli({"reconstruct", "--shares", dir / "shares/share_7.pmrc", dir / "shares/share_2.pmrc",
                            dir / "shares/share_5.pmrc", "--out", dir / "out.bin"});
  REQUIRE(rec.rc == cli::kOk);
  CHECK(slurp(dir / "out.bin") == payload);
  CHECK(rec.out.find("sha256 " + sha256_hex(payload)) != std::string::npos);

  const Run rep = pmrc_cli({"repair", "--failed", "1", "--helpers", dir / "shares/share_2.pmrc",
                            dir / "shares/share_3.pmrc", dir / "shares/share_4.pmrc", dir / "shares/share_5.pmrc",
                            dir / "shares/share_6.pmrc", "--out", dir / "fixed_1.pmrc"});
  REQUIRE(rep.rc == cli::kOk);
  CHECK(slurp(dir / "fixed_1.pmrc") == serialize_share(lib[0]));
  const std::uint64_t stripes = lib[0].header.stripe_count;
  CHECK(rep.out.find("downloaded " + std::to_string(stripes * 5 * 2) + " bytes") != std::string::npos);

  // Too few helpers, or shares from different files.
  CHECK(pmrc_cli({"repair", "--failed", "1", "--helpers", dir / "shares/share_2.pmrc", "--out", dir / "x.pmrc"})
            .rc == cli::kCorrupt);
  CHECK(pmrc_cli({"reconstruct", "--shares", dir / "shares/share_2.pmrc", "--out", dir / "x.bin"}).rc ==
        cli::kCorrupt);

  auto bad = slurp(dir / "shares/share_3.pmrc");
  bad[70] ^= 1;
  std::ofstream(dir / "bad.pmrc", std::ios::binary).write(reinterpret_cast<const char*>(bad.data()), bad.size());
  CHECK(pmrc_cli({"reconstruct", "--shares", dir / "shares/share_1.pmrc", dir / "bad.pmrc",
                  dir / "shares/share_5.pmrc", "--out", dir / "x.bin"})
            .rc == cli::kCorrupt);
  CHECK(pmrc_cli({"reconstruct", "--shares", dir / "missing.pmrc", "--out", dir / "x.bin"}).rc == cli::kUsage);
}

TEST_CASE("systematic encode") {
  const TempDir dir;
  const auto payload = write_random(dir / "in.bin", 900, 2);
  REQUIRE(pmrc_cli({"encode", "--kind", "mbr", "-n", "6", "-k", "3", "-d", "4", "--in", dir / "in.bin", "--out",
                    dir / "s", "--systematic", "4,5,6"})
              .rc == cli::kOk);
  const Run rec = pmrc_cli({"reconstruct", "--shares", dir / "s/share_4.pmrc", dir / "s/share_1.pmrc",
                            dir / "s/share_6.pmrc", "--out", dir / "o.bin", "--systematic", "4,5,6"});
  REQUIRE(rec.rc == cli::kOk);
  CHECK(slurp(dir / "o.bin") == payload);
  CHECK(pmrc_cli({"encode", "--kind", "mbr", "-n", "6", "-k", "3", "-d", "4", "--in", dir / "in.bin", "--out",
                  dir / "s2", "--systematic", "4,5"})
            .rc == cli::kUsage);
  CHECK(pmrc_cli({"encode", "--kind", "mbr", "-n", "6", "-k", "3", "-d", "4", "--q", "13", "--in", dir / "in.bin",
                  "--out", dir / "s3"})
            .rc == cli::kInfeasible);
}

TEST_CASE("simulate") {
  const TempDir dir;
  std::ofstream(dir / "ok.cfg") << "kind=mbr\nn=6\nk=3\nd=4\nseed=3\npayload=synthetic:65536\n"
                                   "event=fail:1\nevent=repair:1\nevent=collect:1,2,3\n";
  const Run ok = pmrc_cli({"simulate", "--config", dir / "ok.cfg"});
  CHECK(ok.rc == cli::kOk);
  const SimReport lib = sim_run(load_sim_config(dir / "ok.cfg"));
  CHECK(ok.out.starts_with(lib.text()));
  CHECK(ok.out.find("0.4444") != std::string::npos);
  CHECK(ok.out.find(lib.csv()) != std::string::npos);

  CHECK(pmrc_cli({"simulate", "--config", dir / "ok.cfg", "--csv", dir / "bw.csv"}).rc == cli::kOk);
  const auto csv = slurp(dir / "bw.csv");
  CHECK(std::string(csv.begin(), csv.end()) == lib.csv());

  std::ofstream(dir / "blocked.cfg") << "kind=mbr\nn=5\nk=2\nd=3\npayload=synthetic:100\n"
                                        "event=fail:1\nevent=fail:2\nevent=fail:3\nevent=repair:1\n";
  CHECK(pmrc_cli({"simulate", "--config", dir / "blocked.cfg"}).rc == cli::kBlocked);

  std::ofstream(dir / "broken.cfg") << "kind=mbr\nn=5\n";
  CHECK(pmrc_cli({"simulate", "--config", dir / "broken.cfg"}).rc == cli::kUsage);
}

TEST_CASE("verify") {
  const Run mbr = pmrc_cli({"verify", "--kind", "mbr", "-n", "6", "-k", "3", "-d", "4"});
  CHECK(mbr.rc == cli::kOk);
  CHECK(mbr.out.find("ok") != std::string::npos);
  const Run ia = pmrc_cli({"verify", "--kind", "msr", "-n", "7", "-k", "3", "-d", "5", "--ia"});
  CHECK(ia.rc == cli::kOk);
  CHECK(ia.out.find("alignment: ok") != std::string::npos);
  const Run shortened = pmrc_cli({"verify", "--kind", "msr", "-n", "8", "-k", "3", "-d", "6"});
  CHECK(shortened.rc == cli::kOk);
  CHECK(shortened.out.find("shortened by 2") != std::string::npos);
  CHECK(pmrc_cli({"verify", "--kind", "miser", "-n", "6", "-k", "3", "-d", "5"}).rc == cli::kOk);
  CHECK(pmrc_cli({"verify", "--kind", "mbr", "-n", "6", "-k", "3", "-d", "4", "--ia"}).rc == cli::kUsage);
}
