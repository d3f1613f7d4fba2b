#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <sys/wait.h>

#include "oracles.hpp"
#include "txallo/io.hpp"
#include "txallo/synthetic.hpp"

using namespace txallo;

namespace {

namespace fs = std::filesystem;

fs::path tmp(const std::string& name) {
  const fs::path dir = fs::path(TXALLO_TEST_TMP) / "cli";
  fs::create_directories(dir);
  return dir / name;
}

int run(const std::string& args) {
  const std::string cmd = std::string("\"") + TXALLO_CLI_PATH + "\" " + args + " >/dev/null 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

fs::path write_spec() {
  const fs::path spec = tmp("spec.json");
  std::ofstream(spec) << R"({"community_count": 4, "nodes_per_community": 40, "blocks": 60,
                             "txs_per_block": 20, "seed": 3})";
  return spec;
}

fs::path write_trace() {
  const fs::path trace = tmp("trace.jsonl");
  REQUIRE(run("synth --spec " + write_spec().string() + " --out " + trace.string()) == 0);
  return trace;
}

}  // namespace

TEST_CASE("cli allocate with one shard and hashing puts everything in shard 0") {
  const fs::path trace = write_trace();
  const fs::path alloc = tmp("one.csv");
  const fs::path report = tmp("one.json");
  REQUIRE(run("allocate --in " + trace.string() + " --shards 1 --policy hash --out-alloc " +
              alloc.string() + " --out-report " + report.string()) == 0);
  std::istringstream in(slurp(alloc));
  const auto shards = io::read_allocation_csv(in);
  CHECK(!shards.empty());
  for (const auto& [a, s] : shards) CHECK(s == 0);
  CHECK(io::report_from_json(slurp(report)).throughput_normalized == doctest::Approx(1.0));
}

TEST_CASE("cli allocate is byte-identical across runs and rescoring agrees") {
  const fs::path trace = write_trace();
  const std::string base = "allocate --in " + trace.string() + " --shards 4 ";
  REQUIRE(run(base + "--out-alloc " + tmp("a1.csv").string() + " --out-report " + tmp("r1.json").string()) == 0);
  REQUIRE(run(base + "--out-alloc " + tmp("a2.csv").string() + " --out-report " + tmp("r2.json").string()) == 0);
  CHECK(slurp(tmp("a1.csv")) == slurp(tmp("a2.csv")));
  CHECK(slurp(tmp("r1.json")) == slurp(tmp("r2.json")));

  REQUIRE(run("report --in " + trace.string() + " --alloc " + tmp("a1.csv").string() +
              " --shards 4 --out " + tmp("r3.json").string()) == 0);
  const SystemReport a = io::report_from_json(slurp(tmp("r1.json")));
  const SystemReport b = io::report_from_json(slurp(tmp("r3.json")));
  CHECK(testing::near(a.throughput_total, b.throughput_total, 1e-9));
  CHECK(testing::near(a.gamma, b.gamma, 1e-9));
  CHECK(testing::near(a.latency_mean, b.latency_mean, 1e-9));
}

TEST_CASE("cli replay is reproducible with --no-timing") {
  const fs::path spec = write_spec();
  const std::string base = "replay --spec " + spec.string() + " --shards 4 --tau1 5 --tau2 15 --no-timing --out ";
  REQUIRE(run(base + tmp("e1.csv").string()) == 0);
  REQUIRE(run(base + tmp("e2.csv").string()) == 0);
  const std::string text = slurp(tmp("e1.csv"));
  CHECK(text == slurp(tmp("e2.csv")));
  CHECK(text.rfind(std::string(io::kEpochCsvHeader), 0) == 0);
  CHECK(text.find("adaptive") != std::string::npos);
}

TEST_CASE("cli exit codes") {
  const fs::path trace = write_trace();
  CHECK(run("") == 1);
  CHECK(run("allocate --in " + trace.string()) == 1);
  CHECK(run("allocate --in " + trace.string() + " --shards 2 --eta 0 --out-alloc " +
            tmp("x.csv").string() + " --out-report " + tmp("x.json").string()) == 1);
  CHECK(run("replay --in " + trace.string() + " --spec " + write_spec().string() +
            " --shards 2 --out " + tmp("x.csv").string()) == 1);
  CHECK(run("allocate --in " + tmp("missing.jsonl").string() + " --shards 2 --out-alloc " +
            tmp("x.csv").string() + " --out-report " + tmp("x.json").string()) == 2);
  const fs::path bad = tmp("bad.jsonl");
  std::ofstream(bad) << "garbage\n";
  CHECK(run("allocate --in " + bad.string() + " --shards 2 --out-alloc " + tmp("x.csv").string() +
            " --out-report " + tmp("x.json").string()) == 2);
  CHECK(run("allocate --in " + bad.string() + " --skip-bad --shards 2 --out-alloc " +
            tmp("x.csv").string() + " --out-report " + tmp("x.json").string()) == 2);
}
