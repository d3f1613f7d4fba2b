// txallo command-line tool: trace ingestion, allocation runs, replay and
// rescoring.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal failure.

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "txallo/baselines.hpp"
#include "txallo/error.hpp"
#include "txallo/io.hpp"
#include "txallo/metrics.hpp"
#include "txallo/replay.hpp"
#include "txallo/synthetic.hpp"
#include "txallo/txallo.hpp"

namespace {

using namespace txallo;

constexpr int kUsageError = 1;
constexpr int kDataError = 2;
constexpr int kInternalError = 3;

struct TraceOptions {
  std::string path;
  std::string format = "auto";
  bool skip_bad = false;

  io::IngestResult load() const {
    io::TraceFormat f = io::format_for_path(path);
    if (format == "csv") f = io::TraceFormat::csv;
    if (format == "jsonl") f = io::TraceFormat::jsonl;
    io::IngestResult r = io::ingest(path, f, skip_bad);
    if (!r.bad_lines.empty()) {
      std::cerr << "warning: skipped " << r.bad_lines.size() << " malformed line(s) in " << path
                << '\n';
    }
    if (r.txs.empty()) throw DataError("trace holds no transactions: " + path);
    return r;
  }
};

void add_trace_options(CLI::App* cmd, TraceOptions& trace, bool required) {
  auto* in = cmd->add_option("--in", trace.path, "Trace file (JSONL or CSV)");
  if (required) in->required();
  cmd->add_option("--format", trace.format, "Trace format")
      ->check(CLI::IsMember({"auto", "jsonl", "csv"}));
  cmd->add_flag("--skip-bad", trace.skip_bad, "Drop malformed trace lines instead of failing");
}

std::ofstream open_output(const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path);
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

AlloParams make_params(std::uint64_t tx_count, std::uint32_t k, double eta,
                       const std::optional<double>& lambda, const std::optional<double>& epsilon,
                       std::uint32_t max_sweeps) {
  AlloParams p = AlloParams::defaults_for(tx_count, k, eta);
  if (lambda) p.lambda = *lambda;
  if (epsilon) p.epsilon = *epsilon;
  p.max_sweeps = max_sweeps;
  p.validate();
  return p;
}

struct AllocateCommand {
  TraceOptions trace;
  std::uint32_t shards = 0;
  double eta = kDefaultEta;
  std::optional<double> lambda;
  std::optional<double> epsilon;
  std::uint32_t max_sweeps = kDefaultMaxSweeps;
  std::string policy = "txallo";
  std::string out_alloc;
  std::string out_report;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("allocate", "Allocate accounts of a trace to shards");
    add_trace_options(cmd, trace, true);
    cmd->add_option("--shards", shards, "Number of shards")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--eta", eta, "Cross-shard workload multiplier")->capture_default_str();
    cmd->add_option("--lambda", lambda, "Per-shard capacity (default: |T|/k)");
    cmd->add_option("--epsilon", epsilon, "Convergence threshold (default: 1e-5*|T|)");
    cmd->add_option("--max-sweeps", max_sweeps, "Optimisation sweep cap")->capture_default_str();
    cmd->add_option("--policy", policy, "Allocator")
        ->check(CLI::IsMember({"txallo", "hash"}))
        ->capture_default_str();
    cmd->add_option("--out-alloc", out_alloc, "Allocation CSV to write")->required();
    cmd->add_option("--out-report", out_report, "Report JSON to write")->required();
    cmd->callback([this] { run(); });
  }

  void run() const {
    const io::IngestResult trace_data = trace.load();
    const TransactionGraph graph = build_graph(trace_data.txs);
    const AlloParams params = make_params(graph.tx_count(), shards, eta, lambda, epsilon, max_sweeps);
    const Allocation alloc = parse_policy(policy) == Policy::txallo
                                 ? g_txallo(graph, params).allocation
                                 : hash_allocate(graph, shards);
    const SystemReport report = system_report(graph, alloc, params, trace_data.txs);

    auto alloc_out = open_output(out_alloc);
    io::write_allocation_csv(alloc_out, alloc.to_account_map(graph));
    auto report_out = open_output(out_report);
    report_out << io::report_to_json(report, params, policy);
  }
};

struct ReportCommand {
  TraceOptions trace;
  std::string alloc_path;
  std::optional<std::uint32_t> shards;
  double eta = kDefaultEta;
  std::optional<double> lambda;
  std::string out;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("report", "Score an existing allocation against a trace");
    add_trace_options(cmd, trace, true);
    cmd->add_option("--alloc", alloc_path, "Allocation CSV")->required();
    cmd->add_option("--shards", shards, "Number of shards (default: largest shard index + 1)")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--eta", eta, "Cross-shard workload multiplier")->capture_default_str();
    cmd->add_option("--lambda", lambda, "Per-shard capacity (default: |T|/k)");
    cmd->add_option("--out", out, "Report JSON to write (default: stdout)");
    cmd->callback([this] { run(); });
  }

  void run() const {
    const io::IngestResult trace_data = trace.load();
    std::istringstream alloc_text(read_file(alloc_path));
    const auto accounts = io::read_allocation_csv(alloc_text);
    ShardIndex largest = 0;
    for (const auto& [account, shard] : accounts) largest = std::max(largest, shard);
    const std::uint32_t k = shards ? *shards : static_cast<std::uint32_t>(largest) + 1;
    if (static_cast<std::uint32_t>(largest) >= k) {
      throw DataError("allocation uses shard " + std::to_string(largest) + " but --shards is " +
                      std::to_string(k));
    }

    const TransactionGraph graph = build_graph(trace_data.txs);
    const Allocation alloc = allocation_from_map(graph, accounts, k);
    const AlloParams params = make_params(graph.tx_count(), k, eta, lambda, std::nullopt,
                                          kDefaultMaxSweeps);
    const SystemReport report = system_report(graph, alloc, params, trace_data.txs);
    const std::string json = io::report_to_json(report, params, "file");
    if (out.empty()) {
      std::cout << json;
    } else {
      open_output(out) << json;
    }
  }
};

struct ReplayCommand {
  TraceOptions trace;
  std::string spec_path;
  std::uint32_t shards = 0;
  double eta = kDefaultEta;
  std::optional<double> lambda;
  std::optional<double> epsilon;
  std::optional<double> score_lambda;
  std::uint32_t max_sweeps = kDefaultMaxSweeps;
  std::string policy = "txallo";
  std::uint64_t tau1 = 300;
  std::optional<std::uint64_t> tau2;
  double warmup = 0.9;
  bool no_timing = false;
  std::string out;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("replay", "Replay a block stream with periodic re-allocation");
    add_trace_options(cmd, trace, false);
    auto* spec = cmd->add_option("--spec", spec_path, "Synthetic workload spec (JSON) instead of a trace");
    cmd->get_option("--in")->excludes(spec);
    cmd->add_option("--shards", shards, "Number of shards")->required()->check(CLI::PositiveNumber);
    cmd->add_option("--eta", eta, "Cross-shard workload multiplier")->capture_default_str();
    cmd->add_option("--lambda", lambda, "Allocation capacity (default: cumulative |T|/k)");
    cmd->add_option("--epsilon", epsilon, "Convergence threshold (default: 1e-5*cumulative |T|)");
    cmd->add_option("--score-lambda", score_lambda, "Scoring capacity (default: epoch |T|/k)");
    cmd->add_option("--max-sweeps", max_sweeps, "Optimisation sweep cap")->capture_default_str();
    cmd->add_option("--policy", policy, "Allocator")
        ->check(CLI::IsMember({"txallo", "hash"}))
        ->capture_default_str();
    cmd->add_option("--tau1", tau1, "Blocks per adaptive epoch")->capture_default_str();
    cmd->add_option("--tau2", tau2, "Blocks between global refreshes (default: never)");
    cmd->add_option("--warmup", warmup, "Warm-up share of the block range")->capture_default_str();
    cmd->add_flag("--no-timing", no_timing, "Report runtime_ms as 0 for reproducible output");
    cmd->add_option("--out", out, "Epoch time-series CSV to write")->required();
    cmd->callback([this] { run(); });
  }

  void run() const {
    if (trace.path.empty() == spec_path.empty()) {
      throw CLI::ValidationError("replay needs exactly one of --in or --spec");
    }
    std::vector<Transaction> txs;
    if (!spec_path.empty()) {
      txs = generate_synthetic(io::synthetic_spec_from_json(read_file(spec_path)));
    } else {
      txs = trace.load().txs;
    }

    ReplayConfig config;
    config.k = shards;
    config.eta = eta;
    config.lambda = lambda;
    config.epsilon = epsilon;
    config.score_lambda = score_lambda;
    config.max_sweeps = max_sweeps;
    config.policy = parse_policy(policy);
    config.schedule.tau1 = tau1;
    config.schedule.tau2 = tau2;
    config.schedule.warmup_fraction = warmup;
    config.record_timing = !no_timing;

    const ReplayResult result = replay(txs, config);
    auto csv = open_output(out);
    io::write_epoch_csv(csv, result.reports);
  }
};

struct SynthCommand {
  std::string spec_path;
  std::string out;

  void attach(CLI::App& app) {
    auto* cmd = app.add_subcommand("synth", "Generate a synthetic planted-community trace");
    cmd->add_option("--spec", spec_path, "Synthetic workload spec (JSON)")->required();
    cmd->add_option("--out", out, "JSONL trace to write")->required();
    cmd->callback([this] { run(); });
  }

  void run() const {
    const SyntheticSpec spec = io::synthetic_spec_from_json(read_file(spec_path));
    auto trace = open_output(out);
    io::write_trace_jsonl(trace, generate_synthetic(spec));
  }
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Account-to-shard allocation for sharded ledgers"};
  app.set_config("--config", "", "Config file (TOML/INI); flags take precedence");
  app.require_subcommand(1);

  AllocateCommand allocate;
  ReportCommand report;
  ReplayCommand replay;
  SynthCommand synth;
  allocate.attach(app);
  report.attach(app);
  replay.attach(app);
  synth.attach(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const ParameterError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsageError;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << '\n';
    return kInternalError;
  }
  return 0;
}
