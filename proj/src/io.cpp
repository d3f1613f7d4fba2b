#include "txallo/io.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <istream>
#include <ostream>

#include <json.hpp>

#include "txallo/error.hpp"

namespace txallo::io {

namespace {

using ordered_json = nlohmann::ordered_json;

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.remove_suffix(1);
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  return s;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t pos = s.find(sep, start);
    out.push_back(s.substr(start, pos == std::string_view::npos ? std::string_view::npos : pos - start));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::optional<std::uint64_t> parse_u64(std::string_view s) {
  s = trim(s);
  std::uint64_t value = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty()) return std::nullopt;
  return value;
}

// Appends the account parsed from `text`; returns an error message on failure.
std::optional<std::string> add_account(std::vector<AccountId>& out, std::string_view text) {
  auto id = AccountId::from_hex(trim(text));
  if (!id) return "invalid account '" + std::string(text) + "'";
  out.push_back(std::move(*id));
  return std::nullopt;
}

std::optional<std::string> parse_jsonl_line(std::string_view line, Transaction& tx) {
  const auto doc = nlohmann::json::parse(line, nullptr, /*allow_exceptions=*/false);
  if (doc.is_discarded() || !doc.is_object()) return "not a JSON object";
  const auto block = doc.find("block");
  if (block == doc.end() || !block->is_number_unsigned()) return "missing or invalid 'block'";
  std::vector<AccountId> accounts;
  for (const char* key : {"inputs", "outputs"}) {
    const auto list = doc.find(key);
    if (list == doc.end() || !list->is_array()) return std::string("missing or invalid '") + key + "'";
    for (const auto& entry : *list) {
      if (!entry.is_string()) return std::string("non-string entry in '") + key + "'";
      if (auto err = add_account(accounts, entry.get<std::string>())) return err;
    }
  }
  if (accounts.empty()) return "transaction without accounts";
  tx = make_transaction(block->get<std::uint64_t>(), std::move(accounts));
  return std::nullopt;
}

std::optional<std::string> parse_csv_line(std::string_view line, Transaction& tx) {
  const auto fields = split(line, ',');
  if (fields.size() != 3) return "expected 3 fields";
  const auto block = parse_u64(fields[0]);
  if (!block) return "invalid block";
  std::vector<AccountId> accounts;
  for (std::size_t f = 1; f < 3; ++f) {
    for (std::string_view part : split(fields[f], ';')) {
      if (trim(part).empty()) continue;
      if (auto err = add_account(accounts, part)) return err;
    }
  }
  if (accounts.empty()) return "transaction without accounts";
  tx = make_transaction(*block, std::move(accounts));
  return std::nullopt;
}

double rounded(double value) { return std::stod(format_number(value)); }

}  // namespace

TraceFormat format_for_path(std::string_view path) {
  return path.size() >= 4 && path.substr(path.size() - 4) == ".csv" ? TraceFormat::csv
                                                                     : TraceFormat::jsonl;
}

IngestResult parse_trace(std::istream& in, TraceFormat format) {
  IngestResult result;
  std::string line;
  std::size_t number = 0;
  bool header_seen = format != TraceFormat::csv;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (text == "block,inputs,outputs") continue;
      result.bad_lines.push_back({number, "expected header 'block,inputs,outputs'"});
      continue;
    }
    Transaction tx;
    const auto err = format == TraceFormat::csv ? parse_csv_line(text, tx) : parse_jsonl_line(text, tx);
    if (err) {
      result.bad_lines.push_back({number, *err});
    } else {
      result.txs.push_back(std::move(tx));
    }
  }
  sort_canonical(result.txs);
  return result;
}

IngestResult ingest(const std::string& path, TraceFormat format, bool skip_bad) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open trace file: " + path);
  IngestResult result = parse_trace(in, format);
  if (!result.bad_lines.empty() && !skip_bad) {
    const BadLine& b = result.bad_lines.front();
    throw DataError(path + ": " + std::to_string(result.bad_lines.size()) +
                    " malformed line(s); first at line " + std::to_string(b.line_number) + ": " +
                    b.reason);
  }
  return result;
}

void write_trace_jsonl(std::ostream& out, std::span<const Transaction> txs) {
  for (const Transaction& tx : txs) {
    ordered_json line;
    line["block"] = tx.block;
    line["inputs"] = ordered_json::array({tx.accounts.front().to_hex()});
    ordered_json outputs = ordered_json::array();
    for (std::size_t i = 1; i < tx.accounts.size(); ++i) outputs.push_back(tx.accounts[i].to_hex());
    line["outputs"] = std::move(outputs);
    out << line.dump() << '\n';
  }
}

std::string format_number(double value) {
  if (value == 0.0) value = 0.0;  // drop the sign of -0
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", value);
  return buf;
}

void write_allocation_csv(std::ostream& out, const std::map<AccountId, ShardIndex>& accounts) {
  out << "account,shard\n";
  for (const auto& [account, shard] : accounts) out << account.to_hex() << ',' << shard << '\n';
}

std::map<AccountId, ShardIndex> read_allocation_csv(std::istream& in) {
  std::map<AccountId, ShardIndex> out;
  std::string line;
  std::size_t number = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++number;
    const std::string_view text = trim(line);
    if (text.empty()) continue;
    if (!header_seen) {
      header_seen = true;
      if (text != "account,shard") throw DataError("allocation file lacks 'account,shard' header");
      continue;
    }
    const auto fields = split(text, ',');
    const auto account = fields.size() == 2 ? AccountId::from_hex(trim(fields[0])) : std::nullopt;
    const auto shard = fields.size() == 2 ? parse_u64(fields[1]) : std::nullopt;
    if (!account || !shard) {
      throw DataError("malformed allocation line " + std::to_string(number));
    }
    if (!out.emplace(*account, static_cast<ShardIndex>(*shard)).second) {
      throw DataError("account listed twice in allocation: " + account->to_hex());
    }
  }
  return out;
}

std::string report_to_json(const SystemReport& report, const AlloParams& params,
                           std::string_view policy) {
  ordered_json doc;
  doc["policy"] = policy;
  doc["params"] = {{"k", params.k},
                   {"eta", rounded(params.eta)},
                   {"lambda", rounded(params.lambda)},
                   {"epsilon", rounded(params.epsilon)}};
  doc["gamma"] = rounded(report.gamma);
  doc["gamma_source"] = report.gamma_exact ? "transactions" : "graph";
  doc["rho"] = rounded(report.rho);
  doc["throughput_total"] = rounded(report.throughput_total);
  doc["throughput_normalized"] = rounded(report.throughput_normalized);
  doc["latency_mean"] = rounded(report.latency_mean);
  doc["latency_worst"] = rounded(report.latency_worst);
  ordered_json shards = ordered_json::array();
  for (const ShardReport& s : report.shards) {
    shards.push_back({{"sigma", rounded(s.sigma)},
                      {"throughput", rounded(s.throughput)},
                      {"latency", rounded(s.latency)},
                      {"intra_weight", rounded(s.intra_weight)},
                      {"cross_weight", rounded(s.cross_weight)}});
  }
  doc["shards"] = std::move(shards);
  return doc.dump(2) + "\n";
}

SystemReport report_from_json(std::string_view text) {
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw DataError("report is not a JSON object");
  try {
    SystemReport r;
    r.gamma = doc.at("gamma").get<double>();
    r.gamma_exact = doc.at("gamma_source").get<std::string>() == "transactions";
    r.rho = doc.at("rho").get<double>();
    r.throughput_total = doc.at("throughput_total").get<double>();
    r.throughput_normalized = doc.at("throughput_normalized").get<double>();
    r.latency_mean = doc.at("latency_mean").get<double>();
    r.latency_worst = doc.at("latency_worst").get<double>();
    for (const auto& s : doc.at("shards")) {
      r.shards.push_back({s.at("sigma").get<double>(), s.at("throughput").get<double>(),
                          s.at("latency").get<double>(), s.at("intra_weight").get<double>(),
                          s.at("cross_weight").get<double>()});
    }
    return r;
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed report: ") + e.what());
  }
}

void write_epoch_csv(std::ostream& out, std::span<const EpochReport> reports) {
  out << kEpochCsvHeader << '\n';
  for (const EpochReport& r : reports) {
    out << r.epoch_index << ',' << to_string(r.algorithm) << ',' << format_number(r.gamma) << ','
        << format_number(r.rho) << ',' << format_number(r.throughput_normalized) << ','
        << format_number(r.latency_mean) << ',' << format_number(r.runtime_ms) << ','
        << r.node_count << ',' << r.touched_count << '\n';
  }
}

SyntheticSpec synthetic_spec_from_json(std::string_view text) {
  const auto doc = nlohmann::json::parse(text, nullptr, false);
  if (doc.is_discarded() || !doc.is_object()) throw DataError("synthetic spec is not a JSON object");
  SyntheticSpec spec;
  try {
    spec.community_count = doc.value("community_count", spec.community_count);
    spec.nodes_per_community = doc.value("nodes_per_community", spec.nodes_per_community);
    spec.intra_edge_probability = doc.value("intra_edge_probability", spec.intra_edge_probability);
    spec.inter_edge_probability = doc.value("inter_edge_probability", spec.inter_edge_probability);
    spec.activity_skew = doc.value("activity_skew", spec.activity_skew);
    spec.blocks = doc.value("blocks", spec.blocks);
    spec.txs_per_block = doc.value("txs_per_block", spec.txs_per_block);
    spec.seed = doc.value("seed", spec.seed);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("malformed synthetic spec: ") + e.what());
  }
  spec.validate();
  return spec;
}

}  // namespace txallo::io
