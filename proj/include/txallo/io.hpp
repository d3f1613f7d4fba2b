#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "txallo/allocation.hpp"
#include "txallo/metrics.hpp"
#include "txallo/params.hpp"
#include "txallo/replay.hpp"
#include "txallo/synthetic.hpp"
#include "txallo/transaction.hpp"

namespace txallo::io {

enum class TraceFormat { jsonl, csv };

/// Picks the format from the file extension (".csv" or anything else).
TraceFormat format_for_path(std::string_view path);

struct BadLine {
  std::size_t line_number = 0;
  std::string reason;
};

struct IngestResult {
  /// Stable-sorted by block height.
  std::vector<Transaction> txs;
  std::vector<BadLine> bad_lines;
};

/// Parses a trace. JSONL lines are objects with `block`, `inputs`, `outputs`;
/// CSV has the header `block,inputs,outputs` with `;`-separated account
/// lists. Inputs and outputs are merged into one account set. Blank lines are
/// ignored; malformed ones are collected in `bad_lines`.
IngestResult parse_trace(std::istream& in, TraceFormat format);

/// Reads `path`. Throws DataError when the file cannot be opened, or when it
/// has malformed lines and `skip_bad` is false.
IngestResult ingest(const std::string& path, TraceFormat format, bool skip_bad);

/// JSONL trace; the first account of each transaction is written as its input.
void write_trace_jsonl(std::ostream& out, std::span<const Transaction> txs);

/// `%.12g` formatting shared by every text output.
std::string format_number(double value);

/// `account,shard` rows sorted by account.
void write_allocation_csv(std::ostream& out, const std::map<AccountId, ShardIndex>& accounts);
std::map<AccountId, ShardIndex> read_allocation_csv(std::istream& in);

/// SystemReport plus the parameters that produced it, as pretty JSON.
std::string report_to_json(const SystemReport& report, const AlloParams& params,
                           std::string_view policy);

/// Inverse of report_to_json for the report part.
SystemReport report_from_json(std::string_view text);

inline constexpr std::string_view kEpochCsvHeader =
    "epoch,algorithm,gamma,rho,throughput_norm,latency_mean,runtime_ms,nodes,touched";

void write_epoch_csv(std::ostream& out, std::span<const EpochReport> reports);

/// SyntheticSpec from a JSON object; absent keys keep their defaults.
SyntheticSpec synthetic_spec_from_json(std::string_view text);

}  // namespace txallo::io
