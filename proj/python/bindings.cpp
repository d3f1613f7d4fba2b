#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "txallo/baselines.hpp"
#include "txallo/error.hpp"
#include "txallo/louvain.hpp"
#include "txallo/metrics.hpp"
#include "txallo/replay.hpp"
#include "txallo/synthetic.hpp"
#include "txallo/txallo.hpp"

#define STRINGIFY(x) #x
#define MACRO_STRINGIFY(x) STRINGIFY(x)

namespace py = pybind11;
using namespace txallo;

namespace {

AccountId parse_account(const std::string& text) {
  auto id = AccountId::from_hex(text);
  if (!id) throw ParameterError("invalid hex account: " + text);
  return *id;
}

Transaction to_transaction(std::uint64_t block, const std::vector<std::string>& accounts) {
  std::vector<AccountId> ids;
  ids.reserve(accounts.size());
  for (const std::string& a : accounts) ids.push_back(parse_account(a));
  return make_transaction(block, std::move(ids));
}

std::vector<std::string> hex_accounts(const Transaction& tx) {
  std::vector<std::string> out;
  for (const AccountId& a : tx.accounts) out.push_back(a.to_hex());
  return out;
}

std::map<std::string, ShardIndex> allocation_dict(const Allocation& alloc,
                                                  const TransactionGraph& graph) {
  std::map<std::string, ShardIndex> out;
  for (const auto& [account, shard] : alloc.to_account_map(graph)) out.emplace(account.to_hex(), shard);
  return out;
}

std::vector<std::uint32_t> labels_from_dict(const TransactionGraph& graph,
                                            const std::map<std::string, std::uint32_t>& labels) {
  std::vector<std::uint32_t> out(graph.node_count(), 0);
  for (NodeId v = 0; v < graph.node_count(); ++v) {
    auto it = labels.find(graph.account(v).to_hex());
    if (it == labels.end()) throw UnmappedAccount(graph.account(v).to_hex());
    out[v] = it->second;
  }
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Deterministic account-to-shard allocation and replay scoring.";

  auto base = py::register_exception<Error>(m, "TxalloError", PyExc_RuntimeError);
  py::register_exception<ParameterError>(m, "ParameterError", PyExc_ValueError);
  auto data = py::register_exception<DataError>(m, "DataError", base.ptr());
  py::register_exception<UnmappedAccount>(m, "UnmappedAccount", data.ptr());
  py::register_exception<StaleAllocation>(m, "StaleAllocation", base.ptr());

  py::class_<Transaction>(m, "Transaction")
      .def(py::init(&to_transaction), py::arg("block"), py::arg("accounts"))
      .def_readonly("block", &Transaction::block)
      .def_property_readonly("accounts", &hex_accounts)
      .def("__repr__", [](const Transaction& tx) {
        return "Transaction(block=" + std::to_string(tx.block) + ", accounts=" +
               std::to_string(tx.accounts.size()) + ")";
      });

  py::class_<TransactionGraph>(m, "TransactionGraph")
      .def_property_readonly("node_count", &TransactionGraph::node_count)
      .def_property_readonly("edge_count", &TransactionGraph::edge_count)
      .def_property_readonly("tx_count", &TransactionGraph::tx_count)
      .def("total_weight", &TransactionGraph::total_weight)
      .def("edges", [](const TransactionGraph& g) {
        std::vector<std::tuple<std::string, std::string, double>> out;
        for (const Edge& e : g.edges()) out.emplace_back(e.a.to_hex(), e.b.to_hex(), e.weight);
        return out;
      });

  m.def("pair_count", &pair_count, py::arg("tx"));
  m.def("build_graph", [](const std::vector<Transaction>& txs) { return build_graph(txs); },
        py::arg("txs"));
  m.def("merge_graph", &merge_graph, py::arg("base"), py::arg("delta"));

  py::class_<AlloParams>(m, "AlloParams")
      .def(py::init<>())
      .def_readwrite("k", &AlloParams::k)
      .def_readwrite("eta", &AlloParams::eta)
      .def_readwrite("lambda_", &AlloParams::lambda)
      .def_readwrite("epsilon", &AlloParams::epsilon)
      .def_readwrite("max_sweeps", &AlloParams::max_sweeps)
      .def("validate", &AlloParams::validate)
      .def_static("defaults_for", &AlloParams::defaults_for, py::arg("tx_count"), py::arg("k"),
                  py::arg("eta") = kDefaultEta);

  py::class_<Allocation>(m, "Allocation")
      .def_property_readonly("shard_count", &Allocation::shard_count)
      .def_property_readonly("complete", &Allocation::complete)
      .def("to_dict", &allocation_dict, py::arg("graph"),
           "Mapping of hex account to shard index.")
      .def("__eq__", [](const Allocation& a, const Allocation& b) { return a == b; });

  m.def(
      "allocation_from_dict",
      [](const TransactionGraph& graph, const std::map<std::string, ShardIndex>& shards,
         std::uint32_t k) {
        std::map<AccountId, ShardIndex> accounts;
        for (const auto& [hex, shard] : shards) accounts.emplace(parse_account(hex), shard);
        return allocation_from_map(graph, accounts, k);
      },
      py::arg("graph"), py::arg("shards"), py::arg("k"));

  m.def("mu", &mu, py::arg("tx"), py::arg("graph"), py::arg("alloc"));

  py::class_<GTxAlloResult>(m, "GTxAlloResult")
      .def_readonly("allocation", &GTxAlloResult::allocation)
      .def_readonly("sweeps", &GTxAlloResult::sweeps)
      .def_readonly("final_lambda", &GTxAlloResult::final_lambda)
      .def_readonly("history", &GTxAlloResult::history)
      .def_readonly("louvain_communities", &GTxAlloResult::louvain_communities);

  m.def("g_txallo", [](const TransactionGraph& g, const AlloParams& p) { return g_txallo(g, p); },
        py::arg("graph"), py::arg("params"), py::call_guard<py::gil_scoped_release>());
  m.def(
      "a_txallo",
      [](const TransactionGraph& merged, const Allocation& prev, const std::vector<Transaction>& new_txs,
         const AlloParams& params) {
        return a_txallo(merged, prev, make_epoch_delta(new_txs), params);
      },
      py::arg("merged"), py::arg("prev"), py::arg("new_txs"), py::arg("params"),
      py::call_guard<py::gil_scoped_release>());

  m.def("hash_allocate", &hash_allocate, py::arg("graph"), py::arg("k"));
  m.def("hash_shard", [](const std::string& hex, std::uint32_t k) { return hash_shard(parse_account(hex), k); },
        py::arg("account"), py::arg("k"));

  m.def(
      "louvain",
      [](const TransactionGraph& graph) {
        const CommunityAssignment c = louvain(graph);
        std::map<std::string, std::uint32_t> out;
        for (NodeId v = 0; v < graph.node_count(); ++v) out.emplace(graph.account(v).to_hex(), c.label[v]);
        return out;
      },
      py::arg("graph"));
  m.def(
      "modularity",
      [](const TransactionGraph& graph, const std::map<std::string, std::uint32_t>& labels) {
        return modularity(graph, labels_from_dict(graph, labels));
      },
      py::arg("graph"), py::arg("labels"));

  py::class_<ShardReport>(m, "ShardReport")
      .def_readonly("sigma", &ShardReport::sigma)
      .def_readonly("throughput", &ShardReport::throughput)
      .def_readonly("latency", &ShardReport::latency)
      .def_readonly("intra_weight", &ShardReport::intra_weight)
      .def_readonly("cross_weight", &ShardReport::cross_weight);

  py::class_<SystemReport>(m, "SystemReport")
      .def_readonly("gamma", &SystemReport::gamma)
      .def_readonly("gamma_exact", &SystemReport::gamma_exact)
      .def_readonly("rho", &SystemReport::rho)
      .def_readonly("throughput_total", &SystemReport::throughput_total)
      .def_readonly("throughput_normalized", &SystemReport::throughput_normalized)
      .def_readonly("latency_mean", &SystemReport::latency_mean)
      .def_readonly("latency_worst", &SystemReport::latency_worst)
      .def_readonly("shards", &SystemReport::shards);

  m.def(
      "system_report",
      [](const TransactionGraph& graph, const Allocation& alloc, const AlloParams& params,
         std::optional<std::vector<Transaction>> txs) {
        if (txs) return system_report(graph, alloc, params, std::span<const Transaction>(*txs));
        return system_report(graph, alloc, params);
      },
      py::arg("graph"), py::arg("alloc"), py::arg("params"), py::arg("txs") = py::none());
  m.def("gamma_graph", &gamma_graph, py::arg("graph"), py::arg("alloc"));
  m.def(
      "gamma_exact",
      [](const std::vector<Transaction>& txs, const TransactionGraph& graph, const Allocation& alloc) {
        return gamma_exact(txs, graph, alloc);
      },
      py::arg("txs"), py::arg("graph"), py::arg("alloc"));
  m.def("balance", [](const std::vector<double>& sigmas) { return balance(sigmas); }, py::arg("sigmas"));
  m.def("shard_latency", &shard_latency, py::arg("sigma"), py::arg("lambda_"));

  py::class_<SyntheticSpec>(m, "SyntheticSpec")
      .def(py::init<>())
      .def_readwrite("community_count", &SyntheticSpec::community_count)
      .def_readwrite("nodes_per_community", &SyntheticSpec::nodes_per_community)
      .def_readwrite("intra_edge_probability", &SyntheticSpec::intra_edge_probability)
      .def_readwrite("inter_edge_probability", &SyntheticSpec::inter_edge_probability)
      .def_readwrite("activity_skew", &SyntheticSpec::activity_skew)
      .def_readwrite("blocks", &SyntheticSpec::blocks)
      .def_readwrite("txs_per_block", &SyntheticSpec::txs_per_block)
      .def_readwrite("seed", &SyntheticSpec::seed);
  m.def("generate_synthetic", &generate_synthetic, py::arg("spec"));

  py::class_<EpochReport>(m, "EpochReport")
      .def_readonly("epoch_index", &EpochReport::epoch_index)
      .def_property_readonly("algorithm",
                             [](const EpochReport& r) { return std::string(to_string(r.algorithm)); })
      .def_readonly("gamma", &EpochReport::gamma)
      .def_readonly("rho", &EpochReport::rho)
      .def_readonly("throughput_normalized", &EpochReport::throughput_normalized)
      .def_readonly("latency_mean", &EpochReport::latency_mean)
      .def_readonly("runtime_ms", &EpochReport::runtime_ms)
      .def_readonly("node_count", &EpochReport::node_count)
      .def_readonly("touched_count", &EpochReport::touched_count);

  m.def(
      "replay",
      [](const std::vector<Transaction>& txs, std::uint32_t k, double eta, std::uint64_t tau1,
         std::optional<std::uint64_t> tau2, double warmup, const std::string& policy,
         bool record_timing) {
        ReplayConfig config;
        config.k = k;
        config.eta = eta;
        config.schedule.tau1 = tau1;
        config.schedule.tau2 = tau2;
        config.schedule.warmup_fraction = warmup;
        config.policy = parse_policy(policy);
        config.record_timing = record_timing;
        return replay(txs, config).reports;
      },
      py::arg("txs"), py::arg("k"), py::arg("eta") = kDefaultEta, py::arg("tau1") = 300,
      py::arg("tau2") = py::none(), py::arg("warmup") = 0.9, py::arg("policy") = "txallo",
      py::arg("record_timing") = true, py::call_guard<py::gil_scoped_release>());

#ifdef VERSION_INFO
  m.attr("__version__") = MACRO_STRINGIFY(VERSION_INFO);
#else
  m.attr("__version__") = "dev";
#endif
}
