#include "txallo/louvain.hpp"

#include <algorithm>
#include <limits>
#include <set>

#include "txallo/error.hpp"

namespace txallo {

namespace {

// Compressed graph for one Louvain level. Node order is the visit order.
struct LevelGraph {
  std::vector<std::size_t> offsets{0};
  std::vector<std::uint32_t> targets;
  std::vector<double> weights;
  // A_vv: twice the self-loop weight at level 0, internal weight afterwards.
  std::vector<double> loop;
  std::vector<double> strength;

  std::size_t size() const { return loop.size(); }
};

LevelGraph base_level(const TransactionGraph& graph, const std::vector<NodeId>& order) {
  std::vector<std::uint32_t> position(graph.node_count());
  for (std::uint32_t i = 0; i < order.size(); ++i) position[order[i]] = i;

  LevelGraph level;
  level.loop.reserve(order.size());
  level.strength.reserve(order.size());
  std::vector<std::pair<std::uint32_t, double>> row;
  for (NodeId v : order) {
    row.clear();
    for (const Neighbor& n : graph.neighbors(v)) row.emplace_back(position[n.node], n.weight);
    std::sort(row.begin(), row.end());
    double strength = 2.0 * graph.self_loop(v);
    for (const auto& [t, w] : row) {
      level.targets.push_back(t);
      level.weights.push_back(w);
      strength += w;
    }
    level.offsets.push_back(level.targets.size());
    level.loop.push_back(2.0 * graph.self_loop(v));
    level.strength.push_back(strength);
  }
  return level;
}

class LocalMover {
 public:
  LocalMover(const LevelGraph& g, double total_strength)
      : g_(g),
        m2_(total_strength),
        community_(g.size()),
        tot_(g.strength),
        in_(g.loop),
        members_(g.size()),
        scratch_(g.size(), -1.0) {
    for (std::uint32_t v = 0; v < g.size(); ++v) {
      community_[v] = v;
      members_[v].insert(v);
    }
  }

  double modularity() const {
    double q = 0.0;
    for (std::size_t c = 0; c < tot_.size(); ++c) {
      if (members_[c].empty()) continue;
      q += in_[c] / m2_ - (tot_[c] / m2_) * (tot_[c] / m2_);
    }
    return q;
  }

  // One pass over all nodes in index order; returns the number of moves.
  std::size_t pass() {
    std::size_t moves = 0;
    for (std::uint32_t v = 0; v < g_.size(); ++v) {
      const std::uint32_t old = community_[v];
      const double k = g_.strength[v];

      touched_.clear();
      for (std::size_t e = g_.offsets[v]; e < g_.offsets[v + 1]; ++e) {
        const std::uint32_t c = community_[g_.targets[e]];
        if (scratch_[c] < 0.0) {
          scratch_[c] = 0.0;
          touched_.push_back(c);
        }
        scratch_[c] += g_.weights[e];
      }
      const double w_old = scratch_[old] < 0.0 ? 0.0 : scratch_[old];

      tot_[old] -= k;
      in_[old] -= 2.0 * w_old + g_.loop[v];
      members_[old].erase(v);

      const double stay_gain = w_old - tot_[old] * k / m2_;
      std::uint32_t best = old;
      double best_gain = -std::numeric_limits<double>::infinity();
      for (std::uint32_t c : touched_) {
        if (c == old) continue;
        const double gain = scratch_[c] - tot_[c] * k / m2_;
        if (best == old || gain > best_gain ||
            (gain == best_gain && *members_[c].begin() < *members_[best].begin())) {
          best = c;
          best_gain = gain;
        }
      }
      const std::uint32_t target = (best != old && best_gain > stay_gain) ? best : old;
      const double w_target = target == old ? w_old : scratch_[target];

      tot_[target] += k;
      in_[target] += 2.0 * w_target + g_.loop[v];
      members_[target].insert(v);
      community_[v] = target;
      if (target != old) ++moves;

      for (std::uint32_t c : touched_) scratch_[c] = -1.0;
    }
    return moves;
  }

  // Community labels renumbered by first appearance in node order.
  std::vector<std::uint32_t> renumbered(std::uint32_t& count) const {
    std::vector<std::uint32_t> remap(g_.size(), std::numeric_limits<std::uint32_t>::max());
    std::vector<std::uint32_t> out(g_.size());
    count = 0;
    for (std::uint32_t v = 0; v < g_.size(); ++v) {
      std::uint32_t& r = remap[community_[v]];
      if (r == std::numeric_limits<std::uint32_t>::max()) r = count++;
      out[v] = r;
    }
    return out;
  }

 private:
  const LevelGraph& g_;
  double m2_;
  std::vector<std::uint32_t> community_;
  std::vector<double> tot_;
  std::vector<double> in_;
  std::vector<std::set<std::uint32_t>> members_;
  std::vector<double> scratch_;
  std::vector<std::uint32_t> touched_;
};

LevelGraph aggregate(const LevelGraph& g, const std::vector<std::uint32_t>& label,
                     std::uint32_t count) {
  std::vector<std::vector<std::uint32_t>> members(count);
  for (std::uint32_t v = 0; v < g.size(); ++v) members[label[v]].push_back(v);

  LevelGraph out;
  out.loop.assign(count, 0.0);
  out.strength.assign(count, 0.0);
  std::vector<double> scratch(count, 0.0);
  std::vector<std::uint32_t> touched;
  for (std::uint32_t c = 0; c < count; ++c) {
    touched.clear();
    for (std::uint32_t v : members[c]) {
      out.loop[c] += g.loop[v];
      out.strength[c] += g.strength[v];
      for (std::size_t e = g.offsets[v]; e < g.offsets[v + 1]; ++e) {
        const std::uint32_t d = label[g.targets[e]];
        if (d == c) {
          out.loop[c] += g.weights[e];
          continue;
        }
        if (scratch[d] == 0.0) touched.push_back(d);
        scratch[d] += g.weights[e];
      }
    }
    std::sort(touched.begin(), touched.end());
    for (std::uint32_t d : touched) {
      out.targets.push_back(d);
      out.weights.push_back(scratch[d]);
      scratch[d] = 0.0;
    }
    out.offsets.push_back(out.targets.size());
  }
  return out;
}

}  // namespace

CommunityAssignment louvain(const TransactionGraph& graph) {
  if (graph.empty()) throw DataError("louvain on an empty graph");

  const std::vector<NodeId> order = graph.canonical_order();
  LevelGraph level = base_level(graph, order);
  double total_strength = 0.0;
  for (double s : level.strength) total_strength += s;

  // Community of each canonical position, composed across levels.
  std::vector<std::uint32_t> membership(order.size());
  for (std::uint32_t i = 0; i < membership.size(); ++i) membership[i] = i;
  std::uint32_t count = static_cast<std::uint32_t>(order.size());

  if (total_strength > 0.0) {
    while (true) {
      LocalMover mover(level, total_strength);
      const double level_start = mover.modularity();
      double current = level_start;
      std::size_t level_moves = 0;
      while (true) {
        const std::size_t moves = mover.pass();
        level_moves += moves;
        const double next = mover.modularity();
        const double gain = next - current;
        current = next;
        if (moves == 0 || gain <= kLouvainMinGain) break;
      }
      if (level_moves == 0) break;

      std::uint32_t next_count = 0;
      const std::vector<std::uint32_t> label = mover.renumbered(next_count);
      for (std::uint32_t& m : membership) m = label[m];
      count = next_count;
      if (current - level_start <= kLouvainMinGain) break;
      level = aggregate(level, label, next_count);
    }
  }

  // Renumber by first appearance in account order and map back to NodeIds.
  std::vector<std::uint32_t> remap(count, std::numeric_limits<std::uint32_t>::max());
  std::uint32_t next = 0;
  CommunityAssignment out;
  out.label.resize(graph.node_count());
  for (std::uint32_t i = 0; i < order.size(); ++i) {
    std::uint32_t& r = remap[membership[i]];
    if (r == std::numeric_limits<std::uint32_t>::max()) r = next++;
    out.label[order[i]] = r;
  }
  out.community_count = next;
  return out;
}

double modularity(const TransactionGraph& graph, std::span<const std::uint32_t> label) {
  if (label.size() < graph.node_count()) throw ParameterError("label vector too short");
  std::uint32_t count = 0;
  for (NodeId v = 0; v < graph.node_count(); ++v) count = std::max(count, label[v] + 1);
  std::vector<double> in(count, 0.0);
  std::vector<double> tot(count, 0.0);
  double m2 = 0.0;
  graph.for_each_edge([&](NodeId u, NodeId v, double w) {
    tot[label[u]] += w;
    tot[label[v]] += w;
    m2 += 2.0 * w;
    if (label[u] == label[v]) in[label[u]] += 2.0 * w;
  });
  if (!(m2 > 0.0)) return 0.0;
  double q = 0.0;
  for (std::uint32_t c = 0; c < count; ++c) q += in[c] / m2 - (tot[c] / m2) * (tot[c] / m2);
  return q;
}

}  // namespace txallo
