#pragma once

#include <cstdint>
#include <iosfwd>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rb {

using NodeId = uint32_t;

// Canonical node set: sorted, duplicate-free.
using NodeSet = std::vector<NodeId>;

// Seed sets of the k agents, a_1..a_k.
using FullAction = std::vector<NodeSet>;

NodeSet canonical_set(NodeSet nodes);
NodeSet set_union_of(const NodeSet& a, const NodeSet& b);
bool set_contains(const NodeSet& s, NodeId v);

// Subsets of `candidates` with size <= budget, ordered lexicographically by
// sorted id sequence (empty set first).
std::vector<NodeSet> enumerate_bounded_subsets(const NodeSet& candidates, uint32_t budget);

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Edge-probability assignment: uniform(p) or weighted-cascade (1/d_v).
struct ProbabilityModel {
  enum class Kind { uniform, weighted_cascade };
  Kind kind = Kind::uniform;
  double p = 0.1;

  static ProbabilityModel uniform(double p);
  static ProbabilityModel weighted_cascade() { return {Kind::weighted_cascade, 0.0}; }
};

// Immutable directed graph with per-arc propagation probabilities, stored in
// CSR form. Arc index = position in the row-major CSR arrays, which gives
// every arc a stable id used by realizations.
class Network {
 public:
  Network() = default;

  // `arcs` are (source, target) pairs over ids 0..node_count-1.
  // Rejects self-loops and duplicate arcs.
  static Network from_arcs(NodeId node_count, std::vector<std::pair<NodeId, NodeId>> arcs);

  NodeId node_count() const { return node_count_; }
  size_t arc_count() const { return targets_.size(); }

  uint32_t out_degree(NodeId u) const { return offsets_[u + 1] - offsets_[u]; }
  uint32_t in_degree(NodeId u) const { return in_degree_[u]; }
  uint32_t degree(NodeId u) const { return out_degree(u) + in_degree(u); }

  std::span<const NodeId> out_neighbors(NodeId u) const {
    return {targets_.data() + offsets_[u], targets_.data() + offsets_[u + 1]};
  }
  std::span<const double> out_probs(NodeId u) const {
    return {probs_.data() + offsets_[u], probs_.data() + offsets_[u + 1]};
  }

  // Arc-indexed access. Arcs of node u occupy [arc_begin(u), arc_begin(u+1)).
  size_t arc_begin(NodeId u) const { return offsets_[u]; }
  NodeId arc_target(size_t arc) const { return targets_[arc]; }
  NodeId arc_source(size_t arc) const;
  double arc_prob(size_t arc) const { return probs_[arc]; }

  void set_arc_prob(size_t arc, double p);

  // Original ids from the input file, per dense node id. Identity when the
  // network was built programmatically.
  const std::vector<int64_t>& original_ids() const { return original_ids_; }

  uint64_t total_out_degree() const { return targets_.size(); }

 private:
  NodeId node_count_ = 0;
  std::vector<uint32_t> offsets_;   // size node_count_+1
  std::vector<NodeId> targets_;     // size arc_count
  std::vector<double> probs_;       // size arc_count
  std::vector<uint32_t> in_degree_;
  std::vector<int64_t> original_ids_;

  friend Network load_edge_list(std::istream&, bool);
};

// Parses a SNAP-style edge list: '#' comment lines, whitespace-separated
// integer id pairs. Node ids are relabeled to a dense 0..n-1 range by
// ascending original id; the mapping back is retained. With `undirected`,
// each input edge becomes two arcs.
Network load_edge_list(std::istream& in, bool undirected);
Network load_edge_list_file(const std::string& path, bool undirected);

// Writes the arcs back out in the same line format (directed; reloading with
// undirected=false reproduces the network).
void save_edge_list(const Network& net, std::ostream& out);

// Two-column "dense_id original_id" table.
void save_id_map(const Network& net, std::ostream& out);

void assign_probabilities(Network& net, const ProbabilityModel& model);

// The n nodes of highest total degree (in+out), descending, ties by
// ascending node id.
std::vector<NodeId> top_degree_nodes(const Network& net, uint32_t n);

}  // namespace rb
