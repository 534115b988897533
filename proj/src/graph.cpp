#include "rb/graph.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <istream>
#include <map>
#include <numeric>
#include <ostream>

namespace rb {

NodeSet canonical_set(NodeSet nodes) {
  std::sort(nodes.begin(), nodes.end());
  nodes.erase(std::unique(nodes.begin(), nodes.end()), nodes.end());
  return nodes;
}

NodeSet set_union_of(const NodeSet& a, const NodeSet& b) {
  NodeSet out;
  out.reserve(a.size() + b.size());
  std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
  return out;
}

bool set_contains(const NodeSet& s, NodeId v) {
  return std::binary_search(s.begin(), s.end(), v);
}

std::vector<NodeSet> enumerate_bounded_subsets(const NodeSet& candidates, uint32_t budget) {
  std::vector<NodeSet> out{{}};
  size_t frontier_begin = 0;
  for (uint32_t size = 1; size <= budget; ++size) {
    const size_t frontier_end = out.size();
    for (size_t i = frontier_begin; i < frontier_end; ++i) {
      const NodeSet base = out[i];
      const NodeId from = base.empty() ? 0 : base.back() + 1;
      for (NodeId v : candidates) {
        if (v < from) continue;
        NodeSet next = base;
        next.push_back(v);
        out.push_back(std::move(next));
      }
    }
    frontier_begin = frontier_end;
  }
  std::sort(out.begin(), out.end());
  return out;
}

ProbabilityModel ProbabilityModel::uniform(double p) {
  if (p < 0.0 || p > 1.0) throw Error("uniform probability must lie in [0,1]");
  return {Kind::uniform, p};
}

Network Network::from_arcs(NodeId node_count, std::vector<std::pair<NodeId, NodeId>> arcs) {
  for (const auto& [u, v] : arcs) {
    if (u >= node_count || v >= node_count) throw Error("arc endpoint out of range");
    if (u == v) throw Error("self-loop rejected: node " + std::to_string(u));
  }
  std::sort(arcs.begin(), arcs.end());
  if (std::adjacent_find(arcs.begin(), arcs.end()) != arcs.end()) {
    auto it = std::adjacent_find(arcs.begin(), arcs.end());
    throw Error("duplicate arc (" + std::to_string(it->first) + "," + std::to_string(it->second) + ")");
  }

  Network net;
  net.node_count_ = node_count;
  net.offsets_.assign(node_count + 1, 0);
  net.targets_.reserve(arcs.size());
  net.probs_.assign(arcs.size(), 0.0);
  net.in_degree_.assign(node_count, 0);
  for (const auto& [u, v] : arcs) {
    net.offsets_[u + 1]++;
    net.in_degree_[v]++;
  }
  for (NodeId u = 0; u < node_count; ++u) net.offsets_[u + 1] += net.offsets_[u];
  for (const auto& [u, v] : arcs) net.targets_.push_back(v);

  net.original_ids_.resize(node_count);
  std::iota(net.original_ids_.begin(), net.original_ids_.end(), int64_t{0});
  return net;
}

NodeId Network::arc_source(size_t arc) const {
  // Binary search over offsets; arcs of u occupy [offsets_[u], offsets_[u+1]).
  auto it = std::upper_bound(offsets_.begin(), offsets_.end(), arc);
  return static_cast<NodeId>(std::distance(offsets_.begin(), it) - 1);
}

void Network::set_arc_prob(size_t arc, double p) {
  if (p < 0.0 || p > 1.0) throw Error("arc probability must lie in [0,1]");
  probs_[arc] = p;
}

Network load_edge_list(std::istream& in, bool undirected) {
  std::vector<std::pair<int64_t, int64_t>> edges;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    size_t pos = line.find_first_not_of(" \t\r");
    if (pos == std::string::npos || line[pos] == '#') continue;

    const char* begin = line.data() + pos;
    const char* end = line.data() + line.size();
    int64_t u = 0, v = 0;
    auto r1 = std::from_chars(begin, end, u);
    if (r1.ec != std::errc{}) throw Error("parse error at line " + std::to_string(line_no));
    const char* p2 = r1.ptr;
    while (p2 != end && (*p2 == ' ' || *p2 == '\t')) ++p2;
    auto r2 = std::from_chars(p2, end, v);
    if (r2.ec != std::errc{} || p2 == r1.ptr) throw Error("parse error at line " + std::to_string(line_no));
    const char* p3 = r2.ptr;
    while (p3 != end && (*p3 == ' ' || *p3 == '\t' || *p3 == '\r')) ++p3;
    if (p3 != end) throw Error("parse error at line " + std::to_string(line_no) + ": trailing content");
    if (u < 0 || v < 0) throw Error("parse error at line " + std::to_string(line_no) + ": negative id");
    if (u == v) throw Error("self-loop rejected at line " + std::to_string(line_no));
    edges.emplace_back(u, v);
  }

  // Dense relabeling by ascending original id.
  std::map<int64_t, NodeId> remap;
  for (const auto& [u, v] : edges) {
    remap.emplace(u, 0);
    remap.emplace(v, 0);
  }
  NodeId next = 0;
  std::vector<int64_t> original;
  original.reserve(remap.size());
  for (auto& [orig, dense] : remap) {
    dense = next++;
    original.push_back(orig);
  }

  std::vector<std::pair<NodeId, NodeId>> arcs;
  arcs.reserve(edges.size() * (undirected ? 2 : 1));
  for (const auto& [u, v] : edges) {
    arcs.emplace_back(remap[u], remap[v]);
    if (undirected) arcs.emplace_back(remap[v], remap[u]);
  }

  Network net = Network::from_arcs(static_cast<NodeId>(remap.size()), std::move(arcs));
  net.original_ids_ = std::move(original);
  return net;
}

Network load_edge_list_file(const std::string& path, bool undirected) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open dataset: " + path);
  return load_edge_list(in, undirected);
}

void save_edge_list(const Network& net, std::ostream& out) {
  out << "# nodes " << net.node_count() << " arcs " << net.arc_count() << "\n";
  for (NodeId u = 0; u < net.node_count(); ++u)
    for (NodeId v : net.out_neighbors(u)) out << u << " " << v << "\n";
}

void save_id_map(const Network& net, std::ostream& out) {
  const auto& orig = net.original_ids();
  for (NodeId u = 0; u < net.node_count(); ++u) out << u << " " << orig[u] << "\n";
}

void assign_probabilities(Network& net, const ProbabilityModel& model) {
  if (model.kind == ProbabilityModel::Kind::uniform) {
    if (model.p < 0.0 || model.p > 1.0) throw Error("uniform probability must lie in [0,1]");
    for (size_t a = 0; a < net.arc_count(); ++a) net.set_arc_prob(a, model.p);
    return;
  }
  // Weighted cascade: arc (u,v) gets 1/d_v with d_v = out-degree of v,
  // clamped to 1 for sinks.
  for (NodeId u = 0; u < net.node_count(); ++u) {
    size_t base = net.arc_begin(u);
    auto nbrs = net.out_neighbors(u);
    for (size_t i = 0; i < nbrs.size(); ++i) {
      uint32_t dv = net.out_degree(nbrs[i]);
      net.set_arc_prob(base + i, 1.0 / std::max<uint32_t>(dv, 1));
    }
  }
}

std::vector<NodeId> top_degree_nodes(const Network& net, uint32_t n) {
  if (n > net.node_count()) throw Error("requested more top-degree nodes than the network has");
  std::vector<NodeId> order(net.node_count());
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(), [&](NodeId a, NodeId b) {
    if (net.degree(a) != net.degree(b)) return net.degree(a) > net.degree(b);
    return a < b;
  });
  order.resize(n);
  return order;
}

}  // namespace rb
