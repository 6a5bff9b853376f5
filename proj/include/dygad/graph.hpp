#pragma once

#include <cstdint>
#include <map>
#include <random>
#include <string>
#include <utility>
#include <vector>

#include "dygad/csr.hpp"
#include "dygad/matrix.hpp"

namespace dygad {

// One timestamp of the stream. Edges are undirected, stored once in
// canonical (u < v) order, sorted and deduplicated; self-loops are dropped
// at construction time.
struct Snapshot {
  int t = 0;
  int node_count = 0;
  std::vector<std::pair<int, int>> edges;
  Matrix features;  // node_count x D

  int edge_count() const { return static_cast<int>(edges.size()); }
  bool has_edge(int u, int v) const;
  std::vector<int> degrees() const;

  // Canonicalizes an arbitrary pair list: symmetrizes, dedups, drops
  // self-loops, validates the index range.
  static Snapshot make(int t, int node_count, std::vector<std::pair<int, int>> raw_edges, Matrix features);
};

struct DynamicGraph {
  std::string name = "dataset";
  int num_nodes = 0;
  int feature_dim = 0;
  std::vector<Snapshot> snapshots;

  int T() const { return static_cast<int>(snapshots.size()); }
  void validate() const;
};

// Binary anomaly flags, kept only for labeled (test) timestamps. Every
// labeled timestamp carries a full per-node vector, default 0.
struct NodeLabels {
  std::map<int, std::vector<std::int8_t>> by_time;

  bool empty() const { return by_time.empty(); }
  void mark(int node, int t, int num_nodes);
  void ensure_time(int t, int num_nodes);
  int get(int node, int t) const;
  int anomaly_count() const;
  int anomaly_count_at(int t) const;
};

// A tau-length slice of the stream ending at end_t, with precomputed
// normalized adjacency operators. Owns copies; safe to perturb.
struct GraphWindow {
  int end_t = 0;
  int tau = 0;
  std::vector<Snapshot> snapshots;  // oldest..newest
  std::vector<CsrMatrix> norm_adjs;
};

// D^{-1/2} (A + I) D^{-1/2} with D(i,i) = row sums of A + I.
CsrMatrix normalize_adjacency(const Snapshot& s);

GraphWindow extract_window(const DynamicGraph& g, int end_t, int tau);

// First ceil(train_ratio * T) timestamps train, the rest test. Fails when
// the train side cannot host a full window.
std::pair<std::vector<int>, std::vector<int>> split_temporal(const DynamicGraph& g, double train_ratio, int tau);

DynamicGraph load_dataset(const std::string& dir);
NodeLabels load_labels(const std::string& dir, int num_nodes);
void save_dataset(const DynamicGraph& g, const std::string& dir, const NodeLabels* labels = nullptr);

// Independently drops each undirected edge with probability p and
// renormalizes the adjacency operators. Used by multi-round scoring.
GraphWindow drop_edges(const GraphWindow& w, double p, std::mt19937_64& rng);

}  // namespace dygad
