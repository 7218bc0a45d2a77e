#pragma once

#include "verse/graph.hpp"
#include "verse/rng.hpp"

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>
#include <unistd.h>
#include <utility>
#include <vector>

namespace testsupport {

using verse::Graph;
using verse::NodeId;

// Zachary's karate club: 34 nodes, 78 undirected edges (0-indexed).
inline const std::vector<std::pair<NodeId, NodeId>>& karate_edges() {
  static const std::vector<std::pair<NodeId, NodeId>> edges = {
      {0, 1},   {0, 2},   {0, 3},   {0, 4},   {0, 5},   {0, 6},   {0, 7},
      {0, 8},   {0, 10},  {0, 11},  {0, 12},  {0, 13},  {0, 17},  {0, 19},
      {0, 21},  {0, 31},  {1, 2},   {1, 3},   {1, 7},   {1, 13},  {1, 17},
      {1, 19},  {1, 21},  {1, 30},  {2, 3},   {2, 7},   {2, 8},   {2, 9},
      {2, 13},  {2, 27},  {2, 28},  {2, 32},  {3, 7},   {3, 12},  {3, 13},
      {4, 6},   {4, 10},  {5, 6},   {5, 10},  {5, 16},  {6, 16},  {8, 30},
      {8, 32},  {8, 33},  {9, 33},  {13, 33}, {14, 32}, {14, 33}, {15, 32},
      {15, 33}, {18, 32}, {18, 33}, {19, 33}, {20, 32}, {20, 33}, {22, 32},
      {22, 33}, {23, 25}, {23, 27}, {23, 29}, {23, 32}, {23, 33}, {24, 25},
      {24, 27}, {24, 31}, {25, 31}, {26, 29}, {26, 33}, {27, 33}, {28, 31},
      {28, 33}, {29, 32}, {29, 33}, {30, 32}, {30, 33}, {31, 32}, {31, 33},
      {32, 33},
  };
  return edges;
}

// Both directions of every undirected edge.
inline Graph undirected_graph(NodeId n,
                              const std::vector<std::pair<NodeId, NodeId>>& edges) {
  std::vector<std::pair<NodeId, NodeId>> directed;
  directed.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  return verse::from_edges(n, directed);
}

inline Graph karate_graph() { return undirected_graph(34, karate_edges()); }

// Two complete cliques of the given sizes; nodes [0,a) and [a,a+b). With
// `bridged`, one edge joins node 0 to node a.
inline Graph two_cliques(NodeId a, NodeId b, bool bridged) {
  std::vector<std::pair<NodeId, NodeId>> edges;
  for (NodeId i = 0; i < a; ++i)
    for (NodeId j = i + 1; j < a; ++j) edges.emplace_back(i, j);
  for (NodeId i = 0; i < b; ++i)
    for (NodeId j = i + 1; j < b; ++j) edges.emplace_back(a + i, a + j);
  if (bridged) edges.emplace_back(0, a);
  return undirected_graph(a + b, edges);
}

// Random directed multigraph-free graph with the requested edge count;
// `sink_every` > 0 clears the out-edges of every k-th node to exercise
// dead-end handling.
inline Graph random_digraph(NodeId n, std::uint64_t edges, std::uint64_t seed,
                            NodeId sink_every = 0) {
  verse::Rng rng(seed);
  std::vector<std::pair<NodeId, NodeId>> list;
  list.reserve(edges);
  for (std::uint64_t e = 0; e < edges; ++e) {
    const NodeId u = static_cast<NodeId>(rng.below(n));
    const NodeId v = static_cast<NodeId>(rng.below(n));
    if (sink_every > 0 && u % sink_every == 0) continue;
    list.emplace_back(u, v);
  }
  return verse::from_edges(n, list);
}

// Unique scratch path that is removed on destruction.
class TempFile {
 public:
  explicit TempFile(const std::string& stem) {
    static std::uint64_t counter = 0;
    path_ = (std::filesystem::temp_directory_path() /
             (stem + "." + std::to_string(::getpid()) + "." +
              std::to_string(counter++)))
                .string();
  }
  ~TempFile() {
    std::error_code ec;
    std::filesystem::remove(path_, ec);
  }
  TempFile(const TempFile&) = delete;
  TempFile& operator=(const TempFile&) = delete;

  const std::string& path() const { return path_; }

  void write(const std::string& contents) const {
    std::ofstream out(path_);
    out << contents;
  }

 private:
  std::string path_;
};

inline void write_edge_list(const Graph& g, const std::string& path) {
  verse::save_edge_list(g, path);
}

}  // namespace testsupport
