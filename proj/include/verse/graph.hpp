#pragma once

#include "verse/types.hpp"

#include <span>
#include <string>
#include <utility>
#include <vector>

namespace verse {

// Immutable directed multigraph in compressed sparse-row form. Parallel
// edges and self-loops are kept as ordinary edges, so a duplicated edge
// weights the uniform neighbor draw accordingly. Immutable after
// construction; safe to read from any number of threads.
struct Graph {
  std::vector<EdgeId> offsets;          // length n+1; offsets[0]=0, offsets[n]=m
  std::vector<NodeId> targets;          // length m
  std::vector<std::string> node_names;  // original tokens; empty unless remapped

  NodeId num_nodes() const {
    return offsets.empty() ? 0 : static_cast<NodeId>(offsets.size() - 1);
  }
  EdgeId num_edges() const { return targets.size(); }

  EdgeId out_degree(NodeId u) const;
  std::span<const NodeId> neighbors(NodeId u) const;
};

struct LoadOptions {
  // Assign indices to arbitrary tokens in first-appearance order. Without it
  // tokens must be nonnegative integers and are used as indices directly.
  bool remap = false;
  // Emit both (u,v) and (v,u) for every input line.
  bool symmetrize = false;
};

// Edge-list text format: one edge per line, "SRC WS DST"; lines starting
// with '#' and blank lines are ignored.
Graph load_edge_list(const std::string& path, const LoadOptions& opts = {});
void save_edge_list(const Graph& g, const std::string& path);

// CSR construction from an explicit edge list; input order within a row is
// preserved.
Graph from_edges(NodeId n, std::span<const std::pair<NodeId, NodeId>> edges);

// Transposed CSR: every edge (u,v) appears as (v,u), multiplicity preserved.
// The result is an ordinary Graph whose rows are in-neighbor lists of g.
Graph reverse(const Graph& g);

// Vocabulary file: one original token per line, line number = index.
void save_vocabulary(const Graph& g, const std::string& path);
std::vector<std::string> load_vocabulary(const std::string& path);

}  // namespace verse
