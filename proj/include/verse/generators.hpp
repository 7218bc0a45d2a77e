#pragma once

#include "verse/graph.hpp"

#include <cstdint>

namespace verse {

// Watts-Strogatz small-world graph: ring lattice where every node connects
// to its k nearest neighbors (k even), each edge rewired with probability
// beta avoiding self-loops and duplicates. Returned symmetrized, i.e. with
// both directions of every undirected edge.
Graph watts_strogatz(NodeId n, int k, double beta, std::uint64_t seed);

}  // namespace verse
