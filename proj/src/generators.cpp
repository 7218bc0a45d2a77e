#include "verse/generators.hpp"

#include "verse/rng.hpp"

#include <stdexcept>
#include <unordered_set>
#include <vector>

namespace verse {

Graph watts_strogatz(NodeId n, int k, double beta, std::uint64_t seed) {
  if (n < 3) throw std::invalid_argument("watts_strogatz: need n >= 3");
  if (k < 2 || k % 2 != 0 || static_cast<NodeId>(k) >= n)
    throw std::invalid_argument("watts_strogatz: k must be even, >= 2, < n");
  if (beta < 0.0 || beta > 1.0)
    throw std::invalid_argument("watts_strogatz: beta must lie in [0,1]");

  const auto key = [](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };

  std::vector<std::pair<NodeId, NodeId>> edges;
  edges.reserve(static_cast<size_t>(n) * (k / 2));
  std::unordered_set<std::uint64_t> present;
  present.reserve(edges.capacity() * 2);
  for (NodeId u = 0; u < n; ++u)
    for (int j = 1; j <= k / 2; ++j) {
      const NodeId v = static_cast<NodeId>((u + j) % n);
      edges.emplace_back(u, v);
      present.insert(key(u, v));
    }

  Rng rng(seed);
  for (auto& [u, v] : edges) {
    if (rng.uniform() >= beta) continue;
    // Rewire the far endpoint, keeping the graph simple.
    for (int attempt = 0; attempt < 64; ++attempt) {
      const NodeId w = static_cast<NodeId>(rng.below(n));
      if (w == u || present.contains(key(u, w))) continue;
      present.erase(key(u, v));
      present.insert(key(u, w));
      v = w;
      break;
    }
  }

  std::vector<std::pair<NodeId, NodeId>> directed;
  directed.reserve(edges.size() * 2);
  for (const auto& [u, v] : edges) {
    directed.emplace_back(u, v);
    directed.emplace_back(v, u);
  }
  return from_edges(n, directed);
}

}  // namespace verse
