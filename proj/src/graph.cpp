#include "verse/graph.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <stdexcept>
#include <unordered_map>

namespace verse {

EdgeId Graph::out_degree(NodeId u) const {
  if (u >= num_nodes()) throw std::out_of_range("node index out of range");
  return offsets[u + 1] - offsets[u];
}

std::span<const NodeId> Graph::neighbors(NodeId u) const {
  if (u >= num_nodes()) throw std::out_of_range("node index out of range");
  return {targets.data() + offsets[u], targets.data() + offsets[u + 1]};
}

Graph from_edges(NodeId n, std::span<const std::pair<NodeId, NodeId>> edges) {
  Graph g;
  g.offsets.assign(n + 1, 0);
  for (const auto& [u, v] : edges) {
    if (u >= n || v >= n) throw std::invalid_argument("edge endpoint >= n");
    ++g.offsets[u + 1];
  }
  for (NodeId u = 0; u < n; ++u) g.offsets[u + 1] += g.offsets[u];
  g.targets.resize(edges.size());
  std::vector<EdgeId> cursor(g.offsets.begin(), g.offsets.end() - 1);
  for (const auto& [u, v] : edges) g.targets[cursor[u]++] = v;
  return g;
}

namespace {

NodeId parse_node_token(const std::string& token, size_t line_no) {
  NodeId value = 0;
  const auto [ptr, ec] =
      std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc{} || ptr != token.data() + token.size()) {
    throw std::runtime_error("line " + std::to_string(line_no) +
                             ": token '" + token +
                             "' is not a nonnegative integer (use --remap "
                             "for arbitrary tokens)");
  }
  return value;
}

}  // namespace

Graph load_edge_list(const std::string& path, const LoadOptions& opts) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open edge list '" + path + "'");

  std::vector<std::pair<NodeId, NodeId>> edges;
  std::vector<std::string> names;
  std::unordered_map<std::string, NodeId> index_of;
  const auto intern = [&](const std::string& token) {
    auto [it, inserted] =
        index_of.try_emplace(token, static_cast<NodeId>(names.size()));
    if (inserted) names.push_back(token);
    return it->second;
  };

  NodeId max_id = 0;
  bool any = false;
  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream fields(line);
    std::string src, dst, extra;
    if (!(fields >> src >> dst)) {
      if (src.empty()) continue;  // whitespace-only line
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected two tokens");
    }
    if (fields >> extra) {
      throw std::runtime_error("line " + std::to_string(line_no) +
                               ": expected two tokens, got more");
    }
    NodeId u, v;
    if (opts.remap) {
      u = intern(src);
      v = intern(dst);
    } else {
      u = parse_node_token(src, line_no);
      v = parse_node_token(dst, line_no);
    }
    edges.emplace_back(u, v);
    if (opts.symmetrize) edges.emplace_back(v, u);
    max_id = std::max({max_id, u, v});
    any = true;
  }

  const NodeId n =
      opts.remap ? static_cast<NodeId>(names.size()) : (any ? max_id + 1 : 0);
  Graph g = from_edges(n, edges);
  g.node_names = std::move(names);
  return g;
}

void save_edge_list(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write edge list '" + path + "'");
  for (NodeId u = 0; u < g.num_nodes(); ++u)
    for (NodeId v : g.neighbors(u)) out << u << ' ' << v << '\n';
  if (!out) throw std::runtime_error("write failed for '" + path + "'");
}

Graph reverse(const Graph& g) {
  Graph r;
  const NodeId n = g.num_nodes();
  r.offsets.assign(n + 1, 0);
  for (NodeId v : g.targets) ++r.offsets[v + 1];
  for (NodeId u = 0; u < n; ++u) r.offsets[u + 1] += r.offsets[u];
  r.targets.resize(g.targets.size());
  std::vector<EdgeId> cursor(r.offsets.begin(), r.offsets.end() - 1);
  for (NodeId u = 0; u < n; ++u)
    for (NodeId v : g.neighbors(u)) r.targets[cursor[v]++] = u;
  return r;
}

void save_vocabulary(const Graph& g, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write vocabulary '" + path + "'");
  for (const auto& name : g.node_names) out << name << '\n';
}

std::vector<std::string> load_vocabulary(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open vocabulary '" + path + "'");
  std::vector<std::string> names;
  std::string line;
  while (std::getline(in, line)) names.push_back(line);
  return names;
}

}  // namespace verse
