#include "verse/similarity.hpp"

#include "verse/errors.hpp"
#include "verse/parallel.hpp"

#include <Eigen/Sparse>

#include <cmath>
#include <stdexcept>

namespace verse {

bool is_distribution(const Distribution& d, double tol) {
  if (d.size() == 0) return false;
  if ((d.array() < 0.0).any()) return false;
  return std::abs(d.sum() - 1.0) <= tol;
}

SimilaritySpec parse_similarity(const std::string& text) {
  SimilaritySpec spec;
  std::string kind = text;
  std::string param;
  if (const auto colon = text.find(':'); colon != std::string::npos) {
    kind = text.substr(0, colon);
    param = text.substr(colon + 1);
  }
  if (kind == "ppr") {
    spec.kind = SimilarityKind::Ppr;
    spec.param = param.empty() ? 0.85 : std::stod(param);
  } else if (kind == "adj" || kind == "adjacency") {
    spec.kind = SimilarityKind::Adjacency;
    if (!param.empty())
      throw std::invalid_argument("adjacency similarity takes no parameter");
  } else if (kind == "simrank") {
    spec.kind = SimilarityKind::SimRank;
    spec.param = param.empty() ? 0.6 : std::stod(param);
  } else {
    throw std::invalid_argument("unknown similarity '" + text +
                                "' (expected ppr[:alpha], adj, "
                                "simrank[:C])");
  }
  validate(spec);
  return spec;
}

std::string to_string(const SimilaritySpec& spec) {
  switch (spec.kind) {
    case SimilarityKind::Ppr:
      return "ppr:" + std::to_string(spec.param);
    case SimilarityKind::Adjacency:
      return "adj";
    case SimilarityKind::SimRank:
      return "simrank:" + std::to_string(spec.param);
  }
  return "?";
}

void validate(const SimilaritySpec& spec) {
  if (spec.kind == SimilarityKind::Ppr &&
      !(spec.param > 0.0 && spec.param < 1.0))
    throw std::invalid_argument("ppr alpha must lie strictly inside (0,1)");
  if (spec.kind == SimilarityKind::SimRank &&
      !(spec.param > 0.0 && spec.param < 1.0))
    throw std::invalid_argument("simrank C must lie strictly inside (0,1)");
}

namespace {

// Uniform draw from u's row; multiplicity weights parallel edges.
inline NodeId uniform_neighbor(const Graph& g, NodeId u, Rng& rng) {
  const EdgeId begin = g.offsets[u], end = g.offsets[u + 1];
  return g.targets[begin + rng.below(end - begin)];
}

}  // namespace

NodeId sample_ppr(const Graph& g, NodeId u, double alpha, Rng& rng) {
  NodeId cur = u;
  while (rng.uniform() < alpha) {
    // A step out of a sink teleports back to the source.
    cur = (g.offsets[cur] == g.offsets[cur + 1]) ? u
                                                 : uniform_neighbor(g, cur, rng);
  }
  return cur;
}

std::optional<NodeId> sample_adjacency(const Graph& g, NodeId u, Rng& rng) {
  if (g.offsets[u] == g.offsets[u + 1]) return std::nullopt;
  return uniform_neighbor(g, u, rng);
}

SimRankSampler::SimRankSampler(const Graph& g, const Graph& reversed,
                               double c)
    : graph_(&g), reversed_(&reversed), sqrt_c_(std::sqrt(c)) {
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument("simrank C must lie strictly inside (0,1)");
  const NodeId n = g.num_nodes();
  // counts(l, v) = total weight of length-l reversed paths that end at v,
  // i.e. sum over start nodes of the walk probability of reaching v. A path
  // arriving at v came through some x in Out(v), contributing the weight of
  // reaching x in l-1 steps times x's uniform in-edge share.
  path_counts_.resize(kMaxLength + 1, n);
  path_counts_.row(0).setOnes();
  for (int l = 1; l <= kMaxLength; ++l) {
    path_counts_.row(l).setZero();
    for (NodeId v = 0; v < n; ++v) {
      float total = 0.0f;
      for (NodeId x : g.neighbors(v))
        total += path_counts_(l - 1, x) /
                 static_cast<float>(reversed.out_degree(x));
      path_counts_(l, v) = total;
    }
  }
}

NodeId SimRankSampler::sample(NodeId u, Rng& rng) const {
  const Graph& g = *graph_;
  const Graph& rev = *reversed_;
  int length = 0;
  while (length < kMaxLength && rng.uniform() < sqrt_c_) ++length;

  // First leg: reversed walk, truncated at nodes without in-edges.
  NodeId meet = u;
  int taken = 0;
  for (; taken < length; ++taken) {
    if (rev.offsets[meet] == rev.offsets[meet + 1]) break;
    meet = uniform_neighbor(rev, meet, rng);
  }
  // Return leg: walk the reversed chain backward from the meeting node.
  // From node z, the predecessors are exactly z's out-neighbors y, reached
  // with weight (1/in_degree(y)) * count of ways to finish the remaining
  // steps from y.
  NodeId cur = meet;
  for (int remaining = taken; remaining > 0; --remaining) {
    const EdgeId begin = g.offsets[cur], end = g.offsets[cur + 1];
    double total = 0.0;
    for (EdgeId e = begin; e < end; ++e) {
      const NodeId y = g.targets[e];
      total += path_counts_(remaining - 1, y) /
               static_cast<double>(rev.out_degree(y));
    }
    if (total <= 0.0) break;  // unreachable: the first leg came through here
    double draw = rng.uniform() * total;
    NodeId pick = g.targets[end - 1];
    for (EdgeId e = begin; e < end; ++e) {
      const NodeId y = g.targets[e];
      draw -= path_counts_(remaining - 1, y) /
              static_cast<double>(rev.out_degree(y));
      if (draw <= 0.0) {
        pick = y;
        break;
      }
    }
    cur = pick;
  }
  return cur;
}

Distribution exact_ppr_row(const Graph& g, NodeId u, double alpha,
                           double tol) {
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::invalid_argument("ppr alpha must lie strictly inside (0,1)");
  if (!(tol > 0.0)) throw std::invalid_argument("tolerance must be positive");
  const NodeId n = g.num_nodes();
  if (u >= n) throw std::out_of_range("node index out of range");

  Distribution pi = Distribution::Zero(n);
  pi[u] = 1.0;
  Distribution next(n);
  // Convergence is geometric with rate alpha.
  const int max_iters = 100000;
  for (int iter = 0; iter < max_iters; ++iter) {
    next.setZero();
    for (NodeId v = 0; v < n; ++v) {
      const double mass = pi[v];
      if (mass == 0.0) continue;
      const EdgeId begin = g.offsets[v], end = g.offsets[v + 1];
      if (begin == end) {
        next[u] += mass;  // sink step returns to the source
      } else {
        const double share = mass / static_cast<double>(end - begin);
        for (EdgeId e = begin; e < end; ++e) next[g.targets[e]] += share;
      }
    }
    next *= alpha;
    next[u] += 1.0 - alpha;
    const double change = (next - pi).cwiseAbs().sum();
    pi.swap(next);
    if (change < tol) break;
  }
  return pi;
}

Eigen::MatrixXd exact_simrank_matrix(const Graph& g, double c, int iterations,
                                     NodeId cap) {
  if (!(c > 0.0 && c < 1.0))
    throw std::invalid_argument("simrank C must lie strictly inside (0,1)");
  if (iterations < 1) throw std::invalid_argument("iterations must be >= 1");
  const NodeId n = g.num_nodes();
  if (n > cap)
    throw CapExceededError("exact SimRank capped at " + std::to_string(cap) +
                           " nodes, graph has " + std::to_string(n));

  // Row-normalized in-neighbor matrix: row u spreads over I(u) with
  // multiplicity.
  const Graph rev = reverse(g);
  Eigen::SparseMatrix<double> walk(n, n);
  {
    std::vector<Eigen::Triplet<double>> triplets;
    triplets.reserve(rev.num_edges());
    for (NodeId u = 0; u < n; ++u) {
      const EdgeId deg = rev.out_degree(u);
      for (NodeId v : rev.neighbors(u))
        triplets.emplace_back(u, v, 1.0 / static_cast<double>(deg));
    }
    walk.setFromTriplets(triplets.begin(), triplets.end());
  }

  Eigen::MatrixXd sim = Eigen::MatrixXd::Identity(n, n);
  for (int iter = 0; iter < iterations; ++iter) {
    Eigen::MatrixXd next = c * (walk * sim * walk.transpose());
    next.diagonal().setOnes();
    sim.swap(next);
  }
  return sim;
}

Distribution exact_row(const Graph& g, const Graph& reversed,
                       const SimilaritySpec& spec, NodeId u) {
  const NodeId n = g.num_nodes();
  if (u >= n) throw std::out_of_range("node index out of range");
  switch (spec.kind) {
    case SimilarityKind::Ppr:
      return exact_ppr_row(g, u, spec.param);
    case SimilarityKind::Adjacency: {
      Distribution row = Distribution::Zero(n);
      const EdgeId deg = g.out_degree(u);
      if (deg == 0) {
        row[u] = 1.0;  // sink convention: point mass on the node itself
      } else {
        for (NodeId v : g.neighbors(u)) row[v] += 1.0 / static_cast<double>(deg);
      }
      return row;
    }
    case SimilarityKind::SimRank: {
      const Eigen::MatrixXd sim = exact_simrank_matrix(g, spec.param);
      Distribution row = sim.row(u).transpose();
      row[u] = 0.0;  // self-similarity would dwarf every other target
      const double total = row.sum();
      if (total <= 0.0) {
        row.setZero();
        row[u] = 1.0;
      } else {
        row /= total;
      }
      return row;
    }
  }
  throw std::logic_error("unreachable");
}

Eigen::MatrixXd exact_rows(const Graph& g, const Graph& reversed,
                           const SimilaritySpec& spec, int threads) {
  const NodeId n = g.num_nodes();
  Eigen::MatrixXd rows(n, n);
  if (spec.kind == SimilarityKind::SimRank) {
    // One fixed-point computation serves every row.
    const Eigen::MatrixXd sim = exact_simrank_matrix(g, spec.param);
    for (NodeId u = 0; u < n; ++u) {
      Distribution row = sim.row(u).transpose();
      row[u] = 0.0;
      const double total = row.sum();
      if (total <= 0.0) {
        row.setZero();
        row[u] = 1.0;
      } else {
        row /= total;
      }
      rows.row(u) = row.transpose();
    }
    return rows;
  }
  parallel_for(0, n, threads, [&](std::uint64_t u, int) {
    rows.row(static_cast<NodeId>(u)) =
        exact_row(g, reversed, spec, static_cast<NodeId>(u)).transpose();
  });
  return rows;
}

Distribution deepwalk_window_distribution(int w) {
  if (w < 1) throw std::invalid_argument("window size must be >= 1");
  Distribution dist(w);
  const double denom = static_cast<double>(w) * (w + 1);
  for (int j = 1; j <= w; ++j) dist[j - 1] = 2.0 * (w - j + 1) / denom;
  return dist;
}

double alpha_for_window(int w) {
  if (w < 2)
    throw std::invalid_argument(
        "window size must be >= 2 (w=1 maps to alpha=0)");
  return static_cast<double>(w - 1) / static_cast<double>(w + 1);
}

}  // namespace verse
