#pragma once

#include "verse/graph.hpp"
#include "verse/rng.hpp"
#include "verse/types.hpp"

#include <optional>
#include <string>

namespace verse {

enum class SimilarityKind { Ppr, Adjacency, SimRank };
enum class ProximityOrder { First, Second };

// A similarity measure plus its parameter. `param` is the PPR continuation
// probability alpha or the SimRank decay C; it is unused for adjacency.
//
// Alpha convention: alpha is the probability of *continuing* a walk, i.e.
// the walk restarts with probability 1-alpha, so alpha=0.85 is the classical
// damping factor and larger alpha explores farther neighborhoods.
struct SimilaritySpec {
  SimilarityKind kind = SimilarityKind::Ppr;
  double param = 0.85;
  ProximityOrder order = ProximityOrder::First;
};

// Parses "ppr:0.85", "adj", or "simrank:0.6". Throws std::invalid_argument.
SimilaritySpec parse_similarity(const std::string& text);
std::string to_string(const SimilaritySpec& spec);
void validate(const SimilaritySpec& spec);

// Exact SimRank is O(n^2 * avg_deg^2) per iteration; reserved for small
// graphs.
inline constexpr NodeId kExactSimRankCap = 2000;

// One endpoint of a random walk with restart from u. Walk length L has
// P(L=k) = (1-alpha) * alpha^k; a step out of a node with no out-edges moves
// back to u and keeps consuming the length budget.
NodeId sample_ppr(const Graph& g, NodeId u, double alpha, Rng& rng);

// Uniform out-neighbor of u, or nullopt when u has none (caller resamples a
// new source).
std::optional<NodeId> sample_adjacency(const Graph& g, NodeId u, Rng& rng);

// SimRank-aware walk sampler: draws v so that a second reversed walk from v
// would meet the first one. The length L has continuation sqrt(c); the
// first leg takes L reversed steps from u (truncating at nodes with no
// in-edges, leaving L' <= L steps taken); the return leg retraces L' steps
// of a reversed path backward from the meeting node, each step weighted by
// the number of reversed paths that continue through it. The weights come
// from a precomputed path-count table, so build one sampler per graph and
// decay and reuse it across draws.
class SimRankSampler {
 public:
  // Walks longer than this are truncated; the geometric tail beyond it is
  // below 1e-7 for any c < 0.96.
  static constexpr int kMaxLength = 64;

  SimRankSampler(const Graph& g, const Graph& reversed, double c);

  NodeId sample(NodeId u, Rng& rng) const;

 private:
  const Graph* graph_;
  const Graph* reversed_;
  double sqrt_c_;
  // path_counts_(l, v) = weighted count of length-l reversed paths from v.
  Eigen::MatrixXf path_counts_;
};

// Power iteration of pi <- (1-alpha)*e_u + alpha*pi*A until the L1 change
// drops below tol. A is the row-normalized adjacency with rows of out-degree
// zero replaced by e_u, matching sample_ppr's restart rule.
Distribution exact_ppr_row(const Graph& g, NodeId u, double alpha,
                           double tol = 1e-10);

// Fixed point of sim(u,v) = C/(|I(u)||I(v)|) * sum sim(i,j) over in-neighbor
// pairs, with sim(v,v)=1 and sim(u,v)=0 when either node has no in-edges.
// Starts from the identity; entries never decrease across iterations.
Eigen::MatrixXd exact_simrank_matrix(const Graph& g, double c,
                                     int iterations = 30,
                                     NodeId cap = kExactSimRankCap);

// One exact similarity row. Adjacency rows of sinks and all-zero SimRank
// rows become the point mass on u; SimRank rows have the diagonal removed
// and are renormalized.
Distribution exact_row(const Graph& g, const Graph& reversed,
                       const SimilaritySpec& spec, NodeId u);

// All rows of exact_row stacked into an n x n matrix (row u = simG(u,.)).
// Computes the SimRank fixed point once instead of per row.
Eigen::MatrixXd exact_rows(const Graph& g, const Graph& reversed,
                           const SimilaritySpec& spec, int threads = 1);

// Distribution of the distance between a center node and a sampled context
// under the word2vec-style strategy with window w:
// Pr(j) = 2(w-j+1)/(w(w+1)) for j = 1..w, stored at index j-1.
Distribution deepwalk_window_distribution(int w);

// Continuation probability whose walk-length law best matches a window of
// size w: (w-1)/(w+1). Requires w >= 2.
double alpha_for_window(int w);

}  // namespace verse
