#pragma once

#include "verse/graph.hpp"
#include "verse/similarity.hpp"
#include "verse/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

namespace verse {

struct EmbeddingModel {
  EmbeddingMatrix w;                         // n x d, row per node
  std::optional<EmbeddingMatrix> w_context;  // present iff second-order

  NodeId num_nodes() const { return static_cast<NodeId>(w.rows()); }
  int dim() const { return static_cast<int>(w.cols()); }
};

struct TrainConfig {
  int dim = 128;
  int negatives = 3;
  // One epoch = n source-node draws (sampled) or n full-row updates (full).
  int epochs = 100;
  float lr0 = 0.0025f;
  float lr_floor = 0.0001f;
  int threads = 1;
  std::uint64_t seed = 1;
  // Full-distribution training only: update the source row but leave target
  // rows untouched.
  bool freeze_targets = false;
};

void validate(const TrainConfig& cfg);

// Entries iid N(0, 1/dim); the context matrix, when present, is initialized
// the same way. Deterministic given seed.
EmbeddingModel init_model(NodeId n, int dim, ProximityOrder order,
                          std::uint64_t seed);

// Logistic gradient step on the pair (u,v): with a the source row W_u and b
// the target row (W_v first-order, W'_v second-order),
//   g = (label - sigmoid(a.b)) * lr,  a += g*b,  b += g*a,
// both deltas from pre-update values. Logits are clamped to [-30, 30].
void nce_update(EmbeddingModel& model, NodeId u, NodeId v, int label,
                float lr);

// Noise-contrastive training over sampled similarity pairs: per iteration,
// draw u uniformly, draw v from the similarity sampler, apply a label-1
// update, then `negatives` label-0 updates against uniform noise nodes.
// Runs epochs*n iterations with the learning rate decaying linearly from
// lr0 to lr_floor. `reversed` may be null except for SimRank. With
// threads > 1 workers share the matrix without locks and convergence is
// statistical; threads == 1 is bit-deterministic given the seed.
EmbeddingModel train_verse(const Graph& g, const Graph* reversed,
                           const SimilaritySpec& spec, const TrainConfig& cfg);

// Exhaustive variant: precomputes every exact similarity row, then performs
// full softmax cross-entropy gradient steps per source row. Per epoch nodes
// are visited in a shuffled order. Requires n <= kExactSimRankCap. When
// epoch_kl is non-null, appends the mean KL objective after every epoch.
EmbeddingModel train_fverse(const Graph& g, const Graph* reversed,
                            const SimilaritySpec& spec, const TrainConfig& cfg,
                            std::vector<double>* epoch_kl = nullptr);

// Internal step of train_fverse, exposed for gradient verification: one
// softmax cross-entropy update of source row u against target matrix
// `targets` (aliasing model.w in first-order mode) toward distribution row
// `sim_row`.
void fverse_row_step(EmbeddingMatrix& w, EmbeddingMatrix& targets, NodeId u,
                     const Eigen::Ref<const Eigen::VectorXf>& sim_row,
                     float lr, bool freeze_targets);

// Mean over rows of KL(simG(u,.) || simE(u,.)) in nats, with simE the
// softmax of W_u against the target matrix. Returns +infinity if simE
// underflows to zero anywhere simG is positive.
double kl_objective(const EmbeddingModel& model,
                    std::span<const std::pair<NodeId, Distribution>> rows);

}  // namespace verse
