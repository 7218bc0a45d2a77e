#pragma once

#include "verse/graph.hpp"
#include "verse/trainer.hpp"
#include "verse/types.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace verse {

enum class EdgeOperator { Average, Concat, Hadamard, WeightedL1, WeightedL2 };

EdgeOperator parse_edge_operator(const std::string& text);
std::string to_string(EdgeOperator op);

// Combines the endpoint embeddings of an edge into a feature vector:
// Average (a+b)/2, Concat [a||b], Hadamard a.*b, WeightedL1 |a-b|,
// WeightedL2 (a-b).^2. Output dimension is d except for Concat (2d).
Eigen::VectorXf edge_features(EdgeOperator op,
                              const Eigen::Ref<const Eigen::RowVectorXf>& a,
                              const Eigen::Ref<const Eigen::RowVectorXf>& b);

// Node labels joined against contiguous node indices. labels[u] is empty for
// unlabeled nodes.
struct LabeledNodes {
  std::vector<std::vector<int>> labels;
  std::vector<std::string> label_names;

  int label_count() const { return static_cast<int>(label_names.size()); }
  std::vector<NodeId> labeled_nodes() const;
};

// Labels file: one line per labeled node, "NODE_TOKEN<TAB>label[,label...]".
// Tokens are resolved through `vocab` when given, else parsed as indices.
LabeledNodes load_labels(const std::string& path, NodeId n,
                         const std::vector<std::string>& vocab = {});

struct LogisticModel {
  Eigen::VectorXf weights;
  float bias = 0.0f;

  float score(const Eigen::Ref<const Eigen::VectorXf>& x) const {
    return weights.dot(x) + bias;
  }
};

// Plain SGD on L2-regularized logistic loss; deterministic given seed.
// Throws on single-class input.
LogisticModel logistic_train(const Eigen::MatrixXf& features,
                             std::span<const int> targets, int epochs = 100,
                             float lr = 0.1f, std::uint64_t seed = 1,
                             float l2 = 1e-4f);

struct SoftmaxModel {
  Eigen::MatrixXf weights;  // classes x d
  Eigen::VectorXf bias;

  int predict(const Eigen::Ref<const Eigen::VectorXf>& x) const;
};

// Multiclass sibling of logistic_train; targets are class ids in
// [0, classes).
SoftmaxModel softmax_train(const Eigen::MatrixXf& features,
                           std::span<const int> targets, int classes,
                           int epochs = 100, float lr = 0.1f,
                           std::uint64_t seed = 1, float l2 = 1e-4f);

using Edge = std::pair<NodeId, NodeId>;

// Trains a logistic classifier on edge features of the train split and
// returns accuracy on the test split.
double link_prediction_eval(const EmbeddingModel& model,
                            std::span<const Edge> train_pos,
                            std::span<const Edge> train_neg,
                            std::span<const Edge> test_pos,
                            std::span<const Edge> test_neg, EdgeOperator op,
                            std::uint64_t seed);

// Edge splits for link prediction: holds out `test_fraction` of the edges as
// test positives and samples `neg_ratio` non-edges per positive.
struct LinkPredictionSplit {
  std::vector<Edge> train_pos, train_neg, test_pos, test_neg;
};
LinkPredictionSplit make_link_prediction_split(const Graph& g,
                                               double test_fraction,
                                               double neg_ratio,
                                               std::uint64_t seed);

enum class ClassifyMode { Multiclass, Multilabel };

struct F1Scores {
  double micro = 0.0;
  double macro = 0.0;
};

// Splits labeled nodes at random, fits softmax regression (multiclass, one
// label per node) or one-vs-rest logistic with a 0.5 threshold (multilabel),
// and returns micro/macro F1 on the held-out nodes. Classes absent from the
// training split are skipped in the macro average with a warning.
F1Scores classification_eval(const EmbeddingModel& model,
                             const LabeledNodes& labels, double train_fraction,
                             ClassifyMode mode, std::uint64_t seed);

// Lloyd iterations with k-means++ seeding until the assignment stops
// changing or 300 iterations; empty clusters are re-seeded from the point
// farthest from its centroid.
std::vector<int> kmeans(const Eigen::Ref<const EmbeddingMatrix>& points, int k,
                        std::uint64_t seed);

// I(a;b) / sqrt(H(a)H(b)); 1 when both entropies are zero, 0 when exactly
// one is.
double nmi(std::span<const int> a, std::span<const int> b);

// Newman modularity of a node partition; the graph is symmetrized and each
// undirected edge counted once (parallel edges collapse).
double modularity(const Graph& g, std::span<const int> assignment);

// Mean, over nodes with positive out-degree, of the fraction of true
// neighbors among the out_degree(u) nodes closest to u by cosine similarity
// (ties broken by ascending index). Evaluates all nodes, or a uniform
// sample of `sample_nodes` when given.
double graph_reconstruction(const EmbeddingModel& model, const Graph& g,
                            std::optional<NodeId> sample_nodes,
                            std::uint64_t seed);

// Mean NDCG@k of the dot-product ranking against graded oracle rows; gains
// are the oracle probabilities, the node itself is excluded, and the ideal
// ranking comes from the oracle's own descending order. Requires k < n.
double ndcg_at_k(const EmbeddingModel& model,
                 std::span<const std::pair<NodeId, Distribution>> oracle_rows,
                 int k);

}  // namespace verse
