#include "verse/sweep.hpp"

#include "verse/rng.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace verse {

SweepTask parse_sweep_task(const std::string& text) {
  if (text == "classify") return SweepTask::Classify;
  if (text == "linkpred") return SweepTask::LinkPred;
  if (text == "cluster") return SweepTask::Cluster;
  if (text == "reconstruct") return SweepTask::Reconstruct;
  throw std::invalid_argument("unknown sweep task '" + text +
                              "' (expected classify, linkpred, cluster, "
                              "reconstruct)");
}

std::string to_string(SweepTask task) {
  switch (task) {
    case SweepTask::Classify: return "classify";
    case SweepTask::LinkPred: return "linkpred";
    case SweepTask::Cluster: return "cluster";
    case SweepTask::Reconstruct: return "reconstruct";
  }
  return "?";
}

std::vector<SimilaritySpec> default_sweep_grid() {
  std::vector<SimilaritySpec> grid;
  for (ProximityOrder order : {ProximityOrder::First, ProximityOrder::Second}) {
    for (double alpha : {0.45, 0.55, 0.65, 0.75, 0.85, 0.95})
      grid.push_back({SimilarityKind::Ppr, alpha, order});
    for (double c : {0.15, 0.25, 0.35, 0.45, 0.55, 0.65})
      grid.push_back({SimilarityKind::SimRank, c, order});
    grid.push_back({SimilarityKind::Adjacency, 0.0, order});
  }
  return grid;
}

namespace {

constexpr int kFolds = 5;

// Per-fold index lists: element i goes to fold i % kFolds after a shuffle.
std::vector<std::vector<std::uint32_t>> make_folds(size_t count,
                                                   std::uint64_t seed) {
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0u);
  Rng rng(seed);
  for (size_t i = count; i > 1; --i)
    std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::vector<std::uint32_t>> folds(kFolds);
  for (size_t i = 0; i < count; ++i) folds[i % kFolds].push_back(order[i]);
  return folds;
}

double score_classify(const EmbeddingModel& model, const LabeledNodes& labels,
                      std::uint64_t seed) {
  const std::vector<NodeId> nodes = labels.labeled_nodes();
  const auto folds = make_folds(nodes.size(), seed);
  const int classes = labels.label_count();

  double total = 0.0;
  for (int held = 0; held < kFolds; ++held) {
    std::vector<NodeId> train_nodes, test_nodes;
    for (int f = 0; f < kFolds; ++f)
      for (std::uint32_t i : folds[f])
        (f == held ? test_nodes : train_nodes).push_back(nodes[i]);
    if (train_nodes.empty() || test_nodes.empty()) continue;

    Eigen::MatrixXf features(train_nodes.size(), model.dim());
    std::vector<int> y(train_nodes.size());
    for (size_t i = 0; i < train_nodes.size(); ++i) {
      features.row(i) = model.w.row(train_nodes[i]);
      y[i] = labels.labels[train_nodes[i]].front();
    }
    const SoftmaxModel clf =
        softmax_train(features, y, classes, 100, 0.1f, seed + held);
    std::uint64_t correct = 0;
    for (NodeId u : test_nodes)
      correct += clf.predict(model.w.row(u).transpose()) ==
                 labels.labels[u].front();
    total += static_cast<double>(correct) /
             static_cast<double>(test_nodes.size());
  }
  return total / kFolds;
}

double score_linkpred(const EmbeddingModel& model,
                      const LinkPredictionSplit& split, EdgeOperator op,
                      std::uint64_t seed) {
  // Cross-validate within the training half; positives and negatives are
  // folded separately to keep folds two-class.
  const auto pos_folds = make_folds(split.train_pos.size(), seed);
  const auto neg_folds = make_folds(split.train_neg.size(), seed + 1);

  double total = 0.0;
  int scored = 0;
  for (int held = 0; held < kFolds; ++held) {
    std::vector<Edge> train_pos, train_neg, test_pos, test_neg;
    for (int f = 0; f < kFolds; ++f) {
      for (std::uint32_t i : pos_folds[f])
        (f == held ? test_pos : train_pos).push_back(split.train_pos[i]);
      for (std::uint32_t i : neg_folds[f])
        (f == held ? test_neg : train_neg).push_back(split.train_neg[i]);
    }
    if (train_pos.empty() || train_neg.empty() || test_pos.empty() ||
        test_neg.empty())
      continue;
    total += link_prediction_eval(model, train_pos, train_neg, test_pos,
                                  test_neg, op, seed + held);
    ++scored;
  }
  return scored == 0 ? 0.0 : total / scored;
}

}  // namespace

SweepResult hverse_sweep(const Graph& g, const Graph* reversed,
                         const SweepConfig& cfg,
                         const std::function<void(const SweepCell&)>& on_cell) {
  const std::vector<SimilaritySpec> grid =
      cfg.grid.empty() ? default_sweep_grid() : cfg.grid;

  if (cfg.task == SweepTask::Classify) {
    if (cfg.labels == nullptr)
      throw std::invalid_argument("classify sweep needs labels");
    if (cfg.labels->labeled_nodes().size() < static_cast<size_t>(kFolds))
      throw std::invalid_argument("classify sweep needs >= 5 labeled nodes");
  }

  Graph local_rev;
  const Graph* rev = reversed;
  const bool needs_reverse =
      std::any_of(grid.begin(), grid.end(), [](const SimilaritySpec& s) {
        return s.kind == SimilarityKind::SimRank;
      });
  if (rev == nullptr && needs_reverse) {
    local_rev = reverse(g);
    rev = &local_rev;
  }

  std::optional<LinkPredictionSplit> split;
  if (cfg.task == SweepTask::LinkPred)
    split = make_link_prediction_split(g, cfg.test_fraction, 1.0,
                                       cfg.train.seed);

  SweepResult result;
  bool first = true;
  for (const SimilaritySpec& cell_spec : grid) {
    SimilaritySpec spec = cell_spec;
    EmbeddingModel model = train_verse(g, rev, spec, cfg.train);

    double score = 0.0;
    switch (cfg.task) {
      case SweepTask::Classify:
        score = score_classify(model, *cfg.labels, cfg.train.seed);
        break;
      case SweepTask::LinkPred:
        score = score_linkpred(model, *split, cfg.op, cfg.train.seed);
        break;
      case SweepTask::Cluster: {
        double total = 0.0;
        for (int r = 0; r < kFolds; ++r) {
          const std::vector<int> assignment =
              kmeans(model.w, cfg.cluster_k, cfg.train.seed + r);
          total += modularity(g, assignment);
        }
        score = total / kFolds;
        break;
      }
      case SweepTask::Reconstruct: {
        double total = 0.0;
        for (int r = 0; r < kFolds; ++r)
          total += graph_reconstruction(model, g, std::nullopt,
                                        cfg.train.seed + r);
        score = total / kFolds;
        break;
      }
    }

    const SweepCell cell{spec, score};
    result.table.push_back(cell);
    if (on_cell) on_cell(cell);
    if (first || score > result.best_score) {
      result.best = spec;
      result.best_score = score;
      result.best_model = std::move(model);
      first = false;
    }
  }
  return result;
}

}  // namespace verse
