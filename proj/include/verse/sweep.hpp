#pragma once

#include "verse/eval.hpp"

#include <functional>
#include <string>
#include <vector>

namespace verse {

enum class SweepTask { Classify, LinkPred, Cluster, Reconstruct };

SweepTask parse_sweep_task(const std::string& text);
std::string to_string(SweepTask task);

struct SweepConfig {
  SweepTask task = SweepTask::Reconstruct;
  // Empty grid = the full 26-cell default: {first, second} x
  // ({ppr alpha in .45...95} + {simrank C in .15...65} + {adj}).
  std::vector<SimilaritySpec> grid;
  TrainConfig train;
  // Classify: labels must be loaded. Cluster: number of clusters.
  const LabeledNodes* labels = nullptr;
  int cluster_k = 2;
  double train_fraction = 0.5;   // classify mode
  double test_fraction = 0.3;    // linkpred holdout
  EdgeOperator op = EdgeOperator::Hadamard;
};

struct SweepCell {
  SimilaritySpec spec;
  double score = 0.0;
};

struct SweepResult {
  SimilaritySpec best;
  double best_score = 0.0;
  EmbeddingModel best_model;
  std::vector<SweepCell> table;
};

std::vector<SimilaritySpec> default_sweep_grid();

// Trains one model per grid cell and scores it on the configured task:
// supervised tasks (classify, linkpred) by 5-fold cross-validation over the
// task's training data, unsupervised ones (cluster, reconstruct) by 5
// repeats with derived seeds. Ties go to the earlier cell. `on_cell`, when
// set, fires after each completed cell so callers can flush partial tables.
SweepResult hverse_sweep(const Graph& g, const Graph* reversed,
                         const SweepConfig& cfg,
                         const std::function<void(const SweepCell&)>& on_cell = {});

}  // namespace verse
