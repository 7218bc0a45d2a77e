#include "verse/eval.hpp"

#include "verse/rng.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_map>
#include <unordered_set>

namespace verse {

EdgeOperator parse_edge_operator(const std::string& text) {
  if (text == "average" || text == "avg") return EdgeOperator::Average;
  if (text == "concat") return EdgeOperator::Concat;
  if (text == "hadamard") return EdgeOperator::Hadamard;
  if (text == "l1" || text == "weighted-l1") return EdgeOperator::WeightedL1;
  if (text == "l2" || text == "weighted-l2") return EdgeOperator::WeightedL2;
  throw std::invalid_argument("unknown edge operator '" + text +
                              "' (expected average, concat, hadamard, l1, "
                              "l2)");
}

std::string to_string(EdgeOperator op) {
  switch (op) {
    case EdgeOperator::Average: return "average";
    case EdgeOperator::Concat: return "concat";
    case EdgeOperator::Hadamard: return "hadamard";
    case EdgeOperator::WeightedL1: return "l1";
    case EdgeOperator::WeightedL2: return "l2";
  }
  return "?";
}

Eigen::VectorXf edge_features(EdgeOperator op,
                              const Eigen::Ref<const Eigen::RowVectorXf>& a,
                              const Eigen::Ref<const Eigen::RowVectorXf>& b) {
  if (a.size() != b.size())
    throw std::invalid_argument("edge_features: dimension mismatch");
  switch (op) {
    case EdgeOperator::Average:
      return ((a + b) / 2.0f).transpose();
    case EdgeOperator::Concat: {
      Eigen::VectorXf out(a.size() + b.size());
      out << a.transpose(), b.transpose();
      return out;
    }
    case EdgeOperator::Hadamard:
      return a.cwiseProduct(b).transpose();
    case EdgeOperator::WeightedL1:
      return (a - b).cwiseAbs().transpose();
    case EdgeOperator::WeightedL2:
      return (a - b).cwiseAbs2().transpose();
  }
  throw std::logic_error("unreachable");
}

std::vector<NodeId> LabeledNodes::labeled_nodes() const {
  std::vector<NodeId> out;
  for (NodeId u = 0; u < labels.size(); ++u)
    if (!labels[u].empty()) out.push_back(u);
  return out;
}

LabeledNodes load_labels(const std::string& path, NodeId n,
                         const std::vector<std::string>& vocab) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open labels '" + path + "'");

  std::unordered_map<std::string, NodeId> node_of;
  for (NodeId i = 0; i < vocab.size(); ++i) node_of.emplace(vocab[i], i);

  LabeledNodes out;
  out.labels.assign(n, {});
  std::unordered_map<std::string, int> label_of;

  std::string line;
  size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line[0] == '#') continue;
    const auto tab = line.find('\t');
    if (tab == std::string::npos)
      throw std::runtime_error("labels line " + std::to_string(line_no) +
                               ": expected NODE<TAB>label[,label...]");
    const std::string token = line.substr(0, tab);
    NodeId u;
    if (!vocab.empty()) {
      const auto it = node_of.find(token);
      if (it == node_of.end())
        throw std::runtime_error("labels line " + std::to_string(line_no) +
                                 ": unknown node token '" + token + "'");
      u = it->second;
    } else {
      const auto [ptr, ec] =
          std::from_chars(token.data(), token.data() + token.size(), u);
      if (ec != std::errc{} || ptr != token.data() + token.size())
        throw std::runtime_error("labels line " + std::to_string(line_no) +
                                 ": node token '" + token +
                                 "' is not an index and no vocabulary given");
    }
    if (u >= n)
      throw std::runtime_error("labels line " + std::to_string(line_no) +
                               ": node index " + std::to_string(u) +
                               " >= node count " + std::to_string(n));
    std::stringstream labels_field(line.substr(tab + 1));
    std::string label;
    while (std::getline(labels_field, label, ',')) {
      if (label.empty()) continue;
      const auto [it, inserted] =
          label_of.try_emplace(label, static_cast<int>(out.label_names.size()));
      if (inserted) out.label_names.push_back(label);
      out.labels[u].push_back(it->second);
    }
    if (out.labels[u].empty())
      throw std::runtime_error("labels line " + std::to_string(line_no) +
                               ": node has no labels");
  }
  return out;
}

namespace {

constexpr float kLogitClamp = 30.0f;

inline float clamped_sigmoid(float x) {
  if (x > kLogitClamp) x = kLogitClamp;
  if (x < -kLogitClamp) x = -kLogitClamp;
  return 1.0f / (1.0f + std::exp(-x));
}

std::vector<std::uint32_t> shuffled_indices(size_t count, Rng& rng) {
  std::vector<std::uint32_t> order(count);
  std::iota(order.begin(), order.end(), 0u);
  for (size_t i = count; i > 1; --i)
    std::swap(order[i - 1], order[rng.below(i)]);
  return order;
}

}  // namespace

LogisticModel logistic_train(const Eigen::MatrixXf& features,
                             std::span<const int> targets, int epochs,
                             float lr, std::uint64_t seed, float l2) {
  if (features.rows() == 0 ||
      static_cast<size_t>(features.rows()) != targets.size())
    throw std::invalid_argument("logistic_train: shape mismatch");
  bool seen[2] = {false, false};
  for (int y : targets) seen[y != 0] = true;
  if (!seen[0] || !seen[1])
    throw std::invalid_argument("logistic_train: single-class input");

  LogisticModel model;
  model.weights = Eigen::VectorXf::Zero(features.cols());
  Rng rng(seed);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (std::uint32_t i : shuffled_indices(targets.size(), rng)) {
      const auto x = features.row(i);
      const float g =
          static_cast<float>(targets[i] != 0) - clamped_sigmoid(model.score(x.transpose()));
      model.weights += lr * (g * x.transpose() - l2 * model.weights);
      model.bias += lr * g;
    }
  }
  return model;
}

int SoftmaxModel::predict(const Eigen::Ref<const Eigen::VectorXf>& x) const {
  Eigen::Index best;
  (weights * x + bias).maxCoeff(&best);
  return static_cast<int>(best);
}

SoftmaxModel softmax_train(const Eigen::MatrixXf& features,
                           std::span<const int> targets, int classes,
                           int epochs, float lr, std::uint64_t seed,
                           float l2) {
  if (features.rows() == 0 ||
      static_cast<size_t>(features.rows()) != targets.size())
    throw std::invalid_argument("softmax_train: shape mismatch");
  if (classes < 2) throw std::invalid_argument("softmax_train: classes < 2");

  SoftmaxModel model;
  model.weights = Eigen::MatrixXf::Zero(classes, features.cols());
  model.bias = Eigen::VectorXf::Zero(classes);
  Rng rng(seed);
  for (int epoch = 0; epoch < epochs; ++epoch) {
    for (std::uint32_t i : shuffled_indices(targets.size(), rng)) {
      const Eigen::VectorXf x = features.row(i).transpose();
      Eigen::VectorXf logits = model.weights * x + model.bias;
      Eigen::VectorXf p = (logits.array() - logits.maxCoeff()).exp();
      p /= p.sum();
      p[targets[i]] -= 1.0f;  // p - onehot(y)
      model.weights -= lr * (p * x.transpose() + l2 * model.weights);
      model.bias -= lr * p;
    }
  }
  return model;
}

namespace {

Eigen::MatrixXf stack_edge_features(const EmbeddingModel& model,
                                    std::span<const Edge> edges,
                                    EdgeOperator op) {
  const int d = op == EdgeOperator::Concat ? 2 * model.dim() : model.dim();
  Eigen::MatrixXf features(edges.size(), d);
  for (size_t i = 0; i < edges.size(); ++i)
    features.row(i) =
        edge_features(op, model.w.row(edges[i].first),
                      model.w.row(edges[i].second))
            .transpose();
  return features;
}

}  // namespace

double link_prediction_eval(const EmbeddingModel& model,
                            std::span<const Edge> train_pos,
                            std::span<const Edge> train_neg,
                            std::span<const Edge> test_pos,
                            std::span<const Edge> test_neg, EdgeOperator op,
                            std::uint64_t seed) {
  if (train_pos.empty() || train_neg.empty() || test_pos.empty() ||
      test_neg.empty())
    throw std::invalid_argument("link_prediction_eval: empty split");

  const size_t train_count = train_pos.size() + train_neg.size();
  Eigen::MatrixXf train_features(
      train_count, op == EdgeOperator::Concat ? 2 * model.dim() : model.dim());
  train_features.topRows(train_pos.size()) =
      stack_edge_features(model, train_pos, op);
  train_features.bottomRows(train_neg.size()) =
      stack_edge_features(model, train_neg, op);
  std::vector<int> train_labels(train_count, 0);
  std::fill(train_labels.begin(), train_labels.begin() + train_pos.size(), 1);

  const LogisticModel clf =
      logistic_train(train_features, train_labels, 100, 0.1f, seed);

  std::uint64_t correct = 0;
  const auto count_correct = [&](std::span<const Edge> edges, int label) {
    const Eigen::MatrixXf f = stack_edge_features(model, edges, op);
    for (Eigen::Index i = 0; i < f.rows(); ++i)
      correct += (clf.score(f.row(i).transpose()) > 0.0f) == (label == 1);
  };
  count_correct(test_pos, 1);
  count_correct(test_neg, 0);
  return static_cast<double>(correct) /
         static_cast<double>(test_pos.size() + test_neg.size());
}

LinkPredictionSplit make_link_prediction_split(const Graph& g,
                                               double test_fraction,
                                               double neg_ratio,
                                               std::uint64_t seed) {
  if (!(test_fraction > 0.0 && test_fraction < 1.0))
    throw std::invalid_argument("test_fraction must lie in (0,1)");
  if (!(neg_ratio > 0.0)) throw std::invalid_argument("neg_ratio must be > 0");

  // Work on distinct undirected pairs so a held-out edge cannot leak back in
  // through its mirror.
  const auto key = [](NodeId a, NodeId b) {
    if (a > b) std::swap(a, b);
    return (static_cast<std::uint64_t>(a) << 32) | b;
  };
  std::unordered_set<std::uint64_t> present;
  std::vector<Edge> pairs;
  for (NodeId u = 0; u < g.num_nodes(); ++u)
    for (NodeId v : g.neighbors(u)) {
      if (u == v) continue;
      if (present.insert(key(u, v)).second)
        pairs.emplace_back(std::min(u, v), std::max(u, v));
    }
  if (pairs.size() < 4)
    throw std::invalid_argument("graph too small for a link split");

  Rng rng(seed);
  for (size_t i = pairs.size(); i > 1; --i)
    std::swap(pairs[i - 1], pairs[rng.below(i)]);
  size_t test_count = static_cast<size_t>(
      std::lround(test_fraction * static_cast<double>(pairs.size())));
  test_count = std::clamp<size_t>(test_count, 1, pairs.size() - 1);

  LinkPredictionSplit split;
  split.test_pos.assign(pairs.begin(), pairs.begin() + test_count);
  split.train_pos.assign(pairs.begin() + test_count, pairs.end());

  const NodeId n = g.num_nodes();
  const auto sample_negatives = [&](size_t count, std::vector<Edge>& out) {
    std::unordered_set<std::uint64_t> chosen;
    std::uint64_t attempts = 0;
    const std::uint64_t max_attempts = 1000 * (count + 16);
    while (out.size() < count) {
      if (++attempts > max_attempts)
        throw std::runtime_error(
            "could not sample enough non-edges (graph too dense?)");
      const NodeId a = static_cast<NodeId>(rng.below(n));
      const NodeId b = static_cast<NodeId>(rng.below(n));
      if (a == b) continue;
      const std::uint64_t k = key(a, b);
      if (present.contains(k) || !chosen.insert(k).second) continue;
      out.emplace_back(std::min(a, b), std::max(a, b));
    }
  };
  sample_negatives(static_cast<size_t>(std::lround(
                       neg_ratio * static_cast<double>(split.test_pos.size()))),
                   split.test_neg);
  sample_negatives(static_cast<size_t>(std::lround(
                       neg_ratio * static_cast<double>(split.train_pos.size()))),
                   split.train_neg);
  return split;
}

namespace {

struct BinaryCounts {
  std::uint64_t tp = 0, fp = 0, fn = 0;
  double f1() const {
    const double denom = static_cast<double>(2 * tp + fp + fn);
    return denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(tp) / denom;
  }
};

}  // namespace

F1Scores classification_eval(const EmbeddingModel& model,
                             const LabeledNodes& labels, double train_fraction,
                             ClassifyMode mode, std::uint64_t seed) {
  if (!(train_fraction > 0.0 && train_fraction < 1.0))
    throw std::invalid_argument("train_fraction must lie in (0,1)");
  if (labels.labels.size() != model.num_nodes())
    throw std::invalid_argument("labels cover a different node count");
  std::vector<NodeId> nodes = labels.labeled_nodes();
  if (nodes.size() < 10)
    throw std::invalid_argument("need at least 10 labeled nodes");

  Rng rng(seed);
  for (size_t i = nodes.size(); i > 1; --i)
    std::swap(nodes[i - 1], nodes[rng.below(i)]);
  size_t train_count = static_cast<size_t>(
      std::lround(train_fraction * static_cast<double>(nodes.size())));
  train_count = std::clamp<size_t>(train_count, 1, nodes.size() - 1);
  const std::span<const NodeId> train_nodes(nodes.data(), train_count);
  const std::span<const NodeId> test_nodes(nodes.data() + train_count,
                                           nodes.size() - train_count);

  const int classes = labels.label_count();
  std::vector<bool> trainable(classes, false);
  for (NodeId u : train_nodes)
    for (int c : labels.labels[u]) trainable[c] = true;
  for (int c = 0; c < classes; ++c)
    if (!trainable[c])
      std::cerr << "warning: class '" << labels.label_names[c]
                << "' absent from the training split; skipped in macro-F1\n";

  Eigen::MatrixXf train_features(train_count, model.dim());
  for (size_t i = 0; i < train_count; ++i)
    train_features.row(i) = model.w.row(train_nodes[i]);

  std::vector<BinaryCounts> per_class(classes);
  std::uint64_t micro_tp = 0, micro_fp = 0, micro_fn = 0;

  if (mode == ClassifyMode::Multiclass) {
    // One label per node; nodes with several use the first.
    std::vector<int> y(train_count);
    for (size_t i = 0; i < train_count; ++i)
      y[i] = labels.labels[train_nodes[i]].front();
    const SoftmaxModel clf =
        softmax_train(train_features, y, classes, 100, 0.1f, seed);
    for (NodeId u : test_nodes) {
      const int truth = labels.labels[u].front();
      const int pred = clf.predict(model.w.row(u).transpose());
      if (pred == truth) {
        ++per_class[truth].tp;
        ++micro_tp;
      } else {
        ++per_class[truth].fn;
        ++per_class[pred].fp;
        ++micro_fn;
        ++micro_fp;
      }
    }
  } else {
    for (int c = 0; c < classes; ++c) {
      std::optional<LogisticModel> clf;
      if (trainable[c]) {
        std::vector<int> y(train_count);
        bool positive = false, negative = false;
        for (size_t i = 0; i < train_count; ++i) {
          const auto& ls = labels.labels[train_nodes[i]];
          y[i] = std::find(ls.begin(), ls.end(), c) != ls.end();
          (y[i] ? positive : negative) = true;
        }
        if (positive && negative)
          clf = logistic_train(train_features, y, 100, 0.1f, seed);
      }
      for (NodeId u : test_nodes) {
        const auto& ls = labels.labels[u];
        const bool truth = std::find(ls.begin(), ls.end(), c) != ls.end();
        // Sigmoid > 0.5 iff the raw score is positive.
        const bool pred =
            clf && clf->score(model.w.row(u).transpose()) > 0.0f;
        if (pred && truth) ++per_class[c].tp, ++micro_tp;
        if (pred && !truth) ++per_class[c].fp, ++micro_fp;
        if (!pred && truth) ++per_class[c].fn, ++micro_fn;
      }
    }
  }

  double macro_sum = 0.0;
  int macro_classes = 0;
  for (int c = 0; c < classes; ++c) {
    if (!trainable[c]) continue;  // skipped with warning above
    if (per_class[c].tp + per_class[c].fp + per_class[c].fn == 0) continue;
    macro_sum += per_class[c].f1();
    ++macro_classes;
  }

  F1Scores scores;
  const double micro_denom = static_cast<double>(2 * micro_tp + micro_fp + micro_fn);
  scores.micro = micro_denom == 0.0 ? 0.0 : 2.0 * static_cast<double>(micro_tp) / micro_denom;
  scores.macro = macro_classes == 0 ? 0.0 : macro_sum / macro_classes;
  return scores;
}

std::vector<int> kmeans(const Eigen::Ref<const EmbeddingMatrix>& points,
                        int k, std::uint64_t seed) {
  const Eigen::Index n = points.rows();
  if (k < 1 || k > n) throw std::invalid_argument("kmeans: need 1 <= k <= n");

  Rng rng(seed);
  EmbeddingMatrix centroids(k, points.cols());

  // k-means++ seeding.
  centroids.row(0) = points.row(static_cast<Eigen::Index>(rng.below(n)));
  Eigen::VectorXf dist2 =
      (points.rowwise() - centroids.row(0)).rowwise().squaredNorm();
  for (int c = 1; c < k; ++c) {
    const double total = dist2.cast<double>().sum();
    Eigen::Index pick;
    if (total <= 0.0) {
      pick = static_cast<Eigen::Index>(rng.below(n));
    } else {
      double remaining = rng.uniform() * total;
      pick = n - 1;
      for (Eigen::Index i = 0; i < n; ++i) {
        remaining -= dist2[i];
        if (remaining <= 0.0) {
          pick = i;
          break;
        }
      }
    }
    centroids.row(c) = points.row(pick);
    dist2 = dist2.cwiseMin(
        (points.rowwise() - centroids.row(c)).rowwise().squaredNorm());
  }

  std::vector<int> assignment(n, 0);
  Eigen::VectorXf best(n);
  for (int iter = 0; iter < 300; ++iter) {
    bool changed = false;
    for (Eigen::Index i = 0; i < n; ++i) {
      int arg = 0;
      float bd = (points.row(i) - centroids.row(0)).squaredNorm();
      for (int c = 1; c < k; ++c) {
        const float d = (points.row(i) - centroids.row(c)).squaredNorm();
        if (d < bd) {
          bd = d;
          arg = c;
        }
      }
      best[i] = bd;
      if (assignment[i] != arg) {
        assignment[i] = arg;
        changed = true;
      }
    }
    if (!changed && iter > 0) break;

    EmbeddingMatrix sums = EmbeddingMatrix::Zero(k, points.cols());
    std::vector<Eigen::Index> counts(k, 0);
    for (Eigen::Index i = 0; i < n; ++i) {
      sums.row(assignment[i]) += points.row(i);
      ++counts[assignment[i]];
    }
    for (int c = 0; c < k; ++c) {
      if (counts[c] > 0) {
        centroids.row(c) = sums.row(c) / static_cast<float>(counts[c]);
      } else {
        // Re-seed from the farthest point; if everything coincides there is
        // nothing to split and the cluster stays empty.
        Eigen::Index far;
        if (best.maxCoeff(&far) > 0.0f) centroids.row(c) = points.row(far);
      }
    }
  }
  return assignment;
}

double nmi(std::span<const int> a, std::span<const int> b) {
  if (a.size() != b.size())
    throw std::invalid_argument("nmi: length mismatch");
  const double n = static_cast<double>(a.size());
  if (a.empty()) throw std::invalid_argument("nmi: empty partitions");

  std::unordered_map<int, double> count_a, count_b;
  std::unordered_map<std::uint64_t, double> joint;
  for (size_t i = 0; i < a.size(); ++i) {
    count_a[a[i]] += 1.0;
    count_b[b[i]] += 1.0;
    joint[(static_cast<std::uint64_t>(static_cast<std::uint32_t>(a[i])) << 32) |
          static_cast<std::uint32_t>(b[i])] += 1.0;
  }
  const auto entropy = [n](const std::unordered_map<int, double>& counts) {
    double h = 0.0;
    for (const auto& [_, c] : counts) h -= c / n * std::log(c / n);
    return h;
  };
  const double ha = entropy(count_a), hb = entropy(count_b);
  if (ha == 0.0 && hb == 0.0) return 1.0;
  if (ha == 0.0 || hb == 0.0) return 0.0;

  double mi = 0.0;
  for (const auto& [key, c] : joint) {
    const double pa = count_a[static_cast<int>(key >> 32)] / n;
    const double pb = count_b[static_cast<int>(key & 0xffffffffu)] / n;
    const double pab = c / n;
    mi += pab * std::log(pab / (pa * pb));
  }
  return std::clamp(mi / std::sqrt(ha * hb), 0.0, 1.0);
}

double modularity(const Graph& g, std::span<const int> assignment) {
  if (assignment.size() != g.num_nodes())
    throw std::invalid_argument("modularity: assignment does not cover graph");

  // Undirected view: each distinct pair once, parallel edges collapse.
  std::unordered_set<std::uint64_t> seen;
  std::unordered_map<int, double> intra, degree_sum;
  std::uint64_t undirected_edges = 0;
  for (NodeId u = 0; u < g.num_nodes(); ++u) {
    for (NodeId v : g.neighbors(u)) {
      NodeId a = u, b = v;
      if (a > b) std::swap(a, b);
      if (!seen.insert((static_cast<std::uint64_t>(a) << 32) | b).second)
        continue;
      ++undirected_edges;
      degree_sum[assignment[a]] += 1.0;
      degree_sum[assignment[b]] += 1.0;  // self-loop counts twice
      if (assignment[a] == assignment[b]) intra[assignment[a]] += 1.0;
    }
  }
  if (undirected_edges == 0) return 0.0;

  const double m = static_cast<double>(undirected_edges);
  double q = 0.0;
  for (const auto& [community, d] : degree_sum) {
    const double e = intra.count(community) ? intra.at(community) : 0.0;
    const double frac = d / (2.0 * m);
    q += e / m - frac * frac;
  }
  return q;
}

double graph_reconstruction(const EmbeddingModel& model, const Graph& g,
                            std::optional<NodeId> sample_nodes,
                            std::uint64_t seed) {
  const NodeId n = g.num_nodes();
  if (model.num_nodes() != n)
    throw std::invalid_argument("embedding covers " +
                                std::to_string(model.num_nodes()) +
                                " nodes, graph has " + std::to_string(n));

  std::vector<NodeId> eligible;
  for (NodeId u = 0; u < n; ++u)
    if (g.out_degree(u) > 0) eligible.push_back(u);
  if (eligible.empty()) return 0.0;

  if (sample_nodes && *sample_nodes < eligible.size()) {
    Rng rng(seed);
    for (size_t i = eligible.size(); i > 1; --i)
      std::swap(eligible[i - 1], eligible[rng.below(i)]);
    eligible.resize(*sample_nodes);
  }

  const Eigen::VectorXf norms = model.w.rowwise().norm();
  double total = 0.0;
  std::vector<NodeId> candidates;
  for (NodeId u : eligible) {
    if (norms[u] == 0.0f) {
      std::cerr << "warning: node " << u
                << " has an all-zero embedding row; scored 0\n";
      continue;  // contributes 0 to the sum below
    }
    Eigen::VectorXf scores = model.w * model.w.row(u).transpose();
    for (NodeId v = 0; v < n; ++v)
      scores[v] = norms[v] == 0.0f ? 0.0f : scores[v] / norms[v];
    // norms[u] scales everything equally; skip it.

    const std::uint64_t k64 = g.out_degree(u);
    const size_t k = static_cast<size_t>(std::min<std::uint64_t>(k64, n - 1));
    candidates.resize(n - 1);
    NodeId idx = 0;
    for (NodeId v = 0; v < n; ++v)
      if (v != u) candidates[idx++] = v;
    std::partial_sort(candidates.begin(), candidates.begin() + k,
                      candidates.end(), [&](NodeId x, NodeId y) {
                        if (scores[x] != scores[y]) return scores[x] > scores[y];
                        return x < y;
                      });
    std::unordered_set<NodeId> neighbor_set;
    for (NodeId v : g.neighbors(u)) neighbor_set.insert(v);
    std::uint64_t hits = 0;
    for (size_t i = 0; i < k; ++i) hits += neighbor_set.count(candidates[i]);
    total += static_cast<double>(hits) / static_cast<double>(k64);
  }
  return total / static_cast<double>(eligible.size());
}

double ndcg_at_k(const EmbeddingModel& model,
                 std::span<const std::pair<NodeId, Distribution>> oracle_rows,
                 int k) {
  const NodeId n = model.num_nodes();
  if (k < 1) throw std::invalid_argument("ndcg: k must be >= 1");
  if (static_cast<NodeId>(k) >= n)
    throw std::invalid_argument("ndcg: k must be < node count");
  if (oracle_rows.empty()) throw std::invalid_argument("ndcg: no oracle rows");

  double total = 0.0;
  std::vector<NodeId> candidates;
  std::vector<double> gains;
  for (const auto& [u, row] : oracle_rows) {
    if (row.size() != n)
      throw std::invalid_argument("ndcg: oracle row has wrong length");
    const Eigen::VectorXf scores = model.w * model.w.row(u).transpose();

    candidates.resize(n - 1);
    NodeId idx = 0;
    for (NodeId v = 0; v < n; ++v)
      if (v != u) candidates[idx++] = v;
    std::partial_sort(candidates.begin(), candidates.begin() + k,
                      candidates.end(), [&](NodeId x, NodeId y) {
                        if (scores[x] != scores[y]) return scores[x] > scores[y];
                        return x < y;
                      });
    double dcg = 0.0;
    for (int i = 0; i < k; ++i)
      dcg += row[candidates[i]] / std::log2(static_cast<double>(i) + 2.0);

    gains.assign(row.data(), row.data() + n);
    gains[u] = 0.0;
    std::partial_sort(gains.begin(), gains.begin() + k, gains.end(),
                      std::greater<>());
    double idcg = 0.0;
    for (int i = 0; i < k; ++i)
      idcg += gains[i] / std::log2(static_cast<double>(i) + 2.0);

    // A row with no off-diagonal mass makes every ranking ideal.
    total += idcg == 0.0 ? 1.0 : dcg / idcg;
  }
  return total / static_cast<double>(oracle_rows.size());
}

}  // namespace verse
