#include "verse/eval.hpp"

#include "verse/sweep.hpp"

#include "support/datasets.hpp"
#include "support/oracles.hpp"

#include <doctest.h>

#include <cmath>
#include <set>

using namespace verse;
using namespace testsupport;

namespace {

Eigen::RowVectorXf rowf(std::initializer_list<float> values) {
  Eigen::RowVectorXf v(values.size());
  int i = 0;
  for (float x : values) v[i++] = x;
  return v;
}

EmbeddingModel model_from_rows(const std::vector<Eigen::RowVectorXf>& rows) {
  EmbeddingModel m;
  m.w.resize(rows.size(), rows.front().size());
  for (size_t i = 0; i < rows.size(); ++i) m.w.row(i) = rows[i];
  return m;
}

}  // namespace

TEST_CASE("edge_features") {
  const Eigen::RowVectorXf a = rowf({1, 2});
  const Eigen::RowVectorXf b = rowf({3, 4});
  SUBCASE("hadamard") {
    const Eigen::VectorXf f = edge_features(EdgeOperator::Hadamard, a, b);
    CHECK(f[0] == 3.0f);
    CHECK(f[1] == 8.0f);
  }
  SUBCASE("weighted l1 of equal vectors is zero") {
    CHECK(edge_features(EdgeOperator::WeightedL1, a, a).cwiseAbs().maxCoeff() ==
          0.0f);
  }
  SUBCASE("average") {
    const Eigen::VectorXf f =
        edge_features(EdgeOperator::Average, rowf({0, 0}), rowf({2, 4}));
    CHECK(f[0] == 1.0f);
    CHECK(f[1] == 2.0f);
  }
  SUBCASE("concat doubles dimension and is order-sensitive") {
    const Eigen::VectorXf f = edge_features(EdgeOperator::Concat, a, b);
    REQUIRE(f.size() == 4);
    CHECK(f[0] == 1.0f);
    CHECK(f[3] == 4.0f);
    const Eigen::VectorXf flipped = edge_features(EdgeOperator::Concat, b, a);
    CHECK((flipped - f).cwiseAbs().maxCoeff() > 0.0f);
  }
  SUBCASE("weighted l2") {
    const Eigen::VectorXf f = edge_features(EdgeOperator::WeightedL2, a, b);
    CHECK(f[0] == 4.0f);
    CHECK(f[1] == 4.0f);
  }
  SUBCASE("symmetry for all but concat") {
    for (EdgeOperator op :
         {EdgeOperator::Average, EdgeOperator::Hadamard,
          EdgeOperator::WeightedL1, EdgeOperator::WeightedL2}) {
      CHECK((edge_features(op, a, b) - edge_features(op, b, a))
                .cwiseAbs()
                .maxCoeff() == 0.0f);
    }
  }
  SUBCASE("dimension mismatch") {
    CHECK_THROWS_AS(edge_features(EdgeOperator::Average, a, rowf({1, 2, 3})),
                    std::invalid_argument);
  }
}

TEST_CASE("logistic_train") {
  SUBCASE("separable 1-d points") {
    Eigen::MatrixXf x(6, 1);
    x << -1.2f, -1.0f, -0.8f, 0.8f, 1.0f, 1.2f;
    const std::vector<int> y = {0, 0, 0, 1, 1, 1};
    const LogisticModel m = logistic_train(x, y);
    int correct = 0;
    for (int i = 0; i < 6; ++i)
      correct += (m.score(x.row(i).transpose()) > 0.0f) == (y[i] == 1);
    CHECK(correct == 6);
  }
  SUBCASE("identical features predict the majority class") {
    Eigen::MatrixXf x = Eigen::MatrixXf::Ones(100, 2);
    std::vector<int> y(100, 0);
    for (int i = 0; i < 30; ++i) y[i] = 1;
    const LogisticModel m = logistic_train(x, y);
    int correct = 0;
    for (int i = 0; i < 100; ++i)
      correct += (m.score(x.row(i).transpose()) > 0.0f) == (y[i] == 1);
    CHECK(std::abs(correct / 100.0 - 0.7) < 0.01 + 1e-12);
  }
  SUBCASE("1-d xor pattern caps at 0.75") {
    Eigen::MatrixXf x(4, 1);
    x << 0.0f, 1.0f, 2.0f, 3.0f;
    const std::vector<int> y = {0, 1, 1, 0};
    const LogisticModel m = logistic_train(x, y);
    int correct = 0;
    for (int i = 0; i < 4; ++i)
      correct += (m.score(x.row(i).transpose()) > 0.0f) == (y[i] == 1);
    CHECK(correct <= 3);
  }
  SUBCASE("single class rejected") {
    Eigen::MatrixXf x = Eigen::MatrixXf::Ones(4, 1);
    const std::vector<int> y = {1, 1, 1, 1};
    CHECK_THROWS_AS(logistic_train(x, y), std::invalid_argument);
  }
}

TEST_CASE("link_prediction_eval") {
  SUBCASE("separable hadamard features") {
    // Linked pairs share the sign pattern, unlinked pairs oppose it.
    std::vector<Eigen::RowVectorXf> rows;
    for (int i = 0; i < 4; ++i) rows.push_back(rowf({1, 1}));
    for (int i = 0; i < 4; ++i) rows.push_back(rowf({-1, -1}));
    const EmbeddingModel m = model_from_rows(rows);
    std::vector<Edge> pos, neg;
    for (NodeId i = 0; i < 4; ++i)
      for (NodeId j = 0; j < 4; ++j) {
        if (i < j) pos.emplace_back(i, j);        // same block
        neg.emplace_back(i, 4 + j);               // across blocks
      }
    const std::vector<Edge> test_pos(pos.begin(), pos.begin() + 3);
    const std::vector<Edge> train_pos(pos.begin() + 3, pos.end());
    const std::vector<Edge> test_neg(neg.begin(), neg.begin() + 3);
    const std::vector<Edge> train_neg(neg.begin() + 3, neg.end());
    const double acc = link_prediction_eval(m, train_pos, train_neg, test_pos,
                                            test_neg, EdgeOperator::Hadamard,
                                            1);
    CHECK(acc >= 0.95);
  }
  SUBCASE("random embeddings score near chance") {
    const Graph g = two_cliques(12, 12, true);
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      const EmbeddingModel m =
          init_model(g.num_nodes(), 8, ProximityOrder::First, seed * 17);
      const LinkPredictionSplit split =
          make_link_prediction_split(g, 0.3, 1.0, seed);
      total += link_prediction_eval(m, split.train_pos, split.train_neg,
                                    split.test_pos, split.test_neg,
                                    EdgeOperator::Hadamard, seed);
    }
    const double mean = total / 10.0;
    CHECK(mean > 0.40);
    CHECK(mean < 0.60);
  }
  SUBCASE("empty split rejected") {
    const EmbeddingModel m = model_from_rows({rowf({1}), rowf({0})});
    const std::vector<Edge> some = {{0, 1}};
    CHECK_THROWS_AS(
        link_prediction_eval(m, some, some, some, {}, EdgeOperator::Average, 1),
        std::invalid_argument);
  }
}

TEST_CASE("make_link_prediction_split") {
  const Graph g = two_cliques(10, 10, true);
  const LinkPredictionSplit split = make_link_prediction_split(g, 0.25, 1.0, 3);
  const size_t undirected = 2 * 45 + 1;
  CHECK(split.test_pos.size() + split.train_pos.size() == undirected);
  CHECK(split.test_pos.size() ==
        static_cast<size_t>(std::lround(0.25 * undirected)));
  // Negatives are absent from the graph.
  for (const auto& [u, v] : split.test_neg) {
    const auto nbrs = g.neighbors(u);
    CHECK(std::find(nbrs.begin(), nbrs.end(), v) == nbrs.end());
  }
}

TEST_CASE("classification_eval") {
  SUBCASE("labels encoded in one coordinate") {
    std::vector<Eigen::RowVectorXf> rows;
    LabeledNodes labels;
    labels.label_names = {"left", "right"};
    for (int i = 0; i < 30; ++i) {
      const bool right = i % 2;
      rows.push_back(rowf({right ? 1.0f : -1.0f, 0.5f}));
      labels.labels.push_back({right ? 1 : 0});
    }
    const EmbeddingModel m = model_from_rows(rows);
    const F1Scores f1 =
        classification_eval(m, labels, 0.5, ClassifyMode::Multiclass, 1);
    CHECK(f1.micro == doctest::Approx(1.0));
    CHECK(f1.macro == doctest::Approx(1.0));
    const F1Scores ovr =
        classification_eval(m, labels, 0.5, ClassifyMode::Multilabel, 1);
    CHECK(ovr.micro == doctest::Approx(1.0));
  }
  SUBCASE("random labels score near chance") {
    const int k = 4;
    Rng rng(5);
    LabeledNodes labels;
    labels.label_names = {"a", "b", "c", "d"};
    std::vector<Eigen::RowVectorXf> rows;
    for (int i = 0; i < 2000; ++i) {
      rows.push_back(rowf({static_cast<float>(rng.gaussian()),
                           static_cast<float>(rng.gaussian())}));
      labels.labels.push_back({static_cast<int>(rng.below(k))});
    }
    const EmbeddingModel m = model_from_rows(rows);
    double total = 0.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed)
      total += classification_eval(m, labels, 0.5, ClassifyMode::Multiclass,
                                   seed)
                   .micro;
    CHECK(std::abs(total / 5.0 - 1.0 / k) < 0.05);
  }
  SUBCASE("trained embeddings classify cliques from a 10% split") {
    const Graph g = two_cliques(30, 30, true);
    const Graph rev = reverse(g);
    TrainConfig cfg;
    cfg.dim = 8;
    cfg.epochs = 200;
    cfg.lr0 = 0.05f;
    const EmbeddingModel m =
        train_verse(g, &rev, {SimilarityKind::Ppr, 0.85}, cfg);
    LabeledNodes labels;
    labels.label_names = {"a", "b"};
    for (NodeId u = 0; u < 60; ++u) labels.labels.push_back({u < 30 ? 0 : 1});
    const F1Scores f1 =
        classification_eval(m, labels, 0.1, ClassifyMode::Multiclass, 7);
    CHECK(f1.micro >= 0.95);
  }
  SUBCASE("too few labeled nodes rejected") {
    const EmbeddingModel m = init_model(20, 2, ProximityOrder::First, 1);
    LabeledNodes labels;
    labels.labels.assign(20, {});
    labels.label_names = {"x"};
    labels.labels[0] = {0};
    CHECK_THROWS_AS(
        classification_eval(m, labels, 0.5, ClassifyMode::Multiclass, 1),
        std::invalid_argument);
  }
}

TEST_CASE("load_labels parses tokens and label sets") {
  TempFile file("labels.tsv");
  file.write("0\tred\n2\tblue,red\n# comment\n");
  const LabeledNodes labels = load_labels(file.path(), 4);
  CHECK(labels.label_count() == 2);
  CHECK(labels.labels[0] == std::vector<int>{0});
  CHECK(labels.labels[2] == std::vector<int>{1, 0});
  CHECK(labels.labels[1].empty());
  SUBCASE("vocabulary join") {
    TempFile vfile("labels.vocab.tsv");
    vfile.write("alice\tred\n");
    const LabeledNodes named =
        load_labels(vfile.path(), 2, {"bob", "alice"});
    CHECK(named.labels[1] == std::vector<int>{0});
  }
  SUBCASE("bad node index") {
    TempFile bad("labels.bad.tsv");
    bad.write("9\tred\n");
    CHECK_THROWS_AS(load_labels(bad.path(), 4), std::runtime_error);
  }
}

TEST_CASE("kmeans") {
  SUBCASE("two separated clouds") {
    Rng rng(6);
    EmbeddingMatrix pts(40, 2);
    for (int i = 0; i < 40; ++i) {
      const float cx = i < 20 ? -10.0f : 10.0f;
      pts(i, 0) = cx + static_cast<float>(rng.gaussian()) * 0.1f;
      pts(i, 1) = static_cast<float>(rng.gaussian()) * 0.1f;
    }
    const std::vector<int> a = kmeans(pts, 2, 1);
    for (int i = 1; i < 20; ++i) CHECK(a[i] == a[0]);
    for (int i = 21; i < 40; ++i) CHECK(a[i] == a[20]);
    CHECK(a[0] != a[20]);
  }
  SUBCASE("identical points terminate in one cluster") {
    const EmbeddingMatrix pts = EmbeddingMatrix::Ones(10, 3);
    const std::vector<int> a = kmeans(pts, 2, 3);
    for (int i = 1; i < 10; ++i) CHECK(a[i] == a[0]);
  }
  SUBCASE("k = n puts every distinct point alone") {
    EmbeddingMatrix pts(5, 1);
    pts << 0, 10, 20, 30, 40;
    const std::vector<int> a = kmeans(pts, 5, 2);
    std::set<int> distinct(a.begin(), a.end());
    CHECK(distinct.size() == 5);
    // inertia 0: every point sits on its centroid
  }
  SUBCASE("k > n rejected") {
    const EmbeddingMatrix pts = EmbeddingMatrix::Zero(3, 2);
    CHECK_THROWS_AS(kmeans(pts, 4, 1), std::invalid_argument);
  }
}

TEST_CASE("nmi") {
  SUBCASE("identical partitions") {
    const std::vector<int> a = {0, 0, 1, 1, 2, 2};
    CHECK(nmi(a, a) == doctest::Approx(1.0));
  }
  SUBCASE("relabeling is invisible") {
    const std::vector<int> a = {0, 0, 1, 1, 2, 2};
    const std::vector<int> b = {5, 5, 9, 9, 7, 7};
    CHECK(nmi(a, b) == doctest::Approx(1.0));
  }
  SUBCASE("independent random partitions score near zero") {
    Rng rng(8);
    std::vector<int> a(10000), b(10000);
    for (size_t i = 0; i < a.size(); ++i) {
      a[i] = static_cast<int>(rng.below(2));
      b[i] = static_cast<int>(rng.below(2));
    }
    CHECK(nmi(a, b) < 0.01);
  }
  SUBCASE("entropy conventions") {
    const std::vector<int> flat = {0, 0, 0};
    const std::vector<int> split = {0, 1, 2};
    CHECK(nmi(flat, flat) == 1.0);
    CHECK(nmi(flat, split) == 0.0);
  }
  SUBCASE("length mismatch") {
    const std::vector<int> a = {0, 1};
    const std::vector<int> b = {0};
    CHECK_THROWS_AS(nmi(a, b), std::invalid_argument);
  }
}

TEST_CASE("modularity") {
  SUBCASE("two disjoint triangles split perfectly") {
    const Graph g = two_cliques(3, 3, false);
    const std::vector<int> assignment = {0, 0, 0, 1, 1, 1};
    CHECK(modularity(g, assignment) == doctest::Approx(0.5));
  }
  SUBCASE("single community scores zero") {
    const Graph g = two_cliques(3, 3, true);
    const std::vector<int> assignment(6, 0);
    CHECK(modularity(g, assignment) == doctest::Approx(0.0));
  }
  SUBCASE("random balanced split of a random graph is near zero") {
    const Graph g = undirected_graph(
        200, [] {
          Rng rng(12);
          std::vector<std::pair<NodeId, NodeId>> edges;
          for (int e = 0; e < 2000; ++e) {
            NodeId u = static_cast<NodeId>(rng.below(200));
            NodeId v = static_cast<NodeId>(rng.below(200));
            if (u != v) edges.emplace_back(u, v);
          }
          return edges;
        }());
    std::vector<int> assignment(200);
    for (int i = 0; i < 200; ++i) assignment[i] = i % 2;
    CHECK(std::abs(modularity(g, assignment)) < 0.05);
  }
  SUBCASE("relabeling is invisible") {
    const Graph g = two_cliques(4, 4, true);
    const std::vector<int> a = {0, 0, 0, 0, 1, 1, 1, 1};
    const std::vector<int> b = {7, 7, 7, 7, 3, 3, 3, 3};
    CHECK(modularity(g, a) == doctest::Approx(modularity(g, b)));
  }
}

TEST_CASE("graph_reconstruction") {
  SUBCASE("adjacency indicator embeddings are perfect on cliques") {
    const Graph g = two_cliques(5, 5, false);
    EmbeddingModel m;
    m.w = EmbeddingMatrix::Zero(10, 10);
    for (NodeId u = 0; u < 10; ++u)
      for (NodeId v : g.neighbors(u)) m.w(u, v) = 1.0f;
    CHECK(graph_reconstruction(m, g, std::nullopt, 1) ==
          doctest::Approx(1.0));
  }
  SUBCASE("random embeddings on a sparse graph score low") {
    const Graph g = undirected_graph(400, [] {
      std::vector<std::pair<NodeId, NodeId>> edges;
      for (NodeId u = 0; u < 400; ++u)
        edges.emplace_back(u, (u + 1) % 400);  // ring
      return edges;
    }());
    const EmbeddingModel m =
        init_model(g.num_nodes(), 8, ProximityOrder::First, 9);
    CHECK(graph_reconstruction(m, g, std::nullopt, 1) < 0.05);
  }
  SUBCASE("sink nodes are excluded from the mean") {
    // 0 -> 1; node 1 contributes nothing.
    const Graph g =
        from_edges(2, std::vector<std::pair<NodeId, NodeId>>{{0, 1}});
    EmbeddingModel m;
    m.w = EmbeddingMatrix(2, 2);
    m.w << 1, 0, 1, 0;
    CHECK(graph_reconstruction(m, g, std::nullopt, 1) ==
          doctest::Approx(1.0));
  }
  SUBCASE("row rescaling and rotation are invisible") {
    const Graph g = two_cliques(6, 6, true);
    EmbeddingModel m = init_model(12, 4, ProximityOrder::First, 21);
    const double base = graph_reconstruction(m, g, std::nullopt, 1);
    EmbeddingModel scaled = m;
    for (NodeId u = 0; u < 12; ++u)
      scaled.w.row(u) *= 0.25f + 0.5f * static_cast<float>(u % 3);
    CHECK(graph_reconstruction(scaled, g, std::nullopt, 1) ==
          doctest::Approx(base));
    // Householder reflection as an orthogonal map.
    Eigen::VectorXf h(4);
    h << 1, 2, -1, 0.5f;
    h.normalize();
    const Eigen::MatrixXf q =
        Eigen::MatrixXf::Identity(4, 4) - 2.0f * h * h.transpose();
    EmbeddingModel rotated = m;
    rotated.w = m.w * q;
    CHECK(graph_reconstruction(rotated, g, std::nullopt, 1) ==
          doctest::Approx(base));
  }
}

TEST_CASE("ndcg_at_k") {
  SUBCASE("perfect prediction scores 1") {
    // Embeddings whose dot products reproduce the oracle order.
    EmbeddingModel m;
    m.w = EmbeddingMatrix::Identity(4, 4);  // W_u . W_v = [u == v]
    std::vector<std::pair<NodeId, Distribution>> rows;
    Distribution r = Distribution::Zero(4);
    r[1] = 0.5;
    r[2] = 0.3;
    r[3] = 0.2;
    rows.emplace_back(0, r);
    // identity embeddings give all-equal scores; tie-break by index matches
    // the oracle's descending order here
    CHECK(ndcg_at_k(m, rows, 3) == doctest::Approx(1.0));
  }
  SUBCASE("reversed top-2 with gains 1,0") {
    EmbeddingModel m;
    m.w = EmbeddingMatrix(3, 3);
    // scores from node 0: prefer node 2 over node 1
    m.w << 1, 0.1f, 0.9f,  //
        0.1f, 1, 0,        //
        0.9f, 0, 1;
    std::vector<std::pair<NodeId, Distribution>> rows;
    Distribution r = Distribution::Zero(3);
    r[1] = 1.0;  // true top-1 is node 1, predicted first is node 2
    rows.emplace_back(0, r);
    CHECK(ndcg_at_k(m, rows, 2) ==
          doctest::Approx(1.0 / std::log2(3.0)).epsilon(1e-9));
  }
  SUBCASE("uniform oracle makes every ranking ideal") {
    const EmbeddingModel m = init_model(6, 3, ProximityOrder::First, 4);
    std::vector<std::pair<NodeId, Distribution>> rows;
    Distribution r = Distribution::Constant(6, 1.0 / 5.0);
    r[2] = 0.0;  // uniform over the 5 candidates of node 2
    rows.emplace_back(2, r);
    CHECK(ndcg_at_k(m, rows, 3) == doctest::Approx(1.0));
  }
  SUBCASE("k bounds") {
    const EmbeddingModel m = init_model(4, 2, ProximityOrder::First, 1);
    std::vector<std::pair<NodeId, Distribution>> rows;
    rows.emplace_back(0, Distribution::Constant(4, 0.25));
    CHECK_THROWS_AS(ndcg_at_k(m, rows, 4), std::invalid_argument);
    CHECK_THROWS_AS(ndcg_at_k(m, rows, 0), std::invalid_argument);
  }
  SUBCASE("common positive rescaling is invisible") {
    const Graph g = karate_graph();
    const Graph rev = reverse(g);
    EmbeddingModel m = init_model(34, 6, ProximityOrder::First, 11);
    std::vector<std::pair<NodeId, Distribution>> rows;
    for (NodeId u = 0; u < 34; u += 7)
      rows.emplace_back(u, exact_row(g, rev, {SimilarityKind::Ppr, 0.85}, u));
    const double base = ndcg_at_k(m, rows, 10);
    m.w *= 3.5f;
    CHECK(ndcg_at_k(m, rows, 10) == doctest::Approx(base));
  }
}

TEST_CASE("hverse_sweep") {
  SUBCASE("full default grid has 26 cells") {
    CHECK(default_sweep_grid().size() == 26);
  }
  SUBCASE("single-cell grid returns that cell") {
    const Graph g = two_cliques(6, 6, true);
    SweepConfig cfg;
    cfg.task = SweepTask::Reconstruct;
    cfg.grid = {{SimilarityKind::Ppr, 0.85, ProximityOrder::First}};
    cfg.train.dim = 4;
    cfg.train.epochs = 20;
    cfg.train.lr0 = 0.05f;
    int cells_seen = 0;
    const SweepResult result = hverse_sweep(
        g, nullptr, cfg, [&](const SweepCell&) { ++cells_seen; });
    CHECK(cells_seen == 1);
    CHECK(result.table.size() == 1);
    CHECK(result.best.kind == SimilarityKind::Ppr);
    CHECK(result.best_score == result.table[0].score);
  }
  SUBCASE("adjacency wins reconstruction on cliques") {
    const Graph g = two_cliques(8, 8, false);
    int wins = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
      SweepConfig cfg;
      cfg.task = SweepTask::Reconstruct;
      cfg.grid = {{SimilarityKind::Adjacency, 0.0, ProximityOrder::First}};
      for (double alpha : {0.45, 0.55, 0.65, 0.75, 0.85, 0.95})
        cfg.grid.push_back({SimilarityKind::Ppr, alpha, ProximityOrder::First});
      cfg.train.dim = 8;
      cfg.train.epochs = 150;
      cfg.train.lr0 = 0.05f;
      cfg.train.seed = seed;
      const SweepResult result = hverse_sweep(g, nullptr, cfg);
      const double adj_score = result.table[0].score;
      const bool adj_at_least_every_ppr = std::all_of(
          result.table.begin() + 1, result.table.end(),
          [&](const SweepCell& c) { return adj_score >= c.score; });
      wins += adj_at_least_every_ppr;
    }
    CHECK(wins >= 8);
  }
  SUBCASE("classify task cross-validates") {
    const Graph g = two_cliques(12, 12, true);
    LabeledNodes labels;
    labels.label_names = {"a", "b"};
    for (NodeId u = 0; u < 24; ++u) labels.labels.push_back({u < 12 ? 0 : 1});
    SweepConfig cfg;
    cfg.task = SweepTask::Classify;
    cfg.labels = &labels;
    cfg.grid = {{SimilarityKind::Ppr, 0.85, ProximityOrder::First}};
    cfg.train.dim = 8;
    cfg.train.epochs = 150;
    cfg.train.lr0 = 0.05f;
    const SweepResult result = hverse_sweep(g, nullptr, cfg);
    CHECK(result.best_score >= 0.9);
  }
}
