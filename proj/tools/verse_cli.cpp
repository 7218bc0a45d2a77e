// Command-line surface for graph embedding runs: ingestion, training,
// evaluation, similarity sweeps, oracle dumps, and synthetic graphs.
//
// Exit codes: 0 success, 1 usage error, 2 input error, 3 resource cap
// exceeded.

#include "verse/errors.hpp"
#include "verse/eval.hpp"
#include "verse/generators.hpp"
#include "verse/graph.hpp"
#include "verse/manifest.hpp"
#include "verse/model_io.hpp"
#include "verse/similarity.hpp"
#include "verse/sweep.hpp"
#include "verse/trainer.hpp"

#include <CLI11.hpp>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

namespace {

using namespace verse;

std::string g_command_line;

class Stopwatch {
 public:
  double seconds() const {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now() - start_)
        .count();
  }

 private:
  std::chrono::steady_clock::time_point start_ =
      std::chrono::steady_clock::now();
};

// Failed runs must not leave partial primary outputs behind, so files are
// staged and renamed into place.
class StagedFile {
 public:
  explicit StagedFile(std::string path)
      : final_(std::move(path)), tmp_(final_ + ".tmp") {}
  const std::string& path() const { return tmp_; }
  void commit() {
    if (std::rename(tmp_.c_str(), final_.c_str()) != 0)
      throw std::runtime_error("cannot move '" + tmp_ + "' into place");
    committed_ = true;
  }
  ~StagedFile() {
    if (!committed_) std::remove(tmp_.c_str());
  }

 private:
  std::string final_, tmp_;
  bool committed_ = false;
};

struct GraphArgs {
  std::string path;
  bool remap = false;
  bool symmetrize = false;

  Graph load() const { return load_edge_list(path, {remap, symmetrize}); }
};

void add_graph_flags(CLI::App* cmd, GraphArgs& args,
                     const std::string& flag = "--input") {
  cmd->add_option(flag, args.path, "edge-list file")->required();
  cmd->add_flag("--remap", args.remap,
                "assign indices to arbitrary tokens in first-appearance "
                "order");
  cmd->add_flag("--symmetrize", args.symmetrize,
                "emit both directions of every input edge");
}

struct ReportRow {
  std::string task, metric;
  double value;
  std::string spec;
  std::string order;
  std::uint64_t seed;
};

void write_report(const std::string& path, const std::vector<ReportRow>& rows) {
  StagedFile staged(path);
  {
    std::ofstream out(staged.path());
    if (!out) throw std::runtime_error("cannot write report '" + path + "'");
    out << "task,metric,value,spec,order,seed\n";
    char buf[64];
    for (const auto& row : rows) {
      std::snprintf(buf, sizeof buf, "%.6g", row.value);
      out << row.task << ',' << row.metric << ',' << buf << ',' << row.spec
          << ',' << row.order << ',' << row.seed << '\n';
    }
  }
  staged.commit();
}

struct Stats {
  double mean = 0.0, sd = 0.0;
};

Stats stats_of(const std::vector<double>& values) {
  Stats s;
  if (values.empty()) return s;
  for (double v : values) s.mean += v;
  s.mean /= static_cast<double>(values.size());
  if (values.size() > 1) {
    double ss = 0.0;
    for (double v : values) ss += (v - s.mean) * (v - s.mean);
    s.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
  }
  return s;
}

void print_stat(const std::string& prefix, const Stats& s) {
  std::printf("%s.mean=%.6g\n%s.sd=%.6g\n", prefix.c_str(), s.mean,
              prefix.c_str(), s.sd);
}

RunManifest base_manifest(std::uint64_t seed) {
  RunManifest m;
  m.command_line = g_command_line;
  m.seed = seed;
  return m;
}

void finish_manifest(RunManifest& m, const Stopwatch& watch,
                     const std::string& primary_output) {
  m.duration_seconds = watch.seconds();
  m.outputs.insert(m.outputs.begin(), primary_output);
  write_manifest(m, manifest_path_for(primary_output));
}

// ---------------------------------------------------------------------------
// train

struct TrainArgs {
  GraphArgs graph;
  std::string output;
  std::string similarity = "ppr:0.85";
  int order = 1;
  TrainConfig cfg;
  bool full = false;
  std::string format = "verse";
  bool concat = false;
};

void run_train(const TrainArgs& args) {
  Stopwatch watch;
  SimilaritySpec spec = parse_similarity(args.similarity);
  if (args.order != 1 && args.order != 2)
    throw std::invalid_argument("--order must be 1 or 2");
  spec.order = args.order == 2 ? ProximityOrder::Second : ProximityOrder::First;
  validate(args.cfg);
  const ModelFormat format = parse_model_format(args.format);

  const Graph g = args.graph.load();
  std::optional<Graph> rev;
  if (spec.kind == SimilarityKind::SimRank) rev = reverse(g);

  const EmbeddingModel model =
      args.full
          ? train_fverse(g, rev ? &*rev : nullptr, spec, args.cfg)
          : train_verse(g, rev ? &*rev : nullptr, spec, args.cfg);

  RunManifest manifest = base_manifest(args.cfg.seed);
  manifest.input_digests[args.graph.path] = file_digest(args.graph.path);
  manifest.config = {
      {"similarity", to_string(spec)},
      {"order", std::to_string(args.order)},
      {"dim", std::to_string(args.cfg.dim)},
      {"negatives", std::to_string(args.cfg.negatives)},
      {"epochs", std::to_string(args.cfg.epochs)},
      {"lr", std::to_string(args.cfg.lr0)},
      {"lr_floor", std::to_string(args.cfg.lr_floor)},
      {"threads", std::to_string(args.cfg.threads)},
      {"full", args.full ? "true" : "false"},
      {"freeze_targets", args.cfg.freeze_targets ? "true" : "false"},
      {"symmetrize", args.graph.symmetrize ? "true" : "false"},
      {"remap", args.graph.remap ? "true" : "false"},
      {"format", args.format},
      {"concat", args.concat ? "true" : "false"},
      {"nodes", std::to_string(g.num_nodes())},
      {"edges", std::to_string(g.num_edges())},
  };

  {
    StagedFile staged(args.output);
    save_model(model, staged.path(), format, args.concat);
    staged.commit();
  }
  if (args.graph.remap) {
    const std::string vocab_path = args.output + ".vocab";
    StagedFile staged(vocab_path);
    save_vocabulary(g, staged.path());
    staged.commit();
    manifest.outputs.push_back(vocab_path);
  }
  finish_manifest(manifest, watch, args.output);
  std::printf("train.nodes=%u\ntrain.edges=%llu\ntrain.seconds=%.3f\n",
              g.num_nodes(),
              static_cast<unsigned long long>(g.num_edges()),
              watch.seconds());
}

// ---------------------------------------------------------------------------
// eval

struct EvalCommon {
  GraphArgs graph;
  std::string embedding;
  std::string format = "verse";
  NodeId raw_nodes = 0;
  int raw_dim = 0;
  std::string out;
  int repeats = 10;
  std::uint64_t seed = 1;

  EmbeddingModel load_model_checked(NodeId expected_nodes) const {
    EmbeddingModel model =
        load_model(embedding, parse_model_format(format), raw_nodes, raw_dim);
    if (expected_nodes != 0 && model.num_nodes() != expected_nodes)
      throw std::runtime_error(
          "embedding covers " + std::to_string(model.num_nodes()) +
          " nodes but the graph has " + std::to_string(expected_nodes));
    return model;
  }

  std::string report_path(const std::string& task) const {
    return out.empty() ? embedding + "." + task + ".csv" : out;
  }
};

void add_eval_flags(CLI::App* cmd, EvalCommon& args, bool graph_required) {
  if (graph_required) {
    add_graph_flags(cmd, args.graph, "--graph");
  } else {
    cmd->add_option("--graph", args.graph.path, "edge-list file")
        ;
    cmd->add_flag("--remap", args.graph.remap, "remap tokens");
    cmd->add_flag("--symmetrize", args.graph.symmetrize, "symmetrize edges");
  }
  cmd->add_option("--embedding", args.embedding, "embedding file")
      ->required();
  cmd->add_option("--format", args.format, "embedding format")
      ->check(CLI::IsMember({"verse", "raw", "text"}));
  cmd->add_option("--raw-nodes", args.raw_nodes, "node count for raw format");
  cmd->add_option("--raw-dim", args.raw_dim, "dimension for raw format");
  cmd->add_option("--out", args.out, "report CSV path");
  cmd->add_option("--repeats", args.repeats, "evaluation repeats")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--seed", args.seed, "base seed; repeat r uses seed+r");
}

void finish_eval(const EvalCommon& args, const std::string& task,
                 const Stopwatch& watch, std::vector<ReportRow> rows,
                 const std::map<std::string, std::string>& config) {
  const std::string path = args.report_path(task);
  write_report(path, rows);
  RunManifest manifest = base_manifest(args.seed);
  manifest.config = config;
  manifest.config["repeats"] = std::to_string(args.repeats);
  manifest.input_digests[args.embedding] = file_digest(args.embedding);
  if (!args.graph.path.empty())
    manifest.input_digests[args.graph.path] = file_digest(args.graph.path);
  finish_manifest(manifest, watch, path);
}

struct LinkPredArgs {
  EvalCommon common;
  std::string op = "hadamard";
  double test_fraction = 0.3;
  double neg_ratio = 1.0;
};

void run_eval_linkpred(const LinkPredArgs& args) {
  Stopwatch watch;
  const EdgeOperator op = parse_edge_operator(args.op);
  const Graph g = args.common.graph.load();
  const EmbeddingModel model = args.common.load_model_checked(g.num_nodes());

  std::vector<ReportRow> rows;
  std::vector<double> values;
  for (int r = 0; r < args.common.repeats; ++r) {
    const std::uint64_t seed = args.common.seed + r;
    const LinkPredictionSplit split =
        make_link_prediction_split(g, args.test_fraction, args.neg_ratio, seed);
    const double acc =
        link_prediction_eval(model, split.train_pos, split.train_neg,
                             split.test_pos, split.test_neg, op, seed);
    values.push_back(acc);
    rows.push_back({"linkpred", "accuracy", acc, args.op, "-", seed});
  }
  const Stats s = stats_of(values);
  rows.push_back({"linkpred", "accuracy_mean", s.mean, args.op, "-",
                  args.common.seed});
  rows.push_back(
      {"linkpred", "accuracy_sd", s.sd, args.op, "-", args.common.seed});
  print_stat("linkpred.accuracy", s);
  finish_eval(args.common, "linkpred", watch, rows,
              {{"op", args.op},
               {"test_fraction", std::to_string(args.test_fraction)},
               {"neg_ratio", std::to_string(args.neg_ratio)}});
}

struct ClassifyArgs {
  EvalCommon common;
  std::string labels_path;
  std::string vocab_path;
  double train_fraction = 0.1;
  std::string mode = "multiclass";
};

void run_eval_classify(const ClassifyArgs& args) {
  Stopwatch watch;
  const ClassifyMode mode = args.mode == "multilabel"
                                ? ClassifyMode::Multilabel
                                : ClassifyMode::Multiclass;
  const EmbeddingModel model = args.common.load_model_checked(0);
  std::vector<std::string> vocab;
  if (!args.vocab_path.empty()) vocab = load_vocabulary(args.vocab_path);
  const LabeledNodes labels =
      load_labels(args.labels_path, model.num_nodes(), vocab);

  std::vector<ReportRow> rows;
  std::vector<double> micro, macro;
  for (int r = 0; r < args.common.repeats; ++r) {
    const std::uint64_t seed = args.common.seed + r;
    const F1Scores f1 =
        classification_eval(model, labels, args.train_fraction, mode, seed);
    micro.push_back(f1.micro);
    macro.push_back(f1.macro);
    rows.push_back({"classify", "micro_f1", f1.micro, args.mode, "-", seed});
    rows.push_back({"classify", "macro_f1", f1.macro, args.mode, "-", seed});
  }
  const Stats sm = stats_of(micro), sM = stats_of(macro);
  rows.push_back(
      {"classify", "micro_f1_mean", sm.mean, args.mode, "-", args.common.seed});
  rows.push_back(
      {"classify", "micro_f1_sd", sm.sd, args.mode, "-", args.common.seed});
  rows.push_back(
      {"classify", "macro_f1_mean", sM.mean, args.mode, "-", args.common.seed});
  rows.push_back(
      {"classify", "macro_f1_sd", sM.sd, args.mode, "-", args.common.seed});
  print_stat("classify.micro_f1", sm);
  print_stat("classify.macro_f1", sM);
  if (mode == ClassifyMode::Multilabel)
    std::printf(
        "classify.note=one-vs-rest multilabel (powerset not implemented)\n");
  finish_eval(args.common, "classify", watch, rows,
              {{"labels", args.labels_path},
               {"train_fraction", std::to_string(args.train_fraction)},
               {"mode", args.mode}});
}

struct ClusterArgs {
  EvalCommon common;
  std::string labels_path;
  std::string vocab_path;
  int k = 0;  // 0 = search k_min..k_max for best modularity
  int k_min = 2, k_max = 50, k_step = 1;
};

void run_eval_cluster(const ClusterArgs& args) {
  Stopwatch watch;
  const Graph g = args.common.graph.load();
  const EmbeddingModel model = args.common.load_model_checked(g.num_nodes());
  std::optional<LabeledNodes> labels;
  if (!args.labels_path.empty()) {
    std::vector<std::string> vocab;
    if (!args.vocab_path.empty()) vocab = load_vocabulary(args.vocab_path);
    labels = load_labels(args.labels_path, g.num_nodes(), vocab);
  }

  std::vector<ReportRow> rows;
  std::vector<double> mod_values, nmi_values;
  int best_k = args.k;
  for (int r = 0; r < args.common.repeats; ++r) {
    const std::uint64_t seed = args.common.seed + r;
    std::vector<int> assignment;
    double mod = 0.0;
    if (args.k > 0) {
      assignment = kmeans(model.w, args.k, seed);
      mod = modularity(g, assignment);
    } else {
      mod = -1.0;
      for (int k = args.k_min;
           k <= std::min<int>(args.k_max, g.num_nodes()); k += args.k_step) {
        std::vector<int> cand = kmeans(model.w, k, seed);
        const double q = modularity(g, cand);
        if (q > mod) {
          mod = q;
          assignment = std::move(cand);
          best_k = k;
        }
      }
    }
    mod_values.push_back(mod);
    rows.push_back({"cluster", "modularity", mod, "-", "-", seed});
    if (labels) {
      std::vector<int> truth(g.num_nodes(), -1);
      for (NodeId u = 0; u < g.num_nodes(); ++u)
        if (!labels->labels[u].empty()) truth[u] = labels->labels[u].front();
      const double score = nmi(assignment, truth);
      nmi_values.push_back(score);
      rows.push_back({"cluster", "nmi", score, "-", "-", seed});
    }
  }
  const Stats sq = stats_of(mod_values);
  rows.push_back({"cluster", "modularity_mean", sq.mean, "-", "-",
                  args.common.seed});
  rows.push_back(
      {"cluster", "modularity_sd", sq.sd, "-", "-", args.common.seed});
  print_stat("cluster.modularity", sq);
  if (args.k == 0) std::printf("cluster.best_k=%d\n", best_k);
  if (labels) {
    const Stats sn = stats_of(nmi_values);
    rows.push_back(
        {"cluster", "nmi_mean", sn.mean, "-", "-", args.common.seed});
    rows.push_back({"cluster", "nmi_sd", sn.sd, "-", "-", args.common.seed});
    print_stat("cluster.nmi", sn);
  }
  finish_eval(args.common, "cluster", watch, rows,
              {{"k", std::to_string(args.k)},
               {"k_min", std::to_string(args.k_min)},
               {"k_max", std::to_string(args.k_max)},
               {"k_step", std::to_string(args.k_step)},
               {"labels", args.labels_path}});
}

struct ReconstructArgs {
  EvalCommon common;
  NodeId sample_nodes = 0;  // 0 = all nodes
};

void run_eval_reconstruct(const ReconstructArgs& args) {
  Stopwatch watch;
  const Graph g = args.common.graph.load();
  const EmbeddingModel model = args.common.load_model_checked(g.num_nodes());

  std::vector<ReportRow> rows;
  std::vector<double> values;
  const std::optional<NodeId> sample =
      args.sample_nodes > 0 ? std::optional<NodeId>(args.sample_nodes)
                            : std::nullopt;
  const int repeats = sample ? args.common.repeats : 1;  // full eval is exact
  for (int r = 0; r < repeats; ++r) {
    const std::uint64_t seed = args.common.seed + r;
    const double precision = graph_reconstruction(model, g, sample, seed);
    values.push_back(precision);
    rows.push_back({"reconstruct", "precision", precision, "-", "-", seed});
  }
  const Stats s = stats_of(values);
  rows.push_back(
      {"reconstruct", "precision_mean", s.mean, "-", "-", args.common.seed});
  rows.push_back(
      {"reconstruct", "precision_sd", s.sd, "-", "-", args.common.seed});
  print_stat("reconstruct.precision", s);
  finish_eval(args.common, "reconstruct", watch, rows,
              {{"sample_nodes", std::to_string(args.sample_nodes)}});
}

struct NdcgArgs {
  EvalCommon common;
  std::string similarity = "ppr:0.85";
  int k = 10;
  NodeId sample_nodes = 0;
};

void run_eval_ndcg(const NdcgArgs& args) {
  Stopwatch watch;
  const SimilaritySpec spec = parse_similarity(args.similarity);
  const Graph g = args.common.graph.load();
  const EmbeddingModel model = args.common.load_model_checked(g.num_nodes());
  const Graph rev = reverse(g);

  std::vector<NodeId> nodes(g.num_nodes());
  for (NodeId u = 0; u < g.num_nodes(); ++u) nodes[u] = u;

  std::vector<ReportRow> rows;
  std::vector<double> values;
  const bool sampled =
      args.sample_nodes > 0 && args.sample_nodes < g.num_nodes();
  const int repeats = sampled ? args.common.repeats : 1;
  for (int r = 0; r < repeats; ++r) {
    const std::uint64_t seed = args.common.seed + r;
    std::vector<NodeId> chosen = nodes;
    if (sampled) {
      Rng rng(seed);
      for (size_t i = chosen.size(); i > 1; --i)
        std::swap(chosen[i - 1], chosen[rng.below(i)]);
      chosen.resize(args.sample_nodes);
    }
    std::vector<std::pair<NodeId, Distribution>> oracle;
    oracle.reserve(chosen.size());
    for (NodeId u : chosen) oracle.emplace_back(u, exact_row(g, rev, spec, u));
    const double score = ndcg_at_k(model, oracle, args.k);
    values.push_back(score);
    rows.push_back(
        {"ndcg", "ndcg@" + std::to_string(args.k), score, to_string(spec),
         "-", seed});
  }
  const Stats s = stats_of(values);
  rows.push_back({"ndcg", "ndcg@" + std::to_string(args.k) + "_mean", s.mean,
                  to_string(spec), "-", args.common.seed});
  rows.push_back({"ndcg", "ndcg@" + std::to_string(args.k) + "_sd", s.sd,
                  to_string(spec), "-", args.common.seed});
  print_stat("ndcg.ndcg_at_" + std::to_string(args.k), s);
  finish_eval(args.common, "ndcg", watch, rows,
              {{"similarity", to_string(spec)},
               {"k", std::to_string(args.k)},
               {"sample_nodes", std::to_string(args.sample_nodes)}});
}

// ---------------------------------------------------------------------------
// sweep

struct SweepArgs {
  GraphArgs graph;
  std::string task = "reconstruct";
  std::string output;
  std::string table;
  std::vector<std::string> grid;
  std::string labels_path, vocab_path;
  std::string op = "hadamard";
  int cluster_k = 2;
  double train_fraction = 0.5;
  double test_fraction = 0.3;
  int order = 0;  // 0 = both orders when expanding a restricted grid
  TrainConfig cfg;
};

void run_sweep(const SweepArgs& args) {
  Stopwatch watch;
  SweepConfig cfg;
  cfg.task = parse_sweep_task(args.task);
  cfg.train = args.cfg;
  validate(cfg.train);
  cfg.op = parse_edge_operator(args.op);
  cfg.cluster_k = args.cluster_k;
  cfg.train_fraction = args.train_fraction;
  cfg.test_fraction = args.test_fraction;

  for (const std::string& text : args.grid) {
    SimilaritySpec spec = parse_similarity(text);
    if (args.order == 0 || args.order == 1) {
      spec.order = ProximityOrder::First;
      cfg.grid.push_back(spec);
    }
    if (args.order == 0 || args.order == 2) {
      spec.order = ProximityOrder::Second;
      cfg.grid.push_back(spec);
    }
  }

  const Graph g = args.graph.load();
  std::optional<LabeledNodes> labels;
  if (!args.labels_path.empty()) {
    std::vector<std::string> vocab;
    if (!args.vocab_path.empty()) vocab = load_vocabulary(args.vocab_path);
    labels = load_labels(args.labels_path, g.num_nodes(), vocab);
    cfg.labels = &*labels;
  }

  const std::string table_path =
      args.table.empty() ? args.output + ".table.csv" : args.table;
  std::ofstream table(table_path);
  if (!table)
    throw std::runtime_error("cannot write table '" + table_path + "'");
  table << "task,metric,value,spec,order,seed\n" << std::flush;

  // The table is flushed per completed cell so interrupted runs keep their
  // partial results.
  const auto on_cell = [&](const SweepCell& cell) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.6g", cell.score);
    table << args.task << ",score," << buf << ',' << to_string(cell.spec)
          << ',' << (cell.spec.order == ProximityOrder::Second ? 2 : 1) << ','
          << args.cfg.seed << '\n'
          << std::flush;
    std::printf("sweep.cell spec=%s order=%d score=%.6g\n",
                to_string(cell.spec).c_str(),
                cell.spec.order == ProximityOrder::Second ? 2 : 1, cell.score);
  };

  const SweepResult result = hverse_sweep(g, nullptr, cfg, on_cell);

  {
    StagedFile staged(args.output);
    save_model(result.best_model, staged.path());
    staged.commit();
  }
  std::printf("sweep.best.spec=%s\nsweep.best.order=%d\nsweep.best.score=%.6g\n",
              to_string(result.best).c_str(),
              result.best.order == ProximityOrder::Second ? 2 : 1,
              result.best_score);

  RunManifest manifest = base_manifest(args.cfg.seed);
  manifest.config = {
      {"task", args.task},
      {"grid_cells", std::to_string(result.table.size())},
      {"best_spec", to_string(result.best)},
      {"best_order",
       std::to_string(result.best.order == ProximityOrder::Second ? 2 : 1)},
      {"dim", std::to_string(args.cfg.dim)},
      {"epochs", std::to_string(args.cfg.epochs)},
      {"threads", std::to_string(args.cfg.threads)},
  };
  manifest.input_digests[args.graph.path] = file_digest(args.graph.path);
  manifest.outputs.push_back(table_path);
  finish_manifest(manifest, watch, args.output);
}

// ---------------------------------------------------------------------------
// oracle

struct OracleArgs {
  GraphArgs graph;
  std::string similarity = "ppr:0.85";
  std::string nodes;  // comma-separated list; empty = all
  std::string output;
};

void run_oracle(const OracleArgs& args) {
  Stopwatch watch;
  const SimilaritySpec spec = parse_similarity(args.similarity);
  const Graph g = args.graph.load();
  const Graph rev = reverse(g);

  std::vector<NodeId> nodes;
  if (args.nodes.empty()) {
    nodes.resize(g.num_nodes());
    for (NodeId u = 0; u < g.num_nodes(); ++u) nodes[u] = u;
  } else {
    std::stringstream list(args.nodes);
    std::string token;
    while (std::getline(list, token, ',')) {
      const unsigned long u = std::stoul(token);
      if (u >= g.num_nodes())
        throw std::runtime_error("node " + token + " >= node count " +
                                 std::to_string(g.num_nodes()));
      nodes.push_back(static_cast<NodeId>(u));
    }
  }

  {
    StagedFile staged(args.output);
    std::ofstream out(staged.path());
    if (!out)
      throw std::runtime_error("cannot write oracle dump '" + args.output +
                               "'");
    char buf[32];
    for (NodeId u : nodes) {
      const Distribution row = exact_row(g, rev, spec, u);
      for (NodeId v = 0; v < g.num_nodes(); ++v) {
        if (row[v] <= 0.0) continue;
        std::snprintf(buf, sizeof buf, "%.6g", row[v]);
        out << u << ' ' << v << ' ' << buf << '\n';
      }
    }
    if (!out) throw std::runtime_error("write failed for '" + args.output + "'");
    staged.commit();
  }

  RunManifest manifest = base_manifest(0);
  manifest.config = {{"similarity", to_string(spec)},
                     {"nodes", args.nodes.empty() ? "all" : args.nodes}};
  manifest.input_digests[args.graph.path] = file_digest(args.graph.path);
  finish_manifest(manifest, watch, args.output);
}

// ---------------------------------------------------------------------------
// gen

struct GenWsArgs {
  NodeId nodes = 1000;
  int k = 10;
  double beta = 0.05;
  std::uint64_t seed = 1;
  std::string output;
};

void run_gen_ws(const GenWsArgs& args) {
  Stopwatch watch;
  const Graph g = watts_strogatz(args.nodes, args.k, args.beta, args.seed);
  {
    StagedFile staged(args.output);
    save_edge_list(g, staged.path());
    staged.commit();
  }
  RunManifest manifest = base_manifest(args.seed);
  manifest.config = {{"model", "watts-strogatz"},
                     {"nodes", std::to_string(args.nodes)},
                     {"k", std::to_string(args.k)},
                     {"beta", std::to_string(args.beta)}};
  finish_manifest(manifest, watch, args.output);
  std::printf("gen.nodes=%u\ngen.edges=%llu\n", g.num_nodes(),
              static_cast<unsigned long long>(g.num_edges()));
}

void add_train_config_flags(CLI::App* cmd, TrainConfig& cfg) {
  cmd->add_option("--dim", cfg.dim, "embedding dimensionality");
  cmd->add_option("--negatives", cfg.negatives, "noise samples per positive");
  cmd->add_option("--epochs", cfg.epochs, "epochs (n updates each)");
  cmd->add_option("--lr", cfg.lr0, "initial learning rate");
  cmd->add_option("--lr-floor", cfg.lr_floor, "final learning rate");
  cmd->add_option("--threads", cfg.threads, "worker threads");
  cmd->add_option("--seed", cfg.seed, "random seed");
}

}  // namespace

int main(int argc, char** argv) {
  std::ostringstream echo;
  for (int i = 0; i < argc; ++i) echo << (i ? " " : "") << argv[i];
  g_command_line = echo.str();

  CLI::App app{"similarity-preserving graph embeddings"};
  app.require_subcommand(1);

  TrainArgs train_args;
  auto* train = app.add_subcommand("train", "learn an embedding");
  add_graph_flags(train, train_args.graph);
  train->add_option("--output", train_args.output, "embedding output path")
      ->required();
  train->add_option("--similarity", train_args.similarity,
                    "ppr[:alpha] | adj | simrank[:C]");
  train->add_option("--order", train_args.order, "proximity order (1 or 2)");
  add_train_config_flags(train, train_args.cfg);
  train->add_flag("--full", train_args.full,
                  "exact full-distribution training (small graphs)");
  train->add_flag("--freeze-targets", train_args.cfg.freeze_targets,
                  "full mode: update only source rows");
  train->add_option("--format", train_args.format, "verse | raw | text")
      ->check(CLI::IsMember({"verse", "raw", "text"}));
  train->add_flag("--concat", train_args.concat,
                  "write [W || W'] for second-order models");
  train->callback([&] { run_train(train_args); });

  auto* eval = app.add_subcommand("eval", "evaluate an embedding");
  eval->require_subcommand(1);

  LinkPredArgs lp_args;
  auto* lp = eval->add_subcommand("linkpred", "link prediction accuracy");
  add_eval_flags(lp, lp_args.common, true);
  lp->add_option("--op", lp_args.op,
                 "edge operator: average|concat|hadamard|l1|l2");
  lp->add_option("--test-fraction", lp_args.test_fraction,
                 "held-out edge fraction");
  lp->add_option("--neg-ratio", lp_args.neg_ratio,
                 "negatives per positive");
  lp->callback([&] { run_eval_linkpred(lp_args); });

  ClassifyArgs cls_args;
  auto* cls = eval->add_subcommand("classify", "node classification F1");
  add_eval_flags(cls, cls_args.common, false);
  cls->add_option("--labels", cls_args.labels_path, "labels file")
      ->required();
  cls->add_option("--vocab", cls_args.vocab_path, "vocabulary file");
  cls->add_option("--train-fraction", cls_args.train_fraction,
                  "labeled fraction used for training");
  cls->add_option("--mode", cls_args.mode, "multiclass | multilabel")
      ->check(CLI::IsMember({"multiclass", "multilabel"}));
  cls->callback([&] { run_eval_classify(cls_args); });

  ClusterArgs clu_args;
  auto* clu = eval->add_subcommand("cluster", "k-means clustering quality");
  add_eval_flags(clu, clu_args.common, true);
  clu->add_option("--labels", clu_args.labels_path, "labels file for NMI");
  clu->add_option("--vocab", clu_args.vocab_path, "vocabulary file");
  clu->add_option("--k", clu_args.k, "cluster count (0 = search)");
  clu->add_option("--k-min", clu_args.k_min, "search lower bound");
  clu->add_option("--k-max", clu_args.k_max, "search upper bound");
  clu->add_option("--k-step", clu_args.k_step, "search step")
      ->check(CLI::PositiveNumber);
  clu->callback([&] { run_eval_cluster(clu_args); });

  ReconstructArgs rec_args;
  auto* rec = eval->add_subcommand("reconstruct",
                                   "neighborhood reconstruction precision");
  add_eval_flags(rec, rec_args.common, true);
  rec->add_option("--sample-nodes", rec_args.sample_nodes,
                  "evaluate a node sample (0 = all)");
  rec->callback([&] { run_eval_reconstruct(rec_args); });

  NdcgArgs ndcg_args;
  auto* nd = eval->add_subcommand("ndcg", "similarity-ranking NDCG");
  add_eval_flags(nd, ndcg_args.common, true);
  nd->add_option("--similarity", ndcg_args.similarity, "oracle similarity");
  nd->add_option("--k", ndcg_args.k, "ranking depth");
  nd->add_option("--sample-nodes", ndcg_args.sample_nodes,
                 "evaluate a node sample (0 = all)");
  nd->callback([&] { run_eval_ndcg(ndcg_args); });

  SweepArgs sweep_args;
  auto* sweep =
      app.add_subcommand("sweep", "similarity grid search for a task");
  add_graph_flags(sweep, sweep_args.graph, "--graph");
  sweep->add_option("--task", sweep_args.task,
                    "classify | linkpred | cluster | reconstruct");
  sweep->add_option("--output", sweep_args.output, "best model output path")
      ->required();
  sweep->add_option("--table", sweep_args.table,
                    "per-cell CSV (default <output>.table.csv)");
  sweep->add_option("--grid", sweep_args.grid,
                    "restrict to these similarity specs");
  sweep->add_option("--order", sweep_args.order,
                    "restrict grid order: 1, 2 (0 = both)");
  sweep->add_option("--labels", sweep_args.labels_path, "labels file");
  sweep->add_option("--vocab", sweep_args.vocab_path, "vocabulary file");
  sweep->add_option("--op", sweep_args.op, "linkpred edge operator");
  sweep->add_option("--k", sweep_args.cluster_k, "cluster count");
  sweep->add_option("--train-fraction", sweep_args.train_fraction,
                    "classify train fraction");
  sweep->add_option("--test-fraction", sweep_args.test_fraction,
                    "linkpred holdout fraction");
  add_train_config_flags(sweep, sweep_args.cfg);
  sweep->callback([&] { run_sweep(sweep_args); });

  OracleArgs oracle_args;
  auto* oracle =
      app.add_subcommand("oracle", "dump exact similarity rows");
  add_graph_flags(oracle, oracle_args.graph, "--graph");
  oracle->add_option("--similarity", oracle_args.similarity,
                     "similarity spec");
  oracle->add_option("--nodes", oracle_args.nodes,
                     "comma-separated node list (default all)");
  oracle->add_option("--output", oracle_args.output, "dump path")->required();
  oracle->callback([&] { run_oracle(oracle_args); });

  auto* gen = app.add_subcommand("gen", "synthetic graphs");
  gen->require_subcommand(1);
  GenWsArgs ws_args;
  auto* ws = gen->add_subcommand("ws", "Watts-Strogatz small world");
  ws->add_option("--nodes", ws_args.nodes, "node count")->required();
  ws->add_option("--k", ws_args.k, "ring degree (even)");
  ws->add_option("--beta", ws_args.beta, "rewiring probability");
  ws->add_option("--seed", ws_args.seed, "random seed");
  ws->add_option("--output", ws_args.output, "edge-list output")->required();
  ws->callback([&] { run_gen_ws(ws_args); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  } catch (const verse::CapExceededError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
