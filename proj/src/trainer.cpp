#include "verse/trainer.hpp"

#include "verse/errors.hpp"
#include "verse/rng.hpp"

#include <atomic>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <thread>
#include <vector>

namespace verse {

void validate(const TrainConfig& cfg) {
  if (cfg.dim < 1) throw std::invalid_argument("dim must be >= 1");
  if (cfg.negatives < 1) throw std::invalid_argument("negatives must be >= 1");
  if (cfg.epochs < 1) throw std::invalid_argument("epochs must be >= 1");
  if (!(cfg.lr0 > 0.0f)) throw std::invalid_argument("lr0 must be positive");
  if (cfg.lr_floor < 0.0f || cfg.lr_floor > cfg.lr0)
    throw std::invalid_argument("lr_floor must lie in [0, lr0]");
  if (cfg.threads < 1) throw std::invalid_argument("threads must be >= 1");
}

EmbeddingModel init_model(NodeId n, int dim, ProximityOrder order,
                          std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("node count must be >= 1");
  if (dim < 1) throw std::invalid_argument("dim must be >= 1");
  EmbeddingModel model;
  Rng rng(seed);
  const float scale = 1.0f / std::sqrt(static_cast<float>(dim));
  const auto fill = [&](EmbeddingMatrix& m) {
    m.resize(n, dim);
    for (NodeId i = 0; i < n; ++i)
      for (int j = 0; j < dim; ++j)
        m(i, j) = scale * static_cast<float>(rng.gaussian());
  };
  fill(model.w);
  if (order == ProximityOrder::Second) {
    model.w_context.emplace();
    fill(*model.w_context);
  }
  return model;
}

namespace {

// float32 exp overflows near |x| = 88; the sigmoid is flat to ~1e-13 at 30.
constexpr float kLogitClamp = 30.0f;

inline float clamped_sigmoid(float x) {
  if (x > kLogitClamp) x = kLogitClamp;
  if (x < -kLogitClamp) x = -kLogitClamp;
  return 1.0f / (1.0f + std::exp(-x));
}

}  // namespace

void nce_update(EmbeddingModel& model, NodeId u, NodeId v, int label,
                float lr) {
  EmbeddingMatrix& target = model.w_context ? *model.w_context : model.w;
  auto a = model.w.row(u);
  auto b = target.row(v);
  const float g = (static_cast<float>(label) - clamped_sigmoid(a.dot(b))) * lr;
  thread_local std::vector<float> scratch;
  scratch.resize(static_cast<size_t>(a.size()));
  Eigen::Map<Eigen::RowVectorXf> a_old(scratch.data(), a.size());
  a_old = a;
  a += g * b;  // b still holds its pre-update values here
  b += g * a_old;
}

namespace {

struct LrSchedule {
  float lr0, floor;
  double inv_total;
  float at(std::uint64_t step) const {
    const float lr =
        lr0 - (lr0 - floor) * static_cast<float>(step * inv_total);
    return lr < floor ? floor : lr;
  }
};

}  // namespace

EmbeddingModel train_verse(const Graph& g, const Graph* reversed,
                           const SimilaritySpec& spec,
                           const TrainConfig& cfg) {
  validate(cfg);
  validate(spec);
  const NodeId n = g.num_nodes();
  if (n == 0) throw std::invalid_argument("graph has no nodes");
  if (spec.kind == SimilarityKind::SimRank && reversed == nullptr)
    throw std::invalid_argument("SimRank sampling needs the reversed graph");
  if (spec.kind == SimilarityKind::Adjacency && g.num_edges() == 0)
    throw std::invalid_argument(
        "adjacency similarity needs at least one edge");

  EmbeddingModel model = init_model(n, cfg.dim, spec.order, cfg.seed);
  const std::uint64_t total = static_cast<std::uint64_t>(cfg.epochs) * n;
  const LrSchedule schedule{cfg.lr0, cfg.lr_floor, 1.0 / total};

  std::optional<SimRankSampler> simrank;
  if (spec.kind == SimilarityKind::SimRank)
    simrank.emplace(g, *reversed, spec.param);

  // Workers update the shared matrix without locks; interleaved and lost
  // updates are tolerated. The step counter drives the learning rate and is
  // synced in batches; with one thread it tracks iterations exactly.
  //
  // Pairs are sampled a small batch ahead and their rows prefetched, which
  // hides most of the DRAM latency once the matrix outgrows the caches.
  constexpr std::uint64_t kBatch = 8;
  const EmbeddingMatrix& targets =
      model.w_context ? *model.w_context : model.w;
  const int row_bytes = cfg.dim * static_cast<int>(sizeof(float));
  const auto prefetch_row = [&](const EmbeddingMatrix& m, NodeId r) {
    const char* p = reinterpret_cast<const char*>(m.data()) +
                    static_cast<size_t>(r) * row_bytes;
    for (int off = 0; off < row_bytes; off += 64)
      __builtin_prefetch(p + off, 1);
  };

  std::atomic<std::uint64_t> progress{0};
  const auto worker = [&](int id, std::uint64_t iterations) {
    Rng rng = Rng::for_worker(cfg.seed, static_cast<std::uint64_t>(id));

    struct Batch {
      std::vector<NodeId> sources, positives, noise;
      std::uint64_t size = 0;
    };
    Batch buffers[2];
    for (Batch& b : buffers) {
      b.sources.resize(kBatch);
      b.positives.resize(kBatch);
      b.noise.resize(kBatch * cfg.negatives);
    }

    std::uint64_t remaining = iterations;
    const auto fill = [&](Batch& batch) {
      batch.size = std::min(kBatch, remaining);
      remaining -= batch.size;
      for (std::uint64_t b = 0; b < batch.size; ++b) {
        NodeId u = static_cast<NodeId>(rng.below(n));
        NodeId v = u;
        switch (spec.kind) {
          case SimilarityKind::Ppr:
            v = sample_ppr(g, u, spec.param, rng);
            break;
          case SimilarityKind::Adjacency: {
            auto s = sample_adjacency(g, u, rng);
            while (!s) {
              u = static_cast<NodeId>(rng.below(n));
              s = sample_adjacency(g, u, rng);
            }
            v = *s;
            break;
          }
          case SimilarityKind::SimRank:
            v = simrank->sample(u, rng);
            break;
        }
        batch.sources[b] = u;
        batch.positives[b] = v;
        prefetch_row(model.w, u);
        prefetch_row(targets, v);
        for (int neg = 0; neg < cfg.negatives; ++neg) {
          const NodeId z = static_cast<NodeId>(rng.below(n));
          batch.noise[b * cfg.negatives + neg] = z;
          prefetch_row(targets, z);
        }
      }
    };

    std::uint64_t base = 0, local = 0;
    const auto apply = [&](const Batch& batch) {
      for (std::uint64_t b = 0; b < batch.size; ++b, ++local) {
        if (local >= 4096) {
          base = progress.fetch_add(local, std::memory_order_relaxed) + local;
          local = 0;
        }
        const float lr = schedule.at(base + local);
        nce_update(model, batch.sources[b], batch.positives[b], 1, lr);
        for (int neg = 0; neg < cfg.negatives; ++neg)
          nce_update(model, batch.sources[b],
                     batch.noise[b * cfg.negatives + neg], 0, lr);
      }
    };

    int current = 0;
    fill(buffers[current]);
    while (buffers[current].size > 0) {
      fill(buffers[1 - current]);  // prefetches land while updates run
      apply(buffers[current]);
      current = 1 - current;
    }
  };

  if (cfg.threads == 1) {
    worker(0, total);
  } else {
    std::vector<std::thread> pool;
    pool.reserve(cfg.threads);
    const std::uint64_t share = total / cfg.threads;
    const std::uint64_t leftover = total % cfg.threads;
    for (int t = 0; t < cfg.threads; ++t) {
      const std::uint64_t count =
          share + (static_cast<std::uint64_t>(t) < leftover ? 1 : 0);
      pool.emplace_back(worker, t, count);
    }
    for (auto& th : pool) th.join();
  }
  return model;
}

void fverse_row_step(EmbeddingMatrix& w, EmbeddingMatrix& targets, NodeId u,
                     const Eigen::Ref<const Eigen::VectorXf>& sim_row,
                     float lr, bool freeze_targets) {
  Eigen::VectorXf logits = targets * w.row(u).transpose();
  const float peak = logits.maxCoeff();
  Eigen::VectorXf p = (logits.array() - peak).exp();
  p /= p.sum();
  const Eigen::VectorXf residual = sim_row - p;
  const Eigen::RowVectorXf wu_old = w.row(u);
  // Both deltas from pre-update values; in first-order mode targets aliases
  // w and row u also receives the target-side term.
  w.row(u) += lr * (residual.transpose() * targets);
  if (!freeze_targets) targets.noalias() += lr * residual * wu_old;
}

namespace {

double mean_kl(const EmbeddingMatrix& w, const EmbeddingMatrix& targets,
               const Eigen::MatrixXd& sim_rows) {
  const NodeId n = static_cast<NodeId>(w.rows());
  double total = 0.0;
  for (NodeId u = 0; u < n; ++u) {
    const Eigen::VectorXd x =
        (targets * w.row(u).transpose()).cast<double>();
    const double peak = x.maxCoeff();
    const double lse = peak + std::log((x.array() - peak).exp().sum());
    for (NodeId j = 0; j < n; ++j) {
      const double s = sim_rows(u, j);
      if (s <= 0.0) continue;
      const double term = s * (std::log(s) - (x[j] - lse));
      if (!std::isfinite(term))
        return std::numeric_limits<double>::infinity();
      total += term;
    }
  }
  return total / n;
}

}  // namespace

EmbeddingModel train_fverse(const Graph& g, const Graph* reversed,
                            const SimilaritySpec& spec, const TrainConfig& cfg,
                            std::vector<double>* epoch_kl) {
  validate(cfg);
  validate(spec);
  const NodeId n = g.num_nodes();
  if (n == 0) throw std::invalid_argument("graph has no nodes");
  if (n > kExactSimRankCap)
    throw CapExceededError("full-distribution training capped at " +
                           std::to_string(kExactSimRankCap) +
                           " nodes, graph has " + std::to_string(n));

  Graph local_rev;
  if (reversed == nullptr) {
    local_rev = reverse(g);
    reversed = &local_rev;
  }
  const Eigen::MatrixXd rows_exact = exact_rows(g, *reversed, spec, cfg.threads);
  const EmbeddingMatrix rows = rows_exact.cast<float>();

  EmbeddingModel model = init_model(n, cfg.dim, spec.order, cfg.seed);
  EmbeddingMatrix& targets = model.w_context ? *model.w_context : model.w;

  const std::uint64_t total = static_cast<std::uint64_t>(cfg.epochs) * n;
  const LrSchedule schedule{cfg.lr0, cfg.lr_floor, 1.0 / total};
  Rng rng = Rng::for_worker(cfg.seed, 0);

  std::vector<NodeId> order(n);
  for (NodeId u = 0; u < n; ++u) order[u] = u;

  std::uint64_t step = 0;
  for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
    for (NodeId i = n; i > 1; --i)  // Fisher-Yates
      std::swap(order[i - 1], order[rng.below(i)]);
    for (NodeId u : order)
      fverse_row_step(model.w, targets, u, rows.row(u).transpose(),
                      schedule.at(step++), cfg.freeze_targets);
    if (epoch_kl) epoch_kl->push_back(mean_kl(model.w, targets, rows_exact));
  }
  return model;
}

double kl_objective(const EmbeddingModel& model,
                    std::span<const std::pair<NodeId, Distribution>> rows) {
  if (rows.empty()) return 0.0;
  const EmbeddingMatrix& targets =
      model.w_context ? *model.w_context : model.w;
  double total = 0.0;
  for (const auto& [u, sim_row] : rows) {
    const Eigen::VectorXd x =
        (targets * model.w.row(u).transpose()).cast<double>();
    const double peak = x.maxCoeff();
    const double lse = peak + std::log((x.array() - peak).exp().sum());
    for (Eigen::Index j = 0; j < sim_row.size(); ++j) {
      const double s = sim_row[j];
      if (s <= 0.0) continue;
      const double term = s * (std::log(s) - (x[j] - lse));
      if (!std::isfinite(term))
        return std::numeric_limits<double>::infinity();
      total += term;
    }
  }
  return total / static_cast<double>(rows.size());
}

}  // namespace verse
