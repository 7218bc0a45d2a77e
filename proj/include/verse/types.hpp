#pragma once

#include <Eigen/Dense>

#include <cstdint>

namespace verse {

using NodeId = std::uint32_t;
using EdgeId = std::uint64_t;

// Embeddings are float32 and row-major so that a node's vector is one
// contiguous slice of memory.
using EmbeddingMatrix =
    Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

// Dense per-node similarity row: nonnegative, sums to 1 within 1e-6.
using Distribution = Eigen::VectorXd;

bool is_distribution(const Distribution& d, double tol = 1e-6);

}  // namespace verse
