// include/svcq/kmeans.hpp

// Copyright 2026  SVCQ Authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

// KMeans++ initialization and full-batch Lloyd training. Everything here is
// deterministic given (data, k, seed, max_iters, tol): sampling uses the
// hand-rolled draws in rng.hpp and centroid updates accumulate sequentially
// per cluster, so two runs agree bit-for-bit on platforms with the same
// float semantics.

#ifndef SVCQ_KMEANS_HPP_
#define SVCQ_KMEANS_HPP_

#include <cstdint>
#include <utility>
#include <vector>

#include "svcq/types.hpp"

namespace svcq {

struct KMeansParams {
  int max_iters = 100;
  // Absolute max centroid displacement, in feature units, below which
  // training stops.
  double tol = 1e-4;
};

struct TrainingStats {
  std::vector<double> inertia_history;  // sum of squared distances, per iteration
  int iterations_run = 0;
  int empty_cluster_reassignments = 0;
  bool converged = false;
};

// D^2 sampling: first centroid uniform, each next one proportional to the
// squared distance to the nearest centroid chosen so far.
template <typename Scalar>
RowMatrix<Scalar> kmeanspp_init(const Eigen::Ref<const RowMatrix<Scalar>> &data,
                                Index k, std::uint64_t seed);

// Lloyd on an explicit initialization. Empty clusters are re-seeded to the
// point farthest from its assigned centroid.
template <typename Scalar>
std::pair<RowMatrix<Scalar>, TrainingStats> lloyd_cluster(
    const Eigen::Ref<const RowMatrix<Scalar>> &data,
    const Eigen::Ref<const RowMatrix<Scalar>> &init,
    const KMeansParams &params = {});

// Nearest centroid by Euclidean distance; ties break to the lowest code id.
// This scalar path is the semantic reference for assign_batch.
template <typename Scalar>
std::int32_t nearest_centroid(const Eigen::Ref<const RowMatrix<Scalar>> &centroids,
                              const Eigen::Ref<const Eigen::RowVector<Scalar, Eigen::Dynamic>> &v);

// Row-wise nearest centroids via the expanded form |x|^2 - 2 x.c + |c|^2
// with precomputed centroid norms; near-ties are re-checked with the exact
// distance so results always match nearest_centroid per row.
template <typename Scalar>
std::vector<std::int32_t> nearest_centroid_batch(
    const Eigen::Ref<const RowMatrix<Scalar>> &centroids,
    const Eigen::Ref<const RowMatrix<Scalar>> &data);

// Codebook-level wrappers.
std::pair<Codebook, TrainingStats> lloyd_train(Tier tier, const RowMatrixf &data,
                                               const RowMatrixf &init,
                                               std::uint64_t seed,
                                               const KMeansParams &params = {});

std::int32_t assign(const Codebook &cb, const Eigen::Ref<const Eigen::RowVectorXf> &v);
std::vector<std::int32_t> assign_batch(const Codebook &cb,
                                       const Eigen::Ref<const RowMatrixf> &data);

}  // namespace svcq

#endif  // SVCQ_KMEANS_HPP_
