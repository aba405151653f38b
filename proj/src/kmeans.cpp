// src/kmeans.cpp

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

#include "svcq/kmeans.hpp"

#include <cmath>
#include <limits>

#include "svcq/rng.hpp"

namespace svcq {

namespace {

// Semantic Euclidean distance: sequential double accumulation in coordinate
// order. Every other distance path must agree with this one on the argmin.
template <typename Scalar>
double exact_sqdist(const Eigen::Ref<const RowMatrix<Scalar>> &a, Index ai,
                    const Eigen::Ref<const RowMatrix<Scalar>> &b, Index bi) {
  double acc = 0.0;
  for (Index d = 0; d < a.cols(); ++d) {
    const double diff = static_cast<double>(a(ai, d)) - static_cast<double>(b(bi, d));
    acc += diff * diff;
  }
  return acc;
}

template <typename Scalar>
double exact_sqdist_vec(const Eigen::Ref<const RowMatrix<Scalar>> &a, Index ai,
                        const Eigen::Ref<const Eigen::RowVector<Scalar, Eigen::Dynamic>> &v) {
  double acc = 0.0;
  for (Index d = 0; d < a.cols(); ++d) {
    const double diff = static_cast<double>(a(ai, d)) - static_cast<double>(v(d));
    acc += diff * diff;
  }
  return acc;
}

template <typename Scalar>
void require_finite(const Eigen::Ref<const RowMatrix<Scalar>> &m, const char *what) {
  if (!m.allFinite()) {
    throw NonFiniteData(std::string(what) + " contains NaN or Inf values");
  }
}

// Expanded-form batch assignment with exact re-check of near-ties. Returns
// the assigned index per row and, when `dists` is non-null, the exact
// squared distance to the winner.
template <typename Scalar>
std::vector<std::int32_t> batch_assign_impl(
    const Eigen::Ref<const RowMatrix<Scalar>> &centroids,
    const Eigen::Ref<const RowMatrix<Scalar>> &data, std::vector<double> *dists) {
  const Index n = data.rows();
  const Index k = centroids.rows();
  const RowMatrixd xd = data.template cast<double>();
  const RowMatrixd cd = centroids.template cast<double>();
  const Eigen::VectorXd xsq = xd.rowwise().squaredNorm();
  const Eigen::VectorXd csq = cd.rowwise().squaredNorm();
  const double csq_max = csq.maxCoeff();
  const RowMatrixd gram = xd * cd.transpose();  // n x k

  std::vector<std::int32_t> out(static_cast<std::size_t>(n));
  if (dists != nullptr) dists->resize(static_cast<std::size_t>(n));
  std::vector<Index> candidates;
  for (Index i = 0; i < n; ++i) {
    double best = std::numeric_limits<double>::infinity();
    for (Index j = 0; j < k; ++j) {
      const double d2 = xsq(i) - 2.0 * gram(i, j) + csq(j);
      if (d2 < best) best = d2;
    }
    // The expanded form cancels catastrophically when distances are small
    // relative to the norms, so re-check everything within a window sized
    // well above its rounding error.
    const double window = 1e-9 * (xsq(i) + csq_max + 1.0);
    candidates.clear();
    for (Index j = 0; j < k; ++j) {
      const double d2 = xsq(i) - 2.0 * gram(i, j) + csq(j);
      if (d2 <= best + window) candidates.push_back(j);
    }
    double best_exact = std::numeric_limits<double>::infinity();
    Index best_j = 0;
    for (Index j : candidates) {
      const double d2 = exact_sqdist<Scalar>(data, i, centroids, j);
      if (d2 < best_exact) {
        best_exact = d2;
        best_j = j;
      }
    }
    out[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(best_j);
    if (dists != nullptr) (*dists)[static_cast<std::size_t>(i)] = best_exact;
  }
  return out;
}

}  // namespace

template <typename Scalar>
std::int32_t nearest_centroid(
    const Eigen::Ref<const RowMatrix<Scalar>> &centroids,
    const Eigen::Ref<const Eigen::RowVector<Scalar, Eigen::Dynamic>> &v) {
  if (v.size() != centroids.cols()) {
    throw DimensionMismatch("query dim " + std::to_string(v.size()) +
                            " != codebook dim " + std::to_string(centroids.cols()));
  }
  if (!v.allFinite()) throw NonFiniteData("query vector contains NaN or Inf");
  double best = std::numeric_limits<double>::infinity();
  Index best_j = 0;
  for (Index j = 0; j < centroids.rows(); ++j) {
    const double d2 = exact_sqdist_vec<Scalar>(centroids, j, v);
    if (d2 < best) {
      best = d2;
      best_j = j;
    }
  }
  return static_cast<std::int32_t>(best_j);
}

template <typename Scalar>
std::vector<std::int32_t> nearest_centroid_batch(
    const Eigen::Ref<const RowMatrix<Scalar>> &centroids,
    const Eigen::Ref<const RowMatrix<Scalar>> &data) {
  if (data.cols() != centroids.cols()) {
    throw DimensionMismatch("batch dim " + std::to_string(data.cols()) +
                            " != codebook dim " + std::to_string(centroids.cols()));
  }
  require_finite<Scalar>(data, "assignment batch");
  return batch_assign_impl<Scalar>(centroids, data, nullptr);
}

template <typename Scalar>
RowMatrix<Scalar> kmeanspp_init(const Eigen::Ref<const RowMatrix<Scalar>> &data,
                                Index k, std::uint64_t seed) {
  const Index n = data.rows();
  if (k < 1) throw InvalidArgument("kmeanspp_init requires k >= 1");
  if (n < k) {
    throw TooFewPoints("kmeanspp_init: " + std::to_string(n) +
                       " points for k = " + std::to_string(k));
  }
  require_finite<Scalar>(data, "kmeanspp_init data");

  Rng rng(seed);
  RowMatrix<Scalar> centroids(k, data.cols());
  std::vector<bool> chosen(static_cast<std::size_t>(n), false);

  const Index first = static_cast<Index>(rng.uniform_index(static_cast<std::uint64_t>(n)));
  centroids.row(0) = data.row(first);
  chosen[static_cast<std::size_t>(first)] = true;

  std::vector<double> mindist(static_cast<std::size_t>(n));
  const RowMatrixd xd = data.template cast<double>();
  for (Index i = 0; i < n; ++i) {
    mindist[static_cast<std::size_t>(i)] =
        (xd.row(i) - xd.row(first)).squaredNorm();
  }

  for (Index c = 1; c < k; ++c) {
    double total = 0.0;
    for (double w : mindist) total += w;

    Index pick = -1;
    if (total > 0.0) {
      const double r = rng.uniform01() * total;
      double acc = 0.0;
      Index last_positive = -1;
      for (Index i = 0; i < n; ++i) {
        const double w = mindist[static_cast<std::size_t>(i)];
        if (w > 0.0) last_positive = i;
        acc += w;
        if (acc > r) {
          pick = i;
          break;
        }
      }
      if (pick < 0) pick = last_positive;  // r landed on the rounding tail
    }
    if (pick < 0) {
      // All remaining mass is zero (duplicated points); take the lowest
      // unchosen index.
      for (Index i = 0; i < n; ++i) {
        if (!chosen[static_cast<std::size_t>(i)]) {
          pick = i;
          break;
        }
      }
    }

    centroids.row(c) = data.row(pick);
    chosen[static_cast<std::size_t>(pick)] = true;
    const Eigen::RowVectorXd picked = xd.row(pick);
    for (Index i = 0; i < n; ++i) {
      const double d2 = (xd.row(i) - picked).squaredNorm();
      double &m = mindist[static_cast<std::size_t>(i)];
      if (d2 < m) m = d2;
    }
  }
  return centroids;
}

template <typename Scalar>
std::pair<RowMatrix<Scalar>, TrainingStats> lloyd_cluster(
    const Eigen::Ref<const RowMatrix<Scalar>> &data,
    const Eigen::Ref<const RowMatrix<Scalar>> &init, const KMeansParams &params) {
  const Index n = data.rows();
  const Index k = init.rows();
  if (k < 1) throw InvalidArgument("lloyd_cluster requires k >= 1");
  if (n < k) {
    throw TooFewPoints("lloyd_cluster: " + std::to_string(n) +
                       " points for k = " + std::to_string(k));
  }
  if (data.cols() != init.cols()) {
    throw DimensionMismatch("data dim != init dim");
  }
  if (params.max_iters < 1) throw InvalidArgument("max_iters must be >= 1");
  if (params.tol < 0.0) throw InvalidArgument("tol must be >= 0");
  require_finite<Scalar>(data, "lloyd_cluster data");
  require_finite<Scalar>(init, "lloyd_cluster init");

  RowMatrix<Scalar> centroids = init;
  TrainingStats stats;
  std::vector<double> dist;
  std::vector<std::int32_t> assign_idx;

  for (int iter = 1; iter <= params.max_iters; ++iter) {
    assign_idx = batch_assign_impl<Scalar>(centroids, data, &dist);
    double inertia = 0.0;
    for (double d : dist) inertia += d;
    stats.inertia_history.push_back(inertia);
    stats.iterations_run = iter;

    // Update: sequential per-cluster accumulation in double, row order.
    RowMatrixd sums = RowMatrixd::Zero(k, data.cols());
    std::vector<Index> counts(static_cast<std::size_t>(k), 0);
    for (Index i = 0; i < n; ++i) {
      const auto c = static_cast<Index>(assign_idx[static_cast<std::size_t>(i)]);
      sums.row(c) += data.row(i).template cast<double>();
      ++counts[static_cast<std::size_t>(c)];
    }

    RowMatrix<Scalar> next(k, data.cols());
    std::vector<bool> reseed_used(static_cast<std::size_t>(n), false);
    for (Index c = 0; c < k; ++c) {
      if (counts[static_cast<std::size_t>(c)] > 0) {
        next.row(c) = (sums.row(c) / static_cast<double>(counts[static_cast<std::size_t>(c)]))
                          .template cast<Scalar>();
      } else {
        // Re-seed to the point farthest from its assigned centroid, lowest
        // index on ties, each point used at most once per iteration.
        Index far = -1;
        double far_d = -1.0;
        for (Index i = 0; i < n; ++i) {
          if (reseed_used[static_cast<std::size_t>(i)]) continue;
          if (dist[static_cast<std::size_t>(i)] > far_d) {
            far_d = dist[static_cast<std::size_t>(i)];
            far = i;
          }
        }
        next.row(c) = data.row(far);
        reseed_used[static_cast<std::size_t>(far)] = true;
        ++stats.empty_cluster_reassignments;
      }
    }

    double max_disp = 0.0;
    for (Index c = 0; c < k; ++c) {
      const double disp =
          (next.row(c).template cast<double>() - centroids.row(c).template cast<double>())
              .norm();
      if (disp > max_disp) max_disp = disp;
    }
    centroids = next;
    if (max_disp < params.tol) {
      stats.converged = true;
      break;
    }
  }

  // Final measurement on the returned centroids; appended so the history's
  // last entry is always the codebook's final inertia.
  assign_idx = batch_assign_impl<Scalar>(centroids, data, &dist);
  double final_inertia = 0.0;
  for (double d : dist) final_inertia += d;
  stats.inertia_history.push_back(final_inertia);
  return {std::move(centroids), std::move(stats)};
}

std::pair<Codebook, TrainingStats> lloyd_train(Tier tier, const RowMatrixf &data,
                                               const RowMatrixf &init,
                                               std::uint64_t seed,
                                               const KMeansParams &params) {
  auto [centroids, stats] = lloyd_cluster<float>(data, init, params);
  TrainingMeta meta;
  meta.seed = seed;
  meta.iterations_run = static_cast<std::uint32_t>(stats.iterations_run);
  meta.final_inertia = stats.inertia_history.back();
  return {Codebook(tier, std::move(centroids), meta), std::move(stats)};
}

std::int32_t assign(const Codebook &cb, const Eigen::Ref<const Eigen::RowVectorXf> &v) {
  return nearest_centroid<float>(cb.centroids(), v);
}

std::vector<std::int32_t> assign_batch(const Codebook &cb,
                                       const Eigen::Ref<const RowMatrixf> &data) {
  return nearest_centroid_batch<float>(cb.centroids(), data);
}

template RowMatrix<float> kmeanspp_init<float>(
    const Eigen::Ref<const RowMatrix<float>> &, Index, std::uint64_t);
template RowMatrix<double> kmeanspp_init<double>(
    const Eigen::Ref<const RowMatrix<double>> &, Index, std::uint64_t);
template std::pair<RowMatrix<float>, TrainingStats> lloyd_cluster<float>(
    const Eigen::Ref<const RowMatrix<float>> &,
    const Eigen::Ref<const RowMatrix<float>> &, const KMeansParams &);
template std::pair<RowMatrix<double>, TrainingStats> lloyd_cluster<double>(
    const Eigen::Ref<const RowMatrix<double>> &,
    const Eigen::Ref<const RowMatrix<double>> &, const KMeansParams &);
template std::int32_t nearest_centroid<float>(
    const Eigen::Ref<const RowMatrix<float>> &,
    const Eigen::Ref<const Eigen::RowVector<float, Eigen::Dynamic>> &);
template std::int32_t nearest_centroid<double>(
    const Eigen::Ref<const RowMatrix<double>> &,
    const Eigen::Ref<const Eigen::RowVector<double, Eigen::Dynamic>> &);
template std::vector<std::int32_t> nearest_centroid_batch<float>(
    const Eigen::Ref<const RowMatrix<float>> &,
    const Eigen::Ref<const RowMatrix<float>> &);
template std::vector<std::int32_t> nearest_centroid_batch<double>(
    const Eigen::Ref<const RowMatrix<double>> &,
    const Eigen::Ref<const RowMatrix<double>> &);

}  // namespace svcq
