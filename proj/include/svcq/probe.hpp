// include/svcq/probe.hpp

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

// Linear probes: one affine layer with softmax (multiclass, cross-entropy)
// or sigmoid (binary, BCE), trained by deterministic mini-batch gradient
// descent with early stopping on validation loss.

#ifndef SVCQ_PROBE_HPP_
#define SVCQ_PROBE_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include "svcq/types.hpp"

namespace svcq {

enum class ProbeTask { kMulticlass, kBinary };

class ProbeDataset {
 public:
  // num_classes is the label range: [0, num_classes) for multiclass, {0, 1}
  // with num_classes == 2 for binary.
  ProbeDataset(RowMatrixf inputs, std::vector<std::int32_t> labels,
               Index num_classes, std::string split = "");

  Index size() const { return inputs_.rows(); }
  Index dim() const { return inputs_.cols(); }
  Index num_classes() const { return num_classes_; }
  const RowMatrixf &inputs() const { return inputs_; }
  const std::vector<std::int32_t> &labels() const { return labels_; }
  const std::string &split() const { return split_; }

 private:
  RowMatrixf inputs_;
  std::vector<std::int32_t> labels_;
  Index num_classes_;
  std::string split_;
};

class LinearProbe {
 public:
  // Zero-initialized probe; binary tasks use a single output row.
  LinearProbe(ProbeTask task, Index num_classes, Index dim);
  LinearProbe(ProbeTask task, RowMatrixd weights, Eigen::VectorXd bias);

  ProbeTask task() const { return task_; }
  Index dim() const { return weights_.cols(); }
  Index outputs() const { return weights_.rows(); }
  const RowMatrixd &weights() const { return weights_; }
  const Eigen::VectorXd &bias() const { return bias_; }

  // Raw logits for a batch (rows are examples).
  RowMatrixd logits(const Eigen::Ref<const RowMatrixd> &x) const;
  // Softmax rows (multiclass) or a single sigmoid column (binary).
  RowMatrixd probabilities(const Eigen::Ref<const RowMatrixd> &x) const;
  std::vector<std::int32_t> predict(const Eigen::Ref<const RowMatrixf> &x) const;

 private:
  ProbeTask task_;
  RowMatrixd weights_;  // outputs x dim
  Eigen::VectorXd bias_;
};

struct ProbeHyperparams {
  double learning_rate = 0.05;
  int epochs = 100;
  int batch_size = 64;
  std::uint64_t seed = 0;
  int patience = 10;
};

struct EpochRecord {
  int epoch = 0;
  double train_loss = 0.0;
  double valid_loss = 0.0;
  double valid_accuracy = 0.0;
};

struct TrainingLog {
  std::vector<EpochRecord> epochs;
  int best_epoch = 0;  // 0 when training never ran
};

std::pair<LinearProbe, TrainingLog> train_probe(const ProbeDataset &train,
                                                const ProbeDataset &valid,
                                                ProbeTask task,
                                                const ProbeHyperparams &hyper = {});

struct MetricsReport {
  ProbeTask task;
  Index num_examples = 0;
  double accuracy = 0.0;
  double binary_f1 = 0.0;              // binary task only
  std::vector<double> per_class_f1;    // multiclass only
  double micro_f1 = 0.0;               // multiclass only
};

MetricsReport evaluate(const LinearProbe &probe, const ProbeDataset &test);

// Mean loss over a dataset (used for early stopping and gradient checks).
double probe_loss(const LinearProbe &probe, const Eigen::Ref<const RowMatrixd> &x,
                  const std::vector<std::int32_t> &labels);

// Central-finite-difference check of the analytic gradients on a small
// batch; returns the max relative error over all parameters.
double gradient_check(ProbeTask task, const LinearProbe &probe,
                      const ProbeDataset &batch);

// F1 from raw counts with the F1 = 0 convention when P + R = 0.
double f1_score(std::int64_t tp, std::int64_t fp, std::int64_t fn);

std::string metrics_to_json(const MetricsReport &report);

}  // namespace svcq

#endif  // SVCQ_PROBE_HPP_
