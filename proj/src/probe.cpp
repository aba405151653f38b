// src/probe.cpp

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

#include "svcq/probe.hpp"

#include <cmath>
#include <limits>

#include <json.hpp>

#include "svcq/rng.hpp"

namespace svcq {

ProbeDataset::ProbeDataset(RowMatrixf inputs, std::vector<std::int32_t> labels,
                           Index num_classes, std::string split)
    : inputs_(std::move(inputs)),
      labels_(std::move(labels)),
      num_classes_(num_classes),
      split_(std::move(split)) {
  if (inputs_.rows() < 1) throw InvalidArgument("ProbeDataset requires N >= 1");
  if (num_classes_ < 2) throw InvalidArgument("ProbeDataset requires >= 2 classes");
  if (static_cast<Index>(labels_.size()) != inputs_.rows()) {
    throw InvalidArgument("ProbeDataset labels must match the input rows");
  }
  if (!inputs_.allFinite()) {
    throw NonFiniteData("ProbeDataset inputs contain NaN or Inf");
  }
  for (std::int32_t y : labels_) {
    if (y < 0 || y >= num_classes_) {
      throw LabelOutOfRange("label " + std::to_string(y) + " outside [0, " +
                            std::to_string(num_classes_) + ")");
    }
  }
}

LinearProbe::LinearProbe(ProbeTask task, Index num_classes, Index dim)
    : task_(task),
      weights_(RowMatrixd::Zero(task == ProbeTask::kBinary ? 1 : num_classes, dim)),
      bias_(Eigen::VectorXd::Zero(task == ProbeTask::kBinary ? 1 : num_classes)) {
  if (task == ProbeTask::kMulticlass && num_classes < 2) {
    throw InvalidArgument("multiclass probes need >= 2 classes");
  }
  if (dim < 1) throw InvalidArgument("probe dim must be >= 1");
}

LinearProbe::LinearProbe(ProbeTask task, RowMatrixd weights, Eigen::VectorXd bias)
    : task_(task), weights_(std::move(weights)), bias_(std::move(bias)) {
  if (weights_.rows() != bias_.size()) {
    throw InvalidArgument("probe weights and bias disagree on output count");
  }
  if (task_ == ProbeTask::kBinary && weights_.rows() != 1) {
    throw InvalidArgument("binary probes have exactly one output row");
  }
  if (task_ == ProbeTask::kMulticlass && weights_.rows() < 2) {
    throw InvalidArgument("multiclass probes need >= 2 output rows");
  }
  if (!weights_.allFinite() || !bias_.allFinite()) {
    throw NonFiniteData("probe parameters contain NaN or Inf");
  }
}

RowMatrixd LinearProbe::logits(const Eigen::Ref<const RowMatrixd> &x) const {
  if (x.cols() != weights_.cols()) {
    throw DimensionMismatch("probe input dim " + std::to_string(x.cols()) +
                            " != weight dim " + std::to_string(weights_.cols()));
  }
  return (x * weights_.transpose()).rowwise() + bias_.transpose();
}

RowMatrixd LinearProbe::probabilities(const Eigen::Ref<const RowMatrixd> &x) const {
  RowMatrixd z = logits(x);
  if (task_ == ProbeTask::kBinary) {
    return z.unaryExpr([](double v) { return 1.0 / (1.0 + std::exp(-v)); });
  }
  for (Index i = 0; i < z.rows(); ++i) {
    const double m = z.row(i).maxCoeff();
    z.row(i) = (z.row(i).array() - m).exp();
    z.row(i) /= z.row(i).sum();
  }
  return z;
}

std::vector<std::int32_t> LinearProbe::predict(
    const Eigen::Ref<const RowMatrixf> &x) const {
  const RowMatrixd z = logits(x.cast<double>());
  std::vector<std::int32_t> out(static_cast<std::size_t>(z.rows()));
  if (task_ == ProbeTask::kBinary) {
    for (Index i = 0; i < z.rows(); ++i) {
      out[static_cast<std::size_t>(i)] = z(i, 0) > 0.0 ? 1 : 0;
    }
    return out;
  }
  for (Index i = 0; i < z.rows(); ++i) {
    Index best = 0;
    for (Index c = 1; c < z.cols(); ++c) {
      if (z(i, c) > z(i, best)) best = c;  // first max wins ties
    }
    out[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(best);
  }
  return out;
}

namespace {

double softplus(double z) {
  // log(1 + e^z), stable for large |z|.
  return std::log1p(std::exp(-std::abs(z))) + std::max(z, 0.0);
}

// Mean loss and, when grads are requested, its gradient wrt W and b.
double loss_and_grad(const LinearProbe &probe,
                     const Eigen::Ref<const RowMatrixd> &x,
                     const std::vector<std::int32_t> &labels, RowMatrixd *grad_w,
                     Eigen::VectorXd *grad_b) {
  const Index n = x.rows();
  const RowMatrixd z = probe.logits(x);
  double loss = 0.0;
  RowMatrixd dz(z.rows(), z.cols());

  if (probe.task() == ProbeTask::kBinary) {
    for (Index i = 0; i < n; ++i) {
      const double zi = z(i, 0);
      const double y = static_cast<double>(labels[static_cast<std::size_t>(i)]);
      loss += softplus(zi) - y * zi;
      dz(i, 0) = 1.0 / (1.0 + std::exp(-zi)) - y;
    }
  } else {
    for (Index i = 0; i < n; ++i) {
      const double m = z.row(i).maxCoeff();
      const double lse = std::log((z.row(i).array() - m).exp().sum()) + m;
      const auto y = labels[static_cast<std::size_t>(i)];
      loss += lse - z(i, y);
      dz.row(i) = (z.row(i).array() - lse).exp();
      dz(i, y) -= 1.0;
    }
  }
  loss /= static_cast<double>(n);
  if (grad_w != nullptr) {
    *grad_w = dz.transpose() * x / static_cast<double>(n);
    *grad_b = dz.colwise().sum().transpose() / static_cast<double>(n);
  }
  return loss;
}

void check_task_labels(const ProbeDataset &ds, ProbeTask task, const char *name) {
  if (task == ProbeTask::kBinary && ds.num_classes() != 2) {
    throw LabelOutOfRange(std::string(name) +
                          " dataset of a binary task must have two classes");
  }
}

}  // namespace

double probe_loss(const LinearProbe &probe, const Eigen::Ref<const RowMatrixd> &x,
                  const std::vector<std::int32_t> &labels) {
  return loss_and_grad(probe, x, labels, nullptr, nullptr);
}

std::pair<LinearProbe, TrainingLog> train_probe(const ProbeDataset &train,
                                                const ProbeDataset &valid,
                                                ProbeTask task,
                                                const ProbeHyperparams &hyper) {
  if (train.dim() != valid.dim()) {
    throw DimensionMismatch("train and valid dims disagree");
  }
  if (train.num_classes() != valid.num_classes()) {
    throw LabelOutOfRange("train and valid class counts disagree");
  }
  check_task_labels(train, task, "train");
  check_task_labels(valid, task, "valid");
  if (hyper.epochs < 0 || hyper.batch_size < 1 || hyper.patience < 0) {
    throw InvalidArgument("invalid probe hyperparameters");
  }

  LinearProbe probe(task, train.num_classes(), train.dim());
  TrainingLog log;
  if (hyper.epochs == 0) return {std::move(probe), std::move(log)};

  const RowMatrixd x_train = train.inputs().cast<double>();
  const RowMatrixd x_valid = valid.inputs().cast<double>();
  const Index n = train.size();

  RowMatrixd w = probe.weights();
  Eigen::VectorXd b = probe.bias();
  RowMatrixd best_w = w;
  Eigen::VectorXd best_b = b;
  double best_valid = std::numeric_limits<double>::infinity();
  int stale_epochs = 0;
  Rng rng(hyper.seed);

  for (int epoch = 1; epoch <= hyper.epochs; ++epoch) {
    const std::vector<std::size_t> order =
        rng.permutation(static_cast<std::size_t>(n));
    double epoch_loss = 0.0;
    for (Index start = 0; start < n; start += hyper.batch_size) {
      const Index stop = std::min<Index>(start + hyper.batch_size, n);
      const Index bn = stop - start;
      RowMatrixd xb(bn, train.dim());
      std::vector<std::int32_t> yb(static_cast<std::size_t>(bn));
      for (Index i = 0; i < bn; ++i) {
        const std::size_t src = order[static_cast<std::size_t>(start + i)];
        xb.row(i) = x_train.row(static_cast<Index>(src));
        yb[static_cast<std::size_t>(i)] =
            train.labels()[src];
      }
      LinearProbe current(task, w, b);
      RowMatrixd gw;
      Eigen::VectorXd gb;
      const double batch_loss = loss_and_grad(current, xb, yb, &gw, &gb);
      epoch_loss += batch_loss * static_cast<double>(bn);
      w -= hyper.learning_rate * gw;
      b -= hyper.learning_rate * gb;
    }

    LinearProbe current(task, w, b);
    EpochRecord rec;
    rec.epoch = epoch;
    rec.train_loss = epoch_loss / static_cast<double>(n);
    rec.valid_loss = probe_loss(current, x_valid, valid.labels());
    const auto preds = current.predict(valid.inputs());
    Index correct = 0;
    for (Index i = 0; i < valid.size(); ++i) {
      if (preds[static_cast<std::size_t>(i)] ==
          valid.labels()[static_cast<std::size_t>(i)]) {
        ++correct;
      }
    }
    rec.valid_accuracy =
        static_cast<double>(correct) / static_cast<double>(valid.size());
    log.epochs.push_back(rec);

    if (rec.valid_loss < best_valid) {
      best_valid = rec.valid_loss;
      best_w = w;
      best_b = b;
      log.best_epoch = epoch;
      stale_epochs = 0;
    } else {
      ++stale_epochs;
      if (stale_epochs >= hyper.patience) break;
    }
  }
  return {LinearProbe(task, std::move(best_w), std::move(best_b)), std::move(log)};
}

double f1_score(std::int64_t tp, std::int64_t fp, std::int64_t fn) {
  const double precision =
      tp + fp > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fp) : 0.0;
  const double recall =
      tp + fn > 0 ? static_cast<double>(tp) / static_cast<double>(tp + fn) : 0.0;
  if (precision + recall == 0.0) return 0.0;
  return 2.0 * precision * recall / (precision + recall);
}

MetricsReport evaluate(const LinearProbe &probe, const ProbeDataset &test) {
  if (test.dim() != probe.dim()) {
    throw DimensionMismatch("test dim " + std::to_string(test.dim()) +
                            " != probe dim " + std::to_string(probe.dim()));
  }
  MetricsReport report;
  report.task = probe.task();
  report.num_examples = test.size();
  const auto preds = probe.predict(test.inputs());

  Index correct = 0;
  for (Index i = 0; i < test.size(); ++i) {
    if (preds[static_cast<std::size_t>(i)] ==
        test.labels()[static_cast<std::size_t>(i)]) {
      ++correct;
    }
  }
  report.accuracy = static_cast<double>(correct) / static_cast<double>(test.size());

  if (probe.task() == ProbeTask::kBinary) {
    std::int64_t tp = 0, fp = 0, fn = 0;
    for (Index i = 0; i < test.size(); ++i) {
      const bool pred = preds[static_cast<std::size_t>(i)] == 1;
      const bool truth = test.labels()[static_cast<std::size_t>(i)] == 1;
      if (pred && truth) ++tp;
      if (pred && !truth) ++fp;
      if (!pred && truth) ++fn;
    }
    report.binary_f1 = f1_score(tp, fp, fn);
    return report;
  }

  const Index num_classes = test.num_classes();
  std::vector<std::int64_t> tp(num_classes, 0), fp(num_classes, 0), fn(num_classes, 0);
  for (Index i = 0; i < test.size(); ++i) {
    const auto pred = preds[static_cast<std::size_t>(i)];
    const auto truth = test.labels()[static_cast<std::size_t>(i)];
    if (pred == truth) {
      ++tp[static_cast<std::size_t>(pred)];
    } else {
      ++fp[static_cast<std::size_t>(pred)];
      ++fn[static_cast<std::size_t>(truth)];
    }
  }
  std::int64_t tp_all = 0, fp_all = 0, fn_all = 0;
  for (Index c = 0; c < num_classes; ++c) {
    report.per_class_f1.push_back(f1_score(tp[static_cast<std::size_t>(c)],
                                           fp[static_cast<std::size_t>(c)],
                                           fn[static_cast<std::size_t>(c)]));
    tp_all += tp[static_cast<std::size_t>(c)];
    fp_all += fp[static_cast<std::size_t>(c)];
    fn_all += fn[static_cast<std::size_t>(c)];
  }
  report.micro_f1 = f1_score(tp_all, fp_all, fn_all);
  return report;
}

double gradient_check(ProbeTask task, const LinearProbe &probe,
                      const ProbeDataset &batch) {
  check_task_labels(batch, task, "gradient_check");
  if (task != probe.task()) {
    throw InvalidArgument("gradient_check task disagrees with the probe");
  }
  const RowMatrixd x = batch.inputs().cast<double>();
  RowMatrixd gw;
  Eigen::VectorXd gb;
  loss_and_grad(probe, x, batch.labels(), &gw, &gb);

  const double h = 1e-5;
  double max_rel = 0.0;
  auto update = [&max_rel](double analytic, double fd) {
    const double denom = std::max({1.0, std::abs(analytic), std::abs(fd)});
    max_rel = std::max(max_rel, std::abs(analytic - fd) / denom);
  };

  RowMatrixd w = probe.weights();
  Eigen::VectorXd b = probe.bias();
  for (Index r = 0; r < w.rows(); ++r) {
    for (Index c = 0; c < w.cols(); ++c) {
      const double orig = w(r, c);
      w(r, c) = orig + h;
      const double lp = probe_loss(LinearProbe(task, w, b), x, batch.labels());
      w(r, c) = orig - h;
      const double lm = probe_loss(LinearProbe(task, w, b), x, batch.labels());
      w(r, c) = orig;
      update(gw(r, c), (lp - lm) / (2.0 * h));
    }
  }
  for (Index r = 0; r < b.size(); ++r) {
    const double orig = b(r);
    b(r) = orig + h;
    const double lp = probe_loss(LinearProbe(task, w, b), x, batch.labels());
    b(r) = orig - h;
    const double lm = probe_loss(LinearProbe(task, w, b), x, batch.labels());
    b(r) = orig;
    update(gb(r), (lp - lm) / (2.0 * h));
  }
  return max_rel;
}

std::string metrics_to_json(const MetricsReport &report) {
  nlohmann::json doc;
  doc["task"] = report.task == ProbeTask::kBinary ? "binary" : "multiclass";
  doc["num_examples"] = report.num_examples;
  doc["accuracy"] = report.accuracy;
  if (report.task == ProbeTask::kBinary) {
    doc["binary_f1"] = report.binary_f1;
  } else {
    doc["per_class_f1"] = report.per_class_f1;
    doc["micro_f1"] = report.micro_f1;
  }
  return doc.dump(2) + "\n";
}

}  // namespace svcq
