// src/codec.cpp

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

#include "svcq/codec.hpp"

#include <cmath>

#include <json.hpp>

#include "svcq/serial.hpp"

namespace svcq {

namespace {

struct LoadedUtterance {
  FeatureMatrix features;
  Segmentation seg;
  FrameSpanMap span_map;
};

LoadedUtterance load_utterance(const ManifestEntry &entry,
                               const AlignmentReadOptions &opts) {
  FeatureMatrix features = read_feature_matrix_file(entry.features);
  Segmentation seg = read_alignment_file(entry.alignment, opts);
  validate_frame_count(seg, features.frame_hop(), features.num_frames(), entry.id);
  FrameSpanMap span_map =
      build_frame_span_map(seg, features.frame_hop(), features.num_frames());
  return {std::move(features), std::move(seg), std::move(span_map)};
}

// Per-dimension standardization wrapper around the clustering call: when
// enabled, cluster (x - mu) / sigma and map the centroids back through
// c * sigma + mu so the codebook lives in raw feature space.
std::pair<Codebook, TrainingStats> train_tier(Tier tier, const RowMatrixf &data,
                                              Index k, std::uint64_t seed,
                                              const TrainOptions &opts) {
  if (data.rows() < k) {
    throw TooFewPoints(std::string(tier_name(tier)) + " tier has " +
                       std::to_string(data.rows()) + " training vectors for k = " +
                       std::to_string(k));
  }
  if (!opts.standardize) {
    RowMatrixf init = kmeanspp_init<float>(data, k, seed);
    return lloyd_train(tier, data, init, seed, opts.kmeans);
  }

  const Eigen::RowVectorXd mu =
      data.cast<double>().colwise().sum() / static_cast<double>(data.rows());
  Eigen::RowVectorXd var(data.cols());
  var.setZero();
  for (Index i = 0; i < data.rows(); ++i) {
    var += (data.row(i).cast<double>() - mu).array().square().matrix();
  }
  var /= static_cast<double>(data.rows());
  const Eigen::RowVectorXd sigma =
      var.array().sqrt().max(1e-12).matrix();  // guard constant dimensions

  RowMatrixf scaled(data.rows(), data.cols());
  for (Index i = 0; i < data.rows(); ++i) {
    scaled.row(i) =
        ((data.row(i).cast<double>() - mu).array() / sigma.array()).cast<float>();
  }
  RowMatrixf init = kmeanspp_init<float>(scaled, k, seed);
  auto [cb_scaled, stats] = lloyd_train(tier, scaled, init, seed, opts.kmeans);
  RowMatrixf centroids(k, data.cols());
  for (Index c = 0; c < k; ++c) {
    centroids.row(c) = (cb_scaled.centroids().row(c).cast<double>().array() *
                            sigma.array() + mu.array())
                           .cast<float>();
  }
  return {Codebook(tier, std::move(centroids), cb_scaled.meta()), std::move(stats)};
}

constexpr const char *kModelManifestName = "model.json";

}  // namespace

TrainResult train_svc(const CorpusManifest &manifest, const TrainOptions &opts) {
  const auto train_entries = manifest.split("train");
  if (train_entries.empty()) {
    throw EmptySplit("manifest has no train-split entries");
  }

  // First pass: load everything, fixing dim and hop from the first entry.
  std::vector<LoadedUtterance> loaded;
  loaded.reserve(train_entries.size());
  for (const ManifestEntry *entry : train_entries) {
    loaded.push_back(load_utterance(*entry, opts.alignment));
    const LoadedUtterance &lu = loaded.back();
    if (lu.features.dim() != loaded.front().features.dim()) {
      throw DimMismatchAcrossCorpus(
          "utterance \"" + entry->id + "\" has dim " +
          std::to_string(lu.features.dim()) + " but the corpus started with " +
          std::to_string(loaded.front().features.dim()));
    }
  }
  const Index dim = loaded.front().features.dim();
  const double frame_hop = loaded.front().features.frame_hop();

  // Frame tier trains on raw rows; pooled tiers on their pooled vectors.
  // Concatenation follows manifest order.
  std::array<RowMatrixf, 4> tier_data;
  {
    Index total_frames = 0;
    for (const LoadedUtterance &lu : loaded) total_frames += lu.features.num_frames();
    tier_data[tier_index(Tier::kFrame)].resize(total_frames, dim);
    Index at = 0;
    for (const LoadedUtterance &lu : loaded) {
      tier_data[tier_index(Tier::kFrame)]
          .middleRows(at, lu.features.num_frames()) = lu.features.values();
      at += lu.features.num_frames();
    }
  }
  for (Tier tier : kPooledTiers) {
    std::vector<PooledTier> pooled;
    pooled.reserve(loaded.size());
    Index total = 0;
    for (const LoadedUtterance &lu : loaded) {
      pooled.push_back(pool_segments(lu.features, lu.span_map, tier));
      total += pooled.back().size();
    }
    RowMatrixf &data = tier_data[tier_index(tier)];
    data.resize(total, dim);
    Index at = 0;
    for (const PooledTier &p : pooled) {
      data.middleRows(at, p.size()) = p.vectors;
      at += p.size();
    }
  }

  std::vector<Codebook> codebooks;
  std::array<TrainingStats, 4> stats;
  for (Tier tier : kAllTiers) {
    const std::uint64_t tier_seed = opts.seed + tier_index(tier);
    auto [cb, st] = train_tier(tier, tier_data[tier_index(tier)],
                               opts.k_per_tier[tier_index(tier)], tier_seed, opts);
    codebooks.push_back(std::move(cb));
    stats[tier_index(tier)] = std::move(st);
  }
  return {SvcModel(std::move(codebooks), frame_hop), std::move(stats)};
}

EncodedUtterance encode_utterance(const SvcModel &model,
                                  const FeatureMatrix &features,
                                  const Segmentation &seg,
                                  const std::string &utterance_id) {
  if (features.dim() != model.dim()) {
    throw DimensionMismatch("features dim " + std::to_string(features.dim()) +
                            " != model dim " + std::to_string(model.dim()));
  }
  validate_frame_count(seg, features.frame_hop(), features.num_frames(),
                       utterance_id);
  FrameSpanMap span_map =
      build_frame_span_map(seg, features.frame_hop(), features.num_frames());

  std::array<DsuStream, 4> streams;
  streams[tier_index(Tier::kFrame)] = DsuStream{
      Tier::kFrame,
      assign_batch(model.codebook(Tier::kFrame), features.values())};
  for (Tier tier : kPooledTiers) {
    const PooledTier pooled = pool_segments(features, span_map, tier);
    std::vector<std::int32_t> codes;
    codes.reserve(static_cast<std::size_t>(pooled.size()));
    for (Index i = 0; i < pooled.size(); ++i) {
      codes.push_back(assign(model.codebook(tier), pooled.vectors.row(i)));
    }
    streams[tier_index(tier)] = DsuStream{tier, std::move(codes)};
  }

  const double duration =
      static_cast<double>(features.num_frames()) * features.frame_hop();
  return EncodedUtterance(utterance_id, std::move(streams), duration,
                          std::move(span_map), features.frame_hop());
}

FusedFrameSequence decode_fused(const SvcModel &model,
                                const EncodedUtterance &encoded) {
  return fuse_streams(encoded, model);
}

BitrateReport utterance_bitrate(const EncodedUtterance &encoded,
                                const SvcModel &model, bool frames_only) {
  if (!(encoded.duration() > 0.0)) {
    throw ZeroDuration("utterance duration must be positive");
  }
  std::array<double, 4> bits = {0.0, 0.0, 0.0, 0.0};
  for (Tier tier : kAllTiers) {
    if (frames_only && tier != Tier::kFrame) continue;
    const double n_units = static_cast<double>(encoded.stream(tier).size());
    const double vocab = static_cast<double>(model.codebook(tier).k());
    bits[tier_index(tier)] = n_units * std::log2(vocab);
  }
  return BitrateReport(bits, encoded.duration());
}

CorpusBitrate corpus_bitrate(const std::vector<BitrateReport> &reports) {
  if (reports.empty()) {
    throw EmptyInput("corpus_bitrate needs at least one report");
  }
  CorpusBitrate out;
  out.utterances = reports.size();
  double total_bits = 0.0;
  double total_seconds = 0.0;
  double sum_bps = 0.0;
  for (const BitrateReport &r : reports) {
    sum_bps += r.bits_per_second;
    total_bits += r.total_bits;
    total_seconds += r.duration;
  }
  out.mean_bps = sum_bps / static_cast<double>(reports.size());
  out.pooled_bps = total_bits / total_seconds;
  return out;
}

void save_model(const SvcModel &model, const std::filesystem::path &dir) {
  std::filesystem::create_directories(dir);
  nlohmann::json manifest;
  manifest["format"] = "svcq-model";
  manifest["version"] = 1;
  manifest["dim"] = model.dim();
  manifest["frame_hop"] = model.frame_hop();
  nlohmann::json files;
  for (Tier tier : kAllTiers) {
    const std::string name = std::string("codebook_") + tier_name(tier) + ".svcb";
    write_codebook_file(dir / name, model.codebook(tier));
    files[tier_name(tier)] = name;
  }
  manifest["codebooks"] = files;
  write_file_bytes(dir / kModelManifestName, manifest.dump(2) + "\n");
}

SvcModel load_model(const std::filesystem::path &path) {
  const std::filesystem::path manifest_path =
      std::filesystem::is_directory(path) ? path / kModelManifestName : path;
  nlohmann::json manifest;
  try {
    manifest = nlohmann::json::parse(read_file_bytes(manifest_path));
  } catch (const nlohmann::json::parse_error &e) {
    throw MalformedJson("model manifest: " + std::string(e.what()));
  }
  if (!manifest.is_object() || manifest.value("format", "") != "svcq-model") {
    throw SchemaViolation("not a svcq model manifest: " + manifest_path.string());
  }
  const std::filesystem::path base = manifest_path.parent_path();
  std::vector<Codebook> codebooks;
  for (Tier tier : kAllTiers) {
    const std::string name = manifest.at("codebooks").at(tier_name(tier));
    Codebook cb = read_codebook_file(base / name);
    if (cb.tier() != tier) {
      throw SchemaViolation(std::string("codebook file for the ") +
                            tier_name(tier) + " tier holds a " +
                            tier_name(cb.tier()) + " codebook");
    }
    codebooks.push_back(std::move(cb));
  }
  return SvcModel(std::move(codebooks), manifest.at("frame_hop").get<double>());
}

std::string encoded_to_json(const EncodedUtterance &encoded, double frame_hop) {
  nlohmann::json doc;
  doc["format"] = "svcq-encoded";
  doc["version"] = 1;
  doc["id"] = encoded.utterance_id();
  doc["duration"] = encoded.duration();
  doc["frame_hop"] = frame_hop;
  nlohmann::json streams;
  for (Tier tier : kAllTiers) {
    streams[tier_name(tier)] = encoded.stream(tier).codes;
  }
  doc["streams"] = std::move(streams);
  nlohmann::json spans;
  for (Tier tier : kPooledTiers) {
    if (tier == Tier::kUtterance) continue;  // implicit: every frame, segment 0
    spans[tier_name(tier)] = encoded.span_map().spans(tier);
  }
  doc["span_map"] = std::move(spans);
  doc["num_segments"] = {
      {tier_name(Tier::kPhone), encoded.span_map().num_segments(Tier::kPhone)},
      {tier_name(Tier::kWord), encoded.span_map().num_segments(Tier::kWord)}};
  return doc.dump(2) + "\n";
}

EncodedUtterance encoded_from_json(std::string_view text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error &e) {
    throw MalformedJson("encoded utterance: " + std::string(e.what()));
  }
  if (!doc.is_object() || doc.value("format", "") != "svcq-encoded") {
    throw SchemaViolation("not an encoded-utterance document");
  }
  try {
    std::array<DsuStream, 4> streams;
    for (Tier tier : kAllTiers) {
      streams[tier_index(tier)] = DsuStream{
          tier, doc.at("streams").at(tier_name(tier)).get<std::vector<std::int32_t>>()};
    }
    FrameSpanMap span_map(
        streams[tier_index(Tier::kFrame)].size(),
        doc.at("span_map").at("phone").get<std::vector<std::int32_t>>(),
        doc.at("span_map").at("word").get<std::vector<std::int32_t>>(),
        doc.at("num_segments").at("phone").get<Index>(),
        doc.at("num_segments").at("word").get<Index>());
    return EncodedUtterance(doc.value("id", ""), std::move(streams),
                            doc.at("duration").get<double>(), std::move(span_map),
                            doc.at("frame_hop").get<double>());
  } catch (const nlohmann::json::exception &e) {
    throw SchemaViolation("encoded utterance: " + std::string(e.what()));
  }
}

}  // namespace svcq
