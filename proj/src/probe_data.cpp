// src/probe_data.cpp

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

#include "svcq/probe_data.hpp"

#include <set>

#include "svcq/serial.hpp"

namespace svcq {

const char *probe_input_kind_name(ProbeInputKind kind) {
  switch (kind) {
    case ProbeInputKind::kContinuous:
      return "continuous";
    case ProbeInputKind::kPrePooled:
      return "pre-pooled";
    case ProbeInputKind::kPostPooled:
      return "post-pooled";
    case ProbeInputKind::kFused:
      return "fused";
  }
  return "?";
}

std::optional<ProbeInputKind> probe_input_kind_from_name(const std::string &name) {
  for (ProbeInputKind kind :
       {ProbeInputKind::kContinuous, ProbeInputKind::kPrePooled,
        ProbeInputKind::kPostPooled, ProbeInputKind::kFused}) {
    if (name == probe_input_kind_name(kind)) return kind;
  }
  return std::nullopt;
}

namespace {

void collect_label_values(const nlohmann::json &value, const std::string &key,
                          std::set<std::string> *strings, std::int64_t *int_max,
                          bool *saw_int) {
  if (value.is_string()) {
    strings->insert(value.get<std::string>());
  } else if (value.is_number_integer()) {
    const std::int64_t v = value.get<std::int64_t>();
    if (v < 0) throw SchemaViolation("integer labels must be >= 0 for \"" + key + "\"");
    *int_max = std::max(*int_max, v);
    *saw_int = true;
  } else {
    throw SchemaViolation("label \"" + key + "\" must be a string or integer");
  }
}

}  // namespace

LabelMap LabelMap::build(const std::vector<const CorpusManifest *> &manifests,
                         const std::string &label_key) {
  std::set<std::string> strings;
  std::int64_t int_max = -1;
  bool saw_int = false;
  for (const CorpusManifest *m : manifests) {
    for (const ManifestEntry &entry : m->entries()) {
      if (!entry.labels.is_object() || !entry.labels.contains(label_key)) {
        throw SchemaViolation("utterance \"" + entry.id +
                              "\" has no label \"" + label_key + "\"");
      }
      const nlohmann::json &v = entry.labels.at(label_key);
      if (v.is_array()) {
        for (const nlohmann::json &item : v) {
          collect_label_values(item, label_key, &strings, &int_max, &saw_int);
        }
      } else {
        collect_label_values(v, label_key, &strings, &int_max, &saw_int);
      }
    }
  }
  if (saw_int && !strings.empty()) {
    throw SchemaViolation("label \"" + label_key +
                          "\" mixes string and integer values");
  }
  LabelMap map;
  if (saw_int) {
    map.num_classes_ = static_cast<Index>(int_max + 1);
  } else {
    std::int32_t next = 0;
    for (const std::string &s : strings) map.by_string_[s] = next++;
    map.num_classes_ = static_cast<Index>(map.by_string_.size());
  }
  if (map.num_classes_ < 2) {
    throw SchemaViolation("label \"" + label_key + "\" has fewer than two classes");
  }
  return map;
}

std::int32_t LabelMap::id_of(const nlohmann::json &value) const {
  if (value.is_string()) {
    const auto it = by_string_.find(value.get<std::string>());
    if (it == by_string_.end()) {
      throw LabelOutOfRange("unseen label value \"" + value.get<std::string>() + "\"");
    }
    return it->second;
  }
  if (value.is_number_integer()) {
    return static_cast<std::int32_t>(value.get<std::int64_t>());
  }
  throw SchemaViolation("label values must be strings or integers");
}

namespace {

struct UnitRows {
  RowMatrixf rows;
  // For pooled tiers: the segment index behind each row; for the frame
  // tier: the frame index.
  std::vector<std::int32_t> segment_indices;
};

UnitRows derive_rows(const FeatureMatrix &features, const FrameSpanMap &span_map,
                     const ProbeDataOptions &opts, const SvcModel *model,
                     const Segmentation &seg, const std::string &id) {
  const bool frame_tier = opts.tier == Tier::kFrame;
  auto all_frames = [&](Index t) {
    std::vector<std::int32_t> idx(static_cast<std::size_t>(t));
    for (Index i = 0; i < t; ++i) idx[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
    return idx;
  };
  if (opts.kind != ProbeInputKind::kContinuous && model == nullptr) {
    throw InvalidArgument("this probe input kind requires a trained model");
  }

  switch (opts.kind) {
    case ProbeInputKind::kContinuous: {
      if (frame_tier) {
        return {features.values(), all_frames(features.num_frames())};
      }
      PooledTier pooled = pool_segments(features, span_map, opts.tier);
      return {std::move(pooled.vectors), std::move(pooled.segment_indices)};
    }
    case ProbeInputKind::kPrePooled: {
      if (frame_tier) {
        const auto codes = assign_batch(model->codebook(Tier::kFrame), features.values());
        RowMatrixf rows(features.num_frames(), model->dim());
        for (Index i = 0; i < features.num_frames(); ++i) {
          rows.row(i) = model->codebook(Tier::kFrame)
                            .centroids()
                            .row(codes[static_cast<std::size_t>(i)]);
        }
        return {std::move(rows), all_frames(features.num_frames())};
      }
      PooledTier pooled = pool_segments(features, span_map, opts.tier);
      const Codebook &cb = model->codebook(opts.tier);
      RowMatrixf rows(pooled.size(), cb.dim());
      for (Index i = 0; i < pooled.size(); ++i) {
        rows.row(i) = cb.centroids().row(assign(cb, pooled.vectors.row(i)));
      }
      return {std::move(rows), std::move(pooled.segment_indices)};
    }
    case ProbeInputKind::kPostPooled: {
      const Codebook &frame_cb = model->codebook(Tier::kFrame);
      DsuStream frame_codes{Tier::kFrame, assign_batch(frame_cb, features.values())};
      if (frame_tier) {
        RowMatrixf rows(features.num_frames(), frame_cb.dim());
        for (Index i = 0; i < features.num_frames(); ++i) {
          rows.row(i) = frame_cb.centroids().row(
              frame_codes.codes[static_cast<std::size_t>(i)]);
        }
        return {std::move(rows), all_frames(features.num_frames())};
      }
      PooledTier pooled = post_pool_codes(frame_codes, frame_cb, span_map, opts.tier);
      return {std::move(pooled.vectors), std::move(pooled.segment_indices)};
    }
    case ProbeInputKind::kFused: {
      const EncodedUtterance encoded = encode_utterance(*model, features, seg, id);
      FusedFrameSequence fused = fuse_streams(encoded, *model);
      if (frame_tier) {
        return {fused.values(), all_frames(fused.num_frames())};
      }
      FeatureMatrix as_features(fused.values(), features.frame_hop());
      PooledTier pooled = pool_segments(as_features, span_map, opts.tier);
      return {std::move(pooled.vectors), std::move(pooled.segment_indices)};
    }
  }
  throw InvalidArgument("unknown probe input kind");
}

}  // namespace

ProbeDataset build_probe_dataset(const CorpusManifest &manifest,
                                 const std::string &split,
                                 const ProbeDataOptions &opts,
                                 const SvcModel *model, const LabelMap &labels) {
  const auto entries = manifest.split(split);
  if (entries.empty()) {
    throw EmptySplit("manifest has no entries in split \"" + split + "\"");
  }

  std::vector<UnitRows> all_rows;
  std::vector<std::vector<std::int32_t>> all_labels;
  Index total = 0;
  Index dim = -1;

  for (const ManifestEntry *entry : entries) {
    FeatureMatrix features = read_feature_matrix_file(entry->features);
    Segmentation seg = read_alignment_file(entry->alignment, opts.alignment);
    validate_frame_count(seg, features.frame_hop(), features.num_frames(), entry->id);
    FrameSpanMap span_map =
        build_frame_span_map(seg, features.frame_hop(), features.num_frames());

    UnitRows units = derive_rows(features, span_map, opts, model, seg, entry->id);
    if (dim < 0) dim = units.rows.cols();
    if (units.rows.cols() != dim) {
      throw DimMismatchAcrossCorpus("utterance \"" + entry->id +
                                    "\" disagrees on feature dim");
    }

    if (!entry->labels.is_object() || !entry->labels.contains(opts.label_key)) {
      throw SchemaViolation("utterance \"" + entry->id + "\" has no label \"" +
                            opts.label_key + "\"");
    }
    const nlohmann::json &value = entry->labels.at(opts.label_key);
    std::vector<std::int32_t> unit_labels;
    unit_labels.reserve(static_cast<std::size_t>(units.rows.rows()));
    if (value.is_array() && opts.label_broadcast_tier.has_value() &&
        *opts.label_broadcast_tier != opts.tier) {
      // One label per segment of a coarser tier, broadcast to every probe
      // unit that segment covers; uncovered units carry no label and are
      // dropped.
      const Tier broadcast = *opts.label_broadcast_tier;
      if (opts.tier != Tier::kFrame) {
        throw InvalidArgument(
            "label broadcasting is defined for frame-tier probing units");
      }
      const Index expected = broadcast == Tier::kUtterance
                                 ? 1
                                 : static_cast<Index>(seg.segments(broadcast).size());
      if (static_cast<Index>(value.size()) != expected) {
        throw SchemaViolation(
            "utterance \"" + entry->id + "\": label array has " +
            std::to_string(value.size()) + " entries but the " +
            tier_name(broadcast) + " tier has " + std::to_string(expected));
      }
      const auto &spans = span_map.spans(broadcast);
      std::vector<Index> keep;
      for (Index n = 0; n < units.rows.rows(); ++n) {
        const std::int32_t s = spans[static_cast<std::size_t>(
            units.segment_indices[static_cast<std::size_t>(n)])];
        if (s == FrameSpanMap::kUncovered) continue;
        keep.push_back(n);
        unit_labels.push_back(labels.id_of(value.at(static_cast<std::size_t>(s))));
      }
      RowMatrixf kept(static_cast<Index>(keep.size()), units.rows.cols());
      for (Index n = 0; n < kept.rows(); ++n) {
        kept.row(n) = units.rows.row(keep[static_cast<std::size_t>(n)]);
      }
      units.rows = std::move(kept);
      units.segment_indices.clear();
    } else if (value.is_array()) {
      // Per-segment labels, aligned with the tier's non-silence segments.
      Index expected;
      if (opts.tier == Tier::kFrame) {
        expected = features.num_frames();
      } else if (opts.tier == Tier::kUtterance) {
        expected = 1;
      } else {
        expected = static_cast<Index>(seg.segments(opts.tier).size());
      }
      if (static_cast<Index>(value.size()) != expected) {
        throw SchemaViolation(
            "utterance \"" + entry->id + "\": label array has " +
            std::to_string(value.size()) + " entries but the " +
            tier_name(opts.tier) + " tier has " + std::to_string(expected));
      }
      for (std::int32_t s : units.segment_indices) {
        unit_labels.push_back(labels.id_of(value.at(static_cast<std::size_t>(s))));
      }
    } else {
      const std::int32_t y = labels.id_of(value);
      unit_labels.assign(static_cast<std::size_t>(units.rows.rows()), y);
    }

    total += units.rows.rows();
    all_rows.push_back(std::move(units));
    all_labels.push_back(std::move(unit_labels));
  }

  RowMatrixf inputs(total, dim);
  std::vector<std::int32_t> flat_labels;
  flat_labels.reserve(static_cast<std::size_t>(total));
  Index at = 0;
  for (std::size_t i = 0; i < all_rows.size(); ++i) {
    inputs.middleRows(at, all_rows[i].rows.rows()) = all_rows[i].rows;
    at += all_rows[i].rows.rows();
    flat_labels.insert(flat_labels.end(), all_labels[i].begin(), all_labels[i].end());
  }
  return ProbeDataset(std::move(inputs), std::move(flat_labels),
                      labels.num_classes(), split);
}

}  // namespace svcq
