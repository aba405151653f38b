// src/pooling.cpp

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

#include "svcq/pooling.hpp"

#include <string>

namespace svcq {

namespace {

void check_pooled_tier(Tier tier, const char *op) {
  if (tier == Tier::kFrame) {
    throw InvalidArgument(std::string(op) +
                          ": tier must be phone, word or utterance");
  }
}

// Shared mean-pooling kernel over the rows selected by a span array.
PooledTier pool_rows(const Eigen::Ref<const RowMatrixf> &rows,
                     const FrameSpanMap &span_map, Tier tier) {
  const std::vector<std::int32_t> &spans = span_map.spans(tier);
  const Index num_segments = span_map.num_segments(tier);

  RowMatrixd sums = RowMatrixd::Zero(num_segments, rows.cols());
  std::vector<Index> counts(static_cast<std::size_t>(num_segments), 0);
  for (Index n = 0; n < rows.rows(); ++n) {
    const std::int32_t s = spans[static_cast<std::size_t>(n)];
    if (s == FrameSpanMap::kUncovered) continue;
    sums.row(s) += rows.row(n).cast<double>();
    ++counts[static_cast<std::size_t>(s)];
  }

  PooledTier out;
  Index covered = 0;
  for (Index s = 0; s < num_segments; ++s) {
    if (counts[static_cast<std::size_t>(s)] > 0) ++covered;
  }
  out.vectors.resize(covered, rows.cols());
  Index row = 0;
  for (Index s = 0; s < num_segments; ++s) {
    const Index c = counts[static_cast<std::size_t>(s)];
    if (c == 0) {
      ++out.empty_segments;
      continue;
    }
    out.segment_indices.push_back(static_cast<std::int32_t>(s));
    out.vectors.row(row++) = (sums.row(s) / static_cast<double>(c)).cast<float>();
  }
  return out;
}

}  // namespace

PooledTier pool_segments(const FeatureMatrix &features,
                         const FrameSpanMap &span_map, Tier tier) {
  check_pooled_tier(tier, "pool_segments");
  if (span_map.num_frames() != features.num_frames()) {
    throw DimensionMismatch("span map covers " +
                            std::to_string(span_map.num_frames()) +
                            " frames but features have " +
                            std::to_string(features.num_frames()));
  }
  return pool_rows(features.values(), span_map, tier);
}

PooledTier post_pool_codes(const DsuStream &frame_codes,
                           const Codebook &frame_codebook,
                           const FrameSpanMap &span_map, Tier tier) {
  check_pooled_tier(tier, "post_pool_codes");
  if (frame_codes.size() != span_map.num_frames()) {
    throw DimensionMismatch("frame code count " +
                            std::to_string(frame_codes.size()) +
                            " != span map frames " +
                            std::to_string(span_map.num_frames()));
  }
  RowMatrixf decoded(frame_codes.size(), frame_codebook.dim());
  for (Index n = 0; n < frame_codes.size(); ++n) {
    const std::int32_t code = frame_codes.codes[static_cast<std::size_t>(n)];
    if (code < 0 || code >= frame_codebook.k()) {
      throw CodeOutOfRange("frame code " + std::to_string(code) +
                           " outside [0, " + std::to_string(frame_codebook.k()) + ")");
    }
    decoded.row(n) = frame_codebook.centroids().row(code);
  }
  return pool_rows(decoded, span_map, tier);
}

FusedFrameSequence fuse_streams(const EncodedUtterance &encoded,
                                const SvcModel &model) {
  const Index t_frames = encoded.num_frames();
  const Index dim = model.dim();
  const DsuStream &frames = encoded.stream(Tier::kFrame);

  auto centroid_of = [&](Tier tier, std::int32_t code) -> Eigen::RowVectorXd {
    const Codebook &cb = model.codebook(tier);
    if (code < 0 || code >= cb.k()) {
      throw CodeOutOfRange(std::string(tier_name(tier)) + " code " +
                           std::to_string(code) + " outside [0, " +
                           std::to_string(cb.k()) + ")");
    }
    return cb.centroids().row(code).cast<double>();
  };

  // Map segment index -> stream position for each pooled tier. Streams hold
  // codes for covered segments only, in ascending segment order.
  std::array<std::vector<std::int32_t>, 4> seg_to_pos;
  for (Tier tier : kPooledTiers) {
    const auto &spans = encoded.span_map().spans(tier);
    auto &pos_map = seg_to_pos[tier_index(tier)];
    pos_map.assign(
        static_cast<std::size_t>(encoded.span_map().num_segments(tier)), -1);
    std::int32_t next_pos = 0;
    for (std::int32_t s : spans) {
      if (s == FrameSpanMap::kUncovered) continue;
      if (pos_map[static_cast<std::size_t>(s)] < 0) {
        pos_map[static_cast<std::size_t>(s)] = next_pos++;
      }
    }
    if (next_pos != encoded.stream(tier).size()) {
      throw ModelMismatch(std::string(tier_name(tier)) +
                          " stream length disagrees with the span map");
    }
  }

  RowMatrixf fused(t_frames, dim);
  Eigen::RowVectorXd acc(dim);
  for (Index n = 0; n < t_frames; ++n) {
    acc = centroid_of(Tier::kFrame, frames.codes[static_cast<std::size_t>(n)]);
    int participants = 1;
    for (Tier tier : kPooledTiers) {
      const std::int32_t s =
          encoded.span_map().spans(tier)[static_cast<std::size_t>(n)];
      if (s == FrameSpanMap::kUncovered) continue;
      const std::int32_t pos = seg_to_pos[tier_index(tier)][static_cast<std::size_t>(s)];
      acc += centroid_of(tier, encoded.stream(tier).codes[static_cast<std::size_t>(pos)]);
      ++participants;
    }
    fused.row(n) = (acc / static_cast<double>(participants)).cast<float>();
  }
  return FusedFrameSequence(std::move(fused));
}

}  // namespace svcq
