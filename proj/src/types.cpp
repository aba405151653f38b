// src/types.cpp

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

#include "svcq/types.hpp"

#include <cmath>
#include <utility>

namespace svcq {

const char *tier_name(Tier t) {
  switch (t) {
    case Tier::kFrame:
      return "frame";
    case Tier::kPhone:
      return "phone";
    case Tier::kWord:
      return "word";
    case Tier::kUtterance:
      return "utterance";
  }
  return "?";
}

std::optional<Tier> tier_from_name(const std::string &name) {
  for (Tier t : kAllTiers) {
    if (name == tier_name(t)) return t;
  }
  return std::nullopt;
}

FeatureMatrix::FeatureMatrix(RowMatrixf values, double frame_hop)
    : values_(std::move(values)), frame_hop_(frame_hop) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw InvalidArgument("FeatureMatrix requires num_frames >= 1 and dim >= 1");
  }
  if (!(frame_hop_ > 0.0) || !std::isfinite(frame_hop_)) {
    throw InvalidArgument("FeatureMatrix frame_hop must be positive");
  }
  if (!values_.allFinite()) {
    throw NonFiniteData("FeatureMatrix contains NaN or Inf values");
  }
}

Segment::Segment(Tier tier, std::string label, double start, double end)
    : tier(tier), label(std::move(label)), start(start), end(end) {
  if (!std::isfinite(start) || !std::isfinite(end)) {
    throw InvalidArgument("Segment bounds must be finite");
  }
  if (start < 0.0) {
    throw InvalidArgument("Segment start must be >= 0");
  }
  if (!(end > start)) {
    throw InvalidArgument("Segment end must be > start");
  }
}

namespace {

void check_tier_segments(const std::vector<Segment> &segs, Tier tier,
                         double duration) {
  const Segment *prev = nullptr;
  for (const Segment &s : segs) {
    if (s.tier != tier) {
      throw InvalidArgument(std::string("segment tier mismatch in ") +
                            tier_name(tier) + " tier");
    }
    if (s.end > duration + 1e-9) {
      throw InvalidArgument(std::string(tier_name(tier)) +
                            " segment extends past the utterance duration");
    }
    if (prev != nullptr) {
      if (s.start < prev->start) {
        throw InvalidArgument(std::string(tier_name(tier)) +
                              " segments are not sorted by start");
      }
      if (s.start < prev->end - 1e-9) {
        throw InvalidArgument(std::string(tier_name(tier)) +
                              " segments overlap");
      }
    }
    prev = &s;
  }
}

}  // namespace

Segmentation::Segmentation(double duration, std::vector<Segment> phones,
                           std::vector<Segment> words)
    : duration_(duration), phones_(std::move(phones)), words_(std::move(words)) {
  if (!(duration_ > 0.0) || !std::isfinite(duration_)) {
    throw InvalidArgument("Segmentation duration must be positive");
  }
  check_tier_segments(phones_, Tier::kPhone, duration_);
  check_tier_segments(words_, Tier::kWord, duration_);
}

const std::vector<Segment> &Segmentation::segments(Tier tier) const {
  switch (tier) {
    case Tier::kPhone:
      return phones_;
    case Tier::kWord:
      return words_;
    default:
      throw InvalidArgument(
          "Segmentation::segments is defined for phone and word tiers only");
  }
}

namespace {

void check_span_array(const std::vector<std::int32_t> &spans, Index num_frames,
                      Index num_segments, const char *name) {
  if (static_cast<Index>(spans.size()) != num_frames) {
    throw InvalidArgument(std::string("FrameSpanMap ") + name +
                          " array length must equal num_frames");
  }
  std::int32_t prev = FrameSpanMap::kUncovered;
  for (std::int32_t s : spans) {
    if (s != FrameSpanMap::kUncovered &&
        (s < 0 || static_cast<Index>(s) >= num_segments)) {
      throw InvalidArgument(std::string("FrameSpanMap ") + name +
                            " entry out of segment range");
    }
    if (s != FrameSpanMap::kUncovered && prev != FrameSpanMap::kUncovered &&
        s < prev) {
      throw InvalidArgument(std::string("FrameSpanMap ") + name +
                            " entries must be monotone");
    }
    if (s != FrameSpanMap::kUncovered) prev = s;
  }
}

}  // namespace

FrameSpanMap::FrameSpanMap(Index num_frames,
                           std::vector<std::int32_t> phone_spans,
                           std::vector<std::int32_t> word_spans,
                           Index num_phone_segments, Index num_word_segments)
    : num_frames_(num_frames),
      phone_spans_(std::move(phone_spans)),
      word_spans_(std::move(word_spans)),
      num_phone_segments_(num_phone_segments),
      num_word_segments_(num_word_segments) {
  if (num_frames_ < 1) {
    throw InvalidArgument("FrameSpanMap requires num_frames >= 1");
  }
  check_span_array(phone_spans_, num_frames_, num_phone_segments_, "phone");
  check_span_array(word_spans_, num_frames_, num_word_segments_, "word");
  // Utterance tier covers all frames by construction.
  utterance_spans_.assign(static_cast<std::size_t>(num_frames_), 0);
}

const std::vector<std::int32_t> &FrameSpanMap::spans(Tier tier) const {
  switch (tier) {
    case Tier::kPhone:
      return phone_spans_;
    case Tier::kWord:
      return word_spans_;
    case Tier::kUtterance:
      return utterance_spans_;
    default:
      throw InvalidArgument("FrameSpanMap has no span array for the frame tier");
  }
}

Index FrameSpanMap::num_segments(Tier tier) const {
  switch (tier) {
    case Tier::kPhone:
      return num_phone_segments_;
    case Tier::kWord:
      return num_word_segments_;
    case Tier::kUtterance:
      return 1;
    default:
      throw InvalidArgument("FrameSpanMap has no segments for the frame tier");
  }
}

Codebook::Codebook(Tier tier, RowMatrixf centroids, TrainingMeta meta)
    : tier_(tier), centroids_(std::move(centroids)), meta_(meta) {
  if (centroids_.rows() < 1 || centroids_.cols() < 1) {
    throw InvalidArgument("Codebook requires k >= 1 and dim >= 1");
  }
  if (!centroids_.allFinite()) {
    throw NonFiniteData("Codebook centroids contain NaN or Inf values");
  }
}

SvcModel::SvcModel(std::vector<Codebook> codebooks, double frame_hop)
    : codebooks_(std::move(codebooks)), frame_hop_(frame_hop) {
  if (codebooks_.size() != kAllTiers.size()) {
    throw InvalidArgument("SvcModel requires exactly four codebooks");
  }
  for (Tier t : kAllTiers) {
    if (codebooks_[tier_index(t)].tier() != t) {
      throw InvalidArgument("SvcModel codebooks must be ordered by tier");
    }
    if (codebooks_[tier_index(t)].dim() != codebooks_[0].dim()) {
      throw ModelMismatch("SvcModel codebooks disagree on feature dim");
    }
  }
  if (!(frame_hop_ > 0.0) || !std::isfinite(frame_hop_)) {
    throw InvalidArgument("SvcModel frame_hop must be positive");
  }
}

EncodedUtterance::EncodedUtterance(std::string utterance_id,
                                   std::array<DsuStream, 4> streams,
                                   double duration, FrameSpanMap span_map,
                                   double frame_hop)
    : utterance_id_(std::move(utterance_id)),
      streams_(std::move(streams)),
      duration_(duration),
      span_map_(std::move(span_map)) {
  if (!(duration_ > 0.0) || !std::isfinite(duration_)) {
    throw InvalidArgument("EncodedUtterance duration must be positive");
  }
  for (Tier t : kAllTiers) {
    if (streams_[tier_index(t)].tier != t) {
      throw InvalidArgument("EncodedUtterance streams must be ordered by tier");
    }
  }
  const auto t_frames = streams_[tier_index(Tier::kFrame)].size();
  if (t_frames < 1) {
    throw InvalidArgument("EncodedUtterance frame stream must be non-empty");
  }
  if (std::abs(static_cast<double>(t_frames) * frame_hop - duration_) >
      frame_hop + 1e-9) {
    throw InvalidArgument(
        "EncodedUtterance frame stream length x frame_hop must equal the "
        "duration within one hop");
  }
  if (span_map_.num_frames() != t_frames) {
    throw InvalidArgument(
        "EncodedUtterance span map length must equal the frame stream length");
  }
  for (Tier t : kPooledTiers) {
    Index covered = 0;
    std::int32_t prev = FrameSpanMap::kUncovered;
    for (std::int32_t s : span_map_.spans(t)) {
      if (s != FrameSpanMap::kUncovered && s != prev) {
        ++covered;
        prev = s;
      }
    }
    if (streams_[tier_index(t)].size() != covered) {
      throw InvalidArgument(std::string("EncodedUtterance ") + tier_name(t) +
                            " stream length must equal the covered segment "
                            "count");
    }
  }
}

FusedFrameSequence::FusedFrameSequence(RowMatrixf values)
    : values_(std::move(values)) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw InvalidArgument("FusedFrameSequence must be non-empty");
  }
  if (!values_.allFinite()) {
    throw NonFiniteData("FusedFrameSequence contains NaN or Inf values");
  }
}

BitrateReport::BitrateReport(std::array<double, 4> bits, double dur)
    : stream_bits(bits), duration(dur) {
  if (!(duration > 0.0) || !std::isfinite(duration)) {
    throw ZeroDuration("BitrateReport duration must be positive");
  }
  for (double b : stream_bits) {
    if (b < 0.0 || !std::isfinite(b)) {
      throw InvalidArgument("BitrateReport stream bits must be non-negative");
    }
    total_bits += b;
  }
  bits_per_second = total_bits / duration;
}

}  // namespace svcq
