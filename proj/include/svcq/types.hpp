// include/svcq/types.hpp

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

// Domain types shared by every module. All types validate their invariants
// at construction and are immutable afterwards, so instances are safe to
// share across threads.

#ifndef SVCQ_TYPES_HPP_
#define SVCQ_TYPES_HPP_

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "svcq/errors.hpp"

namespace svcq {

template <typename Scalar>
using RowMatrix =
    Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RowMatrixf = RowMatrix<float>;
using RowMatrixd = RowMatrix<double>;

using Index = Eigen::Index;

// Storage is float, accumulation is double throughout: segment pooling and
// KMeans updates sum over large numbers of frames.
using Feature = float;

// The four segmentation granularities, ordered fine to coarse.
enum class Tier : std::uint8_t {
  kFrame = 0,
  kPhone = 1,
  kWord = 2,
  kUtterance = 3,
};

inline constexpr std::array<Tier, 4> kAllTiers = {
    Tier::kFrame, Tier::kPhone, Tier::kWord, Tier::kUtterance};

// Tiers pooled over alignment segments (everything but kFrame).
inline constexpr std::array<Tier, 3> kPooledTiers = {
    Tier::kPhone, Tier::kWord, Tier::kUtterance};

constexpr std::size_t tier_index(Tier t) { return static_cast<std::size_t>(t); }

const char *tier_name(Tier t);
std::optional<Tier> tier_from_name(const std::string &name);

// T x D frame-wise continuous representations plus the frame hop in seconds.
class FeatureMatrix {
 public:
  FeatureMatrix(RowMatrixf values, double frame_hop);

  Index num_frames() const { return values_.rows(); }
  Index dim() const { return values_.cols(); }
  double frame_hop() const { return frame_hop_; }
  const RowMatrixf &values() const { return values_; }
  double duration() const {
    return static_cast<double>(values_.rows()) * frame_hop_;
  }

 private:
  RowMatrixf values_;
  double frame_hop_;
};

// Default 20 ms hop (50 frames/second).
inline constexpr double kDefaultFrameHop = 0.020;

// One time-stamped interval of a segmentation tier.
struct Segment {
  Tier tier;
  std::string label;
  double start = 0.0;  // seconds
  double end = 0.0;    // seconds

  Segment(Tier tier, std::string label, double start, double end);
};

// Per-tier ordered, non-overlapping segment lists. The utterance tier is the
// single implicit segment spanning [0, duration).
class Segmentation {
 public:
  Segmentation(double duration, std::vector<Segment> phones,
               std::vector<Segment> words);

  double duration() const { return duration_; }
  const std::vector<Segment> &phones() const { return phones_; }
  const std::vector<Segment> &words() const { return words_; }
  Segment utterance_segment() const {
    return Segment(Tier::kUtterance, "", 0.0, duration_);
  }
  // Valid for kPhone and kWord only.
  const std::vector<Segment> &segments(Tier tier) const;

 private:
  double duration_;
  std::vector<Segment> phones_;
  std::vector<Segment> words_;
};

// Per-frame segment membership for the pooled tiers, resolved with the
// frame-center rule: frame n covers a segment when (n + 0.5) * frame_hop
// lies in the segment's half-open interval [start, end).
class FrameSpanMap {
 public:
  static constexpr std::int32_t kUncovered = -1;

  FrameSpanMap(Index num_frames, std::vector<std::int32_t> phone_spans,
               std::vector<std::int32_t> word_spans, Index num_phone_segments,
               Index num_word_segments);

  Index num_frames() const { return num_frames_; }
  // Entry n is a segment index into the tier's segment list, or kUncovered.
  // The utterance tier maps every frame to segment 0.
  const std::vector<std::int32_t> &spans(Tier tier) const;
  Index num_segments(Tier tier) const;

 private:
  Index num_frames_;
  std::vector<std::int32_t> phone_spans_;
  std::vector<std::int32_t> word_spans_;
  std::vector<std::int32_t> utterance_spans_;
  Index num_phone_segments_;
  Index num_word_segments_;
};

struct TrainingMeta {
  std::uint64_t seed = 0;
  std::uint32_t iterations_run = 0;
  double final_inertia = 0.0;
};

// k x D centroid table for one segmentation tier.
class Codebook {
 public:
  Codebook(Tier tier, RowMatrixf centroids, TrainingMeta meta);

  Tier tier() const { return tier_; }
  Index k() const { return centroids_.rows(); }
  Index dim() const { return centroids_.cols(); }
  const RowMatrixf &centroids() const { return centroids_; }
  const TrainingMeta &meta() const { return meta_; }

 private:
  Tier tier_;
  RowMatrixf centroids_;
  TrainingMeta meta_;
};

// One codebook per tier, all sharing the feature dimension.
class SvcModel {
 public:
  SvcModel(std::vector<Codebook> codebooks, double frame_hop);

  const Codebook &codebook(Tier tier) const {
    return codebooks_[tier_index(tier)];
  }
  Index dim() const { return codebooks_[0].dim(); }
  double frame_hop() const { return frame_hop_; }

 private:
  std::vector<Codebook> codebooks_;  // indexed by tier
  double frame_hop_;
};

// Ordered code ids for one tier; every id lies in [0, k).
struct DsuStream {
  Tier tier;
  std::vector<std::int32_t> codes;

  Index size() const { return static_cast<Index>(codes.size()); }
};

// Four parallel DSU streams plus the timing metadata needed for fusion and
// bitrate accounting.
class EncodedUtterance {
 public:
  EncodedUtterance(std::string utterance_id, std::array<DsuStream, 4> streams,
                   double duration, FrameSpanMap span_map, double frame_hop);

  const std::string &utterance_id() const { return utterance_id_; }
  const DsuStream &stream(Tier tier) const {
    return streams_[tier_index(tier)];
  }
  double duration() const { return duration_; }
  const FrameSpanMap &span_map() const { return span_map_; }
  Index num_frames() const { return streams_[0].size(); }

 private:
  std::string utterance_id_;
  std::array<DsuStream, 4> streams_;
  double duration_;
  FrameSpanMap span_map_;
};

// T x D frame-aligned output of multi-stream fusion.
class FusedFrameSequence {
 public:
  explicit FusedFrameSequence(RowMatrixf values);

  Index num_frames() const { return values_.rows(); }
  Index dim() const { return values_.cols(); }
  const RowMatrixf &values() const { return values_; }

 private:
  RowMatrixf values_;
};

// Per-stream and total bit accounting for one encoded utterance.
struct BitrateReport {
  std::array<double, 4> stream_bits = {0.0, 0.0, 0.0, 0.0};  // by tier
  double total_bits = 0.0;
  double duration = 0.0;  // seconds
  double bits_per_second = 0.0;

  BitrateReport() = default;
  BitrateReport(std::array<double, 4> stream_bits, double duration);
};

}  // namespace svcq

#endif  // SVCQ_TYPES_HPP_
