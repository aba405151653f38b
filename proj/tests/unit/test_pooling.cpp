// tests/unit/test_pooling.cpp

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

#include <doctest.h>

#include "svcq/alignment.hpp"
#include "svcq/pooling.hpp"
#include "svcq/rng.hpp"

using namespace svcq;

namespace {

Segmentation simple_seg(double duration, int phones, int words) {
  std::vector<Segment> ph, wd;
  for (int p = 0; p < phones; ++p) {
    ph.emplace_back(Tier::kPhone, "p" + std::to_string(p),
                    duration * p / phones, duration * (p + 1) / phones);
  }
  for (int w = 0; w < words; ++w) {
    wd.emplace_back(Tier::kWord, "w" + std::to_string(w),
                    duration * w / words, duration * (w + 1) / words);
  }
  return Segmentation(duration, ph, wd);
}

RowMatrixf random_matrix(Index rows, Index cols, std::uint64_t seed) {
  Rng rng(seed);
  RowMatrixf m(rows, cols);
  for (Index i = 0; i < rows; ++i) {
    for (Index j = 0; j < cols; ++j) m(i, j) = static_cast<float>(rng.gaussian());
  }
  return m;
}

Codebook make_codebook(Tier tier, RowMatrixf centroids) {
  return Codebook(tier, std::move(centroids), {});
}

}  // namespace

TEST_SUITE("pooling") {

TEST_CASE("mean of two rows") {
  RowMatrixf values(2, 2);
  values << 1, 3, 3, 5;
  const FeatureMatrix fm(values, 0.02);
  const Segmentation seg(0.04, {}, {});
  const FrameSpanMap map = build_frame_span_map(seg, 0.02, 2);
  const PooledTier pooled = pool_segments(fm, map, Tier::kUtterance);
  REQUIRE(pooled.size() == 1);
  CHECK(pooled.vectors(0, 0) == 2.0f);
  CHECK(pooled.vectors(0, 1) == 4.0f);
  CHECK(pooled.empty_segments == 0);
}

TEST_CASE("single-frame segment is the identity") {
  const RowMatrixf values = random_matrix(5, 3, 1);
  const FeatureMatrix fm(values, 0.1);
  std::vector<Segment> phones = {Segment(Tier::kPhone, "A", 0.2, 0.3)};  // frame 2 only
  const Segmentation seg(0.5, phones, {});
  const FrameSpanMap map = build_frame_span_map(seg, 0.1, 5);
  const PooledTier pooled = pool_segments(fm, map, Tier::kPhone);
  REQUIRE(pooled.size() == 1);
  CHECK(pooled.vectors.row(0) == values.row(2));
}

TEST_CASE("constant input pools to the constant") {
  RowMatrixf values(50, 4);
  for (Index i = 0; i < 50; ++i) values.row(i) << 1.5f, -2.25f, 0.125f, 3.75f;
  const FeatureMatrix fm(values, 0.02);
  const Segmentation seg = simple_seg(1.0, 10, 3);
  const FrameSpanMap map = build_frame_span_map(seg, 0.02, 50);
  for (Tier tier : kPooledTiers) {
    const PooledTier pooled = pool_segments(fm, map, tier);
    CHECK(pooled.size() == map.num_segments(tier));
    for (Index s = 0; s < pooled.size(); ++s) {
      for (Index d = 0; d < 4; ++d) {
        CHECK(pooled.vectors(s, d) ==
              doctest::Approx(values(0, d)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("segments covering no frame are omitted and counted") {
  const RowMatrixf values = random_matrix(10, 2, 2);
  const FeatureMatrix fm(values, 0.1);  // frame centers 0.05 .. 0.95
  std::vector<Segment> phones = {
      Segment(Tier::kPhone, "a", 0.0, 0.4),
      Segment(Tier::kPhone, "tiny", 0.42, 0.44),  // covers no frame center
      Segment(Tier::kPhone, "b", 0.5, 1.0),
  };
  const Segmentation seg(1.0, phones, {});
  const FrameSpanMap map = build_frame_span_map(seg, 0.1, 10);
  const PooledTier pooled = pool_segments(fm, map, Tier::kPhone);
  CHECK(pooled.size() == 2);
  CHECK(pooled.empty_segments == 1);
  CHECK(pooled.segment_indices == std::vector<std::int32_t>{0, 2});
}

TEST_CASE("dimension mismatch between span map and features") {
  const FeatureMatrix fm(random_matrix(10, 2, 3), 0.1);
  const FrameSpanMap map = build_frame_span_map(simple_seg(1.0, 2, 1), 0.1, 9);
  CHECK_THROWS_AS(pool_segments(fm, map, Tier::kPhone), DimensionMismatch);
  CHECK_THROWS_AS(pool_segments(fm, build_frame_span_map(simple_seg(1.0, 2, 1), 0.1, 10),
                                Tier::kFrame),
                  InvalidArgument);
}

TEST_CASE("post-pooling constant codes give the centroid") {
  const Codebook cb = make_codebook(Tier::kFrame, random_matrix(4, 3, 4));
  DsuStream codes{Tier::kFrame, std::vector<std::int32_t>(10, 2)};
  const FrameSpanMap map = build_frame_span_map(simple_seg(1.0, 1, 1), 0.1, 10);
  const PooledTier pooled = post_pool_codes(codes, cb, map, Tier::kPhone);
  REQUIRE(pooled.size() == 1);
  CHECK(pooled.vectors.row(0) == cb.centroids().row(2));
}

TEST_CASE("post-pooling midpoint of two centroids") {
  RowMatrixf centroids(2, 2);
  centroids << 0, 0, 2, 2;
  const Codebook cb = make_codebook(Tier::kFrame, centroids);
  DsuStream codes{Tier::kFrame, {0, 1}};
  const FrameSpanMap map = build_frame_span_map(simple_seg(0.2, 1, 1), 0.1, 2);
  const PooledTier pooled = post_pool_codes(codes, cb, map, Tier::kPhone);
  REQUIRE(pooled.size() == 1);
  CHECK(pooled.vectors(0, 0) == 1.0f);
  CHECK(pooled.vectors(0, 1) == 1.0f);
}

TEST_CASE("post-pooling equals pooling the decoded matrix (oracle)") {
  const Codebook cb = make_codebook(Tier::kFrame, random_matrix(8, 5, 5));
  Rng rng(6);
  std::vector<std::int32_t> codes(40);
  for (auto &c : codes) c = static_cast<std::int32_t>(rng.uniform_index(8));
  const FrameSpanMap map = build_frame_span_map(simple_seg(4.0, 7, 3), 0.1, 40);

  RowMatrixf decoded(40, 5);
  for (Index i = 0; i < 40; ++i) {
    decoded.row(i) = cb.centroids().row(codes[static_cast<std::size_t>(i)]);
  }
  const FeatureMatrix decoded_fm(decoded, 0.1);

  for (Tier tier : kPooledTiers) {
    const PooledTier a = post_pool_codes({Tier::kFrame, codes}, cb, map, tier);
    const PooledTier b = pool_segments(decoded_fm, map, tier);
    CHECK(a.segment_indices == b.segment_indices);
    CHECK(a.vectors == b.vectors);  // exact
  }
}

TEST_CASE("post-pooling rejects out-of-range codes") {
  const Codebook cb = make_codebook(Tier::kFrame, random_matrix(4, 2, 7));
  DsuStream codes{Tier::kFrame, {0, 4}};
  const FrameSpanMap map = build_frame_span_map(simple_seg(0.2, 1, 1), 0.1, 2);
  CHECK_THROWS_AS(post_pool_codes(codes, cb, map, Tier::kPhone), CodeOutOfRange);
}

// -------- fusion --------

namespace {

SvcModel fixed_model(Index dim, std::uint64_t seed, Index k = 4) {
  std::vector<Codebook> cbs;
  for (Tier tier : kAllTiers) {
    cbs.push_back(make_codebook(tier, random_matrix(k, dim, seed + tier_index(tier))));
  }
  return SvcModel(std::move(cbs), 0.1);
}

}  // namespace

TEST_CASE("fusion averages all covering tiers") {
  const SvcModel model = fixed_model(3, 10);
  // 2 frames, one phone, one word, utterance
  const FrameSpanMap map = build_frame_span_map(simple_seg(0.2, 1, 1), 0.1, 2);
  std::array<DsuStream, 4> streams = {
      DsuStream{Tier::kFrame, {1, 2}}, DsuStream{Tier::kPhone, {3}},
      DsuStream{Tier::kWord, {0}}, DsuStream{Tier::kUtterance, {2}}};
  const EncodedUtterance enc("u", streams, 0.2, map, 0.1);
  const FusedFrameSequence fused = fuse_streams(enc, model);
  REQUIRE(fused.num_frames() == 2);

  const Eigen::RowVectorXd expected0 =
      (model.codebook(Tier::kFrame).centroids().row(1).cast<double>() +
       model.codebook(Tier::kPhone).centroids().row(3).cast<double>() +
       model.codebook(Tier::kWord).centroids().row(0).cast<double>() +
       model.codebook(Tier::kUtterance).centroids().row(2).cast<double>()) /
      4.0;
  CHECK(fused.values().row(0) == expected0.cast<float>());
}

TEST_CASE("fusion over silence uses frame and utterance only") {
  const SvcModel model = fixed_model(3, 20);
  // no phones or words at all
  const Segmentation seg(0.2, {}, {});
  const FrameSpanMap map = build_frame_span_map(seg, 0.1, 2);
  std::array<DsuStream, 4> streams = {
      DsuStream{Tier::kFrame, {0, 3}}, DsuStream{Tier::kPhone, {}},
      DsuStream{Tier::kWord, {}}, DsuStream{Tier::kUtterance, {1}}};
  const EncodedUtterance enc("u", streams, 0.2, map, 0.1);
  const FusedFrameSequence fused = fuse_streams(enc, model);
  REQUIRE(fused.num_frames() == 2);

  const Eigen::RowVectorXd expected0 =
      (model.codebook(Tier::kFrame).centroids().row(0).cast<double>() +
       model.codebook(Tier::kUtterance).centroids().row(1).cast<double>()) /
      2.0;
  CHECK(fused.values().row(0) == expected0.cast<float>());
}

TEST_CASE("fusion with identical single-centroid codebooks is constant") {
  RowMatrixf v(1, 3);
  v << 0.5f, -1.5f, 2.0f;
  std::vector<Codebook> cbs;
  for (Tier tier : kAllTiers) cbs.push_back(make_codebook(tier, v));
  const SvcModel model(std::move(cbs), 0.1);

  const FrameSpanMap map = build_frame_span_map(simple_seg(0.5, 2, 1), 0.1, 5);
  std::array<DsuStream, 4> streams = {
      DsuStream{Tier::kFrame, {0, 0, 0, 0, 0}}, DsuStream{Tier::kPhone, {0, 0}},
      DsuStream{Tier::kWord, {0}}, DsuStream{Tier::kUtterance, {0}}};
  const EncodedUtterance enc("u", streams, 0.5, map, 0.1);
  const FusedFrameSequence fused = fuse_streams(enc, model);
  for (Index n = 0; n < 5; ++n) {
    CHECK(fused.values().row(n) == v.row(0));
  }
}

TEST_CASE("fused rows stay inside the participant envelope") {
  Rng rng(30);
  for (int trial = 0; trial < 10; ++trial) {
    const SvcModel model = fixed_model(6, 40 + trial, 5);
    const int phones = 1 + static_cast<int>(rng.uniform_index(6));
    const int words = 1 + static_cast<int>(rng.uniform_index(3));
    const Index frames = 10 + static_cast<Index>(rng.uniform_index(30));
    const double hop = 0.1;
    const Segmentation seg =
        simple_seg(static_cast<double>(frames) * hop, phones, words);
    const FrameSpanMap map = build_frame_span_map(seg, hop, frames);

    auto draw_codes = [&](Index n) {
      std::vector<std::int32_t> codes(static_cast<std::size_t>(n));
      for (auto &c : codes) c = static_cast<std::int32_t>(rng.uniform_index(5));
      return codes;
    };
    std::array<DsuStream, 4> streams = {
        DsuStream{Tier::kFrame, draw_codes(frames)},
        DsuStream{Tier::kPhone, draw_codes(map.num_segments(Tier::kPhone))},
        DsuStream{Tier::kWord, draw_codes(map.num_segments(Tier::kWord))},
        DsuStream{Tier::kUtterance, draw_codes(1)}};
    const EncodedUtterance enc("u", streams, static_cast<double>(frames) * hop,
                               map, hop);
    const FusedFrameSequence fused = fuse_streams(enc, model);
    REQUIRE(fused.num_frames() == frames);

    for (Index n = 0; n < frames; ++n) {
      std::vector<Eigen::RowVectorXf> parts;
      parts.push_back(model.codebook(Tier::kFrame)
                          .centroids()
                          .row(streams[0].codes[static_cast<std::size_t>(n)]));
      for (Tier tier : kPooledTiers) {
        const std::int32_t s = map.spans(tier)[static_cast<std::size_t>(n)];
        if (s == FrameSpanMap::kUncovered) continue;
        // spans are contiguous from segment 0 here, so segment == position
        parts.push_back(model.codebook(tier).centroids().row(
            enc.stream(tier).codes[static_cast<std::size_t>(s)]));
      }
      for (Index d = 0; d < 6; ++d) {
        float lo = parts[0](d), hi = parts[0](d);
        for (const auto &p : parts) {
          lo = std::min(lo, p(d));
          hi = std::max(hi, p(d));
        }
        CHECK(fused.values()(n, d) >= lo);
        CHECK(fused.values()(n, d) <= hi);
      }
    }
  }
}

TEST_CASE("fusion is permutation-invariant in tier order") {
  // reference computation that accumulates the tiers coarse-to-fine instead
  Rng rng(60);
  for (int trial = 0; trial < 5; ++trial) {
    const SvcModel model = fixed_model(4, 70 + trial, 6);
    const Index frames = 12;
    const FrameSpanMap map = build_frame_span_map(simple_seg(1.2, 3, 2), 0.1, frames);
    auto draw = [&](Index n) {
      std::vector<std::int32_t> codes(static_cast<std::size_t>(n));
      for (auto &c : codes) c = static_cast<std::int32_t>(rng.uniform_index(6));
      return codes;
    };
    std::array<DsuStream, 4> streams = {
        DsuStream{Tier::kFrame, draw(frames)}, DsuStream{Tier::kPhone, draw(3)},
        DsuStream{Tier::kWord, draw(2)}, DsuStream{Tier::kUtterance, draw(1)}};
    const EncodedUtterance enc("u", streams, 1.2, map, 0.1);
    const FusedFrameSequence fused = fuse_streams(enc, model);

    for (Index n = 0; n < frames; ++n) {
      Eigen::RowVectorXd acc = Eigen::RowVectorXd::Zero(4);
      int count = 0;
      for (Tier tier : {Tier::kUtterance, Tier::kWord, Tier::kPhone}) {
        const std::int32_t s = map.spans(tier)[static_cast<std::size_t>(n)];
        if (s == FrameSpanMap::kUncovered) continue;
        acc += model.codebook(tier)
                   .centroids()
                   .row(enc.stream(tier).codes[static_cast<std::size_t>(s)])
                   .cast<double>();
        ++count;
      }
      acc += model.codebook(Tier::kFrame)
                 .centroids()
                 .row(streams[0].codes[static_cast<std::size_t>(n)])
                 .cast<double>();
      ++count;
      const Eigen::RowVectorXf reversed = (acc / count).cast<float>();
      for (Index d = 0; d < 4; ++d) {
        CHECK(fused.values()(n, d) ==
              doctest::Approx(reversed(d)).epsilon(1e-6));
      }
    }
  }
}

TEST_CASE("fusion rejects stream/span inconsistencies") {
  const SvcModel model = fixed_model(3, 50);
  const FrameSpanMap map = build_frame_span_map(simple_seg(0.2, 1, 1), 0.1, 2);
  std::array<DsuStream, 4> streams = {
      DsuStream{Tier::kFrame, {0, 9}},  // code 9 out of range (k = 4)
      DsuStream{Tier::kPhone, {0}}, DsuStream{Tier::kWord, {0}},
      DsuStream{Tier::kUtterance, {0}}};
  const EncodedUtterance enc("u", streams, 0.2, map, 0.1);
  CHECK_THROWS_AS(fuse_streams(enc, model), CodeOutOfRange);
}

}  // TEST_SUITE
