// include/svcq/pooling.hpp

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

// Segment mean-pooling and multi-stream fusion. Pooling before quantization
// (pool_segments) and after it (post_pool_codes) are the two comparison arms;
// fuse_streams re-pools decoded streams back to a frame-aligned sequence.

#ifndef SVCQ_POOLING_HPP_
#define SVCQ_POOLING_HPP_

#include <cstdint>
#include <vector>

#include "svcq/types.hpp"

namespace svcq {

// Pooled vectors for the segments of one tier that cover at least one frame,
// in ascending segment order. Segments covering no frame are omitted and
// counted.
struct PooledTier {
  std::vector<std::int32_t> segment_indices;
  RowMatrixf vectors;  // one row per covered segment
  Index empty_segments = 0;

  Index size() const { return vectors.rows(); }
};

// Arithmetic mean of the frame rows within each segment, accumulated in
// double. tier must be phone, word or utterance.
PooledTier pool_segments(const FeatureMatrix &features,
                         const FrameSpanMap &span_map, Tier tier);

// Same pooling applied to the decoded frame codes: each frame row is the
// centroid of its frame-level code. Realizes the post-discretization arm.
PooledTier post_pool_codes(const DsuStream &frame_codes,
                           const Codebook &frame_codebook,
                           const FrameSpanMap &span_map, Tier tier);

// Per frame, the mean of the decoded centroid vectors of the frame code and
// of every covering segment's code. Tiers not covering a frame contribute
// nothing and do not change the divisor. Output length equals the frame
// stream length.
FusedFrameSequence fuse_streams(const EncodedUtterance &encoded,
                                const SvcModel &model);

}  // namespace svcq

#endif  // SVCQ_POOLING_HPP_
