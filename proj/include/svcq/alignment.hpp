// include/svcq/alignment.hpp

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

#ifndef SVCQ_ALIGNMENT_HPP_
#define SVCQ_ALIGNMENT_HPP_

#include <filesystem>
#include <string_view>

#include "svcq/textgrid.hpp"
#include "svcq/types.hpp"

namespace svcq {

// Plain JSON alignment format: {"duration": seconds,
// "phones": [{"start", "end", "label"}, ...], "words": [...]}.
// Unknown keys are ignored. Throws MalformedJson or SchemaViolation.
Segmentation parse_json_alignment(std::string_view bytes,
                                  const SilenceOptions &silence = {});

struct AlignmentReadOptions {
  std::string phone_tier = "phones";
  std::string word_tier = "words";
  SilenceOptions silence;
};

// Dispatches on file extension: .TextGrid/.textgrid or .json.
Segmentation read_alignment_file(const std::filesystem::path &path,
                                 const AlignmentReadOptions &opts = {});

// Assigns every frame to a segment per tier by the frame-center rule:
// frame n covers the segment whose [start, end) contains (n + 0.5) * hop.
// Frames outside any phone/word segment are uncovered for that tier; the
// utterance tier covers every frame.
FrameSpanMap build_frame_span_map(const Segmentation &seg, double frame_hop,
                                  Index num_frames);

// A feature/alignment pair must agree on length: |num_frames - duration/hop|
// > 1 frame is a hard error (AlignmentMismatch).
void validate_frame_count(const Segmentation &seg, double frame_hop,
                          Index num_frames, const std::string &utterance_id);

}  // namespace svcq

#endif  // SVCQ_ALIGNMENT_HPP_
