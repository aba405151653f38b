// include/svcq/textgrid.hpp

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

#ifndef SVCQ_TEXTGRID_HPP_
#define SVCQ_TEXTGRID_HPP_

#include <string>
#include <string_view>
#include <vector>

#include "svcq/types.hpp"

namespace svcq {

struct TextGridInterval {
  double xmin = 0.0;
  double xmax = 0.0;
  std::string text;
};

struct TextGridTier {
  std::string name;
  std::vector<TextGridInterval> intervals;
};

// Interval tiers of a Praat TextGrid. Point tiers are dropped at parse time
// and reported through `warnings`.
struct TextGridDocument {
  double xmin = 0.0;
  double xmax = 0.0;
  std::vector<TextGridTier> tiers;
  std::vector<std::string> warnings;

  const TextGridTier *find_tier(std::string_view name) const;
};

// Accepts both the long and the short TextGrid syntax; requires UTF-8 text
// (an optional BOM is skipped). Throws MalformedTextGrid with the offending
// line number, or UnsupportedEncoding for UTF-16/invalid input.
TextGridDocument parse_textgrid(std::string_view bytes);

// Debug writer: emits the long-form syntax. parse(write(doc)) reproduces the
// document (up to warnings, since only interval tiers are written).
std::string write_textgrid(const TextGridDocument &doc);

struct SilenceOptions {
  // Intervals whose label is in this set are excluded from the phone and
  // word tiers. Matches are exact.
  std::vector<std::string> silence_labels = {"", "sil", "sp", "spn"};
  bool keep_silence = false;

  bool is_silence(const std::string &label) const;
};

// Selects the named tiers and drops silence intervals; the utterance tier is
// the single span [0, doc.xmax). Throws MissingTier.
Segmentation textgrid_to_segmentation(const TextGridDocument &doc,
                                      const std::string &phone_tier,
                                      const std::string &word_tier,
                                      const SilenceOptions &silence = {});

}  // namespace svcq

#endif  // SVCQ_TEXTGRID_HPP_
