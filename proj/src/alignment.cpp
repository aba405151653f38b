// src/alignment.cpp

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

#include "svcq/alignment.hpp"

#include <algorithm>
#include <cmath>

#include <json.hpp>

#include "svcq/serial.hpp"

namespace svcq {

namespace {

std::vector<Segment> parse_tier_array(const nlohmann::json &doc, const char *key,
                                      Tier tier, double duration,
                                      const SilenceOptions &silence) {
  std::vector<Segment> raw;
  if (!doc.contains(key)) return raw;
  const nlohmann::json &arr = doc.at(key);
  if (!arr.is_array()) {
    throw SchemaViolation(std::string("\"") + key + "\" must be an array");
  }
  struct Interval {
    double start, end;
    std::string label;
  };
  std::vector<Interval> intervals;
  for (const nlohmann::json &item : arr) {
    if (!item.is_object() || !item.contains("start") || !item.contains("end") ||
        !item.at("start").is_number() || !item.at("end").is_number()) {
      throw SchemaViolation(std::string(key) +
                            " entries must be objects with numeric start/end");
    }
    Interval iv;
    iv.start = item.at("start").get<double>();
    iv.end = item.at("end").get<double>();
    if (item.contains("label")) {
      if (!item.at("label").is_string()) {
        throw SchemaViolation(std::string(key) + " labels must be strings");
      }
      iv.label = item.at("label").get<std::string>();
    }
    if (!(iv.end > iv.start)) {
      throw SchemaViolation(std::string(key) + " interval has end <= start");
    }
    if (iv.start < 0.0 || iv.end > duration + 1e-9) {
      throw SchemaViolation(std::string(key) + " interval outside [0, duration]");
    }
    intervals.push_back(std::move(iv));
  }
  std::stable_sort(intervals.begin(), intervals.end(),
                   [](const Interval &a, const Interval &b) { return a.start < b.start; });
  for (std::size_t i = 1; i < intervals.size(); ++i) {
    if (intervals[i].start < intervals[i - 1].end - 1e-9) {
      throw SchemaViolation(std::string(key) + " intervals overlap");
    }
  }
  for (Interval &iv : intervals) {
    if (silence.is_silence(iv.label)) continue;
    raw.emplace_back(tier, std::move(iv.label), iv.start, iv.end);
  }
  return raw;
}

}  // namespace

Segmentation parse_json_alignment(std::string_view bytes,
                                  const SilenceOptions &silence) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(bytes);
  } catch (const nlohmann::json::parse_error &e) {
    throw MalformedJson(std::string("alignment JSON: ") + e.what());
  }
  if (!doc.is_object()) throw SchemaViolation("alignment JSON must be an object");
  if (!doc.contains("duration") || !doc.at("duration").is_number()) {
    throw SchemaViolation("alignment JSON requires a numeric \"duration\"");
  }
  const double duration = doc.at("duration").get<double>();
  if (!(duration > 0.0)) {
    throw SchemaViolation("alignment duration must be positive");
  }
  return Segmentation(
      duration, parse_tier_array(doc, "phones", Tier::kPhone, duration, silence),
      parse_tier_array(doc, "words", Tier::kWord, duration, silence));
}

Segmentation read_alignment_file(const std::filesystem::path &path,
                                 const AlignmentReadOptions &opts) {
  std::string ext = path.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  const std::string bytes = read_file_bytes(path);
  if (ext == ".textgrid") {
    TextGridDocument doc = parse_textgrid(bytes);
    return textgrid_to_segmentation(doc, opts.phone_tier, opts.word_tier,
                                    opts.silence);
  }
  if (ext == ".json") {
    return parse_json_alignment(bytes, opts.silence);
  }
  throw InvalidArgument("unknown alignment format: " + path.string());
}

FrameSpanMap build_frame_span_map(const Segmentation &seg, double frame_hop,
                                  Index num_frames) {
  if (num_frames < 1) throw InvalidArgument("num_frames must be >= 1");
  if (!(frame_hop > 0.0)) throw InvalidArgument("frame_hop must be positive");

  auto map_tier = [&](const std::vector<Segment> &segs) {
    std::vector<std::int32_t> spans(static_cast<std::size_t>(num_frames),
                                    FrameSpanMap::kUncovered);
    std::size_t cursor = 0;
    for (Index n = 0; n < num_frames; ++n) {
      const double center = (static_cast<double>(n) + 0.5) * frame_hop;
      while (cursor < segs.size() && segs[cursor].end <= center) ++cursor;
      if (cursor < segs.size() && segs[cursor].start <= center) {
        spans[static_cast<std::size_t>(n)] = static_cast<std::int32_t>(cursor);
      }
    }
    return spans;
  };

  return FrameSpanMap(num_frames, map_tier(seg.phones()), map_tier(seg.words()),
                      static_cast<Index>(seg.phones().size()),
                      static_cast<Index>(seg.words().size()));
}

void validate_frame_count(const Segmentation &seg, double frame_hop,
                          Index num_frames, const std::string &utterance_id) {
  const double expected = seg.duration() / frame_hop;
  if (std::abs(static_cast<double>(num_frames) - expected) > 1.0 + 1e-9) {
    throw AlignmentMismatch(
        "utterance \"" + utterance_id + "\": features have " +
        std::to_string(num_frames) + " frames but the alignment implies " +
        std::to_string(expected));
  }
}

}  // namespace svcq
