// include/svcq/probe_data.hpp

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

// Assembles probe datasets from a corpus manifest: features come from the
// FMAT files transformed per the requested input kind, labels come from the
// manifest's labels column.

#ifndef SVCQ_PROBE_DATA_HPP_
#define SVCQ_PROBE_DATA_HPP_

#include <map>
#include <string>

#include "svcq/codec.hpp"
#include "svcq/manifest.hpp"
#include "svcq/probe.hpp"

namespace svcq {

enum class ProbeInputKind {
  kContinuous,  // pooled continuous features (raw rows at the frame tier)
  kPrePooled,   // pool, quantize, decode: the pre-discretization DSU arm
  kPostPooled,  // quantize frames, decode, pool: the post-discretization arm
  kFused,       // frame-aligned fusion of all four decoded streams
};

const char *probe_input_kind_name(ProbeInputKind kind);
std::optional<ProbeInputKind> probe_input_kind_from_name(const std::string &name);

// Deterministic label mapping: string labels sort lexicographically to ids,
// integer labels pass through.
class LabelMap {
 public:
  static LabelMap build(const std::vector<const CorpusManifest *> &manifests,
                        const std::string &label_key);

  std::int32_t id_of(const nlohmann::json &value) const;
  Index num_classes() const { return num_classes_; }

 private:
  std::map<std::string, std::int32_t> by_string_;
  Index num_classes_ = 0;
};

struct ProbeDataOptions {
  ProbeInputKind kind = ProbeInputKind::kContinuous;
  // The probing unit: one example per utterance, word, phone or frame.
  // Scalar labels broadcast to every unit of the utterance; array labels
  // align with the tier's non-silence segments (or frames at the frame
  // tier).
  Tier tier = Tier::kUtterance;
  std::string label_key = "label";
  // When set, array labels align with this coarser tier's segments and are
  // broadcast to every probe unit the segment covers (e.g. one label per
  // word applied to all of the word's frames). Units outside any segment
  // of the broadcast tier are dropped.
  std::optional<Tier> label_broadcast_tier;
  AlignmentReadOptions alignment;
};

// The model may be null only for kContinuous.
ProbeDataset build_probe_dataset(const CorpusManifest &manifest,
                                 const std::string &split,
                                 const ProbeDataOptions &opts,
                                 const SvcModel *model, const LabelMap &labels);

}  // namespace svcq

#endif  // SVCQ_PROBE_DATA_HPP_
