// include/svcq/codec.hpp

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

// Corpus-level orchestration: per-tier codebook training, utterance encoding
// into four DSU streams, fusion, and bitrate accounting.

#ifndef SVCQ_CODEC_HPP_
#define SVCQ_CODEC_HPP_

#include <array>
#include <filesystem>
#include <map>
#include <string>

#include "svcq/alignment.hpp"
#include "svcq/kmeans.hpp"
#include "svcq/manifest.hpp"
#include "svcq/pooling.hpp"
#include "svcq/types.hpp"

namespace svcq {

struct TrainOptions {
  std::array<Index, 4> k_per_tier = {500, 500, 500, 500};  // by tier
  std::uint64_t seed = 0;
  KMeansParams kmeans;
  // Standardize each dimension (zero mean, unit variance over the tier's
  // training matrix) before clustering; centroids are mapped back to the
  // raw feature space, so assignment is unaffected by the flag's plumbing.
  bool standardize = false;
  AlignmentReadOptions alignment;
};

struct TrainResult {
  SvcModel model;
  std::array<TrainingStats, 4> stats;  // by tier
};

// Trains the four codebooks on the manifest's train split: the frame tier on
// the concatenated raw frame rows, each pooled tier on its pooled vectors.
// Per-tier seeds derive from the master seed as seed + tier index.
TrainResult train_svc(const CorpusManifest &manifest, const TrainOptions &opts);

// Quantizes one utterance into the four parallel streams.
EncodedUtterance encode_utterance(const SvcModel &model,
                                  const FeatureMatrix &features,
                                  const Segmentation &seg,
                                  const std::string &utterance_id = "");

// Fuses an encoded utterance back to a frame-aligned continuous sequence.
FusedFrameSequence decode_fused(const SvcModel &model,
                                const EncodedUtterance &encoded);

// B = sum_m N_m * log2(k_m) / duration. With frames_only, the pooled
// streams are ignored (the fixed-frame-rate baseline).
BitrateReport utterance_bitrate(const EncodedUtterance &encoded,
                                const SvcModel &model, bool frames_only = false);

struct CorpusBitrate {
  double mean_bps = 0.0;    // unweighted mean of per-utterance rates
  double pooled_bps = 0.0;  // total bits / total seconds
  std::size_t utterances = 0;
};

CorpusBitrate corpus_bitrate(const std::vector<BitrateReport> &reports);

// Model persistence: a JSON manifest next to one SVCB file per tier.
void save_model(const SvcModel &model, const std::filesystem::path &dir);
SvcModel load_model(const std::filesystem::path &path);  // dir or model.json

// EncodedUtterance export for downstream consumers: per-tier code arrays,
// duration, frame hop and the span map.
std::string encoded_to_json(const EncodedUtterance &encoded, double frame_hop);
EncodedUtterance encoded_from_json(std::string_view text);

}  // namespace svcq

#endif  // SVCQ_CODEC_HPP_
