// tests/common/corpus.cpp

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

#include "corpus.hpp"

#include <unistd.h>

#include <atomic>
#include <sstream>

#include <json.hpp>

#include "svcq/rng.hpp"
#include "svcq/serial.hpp"

namespace svcq::testing {

std::filesystem::path make_temp_dir(const std::string &hint) {
  static std::atomic<std::uint64_t> counter{0};
  const auto base = std::filesystem::temp_directory_path() / "svcq-tests";
  const auto dir = base / (hint + "-" + std::to_string(::getpid()) + "-" +
                           std::to_string(counter.fetch_add(1)));
  std::filesystem::create_directories(dir);
  return dir;
}

SyntheticCorpus build_synthetic_corpus(const std::filesystem::path &dir,
                                       const SyntheticCorpusSpec &spec) {
  std::filesystem::create_directories(dir / "feats");
  std::filesystem::create_directories(dir / "align");

  Rng rng(spec.seed);
  std::ostringstream manifest;

  const double duration = static_cast<double>(spec.frames) * spec.frame_hop;
  const double sil = spec.silence_fraction * duration;
  const double speech_start = sil;
  const double speech_end = duration - sil;

  auto emit_split = [&](const char *split, int per_class, int *serial) {
    for (int c = 0; c < spec.classes; ++c) {
      for (int u = 0; u < per_class; ++u) {
        const std::string id =
            std::string(split) + "_c" + std::to_string(c) + "_" + std::to_string((*serial)++);

        RowMatrixf values(spec.frames, spec.dim);
        for (Index t = 0; t < spec.frames; ++t) {
          for (Index d = 0; d < spec.dim; ++d) {
            double v = spec.noise_std * rng.gaussian();
            if (d == static_cast<Index>(c % spec.dim)) v += spec.class_offset;
            values(t, d) = static_cast<float>(v);
          }
        }
        const std::string feat_rel = "feats/" + id + ".fmat";
        write_feature_matrix_file(dir / feat_rel,
                                  FeatureMatrix(std::move(values), spec.frame_hop));

        nlohmann::json align;
        align["duration"] = duration;
        nlohmann::json words = nlohmann::json::array();
        nlohmann::json word_flags = nlohmann::json::array();
        for (int w = 0; w < spec.words_per_utterance; ++w) {
          const double a = speech_start +
                           (speech_end - speech_start) * w / spec.words_per_utterance;
          const double b = speech_start +
                           (speech_end - speech_start) * (w + 1) / spec.words_per_utterance;
          words.push_back({{"start", a}, {"end", b}, {"label", "w" + std::to_string(w)}});
          word_flags.push_back(w % 2);
        }
        nlohmann::json phones = nlohmann::json::array();
        for (int p = 0; p < spec.phones_per_utterance; ++p) {
          const double a = speech_start +
                           (speech_end - speech_start) * p / spec.phones_per_utterance;
          const double b = speech_start +
                           (speech_end - speech_start) * (p + 1) / spec.phones_per_utterance;
          phones.push_back({{"start", a}, {"end", b}, {"label", "p" + std::to_string(p)}});
        }
        align["words"] = std::move(words);
        align["phones"] = std::move(phones);
        const std::string align_rel = "align/" + id + ".json";
        write_file_bytes(dir / align_rel, align.dump(2) + "\n");

        nlohmann::json entry;
        entry["id"] = id;
        entry["features"] = feat_rel;
        entry["alignment"] = align_rel;
        entry["split"] = split;
        entry["labels"] = {{"class", "c" + std::to_string(c)},
                           {"word_flags", word_flags}};
        manifest << entry.dump() << "\n";
      }
    }
  };

  int serial = 0;
  emit_split("train", spec.train_per_class, &serial);
  emit_split("valid", spec.valid_per_class, &serial);
  emit_split("test", spec.test_per_class, &serial);

  SyntheticCorpus out;
  out.dir = dir;
  out.manifest_path = dir / "manifest.jsonl";
  out.spec = spec;
  write_file_bytes(out.manifest_path, manifest.str());
  return out;
}

}  // namespace svcq::testing
