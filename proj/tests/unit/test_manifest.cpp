// tests/unit/test_manifest.cpp

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

#include <fstream>

#include "../common/corpus.hpp"
#include "svcq/manifest.hpp"
#include "svcq/probe_data.hpp"

using namespace svcq;
using namespace svcq::testing;

TEST_SUITE("manifest") {

TEST_CASE("load and split a generated manifest") {
  SyntheticCorpusSpec spec;
  spec.classes = 2;
  spec.train_per_class = 2;
  spec.valid_per_class = 1;
  spec.test_per_class = 1;
  spec.frames = 20;
  spec.dim = 3;
  spec.words_per_utterance = 2;
  spec.phones_per_utterance = 4;
  const SyntheticCorpus corpus = build_synthetic_corpus(make_temp_dir("manifest"), spec);

  const CorpusManifest m = CorpusManifest::load(corpus.manifest_path);
  CHECK(m.entries().size() == 8);
  CHECK(m.split("train").size() == 4);
  CHECK(m.split("valid").size() == 2);
  CHECK(m.split("test").size() == 2);
  CHECK(m.split("all").size() == 8);
  CHECK(m.entries()[0].labels.at("class") == "c0");
  std::filesystem::remove_all(corpus.dir);
}

TEST_CASE("schema violations") {
  const auto dir = make_temp_dir("manifest-bad");
  std::ofstream(dir / "x.fmat") << "stub";
  std::ofstream(dir / "x.json") << "stub";

  auto line = [&](const std::string &extra) {
    return R"({"id":"a","features":"x.fmat","alignment":"x.json","split":"train")" +
           extra + "}\n";
  };
  CHECK_NOTHROW(CorpusManifest::parse(line(""), dir));
  CHECK_THROWS_AS(CorpusManifest::parse("{oops\n", dir), MalformedJson);
  CHECK_THROWS_AS(CorpusManifest::parse(R"({"id":"a"})" "\n", dir), SchemaViolation);
  CHECK_THROWS_AS(
      CorpusManifest::parse(
          R"({"id":"a","features":"x.fmat","alignment":"x.json","split":"dev"})" "\n",
          dir),
      SchemaViolation);
  CHECK_THROWS_AS(CorpusManifest::parse(line("") + line(""), dir), SchemaViolation);
  CHECK_THROWS_AS(
      CorpusManifest::parse(
          R"({"id":"a","features":"missing.fmat","alignment":"x.json","split":"train"})" "\n",
          dir),
      IoError);
  // blank lines are tolerated
  CHECK_NOTHROW(CorpusManifest::parse("\n" + line("") + "\n", dir));
  std::filesystem::remove_all(dir);
}

TEST_CASE("probe datasets from a manifest: scalar and array labels") {
  SyntheticCorpusSpec spec;
  spec.classes = 2;
  spec.train_per_class = 3;
  spec.valid_per_class = 1;
  spec.test_per_class = 1;
  spec.frames = 40;
  spec.dim = 4;
  spec.words_per_utterance = 4;
  spec.phones_per_utterance = 8;
  const SyntheticCorpus corpus = build_synthetic_corpus(make_temp_dir("probe-data"), spec);
  const CorpusManifest m = CorpusManifest::load(corpus.manifest_path);

  // utterance-level, scalar class labels
  ProbeDataOptions opts;
  opts.kind = ProbeInputKind::kContinuous;
  opts.tier = Tier::kUtterance;
  opts.label_key = "class";
  const LabelMap classes = LabelMap::build({&m}, "class");
  CHECK(classes.num_classes() == 2);
  const ProbeDataset utt = build_probe_dataset(m, "train", opts, nullptr, classes);
  CHECK(utt.size() == 6);  // one row per train utterance
  CHECK(utt.dim() == 4);

  // frame-level broadcast of the utterance label
  opts.tier = Tier::kFrame;
  const ProbeDataset frames = build_probe_dataset(m, "train", opts, nullptr, classes);
  CHECK(frames.size() == 6 * 40);

  // word-level array labels (one 0/1 flag per word)
  opts.tier = Tier::kWord;
  opts.label_key = "word_flags";
  const LabelMap flags = LabelMap::build({&m}, "word_flags");
  CHECK(flags.num_classes() == 2);
  const ProbeDataset words = build_probe_dataset(m, "train", opts, nullptr, flags);
  CHECK(words.size() == 6 * 4);
  // flags alternate 0,1 per word within each utterance
  for (Index i = 0; i < words.size(); ++i) {
    CHECK(words.labels()[static_cast<std::size_t>(i)] == static_cast<std::int32_t>(i % 2));
  }

  // word-level flags broadcast to frames: each word spans 10 frames
  opts.tier = Tier::kFrame;
  opts.label_key = "word_flags";
  opts.label_broadcast_tier = Tier::kWord;
  const ProbeDataset broadcast = build_probe_dataset(m, "train", opts, nullptr, flags);
  CHECK(broadcast.size() == 6 * 40);  // no silence, every frame keeps a label
  for (Index i = 0; i < broadcast.size(); ++i) {
    const Index frame_in_utt = i % 40;
    const auto expected = static_cast<std::int32_t>((frame_in_utt / 10) % 2);
    CHECK(broadcast.labels()[static_cast<std::size_t>(i)] == expected);
  }
  opts.label_broadcast_tier.reset();

  // missing label key
  opts.tier = Tier::kWord;
  opts.label_key = "nope";
  CHECK_THROWS_AS(LabelMap::build({&m}, "nope"), SchemaViolation);
  CHECK_THROWS_AS(build_probe_dataset(m, "train", opts, nullptr, flags),
                  SchemaViolation);

  // model-dependent kinds require a model
  opts.label_key = "class";
  opts.kind = ProbeInputKind::kFused;
  CHECK_THROWS_AS(build_probe_dataset(m, "train", opts, nullptr, classes),
                  InvalidArgument);
  std::filesystem::remove_all(corpus.dir);
}

TEST_CASE("probe input kind names round trip") {
  for (ProbeInputKind kind :
       {ProbeInputKind::kContinuous, ProbeInputKind::kPrePooled,
        ProbeInputKind::kPostPooled, ProbeInputKind::kFused}) {
    CHECK(probe_input_kind_from_name(probe_input_kind_name(kind)) == kind);
  }
  CHECK(!probe_input_kind_from_name("quantized").has_value());
}

}  // TEST_SUITE
