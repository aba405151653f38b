// tools/svcq.cpp

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

// svcq: batch driver for segmentation-variant codebook pipelines.
//
//   svcq train    train the four per-tier codebooks from a corpus manifest
//   svcq encode   quantize utterances into four parallel DSU streams
//   svcq fuse     re-pool encoded streams to frame-aligned FMAT sequences
//   svcq bitrate  recompute bitrate reports for an encoded directory
//   svcq probe    train and evaluate a linear probe on a labeled corpus
//   svcq inspect  pretty-print SVCB / FMAT file headers
//
// Machine-readable results go to stdout as JSON; diagnostics go to stderr.
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <algorithm>
#include <iostream>
#include <optional>

#include <CLI11.hpp>
#include <json.hpp>

#include "svcq/codec.hpp"
#include "svcq/parallel.hpp"
#include "svcq/probe_data.hpp"
#include "svcq/serial.hpp"

namespace {

using namespace svcq;
using nlohmann::json;

struct CommonArgs {
  bool verbose = false;
  int jobs = default_jobs();
};

void dump_config(const CLI::App &cmd, const CommonArgs &common) {
  if (!common.verbose) return;
  json cfg;
  for (const CLI::Option *opt : cmd.get_options()) {
    if (opt->get_name().empty() || opt->get_name() == "--help") continue;
    if (opt->count() > 0 || !opt->get_default_str().empty()) {
      cfg[opt->get_name()] = opt->as<std::string>();
    }
  }
  std::cerr << "config " << cmd.get_name() << ": " << cfg.dump() << "\n";
}

struct TierArgs {
  bool keep_silence = false;
  std::vector<std::string> silence_labels;
  std::string phone_tier = "phones";
  std::string word_tier = "words";
};

AlignmentReadOptions alignment_options(const TierArgs &a) {
  AlignmentReadOptions opts;
  opts.phone_tier = a.phone_tier;
  opts.word_tier = a.word_tier;
  opts.silence.keep_silence = a.keep_silence;
  if (!a.silence_labels.empty()) opts.silence.silence_labels = a.silence_labels;
  return opts;
}

void add_tier_flags(CLI::App *cmd, TierArgs *args) {
  cmd->add_option("--phone-tier", args->phone_tier, "TextGrid phone tier name")
      ->envname("SVCQ_PHONE_TIER")
      ->capture_default_str();
  cmd->add_option("--word-tier", args->word_tier, "TextGrid word tier name")
      ->envname("SVCQ_WORD_TIER")
      ->capture_default_str();
  cmd->add_flag("--keep-silence", args->keep_silence,
                "pool silence intervals as segments instead of dropping them");
  cmd->add_option("--silence-labels", args->silence_labels,
                  "labels treated as silence (default: '' sil sp spn)");
}

struct TrainArgs {
  std::string manifest;
  std::string out_dir;
  std::array<Index, 4> k = {500, 500, 500, 500};
  std::uint64_t seed = 0;
  int max_iters = 100;
  double tol = 1e-4;
  bool standardize = false;
  TierArgs tiers;
};

int run_train(const TrainArgs &args) {
  TrainOptions opts;
  opts.k_per_tier = args.k;
  opts.seed = args.seed;
  opts.kmeans.max_iters = args.max_iters;
  opts.kmeans.tol = args.tol;
  opts.standardize = args.standardize;
  opts.alignment = alignment_options(args.tiers);

  const CorpusManifest manifest = CorpusManifest::load(args.manifest);
  const TrainResult result = train_svc(manifest, opts);
  save_model(result.model, args.out_dir);

  json stats;
  for (Tier tier : kAllTiers) {
    const TrainingStats &st = result.stats[tier_index(tier)];
    json entry;
    entry["k"] = result.model.codebook(tier).k();
    entry["iterations_run"] = st.iterations_run;
    entry["converged"] = st.converged;
    entry["empty_cluster_reassignments"] = st.empty_cluster_reassignments;
    entry["initial_inertia"] = st.inertia_history.front();
    entry["final_inertia"] = st.inertia_history.back();
    stats[tier_name(tier)] = std::move(entry);
  }
  json out;
  out["model"] = args.out_dir;
  out["dim"] = result.model.dim();
  out["frame_hop"] = result.model.frame_hop();
  out["stats"] = std::move(stats);
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct EncodeArgs {
  std::string model;
  std::string manifest;
  std::string out_dir;
  std::string split = "all";
  bool frames_only = false;
  TierArgs tiers;
};

int run_encode(const EncodeArgs &args, const CommonArgs &common) {
  const SvcModel model = load_model(args.model);
  const CorpusManifest manifest = CorpusManifest::load(args.manifest);
  const auto entries = manifest.split(args.split);
  std::filesystem::create_directories(args.out_dir);
  const AlignmentReadOptions align_opts = alignment_options(args.tiers);

  std::vector<BitrateReport> reports(entries.size());
  std::vector<json> summaries(entries.size());
  parallel_for(entries.size(), common.jobs, [&](std::size_t i) {
    const ManifestEntry &entry = *entries[i];
    const FeatureMatrix features = read_feature_matrix_file(entry.features);
    const Segmentation seg = read_alignment_file(entry.alignment, align_opts);
    const EncodedUtterance encoded =
        encode_utterance(model, features, seg, entry.id);
    write_file_bytes(std::filesystem::path(args.out_dir) / (entry.id + ".json"),
                     encoded_to_json(encoded, features.frame_hop()));
    reports[i] = utterance_bitrate(encoded, model, args.frames_only);
    json s;
    s["id"] = entry.id;
    s["duration"] = reports[i].duration;
    s["bits_per_second"] = reports[i].bits_per_second;
    summaries[i] = std::move(s);
  });

  json out;
  out["utterances"] = entries.size();
  out["frames_only"] = args.frames_only;
  if (!entries.empty()) {
    const CorpusBitrate corpus = corpus_bitrate(reports);
    out["bitrate"] = {{"mean_bps", corpus.mean_bps},
                      {"pooled_bps", corpus.pooled_bps}};
  }
  out["per_utterance"] = summaries;
  std::cout << out.dump(2) << "\n";
  return 0;
}

std::vector<std::filesystem::path> encoded_files(const std::string &dir) {
  if (!std::filesystem::is_directory(dir)) {
    throw IoError("not a directory: " + dir);
  }
  std::vector<std::filesystem::path> files;
  for (const auto &de : std::filesystem::directory_iterator(dir)) {
    if (de.path().extension() == ".json") files.push_back(de.path());
  }
  std::sort(files.begin(), files.end());
  return files;
}

struct FuseArgs {
  std::string model;
  std::string in_dir;
  std::string out_dir;
};

int run_fuse(const FuseArgs &args, const CommonArgs &common) {
  const SvcModel model = load_model(args.model);
  const auto files = encoded_files(args.in_dir);
  std::filesystem::create_directories(args.out_dir);
  if (files.empty()) {
    std::cerr << "svcq fuse: 0 utterances in " << args.in_dir << "\n";
  }

  parallel_for(files.size(), common.jobs, [&](std::size_t i) {
    const EncodedUtterance encoded = encoded_from_json(read_file_bytes(files[i]));
    const FusedFrameSequence fused = fuse_streams(encoded, model);
    write_feature_matrix_file(std::filesystem::path(args.out_dir) /
                                  (files[i].stem().string() + ".fmat"),
                              FeatureMatrix(fused.values(), model.frame_hop()));
  });

  json out;
  out["utterances"] = files.size();
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct BitrateArgs {
  std::string model;
  std::string in_dir;
  bool frames_only = false;
};

int run_bitrate(const BitrateArgs &args) {
  const SvcModel model = load_model(args.model);
  const auto files = encoded_files(args.in_dir);

  std::vector<BitrateReport> reports;
  json per_utterance = json::array();
  for (const auto &file : files) {
    const EncodedUtterance encoded = encoded_from_json(read_file_bytes(file));
    const BitrateReport report = utterance_bitrate(encoded, model, args.frames_only);
    reports.push_back(report);
    json entry;
    entry["id"] = encoded.utterance_id();
    entry["duration"] = report.duration;
    entry["total_bits"] = report.total_bits;
    entry["bits_per_second"] = report.bits_per_second;
    for (Tier tier : kAllTiers) {
      entry["stream_bits"][tier_name(tier)] = report.stream_bits[tier_index(tier)];
    }
    per_utterance.push_back(std::move(entry));
  }

  const CorpusBitrate corpus = corpus_bitrate(reports);
  json out;
  out["utterances"] = files.size();
  out["frames_only"] = args.frames_only;
  out["mean_bps"] = corpus.mean_bps;
  out["pooled_bps"] = corpus.pooled_bps;
  out["per_utterance"] = std::move(per_utterance);
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct ProbeArgs {
  std::string train_manifest;
  std::string valid_manifest;
  std::string test_manifest;
  std::string kind = "continuous";
  std::string task = "multiclass";
  std::string tier = "utterance";
  std::string label_key = "label";
  std::string label_tier;
  std::string model;
  std::string report_path;
  ProbeHyperparams hyper;
  TierArgs tiers;
};

int run_probe(const ProbeArgs &args) {
  // kind/tier/task strings were validated by the option parser
  const ProbeInputKind kind = *probe_input_kind_from_name(args.kind);
  const Tier tier = *tier_from_name(args.tier);
  const ProbeTask task =
      args.task == "binary" ? ProbeTask::kBinary : ProbeTask::kMulticlass;

  std::optional<SvcModel> model;
  if (!args.model.empty()) model = load_model(args.model);
  if (kind != ProbeInputKind::kContinuous && !model.has_value()) {
    throw InvalidArgument("--model is required for input kind " + args.kind);
  }

  const CorpusManifest train_m = CorpusManifest::load(args.train_manifest);
  const CorpusManifest valid_m = CorpusManifest::load(args.valid_manifest);
  const CorpusManifest test_m = CorpusManifest::load(args.test_manifest);
  const LabelMap labels =
      LabelMap::build({&train_m, &valid_m, &test_m}, args.label_key);

  ProbeDataOptions opts;
  opts.kind = kind;
  opts.tier = tier;
  opts.label_key = args.label_key;
  if (!args.label_tier.empty()) opts.label_broadcast_tier = tier_from_name(args.label_tier);
  opts.alignment = alignment_options(args.tiers);
  const SvcModel *model_ptr = model.has_value() ? &*model : nullptr;

  const ProbeDataset train =
      build_probe_dataset(train_m, "train", opts, model_ptr, labels);
  const ProbeDataset valid =
      build_probe_dataset(valid_m, "valid", opts, model_ptr, labels);
  const ProbeDataset test =
      build_probe_dataset(test_m, "test", opts, model_ptr, labels);

  const auto [probe, log] = train_probe(train, valid, task, args.hyper);
  const MetricsReport metrics = evaluate(probe, test);

  if (!args.report_path.empty()) {
    write_file_bytes(args.report_path, metrics_to_json(metrics));
  }
  json out;
  out["input_kind"] = args.kind;
  out["tier"] = args.tier;
  out["task"] = args.task;
  out["train_examples"] = train.size();
  out["epochs_run"] = log.epochs.size();
  out["best_epoch"] = log.best_epoch;
  out["test_accuracy"] = metrics.accuracy;
  if (task == ProbeTask::kBinary) {
    out["test_binary_f1"] = metrics.binary_f1;
  } else {
    out["test_micro_f1"] = metrics.micro_f1;
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

int run_inspect(const std::string &path) {
  const std::string bytes = read_file_bytes(path);
  json out;
  out["path"] = path;
  out["bytes"] = bytes.size();
  if (bytes.rfind("SVCB", 0) == 0) {
    const Codebook cb = load_codebook(bytes);
    out["format"] = "SVCB";
    out["tier"] = tier_name(cb.tier());
    out["k"] = cb.k();
    out["dim"] = cb.dim();
    out["seed"] = cb.meta().seed;
    out["iterations_run"] = cb.meta().iterations_run;
    out["final_inertia"] = cb.meta().final_inertia;
    out["crc_ok"] = true;
  } else if (bytes.rfind("FMAT", 0) == 0) {
    const FeatureMatrix fm = load_feature_matrix(bytes);
    out["format"] = "FMAT";
    out["num_frames"] = fm.num_frames();
    out["dim"] = fm.dim();
    out["frame_hop"] = fm.frame_hop();
    out["duration"] = fm.duration();
    out["crc_ok"] = true;
  } else {
    throw BadMagic("unrecognized file format: " + path);
  }
  std::cout << out.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char **argv) {
  CLI::App app{"Segmentation-variant codebook toolkit"};
  app.require_subcommand(1);
  CommonArgs common;
  app.add_flag("-v,--verbose", common.verbose, "print resolved configuration");
  app.add_option("-j,--jobs", common.jobs, "worker threads for corpus commands")
      ->envname("SVCQ_JOBS")
      ->capture_default_str();

  TrainArgs train_args;
  CLI::App *train = app.add_subcommand("train", "train per-tier codebooks");
  train->add_option("-c,--manifest", train_args.manifest, "corpus manifest (JSON lines)")
      ->required();
  train->add_option("-o,--out", train_args.out_dir, "output model directory")->required();
  train->add_option("--k-frame", train_args.k[0], "frame-tier vocabulary")
      ->capture_default_str();
  train->add_option("--k-phone", train_args.k[1], "phone-tier vocabulary")
      ->capture_default_str();
  train->add_option("--k-word", train_args.k[2], "word-tier vocabulary")
      ->capture_default_str();
  train->add_option("--k-utterance", train_args.k[3], "utterance-tier vocabulary")
      ->capture_default_str();
  train->add_option("--seed", train_args.seed, "master seed; per-tier seeds derive from it")
      ->envname("SVCQ_SEED")
      ->capture_default_str();
  train->add_option("--max-iters", train_args.max_iters, "Lloyd iteration cap")
      ->capture_default_str();
  train->add_option("--tol", train_args.tol, "max centroid displacement for convergence")
      ->capture_default_str();
  train->add_flag("--standardize", train_args.standardize,
                  "per-dimension standardization before clustering");
  add_tier_flags(train, &train_args.tiers);

  EncodeArgs encode_args;
  CLI::App *encode = app.add_subcommand("encode", "encode utterances to DSU streams");
  encode->add_option("-m,--model", encode_args.model, "model directory or model.json")
      ->required();
  encode->add_option("-c,--manifest", encode_args.manifest, "corpus manifest")->required();
  encode->add_option("-o,--out", encode_args.out_dir, "output directory")->required();
  encode->add_option("--split", encode_args.split, "train|valid|test|all")
      ->check(CLI::IsMember({"train", "valid", "test", "all"}))
      ->capture_default_str();
  encode->add_flag("--baseline-frames-only", encode_args.frames_only,
                   "report the fixed-frame-rate baseline bitrate");
  add_tier_flags(encode, &encode_args.tiers);

  FuseArgs fuse_args;
  CLI::App *fuse = app.add_subcommand("fuse", "fuse encoded streams to FMAT files");
  fuse->add_option("-m,--model", fuse_args.model, "model directory or model.json")
      ->required();
  fuse->add_option("-i,--in", fuse_args.in_dir, "directory of encoded .json files")
      ->required();
  fuse->add_option("-o,--out", fuse_args.out_dir, "output directory")->required();

  BitrateArgs bitrate_args;
  CLI::App *bitrate = app.add_subcommand("bitrate", "bitrate accounting for encoded files");
  bitrate->add_option("-m,--model", bitrate_args.model, "model directory or model.json")
      ->required();
  bitrate->add_option("-i,--in", bitrate_args.in_dir, "directory of encoded .json files")
      ->required();
  bitrate->add_flag("--frames-only", bitrate_args.frames_only,
                    "count only the frame stream");

  ProbeArgs probe_args;
  CLI::App *probe = app.add_subcommand("probe", "linear probe training and evaluation");
  probe->add_option("--train", probe_args.train_manifest, "train manifest")->required();
  probe->add_option("--valid", probe_args.valid_manifest, "validation manifest")->required();
  probe->add_option("--test", probe_args.test_manifest, "test manifest")->required();
  probe->add_option("--input-kind", probe_args.kind,
                    "continuous|pre-pooled|post-pooled|fused")
      ->check(CLI::IsMember({"continuous", "pre-pooled", "post-pooled", "fused"}))
      ->capture_default_str();
  probe->add_option("--task", probe_args.task, "multiclass|binary")
      ->check(CLI::IsMember({"multiclass", "binary"}))
      ->capture_default_str();
  probe->add_option("--tier", probe_args.tier, "probing unit granularity")
      ->check(CLI::IsMember({"frame", "phone", "word", "utterance"}))
      ->capture_default_str();
  probe->add_option("--label", probe_args.label_key, "label key in the manifest")
      ->capture_default_str();
  probe->add_option("--label-tier", probe_args.label_tier,
                    "broadcast array labels from this tier's segments to frames")
      ->check(CLI::IsMember({"phone", "word", "utterance"}));
  probe->add_option("-m,--model", probe_args.model,
                    "model directory (required unless --input-kind continuous)");
  probe->add_option("-o,--report", probe_args.report_path, "metrics report path");
  probe->add_option("--lr", probe_args.hyper.learning_rate, "learning rate")
      ->capture_default_str();
  probe->add_option("--epochs", probe_args.hyper.epochs, "max epochs")
      ->capture_default_str();
  probe->add_option("--batch-size", probe_args.hyper.batch_size, "mini-batch size")
      ->capture_default_str();
  probe->add_option("--patience", probe_args.hyper.patience, "early-stopping patience")
      ->capture_default_str();
  probe->add_option("--seed", probe_args.hyper.seed, "shuffling seed")
      ->envname("SVCQ_SEED")
      ->capture_default_str();
  add_tier_flags(probe, &probe_args.tiers);

  std::string inspect_path;
  CLI::App *inspect = app.add_subcommand("inspect", "print binary file headers");
  inspect->add_option("file", inspect_path, "SVCB or FMAT file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << e.what() << "\n";
    std::cerr << "run 'svcq --help' for usage\n";
    return 2;
  }

  try {
    if (train->parsed()) {
      dump_config(*train, common);
      return run_train(train_args);
    }
    if (encode->parsed()) {
      dump_config(*encode, common);
      return run_encode(encode_args, common);
    }
    if (fuse->parsed()) {
      dump_config(*fuse, common);
      return run_fuse(fuse_args, common);
    }
    if (bitrate->parsed()) {
      dump_config(*bitrate, common);
      return run_bitrate(bitrate_args);
    }
    if (probe->parsed()) {
      dump_config(*probe, common);
      return run_probe(probe_args);
    }
    if (inspect->parsed()) {
      return run_inspect(inspect_path);
    }
  } catch (const Error &e) {
    std::cerr << "svcq: error [" << e.kind() << "]: " << e.what() << "\n";
    return 1;
  } catch (const std::exception &e) {
    std::cerr << "svcq: error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
