// src/manifest.cpp

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

#include "svcq/manifest.hpp"

#include <set>
#include <sstream>

#include "svcq/serial.hpp"

namespace svcq {

namespace {

std::filesystem::path resolve(const std::filesystem::path &base,
                              const std::string &p) {
  std::filesystem::path fp(p);
  return fp.is_absolute() ? fp : base / fp;
}

std::string required_string(const nlohmann::json &obj, const char *key, int line) {
  if (!obj.contains(key) || !obj.at(key).is_string()) {
    throw SchemaViolation("manifest line " + std::to_string(line) +
                          ": missing string field \"" + key + "\"");
  }
  return obj.at(key).get<std::string>();
}

}  // namespace

CorpusManifest CorpusManifest::load(const std::filesystem::path &path) {
  return parse(read_file_bytes(path), path.parent_path());
}

CorpusManifest CorpusManifest::parse(std::string_view text,
                                     const std::filesystem::path &base_dir) {
  CorpusManifest m;
  std::set<std::string> seen_ids;
  std::istringstream in{std::string(text)};
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    // Tolerate blank lines and CRLF endings.
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    nlohmann::json obj;
    try {
      obj = nlohmann::json::parse(line);
    } catch (const nlohmann::json::parse_error &e) {
      throw MalformedJson("manifest line " + std::to_string(line_no) + ": " +
                          e.what());
    }
    if (!obj.is_object()) {
      throw SchemaViolation("manifest line " + std::to_string(line_no) +
                            ": entry must be a JSON object");
    }

    ManifestEntry entry;
    entry.id = required_string(obj, "id", line_no);
    entry.features = resolve(base_dir, required_string(obj, "features", line_no));
    entry.alignment = resolve(base_dir, required_string(obj, "alignment", line_no));
    entry.split = required_string(obj, "split", line_no);
    if (entry.split != "train" && entry.split != "valid" && entry.split != "test") {
      throw SchemaViolation("manifest line " + std::to_string(line_no) +
                            ": split must be train, valid or test");
    }
    if (obj.contains("labels")) entry.labels = obj.at("labels");

    if (!seen_ids.insert(entry.id).second) {
      throw SchemaViolation("duplicate utterance id \"" + entry.id + "\"");
    }
    for (const auto &p : {entry.features, entry.alignment}) {
      if (!std::filesystem::exists(p)) {
        throw IoError("manifest references a missing file: " + p.string());
      }
    }
    m.entries_.push_back(std::move(entry));
  }
  return m;
}

std::vector<const ManifestEntry *> CorpusManifest::split(std::string_view tag) const {
  std::vector<const ManifestEntry *> out;
  for (const ManifestEntry &e : entries_) {
    if (tag == "all" || e.split == tag) out.push_back(&e);
  }
  return out;
}

}  // namespace svcq
