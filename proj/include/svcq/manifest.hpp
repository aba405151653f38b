// include/svcq/manifest.hpp

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

#ifndef SVCQ_MANIFEST_HPP_
#define SVCQ_MANIFEST_HPP_

#include <filesystem>
#include <string>
#include <vector>

#include <json.hpp>

#include "svcq/types.hpp"

namespace svcq {

struct ManifestEntry {
  std::string id;
  std::filesystem::path features;   // FMAT file, resolved
  std::filesystem::path alignment;  // TextGrid or JSON alignment, resolved
  std::string split;                // train | valid | test
  nlohmann::json labels;            // free-form task labels, may be null
};

// JSON-lines corpus manifest, one entry per line:
//   {"id": ..., "features": path, "alignment": path,
//    "split": "train|valid|test", "labels": {...}}
// Relative paths resolve against the manifest's directory. Entry ids must be
// unique and every referenced file must exist at load time.
class CorpusManifest {
 public:
  static CorpusManifest load(const std::filesystem::path &path);
  // Parses manifest text; relative paths resolve against base_dir.
  static CorpusManifest parse(std::string_view text,
                              const std::filesystem::path &base_dir);

  const std::vector<ManifestEntry> &entries() const { return entries_; }
  std::vector<const ManifestEntry *> split(std::string_view tag) const;

 private:
  std::vector<ManifestEntry> entries_;
};

}  // namespace svcq

#endif  // SVCQ_MANIFEST_HPP_
