// include/svcq/serial.hpp

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

// Binary file formats. Both are little-endian with a trailing CRC32 over all
// preceding bytes:
//
//   SVCB codebook: magic "SVCB", u16 version, u8 tier tag, u32 k, u32 dim,
//                  u64 seed, u32 iterations_run, f64 final_inertia,
//                  f32 centroids row-major, u32 crc32.
//   FMAT features: magic "FMAT", u16 version, u32 num_frames, u32 dim,
//                  f64 frame_hop, f32 values row-major, u32 crc32.

#ifndef SVCQ_SERIAL_HPP_
#define SVCQ_SERIAL_HPP_

#include <filesystem>
#include <string>
#include <string_view>

#include "svcq/types.hpp"

namespace svcq {

std::string save_codebook(const Codebook &cb);
Codebook load_codebook(std::string_view bytes);

std::string save_feature_matrix(const FeatureMatrix &fm);
FeatureMatrix load_feature_matrix(std::string_view bytes);

// File wrappers. Reads throw IoError when the file cannot be opened.
void write_codebook_file(const std::filesystem::path &path, const Codebook &cb);
Codebook read_codebook_file(const std::filesystem::path &path);
void write_feature_matrix_file(const std::filesystem::path &path,
                               const FeatureMatrix &fm);
FeatureMatrix read_feature_matrix_file(const std::filesystem::path &path);

std::string read_file_bytes(const std::filesystem::path &path);
void write_file_bytes(const std::filesystem::path &path, std::string_view bytes);

inline constexpr std::uint16_t kCodebookFormatVersion = 1;
inline constexpr std::uint16_t kFeatureFormatVersion = 1;
inline constexpr std::size_t kCodebookHeaderBytes = 4 + 2 + 1 + 4 + 4 + 8 + 4 + 8;
inline constexpr std::size_t kFeatureHeaderBytes = 4 + 2 + 4 + 4 + 8;

}  // namespace svcq

#endif  // SVCQ_SERIAL_HPP_
