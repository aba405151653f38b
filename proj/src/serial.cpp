// src/serial.cpp

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

#include "svcq/serial.hpp"

#include <zlib.h>

#include <bit>
#include <cstring>
#include <fstream>

namespace svcq {

namespace {

void put_u16(std::string &out, std::uint16_t v) {
  out.push_back(static_cast<char>(v & 0xff));
  out.push_back(static_cast<char>((v >> 8) & 0xff));
}

void put_u32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_u64(std::string &out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

void put_f32(std::string &out, float v) { put_u32(out, std::bit_cast<std::uint32_t>(v)); }
void put_f64(std::string &out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

class Reader {
 public:
  explicit Reader(std::string_view bytes) : bytes_(bytes) {}

  std::uint8_t u8() { return take(1)[0]; }

  std::uint16_t u16() {
    auto b = take(2);
    return static_cast<std::uint16_t>(b[0]) |
           static_cast<std::uint16_t>(b[1]) << 8;
  }

  std::uint32_t u32() {
    auto b = take(4);
    std::uint32_t v = 0;
    for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
    return v;
  }

  std::uint64_t u64() {
    auto b = take(8);
    std::uint64_t v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
    return v;
  }

  float f32() { return std::bit_cast<float>(u32()); }
  double f64() { return std::bit_cast<double>(u64()); }

  void magic(const char expect[4], const char *format) {
    if (bytes_.size() < 4) throw TruncatedFile("file shorter than its magic");
    if (std::memcmp(bytes_.data(), expect, 4) != 0) {
      throw BadMagic(std::string("not a ") + format + " file");
    }
    pos_ = 4;
  }

  std::size_t pos() const { return pos_; }
  std::size_t remaining() const { return bytes_.size() - pos_; }

 private:
  const unsigned char *take(std::size_t n) {
    if (remaining() < n) throw TruncatedFile("unexpected end of file");
    const auto *p = reinterpret_cast<const unsigned char *>(bytes_.data()) + pos_;
    pos_ += n;
    return p;
  }

  std::string_view bytes_;
  std::size_t pos_ = 0;
};

std::uint32_t crc_of(std::string_view bytes) {
  return static_cast<std::uint32_t>(
      crc32(0L, reinterpret_cast<const Bytef *>(bytes.data()),
            static_cast<uInt>(bytes.size())));
}

void append_crc(std::string &out) { put_u32(out, crc_of(out)); }

// Checks the trailing CRC32 and returns the payload view without it.
std::string_view strip_checked_crc(std::string_view bytes, std::size_t header) {
  if (bytes.size() < header + 4) throw TruncatedFile("file shorter than its header");
  const std::string_view payload = bytes.substr(0, bytes.size() - 4);
  Reader tail(bytes.substr(bytes.size() - 4));
  const std::uint32_t stored = tail.u32();
  if (stored != crc_of(payload)) {
    throw ChecksumMismatch("CRC32 mismatch, file is corrupted");
  }
  return payload;
}

}  // namespace

std::string save_codebook(const Codebook &cb) {
  std::string out;
  out.reserve(kCodebookHeaderBytes + 4 * static_cast<std::size_t>(cb.k() * cb.dim()) + 4);
  out.append("SVCB", 4);
  put_u16(out, kCodebookFormatVersion);
  out.push_back(static_cast<char>(tier_index(cb.tier())));
  put_u32(out, static_cast<std::uint32_t>(cb.k()));
  put_u32(out, static_cast<std::uint32_t>(cb.dim()));
  put_u64(out, cb.meta().seed);
  put_u32(out, cb.meta().iterations_run);
  put_f64(out, cb.meta().final_inertia);
  const RowMatrixf &c = cb.centroids();
  for (Index i = 0; i < c.rows(); ++i) {
    for (Index j = 0; j < c.cols(); ++j) put_f32(out, c(i, j));
  }
  append_crc(out);
  return out;
}

Codebook load_codebook(std::string_view bytes) {
  const std::string_view payload = strip_checked_crc(bytes, kCodebookHeaderBytes);
  Reader r(payload);
  r.magic("SVCB", "SVCB codebook");
  const std::uint16_t version = r.u16();
  if (version != kCodebookFormatVersion) {
    throw VersionUnsupported("unsupported SVCB version " + std::to_string(version));
  }
  const std::uint8_t tier_tag = r.u8();
  if (tier_tag >= kAllTiers.size()) {
    throw SchemaViolation("SVCB tier tag out of range");
  }
  const std::uint32_t k = r.u32();
  const std::uint32_t dim = r.u32();
  TrainingMeta meta;
  meta.seed = r.u64();
  meta.iterations_run = r.u32();
  meta.final_inertia = r.f64();
  if (r.remaining() != 4ull * k * dim) {
    throw TruncatedFile("SVCB centroid payload has the wrong size");
  }
  RowMatrixf centroids(k, dim);
  for (std::uint32_t i = 0; i < k; ++i) {
    for (std::uint32_t j = 0; j < dim; ++j) centroids(i, j) = r.f32();
  }
  return Codebook(static_cast<Tier>(tier_tag), std::move(centroids), meta);
}

std::string save_feature_matrix(const FeatureMatrix &fm) {
  std::string out;
  out.reserve(kFeatureHeaderBytes +
              4 * static_cast<std::size_t>(fm.num_frames() * fm.dim()) + 4);
  out.append("FMAT", 4);
  put_u16(out, kFeatureFormatVersion);
  put_u32(out, static_cast<std::uint32_t>(fm.num_frames()));
  put_u32(out, static_cast<std::uint32_t>(fm.dim()));
  put_f64(out, fm.frame_hop());
  const RowMatrixf &v = fm.values();
  for (Index i = 0; i < v.rows(); ++i) {
    for (Index j = 0; j < v.cols(); ++j) put_f32(out, v(i, j));
  }
  append_crc(out);
  return out;
}

FeatureMatrix load_feature_matrix(std::string_view bytes) {
  const std::string_view payload = strip_checked_crc(bytes, kFeatureHeaderBytes);
  Reader r(payload);
  r.magic("FMAT", "FMAT feature");
  const std::uint16_t version = r.u16();
  if (version != kFeatureFormatVersion) {
    throw VersionUnsupported("unsupported FMAT version " + std::to_string(version));
  }
  const std::uint32_t num_frames = r.u32();
  const std::uint32_t dim = r.u32();
  const double frame_hop = r.f64();
  if (r.remaining() != 4ull * num_frames * dim) {
    throw TruncatedFile("FMAT value payload has the wrong size");
  }
  RowMatrixf values(num_frames, dim);
  for (std::uint32_t i = 0; i < num_frames; ++i) {
    for (std::uint32_t j = 0; j < dim; ++j) values(i, j) = r.f32();
  }
  return FeatureMatrix(std::move(values), frame_hop);
}

std::string read_file_bytes(const std::filesystem::path &path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::string bytes((std::istreambuf_iterator<char>(in)),
                    std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("read failed on " + path.string());
  return bytes;
}

void write_file_bytes(const std::filesystem::path &path, std::string_view bytes) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("write failed on " + path.string());
}

void write_codebook_file(const std::filesystem::path &path, const Codebook &cb) {
  write_file_bytes(path, save_codebook(cb));
}

Codebook read_codebook_file(const std::filesystem::path &path) {
  return load_codebook(read_file_bytes(path));
}

void write_feature_matrix_file(const std::filesystem::path &path,
                               const FeatureMatrix &fm) {
  write_file_bytes(path, save_feature_matrix(fm));
}

FeatureMatrix read_feature_matrix_file(const std::filesystem::path &path) {
  return load_feature_matrix(read_file_bytes(path));
}

}  // namespace svcq
