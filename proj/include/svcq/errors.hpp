// include/svcq/errors.hpp

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

#ifndef SVCQ_ERRORS_HPP_
#define SVCQ_ERRORS_HPP_

#include <stdexcept>
#include <string>

namespace svcq {

// Base of every error thrown by this library. Each subclass names one
// distinguishable failure mode so callers can branch on the type.
class Error : public std::runtime_error {
 public:
  explicit Error(const std::string &msg) : std::runtime_error(msg) {}
  virtual const char *kind() const noexcept { return "Error"; }
};

#define SVCQ_DEFINE_ERROR(Name)                                     \
  class Name : public Error {                                       \
   public:                                                          \
    explicit Name(const std::string &msg) : Error(msg) {}           \
    const char *kind() const noexcept override { return #Name; }    \
  }

// Construction-time invariant violations on domain types.
SVCQ_DEFINE_ERROR(InvalidArgument);
SVCQ_DEFINE_ERROR(NonFiniteData);

// alignment-io
SVCQ_DEFINE_ERROR(UnsupportedEncoding);
SVCQ_DEFINE_ERROR(MissingTier);
SVCQ_DEFINE_ERROR(MalformedJson);
SVCQ_DEFINE_ERROR(SchemaViolation);
SVCQ_DEFINE_ERROR(AlignmentMismatch);

// quantizer / pooling / codec
SVCQ_DEFINE_ERROR(TooFewPoints);
SVCQ_DEFINE_ERROR(DimensionMismatch);
SVCQ_DEFINE_ERROR(CodeOutOfRange);
SVCQ_DEFINE_ERROR(ModelMismatch);
SVCQ_DEFINE_ERROR(EmptySplit);
SVCQ_DEFINE_ERROR(DimMismatchAcrossCorpus);
SVCQ_DEFINE_ERROR(ZeroDuration);
SVCQ_DEFINE_ERROR(EmptyInput);

// serialization
SVCQ_DEFINE_ERROR(BadMagic);
SVCQ_DEFINE_ERROR(VersionUnsupported);
SVCQ_DEFINE_ERROR(ChecksumMismatch);
SVCQ_DEFINE_ERROR(TruncatedFile);
SVCQ_DEFINE_ERROR(IoError);

// probe
SVCQ_DEFINE_ERROR(LabelOutOfRange);

#undef SVCQ_DEFINE_ERROR

// TextGrid syntax errors carry the offending 1-based line number.
class MalformedTextGrid : public Error {
 public:
  MalformedTextGrid(const std::string &msg, int line)
      : Error(msg + " (line " + std::to_string(line) + ")"), line_(line) {}
  const char *kind() const noexcept override { return "MalformedTextGrid"; }
  int line() const noexcept { return line_; }

 private:
  int line_;
};

}  // namespace svcq

#endif  // SVCQ_ERRORS_HPP_
