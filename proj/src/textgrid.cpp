// src/textgrid.cpp

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

// Praat writes the same value sequence in both TextGrid syntaxes; the long
// form merely decorates it with "key =" labels and "item [n]:" headers. The
// scanner below reduces either form to one token stream (numbers, quoted
// strings, <flags>) and the grammar is parsed on top of that, which keeps a
// single code path for both variants.

#include "svcq/textgrid.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <sstream>

namespace svcq {

const TextGridTier *TextGridDocument::find_tier(std::string_view name) const {
  for (const TextGridTier &t : tiers) {
    if (t.name == name) return &t;
  }
  return nullptr;
}

bool SilenceOptions::is_silence(const std::string &label) const {
  if (keep_silence) return label.empty();  // unlabeled gaps are never segments
  return std::find(silence_labels.begin(), silence_labels.end(), label) !=
         silence_labels.end();
}

namespace {

struct Token {
  enum class Kind { kNumber, kString, kFlag };
  Kind kind;
  double number = 0.0;
  std::string text;
  int line = 0;
};

bool valid_utf8(std::string_view s) {
  std::size_t i = 0;
  while (i < s.size()) {
    const unsigned char c = static_cast<unsigned char>(s[i]);
    std::size_t extra;
    if (c < 0x80) {
      extra = 0;
    } else if ((c & 0xe0) == 0xc0) {
      extra = 1;
    } else if ((c & 0xf0) == 0xe0) {
      extra = 2;
    } else if ((c & 0xf8) == 0xf0) {
      extra = 3;
    } else {
      return false;
    }
    if (extra > 0 && i + extra >= s.size()) return false;
    for (std::size_t j = 1; j <= extra; ++j) {
      if ((static_cast<unsigned char>(s[i + j]) & 0xc0) != 0x80) return false;
    }
    i += extra + 1;
  }
  return true;
}

class Scanner {
 public:
  explicit Scanner(std::string_view text) : text_(text) {}

  // Returns false at end of input.
  bool next(Token *out) {
    for (;;) {
      skip_filler();
      if (pos_ >= text_.size()) return false;
      const char c = text_[pos_];
      if (c == '"') {
        *out = read_string();
        return true;
      }
      if (c == '<') {
        *out = read_flag();
        return true;
      }
      if (c == '-' || c == '+' || c == '.' || (c >= '0' && c <= '9')) {
        *out = read_number();
        return true;
      }
      // Unexpected punctuation; skip a single character so the scanner
      // cannot stall.
      advance();
    }
  }

  int line() const { return line_; }

 private:
  void advance() {
    if (text_[pos_] == '\n') ++line_;
    ++pos_;
  }

  static bool is_ident(char c) {
    return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || c == '_' ||
           c == '?' || c == '!';
  }

  // Skips whitespace, key identifiers, '=', ':' and bracketed indices.
  void skip_filler() {
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if (c == ' ' || c == '\t' || c == '\r' || c == '\n') {
        advance();
      } else if (is_ident(c) || c == '=' || c == ':') {
        advance();
      } else if (c == '[') {
        while (pos_ < text_.size() && text_[pos_] != ']') advance();
        if (pos_ < text_.size()) advance();  // ']'
      } else {
        return;
      }
    }
  }

  Token read_string() {
    Token t{Token::Kind::kString, 0.0, "", line_};
    advance();  // opening quote
    for (;;) {
      if (pos_ >= text_.size()) {
        throw MalformedTextGrid("unterminated string", t.line);
      }
      const char c = text_[pos_];
      if (c == '"') {
        advance();
        if (pos_ < text_.size() && text_[pos_] == '"') {
          t.text.push_back('"');  // Praat escapes '"' by doubling it
          advance();
          continue;
        }
        return t;
      }
      t.text.push_back(c);
      advance();
    }
  }

  Token read_flag() {
    Token t{Token::Kind::kFlag, 0.0, "", line_};
    advance();  // '<'
    while (pos_ < text_.size() && text_[pos_] != '>') {
      t.text.push_back(text_[pos_]);
      advance();
    }
    if (pos_ >= text_.size()) throw MalformedTextGrid("unterminated flag", t.line);
    advance();  // '>'
    return t;
  }

  Token read_number() {
    Token t{Token::Kind::kNumber, 0.0, "", line_};
    const std::size_t start = pos_;
    while (pos_ < text_.size()) {
      const char c = text_[pos_];
      if ((c >= '0' && c <= '9') || c == '-' || c == '+' || c == '.' ||
          c == 'e' || c == 'E') {
        advance();
      } else {
        break;
      }
    }
    const char *first = text_.data() + start;
    const char *last = text_.data() + pos_;
    auto [ptr, ec] = std::from_chars(first, last, t.number);
    if (ec != std::errc() || ptr != last) {
      throw MalformedTextGrid("invalid number", t.line);
    }
    return t;
  }

  std::string_view text_;
  std::size_t pos_ = 0;
  int line_ = 1;
};

class TokenStream {
 public:
  explicit TokenStream(std::string_view text) : scanner_(text) {}

  double number(const char *what) {
    const Token t = take(what);
    if (t.kind != Token::Kind::kNumber) {
      throw MalformedTextGrid(std::string("expected ") + what, t.line);
    }
    return t.number;
  }

  std::string string(const char *what) {
    Token t = take(what);
    if (t.kind != Token::Kind::kString) {
      throw MalformedTextGrid(std::string("expected ") + what, t.line);
    }
    return std::move(t.text);
  }

  std::string flag(const char *what) {
    Token t = take(what);
    if (t.kind != Token::Kind::kFlag) {
      throw MalformedTextGrid(std::string("expected ") + what, t.line);
    }
    return std::move(t.text);
  }

  int line() const { return scanner_.line(); }

 private:
  Token take(const char *what) {
    Token t;
    if (!scanner_.next(&t)) {
      throw MalformedTextGrid(std::string("unexpected end of file, expected ") + what,
                              scanner_.line());
    }
    return t;
  }

  Scanner scanner_;
};

void check_contiguous(const TextGridTier &tier, const TextGridDocument &doc,
                      int line) {
  const TextGridInterval *prev = nullptr;
  for (const TextGridInterval &iv : tier.intervals) {
    if (iv.xmax < iv.xmin) {
      throw MalformedTextGrid("interval with xmax < xmin in tier " + tier.name, line);
    }
    if (iv.xmin < doc.xmin - 1e-6 || iv.xmax > doc.xmax + 1e-6) {
      throw MalformedTextGrid("interval outside document range in tier " + tier.name,
                              line);
    }
    if (prev != nullptr && std::abs(iv.xmin - prev->xmax) > 1e-6) {
      throw MalformedTextGrid("intervals not contiguous in tier " + tier.name, line);
    }
    prev = &iv;
  }
}

std::string quote(const std::string &s) {
  std::string out = "\"";
  for (char c : s) {
    out.push_back(c);
    if (c == '"') out.push_back('"');
  }
  out.push_back('"');
  return out;
}

std::string format_time(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

}  // namespace

TextGridDocument parse_textgrid(std::string_view bytes) {
  // BOM and encoding checks.
  if (bytes.size() >= 2) {
    const unsigned char b0 = static_cast<unsigned char>(bytes[0]);
    const unsigned char b1 = static_cast<unsigned char>(bytes[1]);
    if ((b0 == 0xff && b1 == 0xfe) || (b0 == 0xfe && b1 == 0xff)) {
      throw UnsupportedEncoding("UTF-16 TextGrid files are not supported; re-save as UTF-8");
    }
  }
  if (bytes.size() >= 3 && static_cast<unsigned char>(bytes[0]) == 0xef &&
      static_cast<unsigned char>(bytes[1]) == 0xbb &&
      static_cast<unsigned char>(bytes[2]) == 0xbf) {
    bytes.remove_prefix(3);
  }
  if (bytes.find('\0') != std::string_view::npos || !valid_utf8(bytes)) {
    throw UnsupportedEncoding("TextGrid is not valid UTF-8 text");
  }

  TokenStream ts(bytes);
  if (ts.string("file type") != "ooTextFile") {
    throw MalformedTextGrid("not an ooTextFile", 1);
  }
  if (ts.string("object class") != "TextGrid") {
    throw MalformedTextGrid("object class is not TextGrid", 1);
  }

  TextGridDocument doc;
  doc.xmin = ts.number("document xmin");
  doc.xmax = ts.number("document xmax");
  if (!(doc.xmax > doc.xmin)) {
    throw MalformedTextGrid("document xmax must exceed xmin", ts.line());
  }
  const std::string tiers_flag = ts.flag("tiers? flag");
  if (tiers_flag == "absent") return doc;
  if (tiers_flag != "exists") {
    throw MalformedTextGrid("expected <exists> or <absent>", ts.line());
  }

  const double size = ts.number("tier count");
  if (size < 0 || size != std::floor(size)) {
    throw MalformedTextGrid("tier count must be a non-negative integer", ts.line());
  }
  for (int i = 0; i < static_cast<int>(size); ++i) {
    const int tier_line = ts.line();
    const std::string klass = ts.string("tier class");
    TextGridTier tier;
    tier.name = ts.string("tier name");
    ts.number("tier xmin");
    ts.number("tier xmax");
    const double n = ts.number("interval count");
    if (n < 0 || n != std::floor(n)) {
      throw MalformedTextGrid("interval count must be a non-negative integer",
                              ts.line());
    }
    if (klass == "IntervalTier") {
      tier.intervals.reserve(static_cast<std::size_t>(n));
      for (int j = 0; j < static_cast<int>(n); ++j) {
        TextGridInterval iv;
        iv.xmin = ts.number("interval xmin");
        iv.xmax = ts.number("interval xmax");
        iv.text = ts.string("interval text");
        tier.intervals.push_back(std::move(iv));
      }
      check_contiguous(tier, doc, tier_line);
      doc.tiers.push_back(std::move(tier));
    } else if (klass == "TextTier") {
      // Point tier: consume and drop.
      for (int j = 0; j < static_cast<int>(n); ++j) {
        ts.number("point time");
        ts.string("point mark");
      }
      doc.warnings.push_back("ignored point tier \"" + tier.name + "\"");
    } else {
      throw MalformedTextGrid("unknown tier class \"" + klass + "\"", tier_line);
    }
  }
  return doc;
}

std::string write_textgrid(const TextGridDocument &doc) {
  std::ostringstream os;
  os << "File type = \"ooTextFile\"\n";
  os << "Object class = \"TextGrid\"\n\n";
  os << "xmin = " << format_time(doc.xmin) << "\n";
  os << "xmax = " << format_time(doc.xmax) << "\n";
  os << "tiers? <exists>\n";
  os << "size = " << doc.tiers.size() << "\n";
  os << "item []:\n";
  for (std::size_t i = 0; i < doc.tiers.size(); ++i) {
    const TextGridTier &tier = doc.tiers[i];
    os << "    item [" << (i + 1) << "]:\n";
    os << "        class = \"IntervalTier\"\n";
    os << "        name = " << quote(tier.name) << "\n";
    os << "        xmin = " << format_time(doc.xmin) << "\n";
    os << "        xmax = " << format_time(doc.xmax) << "\n";
    os << "        intervals: size = " << tier.intervals.size() << "\n";
    for (std::size_t j = 0; j < tier.intervals.size(); ++j) {
      const TextGridInterval &iv = tier.intervals[j];
      os << "        intervals [" << (j + 1) << "]:\n";
      os << "            xmin = " << format_time(iv.xmin) << "\n";
      os << "            xmax = " << format_time(iv.xmax) << "\n";
      os << "            text = " << quote(iv.text) << "\n";
    }
  }
  return os.str();
}

Segmentation textgrid_to_segmentation(const TextGridDocument &doc,
                                      const std::string &phone_tier,
                                      const std::string &word_tier,
                                      const SilenceOptions &silence) {
  const TextGridTier *phones = doc.find_tier(phone_tier);
  if (phones == nullptr) {
    throw MissingTier("TextGrid has no tier named \"" + phone_tier + "\"");
  }
  const TextGridTier *words = doc.find_tier(word_tier);
  if (words == nullptr) {
    throw MissingTier("TextGrid has no tier named \"" + word_tier + "\"");
  }

  auto collect = [&](const TextGridTier &tier, Tier t) {
    std::vector<Segment> out;
    for (const TextGridInterval &iv : tier.intervals) {
      if (silence.is_silence(iv.text)) continue;
      if (!(iv.xmax > iv.xmin)) continue;  // zero-length intervals carry no frames
      out.emplace_back(t, iv.text, iv.xmin, iv.xmax);
    }
    return out;
  };

  return Segmentation(doc.xmax, collect(*phones, Tier::kPhone),
                      collect(*words, Tier::kWord));
}

}  // namespace svcq
