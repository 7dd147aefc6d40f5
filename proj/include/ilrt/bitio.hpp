// Copyright 2026 The ilrt Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
//
// Bit-stream ingestion and emission: the appendix base-10 record format,
// plain ASCII bit strings, raw bytes, and the {0,1} -> {-1,+1} rescaling.

#ifndef ILRT_BITIO_HPP_
#define ILRT_BITIO_HPP_

#include <gmpxx.h>

#include <cctype>
#include <cstddef>
#include <cstdint>
#include <istream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ilrt/errors.hpp"

namespace ilrt::bitio {

/// A finite string over {0,1}. Elements are validated on construction.
class BitString {
 public:
  BitString() = default;
  explicit BitString(std::vector<std::uint8_t> bits) : bits_(std::move(bits)) {
    for (std::uint8_t b : bits_) {
      if (b > 1) throw DomainError("BitString element is not 0 or 1");
    }
  }

  /// Parse from characters '0'/'1', e.g. "0110".
  static BitString from_string(std::string_view s) {
    std::vector<std::uint8_t> bits;
    bits.reserve(s.size());
    for (char c : s) {
      if (c != '0' && c != '1') throw ParseError("BitString character is not '0' or '1'");
      bits.push_back(static_cast<std::uint8_t>(c - '0'));
    }
    return BitString(std::move(bits));
  }

  std::size_t size() const { return bits_.size(); }
  bool empty() const { return bits_.empty(); }
  std::uint8_t operator[](std::size_t i) const { return bits_[i]; }
  const std::vector<std::uint8_t>& bits() const { return bits_; }

  std::string to_string() const {
    std::string s(bits_.size(), '0');
    for (std::size_t i = 0; i < bits_.size(); ++i) s[i] = static_cast<char>('0' + bits_[i]);
    return s;
  }

  friend bool operator==(const BitString&, const BitString&) = default;

 private:
  std::vector<std::uint8_t> bits_;
};

/// A finite string over {-1,+1}, the experimental record x_1..x_N.
class SignSequence {
 public:
  SignSequence() = default;
  explicit SignSequence(std::vector<std::int8_t> signs) : signs_(std::move(signs)) {
    for (std::int8_t s : signs_) {
      if (s != -1 && s != 1) throw DomainError("SignSequence element is not -1 or +1");
    }
  }

  std::size_t size() const { return signs_.size(); }
  bool empty() const { return signs_.empty(); }
  std::int8_t operator[](std::size_t i) const { return signs_[i]; }
  const std::vector<std::int8_t>& signs() const { return signs_; }

  friend bool operator==(const SignSequence&, const SignSequence&) = default;

 private:
  std::vector<std::int8_t> signs_;
};

/// Element-wise x -> 2x - 1, mapping 0 to -1 and 1 to +1.
inline SignSequence rescale(const BitString& b) {
  std::vector<std::int8_t> signs;
  signs.reserve(b.size());
  for (std::size_t i = 0; i < b.size(); ++i) {
    signs.push_back(static_cast<std::int8_t>(2 * static_cast<int>(b[i]) - 1));
  }
  return SignSequence(std::move(signs));
}

/// Inverse of rescale: element-wise x -> (x + 1) / 2.
inline BitString to_bits(const SignSequence& s) {
  std::vector<std::uint8_t> bits;
  bits.reserve(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) {
    bits.push_back(static_cast<std::uint8_t>((static_cast<int>(s[i]) + 1) / 2));
  }
  return BitString(std::move(bits));
}

namespace detail {

/// Strips whitespace everywhere and one trailing run of non-digit
/// characters (the appendix dumps carry stray "+Null" tokens), then
/// parses the remaining decimal digits.
inline mpz_class parse_decimal_record(std::string_view text) {
  std::string digits;
  digits.reserve(text.size());
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) continue;
    digits.push_back(c);
  }
  std::size_t end = digits.size();
  while (end > 0 && !std::isdigit(static_cast<unsigned char>(digits[end - 1]))) --end;
  digits.resize(end);
  if (digits.empty()) throw ParseError("no decimal digits in record");
  for (char c : digits) {
    if (!std::isdigit(static_cast<unsigned char>(c))) {
      throw ParseError("non-digit character inside decimal record");
    }
  }
  mpz_class value;
  if (value.set_str(digits, 10) != 0) throw ParseError("invalid decimal record");
  return value;
}

/// Binary expansion of a nonnegative integer, most significant bit first,
/// left-padded with zeros to exactly `length` bits. Caller guarantees the
/// value fits.
inline BitString bits_of_value(const mpz_class& value, std::size_t length) {
  std::vector<std::uint8_t> bits(length, 0);
  for (std::size_t i = 0; i < length; ++i) {
    bits[length - 1 - i] =
        static_cast<std::uint8_t>(mpz_tstbit(value.get_mpz_t(), static_cast<mp_bitcnt_t>(i)));
  }
  return BitString(std::move(bits));
}

inline std::size_t bit_length(const mpz_class& value) {
  if (value == 0) return 0;
  return mpz_sizeinbase(value.get_mpz_t(), 2);
}

}  // namespace detail

/// Decode one appendix-style base-10 record into its binary expansion,
/// left-padded with zeros to exactly target_length bits. The appendix
/// encoding destroys leading zeros, so the caller must declare the length.
inline BitString decode_base10_record(std::string_view text, std::size_t target_length) {
  if (target_length == 0) throw DomainError("target_length must be positive");
  mpz_class value = detail::parse_decimal_record(text);
  std::size_t nbits = detail::bit_length(value);
  if (nbits > target_length) {
    throw OverflowError("binary expansion has " + std::to_string(nbits) +
                        " bits, exceeding declared length " + std::to_string(target_length));
  }
  return detail::bits_of_value(value, target_length);
}

/// Inverse of decode_base10_record: the decimal representation of the
/// integer whose binary digits are b. Leading zeros of b drop out.
inline std::string encode_base10(const BitString& b) {
  mpz_class value = 0;
  for (std::size_t i = 0; i < b.size(); ++i) {
    value <<= 1;
    if (b[i]) value |= 1;
  }
  return value.get_str(10);
}

enum class CorpusFormat {
  kAppendixDecimal,  // blank-line separated base-10 blobs
  kAsciiBits,        // a stream of '0'/'1' characters
  kRawBytes,         // packed bytes, most significant bit first
};

/// What to do with an appendix record whose binary expansion is longer
/// than the declared record length. The published corpus contains one
/// such record; its first record_length bits are what the published
/// frequency table was computed from, so kTruncate keeps the leading bits
/// and reports a diagnostic.
enum class OverlengthPolicy {
  kTruncate,
  kStrict,
};

struct RecordDiagnostic {
  std::size_t record_index = 0;  // 1-based
  std::string message;
};

struct Corpus {
  std::vector<SignSequence> records;
  std::vector<RecordDiagnostic> diagnostics;
};

namespace detail {

inline void chunk_bits(const std::vector<std::uint8_t>& all_bits, std::size_t record_length,
                       Corpus& out) {
  std::size_t full = all_bits.size() / record_length;
  for (std::size_t r = 0; r < full; ++r) {
    std::vector<std::uint8_t> bits(all_bits.begin() + static_cast<std::ptrdiff_t>(r * record_length),
                                   all_bits.begin() + static_cast<std::ptrdiff_t>((r + 1) * record_length));
    out.records.push_back(rescale(BitString(std::move(bits))));
  }
  std::size_t leftover = all_bits.size() % record_length;
  if (leftover != 0) {
    out.diagnostics.push_back({full + 1, "discarded incomplete trailing record of " +
                                             std::to_string(leftover) + " bits"});
  }
}

}  // namespace detail

/// Load a whole corpus: one SignSequence of exactly record_length per
/// record, in source order. Per-record failures are collected as
/// diagnostics rather than aborting the load.
inline Corpus load_corpus(std::istream& in, CorpusFormat format, std::size_t record_length,
                          OverlengthPolicy policy = OverlengthPolicy::kTruncate) {
  if (record_length == 0) throw DomainError("record_length must be positive");
  Corpus corpus;
  switch (format) {
    case CorpusFormat::kAppendixDecimal: {
      std::vector<std::string> blobs;
      std::string line, current;
      auto flush = [&] {
        if (!current.empty()) blobs.push_back(std::exchange(current, {}));
      };
      while (std::getline(in, line)) {
        bool blank = true;
        for (char c : line) {
          if (!std::isspace(static_cast<unsigned char>(c))) {
            blank = false;
            break;
          }
        }
        if (blank) {
          flush();
        } else {
          current += line;
          current += '\n';
        }
      }
      flush();
      for (std::size_t r = 0; r < blobs.size(); ++r) {
        try {
          mpz_class value = detail::parse_decimal_record(blobs[r]);
          std::size_t nbits = detail::bit_length(value);
          if (nbits > record_length) {
            if (policy == OverlengthPolicy::kStrict) {
              throw OverflowError("binary expansion has " + std::to_string(nbits) +
                                  " bits, exceeding declared length " +
                                  std::to_string(record_length));
            }
            corpus.diagnostics.push_back(
                {r + 1, "record is " + std::to_string(nbits) + " bits; kept the first " +
                            std::to_string(record_length) + " and dropped the trailing " +
                            std::to_string(nbits - record_length)});
            value >>= static_cast<mp_bitcnt_t>(nbits - record_length);
          }
          corpus.records.push_back(rescale(detail::bits_of_value(value, record_length)));
        } catch (const Error& e) {
          corpus.diagnostics.push_back({r + 1, std::string("record ") + std::to_string(r + 1) +
                                                   ": " + e.what()});
        }
      }
      break;
    }
    case CorpusFormat::kAsciiBits: {
      std::vector<std::uint8_t> all_bits;
      char c;
      std::size_t offset = 0;
      while (in.get(c)) {
        ++offset;
        if (std::isspace(static_cast<unsigned char>(c))) continue;
        if (c != '0' && c != '1') {
          throw ParseError("unexpected character '" + std::string(1, c) + "' at byte " +
                           std::to_string(offset) + " in ascii-bits input");
        }
        all_bits.push_back(static_cast<std::uint8_t>(c - '0'));
      }
      detail::chunk_bits(all_bits, record_length, corpus);
      break;
    }
    case CorpusFormat::kRawBytes: {
      std::vector<std::uint8_t> all_bits;
      char c;
      while (in.get(c)) {
        auto byte = static_cast<std::uint8_t>(c);
        for (int i = 7; i >= 0; --i) all_bits.push_back((byte >> i) & 1u);
      }
      detail::chunk_bits(all_bits, record_length, corpus);
      break;
    }
  }
  return corpus;
}

}  // namespace ilrt::bitio

#endif  // ILRT_BITIO_HPP_
