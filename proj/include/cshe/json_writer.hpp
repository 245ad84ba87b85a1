// Copyright 2026 The cshe Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef CSHE_JSON_WRITER_HPP
#define CSHE_JSON_WRITER_HPP

#include <cmath>
#include <complex>
#include <cstdio>
#include <string>
#include <string_view>
#include <vector>

#include "cshe/errors.hpp"

namespace cshe {

/// Fixed 17-significant-digit formatting ("%.17g"), stable across runs.
inline std::string format_double(double value) {
  if (!std::isfinite(value)) throw DomainError("format_double: value is not finite");
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", value);
  return buf;
}

/// Minimal streaming writer for single-line JSON with caller-chosen field
/// order. Commas are inserted automatically.
class JsonWriter {
 public:
  JsonWriter& begin_object() { value_prefix(); out_ += '{'; fresh_.push_back(true); return *this; }
  JsonWriter& end_object() { out_ += '}'; fresh_.pop_back(); return *this; }
  JsonWriter& begin_array() { value_prefix(); out_ += '['; fresh_.push_back(true); return *this; }
  JsonWriter& end_array() { out_ += ']'; fresh_.pop_back(); return *this; }

  JsonWriter& key(std::string_view k) {
    separator();
    write_string(k);
    out_ += ':';
    after_key_ = true;
    return *this;
  }

  JsonWriter& value(std::string_view s) { value_prefix(); write_string(s); return *this; }
  JsonWriter& value(const char* s) { return value(std::string_view(s)); }
  JsonWriter& value(double x) { value_prefix(); out_ += format_double(x); return *this; }
  JsonWriter& value(int x) { value_prefix(); out_ += std::to_string(x); return *this; }
  JsonWriter& value(long long x) { value_prefix(); out_ += std::to_string(x); return *this; }
  JsonWriter& value(unsigned long long x) { value_prefix(); out_ += std::to_string(x); return *this; }
  JsonWriter& value(bool b) { value_prefix(); out_ += b ? "true" : "false"; return *this; }

  /// [re, im]
  JsonWriter& value(std::complex<double> z) {
    begin_array();
    value(z.real());
    value(z.imag());
    return end_array();
  }

  /// Pastes an already-serialised JSON value.
  JsonWriter& raw(std::string_view json) { value_prefix(); out_ += json; return *this; }

  const std::string& str() const { return out_; }

 private:
  void separator() {
    if (fresh_.empty()) return;
    if (!fresh_.back()) out_ += ',';
    fresh_.back() = false;
  }

  void value_prefix() {
    if (after_key_) {
      after_key_ = false;
      return;
    }
    separator();
  }

  void write_string(std::string_view s) {
    out_ += '"';
    for (char c : s) {
      switch (c) {
        case '"': out_ += "\\\""; break;
        case '\\': out_ += "\\\\"; break;
        case '\n': out_ += "\\n"; break;
        case '\t': out_ += "\\t"; break;
        default:
          if (static_cast<unsigned char>(c) < 0x20) {
            char buf[8];
            std::snprintf(buf, sizeof buf, "\\u%04x", static_cast<unsigned>(c));
            out_ += buf;
          } else {
            out_ += c;
          }
      }
    }
    out_ += '"';
  }

  std::string out_;
  std::vector<bool> fresh_;
  bool after_key_ = false;
};

}  // namespace cshe

#endif  // CSHE_JSON_WRITER_HPP
