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

// Parameter sweeps rendered as CSV.
//
// Rows are emitted in m, then w, then |alpha| (or energy) order. Every
// float uses "%.17g" so output is byte-stable for a given build.

#ifndef CSHE_SWEEP_HPP
#define CSHE_SWEEP_HPP

#include <charconv>
#include <cmath>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "cshe/errors.hpp"
#include "cshe/json_writer.hpp"
#include "cshe/security.hpp"

namespace cshe {

/// Bad sweep parameters; maps to CLI exit code 1.
class UsageError : public Error {
 public:
  using Error::Error;
};

enum class Quantity { kEncDistance, kUnencDistance, kRatio, kMutinfo };

inline Quantity parse_quantity(std::string_view s) {
  if (s == "enc_distance") return Quantity::kEncDistance;
  if (s == "unenc_distance") return Quantity::kUnencDistance;
  if (s == "ratio") return Quantity::kRatio;
  if (s == "mutinfo") return Quantity::kMutinfo;
  throw UsageError("unknown quantity '" + std::string(s) + "'");
}

inline const char* quantity_name(Quantity q) {
  switch (q) {
    case Quantity::kEncDistance: return "enc_distance";
    case Quantity::kUnencDistance: return "unenc_distance";
    case Quantity::kRatio: return "ratio";
    case Quantity::kMutinfo: return "mutinfo";
  }
  return "?";
}

/// How |alpha| is chosen at each grid point.
///   kAlphaGrid: explicit |alpha| range
///   kFixed:     E held constant, |alpha| = sqrt(E/m)
///   kPower:     E = m^r, |alpha| = sqrt(E/m)
enum class EnergyRule { kAlphaGrid, kFixed, kPower };

struct AlphaGrid {
  double min = 0.0;
  double max = 2.0;
  double step = 0.02;

  /// min + i*step for i = 0..floor((max-min)/step); indexing avoids drift.
  std::vector<double> values() const {
    if (!(step > 0.0) || !(max >= min) || !(min >= 0.0) || !std::isfinite(max)) {
      throw UsageError("alpha grid needs 0 <= min <= max and step > 0");
    }
    const auto count = static_cast<long>(std::floor((max - min) / step + 1e-9)) + 1;
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(count));
    for (long i = 0; i < count; ++i) out.push_back(min + static_cast<double>(i) * step);
    return out;
  }
};

struct SweepSpec {
  Quantity quantity = Quantity::kEncDistance;
  std::vector<int> ms = {10};
  std::optional<int> d = 100;  // empty: d -> infinity
  std::vector<int> ws = {1};
  EnergyRule rule = EnergyRule::kAlphaGrid;
  AlphaGrid alpha;
  double energy = 1.0;    // kFixed
  double exponent = 0.3;  // kPower

  void validate() const {
    if (ms.empty() || ws.empty()) throw UsageError("sweep grid is empty");
    for (int m : ms) {
      if (m < 1) throw UsageError("m must be >= 1");
      for (int w : ws) {
        if (w < 0 || w > m) throw UsageError("every w must satisfy 0 <= w <= m");
      }
    }
    if (d && *d < 1) throw UsageError("d must be >= 1");
    if (rule == EnergyRule::kFixed && !(energy >= 0.0)) throw UsageError("E must be >= 0");
    if (rule == EnergyRule::kPower && !(exponent > 0.0)) throw UsageError("r must be > 0");
    if (rule == EnergyRule::kAlphaGrid) (void)alpha.values();
  }
};

inline double energy_for(EnergyRule rule, int m, double energy, double exponent) {
  return rule == EnergyRule::kPower ? std::pow(static_cast<double>(m), exponent) : energy;
}

/// Parses "7", "2:12" (inclusive) or "1,2,5".
inline std::vector<int> parse_int_list(std::string_view text) {
  const auto to_int = [&](std::string_view s) {
    int v = 0;
    const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
    if (ec != std::errc() || ptr != s.data() + s.size()) {
      throw UsageError("cannot parse integer list '" + std::string(text) + "'");
    }
    return v;
  };
  std::vector<int> out;
  if (const auto colon = text.find(':'); colon != std::string_view::npos) {
    const int lo = to_int(text.substr(0, colon));
    const int hi = to_int(text.substr(colon + 1));
    if (hi < lo) throw UsageError("empty range '" + std::string(text) + "'");
    for (int v = lo; v <= hi; ++v) out.push_back(v);
    return out;
  }
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto comma = text.find(',', start);
    const auto piece = text.substr(start, comma == std::string_view::npos ? std::string_view::npos : comma - start);
    out.push_back(to_int(piece));
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return out;
}

namespace detail {

inline std::string sweep_value(Quantity q, const SecurityParams& p) {
  switch (q) {
    case Quantity::kEncDistance: return format_double(encrypted_trace_distance(p));
    case Quantity::kUnencDistance: return format_double(unencrypted_trace_distance(p.w, p.abs_alpha));
    case Quantity::kRatio: {
      const auto r = suppression_ratio(p);
      return r.ratio ? format_double(*r.ratio) : std::string("undefined");
    }
    case Quantity::kMutinfo: return format_double(pgm_closed_form(p.abs_alpha, p.m).i_total);
  }
  return {};
}

}  // namespace detail

/// CSV with header quantity,m,d,abs_alpha,E,w,value.
inline std::string security_sweep_csv(const SweepSpec& spec) {
  spec.validate();
  std::ostringstream out;
  out << "quantity,m,d,abs_alpha,E,w,value\n";
  const std::string d_text = spec.d ? std::to_string(*spec.d) : std::string("inf");
  for (int m : spec.ms) {
    std::vector<double> alphas;
    if (spec.rule == EnergyRule::kAlphaGrid) {
      alphas = spec.alpha.values();
    } else {
      alphas.push_back(std::sqrt(energy_for(spec.rule, m, spec.energy, spec.exponent) / m));
    }
    for (int w : spec.ws) {
      for (double a : alphas) {
        const auto p = SecurityParams::make(m, spec.d, a, w);
        out << quantity_name(spec.quantity) << ',' << m << ',' << d_text << ',' << format_double(a) << ','
            << format_double(p.energy()) << ',' << w << ',' << detail::sweep_value(spec.quantity, p) << '\n';
      }
    }
  }
  return out.str();
}

struct MutinfoSpec {
  std::vector<int> ms;
  EnergyRule rule = EnergyRule::kFixed;
  double energy = 1.0;
  double exponent = 0.3;

  void validate() const {
    if (ms.empty()) throw UsageError("m range is empty");
    for (int m : ms) {
      if (m < 1) throw UsageError("m must be >= 1");
    }
    if (rule == EnergyRule::kAlphaGrid) throw UsageError("mutinfo needs an energy rule (fixed or power)");
    if (rule == EnergyRule::kFixed && !(energy >= 0.0)) throw UsageError("E must be >= 0");
    if (rule == EnergyRule::kPower && !(exponent > 0.0)) throw UsageError("r must be > 0");
  }
};

/// CSV with header m,E,abs_alpha,i_total; |alpha| = sqrt(E/m).
inline std::string mutinfo_csv(const MutinfoSpec& spec) {
  spec.validate();
  std::ostringstream out;
  out << "m,E,abs_alpha,i_total\n";
  for (int m : spec.ms) {
    const double e = energy_for(spec.rule, m, spec.energy, spec.exponent);
    const double a = std::sqrt(e / m);
    out << m << ',' << format_double(e) << ',' << format_double(a) << ','
        << format_double(pgm_closed_form(a, m).i_total) << '\n';
  }
  return out.str();
}

}  // namespace cshe

#endif  // CSHE_SWEEP_HPP
