// Copyright 2026 The Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "crs/weight.h"

#include <cctype>
#include <cmath>
#include <cstdlib>
#include <string>

namespace crs {

Weight Weight::from_double(double value) {
  return Weight(static_cast<std::int64_t>(std::llround(value * kScale)));
}

std::optional<Weight> parse_weight(std::string_view text) {
  if (text.empty()) return std::nullopt;
  if (text.find_first_of("eE") != std::string_view::npos ||
      text.find_first_of("nN") != std::string_view::npos) {
    const std::string s(text);
    char* end = nullptr;
    const double d = std::strtod(s.c_str(), &end);
    if (end != s.c_str() + s.size() || !std::isfinite(d) ||
        std::fabs(d) > 1e6) {
      return std::nullopt;
    }
    return Weight::from_double(d);
  }

  std::size_t i = 0;
  bool negative = false;
  if (text[i] == '+' || text[i] == '-') {
    negative = text[i] == '-';
    ++i;
  }
  std::int64_t whole = 0;
  std::int64_t frac = 0;
  std::int64_t frac_scale = Weight::kScale;
  bool any_digit = false;
  bool round_up = false;
  for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
    whole = whole * 10 + (text[i] - '0');
    any_digit = true;
    if (whole > 1'000'000) return std::nullopt;
  }
  if (i < text.size() && text[i] == '.') {
    ++i;
    int digits = 0;
    for (; i < text.size() && std::isdigit(static_cast<unsigned char>(text[i])); ++i) {
      any_digit = true;
      if (digits < 12) {
        frac_scale /= 10;
        frac += (text[i] - '0') * frac_scale;
      } else if (digits == 12) {
        round_up = text[i] >= '5';
      }
      ++digits;
    }
  }
  if (!any_digit || i != text.size()) return std::nullopt;
  std::int64_t units = whole * Weight::kScale + frac + (round_up ? 1 : 0);
  return Weight::from_units(negative ? -units : units);
}

std::string format_weight(Weight w) {
  std::int64_t units = w.units();
  std::string sign;
  if (units < 0) {
    sign = "-";
    units = -units;
  }
  const std::int64_t whole = units / Weight::kScale;
  std::string frac = std::to_string(units % Weight::kScale);
  frac.insert(0, 12 - frac.size(), '0');
  while (frac.size() > 1 && frac.back() == '0') frac.pop_back();
  return sign + std::to_string(whole) + "." + frac;
}

}  // namespace crs
