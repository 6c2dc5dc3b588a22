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

#ifndef CRS_WEIGHT_H_
#define CRS_WEIGHT_H_

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace crs {

// Fixed-point x-value with 1e-12 resolution. Marginals and every load derived
// from them are integer sums, so ties in x-topological orderings are detected
// exactly. Decimal inputs with at most 12 fractional digits are represented
// without error; anything finer is rounded to the nearest unit.
class Weight {
 public:
  static constexpr std::int64_t kScale = 1'000'000'000'000;

  constexpr Weight() = default;
  static constexpr Weight from_units(std::int64_t units) { return Weight(units); }
  static Weight from_double(double value);
  static constexpr Weight one() { return Weight(kScale); }
  static constexpr Weight whole(std::int64_t n) { return Weight(n * kScale); }

  constexpr std::int64_t units() const { return units_; }
  double value() const { return static_cast<double>(units_) / kScale; }

  constexpr Weight& operator+=(Weight o) {
    units_ += o.units_;
    return *this;
  }
  constexpr Weight& operator-=(Weight o) {
    units_ -= o.units_;
    return *this;
  }
  friend constexpr Weight operator+(Weight a, Weight b) { return a += b; }
  friend constexpr Weight operator-(Weight a, Weight b) { return a -= b; }
  friend constexpr auto operator<=>(Weight, Weight) = default;

 private:
  constexpr explicit Weight(std::int64_t units) : units_(units) {}
  std::int64_t units_ = 0;
};

// Parses "1", "0.25", ".5", "1e-1" style decimals. Plain decimal notation is
// converted digit by digit; exponent notation goes through double.
std::optional<Weight> parse_weight(std::string_view text);

// Shortest decimal with at least one fractional digit ("1.0", "0.2").
std::string format_weight(Weight w);

}  // namespace crs

#endif  // CRS_WEIGHT_H_
