// Copyright 2026 The rsa-restore Authors
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

#pragma once

#include <cmath>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <limits>
#include <ostream>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace rsa {

inline constexpr const char* kToolVersion = "0.3.0";

// Malformed instance data or a violated precondition on user input.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Identifier wrapper so link ids and demand ids cannot be mixed up.
template <typename Tag>
struct StrongId {
  std::uint64_t value = 0;

  constexpr StrongId() = default;
  constexpr explicit StrongId(std::uint64_t v) : value(v) {}

  friend constexpr auto operator<=>(StrongId, StrongId) = default;
  friend std::ostream& operator<<(std::ostream& os, StrongId id) {
    return os << id.value;
  }
};

struct LinkIdTag {};
struct DemandIdTag {};

using LinkId = StrongId<LinkIdTag>;
using DemandId = StrongId<DemandIdTag>;

// Dense node index into OpticalNetwork::nodeNames().
using NodeIndex = std::size_t;

// Spectrum slot number, 1-based.
using Color = int;

// Fixed-point length in millionths of a kilometer. Sums and reach
// comparisons are exact for any decimal with at most six fractional digits.
class Length {
 public:
  static constexpr std::int64_t kUnitsPerKm = 1'000'000;

  constexpr Length() = default;

  static constexpr Length fromUnits(std::int64_t units) { return Length(units); }

  static Length fromKm(double km) {
    if (!std::isfinite(km)) throw InputError("length is not a finite number");
    const double scaled = km * static_cast<double>(kUnitsPerKm);
    if (std::fabs(scaled) > 1e17) throw InputError("length out of range");
    return Length(std::llround(scaled));
  }

  // Large enough to dominate any real path, small enough that three of them
  // can be added without overflow.
  static constexpr Length infinity() {
    return Length(std::numeric_limits<std::int64_t>::max() / 4);
  }

  constexpr std::int64_t units() const { return units_; }
  double km() const { return static_cast<double>(units_) / kUnitsPerKm; }
  constexpr bool isInfinite() const { return units_ >= infinity().units_; }

  constexpr Length operator+(Length o) const {
    if (isInfinite() || o.isInfinite()) return infinity();
    return Length(units_ + o.units_);
  }
  constexpr Length& operator+=(Length o) { return *this = *this + o; }

  friend constexpr auto operator<=>(Length, Length) = default;

 private:
  constexpr explicit Length(std::int64_t units) : units_(units) {}
  std::int64_t units_ = 0;
};

// Exact decimal rendering of a fixed-point value num / 10^k.
inline std::string formatFixed(std::int64_t numerator, std::int64_t denominator) {
  if (denominator == 1) return std::to_string(numerator);
  std::string out;
  std::uint64_t mag = numerator < 0 ? static_cast<std::uint64_t>(-(numerator + 1)) + 1
                                    : static_cast<std::uint64_t>(numerator);
  if (numerator < 0) out.push_back('-');
  const auto den = static_cast<std::uint64_t>(denominator);
  out += std::to_string(mag / den);
  std::uint64_t frac = mag % den;
  if (frac == 0) return out;
  std::string digits;
  for (std::uint64_t d = den / 10; d > 0; d /= 10) {
    digits.push_back(static_cast<char>('0' + (frac / d) % 10));
  }
  while (!digits.empty() && digits.back() == '0') digits.pop_back();
  return out + "." + digits;
}

inline std::string formatKm(Length len) {
  return formatFixed(len.units(), Length::kUnitsPerKm);
}

// Set of free slots on one link, over the global slot range {1..C}.
class ColorSet {
 public:
  ColorSet() = default;
  explicit ColorSet(int slotCount, bool full = false)
      : bits_(static_cast<std::size_t>(slotCount) + 1, full) {
    if (slotCount < 0) throw InputError("negative slot count");
    if (!bits_.empty()) bits_[0] = false;
  }

  static ColorSet full(int slotCount) { return ColorSet(slotCount, true); }

  int slotCount() const { return static_cast<int>(bits_.size()) - 1; }

  bool contains(Color c) const {
    return c >= 1 && c <= slotCount() && bits_[static_cast<std::size_t>(c)];
  }

  // True iff every slot of {first .. first+width-1} is present.
  bool containsRange(Color first, int width) const {
    if (first < 1 || width < 1 || first + width - 1 > slotCount()) return false;
    for (Color c = first; c < first + width; ++c) {
      if (!bits_[static_cast<std::size_t>(c)]) return false;
    }
    return true;
  }

  void insert(Color c) {
    checkRange(c);
    bits_[static_cast<std::size_t>(c)] = true;
  }
  void erase(Color c) {
    checkRange(c);
    bits_[static_cast<std::size_t>(c)] = false;
  }
  void eraseRange(Color first, int width) {
    for (Color c = first; c < first + width; ++c) erase(c);
  }

  std::size_t size() const {
    std::size_t n = 0;
    for (std::size_t i = 1; i < bits_.size(); ++i) n += bits_[i] ? 1 : 0;
    return n;
  }
  bool empty() const { return size() == 0; }

  std::vector<Color> toVector() const {
    std::vector<Color> out;
    for (Color c = 1; c <= slotCount(); ++c) {
      if (contains(c)) out.push_back(c);
    }
    return out;
  }

  // Maximal inclusive runs, ascending.
  std::vector<std::pair<Color, Color>> ranges() const {
    std::vector<std::pair<Color, Color>> out;
    for (Color c = 1; c <= slotCount(); ++c) {
      if (!contains(c)) continue;
      Color end = c;
      while (end + 1 <= slotCount() && contains(end + 1)) ++end;
      out.emplace_back(c, end);
      c = end;
    }
    return out;
  }

  friend bool operator==(const ColorSet&, const ColorSet&) = default;

 private:
  void checkRange(Color c) const {
    if (c < 1 || c > slotCount()) {
      throw InputError("color " + std::to_string(c) + " outside 1.." +
                       std::to_string(slotCount()));
    }
  }

  std::vector<bool> bits_;
};

// Unbiased draw from {lo..hi} using only the fully specified mt19937_64
// output sequence, so seeded runs agree across standard libraries.
inline std::int64_t uniformInt(std::mt19937_64& rng, std::int64_t lo, std::int64_t hi) {
  if (hi < lo) throw std::invalid_argument("uniformInt: empty range");
  const std::uint64_t span = static_cast<std::uint64_t>(hi - lo) + 1;
  if (span == 0) return static_cast<std::int64_t>(rng());
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                              std::numeric_limits<std::uint64_t>::max() % span;
  std::uint64_t draw = rng();
  while (draw >= limit) draw = rng();
  return lo + static_cast<std::int64_t>(draw % span);
}

template <typename T>
void shuffleInPlace(std::vector<T>& items, std::mt19937_64& rng) {
  for (std::size_t i = items.size(); i > 1; --i) {
    const auto j = static_cast<std::size_t>(uniformInt(rng, 0, static_cast<std::int64_t>(i) - 1));
    std::swap(items[i - 1], items[j]);
  }
}

}  // namespace rsa

template <typename Tag>
struct std::hash<rsa::StrongId<Tag>> {
  std::size_t operator()(rsa::StrongId<Tag> id) const noexcept {
    return std::hash<std::uint64_t>{}(id.value);
  }
};
