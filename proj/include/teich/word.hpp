#pragma once

#include <compare>
#include <cstdint>
#include <vector>

#include "teich/pants_graph.hpp"

namespace teich {

// Named generator of a holonomy chart.
//   Strand: frame transport through pants `id` from the port of leg `from`
//           to the exit of leg `to`.
//   Cross:  passage across curve `id`, carrying its twist.
//   Wind:   one full turn along curve `id` (also the word of the pants curve).
struct GenKey {
  enum class Kind : std::uint8_t { Strand, Cross, Wind };
  Kind kind = Kind::Wind;
  std::uint64_t id = 0;
  std::int8_t from = 0;
  std::int8_t to = 0;
  auto operator<=>(const GenKey&) const = default;

  static GenKey strand(PantsId p, int from, int to) {
    return {Kind::Strand, p.value, static_cast<std::int8_t>(from), static_cast<std::int8_t>(to)};
  }
  static GenKey cross(CurveId c) { return {Kind::Cross, c.value, 0, 0}; }
  static GenKey wind(CurveId c) { return {Kind::Wind, c.value, 0, 0}; }
};

struct Letter {
  GenKey key;
  std::int64_t power = 1;
};

using Word = std::vector<Letter>;

}  // namespace teich
