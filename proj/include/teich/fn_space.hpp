#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include <json.hpp>

#include "teich/pants_graph.hpp"

namespace teich {

inline constexpr double kTwoPi = 6.283185307179586476925286766559;

struct LengthTwist {
  double length = 1.0;
  std::optional<double> twist;  // radians; absent on boundary curves
  bool operator==(const LengthTwist&) const = default;
};

// Closed-form coordinate generator i -> value, serialized as
// "const:c", "exp-neg-square" (e^{-i^2}) or "exp-neg:c" (e^{-c i}).
class Generator {
 public:
  enum class Kind { Const, ExpNegSquare, ExpNeg };

  static Generator constant(double c) { return Generator(Kind::Const, c); }
  static Generator exp_neg_square() { return Generator(Kind::ExpNegSquare, 0.0); }
  static Generator exp_neg(double c) { return Generator(Kind::ExpNeg, c); }
  static Generator parse(const std::string& expr);

  double operator()(CurveId i) const;
  std::string to_string() const;
  bool operator==(const Generator&) const = default;

 private:
  Generator(Kind kind, double c) : kind_(kind), c_(c) {}
  Kind kind_;
  double c_;
};

// Fenchel-Nielsen coordinates relative to a fixed template: a default
// generator pair plus a finite table of overrides.
class FNMap {
 public:
  FNMap(DecompositionTemplate tmpl, Generator length, Generator twist);

  static FNMap uniform(DecompositionTemplate tmpl, double length, double twist = 0.0) {
    return FNMap(std::move(tmpl), Generator::constant(length), Generator::constant(twist));
  }
  static FNMap from_json(DecompositionTemplate tmpl, const nlohmann::json& doc);
  static FNMap from_json_text(DecompositionTemplate tmpl, const std::string& text);

  const DecompositionTemplate& tmpl() const { return tmpl_; }
  const Generator& default_length() const { return length_; }
  const Generator& default_twist() const { return twist_; }
  const std::map<CurveId, LengthTwist>& overrides() const { return overrides_; }

  // Twist reported as base + 2 pi * full turns.
  LengthTwist at(CurveId i) const;
  double length(CurveId i) const { return at(i).length; }
  double twist(CurveId i) const { return at(i).twist.value_or(0.0); }
  // Parts of the twist kept apart so that whole Dehn twists undo exactly.
  LengthTwist base(CurveId i) const;
  double base_twist(CurveId i) const { return base(i).twist.value_or(0.0); }
  std::int64_t turns(CurveId i) const;
  const std::map<CurveId, std::int64_t>& all_turns() const { return turns_; }
  // l * theta / (2 pi)
  double arclength_twist(CurveId i) const;

  FNMap with(CurveId i, LengthTwist value) const;
  FNMap with_length(CurveId i, double length) const;
  FNMap with_twist(CurveId i, double twist) const;
  FNMap with_turns(CurveId i, std::int64_t turns) const;

  nlohmann::json to_json() const;

 private:
  DecompositionTemplate tmpl_;
  Generator length_;
  Generator twist_;
  std::map<CurveId, LengthTwist> overrides_;
  std::map<CurveId, std::int64_t> turns_;
};

struct IndexRange {
  std::uint64_t first = 0;
  std::uint64_t last = 0;  // exclusive
  bool contains(CurveId c) const { return c.value >= first && c.value < last; }
};

struct FNDistanceEstimate {
  double value = 0.0;
  IndexRange scanned;
  bool exact = false;
};

struct ShigaReport {
  std::uint64_t holds_up_to = 0;
  double witness_min = 0.0;
  double witness_max = 0.0;
  double m_estimate = 0.0;
  // m_estimate over the first half of the scan; a large gap to m_estimate
  // signals a generator along which the condition fails.
  double m_half = 0.0;
  bool diverging() const { return m_estimate > 2.0 * m_half; }
};

FNDistanceEstimate fn_distance(const FNMap& a, const FNMap& b, IndexRange indices);

// i -> (log l, l theta); the second slot is empty on boundary curves.
std::vector<std::pair<double, std::optional<double>>> embed_linf(const FNMap& h,
                                                                  IndexRange indices);

FNMap apply_dehn_twists(const FNMap& h, const std::map<CurveId, std::int64_t>& orders);
FNMap apply_arclength_twist(const FNMap& h, CurveId i, double s);

ShigaReport shiga_check(const FNMap& h, std::uint64_t n);

struct CauchyLimit {
  FNMap limit;
  std::vector<CurveId> non_converged;
};

CauchyLimit cauchy_limit(const std::vector<FNMap>& sequence, IndexRange indices, double tol);

}  // namespace teich
