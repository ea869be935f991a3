#pragma once

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

namespace teich {

struct CurveId {
  std::uint64_t value = 0;
  auto operator<=>(const CurveId&) const = default;
};

struct PantsId {
  std::uint64_t value = 0;
  auto operator<=>(const PantsId&) const = default;
};

enum class Side { A, B };

inline Side opposite(Side s) { return s == Side::A ? Side::B : Side::A; }
inline char side_char(Side s) { return s == Side::A ? 'A' : 'B'; }

// One boundary component of a pants and the curve it is glued to.
struct Leg {
  CurveId curve;
  Side side = Side::A;
  auto operator<=>(const Leg&) const = default;
};

struct Pants {
  PantsId id;
  std::array<Leg, 3> legs;
};

// Where a curve sits in the dual graph: the pants, the leg slot on that
// pants, and the side of the curve the pants lies on.
struct Attachment {
  PantsId pants;
  int leg = 0;
  Side side = Side::A;
  auto operator<=>(const Attachment&) const = default;
};

enum class TemplateKind { Flute, Ladder, BinaryTree, CustomFinite };

std::string to_string(TemplateKind kind);

// Countable pants decomposition exposed through a pure adjacency oracle.
//
// Infinite kinds are never materialized; every query is answered from closed
// form index arithmetic. Curve numbering of the built-in kinds:
//
//   flute:       id 0 caps pants 0, id 2n+1 is the free boundary leg of
//                pants n, id 2n+2 joins pants n (side A) to pants n+1 (side B).
//   ladder:      spine pants 2n, handle pants 2n+1. id 0 caps spine 0,
//                id 3n+1 is the handle curve glued to itself on pants 2n+1,
//                id 3n+2 links spine 2n to handle 2n+1, id 3n+3 joins spine
//                2n to spine 2n+2.
//   binary-tree: pants n has children 2n+1, 2n+2; curve id m >= 1 joins the
//                parent (m-1)/2 (side A) to pants m (side B); id 0 caps the
//                root.
class DecompositionTemplate {
 public:
  static DecompositionTemplate flute();
  static DecompositionTemplate ladder();
  static DecompositionTemplate binary_tree();
  static DecompositionTemplate custom(std::vector<Pants> pants);
  static DecompositionTemplate from_json(const nlohmann::json& doc);
  static DecompositionTemplate from_json_text(const std::string& text);
  // "flute", "ladder", "binary-tree", "genus2"
  static DecompositionTemplate builtin(const std::string& name);

  TemplateKind kind() const { return kind_; }
  bool is_finite() const { return kind_ == TemplateKind::CustomFinite; }

  bool has_pants(PantsId id) const;
  bool has_curve(CurveId id) const;
  Pants pants(PantsId id) const;
  std::vector<Attachment> adjacency(CurveId id) const;
  bool is_boundary(CurveId id) const { return adjacency(id).size() == 1; }

  // Enumerates existing curve ids in increasing order within [first, last).
  std::vector<CurveId> curves_in(std::uint64_t first, std::uint64_t last) const;
  // Attachment on the other side of the curve glued to leg `leg` of `p`.
  std::optional<Attachment> across(PantsId p, int leg) const;

  nlohmann::json to_json() const;
  bool operator==(const DecompositionTemplate& other) const;

 private:
  struct Custom {
    std::map<PantsId, Pants> pants;
    std::map<CurveId, std::vector<Attachment>> curves;
  };

  explicit DecompositionTemplate(TemplateKind kind) : kind_(kind) {}

  TemplateKind kind_;
  std::shared_ptr<const Custom> custom_;
};

// Finite connected union of pants; frontier curves are treated as boundary.
struct Window {
  PantsId center;
  int radius = 0;
  std::vector<PantsId> pants;           // sorted
  std::vector<CurveId> interior;        // sorted
  std::vector<CurveId> frontier;        // sorted

  bool contains(PantsId p) const;
  bool is_interior(CurveId c) const;
  bool is_frontier(CurveId c) const;
  bool contains_curve(CurveId c) const { return is_interior(c) || is_frontier(c); }
  std::vector<CurveId> curves() const;  // interior then frontier, each sorted
  nlohmann::json to_json() const;
};

Window window(const DecompositionTemplate& t, PantsId center, int radius);

}  // namespace teich
