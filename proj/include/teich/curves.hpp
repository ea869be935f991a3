#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include <json.hpp>

#include "teich/fn_space.hpp"
#include "teich/pants_graph.hpp"
#include "teich/word.hpp"

namespace teich {

enum class Family { PantsCurve, Dual, TwistedDual, Chain };

std::string to_string(Family f);

struct Strand {
  PantsId pants;
  int from_leg = 0;
  int to_leg = 0;
  auto operator<=>(const Strand&) const = default;
};

struct Crossing {
  CurveId curve;
  std::int64_t winding = 0;
  auto operator<=>(const Crossing&) const = default;
};

// Simple closed curve relative to the decomposition. Strand k runs through a
// pants and is followed by crossing k; the itinerary is cyclic. Pants curves
// have an empty itinerary and are identified by `anchor`.
//
// Only the family constructors below create curves, so every instance is
// simple: pants curves, duals, Dehn-twist images of duals, and twisted
// chains (boundaries of regular neighbourhoods of seam arcs).
class Curve {
 public:
  static Curve pants_curve(const DecompositionTemplate& t, CurveId i);

  Family family() const { return family_; }
  CurveId anchor() const { return anchor_; }
  const std::vector<Strand>& strands() const { return strands_; }
  const std::vector<Crossing>& crossings() const { return crossings_; }

  int intersection(CurveId i) const;
  // Windings shared by every crossing of `i`, or 0 when disjoint.
  std::int64_t winding_at(CurveId i) const;

  Word word() const;
  std::string key() const;
  nlohmann::json to_json() const;
  static Curve from_json(const DecompositionTemplate& t, const nlohmann::json& j);

  bool operator==(const Curve& other) const { return key() == other.key(); }

 private:
  friend Curve dual_curve(const DecompositionTemplate&, CurveId);
  friend Curve dehn_twist_curve(const Curve&, CurveId, std::int64_t);
  friend Curve chain_curve(const DecompositionTemplate&, const std::vector<PantsId>&,
                           const std::vector<CurveId>&, const std::vector<std::int64_t>&);

  Curve() = default;
  void validate(const DecompositionTemplate& t) const;

  Family family_ = Family::PantsCurve;
  CurveId anchor_;
  std::vector<Strand> strands_;
  std::vector<Crossing> crossings_;
};

Curve dual_curve(const DecompositionTemplate& t, CurveId i);
Curve twisted_dual(const DecompositionTemplate& t, CurveId i, std::int64_t k);
int intersection_with_pants_curve(const Curve& curve, CurveId i);
Curve dehn_twist_curve(const Curve& curve, CurveId i, std::int64_t k);

// Chain over the pants path p_0 -c_1- p_1 ... -c_m- p_m (distinct pants,
// m >= 1) with one winding per connecting curve.
Curve chain_curve(const DecompositionTemplate& t, const std::vector<PantsId>& path,
                  const std::vector<CurveId>& links, const std::vector<std::int64_t>& windings);

// Candidate family inside the window, deduplicated and sorted by key.
std::vector<Curve> enumerate_candidates(const DecompositionTemplate& t, const Window& w,
                                        int max_chain, int max_wind);

struct TwistRecovery {
  double theta = 0.0;
  bool flat = false;  // |theta| fell below the resolvable floor; reported as 0
};

// Twist of interior curve `i` from observed lengths: the window curve lengths,
// the dual beta_i and its image beta_i' under one Dehn twist. Other twists
// in the window are taken to be zero.
TwistRecovery recover_twist(const DecompositionTemplate& t, const Window& w, CurveId i,
                            const std::map<CurveId, double>& lengths, double l_beta,
                            double l_beta_prime, double tol = 1e-7);

// |theta| from l(beta_i) alone; the sign is not identifiable without beta_i'.
double recover_abs_twist(const DecompositionTemplate& t, const Window& w, CurveId i,
                         const std::map<CurveId, double>& lengths, double l_beta);

}  // namespace teich
