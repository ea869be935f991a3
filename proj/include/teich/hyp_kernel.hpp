#pragma once

#include <array>
#include <map>
#include <vector>

#include <json.hpp>

#include "teich/curves.hpp"
#include "teich/fn_space.hpp"
#include "teich/pants_graph.hpp"
#include "teich/word.hpp"

namespace teich {

// Orientation-preserving isometry of the hyperbolic plane as a unit
// determinant 2x2 matrix acting on the upper half plane.
struct Isometry2 {
  double a = 1.0, b = 0.0, c = 0.0, d = 1.0;

  static Isometry2 identity() { return {}; }
  // Moves a frame forward by `dist` along its geodesic.
  static Isometry2 translation(double dist);
  // Turns a frame in place by `angle` radians (positive = left).
  static Isometry2 rotation(double angle);

  double det() const;
  double trace() const { return a + d; }
  Isometry2 inverse() const { return {d, -b, -c, a}; }
  bool is_finite() const;
};

// Product followed by renormalization to det = 1.
Isometry2 operator*(const Isometry2& x, const Isometry2& y);

double collar_width(double length);
double trace_length(const Isometry2& m);
double length_from_trace(double trace);
// Length of the seam joining legs j and k of a pants, i.e. the side opposite
// `opposite_half` in the right-angled hexagon with alternate sides the
// half-lengths of the legs.
double seam_length(double half_j, double half_k, double opposite_half);

struct PantsCheck {
  PantsId pants;
  std::array<double, 3> boundary_trace_error{};  // | |tr| - 2cosh(l/2) |
  double relation_error = 0.0;  // distance of the product to +-I over the product of loop norms
};

// Holonomy of a window for fixed Fenchel-Nielsen coordinates, presented by
// strand, crossing and winding generators. Frontier curves act as geodesic
// boundary: their twists are ignored.
class HolonomyChart {
 public:
  HolonomyChart(const DecompositionTemplate& t, Window w, const FNMap& h);

  const Window& window() const { return window_; }
  const std::map<GenKey, Isometry2>& generators() const { return generators_; }

  Isometry2 evaluate(const Word& word) const;
  double length(const Word& word) const;
  // Throws Usage when the curve leaves the window.
  double curve_length(const Curve& curve) const;
  bool supports(const Curve& curve) const;

  const std::vector<PantsCheck>& checks() const { return checks_; }
  double max_check_error() const;

  // Generator matrices, row-major, 16 significant digits.
  nlohmann::json dump() const;

 private:
  using Wide = std::array<long double, 4>;
  Wide evaluate_wide(const Word& word) const;

  Window window_;
  std::map<GenKey, Isometry2> generators_;
  std::map<GenKey, Wide> wide_;  // extended precision copies used for evaluation
  std::map<std::uint64_t, long double> wind_length_;
  std::vector<PantsCheck> checks_;
};

HolonomyChart build_holonomy(const DecompositionTemplate& t, const Window& w, const FNMap& h);
double curve_length(const DecompositionTemplate& t, const Window& w, const FNMap& h,
                    const Curve& curve);

// Independent evaluation path: Lorentz (hyperboloid) model, ports on the
// opposite seam feet, seam lengths from the plain hexagon law, words walked
// in reverse from a rotated base point.
class OracleChart {
 public:
  OracleChart(const DecompositionTemplate& t, Window w, const FNMap& h);
  double curve_length(const Curve& curve) const;

 private:
  using Lorentz = std::array<long double, 9>;
  Lorentz letter(const GenKey& key, bool inverse) const;

  struct PantsData {
    std::array<double, 3> length{};
    std::array<double, 3> seam{};
  };

  DecompositionTemplate tmpl_;
  Window window_;
  std::map<std::uint64_t, PantsData> pants_;
  std::map<std::uint64_t, std::pair<double, double>> cross_;  // curve -> (shift, length)
};

OracleChart holonomy_oracle(const DecompositionTemplate& t, const Window& w, const FNMap& h);

}  // namespace teich
