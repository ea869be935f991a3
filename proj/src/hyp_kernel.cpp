#include "teich/hyp_kernel.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numbers>

#include "teich/error.hpp"

namespace teich {

namespace {

constexpr double kQuarter = std::numbers::pi / 2.0;
constexpr double kHalf = std::numbers::pi;

std::string pants_name(std::uint64_t p) { return "pants " + std::to_string(p); }

bool self_glued(const DecompositionTemplate& t, CurveId c) {
  const auto atts = t.adjacency(c);
  return atts.size() == 2 && atts[0].pants == atts[1].pants;
}

std::array<double, 3> seams_of(const std::array<double, 3>& l, std::uint64_t pants) {
  std::array<double, 3> d{};
  for (int j = 0; j < 3; ++j) {
    d[j] = seam_length(l[j] / 2, l[(j + 1) % 3] / 2, l[(j + 2) % 3] / 2);
    if (!std::isfinite(d[j]) || d[j] <= 0.0)
      fail(ErrorKind::Numeric, "degenerate hexagon in " + pants_name(pants));
  }
  return d;
}

std::array<double, 3> leg_lengths(const DecompositionTemplate& t, const FNMap& h, PantsId p) {
  std::array<double, 3> l{};
  const auto pants = t.pants(p);
  for (int j = 0; j < 3; ++j) l[j] = h.length(pants.legs[j].curve);
  return l;
}

}  // namespace

Isometry2 Isometry2::translation(double dist) {
  const double e = std::exp(dist / 2);
  return {e, 0.0, 0.0, 1.0 / e};
}

Isometry2 Isometry2::rotation(double angle) {
  const double c = std::cos(angle / 2), s = std::sin(angle / 2);
  return {c, -s, s, c};
}

// Kahan's fma form; ad - bc cancels badly once entries are large.
double Isometry2::det() const {
  const double w = b * c;
  const double e = std::fma(-b, c, w);
  const double f = std::fma(a, d, -w);
  return f + e;
}

bool Isometry2::is_finite() const {
  return std::isfinite(a) && std::isfinite(b) && std::isfinite(c) && std::isfinite(d);
}

Isometry2 operator*(const Isometry2& x, const Isometry2& y) {
  Isometry2 r{x.a * y.a + x.b * y.c, x.a * y.b + x.b * y.d, x.c * y.a + x.d * y.c,
              x.c * y.b + x.d * y.d};
  // Rescale only when det drifts beyond what its own rounding explains;
  // with large entries the deviation is noise and rescaling would amplify it.
  const double det = r.det();
  const double noise = 8 * std::numeric_limits<double>::epsilon() *
                       (std::abs(r.a * r.d) + std::abs(r.b * r.c));
  if (det > 0.0 && std::isfinite(det) && std::abs(det - 1.0) > noise) {
    const double s = 1.0 / std::sqrt(det);
    r.a *= s;
    r.b *= s;
    r.c *= s;
    r.d *= s;
  }
  return r;
}

double collar_width(double length) {
  if (!(length > 0.0) || !std::isfinite(length))
    fail(ErrorKind::Domain, "collar width needs a positive finite length");
  return std::asinh(1.0 / std::sinh(length / 2));
}

double length_from_trace(double trace) {
  const double t = std::abs(trace);
  if (!std::isfinite(t)) fail(ErrorKind::Numeric, "non-finite trace");
  if (t <= 2.0 + 1e-12)
    fail(ErrorKind::NonHyperbolic, "element with |trace| <= 2 is not hyperbolic");
  const double y = t / 2 - 1.0;
  return 2.0 * std::log1p(y + std::sqrt(y * (y + 2.0)));
}

double trace_length(const Isometry2& m) { return length_from_trace(m.trace()); }

double seam_length(double half_j, double half_k, double opposite_half) {
  // cosh d - 1 = (cosh(a - b) + cosh c) / (sinh a sinh b)
  const double y = (std::cosh(half_j - half_k) + std::cosh(opposite_half)) /
                   (std::sinh(half_j) * std::sinh(half_k));
  return std::log1p(y + std::sqrt(y * (y + 2.0)));
}

namespace {

// Extended precision twin of Isometry2 used while building and evaluating
// words. Long words through thin pants cancel badly in double, and the
// determinant of a large product is itself noise, so no renormalization here.
using Wide = std::array<long double, 4>;

constexpr Wide kWideId{1, 0, 0, 1};

Wide wmul(const Wide& x, const Wide& y) {
  Wide r{x[0] * y[0] + x[1] * y[2], x[0] * y[1] + x[1] * y[3], x[2] * y[0] + x[3] * y[2],
         x[2] * y[1] + x[3] * y[3]};
  return r;
}

Wide winv(const Wide& x) { return {x[3], -x[1], -x[2], x[0]}; }

Wide wT(long double dist) {
  const long double e = std::exp(dist / 2);
  return {e, 0, 0, 1 / e};
}

Wide wR(long double angle) {
  const long double c = std::cos(angle / 2), s = std::sin(angle / 2);
  return {c, -s, s, c};
}

template <typename... Rest>
Wide wprod(const Wide& first, const Rest&... rest) {
  Wide out = first;
  ((out = wmul(out, rest)), ...);
  return out;
}

constexpr long double kWQuarter = std::numbers::pi_v<long double> / 2;
constexpr long double kWHalf = std::numbers::pi_v<long double>;

Wide wside(long double dist) { return wprod(wR(-kWQuarter), wT(dist), wR(kWQuarter)); }

Isometry2 narrow(const Wide& x) {
  return {static_cast<double>(x[0]), static_cast<double>(x[1]), static_cast<double>(x[2]),
          static_cast<double>(x[3])};
}

double wide_distance_to_pm_identity(const Wide& m) {
  const long double plus =
      std::max({std::abs(m[0] - 1), std::abs(m[1]), std::abs(m[2]), std::abs(m[3] - 1)});
  const long double minus =
      std::max({std::abs(m[0] + 1), std::abs(m[1]), std::abs(m[2]), std::abs(m[3] + 1)});
  return static_cast<double>(std::min(plus, minus));
}

double wide_length(long double trace) {
  const long double t = std::abs(trace);
  if (!std::isfinite(t)) fail(ErrorKind::Numeric, "non-finite trace");
  if (t <= 2.0L + 1e-12L)
    fail(ErrorKind::NonHyperbolic, "element with |trace| <= 2 is not hyperbolic");
  const long double y = t / 2 - 1;
  return static_cast<double>(2 * std::log1p(y + std::sqrt(y * (y + 2))));
}

long double wide_seam(long double a, long double b, long double c) {
  const long double y = (std::cosh(a - b) + std::cosh(c)) / (std::sinh(a) * std::sinh(b));
  return std::log1p(y + std::sqrt(y * (y + 2)));
}

}  // namespace

HolonomyChart::HolonomyChart(const DecompositionTemplate& t, Window w, const FNMap& h)
    : window_(std::move(w)) {
  if (!(h.tmpl() == t)) fail(ErrorKind::Usage, "FN map lives on a different template");
  for (const auto p : window_.pants) {
    const auto ld = leg_lengths(t, h, p);
    seams_of(ld, p.value);
    std::array<long double, 3> l{ld[0], ld[1], ld[2]}, d{};
    for (int j = 0; j < 3; ++j) d[j] = wide_seam(l[j] / 2, l[(j + 1) % 3] / 2, l[(j + 2) % 3] / 2);

    // Port of leg j: foot of the seam towards leg j+1, heading into the pants.
    // Exit of leg j: the same point heading out.
    auto strand = [&](int from, int to) -> Wide {
      const int next = (from + 1) % 3;
      const int prev = (from + 2) % 3;
      if (to == next) return wprod(wT(d[from]), winv(wside(l[next] / 2)));
      if (to == prev) return wprod(winv(wside(l[from] / 2)), wT(d[prev]));
      // Around leg `next` and back.
      return wprod(wT(d[from]), winv(wside(l[next])), wR(kWHalf), wT(d[from]));
    };
    for (int from = 0; from < 3; ++from)
      for (int to = 0; to < 3; ++to) {
        const auto m = strand(from, to);
        const auto key = GenKey::strand(p, from, to);
        generators_[key] = narrow(m);
        if (!generators_[key].is_finite())
          fail(ErrorKind::Numeric, "non-finite strand in " + pants_name(p.value));
        wide_[key] = m;
      }

    // Boundary loops based at the port of leg 0, paths inside the front hexagon.
    PantsCheck check{p, {}, 0.0};
    std::array<Wide, 3> loops;
    for (int j = 0; j < 3; ++j) {
      const Wide path = j == 0 ? kWideId : wmul(strand(0, j), wR(kWHalf));
      loops[j] = wprod(path, wside(l[j]), winv(path));
      check.boundary_trace_error[j] = static_cast<double>(
          std::abs(std::abs(loops[j][0] + loops[j][3]) - 2 * std::cosh(l[j] / 2)));
    }
    long double scale = 1;
    for (const auto& m : loops)
      scale *= std::max({std::abs(m[0]), std::abs(m[1]), std::abs(m[2]), std::abs(m[3])});
    check.relation_error =
        wide_distance_to_pm_identity(wprod(loops[0], loops[2], loops[1])) / static_cast<double>(scale);
    checks_.push_back(check);
  }

  for (const auto c : window_.curves()) {
    const long double l = h.length(c);
    wide_[GenKey::wind(c)] = wside(l);
    wind_length_[c.value] = l;
    generators_[GenKey::wind(c)] = narrow(wside(l));
    if (window_.is_interior(c)) {
      long double shift = h.arclength_twist(c);
      if (self_glued(t, c)) shift += l / 2;
      wide_[GenKey::cross(c)] = wside(shift);
      generators_[GenKey::cross(c)] = narrow(wside(shift));
    }
  }
}

HolonomyChart::Wide HolonomyChart::evaluate_wide(const Word& word) const {
  Wide out = kWideId;
  for (const auto& letter : word) {
    auto it = wide_.find(letter.key);
    if (it == wide_.end()) fail(ErrorKind::Usage, "word uses a generator outside the chart");
    if (letter.key.kind == GenKey::Kind::Wind) {
      out = wmul(out, wside(static_cast<long double>(letter.power) * wind_length_.at(letter.key.id)));
      continue;
    }
    Wide g = it->second;
    std::int64_t p = letter.power;
    if (p < 0) {
      g = winv(g);
      p = -p;
    }
    Wide acc = kWideId;
    while (p > 0) {
      if (p & 1) acc = wmul(acc, g);
      g = wmul(g, g);
      p >>= 1;
    }
    out = wmul(out, acc);
  }
  return out;
}

Isometry2 HolonomyChart::evaluate(const Word& word) const { return narrow(evaluate_wide(word)); }

double HolonomyChart::length(const Word& word) const {
  const auto m = evaluate_wide(word);
  return wide_length(m[0] + m[3]);
}

bool HolonomyChart::supports(const Curve& curve) const {
  if (curve.family() == Family::PantsCurve) return window_.contains_curve(curve.anchor());
  for (const auto& s : curve.strands())
    if (!window_.contains(s.pants)) return false;
  for (const auto& x : curve.crossings())
    if (!window_.is_interior(x.curve)) return false;
  return true;
}

double HolonomyChart::curve_length(const Curve& curve) const {
  if (!supports(curve))
    fail(ErrorKind::Usage, "curve " + curve.key() + " leaves the window; use a larger radius");
  return length(curve.word());
}

double HolonomyChart::max_check_error() const {
  double e = 0.0;
  for (const auto& c : checks_) {
    e = std::max(e, c.relation_error);
    for (double b : c.boundary_trace_error) e = std::max(e, b);
  }
  return e;
}

nlohmann::json HolonomyChart::dump() const {
  auto fmt = [](double v) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.16g", v);
    return nlohmann::json::parse(buf);
  };
  nlohmann::json out = nlohmann::json::array();
  for (const auto& [key, m] : generators_) {
    std::string name;
    switch (key.kind) {
      case GenKey::Kind::Strand:
        name = "S[" + std::to_string(key.id) + ":" + std::to_string(key.from) + ">" +
               std::to_string(key.to) + "]";
        break;
      case GenKey::Kind::Cross: name = "X[" + std::to_string(key.id) + "]"; break;
      case GenKey::Kind::Wind: name = "W[" + std::to_string(key.id) + "]"; break;
    }
    out.push_back({{"name", name}, {"matrix", {fmt(m.a), fmt(m.b), fmt(m.c), fmt(m.d)}}});
  }
  return out;
}

HolonomyChart build_holonomy(const DecompositionTemplate& t, const Window& w, const FNMap& h) {
  return HolonomyChart(t, w, h);
}

double curve_length(const DecompositionTemplate& t, const Window& w, const FNMap& h,
                    const Curve& curve) {
  return HolonomyChart(t, w, h).curve_length(curve);
}

// ---------------------------------------------------------------------------
// Oracle

namespace {

using Lorentz = std::array<long double, 9>;

struct Move {
  bool turn;
  double amount;
};

Lorentz lorentz_identity() { return {1, 0, 0, 0, 1, 0, 0, 0, 1}; }

Lorentz lorentz_mul(const Lorentz& x, const Lorentz& y) {
  Lorentz r{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r[3 * i + j] = x[3 * i] * y[j] + x[3 * i + 1] * y[3 + j] + x[3 * i + 2] * y[6 + j];
  return r;
}

// Coordinates (x, y, t) on the hyperboloid; a frame sits at (0, 0, 1)
// heading along +x.
Lorentz lorentz_move(const Move& m) {
  if (m.turn) {
    const long double c = std::cos((long double)m.amount), s = std::sin((long double)m.amount);
    return {c, -s, 0, s, c, 0, 0, 0, 1};
  }
  const long double ch = std::cosh((long double)m.amount), sh = std::sinh((long double)m.amount);
  return {ch, 0, sh, 0, 1, 0, sh, 0, ch};
}

Lorentz run(const std::vector<Move>& moves, bool inverse) {
  Lorentz acc = lorentz_identity();
  if (!inverse) {
    for (const auto& m : moves) acc = lorentz_mul(acc, lorentz_move(m));
  } else {
    for (auto it = moves.rbegin(); it != moves.rend(); ++it)
      acc = lorentz_mul(acc, lorentz_move({it->turn, -it->amount}));
  }
  return acc;
}

constexpr Move fwd(double d) { return {false, d}; }
constexpr Move left() { return {true, kQuarter}; }
constexpr Move right() { return {true, -kQuarter}; }
constexpr Move about() { return {true, kHalf}; }

}  // namespace

OracleChart::OracleChart(const DecompositionTemplate& t, Window w, const FNMap& h)
    : tmpl_(t), window_(std::move(w)) {
  for (const auto p : window_.pants) {
    PantsData data;
    data.length = leg_lengths(t, h, p);
    for (int j = 0; j < 3; ++j) {
      // Plain hexagon law.
      const double a = data.length[j] / 2, b = data.length[(j + 1) % 3] / 2,
                   c = data.length[(j + 2) % 3] / 2;
      data.seam[j] = std::acosh((std::cosh(a) * std::cosh(b) + std::cosh(c)) /
                                (std::sinh(a) * std::sinh(b)));
      if (!std::isfinite(data.seam[j]))
        fail(ErrorKind::Numeric, "degenerate hexagon in " + pants_name(p.value));
    }
    pants_[p.value] = data;
  }
  for (const auto c : window_.curves()) {
    const double l = h.length(c);
    double shift = 0.0;
    if (window_.is_interior(c)) {
      shift = l * h.twist(c) / kTwoPi;
      if (self_glued(t, c)) shift += l / 2;
    }
    cross_[c.value] = {shift, l};
  }
}

OracleChart::Lorentz OracleChart::letter(const GenKey& key, bool inverse) const {
  std::vector<Move> moves;
  switch (key.kind) {
    case GenKey::Kind::Strand: {
      // Ports sit on the other seam foot of each leg, half a leg further
      // along its orientation.
      const auto& pd = pants_.at(key.id);
      const auto& l = pd.length;
      const auto& d = pd.seam;
      const int from = key.from, to = key.to;
      const int next = (from + 1) % 3, prev = (from + 2) % 3;
      if (to == prev) {
        moves = {fwd(d[prev]), left(), fwd(l[prev] / 2), right()};
      } else if (to == next) {
        moves = {right(), fwd(l[from] / 2), left(), fwd(d[from]), left(), fwd(l[next]), right()};
      } else {
        moves = {right(), fwd(l[from] / 2), left(), fwd(d[from]), left(), fwd(l[next]),
                 right(), about(), fwd(d[from]), left(), fwd(l[from] / 2), right()};
      }
      break;
    }
    case GenKey::Kind::Cross:
      moves = {right(), fwd(cross_.at(key.id).first), left()};
      break;
    case GenKey::Kind::Wind:
      moves = {right(), fwd(cross_.at(key.id).second), left()};
      break;
  }
  return run(moves, inverse);
}

double OracleChart::curve_length(const Curve& curve) const {
  const Word word = curve.word();
  if (word.empty()) fail(ErrorKind::Usage, "empty word");
  for (const auto& s : curve.strands())
    if (!window_.contains(s.pants))
      fail(ErrorKind::Usage, "curve " + curve.key() + " leaves the window; use a larger radius");
  for (const auto& x : curve.crossings())
    if (!window_.is_interior(x.curve))
      fail(ErrorKind::Usage, "curve " + curve.key() + " leaves the window; use a larger radius");
  if (curve.family() == Family::PantsCurve && !window_.contains_curve(curve.anchor()))
    fail(ErrorKind::Usage, "curve " + curve.key() + " leaves the window; use a larger radius");

  // Reverse traversal starting from the middle letter.
  const std::size_t n = word.size();
  const std::size_t start = n / 2;
  Lorentz acc = lorentz_identity();
  for (std::size_t step = 0; step < n; ++step) {
    const auto& lt = word[(start + n - step) % n];
    const bool inv = lt.power > 0;
    const std::int64_t reps = lt.power > 0 ? lt.power : -lt.power;
    if (lt.key.kind == GenKey::Kind::Wind) {
      const double l = cross_.at(lt.key.id).second;
      const double dist = (inv ? -1.0 : 1.0) * static_cast<double>(reps) * l;
      acc = lorentz_mul(acc, run({right(), fwd(dist), left()}, false));
      continue;
    }
    const Lorentz g = letter(lt.key, inv);
    for (std::int64_t r = 0; r < reps; ++r) acc = lorentz_mul(acc, g);
  }
  const long double tr = acc[0] + acc[4] + acc[8];
  const long double y = (tr - 1.0) / 2.0;  // cosh L
  if (!(y > 1.0 + 1e-12)) fail(ErrorKind::NonHyperbolic, "oracle: element is not hyperbolic");
  return std::acosh(y);
}

OracleChart holonomy_oracle(const DecompositionTemplate& t, const Window& w, const FNMap& h) {
  return OracleChart(t, w, h);
}

}  // namespace teich
