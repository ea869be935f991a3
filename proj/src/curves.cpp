#include "teich/curves.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <set>

#include <boost/math/tools/toms748_solve.hpp>

#include "teich/error.hpp"
#include "teich/hyp_kernel.hpp"

namespace teich {

namespace {

std::string curve_name(CurveId c) { return "curve " + std::to_string(c.value); }

// The two sides of an interior curve, side A first.
std::pair<Attachment, Attachment> sides_of(const DecompositionTemplate& t, CurveId i) {
  auto atts = t.adjacency(i);
  if (atts.size() != 2) fail(ErrorKind::Usage, curve_name(i) + " is a boundary curve");
  if (atts[0].side != Side::A) std::swap(atts[0], atts[1]);
  return {atts[0], atts[1]};
}

}  // namespace

std::string to_string(Family f) {
  switch (f) {
    case Family::PantsCurve: return "pants-curve";
    case Family::Dual: return "dual";
    case Family::TwistedDual: return "twisted-dual";
    case Family::Chain: return "chain";
  }
  return "";
}

Curve Curve::pants_curve(const DecompositionTemplate& t, CurveId i) {
  if (!t.has_curve(i)) fail(ErrorKind::Lookup, "no " + curve_name(i));
  Curve c;
  c.family_ = Family::PantsCurve;
  c.anchor_ = i;
  return c;
}

int Curve::intersection(CurveId i) const {
  return static_cast<int>(std::count_if(crossings_.begin(), crossings_.end(),
                                        [&](const Crossing& x) { return x.curve == i; }));
}

std::int64_t Curve::winding_at(CurveId i) const {
  for (const auto& x : crossings_)
    if (x.curve == i) return x.winding;
  return 0;
}

Word Curve::word() const {
  if (family_ == Family::PantsCurve) return {{GenKey::wind(anchor_), 1}};
  Word w;
  for (std::size_t k = 0; k < strands_.size(); ++k) {
    const auto& s = strands_[k];
    const auto& x = crossings_[k];
    w.push_back({GenKey::strand(s.pants, s.from_leg, s.to_leg), 1});
    w.push_back({GenKey::cross(x.curve), 1});
    if (x.winding != 0) w.push_back({GenKey::wind(x.curve), -x.winding});
  }
  return w;
}

std::string Curve::key() const {
  const auto a = std::to_string(anchor_.value);
  switch (family_) {
    case Family::PantsCurve: return "C" + a;
    case Family::Dual: return "B" + a;
    case Family::TwistedDual: return "B" + a + "^" + std::to_string(crossings_.front().winding);
    case Family::Chain: break;
  }
  // Outbound half of the itinerary determines the chain.
  std::string k = "X";
  const std::size_t m = crossings_.size() / 2;
  for (std::size_t j = 0; j < m; ++j) {
    k += (j ? "," : "") + std::to_string(strands_[j].pants.value) + "-" +
         std::to_string(crossings_[j].curve.value) + ":" + std::to_string(crossings_[j].winding);
  }
  return k + "," + std::to_string(strands_[m].pants.value);
}

nlohmann::json Curve::to_json() const {
  switch (family_) {
    case Family::PantsCurve: return {{"family", "pants-curve"}, {"i", anchor_.value}};
    case Family::Dual: return {{"family", "dual"}, {"i", anchor_.value}};
    case Family::TwistedDual:
      return {{"family", "twisted-dual"}, {"i", anchor_.value}, {"k", crossings_.front().winding}};
    case Family::Chain: break;
  }
  const std::size_t m = crossings_.size() / 2;
  nlohmann::json path = nlohmann::json::array(), links = nlohmann::json::array(),
                 windings = nlohmann::json::array();
  for (std::size_t j = 0; j < m; ++j) {
    path.push_back(strands_[j].pants.value);
    links.push_back(crossings_[j].curve.value);
    windings.push_back(crossings_[j].winding);
  }
  path.push_back(strands_[m].pants.value);
  return {{"family", "chain"}, {"path", path}, {"links", links}, {"windings", windings}};
}

Curve Curve::from_json(const DecompositionTemplate& t, const nlohmann::json& j) {
  try {
    const auto family = j.at("family").get<std::string>();
    if (family == "pants-curve") return pants_curve(t, CurveId{j.at("i").get<std::uint64_t>()});
    if (family == "dual") return dual_curve(t, CurveId{j.at("i").get<std::uint64_t>()});
    if (family == "twisted-dual")
      return twisted_dual(t, CurveId{j.at("i").get<std::uint64_t>()}, j.value("k", std::int64_t{0}));
    if (family == "chain") {
      std::vector<PantsId> path;
      std::vector<CurveId> links;
      for (const auto& p : j.at("path")) path.push_back(PantsId{p.get<std::uint64_t>()});
      for (const auto& c : j.at("links")) links.push_back(CurveId{c.get<std::uint64_t>()});
      auto windings = j.value("windings", std::vector<std::int64_t>(links.size(), 0));
      return chain_curve(t, path, links, windings);
    }
    fail(ErrorKind::Parse, "unknown curve family \"" + family + "\"");
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("curve JSON: ") + e.what());
  }
}

void Curve::validate(const DecompositionTemplate& t) const {
  const auto n = strands_.size();
  if (n == 0 || crossings_.size() != n) fail(ErrorKind::Structure, "malformed itinerary");
  for (std::size_t k = 0; k < n; ++k) {
    const auto& s = strands_[k];
    const auto& next = strands_[(k + 1) % n];
    const auto pants = t.pants(s.pants);
    if (pants.legs[s.to_leg].curve != crossings_[k].curve)
      fail(ErrorKind::Structure, "strand does not exit through " + curve_name(crossings_[k].curve));
    const auto other = t.across(s.pants, s.to_leg);
    if (!other || other->pants != next.pants || other->leg != next.from_leg)
      fail(ErrorKind::Structure, "itinerary does not close up at " + curve_name(crossings_[k].curve));
  }
}

Curve dual_curve(const DecompositionTemplate& t, CurveId i) {
  const auto [a, b] = sides_of(t, i);
  Curve c;
  c.family_ = Family::Dual;
  c.anchor_ = i;
  if (a.pants == b.pants) {
    c.strands_ = {{a.pants, b.leg, a.leg}};
    c.crossings_ = {{i, 0}};
  } else {
    c.strands_ = {{a.pants, a.leg, a.leg}, {b.pants, b.leg, b.leg}};
    c.crossings_ = {{i, 0}, {i, 0}};
  }
  c.validate(t);
  return c;
}

Curve twisted_dual(const DecompositionTemplate& t, CurveId i, std::int64_t k) {
  return dehn_twist_curve(dual_curve(t, i), i, k);
}

int intersection_with_pants_curve(const Curve& curve, CurveId i) { return curve.intersection(i); }

Curve dehn_twist_curve(const Curve& curve, CurveId i, std::int64_t k) {
  if (k == 0 || curve.intersection(i) == 0) return curve;
  Curve out = curve;
  for (auto& x : out.crossings_)
    if (x.curve == i) x.winding += k;
  if (out.family_ == Family::Dual || out.family_ == Family::TwistedDual)
    out.family_ = out.crossings_.front().winding == 0 ? Family::Dual : Family::TwistedDual;
  return out;
}

Curve chain_curve(const DecompositionTemplate& t, const std::vector<PantsId>& path,
                  const std::vector<CurveId>& links, const std::vector<std::int64_t>& windings) {
  const std::size_t m = links.size();
  if (m < 1 || path.size() != m + 1 || windings.size() != m)
    fail(ErrorKind::Usage, "chain needs path of m+1 pants, m links and m windings (m >= 1)");
  if (std::set<PantsId>(path.begin(), path.end()).size() != path.size())
    fail(ErrorKind::Usage, "chain pants must be distinct");

  // y[j]: leg of links[j-1] in path[j]; z[j]: leg of links[j] in path[j].
  std::vector<int> y(m + 1, -1), z(m + 1, -1);
  for (std::size_t j = 0; j < m; ++j) {
    const auto [a, b] = sides_of(t, links[j]);
    const bool forward = a.pants == path[j] && b.pants == path[j + 1];
    const bool backward = b.pants == path[j] && a.pants == path[j + 1];
    if (!forward && !backward)
      fail(ErrorKind::Usage, curve_name(links[j]) + " does not join consecutive chain pants");
    z[j] = forward ? a.leg : b.leg;
    y[j + 1] = forward ? b.leg : a.leg;
  }

  Curve c;
  c.family_ = Family::Chain;
  c.anchor_ = links.front();
  c.strands_.push_back({path[0], z[0], z[0]});
  c.crossings_.push_back({links[0], windings[0]});
  for (std::size_t j = 1; j < m; ++j) {
    c.strands_.push_back({path[j], y[j], z[j]});
    c.crossings_.push_back({links[j], windings[j]});
  }
  c.strands_.push_back({path[m], y[m], y[m]});
  c.crossings_.push_back({links[m - 1], windings[m - 1]});
  for (std::size_t j = m - 1; j >= 1; --j) {
    c.strands_.push_back({path[j], z[j], y[j]});
    c.crossings_.push_back({links[j - 1], windings[j - 1]});
  }
  c.validate(t);
  return c;
}

std::vector<Curve> enumerate_candidates(const DecompositionTemplate& t, const Window& w,
                                        int max_chain, int max_wind) {
  if (max_chain < 0 || max_wind < 0) fail(ErrorKind::Usage, "enumeration bounds must be >= 0");
  std::map<std::string, Curve> out;
  auto add = [&](Curve c) { out.emplace(c.key(), std::move(c)); };

  for (const auto c : w.curves()) add(Curve::pants_curve(t, c));
  for (const auto i : w.interior) {
    add(dual_curve(t, i));
    for (std::int64_t k = 1; k <= max_wind; ++k) {
      add(twisted_dual(t, i, k));
      add(twisted_dual(t, i, -k));
    }
  }

  // Simple pants paths through interior curves, 3..max_chain pants long.
  std::set<std::vector<std::uint64_t>> seen;
  std::vector<PantsId> path;
  std::vector<CurveId> links;
  std::function<void()> extend = [&]() {
    if (path.size() >= 3) {
      std::vector<std::uint64_t> fwd, rev;
      for (std::size_t j = 0; j < links.size(); ++j) {
        fwd.push_back(path[j].value);
        fwd.push_back(links[j].value);
      }
      fwd.push_back(path.back().value);
      rev.assign(fwd.rbegin(), fwd.rend());
      if (seen.insert(std::min(fwd, rev)).second) {
        std::vector<std::int64_t> k(links.size(), -max_wind);
        while (true) {
          add(chain_curve(t, path, links, k));
          std::size_t j = 0;
          while (j < k.size() && k[j] == max_wind) k[j++] = -max_wind;
          if (j == k.size()) break;
          ++k[j];
        }
      }
    }
    if (static_cast<int>(path.size()) >= max_chain) return;
    for (const auto& leg : t.pants(path.back()).legs) {
      if (!w.is_interior(leg.curve)) continue;
      for (const auto& a : t.adjacency(leg.curve)) {
        if (std::find(path.begin(), path.end(), a.pants) != path.end()) continue;
        if (!w.contains(a.pants)) continue;
        path.push_back(a.pants);
        links.push_back(leg.curve);
        extend();
        path.pop_back();
        links.pop_back();
      }
    }
  };
  if (max_chain >= 3) {
    for (const auto p : w.pants) {
      path = {p};
      links.clear();
      extend();
    }
  }

  std::vector<Curve> list;
  list.reserve(out.size());
  for (auto& [k, c] : out) list.push_back(std::move(c));
  return list;
}

namespace {

struct DualModel {
  const DecompositionTemplate& t;
  const Window& w;
  CurveId i;
  FNMap base;

  DualModel(const DecompositionTemplate& tt, const Window& ww, CurveId ii,
            const std::map<CurveId, double>& lengths)
      : t(tt), w(ww), i(ii), base(tt, Generator::constant(1.0), Generator::constant(0.0)) {
    if (!w.is_interior(i)) fail(ErrorKind::Usage, curve_name(i) + " is not interior to the window");
    std::string missing;
    for (const auto c : w.curves()) {
      auto it = lengths.find(c);
      if (it == lengths.end()) {
        missing += (missing.empty() ? "" : ", ") + std::to_string(c.value);
        continue;
      }
      base = base.with(c, {it->second, std::nullopt});
    }
    if (!missing.empty()) fail(ErrorKind::Usage, "missing observed lengths for curves " + missing);
  }

  double length(double theta, std::int64_t k) const {
    const auto h = base.with_twist(i, theta);
    return HolonomyChart(t, w, h).curve_length(twisted_dual(t, i, k));
  }

  // Smallest theta >= 0 with L(beta) = target.
  double solve_abs(double target, double tol) const {
    const double f0 = length(0.0, 0);
    const double scale = std::max(1.0, target);
    if (target < f0 - tol * scale)
      fail(ErrorKind::Inconsistent, "observed dual length is below its minimum over all twists");
    if (target <= f0) return 0.0;
    double lo = 0.0, hi = 1.0;
    while (length(hi, 0) < target) {
      lo = hi;
      hi *= 2.0;
      if (hi > 1e12) fail(ErrorKind::Inconsistent, "no twist reproduces the observed dual length");
    }
    auto f = [&](double th) { return length(th, 0) - target; };
    std::uintmax_t iters = 200;
    const auto r = boost::math::tools::toms748_solve(
        f, lo, hi, [](double a, double b) { return std::abs(b - a) <= 1e-15 * std::max(1.0, std::abs(a)); },
        iters);
    return (r.first + r.second) / 2;
  }
};

}  // namespace

TwistRecovery recover_twist(const DecompositionTemplate& t, const Window& w, CurveId i,
                            const std::map<CurveId, double>& lengths, double l_beta,
                            double l_beta_prime, double tol) {
  const DualModel model(t, w, i, lengths);
  const double abs_theta = model.solve_abs(l_beta, tol);
  if (abs_theta < 1e-4) return {0.0, true};

  const double scale = std::max(1.0, l_beta_prime);
  const double plus = std::abs(model.length(abs_theta, 1) - l_beta_prime);
  const double minus = std::abs(model.length(-abs_theta, 1) - l_beta_prime);
  const double best = std::min(plus, minus);
  // Error in theta propagates into the sheared dual with bounded slope.
  const double slack = std::max(tol * scale, 1e-6 * scale);
  if (best > slack)
    fail(ErrorKind::Inconsistent,
         "no twist reproduces both observed dual lengths (mismatch " + std::to_string(best) + ")");
  return {plus <= minus ? abs_theta : -abs_theta, false};
}

double recover_abs_twist(const DecompositionTemplate& t, const Window& w, CurveId i,
                         const std::map<CurveId, double>& lengths, double l_beta) {
  const DualModel model(t, w, i, lengths);
  const double th = model.solve_abs(l_beta, 1e-7);
  return th < 1e-4 ? 0.0 : th;
}

}  // namespace teich
