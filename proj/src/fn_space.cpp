#include "teich/fn_space.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <set>
#include <sstream>

#include "teich/error.hpp"

namespace teich {

namespace {

double parse_number(const std::string& text, const std::string& expr) {
  char* end = nullptr;
  const double v = std::strtod(text.c_str(), &end);
  if (text.empty() || end != text.c_str() + text.size() || !std::isfinite(v))
    fail(ErrorKind::Parse, "bad number in generator \"" + expr + "\"");
  return v;
}

std::string format_double(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

void check_coordinate(CurveId i, const LengthTwist& v) {
  if (!(std::isfinite(v.length) && v.length > 0.0))
    fail(ErrorKind::Domain, "length of curve " + std::to_string(i.value) +
                                " must be finite and positive");
  if (v.twist && !std::isfinite(*v.twist))
    fail(ErrorKind::Domain, "twist of curve " + std::to_string(i.value) + " must be finite");
}

void require_interior(const FNMap& h, CurveId i) {
  if (!h.tmpl().has_curve(i))
    fail(ErrorKind::Lookup, "no curve " + std::to_string(i.value));
  if (h.tmpl().is_boundary(i))
    fail(ErrorKind::Usage, "cannot twist boundary curve " + std::to_string(i.value));
}

}  // namespace

Generator Generator::parse(const std::string& expr) {
  if (expr == "exp-neg-square") return exp_neg_square();
  if (expr.rfind("const:", 0) == 0) return constant(parse_number(expr.substr(6), expr));
  if (expr.rfind("exp-neg:", 0) == 0) return exp_neg(parse_number(expr.substr(8), expr));
  fail(ErrorKind::Parse, "unknown generator \"" + expr +
                             "\" (valid: const:c, exp-neg-square, exp-neg:c)");
}

double Generator::operator()(CurveId i) const {
  const double x = static_cast<double>(i.value);
  switch (kind_) {
    case Kind::Const: return c_;
    case Kind::ExpNegSquare: return std::exp(-x * x);
    case Kind::ExpNeg: return std::exp(-c_ * x);
  }
  return c_;
}

std::string Generator::to_string() const {
  switch (kind_) {
    case Kind::Const: return "const:" + format_double(c_);
    case Kind::ExpNegSquare: return "exp-neg-square";
    case Kind::ExpNeg: return "exp-neg:" + format_double(c_);
  }
  return "";
}

FNMap::FNMap(DecompositionTemplate tmpl, Generator length, Generator twist)
    : tmpl_(std::move(tmpl)), length_(length), twist_(twist) {}

LengthTwist FNMap::at(CurveId i) const {
  auto v = base(i);
  if (auto it = turns_.find(i); it != turns_.end() && v.twist)
    v.twist = *v.twist + kTwoPi * static_cast<double>(it->second);
  return v;
}

std::int64_t FNMap::turns(CurveId i) const {
  auto it = turns_.find(i);
  return it == turns_.end() ? 0 : it->second;
}

LengthTwist FNMap::base(CurveId i) const {
  if (auto it = overrides_.find(i); it != overrides_.end()) return it->second;
  if (!tmpl_.has_curve(i)) fail(ErrorKind::Lookup, "no curve " + std::to_string(i.value));
  LengthTwist v{length_(i), std::nullopt};
  if (!tmpl_.is_boundary(i)) v.twist = twist_(i);
  check_coordinate(i, v);
  return v;
}

double FNMap::arclength_twist(CurveId i) const {
  const auto v = base(i);
  return v.length * v.twist.value_or(0.0) / kTwoPi + v.length * static_cast<double>(turns(i));
}

FNMap FNMap::with(CurveId i, LengthTwist value) const {
  if (!tmpl_.has_curve(i)) fail(ErrorKind::Lookup, "no curve " + std::to_string(i.value));
  if (tmpl_.is_boundary(i))
    value.twist.reset();
  else if (!value.twist)
    value.twist = 0.0;
  check_coordinate(i, value);
  FNMap out = *this;
  out.overrides_[i] = value;
  out.turns_.erase(i);
  return out;
}

FNMap FNMap::with_turns(CurveId i, std::int64_t turns) const {
  if (!tmpl_.has_curve(i)) fail(ErrorKind::Lookup, "no curve " + std::to_string(i.value));
  if (tmpl_.is_boundary(i))
    fail(ErrorKind::Usage, "cannot twist boundary curve " + std::to_string(i.value));
  FNMap out = *this;
  if (turns == 0)
    out.turns_.erase(i);
  else
    out.turns_[i] = turns;
  return out;
}

FNMap FNMap::with_length(CurveId i, double length) const {
  auto v = base(i);
  v.length = length;
  FNMap out = with(i, v);
  if (!tmpl_.is_boundary(i)) out = out.with_turns(i, turns(i));
  return out;
}

FNMap FNMap::with_twist(CurveId i, double twist) const {
  auto v = at(i);
  if (!v.twist) fail(ErrorKind::Usage, "boundary curve " + std::to_string(i.value) + " has no twist");
  v.twist = twist;
  return with(i, v);
}

FNMap FNMap::from_json(DecompositionTemplate tmpl, const nlohmann::json& doc) {
  try {
    if (!doc.is_object()) fail(ErrorKind::Parse, "surface document must be an object");
    Generator l = Generator::constant(1.0);
    Generator th = Generator::constant(0.0);
    if (doc.contains("default")) {
      const auto& d = doc["default"];
      if (d.contains("l")) l = Generator::parse(d["l"].get<std::string>());
      if (d.contains("theta")) th = Generator::parse(d["theta"].get<std::string>());
    }
    FNMap h(std::move(tmpl), l, th);
    if (doc.contains("overrides")) {
      for (const auto& [key, val] : doc["overrides"].items()) {
        char* end = nullptr;
        const auto id = std::strtoull(key.c_str(), &end, 10);
        if (key.empty() || *end != '\0') fail(ErrorKind::Parse, "override key \"" + key + "\" is not a curve index");
        LengthTwist v = h.at(CurveId{id});
        if (val.contains("l")) v.length = val["l"].get<double>();
        if (val.contains("theta")) {
          if (h.tmpl().is_boundary(CurveId{id}))
            fail(ErrorKind::Usage, "boundary curve " + key + " carries no twist");
          v.twist = val["theta"].get<double>();
        }
        h = h.with(CurveId{id}, v);
      }
    }
    return h;
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("surface JSON: ") + e.what());
  }
}

FNMap FNMap::from_json_text(DecompositionTemplate tmpl, const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("surface JSON: ") + e.what());
  }
  return from_json(std::move(tmpl), doc);
}

nlohmann::json FNMap::to_json() const {
  nlohmann::json doc;
  doc["default"] = {{"l", length_.to_string()}, {"theta", twist_.to_string()}};
  doc["overrides"] = nlohmann::json::object();
  std::set<CurveId> ids;
  for (const auto& [id, v] : overrides_) ids.insert(id);
  for (const auto& [id, n] : turns_) ids.insert(id);
  for (const auto id : ids) {
    const auto v = at(id);
    nlohmann::json o{{"l", v.length}};
    if (v.twist) o["theta"] = *v.twist;
    doc["overrides"][std::to_string(id.value)] = o;
  }
  return doc;
}

FNDistanceEstimate fn_distance(const FNMap& a, const FNMap& b, IndexRange indices) {
  if (!(a.tmpl() == b.tmpl())) fail(ErrorKind::Usage, "FN maps live on different templates");
  if (indices.first >= indices.last) fail(ErrorKind::Usage, "empty index range");
  FNDistanceEstimate est;
  est.scanned = indices;
  for (const auto c : a.tmpl().curves_in(indices.first, indices.last)) {
    const auto x = a.base(c);
    const auto y = b.base(c);
    est.value = std::max(est.value, std::abs(std::log(x.length) - std::log(y.length)));
    if (x.twist && y.twist) {
      double d = x.length * *x.twist - y.length * *y.twist;
      const auto na = static_cast<double>(a.turns(c)), nb = static_cast<double>(b.turns(c));
      if (na != 0.0 || nb != 0.0) d += kTwoPi * (na * x.length - nb * y.length);
      est.value = std::max(est.value, std::abs(d));
    }
  }
  bool exact = a.tmpl().is_finite() && indices.first == 0 &&
               a.tmpl().curves_in(indices.last, UINT64_MAX).empty();
  if (!exact && a.default_length() == b.default_length() &&
      a.default_twist() == b.default_twist()) {
    exact = true;
    for (const auto* m : {&a, &b}) {
      for (const auto& [id, v] : m->overrides())
        if (!indices.contains(id)) exact = false;
      for (const auto& [id, n] : m->all_turns())
        if (!indices.contains(id)) exact = false;
    }
  }
  est.exact = exact;
  return est;
}

std::vector<std::pair<double, std::optional<double>>> embed_linf(const FNMap& h,
                                                                  IndexRange indices) {
  if (indices.first >= indices.last) fail(ErrorKind::Usage, "empty index range");
  std::vector<std::pair<double, std::optional<double>>> out;
  for (const auto c : h.tmpl().curves_in(indices.first, indices.last)) {
    const auto v = h.base(c);
    std::optional<double> second;
    if (v.twist) {
      second = v.length * *v.twist;
      if (const auto n = h.turns(c)) *second += kTwoPi * (static_cast<double>(n) * v.length);
    }
    out.emplace_back(std::log(v.length), second);
  }
  return out;
}

FNMap apply_dehn_twists(const FNMap& h, const std::map<CurveId, std::int64_t>& orders) {
  FNMap out = h;
  for (const auto& [id, k] : orders) {
    require_interior(h, id);
    if (k == 0) continue;
    out = out.with_turns(id, out.turns(id) + k);
  }
  return out;
}

FNMap apply_arclength_twist(const FNMap& h, CurveId i, double s) {
  require_interior(h, i);
  if (s == 0.0) return h;
  const auto n = h.turns(i);
  return h.with_twist(i, h.base_twist(i) + kTwoPi * s / h.length(i)).with_turns(i, n);
}

ShigaReport shiga_check(const FNMap& h, std::uint64_t n) {
  if (n < 1) fail(ErrorKind::Usage, "shiga_check needs N >= 1");
  ShigaReport r;
  r.holds_up_to = n;
  r.witness_min = HUGE_VAL;
  r.witness_max = 0.0;
  const std::uint64_t half = (n + 1) / 2;
  double half_min = HUGE_VAL, half_max = 0.0;
  for (const auto c : h.tmpl().curves_in(0, n)) {
    double l = 0.0;
    try {
      l = h.length(c);
    } catch (const Error& e) {
      if (e.kind() != ErrorKind::Domain) throw;
      // length left the double range: no finite M covers this curve
      r.holds_up_to = c.value;
      r.m_estimate = HUGE_VAL;
      r.m_half = half_max > 0.0 ? std::max(half_max, 1.0 / half_min) : HUGE_VAL;
      return r;
    }
    r.witness_min = std::min(r.witness_min, l);
    r.witness_max = std::max(r.witness_max, l);
    if (c.value < half) {
      half_min = std::min(half_min, l);
      half_max = std::max(half_max, l);
    }
  }
  r.m_estimate = std::max(r.witness_max, 1.0 / r.witness_min);
  r.m_half = half_max > 0.0 ? std::max(half_max, 1.0 / half_min) : r.m_estimate;
  return r;
}

namespace {

// Aitken delta-squared on the last three terms; falls back to the last term
// when the differences do not contract.
double extrapolate(double x0, double x1, double x2) {
  const double d1 = x1 - x0;
  const double d2 = x2 - x1;
  const double denom = d2 - d1;
  if (d1 == 0.0 || denom == 0.0 || std::abs(d2) >= std::abs(d1)) return x2;
  return x2 - d2 * d2 / denom;
}

}  // namespace

CauchyLimit cauchy_limit(const std::vector<FNMap>& sequence, IndexRange indices, double tol) {
  if (sequence.size() < 3) fail(ErrorKind::Usage, "cauchy_limit needs at least 3 maps");
  for (const auto& m : sequence) {
    if (!(m.tmpl() == sequence.front().tmpl()))
      fail(ErrorKind::Usage, "FN maps live on different templates");
  }
  const auto n = sequence.size();
  const FNMap& x0 = sequence[n - 3];
  const FNMap& x1 = sequence[n - 2];
  const FNMap& x2 = sequence[n - 1];

  CauchyLimit out{x2, {}};
  std::vector<CurveId> growing;
  for (const auto c : x2.tmpl().curves_in(indices.first, indices.last)) {
    const auto a = x0.at(c), b = x1.at(c), z = x2.at(c);
    auto growth = [&](double p, double q, double r) {
      const double d1 = std::abs(q - p), d2 = std::abs(r - q);
      return std::pair{d1, d2};
    };
    auto [l1, l2] = growth(a.length, b.length, z.length);
    double s0 = 0, s1 = 0, s2 = 0;
    if (z.twist) {
      s0 = a.length * *a.twist;
      s1 = b.length * *b.twist;
      s2 = z.length * *z.twist;
    }
    auto [t1, t2] = growth(s0, s1, s2);
    if ((l2 >= tol && l2 > l1) || (t2 >= tol && t2 > t1)) {
      growing.push_back(c);
      continue;
    }
    if (l1 >= tol || l2 >= tol || t1 >= tol || t2 >= tol) out.non_converged.push_back(c);

    const double l = extrapolate(a.length, b.length, z.length);
    LengthTwist v{l > 0.0 ? l : z.length, std::nullopt};
    if (z.twist) v.twist = extrapolate(s0, s1, s2) / v.length;
    out.limit = out.limit.with(c, v);
  }
  if (!growing.empty()) {
    std::string ids;
    for (const auto c : growing) ids += (ids.empty() ? "" : ", ") + std::to_string(c.value);
    fail(ErrorKind::NonCauchy, "sequence is not Cauchy at curve index(es): " + ids);
  }
  return out;
}

}  // namespace teich
