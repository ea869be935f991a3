#include "teich/pants_graph.hpp"

#include <algorithm>
#include <deque>
#include <set>

#include "teich/error.hpp"

namespace teich {

namespace {

std::string curve_name(CurveId c) { return "curve " + std::to_string(c.value); }
std::string pants_name(PantsId p) { return "pants " + std::to_string(p.value); }

Side parse_side(const nlohmann::json& j) {
  if (!j.is_string()) fail(ErrorKind::Parse, "leg side must be \"A\" or \"B\"");
  const auto s = j.get<std::string>();
  if (s == "A") return Side::A;
  if (s == "B") return Side::B;
  fail(ErrorKind::Parse, "leg side must be \"A\" or \"B\", got \"" + s + "\"");
}

}  // namespace

std::string to_string(TemplateKind kind) {
  switch (kind) {
    case TemplateKind::Flute: return "flute";
    case TemplateKind::Ladder: return "ladder";
    case TemplateKind::BinaryTree: return "binary-tree";
    case TemplateKind::CustomFinite: return "custom-finite";
  }
  return "unknown";
}

DecompositionTemplate DecompositionTemplate::flute() {
  return DecompositionTemplate(TemplateKind::Flute);
}
DecompositionTemplate DecompositionTemplate::ladder() {
  return DecompositionTemplate(TemplateKind::Ladder);
}
DecompositionTemplate DecompositionTemplate::binary_tree() {
  return DecompositionTemplate(TemplateKind::BinaryTree);
}

DecompositionTemplate DecompositionTemplate::custom(std::vector<Pants> pants) {
  if (pants.empty()) fail(ErrorKind::Structure, "custom template has no pants");
  auto data = std::make_shared<Custom>();
  for (const auto& p : pants) {
    if (!data->pants.emplace(p.id, p).second)
      fail(ErrorKind::Structure, "duplicate " + pants_name(p.id));
  }
  for (const auto& [id, p] : data->pants) {
    for (int leg = 0; leg < 3; ++leg) {
      data->curves[p.legs[leg].curve].push_back({id, leg, p.legs[leg].side});
    }
  }
  for (const auto& [c, atts] : data->curves) {
    if (atts.size() > 2)
      fail(ErrorKind::Structure, curve_name(c) + " has degree " +
                                     std::to_string(atts.size()) + " (expected 1 or 2)");
    if (atts.size() == 2 && atts[0].side == atts[1].side)
      fail(ErrorKind::Structure,
           curve_name(c) + " is attached twice on side " + side_char(atts[0].side));
  }
  // Connectivity of the dual graph.
  std::set<PantsId> seen{data->pants.begin()->first};
  std::deque<PantsId> queue{data->pants.begin()->first};
  while (!queue.empty()) {
    const auto p = queue.front();
    queue.pop_front();
    for (const auto& leg : data->pants.at(p).legs) {
      for (const auto& a : data->curves.at(leg.curve)) {
        if (seen.insert(a.pants).second) queue.push_back(a.pants);
      }
    }
  }
  if (seen.size() != data->pants.size())
    fail(ErrorKind::Structure, "dual graph of custom template is disconnected");

  DecompositionTemplate t(TemplateKind::CustomFinite);
  t.custom_ = std::move(data);
  return t;
}

DecompositionTemplate DecompositionTemplate::from_json(const nlohmann::json& doc) {
  if (!doc.is_object() || !doc.contains("pants") || !doc["pants"].is_array())
    fail(ErrorKind::Parse, "template document needs a \"pants\" array");
  std::optional<std::set<std::uint64_t>> declared;
  if (doc.contains("curves")) {
    if (!doc["curves"].is_array()) fail(ErrorKind::Parse, "\"curves\" must be an array");
    declared.emplace();
    for (const auto& c : doc["curves"]) declared->insert(c.get<std::uint64_t>());
  }
  std::vector<Pants> pants;
  std::set<std::uint64_t> used;
  for (const auto& pj : doc["pants"]) {
    if (!pj.contains("id") || !pj.contains("legs") || !pj["legs"].is_array())
      fail(ErrorKind::Parse, "each pants needs \"id\" and \"legs\"");
    Pants p;
    p.id = PantsId{pj["id"].get<std::uint64_t>()};
    if (pj["legs"].size() != 3)
      fail(ErrorKind::Structure, pants_name(p.id) + " must have exactly 3 legs");
    for (int leg = 0; leg < 3; ++leg) {
      const auto& lj = pj["legs"][leg];
      if (!lj.is_array() || lj.size() != 2)
        fail(ErrorKind::Parse, "a leg is serialized as [curve, side]");
      const auto c = lj[0].get<std::uint64_t>();
      if (declared && !declared->count(c))
        fail(ErrorKind::Structure,
             pants_name(p.id) + " references missing " + curve_name(CurveId{c}));
      used.insert(c);
      p.legs[leg] = Leg{CurveId{c}, parse_side(lj[1])};
    }
    pants.push_back(p);
  }
  if (declared) {
    for (auto c : *declared) {
      if (!used.count(c))
        fail(ErrorKind::Structure, "dangling " + curve_name(CurveId{c}) + " has no legs");
    }
  }
  return custom(std::move(pants));
}

DecompositionTemplate DecompositionTemplate::from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("template JSON: ") + e.what());
  }
  try {
    return from_json(doc);
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::Parse, std::string("template JSON: ") + e.what());
  }
}

DecompositionTemplate DecompositionTemplate::builtin(const std::string& name) {
  if (name == "flute") return flute();
  if (name == "ladder") return ladder();
  if (name == "binary-tree") return binary_tree();
  if (name == "genus2") {
    Pants p0{PantsId{0}, {Leg{CurveId{0}, Side::A}, Leg{CurveId{1}, Side::A},
                          Leg{CurveId{2}, Side::A}}};
    Pants p1{PantsId{1}, {Leg{CurveId{0}, Side::B}, Leg{CurveId{1}, Side::B},
                          Leg{CurveId{2}, Side::B}}};
    return custom({p0, p1});
  }
  fail(ErrorKind::Usage, "unknown builtin template \"" + name +
                             "\" (valid: flute, ladder, binary-tree, genus2)");
}

bool DecompositionTemplate::has_pants(PantsId id) const {
  if (kind_ == TemplateKind::CustomFinite) return custom_->pants.count(id) > 0;
  return true;
}

bool DecompositionTemplate::has_curve(CurveId id) const {
  if (kind_ == TemplateKind::CustomFinite) return custom_->curves.count(id) > 0;
  return true;
}

Pants DecompositionTemplate::pants(PantsId id) const {
  const auto n = id.value;
  switch (kind_) {
    case TemplateKind::Flute: {
      Pants p{id, {}};
      p.legs[0] = n == 0 ? Leg{CurveId{0}, Side::A} : Leg{CurveId{2 * n}, Side::B};
      p.legs[1] = Leg{CurveId{2 * n + 2}, Side::A};
      p.legs[2] = Leg{CurveId{2 * n + 1}, Side::A};
      return p;
    }
    case TemplateKind::Ladder: {
      Pants p{id, {}};
      const auto k = n / 2;
      if (n % 2 == 0) {
        p.legs[0] = k == 0 ? Leg{CurveId{0}, Side::A} : Leg{CurveId{3 * k}, Side::B};
        p.legs[1] = Leg{CurveId{3 * k + 3}, Side::A};
        p.legs[2] = Leg{CurveId{3 * k + 2}, Side::A};
      } else {
        p.legs[0] = Leg{CurveId{3 * k + 1}, Side::A};
        p.legs[1] = Leg{CurveId{3 * k + 1}, Side::B};
        p.legs[2] = Leg{CurveId{3 * k + 2}, Side::B};
      }
      return p;
    }
    case TemplateKind::BinaryTree: {
      Pants p{id, {}};
      p.legs[0] = Leg{CurveId{n}, n == 0 ? Side::A : Side::B};
      p.legs[1] = Leg{CurveId{2 * n + 1}, Side::A};
      p.legs[2] = Leg{CurveId{2 * n + 2}, Side::A};
      return p;
    }
    case TemplateKind::CustomFinite: {
      auto it = custom_->pants.find(id);
      if (it == custom_->pants.end()) fail(ErrorKind::Lookup, "no " + pants_name(id));
      return it->second;
    }
  }
  fail(ErrorKind::Lookup, "no " + pants_name(id));
}

std::vector<Attachment> DecompositionTemplate::adjacency(CurveId id) const {
  const auto c = id.value;
  switch (kind_) {
    case TemplateKind::Flute:
      if (c == 0) return {{PantsId{0}, 0, Side::A}};
      if (c % 2 == 1) return {{PantsId{(c - 1) / 2}, 2, Side::A}};
      return {{PantsId{(c - 2) / 2}, 1, Side::A}, {PantsId{c / 2}, 0, Side::B}};
    case TemplateKind::Ladder: {
      if (c == 0) return {{PantsId{0}, 0, Side::A}};
      if (c % 3 == 1) {
        const auto k = (c - 1) / 3;
        return {{PantsId{2 * k + 1}, 0, Side::A}, {PantsId{2 * k + 1}, 1, Side::B}};
      }
      if (c % 3 == 2) {
        const auto k = (c - 2) / 3;
        return {{PantsId{2 * k}, 2, Side::A}, {PantsId{2 * k + 1}, 2, Side::B}};
      }
      const auto k = c / 3 - 1;
      return {{PantsId{2 * k}, 1, Side::A}, {PantsId{2 * k + 2}, 0, Side::B}};
    }
    case TemplateKind::BinaryTree: {
      if (c == 0) return {{PantsId{0}, 0, Side::A}};
      const auto parent = (c - 1) / 2;
      return {{PantsId{parent}, c % 2 == 1 ? 1 : 2, Side::A}, {PantsId{c}, 0, Side::B}};
    }
    case TemplateKind::CustomFinite: {
      auto it = custom_->curves.find(id);
      if (it == custom_->curves.end()) fail(ErrorKind::Lookup, "no " + curve_name(id));
      return it->second;
    }
  }
  fail(ErrorKind::Lookup, "no " + curve_name(id));
}

std::vector<CurveId> DecompositionTemplate::curves_in(std::uint64_t first,
                                                      std::uint64_t last) const {
  std::vector<CurveId> out;
  if (kind_ == TemplateKind::CustomFinite) {
    for (auto it = custom_->curves.lower_bound(CurveId{first});
         it != custom_->curves.end() && it->first.value < last; ++it)
      out.push_back(it->first);
    return out;
  }
  for (auto c = first; c < last; ++c) out.push_back(CurveId{c});
  return out;
}

std::optional<Attachment> DecompositionTemplate::across(PantsId p, int leg) const {
  const auto here = pants(p).legs.at(leg);
  for (const auto& a : adjacency(here.curve)) {
    if (a.side != here.side) return a;
  }
  return std::nullopt;
}

nlohmann::json DecompositionTemplate::to_json() const {
  if (kind_ != TemplateKind::CustomFinite) return {{"builtin", to_string(kind_)}};
  nlohmann::json doc;
  doc["pants"] = nlohmann::json::array();
  for (const auto& [id, p] : custom_->pants) {
    nlohmann::json legs = nlohmann::json::array();
    for (const auto& l : p.legs)
      legs.push_back({l.curve.value, std::string(1, side_char(l.side))});
    doc["pants"].push_back({{"id", id.value}, {"legs", legs}});
  }
  return doc;
}

bool DecompositionTemplate::operator==(const DecompositionTemplate& other) const {
  if (kind_ != other.kind_) return false;
  if (kind_ != TemplateKind::CustomFinite) return true;
  if (custom_ == other.custom_) return true;
  return custom_->curves == other.custom_->curves;
}

bool Window::contains(PantsId p) const {
  return std::binary_search(pants.begin(), pants.end(), p);
}
bool Window::is_interior(CurveId c) const {
  return std::binary_search(interior.begin(), interior.end(), c);
}
bool Window::is_frontier(CurveId c) const {
  return std::binary_search(frontier.begin(), frontier.end(), c);
}

std::vector<CurveId> Window::curves() const {
  auto out = interior;
  out.insert(out.end(), frontier.begin(), frontier.end());
  return out;
}

nlohmann::json Window::to_json() const {
  nlohmann::json j;
  j["center"] = center.value;
  j["radius"] = radius;
  auto ids = [](const auto& v) {
    nlohmann::json a = nlohmann::json::array();
    for (const auto& x : v) a.push_back(x.value);
    return a;
  };
  j["pants"] = ids(pants);
  j["interior"] = ids(interior);
  j["frontier"] = ids(frontier);
  return j;
}

Window window(const DecompositionTemplate& t, PantsId center, int radius) {
  if (radius < 0) fail(ErrorKind::Usage, "window radius must be non-negative");
  if (!t.has_pants(center)) fail(ErrorKind::Lookup, "window center " + pants_name(center) + " is absent");

  std::map<PantsId, int> dist{{center, 0}};
  std::deque<PantsId> queue{center};
  while (!queue.empty()) {
    const auto p = queue.front();
    queue.pop_front();
    const int d = dist[p];
    if (d == radius) continue;
    for (const auto& leg : t.pants(p).legs) {
      for (const auto& a : t.adjacency(leg.curve)) {
        if (dist.emplace(a.pants, d + 1).second) queue.push_back(a.pants);
      }
    }
  }

  Window w;
  w.center = center;
  w.radius = radius;
  std::set<CurveId> touched;
  for (const auto& [p, d] : dist) {
    w.pants.push_back(p);
    for (const auto& leg : t.pants(p).legs) touched.insert(leg.curve);
  }
  for (const auto& c : touched) {
    const auto atts = t.adjacency(c);
    const auto inside = std::count_if(atts.begin(), atts.end(),
                                      [&](const Attachment& a) { return dist.count(a.pants) > 0; });
    if (atts.size() == 2 && inside == 2)
      w.interior.push_back(c);
    else
      w.frontier.push_back(c);
  }
  return w;
}

}  // namespace teich
