#include "teich_c.h"

#include <cmath>
#include <cstring>
#include <string>

#include "teich/error.hpp"
#include "teich/hyp_kernel.hpp"
#include "teich/metrics.hpp"
#include "teich/scenarios.hpp"

struct teich_template {
  teich::DecompositionTemplate t;
};

struct teich_surface {
  teich::FNMap h;
};

namespace {

thread_local std::string last_error;

teich_status status_of(teich::ErrorKind k) {
  using teich::ErrorKind;
  switch (k) {
    case ErrorKind::Parse: return TEICH_E_PARSE;
    case ErrorKind::Structure: return TEICH_E_STRUCTURE;
    case ErrorKind::Lookup: return TEICH_E_LOOKUP;
    case ErrorKind::Usage: return TEICH_E_USAGE;
    case ErrorKind::Numeric: return TEICH_E_NUMERIC;
    case ErrorKind::Domain: return TEICH_E_DOMAIN;
    case ErrorKind::NonHyperbolic: return TEICH_E_NON_HYPERBOLIC;
    case ErrorKind::NonCauchy: return TEICH_E_NON_CAUCHY;
    case ErrorKind::Inconsistent: return TEICH_E_INCONSISTENT;
  }
  return TEICH_E_INTERNAL;
}

template <class F>
teich_status guard(F&& f) {
  last_error.clear();
  try {
    return f();
  } catch (const teich::Error& e) {
    last_error = e.what();
    return status_of(e.kind());
  } catch (const std::exception& e) {
    last_error = e.what();
    return TEICH_E_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return TEICH_E_INTERNAL;
  }
}

char* dup(const std::string& s) {
  char* p = new char[s.size() + 1];
  std::memcpy(p, s.c_str(), s.size() + 1);
  return p;
}

void need(const void* p, const char* what) {
  if (!p) teich::fail(teich::ErrorKind::Usage, std::string("null ") + what);
}

std::string fmt(double x) {
  if (std::isinf(x)) return "inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json jnum(double x) {
  if (std::isfinite(x)) return x;
  return fmt(x);
}

std::uint64_t scan_end(const teich::FNMap& a, const teich::FNMap& b, const teich::Window& w) {
  // identical defaults agree beyond the overrides
  std::uint64_t last = a.default_length() == b.default_length() &&
                               a.default_twist() == b.default_twist()
                           ? 1
                           : 1024;
  for (const auto c : w.curves()) last = std::max(last, c.value + 1);
  for (const auto* m : {&a, &b}) {
    for (const auto& [c, v] : m->overrides()) last = std::max(last, c.value + 1);
    for (const auto& [c, n] : m->all_turns()) last = std::max(last, c.value + 1);
  }
  return last;
}

}  // namespace

extern "C" {

const char* teich_last_error(void) { return last_error.c_str(); }

const char* teich_status_name(teich_status s) {
  switch (s) {
    case TEICH_OK: return "ok";
    case TEICH_E_PARSE: return "parse error";
    case TEICH_E_STRUCTURE: return "structure error";
    case TEICH_E_LOOKUP: return "lookup error";
    case TEICH_E_USAGE: return "usage error";
    case TEICH_E_NUMERIC: return "numeric error";
    case TEICH_E_DOMAIN: return "domain error";
    case TEICH_E_NON_HYPERBOLIC: return "non-hyperbolic element";
    case TEICH_E_NON_CAUCHY: return "not Cauchy";
    case TEICH_E_INCONSISTENT: return "inconsistent data";
    case TEICH_E_INVARIANT: return "invariant violated";
    case TEICH_E_INTERNAL: return "internal error";
  }
  return "unknown status";
}

teich_status teich_template_builtin(const char* name, teich_template** out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    *out = new teich_template{teich::DecompositionTemplate::builtin(name)};
    return TEICH_OK;
  });
}

teich_status teich_template_from_json(const char* text, teich_template** out) {
  return guard([&] {
    need(text, "text");
    need(out, "out");
    *out = new teich_template{teich::DecompositionTemplate::from_json_text(text)};
    return TEICH_OK;
  });
}

void teich_template_free(teich_template* t) { delete t; }

teich_status teich_surface_from_json(const teich_template* t, const char* text,
                                     teich_surface** out) {
  return guard([&] {
    need(t, "template");
    need(text, "text");
    need(out, "out");
    *out = new teich_surface{teich::FNMap::from_json_text(t->t, text)};
    return TEICH_OK;
  });
}

void teich_surface_free(teich_surface* s) { delete s; }

void teich_string_free(char* s) { delete[] s; }

teich_status teich_surface_to_json(const teich_surface* s, char** out) {
  return guard([&] {
    need(s, "surface");
    need(out, "out");
    *out = dup(s->h.to_json().dump(2));
    return TEICH_OK;
  });
}

teich_status teich_surface_validate(const teich_surface* s, uint64_t shiga_n, uint64_t center,
                                    int radius, char** report_json) {
  return guard([&] {
    need(s, "surface");
    need(report_json, "out");
    const auto& h = s->h;
    const auto sh = teich::shiga_check(h, shiga_n);
    const auto w = teich::window(h.tmpl(), teich::PantsId{center}, radius);
    const teich::HolonomyChart chart(h.tmpl(), w, h);
    double worst = 0.0, relation = 0.0;
    for (const auto& c : chart.checks()) {
      const auto p = h.tmpl().pants(c.pants);
      for (int k = 0; k < 3; ++k) {
        const double ref = 2.0 * std::cosh(h.length(p.legs[k].curve) / 2);
        worst = std::max(worst, c.boundary_trace_error[k] / ref);
      }
      relation = std::max(relation, c.relation_error);
    }
    const bool ok = worst <= 1e-9;
    nlohmann::json r;
    r["shiga"] = {{"holds_up_to", sh.holds_up_to},
                  {"witness_min", sh.witness_min},
                  {"witness_max", sh.witness_max},
                  {"m_estimate", jnum(sh.m_estimate)},
                  {"m_half", jnum(sh.m_half)},
                  {"diverging", sh.diverging()}};
    r["holonomy"] = {{"window", w.to_json()},
                     {"max_boundary_trace_error", worst},
                     {"max_relation_error", relation},
                     {"ok", ok}};
    *report_json = dup(r.dump(2));
    if (!ok) {
      last_error = "boundary trace mismatch " + fmt(worst);
      return TEICH_E_INVARIANT;
    }
    return TEICH_OK;
  });
}

teich_status teich_fn_distance(const teich_surface* a, const teich_surface* b, uint64_t first,
                               uint64_t last, double* out) {
  return guard([&] {
    need(a, "surface");
    need(b, "surface");
    need(out, "out");
    *out = teich::fn_distance(a->h, b->h, {first, last}).value;
    return TEICH_OK;
  });
}

teich_status teich_metric_report(const teich_surface* a, const teich_surface* b, uint64_t center,
                                 int radius, int max_chain, int max_wind, int jobs,
                                 const char* format, char** out) {
  return guard([&] {
    need(a, "surface");
    need(b, "surface");
    need(out, "out");
    const std::string f = format ? format : "json";
    if (f != "json" && f != "csv") teich::fail(teich::ErrorKind::Usage, "format must be json or csv");
    if (max_chain < 0 || max_wind < 0) teich::fail(teich::ErrorKind::Usage, "enumeration bounds must be >= 0");
    const auto w = teich::window(a->h.tmpl(), teich::PantsId{center}, radius);
    const teich::IndexRange range{0, scan_end(a->h, b->h, w)};
    const auto fn = teich::fn_distance(a->h, b->h, range);
    auto est = teich::ls_lower(a->h, b->h, w, max_chain, max_wind, jobs);
    const auto twists = teich::multitwist_between(a->h, b->h, range);
    if (twists) {
      est.has_upper = true;
      est.upper = teich::ls_upper_multitwist(a->h, *twists);
    }
    const double qc = est.lower;
    if (est.has_upper && est.lower > est.upper) {
      last_error = "ls bracket inverted: lower " + fmt(est.lower) + " > upper " + fmt(est.upper);
      return TEICH_E_INVARIANT;
    }
    if (f == "json") {
      nlohmann::json r;
      r["fn_distance"] = {{"value", fn.value},
                          {"scanned", {fn.scanned.first, fn.scanned.last}},
                          {"exact", fn.exact}};
      r["ls"] = est.to_json();
      r["qc_lower"] = qc;
      r["multitwist"] = twists.has_value();
      *out = dup(r.dump(2) + "\n");
    } else {
      std::string s = "quantity,value\n";
      s += "fn_distance," + fmt(fn.value) + "\n";
      s += "ls_lower," + fmt(est.lower) + "\n";
      s += "ls_upper," + (est.has_upper ? fmt(est.upper) : std::string("n/a")) + "\n";
      s += "qc_lower," + fmt(qc) + "\n";
      s += "witness," + (est.witness ? est.witness->key() : std::string()) + "\n";
      *out = dup(s);
    }
    return TEICH_OK;
  });
}

teich_status teich_scenario_run(const char* name, int n_max, const char* format, char** out) {
  return guard([&] {
    need(name, "name");
    need(out, "out");
    const std::string f = format ? format : "csv";
    if (f != "json" && f != "csv") teich::fail(teich::ErrorKind::Usage, "format must be json or csv");
    const auto tab = teich::run_scenario(name, n_max);
    *out = dup(f == "csv" ? tab.to_csv() : tab.to_json().dump(2) + "\n");
    return TEICH_OK;
  });
}

teich_status teich_collar_width(double length, double* out) {
  return guard([&] {
    need(out, "out");
    *out = teich::collar_width(length);
    return TEICH_OK;
  });
}

}  // extern "C"
