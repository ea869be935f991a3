#include "teich/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "teich/error.hpp"
#include "teich/hyp_kernel.hpp"

namespace teich {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kShortest = 1e-4;  // below this the window charts are not trusted
constexpr double kLongest = 50.0;
constexpr int kChain = 3;
constexpr int kWind = 1;

CurveId alpha(std::int64_t n) { return CurveId{2u * static_cast<std::uint64_t>(n)}; }

std::string num(double x) {
  if (std::isnan(x)) return "n/a";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

nlohmann::json jnum(double x) {
  if (std::isfinite(x)) return x;
  return num(x);
}

// Collar half-width from log(length); e^{log_l} may underflow.
double collar_from_log(double log_l) {
  if (log_l > -30.0) return collar_width(std::exp(log_l));
  return std::log(4.0) - log_l;
}

double upper_term(double s, double log_l) {
  const double r = std::abs(s) / (2.0 * collar_from_log(log_l));
  if (!(r < 1.0)) return kInf;
  return -0.5 * std::log1p(-r);
}

// A short curve carrying a twist of order t. When t * 2^-52 >= 1 the order is
// no longer an exact double and the step runs in analytic mode.
struct ShortTwist {
  std::int64_t n = 0;
  double log_eps = 0.0;
  double eps = 0.0;
  double t = 0.0;
  std::int64_t order = 0;
  double s = 0.0;  // arclength t * eps
  bool numeric = true;
};

ShortTwist prop_twist(std::int64_t n) {
  ShortTwist z;
  z.n = n;
  z.log_eps = -static_cast<double>(n * n + n);
  z.eps = std::exp(z.log_eps);
  const double loglog = std::log(-z.log_eps);
  const double log_x = std::log(loglog) - z.log_eps;
  if (log_x < 52.0 * std::log(2.0)) {
    z.order = static_cast<std::int64_t>(std::floor(loglog / z.eps)) + 1;
    z.t = static_cast<double>(z.order);
    z.s = z.t * z.eps;
  } else {
    z.numeric = false;
    z.t = std::exp(log_x);
    // t eps = log|log eps| + O(eps)
    z.s = loglog;
  }
  return z;
}

ShortTwist ex51_twist(std::int64_t k) {
  ShortTwist z;
  z.n = k;
  z.log_eps = -static_cast<double>(k * k);
  z.eps = std::exp(z.log_eps);
  z.order = static_cast<std::int64_t>(std::floor(std::log(static_cast<double>(k * k))));
  z.t = static_cast<double>(z.order);
  z.numeric = z.eps > 0.0;
  z.s = z.numeric ? z.t * z.eps : 0.0;
  return z;
}

FNMap short_base(const std::vector<ShortTwist>& zs) {
  FNMap h = FNMap::uniform(DecompositionTemplate::flute(), 1.0);
  for (const auto& z : zs)
    if (z.eps > 0.0) h = h.with_length(alpha(z.n), z.eps);
  return h;
}

IndexRange flute_range(std::int64_t n_max) {
  return {0, 2u * static_cast<std::uint64_t>(n_max) + 3};
}

bool chartable(const FNMap& h, const Window& w) {
  for (const auto c : w.curves()) {
    const double l = h.length(c);
    if (!(l >= kShortest && l <= kLongest)) return false;
  }
  return true;
}

// Lower bound on the window around curve 2n, or 0 when the window holds
// lengths the charts cannot resolve.
double lower_near(const FNMap& a, const FNMap& b, std::int64_t n, ScenarioRow& row) {
  const auto w = window(a.tmpl(), PantsId{static_cast<std::uint64_t>(n - 1)}, 1);
  if (!chartable(a, w)) {
    row.flags.push_back("lower-skipped");
    return 0.0;
  }
  return ls_lower(a, b, w, kChain, kWind).lower;
}

void check_bracket(ScenarioRow& row) {
  if (row.d_ls_lower > row.d_ls_upper)
    fail(ErrorKind::Inconsistent, "lower bound above upper bound at step " + std::to_string(row.n));
}

std::vector<ShortTwist> prop_twists(int n_max) {
  if (n_max < 1) fail(ErrorKind::Usage, "n_max must be at least 1");
  std::vector<ShortTwist> zs;
  for (std::int64_t n = 1; n <= n_max + 1; ++n) zs.push_back(prop_twist(n));
  return zs;
}

}  // namespace

bool ScenarioRow::has(const std::string& flag) const {
  return std::find(flags.begin(), flags.end(), flag) != flags.end();
}

std::string ScenarioTable::to_csv() const {
  std::string out = "n,eps,t,d_fn,d_ls_lower,d_ls_upper,paper_bound,flags\n";
  for (const auto& r : rows) {
    std::string flags;
    for (const auto& f : r.flags) flags += (flags.empty() ? "" : ";") + f;
    out += std::to_string(r.n) + "," + num(r.eps) + "," + num(r.t) + "," + num(r.d_fn.value) +
           "," + num(r.d_ls_lower) + "," + num(r.d_ls_upper) + "," + num(r.paper_bound) + "," +
           flags + "\n";
  }
  if (certificate) out += "# certificate " + certificate->to_json().dump() + "\n";
  if (!extra.empty()) out += "# extra " + extra.dump() + "\n";
  return out;
}

nlohmann::json ScenarioTable::to_json() const {
  nlohmann::json j;
  j["scenario"] = name;
  j["rows"] = nlohmann::json::array();
  for (const auto& r : rows) {
    j["rows"].push_back({{"n", r.n},
                         {"eps", jnum(r.eps)},
                         {"t", jnum(r.t)},
                         {"d_fn",
                          {{"value", jnum(r.d_fn.value)},
                           {"scanned", {r.d_fn.scanned.first, r.d_fn.scanned.last}},
                           {"exact", r.d_fn.exact}}},
                         {"d_ls_lower", jnum(r.d_ls_lower)},
                         {"d_ls_upper", jnum(r.d_ls_upper)},
                         {"paper_bound", jnum(r.paper_bound)},
                         {"flags", r.flags}});
  }
  j["certificate"] = certificate ? certificate->to_json() : nlohmann::json(nullptr);
  j["extra"] = extra;
  return j;
}

ScenarioTable run_prop_non_inc(int n_max) {
  const auto zs = prop_twists(n_max);
  const FNMap base = short_base(zs);
  const auto range = flute_range(n_max);

  ScenarioTable out;
  out.name = "prop41";
  FNMap h = base;
  std::map<CurveId, double> shifts;
  double analytic_fn = 0.0, analytic_upper = 0.0;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const auto& z = zs[n - 1];
    ScenarioRow row;
    row.n = n;
    row.eps = z.eps;
    row.t = z.t;
    if (z.numeric) {
      h = apply_dehn_twists(h, {{alpha(n), z.order}});
      shifts[alpha(n)] = z.s;
    } else {
      analytic_fn = std::max(analytic_fn, kTwoPi * z.s);
      analytic_upper = std::max(analytic_upper, upper_term(z.s, z.log_eps));
    }
    row.flags.push_back(z.numeric ? "numeric" : "analytic-mode");
    row.d_fn = fn_distance(h, base, range);
    row.d_fn.value = std::max(row.d_fn.value, analytic_fn);
    row.d_ls_upper = std::max(ls_upper_multitwist(base, shifts), analytic_upper);
    row.d_ls_lower = z.numeric ? lower_near(base, h, n, row) : 0.0;
    if (!z.numeric) row.flags.push_back("lower-skipped");
    row.paper_bound = kTwoPi * std::log(-z.log_eps);
    row.flags.push_back(row.d_fn.value >= row.paper_bound ? "bound-ok" : "bound-exceeded");
    check_bracket(row);
    out.rows.push_back(row);
  }
  return out;
}

ScenarioTable run_prop_non_inc2(int n_max) {
  const auto zs = prop_twists(n_max);
  const FNMap base = short_base(zs);
  const auto range = flute_range(n_max);

  ScenarioTable out;
  out.name = "prop42";
  nlohmann::json fn_bound = nlohmann::json::array();
  std::int64_t n0 = n_max + 1;
  for (std::int64_t n = 1; n <= n_max; ++n) {
    const auto& z = zs[n - 1];
    ScenarioRow row;
    row.n = n;
    row.eps = z.eps;
    row.t = z.t;
    row.flags.push_back(z.numeric ? "numeric" : "analytic-mode");
    if (z.numeric) {
      const FNMap x = apply_dehn_twists(base, {{alpha(n), z.order}});
      row.d_fn = fn_distance(x, base, range);
      row.d_ls_upper = ls_upper_multitwist(base, {{alpha(n), z.s}});
      row.d_ls_lower = lower_near(base, x, n, row);
    } else {
      row.d_fn = {kTwoPi * z.s, range, false};
      row.d_ls_upper = upper_term(z.s, z.log_eps);
      row.flags.push_back("lower-skipped");
    }
    const double fb = kTwoPi * std::log(-z.log_eps);
    fn_bound.push_back(fb);
    row.flags.push_back(row.d_fn.value >= fb ? "fn-bound-ok" : "fn-bound-exceeded");
    row.paper_bound = std::log1p(2.0 / static_cast<double>(n));
    const bool ok = row.d_ls_upper <= row.paper_bound;
    row.flags.push_back(ok ? "bound-ok" : "bound-exceeded");
    if (!ok) n0 = n + 1;
    check_bracket(row);
    out.rows.push_back(row);
  }
  out.extra["n0"] = n0;
  out.extra["fn_bound"] = fn_bound;
  return out;
}

ScenarioTable run_example_short_curves(int k_max) {
  if (k_max < 2) fail(ErrorKind::Usage, "k_max must be at least 2");
  std::vector<ShortTwist> zs;
  for (std::int64_t k = 1; k <= k_max + 1; ++k) zs.push_back(ex51_twist(k));
  const FNMap base = short_base(zs);
  const auto range = flute_range(k_max);

  ScenarioTable out;
  out.name = "ex51";
  std::vector<double> single;
  std::vector<TwistStep> steps;
  nlohmann::json cumulative = nlohmann::json::array();
  FNMap h = base;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const auto& z = zs[k - 1];
    ScenarioRow row;
    row.n = k;
    row.eps = z.eps;
    row.t = z.t;
    row.flags.push_back(z.numeric ? "numeric" : "analytic-mode");
    const FNMap x = apply_dehn_twists(base, {{alpha(k), z.order}});
    if (z.numeric) {
      row.d_fn = fn_distance(x, base, range);
      row.d_ls_upper = ls_upper_multitwist(base, {{alpha(k), z.s}});
      row.d_ls_lower = lower_near(base, x, k, row);
    } else {
      row.d_fn = {0.0, range, false};
      row.d_ls_upper = upper_term(z.s, z.log_eps);
      row.flags.push_back("lower-skipped");
    }
    row.paper_bound = z.s / (2.0 * collar_from_log(z.log_eps));
    row.flags.push_back(row.d_ls_upper <= row.paper_bound ? "bound-ok" : "bound-exceeded");
    check_bracket(row);
    single.push_back(row.d_ls_upper);
    steps.push_back({alpha(k), z.order});
    h = apply_dehn_twists(h, {{alpha(k), z.order}});
    cumulative.push_back(fn_distance(h, base, range).value);
    out.rows.push_back(row);
  }

  // cumulative H_m and H_n differ by the twists on curves m+1..n
  const int tail_from = std::max(2, k_max - 2);
  nlohmann::json cauchy = nlohmann::json::array();
  double tail = 0.0;
  for (int m = 1; m <= k_max; ++m) {
    nlohmann::json line = nlohmann::json::array();
    for (int n = 1; n <= k_max; ++n) {
      double v = 0.0;
      for (int j = std::min(m, n) + 1; j <= std::max(m, n); ++j) v = std::max(v, single[j - 1]);
      line.push_back(jnum(v));
      if (m >= tail_from && n >= tail_from) tail = std::max(tail, v);
    }
    cauchy.push_back(line);
  }
  bool decreasing = true;
  for (int k = 2; k < k_max; ++k) decreasing = decreasing && single[k] < single[k - 1];
  out.extra["cauchy"] = cauchy;
  out.extra["cauchy_tail_from"] = tail_from;
  out.extra["cauchy_tail_max"] = tail;
  out.extra["cumulative_d_fn"] = cumulative;
  out.extra["upper_decreasing_from"] = 2;
  out.extra["upper_decreasing"] = decreasing;
  out.certificate = qc_divergence_certificate(base, steps, "eps_k = e^{-k^2}, t_k = floor(log k^2)");
  return out;
}

ScenarioTable run_example_long_curves(int k_max) {
  if (k_max < 1) fail(ErrorKind::Usage, "k_max must be at least 1");
  FNMap base = FNMap::uniform(DecompositionTemplate::flute(), 1.0);
  for (std::int64_t k = 1; k <= k_max + 1; ++k)
    base = base.with_length(alpha(k), std::exp(static_cast<double>(k)));
  const auto range = flute_range(k_max);

  ScenarioTable out;
  out.name = "ex52";
  std::vector<TwistStep> steps;
  for (std::int64_t k = 1; k <= k_max; ++k) {
    const double a = base.length(alpha(k));
    ScenarioRow row;
    row.n = k;
    row.eps = a;
    row.t = 1.0;
    const FNMap x = apply_dehn_twists(base, {{alpha(k), 1}});
    row.d_fn = fn_distance(x, base, range);
    row.d_ls_upper = ls_upper_multitwist(base, {{alpha(k), a}});
    row.d_ls_lower = lower_near(base, x, k, row);
    row.paper_bound = kTwoPi * a;
    row.flags.push_back("unverified-hypothesis");
    const bool ok = std::abs(row.d_fn.value - row.paper_bound) <= 1e-12 * row.paper_bound;
    row.flags.push_back(ok ? "bound-ok" : "bound-exceeded");
    check_bracket(row);
    steps.push_back({alpha(k), 1});
    out.rows.push_back(row);
  }
  out.certificate = qc_divergence_certificate(base, steps, "a_k = e^k, one full twist");
  return out;
}

ScenarioTable run_completeness_sim(const std::string& generator, int n_max, int radius,
                                   double tol) {
  if (n_max < 3) fail(ErrorKind::Usage, "completeness needs n_max >= 3");
  const auto t = DecompositionTemplate::flute();
  FNMap base = FNMap::uniform(t, 1.0);
  Window w;
  std::map<CurveId, double> target;  // closed-form limit twists
  std::vector<FNMap> seq;
  std::vector<double> eps(n_max, 0.0), order(n_max, 0.0);
  std::optional<DivergenceCertificate> cert;

  if (generator == "damped" || generator == "constant") {
    w = window(t, PantsId{static_cast<std::uint64_t>(radius)}, radius);
    for (const auto c : w.interior) target[c] = 1.0 + 0.1 * static_cast<double>(c.value);
    for (int n = 1; n <= n_max; ++n) {
      const double f = generator == "damped" ? 1.0 - std::ldexp(1.0, -n) : 1.0;
      FNMap x = base;
      for (const auto& [c, theta] : target) x = x.with_twist(c, f * theta);
      seq.push_back(x);
      eps[n - 1] = generator == "damped" ? std::ldexp(1.0, -n) : 0.0;
    }
  } else if (generator == "thm53") {
    std::vector<ShortTwist> zs;
    for (std::int64_t k = 1; k <= n_max + 1; ++k) zs.push_back(ex51_twist(k));
    base = short_base(zs);
    w = window(t, PantsId{0}, 1);
    FNMap h = base;
    std::vector<TwistStep> steps;
    for (int n = 1; n <= n_max; ++n) {
      h = apply_dehn_twists(h, {{alpha(n), zs[n - 1].order}});
      seq.push_back(h);
      steps.push_back({alpha(n), zs[n - 1].order});
      eps[n - 1] = zs[n - 1].eps;
      order[n - 1] = zs[n - 1].t;
      target[alpha(n)] = kTwoPi * zs[n - 1].t;
    }
    cert = qc_divergence_certificate(base, steps, "cumulative eps_k = e^{-k^2}, t_k = floor(log k^2)");
  } else {
    fail(ErrorKind::Usage, "unknown generator '" + generator + "' (damped, constant, thm53)");
  }

  std::uint64_t last = 0;
  for (const auto c : w.curves()) last = std::max(last, c.value + 1);
  for (const auto& [c, v] : target) last = std::max(last, c.value + 1);
  const IndexRange range{0, last};
  const auto lim = cauchy_limit(seq, range, tol);

  ScenarioTable out;
  out.name = "complete:" + generator;
  double limit_error = 0.0;
  for (const auto& [c, theta] : target)
    limit_error = std::max(limit_error, std::abs(lim.limit.twist(c) - theta));
  for (int n = 1; n <= n_max; ++n) {
    const FNMap& x = seq[n - 1];
    ScenarioRow row;
    row.n = n;
    row.eps = eps[n - 1];
    row.t = order[n - 1];
    row.d_fn = fn_distance(x, lim.limit, range);
    row.d_ls_lower = chartable(x, w) ? ls_lower(x, lim.limit, w, kChain, kWind).lower : 0.0;
    const auto s = multitwist_between(x, lim.limit, range);
    row.d_ls_upper = s ? ls_upper_multitwist(x, *s) : kInf;
    double residual = 0.0;
    for (const auto c : t.curves_in(range.first, range.last))
      residual = std::max(residual, std::abs(x.twist(c) - lim.limit.twist(c)));
    row.paper_bound = residual;
    row.flags.push_back("residual");
    check_bracket(row);
    out.rows.push_back(row);
  }
  nlohmann::json nc = nlohmann::json::array();
  for (const auto c : lim.non_converged) nc.push_back(c.value);
  out.extra["limit_error"] = limit_error;
  out.extra["non_converged"] = nc;
  out.extra["window"] = w.to_json();
  out.extra["limit"] = lim.limit.to_json();
  out.certificate = cert;
  return out;
}

std::vector<std::string> scenario_names() { return {"prop41", "prop42", "ex51", "ex52", "complete"}; }

ScenarioTable run_scenario(const std::string& name, int n_max) {
  if (name == "prop41") return run_prop_non_inc(n_max);
  if (name == "prop42") return run_prop_non_inc2(n_max);
  if (name == "ex51") return run_example_short_curves(n_max);
  if (name == "ex52") return run_example_long_curves(n_max);
  if (name == "complete") return run_completeness_sim("damped", n_max);
  if (name.rfind("complete:", 0) == 0) return run_completeness_sim(name.substr(9), n_max);
  std::string names;
  for (const auto& s : scenario_names()) names += (names.empty() ? "" : ", ") + s;
  fail(ErrorKind::Usage, "unknown scenario '" + name + "'; valid names: " + names);
}

}  // namespace teich
