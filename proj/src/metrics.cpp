#include "teich/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <thread>

#include "teich/error.hpp"
#include "teich/hyp_kernel.hpp"

namespace teich {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Best {
  double value = -1.0;
  std::size_t index = 0;
};

void check_pair(const FNMap& a, const FNMap& b) {
  if (!(a.tmpl() == b.tmpl())) fail(ErrorKind::Usage, "FN maps live on different templates");
}

}  // namespace

nlohmann::json MetricEstimate::to_json() const {
  nlohmann::json j;
  j["lower"] = lower;
  if (!has_upper)
    j["upper"] = "n/a";
  else if (std::isinf(upper))
    j["upper"] = "inf";
  else
    j["upper"] = upper;
  j["witness"] = witness ? witness->to_json() : nlohmann::json(nullptr);
  j["window"] = window.to_json();
  j["enumeration"] = {{"max_chain", max_chain}, {"max_wind", max_wind}};
  return j;
}

double ls_ratio(const FNMap& a, const FNMap& b, const Window& w, const Curve& gamma) {
  check_pair(a, b);
  const HolonomyChart ca(a.tmpl(), w, a), cb(b.tmpl(), w, b);
  return 0.5 * std::abs(std::log(cb.curve_length(gamma)) - std::log(ca.curve_length(gamma)));
}

MetricEstimate ls_lower(const FNMap& a, const FNMap& b, const Window& w, int max_chain,
                        int max_wind, int jobs) {
  check_pair(a, b);
  const auto candidates = enumerate_candidates(a.tmpl(), w, max_chain, max_wind);
  if (candidates.empty())
    fail(ErrorKind::Usage, "window too small: no candidate curves to compare");
  const HolonomyChart ca(a.tmpl(), w, a), cb(b.tmpl(), w, b);

  auto scan = [&](std::size_t first, std::size_t last, Best& best) {
    for (std::size_t k = first; k < last; ++k) {
      const double v = 0.5 * std::abs(std::log(cb.curve_length(candidates[k])) -
                                       std::log(ca.curve_length(candidates[k])));
      if (v > best.value) best = {v, k};
    }
  };

  const std::size_t n = candidates.size();
  const std::size_t parts = std::clamp<std::size_t>(jobs < 1 ? 1 : jobs, 1, n);
  std::vector<Best> partial(parts);
  if (parts == 1) {
    scan(0, n, partial[0]);
  } else {
    std::vector<std::thread> pool;
    std::vector<std::exception_ptr> errors(parts);
    for (std::size_t p = 0; p < parts; ++p) {
      pool.emplace_back([&, p] {
        try {
          scan(n * p / parts, n * (p + 1) / parts, partial[p]);
        } catch (...) {
          errors[p] = std::current_exception();
        }
      });
    }
    for (auto& t : pool) t.join();
    for (auto& e : errors)
      if (e) std::rethrow_exception(e);
  }
  // chunks are in key order, so a strict comparison keeps the serial tie-break
  Best best;
  for (const auto& p : partial)
    if (p.value > best.value) best = p;

  MetricEstimate out;
  out.lower = best.value;
  out.upper = kInf;
  out.witness = candidates[best.index];
  out.window = w;
  out.max_chain = max_chain;
  out.max_wind = max_wind;
  return out;
}

double ls_upper_multitwist(const FNMap& a, const std::map<CurveId, double>& arclength_twists) {
  double sup = 0.0;
  for (const auto& [c, s] : arclength_twists) {
    if (a.tmpl().is_boundary(c))
      fail(ErrorKind::Usage, "curve " + std::to_string(c.value) + " is boundary and has no twist");
    if (s == 0.0) continue;
    const double r = std::abs(s) / (2.0 * collar_width(a.length(c)));
    if (!(r < 1.0)) return kInf;
    sup = std::max(sup, -0.5 * std::log1p(-r));
  }
  return sup;
}

std::optional<std::map<CurveId, double>> multitwist_between(const FNMap& a, const FNMap& b,
                                                            IndexRange indices) {
  check_pair(a, b);
  if (!(a.default_length() == b.default_length())) return std::nullopt;
  std::map<CurveId, double> out;
  for (const auto c : a.tmpl().curves_in(indices.first, indices.last)) {
    if (a.length(c) != b.length(c)) return std::nullopt;
    if (a.tmpl().is_boundary(c)) continue;
    const double s = b.arclength_twist(c) - a.arclength_twist(c);
    if (s != 0.0) out[c] = s;
  }
  return out;
}

double qc_lower(const FNMap& a, const FNMap& b, const Window& w, int max_chain, int max_wind,
                int jobs) {
  return ls_lower(a, b, w, max_chain, max_wind, jobs).lower;
}

std::string to_string(Verdict v) {
  switch (v) {
    case Verdict::CertifiedDivergent:
      return "certified-divergent";
    case Verdict::NotCertified:
      return "not-certified";
    case Verdict::Inapplicable:
      return "inapplicable";
  }
  return "?";
}

nlohmann::json DivergenceCertificate::to_json() const {
  return {{"sequence", sequence},
          {"scan", scan},
          {"sup_order", sup_order},
          {"length_bound", length_bound},
          {"order_records", order_records},
          {"verdict", to_string(verdict)}};
}

namespace {

std::vector<int> records(const std::vector<double>& values) {
  std::vector<int> out;
  for (std::size_t k = 1; k < values.size(); ++k) {
    const double prior = *std::max_element(values.begin(), values.begin() + k);
    if (values[k] > prior) out.push_back(static_cast<int>(k) + 1);
  }
  return out;
}

}  // namespace

bool unbounded_on_scan(const std::vector<double>& values) {
  const auto r = records(values);
  const int half = static_cast<int>(values.size()) / 2;
  return r.size() >= 3 && std::any_of(r.begin(), r.end(), [&](int k) { return k > half; });
}

DivergenceCertificate qc_divergence_certificate(const FNMap& base,
                                                const std::vector<TwistStep>& steps,
                                                const std::string& description) {
  DivergenceCertificate out;
  out.sequence = description;
  out.scan = static_cast<int>(steps.size());
  std::vector<double> lengths, orders;
  for (const auto& s : steps) {
    lengths.push_back(base.length(s.curve));
    orders.push_back(std::abs(static_cast<double>(s.order)));
    out.sup_order = std::max<std::int64_t>(out.sup_order, std::abs(s.order));
  }
  out.length_bound = lengths.empty() ? 0.0 : *std::max_element(lengths.begin(), lengths.end());
  out.order_records = records(orders);
  if (unbounded_on_scan(lengths))
    out.verdict = Verdict::Inapplicable;
  else if (unbounded_on_scan(orders))
    out.verdict = Verdict::CertifiedDivergent;
  else
    out.verdict = Verdict::NotCertified;
  return out;
}

}  // namespace teich
