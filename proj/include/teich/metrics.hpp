#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "teich/curves.hpp"
#include "teich/fn_space.hpp"
#include "teich/pants_graph.hpp"

namespace teich {

// Bracket for the length-spectrum distance, d_ls = 1/2 log of the two-sided
// length ratio. upper is +inf when unknown or vacuous.
struct MetricEstimate {
  double lower = 0.0;
  double upper = 0.0;
  bool has_upper = false;
  std::optional<Curve> witness;
  Window window;
  int max_chain = 0;
  int max_wind = 0;

  nlohmann::json to_json() const;
};

// 1/2 |log L_B(gamma) - log L_A(gamma)| on the window charts of a and b.
double ls_ratio(const FNMap& a, const FNMap& b, const Window& w, const Curve& gamma);

MetricEstimate ls_lower(const FNMap& a, const FNMap& b, const Window& w, int max_chain,
                        int max_wind, int jobs = 1);

// sup over twisted curves of -1/2 log(1 - |s_i| / (2 w(l_i))), or +inf once
// some ratio reaches 1. Twists are arclength shifts.
double ls_upper_multitwist(const FNMap& a, const std::map<CurveId, double>& arclength_twists);

// Arclength twists taking a to b when the two differ only in twist, else nullopt.
std::optional<std::map<CurveId, double>> multitwist_between(const FNMap& a, const FNMap& b,
                                                            IndexRange indices);

double qc_lower(const FNMap& a, const FNMap& b, const Window& w, int max_chain, int max_wind,
                int jobs = 1);

enum class Verdict { CertifiedDivergent, NotCertified, Inapplicable };

std::string to_string(Verdict v);

struct TwistStep {
  CurveId curve;
  std::int64_t order = 0;
};

struct DivergenceCertificate {
  std::string sequence;
  int scan = 0;
  std::int64_t sup_order = 0;
  double length_bound = 0.0;
  std::vector<int> order_records;  // steps (1-based) where |t_k| beats every earlier value
  Verdict verdict = Verdict::NotCertified;

  nlohmann::json to_json() const;
};

// Running maximum grows strictly at least three times, once in the second
// half of the scan.
bool unbounded_on_scan(const std::vector<double>& values);

DivergenceCertificate qc_divergence_certificate(const FNMap& base,
                                                const std::vector<TwistStep>& steps,
                                                const std::string& description);

}  // namespace teich
