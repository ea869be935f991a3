#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "teich/fn_space.hpp"
#include "teich/metrics.hpp"
#include "teich/pants_graph.hpp"

namespace teich {

struct ScenarioRow {
  std::int64_t n = 0;
  double eps = 0.0;
  double t = 0.0;  // twist order; large orders are only known approximately
  FNDistanceEstimate d_fn;
  double d_ls_lower = 0.0;
  double d_ls_upper = 0.0;
  double paper_bound = 0.0;
  std::vector<std::string> flags;

  bool has(const std::string& flag) const;
};

struct ScenarioTable {
  std::string name;
  std::vector<ScenarioRow> rows;
  std::optional<DivergenceCertificate> certificate;
  nlohmann::json extra = nlohmann::json::object();

  std::string to_csv() const;
  nlohmann::json to_json() const;
};

// Flute with curve 2n (between pants n-1 and n) of length eps_n = e^{-(n^2+n)},
// cumulative twists of order t_n = floor(log|log eps_n| / eps_n) + 1.
ScenarioTable run_prop_non_inc(int n_max);
// Same base, single twist of order t_n on curve 2n.
ScenarioTable run_prop_non_inc2(int n_max);
// eps_k = e^{-k^2}, t_k = floor(log k^2), single twists plus the cumulative
// sequence's Cauchy table and divergence certificate.
ScenarioTable run_example_short_curves(int k_max);
// a_k = e^k, one full twist on curve 2k.
ScenarioTable run_example_long_curves(int k_max);

// generator: "damped", "constant" or "thm53".
ScenarioTable run_completeness_sim(const std::string& generator, int n_max, int radius = 3,
                                   double tol = 1e-9);

std::vector<std::string> scenario_names();
// Dispatch by CLI name: prop41, prop42, ex51, ex52, complete.
ScenarioTable run_scenario(const std::string& name, int n_max);

}  // namespace teich
