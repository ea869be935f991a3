#include <cmath>

#include <gtest/gtest.h>

#include "teich/error.hpp"
#include "teich/scenarios.hpp"

using namespace teich;

TEST(Prop41, Rows) {
  const auto tab = run_prop_non_inc(10);
  ASSERT_EQ(tab.rows.size(), 10u);
  EXPECT_NEAR(tab.rows[0].d_fn.value, 5.1020, 1e-4);
  EXPECT_NEAR(tab.rows[0].paper_bound, 4.3552, 1e-4);
  for (std::size_t k = 0; k < tab.rows.size(); ++k) {
    const auto& r = tab.rows[k];
    EXPECT_GE(r.d_fn.value, r.paper_bound) << r.n;
    EXPECT_TRUE(std::isfinite(r.d_ls_upper));
    EXPECT_LE(r.d_ls_lower, r.d_ls_upper);
    if (k > 0) EXPECT_GT(r.paper_bound, tab.rows[k - 1].paper_bound);
  }
  EXPECT_TRUE(tab.rows[4].has("numeric"));
  EXPECT_TRUE(tab.rows[5].has("analytic-mode"));
  EXPECT_GE(tab.rows.back().paper_bound / tab.rows.front().paper_bound, 2.5);
}

TEST(Prop42, Rows) {
  const auto tab = run_prop_non_inc2(20);
  for (const auto& r : tab.rows) {
    if (r.n >= 3) EXPECT_LE(r.d_ls_upper, std::log1p(2.0 / r.n)) << r.n;
    EXPECT_TRUE(r.has("fn-bound-ok"));
  }
  EXPECT_LT(tab.rows.back().d_ls_upper, 0.05);
  EXPECT_LT(tab.rows.back().d_ls_upper, tab.rows.front().d_ls_upper);
  EXPECT_NEAR(tab.rows[2].d_ls_upper, -0.5 * std::log1p(-0.0933), 2e-3);
}

TEST(Ex51, Table) {
  const auto tab = run_example_short_curves(6);
  EXPECT_EQ(tab.rows[0].t, 0.0);
  EXPECT_EQ(tab.rows[2].t, 2.0);
  EXPECT_NEAR(tab.rows[2].d_ls_upper, 5.94e-6, 1e-8);
  EXPECT_LE(tab.rows[2].d_ls_upper, 2e-5);
  for (std::size_t k = 2; k < tab.rows.size(); ++k)
    EXPECT_LT(tab.rows[k].d_ls_upper, tab.rows[k - 1].d_ls_upper);
  EXPECT_LT(tab.extra["cauchy_tail_max"].get<double>(), 1e-5);
  ASSERT_TRUE(tab.certificate.has_value());
  EXPECT_EQ(tab.certificate->verdict, Verdict::CertifiedDivergent);
  for (const auto& v : tab.extra["cumulative_d_fn"]) EXPECT_TRUE(std::isfinite(v.get<double>()));
}

TEST(Ex52, Table) {
  const auto tab = run_example_long_curves(6);
  for (const auto& r : tab.rows) {
    EXPECT_NEAR(r.d_fn.value, 2 * M_PI * std::exp(double(r.n)), 1e-9 * r.d_fn.value);
    EXPECT_TRUE(std::isinf(r.d_ls_upper));
    EXPECT_TRUE(r.has("unverified-hypothesis"));
  }
  EXPECT_EQ(tab.certificate->verdict, Verdict::Inapplicable);
  EXPECT_NE(tab.to_csv().find(",inf,"), std::string::npos);
}

TEST(Complete, Damped) {
  const auto tab = run_completeness_sim("damped", 20);
  EXPECT_LT(tab.extra["limit_error"].get<double>(), 1e-6);
  EXPECT_LT(tab.rows.back().d_ls_lower, 1e-3);
  for (std::size_t k = 5; k < tab.rows.size(); ++k)
    EXPECT_LE(tab.rows[k].d_ls_lower, tab.rows[k - 1].d_ls_lower);
  EXPECT_LT(tab.rows.back().paper_bound, 1e-5);
}

TEST(Complete, ConstantAndThm53) {
  const auto c = run_completeness_sim("constant", 5);
  for (const auto& r : c.rows) {
    EXPECT_EQ(r.paper_bound, 0.0);
    EXPECT_EQ(r.d_fn.value, 0.0);
  }
  const auto t = run_completeness_sim("thm53", 8);
  ASSERT_TRUE(t.certificate.has_value());
  EXPECT_EQ(t.certificate->verdict, Verdict::CertifiedDivergent);
  EXPECT_LT(t.rows.back().d_fn.value, 1e-9);
}

TEST(Scenario, DispatchAndDeterminism) {
  EXPECT_EQ(run_scenario("prop42", 10).to_csv(), run_scenario("prop42", 10).to_csv());
  EXPECT_EQ(run_scenario("ex51", 6).to_json().dump(), run_scenario("ex51", 6).to_json().dump());
  try {
    run_scenario("nope", 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Usage);
    EXPECT_NE(std::string(e.what()).find("prop41"), std::string::npos);
  }
  const auto csv = run_scenario("prop42", 10).to_csv();
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "n,eps,t,d_fn,d_ls_lower,d_ls_upper,paper_bound,flags");
}
