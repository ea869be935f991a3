#include <cmath>
#include <string>

#include <gtest/gtest.h>

#include "teich_c.h"

namespace {

std::string take(char* s) {
  std::string out = s ? s : "";
  teich_string_free(s);
  return out;
}

}  // namespace

TEST(CApi, TemplatesAndErrors) {
  teich_template* t = nullptr;
  EXPECT_EQ(teich_template_builtin("flute", &t), TEICH_OK);
  EXPECT_STREQ(teich_last_error(), "");
  teich_template_free(t);
  t = nullptr;
  EXPECT_EQ(teich_template_builtin("torus", &t), TEICH_E_USAGE);
  EXPECT_NE(std::string(teich_last_error()), "");
  EXPECT_EQ(t, nullptr);
  EXPECT_EQ(teich_template_from_json("{oops", &t), TEICH_E_PARSE);
  EXPECT_EQ(teich_template_builtin(nullptr, &t), TEICH_E_USAGE);
}

TEST(CApi, SurfaceRoundTripAndValidate) {
  teich_template* t = nullptr;
  ASSERT_EQ(teich_template_builtin("flute", &t), TEICH_OK);
  teich_surface* s = nullptr;
  ASSERT_EQ(teich_surface_from_json(t, R"({"overrides":{"4":{"l":0.5,"theta":1.0}}})", &s), TEICH_OK);
  char* text = nullptr;
  ASSERT_EQ(teich_surface_to_json(s, &text), TEICH_OK);
  const auto json = take(text);
  EXPECT_NE(json.find("\"4\""), std::string::npos);
  teich_surface* back = nullptr;
  ASSERT_EQ(teich_surface_from_json(t, json.c_str(), &back), TEICH_OK);
  double d = -1;
  ASSERT_EQ(teich_fn_distance(s, back, 0, 100, &d), TEICH_OK);
  EXPECT_EQ(d, 0.0);
  char* report = nullptr;
  ASSERT_EQ(teich_surface_validate(s, 32, 2, 2, &report), TEICH_OK);
  EXPECT_NE(take(report).find("\"ok\": true"), std::string::npos);
  EXPECT_EQ(teich_surface_from_json(t, "[1,", &back), TEICH_E_PARSE);
  teich_surface_free(s);
  teich_surface_free(back);
  teich_template_free(t);
}

TEST(CApi, MetricReport) {
  teich_template* t = nullptr;
  ASSERT_EQ(teich_template_builtin("flute", &t), TEICH_OK);
  teich_surface *a = nullptr, *b = nullptr, *c = nullptr;
  ASSERT_EQ(teich_surface_from_json(t, "{}", &a), TEICH_OK);
  ASSERT_EQ(teich_surface_from_json(t, R"({"overrides":{"4":{"l":1.0,"theta":2.0}}})", &b), TEICH_OK);
  ASSERT_EQ(teich_surface_from_json(t, R"({"overrides":{"4":{"l":2.0}}})", &c), TEICH_OK);
  char* out = nullptr;
  ASSERT_EQ(teich_metric_report(a, a, 1, 1, 3, 1, 1, "csv", &out), TEICH_OK);
  const auto zero = take(out);
  EXPECT_NE(zero.find("ls_lower,0\n"), std::string::npos);
  EXPECT_NE(zero.find("ls_upper,0\n"), std::string::npos);
  ASSERT_EQ(teich_metric_report(a, b, 1, 1, 3, 1, 2, "json", &out), TEICH_OK);
  EXPECT_NE(take(out).find("\"multitwist\": true"), std::string::npos);
  ASSERT_EQ(teich_metric_report(a, c, 1, 1, 3, 1, 1, "csv", &out), TEICH_OK);
  EXPECT_NE(take(out).find("ls_upper,n/a"), std::string::npos);
  EXPECT_EQ(teich_metric_report(a, c, 1, 1, 3, 1, 1, "xml", &out), TEICH_E_USAGE);
  teich_surface_free(a);
  teich_surface_free(b);
  teich_surface_free(c);
  teich_template_free(t);
}

TEST(CApi, ScenarioAndCollar) {
  char* out = nullptr;
  ASSERT_EQ(teich_scenario_run("ex51", 6, "csv", &out), TEICH_OK);
  EXPECT_NE(take(out).find("certified-divergent"), std::string::npos);
  EXPECT_EQ(teich_scenario_run("bogus", 6, "csv", &out), TEICH_E_USAGE);
  EXPECT_NE(std::string(teich_last_error()).find("prop41"), std::string::npos);
  double w = 0;
  ASSERT_EQ(teich_collar_width(2 * std::asinh(1.0), &w), TEICH_OK);
  EXPECT_NEAR(w, std::asinh(1.0), 1e-12);
  EXPECT_EQ(teich_collar_width(-1.0, &w), TEICH_E_DOMAIN);
}
