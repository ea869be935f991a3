#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "teich/error.hpp"
#include "teich/hyp_kernel.hpp"
#include "teich/metrics.hpp"

using namespace teich;

namespace {

constexpr double kPi = 3.14159265358979323846;

FNMap random_map(const DecompositionTemplate& t, const Window& w, std::mt19937_64& rng,
                 double lo, double hi) {
  std::uniform_real_distribution<double> len(lo, hi), tw(-2 * kPi, 2 * kPi);
  FNMap h = FNMap::uniform(t, 1.0);
  for (const auto c : w.curves()) {
    LengthTwist v{len(rng), std::nullopt};
    if (!t.is_boundary(c)) v.twist = tw(rng);
    h = h.with(c, v);
  }
  return h;
}

FNMap twisted(const FNMap& a, const std::map<CurveId, double>& s) {
  FNMap b = a;
  for (const auto& [c, x] : s) b = apply_arclength_twist(b, c, x);
  return b;
}

}  // namespace

TEST(LsLower, IdenticalMapsGiveZero) {
  const auto t = DecompositionTemplate::flute();
  const auto w = window(t, PantsId{2}, 1);
  const auto h = FNMap::uniform(t, 1.0);
  const auto e = ls_lower(h, h, w, 3, 1);
  EXPECT_EQ(e.lower, 0.0);
  EXPECT_TRUE(e.witness.has_value());
  EXPECT_EQ(qc_lower(h, h, w, 3, 1), 0.0);
}

TEST(LsLower, FullTwistOnShortCurve) {
  const auto t = DecompositionTemplate::flute();
  const auto w = window(t, PantsId{1}, 1);
  const auto a = FNMap::uniform(t, 1.0).with_length(CurveId{4}, 0.1);
  const auto b = apply_dehn_twists(a, {{CurveId{4}, 1}});
  const auto e = ls_lower(a, b, w, 3, 2);
  EXPECT_GT(e.lower, 0.0);
  ASSERT_TRUE(e.witness.has_value());
  EXPECT_GT(e.witness->intersection(CurveId{4}), 0);
  const OracleChart oa(t, w, a), ob(t, w, b);
  const double o = 0.5 * std::abs(std::log(ob.curve_length(*e.witness)) -
                                  std::log(oa.curve_length(*e.witness)));
  EXPECT_NEAR(o, e.lower, 1e-9);
}

TEST(LsLower, TemplateMismatch) {
  const auto t = DecompositionTemplate::flute();
  const auto w = window(t, PantsId{0}, 0);
  const auto h = FNMap::uniform(t, 1.0);
  try {
    ls_lower(h, FNMap::uniform(DecompositionTemplate::ladder(), 1.0), w, 3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Usage);
  }
}

TEST(LsLower, JobsDoNotChangeResult) {
  std::mt19937_64 rng(11);
  const auto t = DecompositionTemplate::flute();
  const auto w = window(t, PantsId{3}, 2);
  for (int k = 0; k < 5; ++k) {
    const auto a = random_map(t, w, rng, 0.2, 3.0), b = random_map(t, w, rng, 0.2, 3.0);
    const auto e1 = ls_lower(a, b, w, 3, 1, 1);
    const auto e3 = ls_lower(a, b, w, 3, 1, 3);
    EXPECT_EQ(e1.lower, e3.lower);
    EXPECT_EQ(e1.witness->key(), e3.witness->key());
  }
}

TEST(LsLower, BracketValidity) {
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> sd(-3.0, 3.0);
  std::uniform_int_distribution<int> pick(0, 2);
  int violations = 0, trials = 0;
  for (const auto* name : {"flute", "ladder", "binary-tree"}) {
    const auto t = DecompositionTemplate::builtin(name);
    const auto w = window(t, PantsId{2}, 1);
    for (int k = 0; k < 350; ++k) {
      const auto a = random_map(t, w, rng, 0.05, 4.0);
      std::map<CurveId, double> s;
      for (const auto c : w.interior)
        if (pick(rng) > 0) s[c] = sd(rng);
      const auto b = twisted(a, s);
      const double lo = ls_lower(a, b, w, 3, 1).lower;
      const double hi = ls_upper_multitwist(a, s);
      violations += lo > hi;
      ++trials;
    }
  }
  EXPECT_GE(trials, 1000);
  EXPECT_EQ(violations, 0);
}

TEST(LsLower, SymmetryTriangleAndWitness) {
  std::mt19937_64 rng(5);
  const auto t = DecompositionTemplate::flute();
  const auto w = window(t, PantsId{2}, 1);
  int bad = 0;
  for (int k = 0; k < 1000; ++k) {
    const auto a = random_map(t, w, rng, 0.1, 3.0), b = random_map(t, w, rng, 0.1, 3.0),
               c = random_map(t, w, rng, 0.1, 3.0);
    const auto ab = ls_lower(a, b, w, 3, 1), ba = ls_lower(b, a, w, 3, 1);
    const double bc = ls_lower(b, c, w, 3, 1).lower, ac = ls_lower(a, c, w, 3, 1).lower;
    bad += ab.lower != ba.lower;
    bad += ac > ab.lower + bc + 1e-12;
    if (k % 50 == 0) EXPECT_EQ(ls_ratio(a, b, w, *ab.witness), ab.lower);
  }
  EXPECT_EQ(bad, 0);
}

TEST(LsLower, MonotoneInEnumeration) {
  std::mt19937_64 rng(8);
  const auto t = DecompositionTemplate::ladder();
  const auto w = window(t, PantsId{2}, 2);
  for (int k = 0; k < 5; ++k) {
    const auto a = random_map(t, w, rng, 0.3, 2.0), b = random_map(t, w, rng, 0.3, 2.0);
    double prev = 0.0;
    for (auto [mc, mw] : {std::pair{0, 0}, {0, 1}, {3, 1}, {3, 2}, {4, 2}}) {
      const double v = ls_lower(a, b, w, mc, mw).lower;
      EXPECT_GE(v, prev);
      prev = v;
    }
  }
}

TEST(LsUpper, Examples) {
  const auto t = DecompositionTemplate::flute();
  const auto h = FNMap::uniform(t, 1.0);
  EXPECT_EQ(ls_upper_multitwist(h, {}), 0.0);
  EXPECT_EQ(ls_upper_multitwist(h, {{CurveId{4}, 0.0}}), 0.0);
  const double l = std::exp(-9.0);
  const auto e = h.with_length(CurveId{6}, l);
  const double s = 2 * l;
  const double w = std::asinh(1 / std::sinh(l / 2));
  EXPECT_NEAR(w, 10.386, 1e-3);
  const double expect = -0.5 * std::log1p(-s / (2 * w));
  EXPECT_DOUBLE_EQ(ls_upper_multitwist(e, {{CurveId{6}, s}}), expect);
  EXPECT_NEAR(ls_upper_multitwist(e, {{CurveId{6}, s}}), 5.94e-6, 1e-8);
  EXPECT_TRUE(std::isinf(ls_upper_multitwist(h, {{CurveId{4}, 10.0}})));
  try {
    ls_upper_multitwist(h, {{CurveId{3}, 1.0}});
    FAIL();
  } catch (const Error& err) {
    EXPECT_EQ(err.kind(), ErrorKind::Usage);
  }
}

TEST(LsUpper, DetectsMultitwist) {
  const auto t = DecompositionTemplate::flute();
  const auto a = FNMap::uniform(t, 1.0);
  const auto b = apply_arclength_twist(a, CurveId{4}, 0.5);
  const auto s = multitwist_between(a, b, {0, 20});
  ASSERT_TRUE(s.has_value());
  ASSERT_EQ(s->size(), 1u);
  EXPECT_NEAR(s->at(CurveId{4}), 0.5, 1e-15);
  EXPECT_FALSE(multitwist_between(a, a.with_length(CurveId{4}, 2.0), {0, 20}).has_value());
}

TEST(Certificate, Verdicts) {
  const auto t = DecompositionTemplate::flute();
  FNMap base = FNMap::uniform(t, 1.0);
  std::vector<TwistStep> short_curves, bounded, long_curves;
  FNMap longs = base;
  for (int k = 1; k <= 10; ++k) {
    const CurveId c{2u * k};
    base = base.with_length(c, std::exp(-double(k) * k));
    longs = longs.with_length(c, std::exp(double(k)));
    const auto order = static_cast<std::int64_t>(std::floor(std::log(double(k) * k)));
    short_curves.push_back({c, order});
    bounded.push_back({c, 3});
    long_curves.push_back({c, 1});
  }
  const auto cert = qc_divergence_certificate(base, short_curves, "ex51");
  EXPECT_EQ(cert.verdict, Verdict::CertifiedDivergent);
  EXPECT_EQ(cert.sup_order, 4);
  EXPECT_EQ(cert.order_records, (std::vector<int>{2, 3, 5, 8}));
  EXPECT_EQ(qc_divergence_certificate(base, bounded, "const").verdict, Verdict::NotCertified);
  EXPECT_EQ(qc_divergence_certificate(longs, long_curves, "ex52").verdict, Verdict::Inapplicable);
  EXPECT_EQ(cert.to_json()["verdict"], "certified-divergent");
}

TEST(Estimate, Json) {
  const auto t = DecompositionTemplate::flute();
  const auto w = window(t, PantsId{1}, 1);
  const auto a = FNMap::uniform(t, 1.0);
  auto e = ls_lower(a, apply_arclength_twist(a, CurveId{2}, 0.3), w, 3, 1);
  auto j = e.to_json();
  EXPECT_EQ(j["upper"], "n/a");
  EXPECT_EQ(j["enumeration"]["max_chain"], 3);
  e.has_upper = true;
  EXPECT_EQ(e.to_json()["upper"], "inf");
  e.upper = 0.5;
  EXPECT_EQ(e.to_json()["upper"], 0.5);
}
