#include <cmath>
#include <random>

#include <gtest/gtest.h>

#include "teich/curves.hpp"
#include "teich/error.hpp"
#include "teich/hyp_kernel.hpp"

using namespace teich;

namespace {

constexpr double kPi = 3.14159265358979323846;

void expect_pm_identity(const Isometry2& m, double tol) {
  const double sign = m.a > 0 ? 1.0 : -1.0;
  EXPECT_NEAR(m.a, sign, tol);
  EXPECT_NEAR(m.b, 0.0, tol);
  EXPECT_NEAR(m.c, 0.0, tol);
  EXPECT_NEAR(m.d, sign, tol);
}

FNMap random_map(const DecompositionTemplate& t, const Window& w, std::mt19937_64& rng,
                 double lo = 0.2, double hi = 3.0) {
  std::uniform_real_distribution<double> len(lo, hi), tw(-2 * kPi, 2 * kPi);
  FNMap h = FNMap::uniform(t, 1.0);
  for (const auto c : w.curves()) {
    LengthTwist v{len(rng), std::nullopt};
    if (!t.is_boundary(c)) v.twist = tw(rng);
    h = h.with(c, v);
  }
  return h;
}

double oracle_tol(double l) { return 1e-9 * std::max(1.0, l); }

}  // namespace

TEST(Collar, Examples) {
  EXPECT_NEAR(collar_width(2 * std::asinh(1.0)), std::asinh(1.0), 1e-14);
  EXPECT_NEAR(collar_width(0.01), std::asinh(1.0 / std::sinh(0.005)), 1e-12);
  EXPECT_NEAR(collar_width(0.01), 5.99147, 1e-5);
  EXPECT_THROW(collar_width(0.0), Error);
  EXPECT_THROW(collar_width(-1.0), Error);
}

TEST(Collar, Monotone) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(1e-6, 20.0);
  for (int k = 0; k < 1000; ++k) {
    double a = u(rng), b = u(rng);
    if (a == b) continue;
    if (a > b) std::swap(a, b);
    EXPECT_GT(collar_width(a), collar_width(b));
  }
}

TEST(TraceLength, Examples) {
  EXPECT_NEAR(length_from_trace(2 * std::cosh(0.5)), 1.0, 1e-12);
  EXPECT_NEAR(length_from_trace(-2 * std::cosh(0.5)), 1.0, 1e-12);
  EXPECT_NEAR(length_from_trace(2 * std::cosh(5.0)), 10.0, 1e-12);
  try {
    length_from_trace(2.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::NonHyperbolic);
  }
  EXPECT_NEAR(trace_length(Isometry2::translation(3.0)), 3.0, 1e-12);
}

TEST(Isometry, ProductsStayUnimodular) {
  Isometry2 m;
  for (int k = 0; k < 5000; ++k)
    m = m * Isometry2::translation(0.3) * Isometry2::rotation(1.1);
  EXPECT_LT(std::abs(m.det() - 1.0), 1e-12);
  EXPECT_TRUE(m.is_finite());
}

TEST(Hexagon, Closes) {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(0.05, 6.0);
  const double q = kPi / 2;
  using M = Isometry2;
  for (int k = 0; k < 1000; ++k) {
    const double h0 = u(rng) / 2, h1 = u(rng) / 2, h2 = u(rng) / 2;
    const double d01 = seam_length(h0, h1, h2), d12 = seam_length(h1, h2, h0),
                 d20 = seam_length(h2, h0, h1);
    const M walk = M::translation(h0) * M::rotation(q) * M::translation(d01) * M::rotation(q) *
                   M::translation(h1) * M::rotation(q) * M::translation(d12) * M::rotation(q) *
                   M::translation(h2) * M::rotation(q) * M::translation(d20) * M::rotation(q);
    expect_pm_identity(walk, 1e-8);
  }
}

TEST(Holonomy, Genus2BoundaryTraces) {
  const auto t = DecompositionTemplate::builtin("genus2");
  const auto w = window(t, PantsId{0}, 1);
  const HolonomyChart chart(t, w, FNMap::uniform(t, 1.0));
  EXPECT_LT(chart.max_check_error(), 1e-9);
  for (const auto c : w.curves()) {
    const double tr = std::abs(chart.evaluate(Curve::pants_curve(t, c).word()).trace());
    EXPECT_NEAR(tr, 2 * std::cosh(0.5), 1e-9);
    EXPECT_NEAR(chart.curve_length(Curve::pants_curve(t, c)), 1.0, 1e-9);
  }
}

TEST(Holonomy, RandomChecksPass) {
  std::mt19937_64 rng(3);
  for (const auto* name : {"flute", "ladder", "binary-tree", "genus2"}) {
    const auto t = DecompositionTemplate::builtin(name);
    const auto w = window(t, PantsId{0}, 2);
    for (int k = 0; k < 50; ++k) {
      const HolonomyChart chart(t, w, random_map(t, w, rng, 0.01, 8.0));
      EXPECT_LT(chart.max_check_error(), 1e-9) << name;
    }
  }
}

TEST(Holonomy, FluteExpNegWindow) {
  const auto t = DecompositionTemplate::flute();
  const auto w = window(t, PantsId{3}, 2);
  const FNMap h(t, Generator::exp_neg(1.0), Generator::constant(0.0));
  const HolonomyChart chart(t, w, h);
  EXPECT_LT(chart.max_check_error(), 1e-9);
}

TEST(Holonomy, OneHoledTorusDualIsSeam) {
  // Handle pants of the ladder is glued to itself along curve 1.
  const auto t = DecompositionTemplate::ladder();
  const auto w = window(t, PantsId{1}, 0);
  ASSERT_TRUE(w.is_interior(CurveId{1}));
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.1, 5.0);
  for (int k = 0; k < 200; ++k) {
    const double a = u(rng), b = u(rng);
    const auto h = FNMap::uniform(t, 1.0).with_length(CurveId{1}, a).with_length(CurveId{2}, b);
    const double expect = seam_length(a / 2, a / 2, b / 2);
    EXPECT_NEAR(curve_length(t, w, h, dual_curve(t, CurveId{1})), expect, 1e-9 * std::max(1.0, expect));
  }
}

TEST(Holonomy, XPieceDualClosedForm) {
  const auto t = DecompositionTemplate::flute();
  const auto w = window(t, PantsId{0}, 1);
  const CurveId i{2};
  ASSERT_TRUE(w.is_interior(i));
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> u(0.1, 4.0);
  for (int k = 0; k < 300; ++k) {
    FNMap h = FNMap::uniform(t, 1.0);
    for (const auto c : w.curves()) h = h.with_length(c, u(rng));
    // beta_2 turns around leg 2 of pants 0 (curve 1) and leg 1 of pants 1 (curve 4).
    const double l0 = h.length(CurveId{0}), l1 = h.length(CurveId{2}), u0 = h.length(CurveId{1});
    const double v0 = h.length(CurveId{4}), v2 = h.length(CurveId{3});
    const double dp = seam_length(l1 / 2, u0 / 2, l0 / 2);
    const double dq = seam_length(l1 / 2, v0 / 2, v2 / 2);
    const double ch = std::cosh(dp + dq) * std::sinh(u0 / 2) * std::sinh(v0 / 2) -
                      std::cosh(u0 / 2) * std::cosh(v0 / 2);
    const double expect = 2 * std::acosh(ch);
    EXPECT_NEAR(curve_length(t, w, h, dual_curve(t, i)), expect, 1e-9 * std::max(1.0, expect));
  }
}

TEST(Holonomy, TwistSymmetry) {
  std::mt19937_64 rng(13);
  std::uniform_real_distribution<double> th(-3 * kPi, 3 * kPi);
  for (const auto* name : {"flute", "ladder", "genus2"}) {
    const auto t = DecompositionTemplate::builtin(name);
    const auto w = window(t, PantsId{0}, 1);
    for (const auto i : w.interior) {
      for (int k = 0; k < 30; ++k) {
        FNMap h = random_map(t, w, rng);
        for (const auto c : w.interior) h = h.with_twist(c, 0.0);
        const double x = th(rng);
        const double lp = curve_length(t, w, h.with_twist(i, x), dual_curve(t, i));
        const double lm = curve_length(t, w, h.with_twist(i, -x), dual_curve(t, i));
        EXPECT_NEAR(lp, lm, 1e-9 * std::max(1.0, lp)) << name << " curve " << i.value;
      }
    }
  }
}

TEST(Holonomy, SupportsOnlyWindowCurves) {
  const auto t = DecompositionTemplate::flute();
  const auto w = window(t, PantsId{0}, 0);
  const HolonomyChart chart(t, w, FNMap::uniform(t, 1.0));
  try {
    chart.curve_length(dual_curve(t, CurveId{2}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Usage);
    EXPECT_NE(std::string(e.what()).find("larger radius"), std::string::npos);
  }
}

TEST(Oracle, SymmetricTwoPants) {
  const auto t = DecompositionTemplate::builtin("genus2");
  const auto w = window(t, PantsId{0}, 1);
  const auto h = FNMap::uniform(t, 1.0);
  const HolonomyChart primary(t, w, h);
  const OracleChart oracle = holonomy_oracle(t, w, h);
  for (const auto& c : enumerate_candidates(t, w, 2, 2)) {
    const double a = primary.curve_length(c), b = oracle.curve_length(c);
    EXPECT_NEAR(a, b, oracle_tol(a)) << c.key();
  }
}

TEST(Oracle, TwistedByPi) {
  const auto t = DecompositionTemplate::builtin("genus2");
  const auto w = window(t, PantsId{0}, 1);
  const auto h = FNMap::uniform(t, 1.0).with_twist(CurveId{1}, kPi);
  const HolonomyChart primary(t, w, h);
  const OracleChart oracle(t, w, h);
  for (std::int64_t k = -2; k <= 2; ++k) {
    const auto c = twisted_dual(t, CurveId{1}, k);
    EXPECT_NEAR(primary.curve_length(c), oracle.curve_length(c), oracle_tol(primary.curve_length(c)));
  }
}

TEST(Oracle, RandomWindowsAgree) {
  std::mt19937_64 rng(17);
  for (const auto* name : {"flute", "ladder", "binary-tree", "genus2"}) {
    const auto t = DecompositionTemplate::builtin(name);
    const auto w = window(t, PantsId{0}, 2);
    const auto cands = enumerate_candidates(t, w, 3, 1);
    for (int k = 0; k < 10; ++k) {
      const auto h = random_map(t, w, rng);
      const HolonomyChart primary(t, w, h);
      const OracleChart oracle(t, w, h);
      for (const auto& c : cands) {
        const double a = primary.curve_length(c), b = oracle.curve_length(c);
        EXPECT_NEAR(a, b, oracle_tol(a)) << name << " " << c.key();
      }
    }
  }
}

TEST(Oracle, ExtremeLengths) {
  const auto t = DecompositionTemplate::flute();
  const auto w = window(t, PantsId{1}, 1);
  FNMap h = FNMap::uniform(t, 1.0);
  int n = 0;
  for (const auto c : w.curves()) h = h.with_length(c, (n++ % 2) ? 10.0 : 1e-4);
  const HolonomyChart primary(t, w, h);
  const OracleChart oracle(t, w, h);
  for (const auto& c : enumerate_candidates(t, w, 3, 2)) {
    const double a = primary.curve_length(c), b = oracle.curve_length(c);
    EXPECT_NEAR(a, b, 1e-7 * std::max(1.0, a)) << c.key();
  }
}

TEST(Holonomy, FullTwistsAreMappingClasses) {
  const auto t = DecompositionTemplate::builtin("genus2");
  const auto w = window(t, PantsId{0}, 1);
  const auto h0 = FNMap::uniform(t, 1.0);
  const auto h1 = FNMap::uniform(t, 1.0, 2 * kPi);
  for (const auto& c : enumerate_candidates(t, w, 2, 2)) {
    Curve relabeled = c;
    for (const auto i : w.interior) relabeled = dehn_twist_curve(relabeled, i, -1);
    const double a = curve_length(t, w, h1, c), b = curve_length(t, w, h0, relabeled);
    EXPECT_NEAR(a, b, 1e-9 * std::max(1.0, a)) << c.key();
  }
}

TEST(Holonomy, DumpIsRowMajor) {
  const auto t = DecompositionTemplate::builtin("genus2");
  const HolonomyChart chart(t, window(t, PantsId{0}, 1), FNMap::uniform(t, 1.0));
  const auto d = chart.dump();
  ASSERT_TRUE(d.is_array());
  ASSERT_FALSE(d.empty());
  EXPECT_EQ(d[0]["matrix"].size(), 4u);
}

TEST(Holonomy, Deterministic) {
  const auto t = DecompositionTemplate::flute();
  const auto w = window(t, PantsId{2}, 2);
  const FNMap h(t, Generator::exp_neg(0.5), Generator::constant(0.3));
  EXPECT_EQ(HolonomyChart(t, w, h).dump(), HolonomyChart(t, w, h).dump());
}
