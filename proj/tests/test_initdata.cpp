#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>

#include "oracles.hpp"

using namespace wavetails;

namespace {
double closed_form_h(double z) { return z * z * std::exp(-z * z); }
}  // namespace

TEST(BuildH, GaussianDataGivesClosedFormProfile) {
  const auto d = data_family::paper_gaussian();
  EXPECT_NEAR(d.R, 5.698, 0.01);
  const auto h = build_h(d);
  double worst = 0;
  for (double z = -d.R; z <= d.R; z += 0.0137) worst = std::max(worst, std::abs(h(z) - closed_form_h(z)));
  EXPECT_LT(worst, 1e-6);
}

TEST(BuildH, ZeroDataGivesZero) {
  const auto h = build_h(data_family::smooth_bump(2.0, 0.0, 0.0));
  for (double z = -2; z <= 2; z += 0.1) EXPECT_EQ(h(z), 0.0);
}

TEST(BuildH, PureDisplacementIsOdd) {
  const auto d = data_family::smooth_bump(2.0, 1.0, 0.0);
  const auto h = build_h(d);
  for (double z = -1.95; z < 2.0; z += 0.05) {
    EXPECT_NEAR(h(z), -0.5 * z * d.f(std::abs(z)), 1e-8) << z;
    EXPECT_NEAR(h(z), -h(-z), 1e-12);
  }
}

TEST(BuildH, SupportViolationWhenRadiusTooSmall) {
  auto d = data_family::smooth_bump(2.0, 1.0, 0.0);
  d.R = 1.0;
  try {
    build_h(d);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::SupportViolation);
  }
}

TEST(BuildH, OddIntegrandVanishes) {
  // int_{-R}^{R} r g(|r|) dr on the symmetric Simpson grid.
  const auto d = data_family::paper_gaussian();
  const int n = 2401;
  const double dz = 2 * d.R / (n - 1);
  std::vector<double> y(n);
  for (int j = 0; j < n; ++j) {
    const double z = -d.R + dz * j;
    y[j] = z * d.g(std::abs(z));
  }
  EXPECT_LT(std::abs(quad::simpson(y, dz)), 1e-10);
}

TEST(FreeSolution, Examples) {
  const auto d = data_family::paper_gaussian();
  const auto h = build_h(d);
  EXPECT_EQ(free_solution(h, 1.0 + d.R + 0.5, 1.0), 0.0);
  EXPECT_NEAR(free_solution(h, 1.0, 1.0), -4.0 * std::exp(-4.0), 1e-7);
  const double exact = ((0.0) - 4.0 * std::exp(-4.0)) / 1.0;
  EXPECT_NEAR(free_solution(h, 1.0, 1.0), exact, 1e-7);
  const auto bump = data_family::smooth_bump(2.0, 1.0, 0.3);
  const auto hb = build_h(bump);
  for (double r = 0.1; r < 2.0; r += 0.1) EXPECT_NEAR(free_solution(hb, 0.0, r), bump.f(r), 1e-6);
}

TEST(FreeSolution, AxisLimit) {
  const auto h = build_h(data_family::paper_gaussian());
  for (double t : {0.3, 1.0, 2.5}) EXPECT_NEAR(free_solution(h, t, 0.0), free_solution(h, t, 1e-4), 1e-6);
}

TEST(FreeSolution, Huygens) {
  const auto d = data_family::smooth_bump(2.0, 1.0, 0.5);
  EXPECT_LT(oracle::huygens_residual(build_h(d), d.R, 0.05), 1e-12);
  const auto p = data_family::paper_gaussian();
  EXPECT_LT(oracle::huygens_residual(build_h(p), p.R, 0.05), 1e-12);
}

TEST(FreeSolution, RoundTripIsSecondOrder) {
  const auto d = data_family::smooth_bump(2.0, 1.0, 0.5);
  const auto rt = oracle::lemma1_round_trip(d, {40, 80, 160});
  EXPECT_GE(rt.order_f, 1.9);
  EXPECT_GE(rt.order_g, 1.9);
  EXPECT_LT(rt.err_f.back(), 1e-5);
  EXPECT_LT(rt.err_g.back(), 1e-3);
}

TEST(DataNorms, ZeroAndScaling) {
  const auto z = data_norms(data_family::smooth_bump(2.0, 0.0, 0.0), 3);
  EXPECT_EQ(z.f0, 0.0);
  EXPECT_EQ(z.f1, 0.0);
  EXPECT_EQ(z.g0, 0.0);
  const auto d = data_family::smooth_bump(2.0, 1.0, 0.4);
  const auto a = data_norms(d, 3), b = data_norms(d.scaled(2.5), 3);
  EXPECT_NEAR(b.f0, 2.5 * a.f0, 1e-12);
  EXPECT_NEAR(b.f1, 2.5 * a.f1, 1e-12);
  EXPECT_NEAR(b.g0, 2.5 * a.g0, 1e-12);
}

TEST(DataNorms, GaussianG0MatchesDenseMaximization) {
  const auto d = data_family::paper_gaussian();
  const double ref = oracle::dense_max([](double r) { return std::pow(1 + r, 4) * std::abs(4 * (r * r - 1) * std::exp(-r * r)); }, 0, 8);
  EXPECT_NEAR(data_norms(d, 3).g0, ref, 1e-5 * ref);
}

TEST(Tabulated, ReadsCsvAndMatchesAnalytic) {
  const auto path = std::filesystem::temp_directory_path() / "wt_tab_data.csv";
  {
    std::ofstream f(path);
    f << "r,f,g\n";
    for (int j = 0; j <= 800; ++j) {
      const double r = 0.01 * j;
      f << r << "," << 0.0 << "," << data_family::paper_gaussian_g(r) << "\n";
    }
  }
  DataSelector sel;
  sel.family = "tabulated";
  sel.table_path = path.string();
  const auto h = build_h(make_cauchy_data(sel));
  for (double z = -4; z <= 4; z += 0.25) EXPECT_NEAR(h(z), closed_form_h(z), 1e-5);
  std::filesystem::remove(path);
}

TEST(DataSelector, UnknownFamily) {
  DataSelector sel;
  sel.family = "nope";
  EXPECT_THROW(make_cauchy_data(sel), Error);
}
