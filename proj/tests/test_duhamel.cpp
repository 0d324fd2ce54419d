#include <gtest/gtest.h>

#include <cmath>

#include "oracles.hpp"

using namespace wavetails;

namespace {

const CauchyData& gaussian_data() {
  static const CauchyData d = data_family::paper_gaussian();
  return d;
}
const HFunction& gaussian_h() {
  static const HFunction h = build_h(gaussian_data());
  return h;
}

/// Exact for piecewise quadratics: Simpson on each smooth piece.
double simpson_piece(const std::function<double(double)>& f, double a, double b) {
  return (b - a) / 6.0 * (f(a) + 4.0 * f(0.5 * (a + b)) + f(b));
}

}  // namespace

TEST(DuhamelSolve, ZeroSource) {
  EXPECT_EQ(duhamel_solve(NullDomainSource::wedge([](double, double) { return 0.0; }), 5.0, 1.0), 0.0);
}

TEST(DuhamelSolve, ConstantSourceOnBox) {
  const double t = 3, r = 1, eta0 = -3, eta1 = 1;
  const auto N = NullDomainSource::box([](double, double) { return 1.0; }, 0.0, 10.0, eta0, eta1);
  // Inner integral of (xi - eta)/2 over [max(-xi, eta0), min(t - r, eta1)] is quadratic in xi
  // on either side of the corner xi = -eta0.
  auto inner = [&](double xi) {
    const double a = std::max(-xi, eta0), b = std::min(t - r, eta1);
    return xi * (b - a) / 2.0 - (b * b - a * a) / 4.0;
  };
  const double exact = (simpson_piece(inner, 2.0, 3.0) + simpson_piece(inner, 3.0, 4.0)) / (4.0 * r);
  EXPECT_NEAR(duhamel_solve(N, t, r), exact, 1e-12 * std::abs(exact));
}

TEST(DuhamelSolve, Linearity) {
  const auto& h = gaussian_h();
  auto n1 = [&](double tau, double rho) { return std::exp(-(tau - rho) * (tau - rho)) / (1 + rho * rho); };
  auto n2 = [&](double tau, double rho) { return free_solution(h, tau, std::max(rho, 1e-12)) * std::tanh(rho); };
  const double a = 2.5, b = -0.75;
  for (double t : {2.0, 7.0}) {
    const double lhs = duhamel_solve(NullDomainSource::wedge([&](double x, double y) { return a * n1(x, y) + b * n2(x, y); }), t, 1.0);
    const double rhs = a * duhamel_solve(NullDomainSource::wedge(n1), t, 1.0) + b * duhamel_solve(NullDomainSource::wedge(n2), t, 1.0);
    EXPECT_NEAR(lhs, rhs, 1e-9 * std::abs(rhs));
  }
}

TEST(DuhamelSolve, QuadratureNoConvergence) {
  quad::Tolerance tight{1e-15, 0.0, 3};
  auto N = NullDomainSource::wedge([](double tau, double) { return std::sin(40 * tau); });
  try {
    duhamel_solve(N, 5.0, 1.0, tight);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::QuadratureNoConvergence);
  }
}

TEST(Reduced, V1AgreesWithDuhamelSolve) {
  const auto& h = gaussian_h();
  const auto V = PotentialSpec::tanh_power(3, 0.1);
  auto v0 = [&](double tau, double rho) { return rho > 0 ? free_solution(h, tau, rho) : 0.0; };
  const auto N = NullDomainSource::strip([&](double tau, double rho) { return -V(rho) * v0(tau, rho); }, h.R());
  for (double t : {10.0, 20.0, 40.0}) {
    const double a = v1_reduced(h, V, t, 1.0), b = duhamel_solve(N, t, 1.0);
    EXPECT_NEAR(a, b, 1e-6 * std::abs(b)) << t;
  }
}

TEST(Reduced, VpAgreesWithDuhamelSolve) {
  const auto& h = gaussian_h();
  for (int p : {3, 4}) {
    const auto N = NullDomainSource::strip(
        [&](double tau, double rho) { return rho > 0 ? std::pow(free_solution(h, tau, rho), p) : 0.0; }, h.R());
    for (double t : {10.0, 30.0}) {
      const double a = vp_reduced(h, p, 1.0, t, 1.0), b = duhamel_solve(N, t, 1.0);
      EXPECT_NEAR(a, b, 1e-6 * std::abs(b)) << "p " << p << " t " << t;
    }
  }
}

TEST(Reduced, ZeroProfileAndDomain) {
  const HFunction zero(2.0, std::vector<double>(101, 0.0));
  EXPECT_EQ(v1_reduced(zero, PotentialSpec::tanh_power(3, 0.1), 10, 1), 0.0);
  EXPECT_EQ(vp_reduced(zero, 3, 1.0, 10, 1), 0.0);
  const auto& h = gaussian_h();
  EXPECT_THROW(v1_reduced(h, PotentialSpec::tanh_power(3, 0.1), 1.0 + h.R(), 1.0), Error);
  EXPECT_THROW(vp_reduced(h, 3, 1.0, 0.5 + h.R(), 1.0), Error);
  EXPECT_THROW(vp_reduced(h, 2, 1.0, 20, 1.0), Error);
}

TEST(Reduced, LateTimeLimitsApproachTailCoefficients) {
  const auto& h = gaussian_h();
  const double r = 1.0, t = 1e3 * (r + h.R());
  for (double k : {3.0, 4.0, 5.0}) {
    const auto V = PotentialSpec::tanh_power(k, 0.1);
    const double c1 = c1_coefficient(h, V.V0, k, 1.0);
    EXPECT_NEAR(std::pow(t, k) * v1_reduced(h, V, t, r), c1, 0.01 * std::abs(c1)) << k;
  }
  for (int p : {3, 4, 5}) {
    const double dp = dp_coefficient(h, p, 1.0, 1.0);
    EXPECT_NEAR(std::pow(t, p - 1) * vp_reduced(h, p, 1.0, t, r), dp, 0.01 * dp) << p;
  }
}

TEST(Reduced, DefectDecaysLikeInverseTime) {
  const auto& h = gaussian_h();
  const auto V = PotentialSpec::tanh_power(3, 0.1);
  const double c1 = c1_coefficient(h, V.V0, 3, 1.0);
  double prev = INFINITY;
  for (double t : {100.0, 300.0, 1000.0, 3000.0}) {
    const double defect = std::abs(std::pow(t, 3) * v1_reduced(h, V, t, 1.0) - c1);
    EXPECT_LT(defect, prev);
    EXPECT_LT(defect * t, 200.0 * std::abs(c1));
    prev = defect;
  }
}

TEST(Hierarchy, LinearFirstOrderMatchesReduced) {
  ModelConfig c;
  c.potential = PotentialSpec::tanh_power(3, 0.1);
  std::vector<Probe> probes{{10, 1}, {20, 1}, {40, 1}, {25, 3}};
  const auto st = build_hierarchy(c, gaussian_data(), 1, probes);
  EXPECT_EQ(st.scheme, Scheme::Linear);
  for (std::size_t q = 0; q < probes.size(); ++q) {
    const double ref = v1_reduced(gaussian_h(), *c.potential, probes[q].t, probes[q].r);
    EXPECT_NEAR(st.values[1][q], ref, 1e-6 * std::abs(ref));
    // Order 0 is the free wave, zero out here.
    EXPECT_NEAR(partial_sum(st, 0, probes[q].t, probes[q].r), free_solution(gaussian_h(), probes[q].t, probes[q].r), 1e-14);
  }
}

TEST(Hierarchy, FirstOrderSignOppositeToPotentialMass) {
  ModelConfig c;
  c.potential = PotentialSpec::tanh_power(4, 0.1);
  const auto st = build_hierarchy(c, gaussian_data(), 1, {{60, 1}});
  // V0 int h > 0 here.
  EXPECT_LT(st.values[1][0], 0.0);
}

TEST(Hierarchy, NonlinearCubicSecondOrderVanishes) {
  ModelConfig c;
  c.nonlinearity = NonlinearitySpec{};
  std::vector<Probe> probes{{3, 1}, {8, 1}, {20, 2}};
  const auto st = build_hierarchy(c, gaussian_data(), 3, probes);
  EXPECT_EQ(st.scheme, Scheme::Nonlinear);
  for (std::size_t q = 0; q < probes.size(); ++q) EXPECT_EQ(st.values[2][q], 0.0);
  const double ref = vp_reduced(gaussian_h(), 3, 1.0, 20, 2);
  EXPECT_NEAR(st.values[3][2], ref, 1e-6 * std::abs(ref));
}

TEST(Hierarchy, CombinedSchemeSplitsIntoPotentialAndNonlinearParts) {
  ModelConfig c;
  c.potential = PotentialSpec::tanh_power(5, 0.1);
  NonlinearitySpec F;
  F.epsilon = 0.1;
  c.nonlinearity = F;
  std::vector<Probe> probes{{15, 1}, {30, 1}};
  const auto st = build_hierarchy(c, gaussian_data(), 3, probes);
  EXPECT_EQ(st.scheme, Scheme::Combined);
  EXPECT_EQ(st.a, 2);
  EXPECT_NEAR(st.lambda_tilde, c.potential->lambda / (0.1 * 0.1), 1e-12);
  for (std::size_t q = 0; q < probes.size(); ++q) {
    EXPECT_EQ(st.values[2][q], 0.0);
    const double pot = st.lambda_tilde * v1_reduced(gaussian_h(), *c.potential, probes[q].t, probes[q].r);
    const double non = vp_reduced(gaussian_h(), 3, 1.0, probes[q].t, probes[q].r);
    EXPECT_NEAR(st.potential[3][q], pot, 1e-6 * std::abs(pot));
    EXPECT_NEAR(st.nonlinear[3][q], non, 1e-6 * std::abs(non));
    const double sum = st.potential[3][q] + st.nonlinear[3][q];
    EXPECT_NEAR(st.values[3][q], sum, 1e-14 * std::abs(sum));
  }
}

TEST(Hierarchy, CombinedBookkeepingZerosBelowP) {
  ModelConfig c;
  c.potential = PotentialSpec::tanh_power(3, 0.1);
  NonlinearitySpec F;
  F.p = 4;
  F.epsilon = 0.5;
  c.nonlinearity = F;
  const auto st = build_hierarchy(c, gaussian_data(), 4, {{12, 1}});
  EXPECT_EQ(st.a, 3);
  EXPECT_TRUE(st.zero[2]);
  EXPECT_TRUE(st.zero[3]);
  EXPECT_EQ(st.values[2][0], 0.0);
  EXPECT_EQ(st.values[3][0], 0.0);
  EXPECT_NE(st.values[4][0], 0.0);
}

TEST(Hierarchy, IterationFormEqualsOrderSum) {
  ModelConfig c;
  c.potential = PotentialSpec::tanh_power(3, 0.1);
  std::vector<Probe> probes{{5, 1}, {12, 1}, {30, 2}};
  const auto st = build_hierarchy(c, gaussian_data(), 3, probes);
  const auto it = iterate_linear(c, gaussian_data(), 3, probes);
  for (int n = 0; n <= 3; ++n)
    for (std::size_t q = 0; q < probes.size(); ++q) {
      const double ps = partial_sum(st, n, probes[q].t, probes[q].r);
      EXPECT_NEAR(it[n][q], ps, 1e-12 * std::max(std::abs(ps), 1e-8)) << n << " " << q;
    }
}

TEST(Hierarchy, RemainderBoundHoldsAndSeriesConverges) {
  ModelConfig c;
  c.potential = PotentialSpec::tanh_power(3, 0.0);
  c.potential->lambda = 0.05;  // below 1/C_{3,3} = 1/7
  c.grid.dr = 0.02;
  c.grid.t_max = 45;
  c.grid.series_stride = 1;
  const auto& d = gaussian_data();
  resolve_grid(c, d.R);
  std::vector<Probe> probes{{2, 1}, {5, 1}, {10, 1}, {20, 1}, {40, 1}};
  const auto st = build_hierarchy(c, d, 4, probes);
  const auto full = evolve_full(c, d).series;
  const auto norms = data_norms(d, 3);
  for (int n = 0; n <= 4; ++n)
    for (const auto& p : probes) {
      const double diff = std::abs(full.at(p.t) - partial_sum(st, n, p.t, p.r));
      EXPECT_LE(diff, remainder_bound(n, 0.05, 3, norms.f0, norms.f1, norms.g0, p.t, p.r)) << n << " " << p.t;
    }
  std::vector<double> sup(5, 0.0);
  for (int n = 1; n <= 4; ++n)
    for (std::size_t q = 0; q < probes.size(); ++q) sup[n] = std::max(sup[n], std::abs(std::pow(0.05, n) * st.values[n][q]));
  for (int n = 2; n <= 4; ++n) EXPECT_LT(sup[n], 0.5 * sup[n - 1]);
}

TEST(Hierarchy, ZeroCouplingOrdersVanish) {
  ModelConfig c;
  c.potential = PotentialSpec::tanh_power(5, 0.0);
  const auto st = build_hierarchy(c, gaussian_data(), 3, {{10, 1}, {30, 1}});
  for (int n = 1; n <= 3; ++n)
    for (double v : st.values[n]) EXPECT_LT(std::abs(std::pow(st.lambda, n) * v), 1e-10);
}

TEST(Hierarchy, OrderCap) {
  ModelConfig c;
  c.potential = PotentialSpec::tanh_power(3, 0.1);
  HierarchyOptions o;
  o.order_cap = 4;
  try {
    build_hierarchy(c, gaussian_data(), 5, {{10, 1}}, o);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::OrderCapExceeded);
  }
}

TEST(WeightedNorm, Examples) {
  EXPECT_EQ(weighted_norm({{1, 1, 0.0}, {5, 2, 0.0}}, 1, 3), 0.0);
  std::vector<FieldSample> synth;
  const double q = 3.5;
  for (double t = 0; t < 50; t += 1.7)
    for (double r = 0; r < 30; r += 2.3)
      synth.push_back({t, r, 1.0 / ((1 + std::abs(t + r)) * std::pow(1 + std::abs(t - r), q - 1))});
  EXPECT_NEAR(weighted_norm(synth, 1, q), 1.0, 1e-14);

  // Free Gaussian wave: finite, and the sup sits near the light cone.
  const auto& h = gaussian_h();
  std::vector<FieldSample> free;
  double best = 0, best_gap = 0;
  for (double t = 0; t < 40; t += 0.1)
    for (double r = 0.05; r < 40; r += 0.1) {
      const double u = free_solution(h, t, r);
      free.push_back({t, r, u});
      const double v = (1 + t + r) * std::pow(1 + std::abs(t - r), 2.0) * std::abs(u);
      if (v > best) best = v, best_gap = std::abs(t - r);
    }
  const double n = weighted_norm(free, 1, 3);
  EXPECT_TRUE(std::isfinite(n));
  EXPECT_DOUBLE_EQ(n, best);
  EXPECT_LE(best_gap, h.R());
}
