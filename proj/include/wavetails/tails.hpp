#pragma once

// Closed-form tail amplitudes and the inner-integral asymptotics behind them.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "wavetails/error.hpp"
#include "wavetails/initdata.hpp"
#include "wavetails/model.hpp"
#include "wavetails/quadrature.hpp"

namespace wavetails {

enum class TailBranch { Linear, Nonlinear, Combined };

inline std::string to_string(TailBranch b) {
  switch (b) {
    case TailBranch::Linear: return "linear";
    case TailBranch::Nonlinear: return "nonlinear";
    case TailBranch::Combined: return "combined";
  }
  return "unknown";
}

struct TailPrediction {
  double exponent = 0.0;
  double amplitude = 0.0;
  TailBranch branch = TailBranch::Linear;
  std::string case_note;  // which e_p case fired, combined branch only
  std::string validity = "t >> r + R";
};

struct HIntegral {
  double value = 0.0;
  double error = 0.0;  // |Simpson(h) - Simpson(2h)| / 15
};

/// int h^p over [-R, R] by Simpson on the sample grid, Richardson-checked
/// against the rule on every other node.
inline HIntegral integrate_h_power(const HFunction& h, int p) {
  const auto& y = h.samples();
  std::vector<double> fine(y.size()), coarse;
  for (std::size_t j = 0; j < y.size(); ++j) {
    fine[j] = std::pow(y[j], p);
    if (j % 2 == 0) coarse.push_back(fine[j]);
  }
  const double a = quad::simpson(fine, h.dz());
  const double b = quad::simpson(coarse, 2.0 * h.dz());
  return {a + (a - b) / 15.0, std::abs(a - b) / 15.0};
}

/// lambda * c1 with c1 = -2^(k-1) V0 int h.
inline double c1_coefficient(const HFunction& h, double V0, double k, double lambda) {
  detail::require_decay_exponent(k);
  return lambda * (-std::pow(2.0, k - 1.0) * V0 * integrate_h_power(h, 1).value);
}

/// epsilon^p d_p with d_p = 2^(p-2) b0 int h^p.
inline double dp_coefficient(const HFunction& h, int p, double b0, double epsilon) {
  if (p < 3) throw Error(ErrorKind::DomainError, "d_p needs p >= 3");
  return std::pow(epsilon, p) * std::pow(2.0, p - 2) * b0 * integrate_h_power(h, p).value;
}

/// e_p: the slower of the two decay rates wins; equal rates add.
inline TailPrediction ep_coefficient(double k, int p, double c_p, double d_p) {
  // k = 2 is admitted so the k = p-1 case is reachable for p = 3.
  if (!(k >= 2.0)) throw Error(ErrorKind::DomainError, "e_p needs k >= 2");
  if (p < 3) throw Error(ErrorKind::DomainError, "e_p needs p >= 3");
  TailPrediction out;
  out.branch = TailBranch::Combined;
  const double q = static_cast<double>(p - 1);
  out.exponent = std::min(k, q);
  if (k < q) {
    out.amplitude = c_p;
    out.case_note = "k<p-1";
  } else if (k == q) {
    out.amplitude = c_p + d_p;
    out.case_note = "k=p-1";
  } else {
    out.amplitude = d_p;
    out.case_note = "k>p-1";
  }
  return out;
}

/// Leading tail at fixed r for a configuration. `h_unit` is built from the
/// data before the epsilon scaling.
inline TailPrediction predict_tail(const ModelConfig& config, const HFunction& h_unit) {
  const bool lin = config.potential && config.potential->lambda != 0.0;
  const bool nl = config.nonlinearity.has_value();
  const double amp = config.data.amplitude;
  TailPrediction out;
  if (!lin && !nl) {
    out.exponent = INFINITY;
    out.validity = "free evolution: u vanishes for t > r + R";
    return out;
  }
  if (lin && !nl) {
    const auto& V = *config.potential;
    out.exponent = V.k;
    out.amplitude = amp * c1_coefficient(h_unit, V.V0, V.k, V.lambda);
  } else if (!lin) {
    const auto& F = *config.nonlinearity;
    out.branch = TailBranch::Nonlinear;
    out.exponent = F.p - 1;
    out.amplitude = dp_coefficient(h_unit, F.p, F.b0(), F.epsilon * amp);
  } else {
    const auto& V = *config.potential;
    const auto& F = *config.nonlinearity;
    // Both pieces on the same epsilon^p scale: lambda = lambda~ eps^(p-1).
    const double eps = F.epsilon * amp;
    const double c_p = eps * c1_coefficient(h_unit, V.V0, V.k, V.lambda);
    const double d_p = dp_coefficient(h_unit, F.p, F.b0(), eps);
    out = ep_coefficient(V.k, F.p, c_p, d_p);
  }
  if (config.potential && config.potential->shape == PotentialShape::PurePower)
    out.validity = "t >> r + R; remainder O((1+r+R)/t^(q+1))";
  else
    out.validity = "t >> r + R; leading term only";
  return out;
}

/// I(t,r,eta) = int_{t-r}^{t+r} (xi - eta)^(-alpha) dxi in closed form.
inline double lemma2_inner(double t, double r, double eta, double alpha) {
  if (!(alpha > 1.0)) throw Error(ErrorKind::DomainError, "alpha must exceed 1");
  if (!(t - r > eta)) throw Error(ErrorKind::DomainError, "need t - r > eta");
  if (r == 0.0) return 0.0;
  const double e = 1.0 - alpha;
  // (a^e - b^e)/(alpha-1), written through expm1 to keep it accurate for small r.
  const double a = t - r - eta;
  const double b = t + r - eta;
  return std::pow(a, e) * -std::expm1(e * std::log(b / a)) / (alpha - 1.0);
}

struct Lemma2Check {
  double exact = 0.0;
  double asymptotic = 0.0;
  double defect = 0.0;
  double bound = 0.0;
  bool satisfied = true;
};

/// Compares int h(eta) I(t,r,eta) deta with (2r/t^alpha) int h and the
/// explicit bound 4 alpha r (r+R) / t^(alpha+1) * int |h|.
inline Lemma2Check lemma2_check(const HFunction& h, double t, double r, double R, double alpha) {
  if (!(alpha > 1.0)) throw Error(ErrorKind::DomainError, "alpha must exceed 1");
  if (r < 0.0 || !(R >= h.R())) throw Error(ErrorKind::DomainError, "need r >= 0 and R at least the support of h");
  if (!(t > 2.0 * alpha * (r + R)))
    throw Error(ErrorKind::DomainError, "t must exceed 2 alpha (r + R)");
  Lemma2Check c;
  if (r == 0.0) return c;
  // Breakpoints on the spline knots: the integrand is smooth within each panel.
  std::vector<double> knots;
  for (std::size_t j = 0; j < h.samples().size(); ++j) knots.push_back(h.node(j));
  c.exact = quad::composite<8>([&](double eta) { return h(eta) * lemma2_inner(t, r, eta, alpha); }, knots);
  const double int_h = quad::composite<8>([&](double eta) { return h(eta); }, knots);
  const double int_abs = quad::composite<8>([&](double eta) { return std::abs(h(eta)); }, knots);
  c.asymptotic = 2.0 * r / std::pow(t, alpha) * int_h;
  c.defect = std::abs(c.exact - c.asymptotic);
  c.bound = 4.0 * alpha * r * (r + R) / std::pow(t, alpha + 1.0) * int_abs;
  // Rounding slack of a few ulps of the compared magnitudes.
  const double slack = 64.0 * std::numeric_limits<double>::epsilon() * (std::abs(c.exact) + std::abs(c.asymptotic));
  c.satisfied = c.defect <= c.bound + slack;
  return c;
}

}  // namespace wavetails
