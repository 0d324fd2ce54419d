#pragma once

// Domain types for  u_tt - Lap u + lambda V(r) u = F(u)  in spherical symmetry:
// potential and nonlinearity families, grid/run parameters, and the constants
// that enter the convergence and remainder estimates.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "wavetails/error.hpp"
#include "wavetails/profile.hpp"
#include "wavetails/quadrature.hpp"

namespace wavetails {

/// <x> = 1 + |x|
inline double bracket(double x) { return 1.0 + std::abs(x); }

enum class PotentialShape { TanhPower, PurePower, Tabulated };

inline std::string to_string(PotentialShape s) {
  switch (s) {
    case PotentialShape::TanhPower: return "tanh-power";
    case PotentialShape::PurePower: return "pure-power";
    case PotentialShape::Tabulated: return "tabulated";
  }
  return "unknown";
}

/// Unnormalized tanh(r)^(k+2) / r^k, written so that r -> 0 is benign.
inline double tanh_power_shape(double r, double k) {
  r = std::abs(r);
  if (r < 1e-8) return r * r;
  const double th = std::tanh(r);
  return std::pow(th / r, k) * th * th;
}

/// max(r, r_min)^(-k): continuous, flat inside r_min.
inline double pure_power_shape(double r, double k, double r_min) {
  return std::pow(std::max(std::abs(r), r_min), -k);
}

namespace detail {

inline void require_decay_exponent(double k) {
  if (!(k > 2.0)) throw Error(ErrorKind::DomainError, "potential decay exponent k must exceed 2, got " + std::to_string(k));
}

}  // namespace detail

/// 1 / sup_{r>0} (1+r)^k shape(r). The supremum is bracketed on a log-spaced
/// scan of [1e-3, 1e3] and refined by golden section.
inline double normalize_potential(const std::function<double(double)>& shape, double k) {
  detail::require_decay_exponent(k);
  auto weighted = [&](double r) { return std::pow(1.0 + r, k) * std::abs(shape(r)); };

  constexpr int kScan = 600;
  const double lo = std::log(1e-3), hi = std::log(1e3);
  std::vector<double> rs(kScan + 1), ws(kScan + 1);
  int best = 0;
  for (int i = 0; i <= kScan; ++i) {
    rs[i] = std::exp(lo + (hi - lo) * i / kScan);
    ws[i] = weighted(rs[i]);
    if (!std::isfinite(ws[i]))
      throw Error(ErrorKind::NonfiniteSupremum, "weighted potential is not finite at r = " + std::to_string(rs[i]));
    if (ws[i] > ws[best]) best = i;
  }
  double sup = ws[best];
  if (best == kScan) {
    // Supremum approached at large r: bounded only if growth dies off.
    double prev = ws[kScan];
    double first_step = 0.0, last_step = 0.0;
    for (int decade = 4; decade <= 9; ++decade) {
      const double w = weighted(std::pow(10.0, decade));
      if (!std::isfinite(w))
        throw Error(ErrorKind::NonfiniteSupremum, "weighted potential diverges at large r");
      const double step = std::log(w / prev);
      if (decade == 4) first_step = step;
      last_step = step;
      prev = w;
      sup = std::max(sup, w);
    }
    if (last_step > 1e-3 && last_step > 0.5 * first_step)
      throw Error(ErrorKind::NonfiniteSupremum, "(1+r)^k |shape(r)| grows without bound");
  } else if (best == 0) {
    // Same test toward the axis.
    double prev = ws[0];
    for (int decade = 4; decade <= 9; ++decade) {
      const double w = weighted(std::pow(10.0, -decade));
      if (!std::isfinite(w) || std::log(w / prev) > 1e-3)
        throw Error(ErrorKind::NonfiniteSupremum, "(1+r)^k |shape(r)| is unbounded near r = 0");
      prev = w;
      sup = std::max(sup, w);
    }
  } else {
    const double a = rs[std::max(best - 1, 0)];
    const double b = rs[std::min(best + 1, kScan)];
    const auto m = quad::golden_section_max(weighted, a, b, 1e-10);
    sup = std::max(sup, m.value);
  }
  if (!(sup > 0.0) || !std::isfinite(sup))
    throw Error(ErrorKind::NonfiniteSupremum, "weighted potential has no positive finite supremum");
  return 1.0 / sup;
}

struct PotentialSpec {
  double k = 3.0;
  double lambda = 0.0;
  PotentialShape shape = PotentialShape::TanhPower;
  double V0 = 1.0;
  double r_min = 1.0;      // PurePower only
  RadialProfile table;     // Tabulated only
  std::string table_path;  // where `table` came from, for manifests

  double shape_value(double r) const {
    switch (shape) {
      case PotentialShape::TanhPower: return tanh_power_shape(r, k);
      case PotentialShape::PurePower: return pure_power_shape(r, k, r_min);
      case PotentialShape::Tabulated: return table(r);
    }
    return 0.0;
  }

  /// V(r), normalized so that sup (1+r)^k |V| = 1 once normalize() ran.
  double operator()(double r) const { return V0 * shape_value(r); }

  /// Replace V0 by the value fixed by the unit weighted-norm condition.
  PotentialSpec& normalize() {
    PotentialSpec unit = *this;
    unit.V0 = 1.0;
    V0 = normalize_potential([&unit](double r) { return unit.shape_value(r); }, k);
    return *this;
  }

  /// Coupling such that lambda * V0 equals the given product.
  static PotentialSpec tanh_power(double k, double lambda_V0) {
    PotentialSpec p;
    p.k = k;
    p.shape = PotentialShape::TanhPower;
    p.normalize();
    p.lambda = lambda_V0 / p.V0;
    return p;
  }
};

/// F(u) = u^p * sum_n b_n u^n, truncated to the listed coefficients.
struct NonlinearitySpec {
  int p = 3;
  std::vector<double> b{1.0};
  double epsilon = 1.0;

  void validate() const {
    if (p < 3) throw Error(ErrorKind::DomainError, "nonlinearity power p must be >= 3");
    if (b.empty() || b.front() == 0.0) throw Error(ErrorKind::DomainError, "leading coefficient b0 must be nonzero");
  }

  double b0() const { return b.front(); }
};

inline double evaluate_nonlinearity(const NonlinearitySpec& spec, double u) {
  double series = 0.0;
  for (auto it = spec.b.rbegin(); it != spec.b.rend(); ++it) series = series * u + *it;
  double up = 1.0;
  for (int i = 0; i < spec.p; ++i) up *= u;
  return up * series;
}

namespace constants {

/// C_m = max(9 / (2(m-2)), 5), defined for m > 2.
inline double data_constant(double m) {
  if (!(m > 2.0)) throw Error(ErrorKind::DomainError, "C_m needs m > 2");
  return std::max(9.0 / (2.0 * (m - 2.0)), 5.0);
}

/// C_{p,q} = 2 + 8/(p-1) + 2/(q-1); its inverse bounds the admissible coupling.
inline double coupling_constant(double p, double q) {
  if (!(p > 1.0) || !(q > 1.0)) throw Error(ErrorKind::DomainError, "C_{p,q} needs p, q > 1");
  return 2.0 + 8.0 / (p - 1.0) + 2.0 / (q - 1.0);
}

}  // namespace constants

/// Pointwise bound on |u - u_n| for the linear iteration after n steps.
inline double remainder_bound(int n, double lambda, double k, double f0, double f1, double g0, double t, double r) {
  if (n < 0) throw Error(ErrorKind::DomainError, "remainder order must be >= 0");
  const double ckk = constants::coupling_constant(k, k);
  if (lambda == 0.0) return 0.0;
  if (!(lambda * ckk < 1.0))
    throw Error(ErrorKind::CouplingTooLarge,
                "lambda = " + std::to_string(lambda) + " >= 1/C_{k,k} = " + std::to_string(1.0 / ckk));
  const double x = ckk * lambda;
  const double geometric = std::pow(x, n + 1) / (1.0 - x);
  const double data = constants::data_constant(k + 1.0) * (f0 + f1 + g0);
  return geometric * data / (bracket(t + r) * std::pow(bracket(t - r), k - 1.0));
}

enum class Precision { Double, Extended };

struct GridSpec {
  double dr = 0.02;
  double mesh_ratio = 0.5;  // dt / dr
  double r_max = 210.0;
  double t_max = 400.0;
  double r_obs = 1.0;
  int field_stride = 0;     // time steps between field snapshots; 0 disables
  int field_r_stride = 10;  // radial nodes between field samples
  int series_stride = 1;
  Precision precision = Precision::Double;
  double amplitude_limit = 1.0;  // |u| at or above this aborts the run

  double dt() const { return mesh_ratio * dr; }
};

/// Built-in initial-data family plus its parameters.
struct DataSelector {
  std::string family = "paper-gaussian";
  double amplitude = 1.0;
  double bump_radius = 2.0;
  double bump_f = 1.0;
  double bump_g = 0.0;
  std::string table_path;
};

struct FitWindow {
  double t1 = 0.0;
  double t2 = 0.0;
};

struct ModelConfig {
  std::optional<PotentialSpec> potential;
  std::optional<NonlinearitySpec> nonlinearity;
  DataSelector data;
  GridSpec grid;
  std::optional<FitWindow> fit;

  /// Scale applied to the selected data family: epsilon times the amplitude.
  double data_scale() const { return data.amplitude * (nonlinearity ? nonlinearity->epsilon : 1.0); }

  /// Checks every invariant that depends on the data support radius R.
  void validate(double support_radius) const {
    const auto& g = grid;
    if (!(g.dr > 0.0)) throw Error(ErrorKind::ConfigError, "grid.dr must be positive");
    if (!(g.mesh_ratio > 0.0) || g.mesh_ratio > 1.0)
      throw Error(ErrorKind::CflViolation, "mesh_ratio = " + std::to_string(g.mesh_ratio) + " outside (0, 1]");
    if (!(g.t_max > 0.0)) throw Error(ErrorKind::ConfigError, "grid.t_max must be positive");
    if (g.r_obs < 0.0 || g.r_obs >= g.r_max) throw Error(ErrorKind::ConfigError, "grid.r_obs must lie in [0, r_max)");
    const double needed = 0.5 * (g.t_max + g.r_obs) + support_radius;
    if (g.r_max < needed)
      throw Error(ErrorKind::BoundaryContamination,
                  "r_max = " + std::to_string(g.r_max) + " < (t_max + r_obs)/2 + R = " + std::to_string(needed));
    if (potential) detail::require_decay_exponent(potential->k);
    if (potential && potential->lambda < 0.0) throw Error(ErrorKind::ConfigError, "lambda must be >= 0");
    if (nonlinearity) nonlinearity->validate();
    if (fit) {
      if (!(fit->t2 > fit->t1) || !(fit->t1 > g.r_obs + support_radius))
        throw Error(ErrorKind::ConfigError, "fit window must satisfy t2 > t1 > r_obs + R");
    }
  }
};

/// Smallest r_max that keeps the outer boundary out of the observer's past.
inline double required_r_max(double t_max, double r_obs, double support_radius) {
  return 0.5 * (t_max + r_obs) + support_radius;
}

}  // namespace wavetails
