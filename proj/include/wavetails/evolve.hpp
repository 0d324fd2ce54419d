#pragma once

// Method-of-lines evolution of w = r u:
//   w_tt = w_rr - lambda V(r) w + r F(w / r),
// fourth-order centered differences in r, classical RK4 in t, odd ghost
// points at the axis and a Dirichlet wall at r_max.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <type_traits>
#include <vector>

#include "wavetails/error.hpp"
#include "wavetails/initdata.hpp"
#include "wavetails/model.hpp"

namespace wavetails {

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> u;

  std::size_t size() const { return t.size(); }
  bool empty() const { return t.empty(); }

  void push(double time, double value) {
    if (!t.empty() && !(time > t.back()))
      throw Error(ErrorKind::DomainError, "time series samples must be strictly increasing");
    t.push_back(time);
    u.push_back(value);
  }

  /// Linear interpolation in t; the series must bracket `time`.
  double at(double time) const {
    auto it = std::lower_bound(t.begin(), t.end(), time);
    if (it == t.end()) throw Error(ErrorKind::DomainError, "time beyond series");
    auto i = static_cast<std::size_t>(it - t.begin());
    if (t[i] == time || i == 0) return u[i];
    const double s = (time - t[i - 1]) / (t[i] - t[i - 1]);
    return (1.0 - s) * u[i - 1] + s * u[i];
  }
};

/// Strided snapshots of w = r u; w(t, 0) = 0 by construction.
struct SpacetimeField {
  double dr = 0.0;  // spacing of the stored radial samples
  std::vector<double> times;
  std::vector<std::vector<double>> w;

  double r(std::size_t j) const { return dr * static_cast<double>(j); }

  double u(std::size_t snapshot, std::size_t j) const {
    const auto& row = w[snapshot];
    if (j == 0) {
      // u(t,0) = dw/dr at the axis, odd symmetry w(-r) = -w(r).
      if (row.size() < 3) return 0.0;
      return (16.0 * row[1] - 2.0 * row[2]) / (12.0 * dr);
    }
    return row[j] / r(j);
  }
};

struct EvolutionResult {
  SpacetimeField field;
  TimeSeries series;
  double max_abs_u = 0.0;
  long steps = 0;
};

struct EvolveOptions {
  /// Stop updating nodes that can no longer influence the observer. Only
  /// used when no field snapshots are requested.
  bool trim_to_observer = true;
  /// Fourth-order differences carry short waves faster than light, so the
  /// kept region grows faster than the physical cone.
  double trim_speed = 1.5;
  int trim_margin = 32;
  int blowup_check_interval = 50;  // nonlinear runs check every step
};

template <class Real>
class RadialWaveSolver {
 public:
  static constexpr std::ptrdiff_t kGhost = 2;

  RadialWaveSolver(const ModelConfig& config, const CauchyData& data)
      : grid_(config.grid), dr_(config.grid.dr) {
    const auto n_cells = static_cast<std::ptrdiff_t>(std::llround(grid_.r_max / dr_));
    if (n_cells < 8) throw Error(ErrorKind::ConfigError, "radial grid needs at least 8 cells");
    n_ = n_cells;
    const auto size = static_cast<std::size_t>(n_ + 1 + 2 * kGhost);
    w_.assign(size, Real(0));
    p_.assign(size, Real(0));
    wt_.assign(size, Real(0));
    pt_.assign(size, Real(0));
    acc_w_.assign(size, Real(0));
    acc_p_.assign(size, Real(0));
    kp_.assign(size, Real(0));
    coupling_.assign(size, Real(0));
    radius_.assign(size, Real(0));
    inv_radius_.assign(size, 0.0);
    for (std::ptrdiff_t i = 0; i <= n_; ++i) {
      const double r = dr_ * static_cast<double>(i);
      radius_[idx(i)] = Real(r);
      inv_radius_[idx(i)] = r > 0.0 ? 1.0 / r : 0.0;
      if (config.potential) coupling_[idx(i)] = Real(config.potential->lambda * (*config.potential)(r));
    }
    if (config.nonlinearity) {
      power_ = config.nonlinearity->p;
      for (double b : config.nonlinearity->b) coeffs_.push_back(Real(b));
    }
    for (std::ptrdiff_t i = 1; i < n_; ++i) {
      const double r = dr_ * static_cast<double>(i);
      w_[idx(i)] = Real(r * data.f(r));
      p_[idx(i)] = Real(r * data.g(r));
    }
    active_hi_ = n_;
    apply_boundaries(w_);
    apply_boundaries(p_);
  }

  double time() const { return static_cast<double>(clock_); }
  std::ptrdiff_t cells() const { return n_; }
  double dr() const { return dr_; }

  /// w at node i, ghost nodes included (i >= -2).
  double w(std::ptrdiff_t i) const { return static_cast<double>(w_[idx(i)]); }

  /// Restrict updates to nodes [1, hi).
  void set_active_limit(std::ptrdiff_t hi) { active_hi_ = std::clamp<std::ptrdiff_t>(hi, 8, n_); }

  /// One RK4 step; dt may be negative.
  void step(double dt_in) {
    const Real dt = Real(dt_in);
    const std::ptrdiff_t hi = active_hi_;
    const Real half = dt / Real(2);
    // Stage 1
    rhs(w_, p_, hi);
    for (std::ptrdiff_t i = 1; i < hi; ++i) {
      const auto k = idx(i);
      acc_w_[k] = p_[k];
      acc_p_[k] = kp_[k];
      wt_[k] = w_[k] + half * p_[k];
      pt_[k] = p_[k] + half * kp_[k];
    }
    copy_frozen(hi);
    // Stage 2
    rhs(wt_, pt_, hi);
    for (std::ptrdiff_t i = 1; i < hi; ++i) {
      const auto k = idx(i);
      acc_w_[k] += Real(2) * pt_[k];
      acc_p_[k] += Real(2) * kp_[k];
      const Real pk = pt_[k];
      wt_[k] = w_[k] + half * pk;
      pt_[k] = p_[k] + half * kp_[k];
    }
    // Stage 3
    rhs(wt_, pt_, hi);
    for (std::ptrdiff_t i = 1; i < hi; ++i) {
      const auto k = idx(i);
      acc_w_[k] += Real(2) * pt_[k];
      acc_p_[k] += Real(2) * kp_[k];
      const Real pk = pt_[k];
      wt_[k] = w_[k] + dt * pk;
      pt_[k] = p_[k] + dt * kp_[k];
    }
    // Stage 4
    rhs(wt_, pt_, hi);
    const Real sixth = dt / Real(6);
    for (std::ptrdiff_t i = 1; i < hi; ++i) {
      const auto k = idx(i);
      w_[k] += sixth * (acc_w_[k] + pt_[k]);
      p_[k] += sixth * (acc_p_[k] + kp_[k]);
    }
    apply_boundaries(w_);
    apply_boundaries(p_);
    clock_ += dt;
  }

  /// u(t, r) from the current state: cubic interpolation of w, then divide by r.
  double u_at(double r) const {
    if (r <= 0.0) return static_cast<double>((Real(16) * w_[idx(1)] - Real(2) * w_[idx(2)]) / Real(12 * dr_));
    const double x = r / dr_;
    auto i = static_cast<std::ptrdiff_t>(std::floor(x));
    const double s = x - static_cast<double>(i);
    if (s < 1e-12) return static_cast<double>(w_[idx(i)] / radius_[idx(i)]);
    i = std::clamp<std::ptrdiff_t>(i, 0, n_ - 2);
    const Real S = Real(s);
    const Real wm = w_[idx(i - 1)], w0 = w_[idx(i)], w1 = w_[idx(i + 1)], w2 = w_[idx(i + 2)];
    const Real val = -S * (S - 1) * (S - 2) / 6 * wm + (S + 1) * (S - 1) * (S - 2) / 2 * w0 -
                     (S + 1) * S * (S - 2) / 2 * w1 + (S + 1) * S * (S - 1) / 6 * w2;
    return static_cast<double>(val / Real(r));
  }

  /// max |u| over the active nodes (axis value included).
  double max_abs_u() const {
    double m = std::abs(u_at(0.0));
    for (std::ptrdiff_t i = 1; i < active_hi_; ++i) {
      const double v = static_cast<double>(w_[idx(i)]) * inv_radius_[idx(i)];
      if (!std::isfinite(v)) return std::numeric_limits<double>::infinity();
      m = std::max(m, std::abs(v));
    }
    return m;
  }

  std::vector<double> snapshot(int r_stride) const {
    std::vector<double> out;
    for (std::ptrdiff_t i = 0; i <= n_; i += r_stride) out.push_back(static_cast<double>(w_[idx(i)]));
    return out;
  }

 private:
  static std::size_t idx(std::ptrdiff_t i) { return static_cast<std::size_t>(i + kGhost); }

  void apply_boundaries(std::vector<Real>& v) const {
    v[idx(0)] = Real(0);
    v[idx(-1)] = -v[idx(1)];
    v[idx(-2)] = -v[idx(2)];
    v[idx(n_)] = Real(0);
    v[idx(n_ + 1)] = -v[idx(n_ - 1)];
  }

  void copy_frozen(std::ptrdiff_t hi) {
    // Nodes at and beyond hi keep their old values in every stage.
    for (std::ptrdiff_t i = hi; i <= std::min(hi + 2, n_ + 1); ++i) {
      wt_[idx(i)] = w_[idx(i)];
      pt_[idx(i)] = p_[idx(i)];
    }
    wt_[idx(0)] = pt_[idx(0)] = Real(0);
  }

  Real source(Real w, Real r) const {
    if (coeffs_.empty()) return Real(0);
    const Real u = w / r;
    Real series(0);
    for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) series = series * u + *it;
    Real up(1);
    for (int i = 0; i < power_; ++i) up *= u;
    return r * up * series;
  }

  void rhs(std::vector<Real>& w, const std::vector<Real>& /*p*/, std::ptrdiff_t hi) {
    w[idx(-1)] = -w[idx(1)];
    w[idx(-2)] = -w[idx(2)];
    if (hi >= n_) {
      w[idx(n_)] = Real(0);
      w[idx(n_ + 1)] = -w[idx(n_ - 1)];
    }
    const Real inv = Real(1) / (Real(12) * Real(dr_) * Real(dr_));
    const bool nonlinear = !coeffs_.empty();
    for (std::ptrdiff_t i = 1; i < hi; ++i) {
      const auto k = idx(i);
      const Real lap = (-w[k + 2] + Real(16) * w[k + 1] - Real(30) * w[k] + Real(16) * w[k - 1] - w[k - 2]) * inv;
      Real acc = lap - coupling_[k] * w[k];
      if (nonlinear) acc += source(w[k], radius_[k]);
      kp_[k] = acc;
    }
  }

  GridSpec grid_;
  double dr_;
  std::ptrdiff_t n_ = 0;
  std::ptrdiff_t active_hi_ = 0;
  std::vector<Real> w_, p_, wt_, pt_, acc_w_, acc_p_, kp_, coupling_, radius_;
  std::vector<double> inv_radius_;
  std::vector<Real> coeffs_;
  int power_ = 0;
  Real clock_ = Real(0);
};

template <class Real>
EvolutionResult evolve_full_as(const ModelConfig& config, const CauchyData& data, const EvolveOptions& opts = {}) {
  config.validate(data.R);
  const auto& g = config.grid;
  RadialWaveSolver<Real> solver(config, data);
  const double dt = g.dt();
  const long steps = std::lround(std::ceil(g.t_max / dt - 1e-9));
  const bool trim = opts.trim_to_observer && g.field_stride <= 0;

  EvolutionResult out;
  out.field.dr = g.dr * std::max(1, g.field_r_stride);
  auto record = [&](long n) {
    const double t = dt * static_cast<double>(n);
    if (n % std::max(1, g.series_stride) == 0) out.series.push(t, solver.u_at(g.r_obs));
    if (g.field_stride > 0 && n % g.field_stride == 0) {
      out.field.times.push_back(t);
      out.field.w.push_back(solver.snapshot(std::max(1, g.field_r_stride)));
    }
  };
  auto check_amplitude = [&](long n) {
    const double m = solver.max_abs_u();
    out.max_abs_u = std::max(out.max_abs_u, m);
    // Smallness only matters for the nonlinear problem; linear runs just need finite values.
    const double limit = config.nonlinearity ? g.amplitude_limit : std::numeric_limits<double>::infinity();
    if (!(m < limit))
      throw Error(ErrorKind::AmplitudeBlowup, "|u| = " + std::to_string(m) + " at t = " +
                                                  std::to_string(dt * static_cast<double>(n)) +
                                                  " reached the limit " + std::to_string(limit));
  };

  check_amplitude(0);
  record(0);
  for (long n = 1; n <= steps; ++n) {
    if (trim) {
      const double reach = g.r_obs + opts.trim_speed * (g.t_max - dt * static_cast<double>(n - 1));
      solver.set_active_limit(static_cast<std::ptrdiff_t>(std::ceil(reach / g.dr)) + opts.trim_margin);
    }
    solver.step(dt);
    if (config.nonlinearity || n % opts.blowup_check_interval == 0 || n == steps) check_amplitude(n);
    record(n);
  }
  out.steps = steps;
  return out;
}

inline EvolutionResult evolve_full(const ModelConfig& config, const CauchyData& data, const EvolveOptions& opts = {}) {
  if (config.grid.precision == Precision::Extended) return evolve_full_as<long double>(config, data, opts);
  return evolve_full_as<double>(config, data, opts);
}

struct ConvergenceStudy {
  std::vector<double> dr;
  std::vector<double> errors;  // sup-norm differences between consecutive levels (or vs exact)
  std::vector<double> orders;
  double order = 0.0;
};

/// Observed convergence order from `levels` runs with dr halved each time.
/// With `exact` set, errors are measured against it; otherwise consecutive
/// levels are differenced (Richardson). Errors are sup-norms over the coarse
/// sample times in [t_lo, t_hi].
template <class Exact = std::nullptr_t>
ConvergenceStudy convergence_order(ModelConfig config, const CauchyData& data, int levels, double t_lo, double t_hi,
                                   Exact exact = nullptr) {
  if (levels < 3) throw Error(ErrorKind::DomainError, "convergence study needs at least 3 levels");
  config.grid.series_stride = 1;
  config.grid.field_stride = 0;
  std::vector<TimeSeries> runs;
  ConvergenceStudy study;
  for (int l = 0; l < levels; ++l) {
    study.dr.push_back(config.grid.dr);
    runs.push_back(evolve_full(config, data).series);
    config.grid.dr *= 0.5;
  }
  auto coarse_times = [&]() {
    std::vector<double> ts;
    for (double t : runs.front().t)
      if (t >= t_lo && t <= t_hi) ts.push_back(t);
    return ts;
  }();
  if (coarse_times.empty()) throw Error(ErrorKind::DomainError, "no samples in the probe window");
  auto value = [&](const TimeSeries& s, double t) { return s.at(t); };
  if constexpr (std::is_same_v<Exact, std::nullptr_t>) {
    for (int l = 0; l + 1 < levels; ++l) {
      double e = 0.0;
      for (double t : coarse_times) e = std::max(e, std::abs(value(runs[l], t) - value(runs[l + 1], t)));
      study.errors.push_back(e);
    }
  } else {
    for (int l = 0; l < levels; ++l) {
      double e = 0.0;
      for (double t : coarse_times) e = std::max(e, std::abs(value(runs[l], t) - exact(t)));
      study.errors.push_back(e);
    }
  }
  for (std::size_t i = 0; i + 1 < study.errors.size(); ++i) {
    if (!(study.errors[i + 1] < study.errors[i]))
      throw Error(ErrorKind::NonmonotoneErrors, "level differences do not shrink: " + std::to_string(study.errors[i]) +
                                                    " -> " + std::to_string(study.errors[i + 1]));
    study.orders.push_back(std::log2(study.errors[i] / study.errors[i + 1]));
  }
  study.order = study.orders.back();
  return study;
}

}  // namespace wavetails
