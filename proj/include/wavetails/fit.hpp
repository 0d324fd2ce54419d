#pragma once

// Power-law tail extraction from a time series u(t, r_obs): log-log least
// squares, local logarithmic slope, and automatic window selection.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>
#include <string>
#include <vector>

#include "wavetails/error.hpp"
#include "wavetails/evolve.hpp"
#include "wavetails/model.hpp"

namespace wavetails {

struct SlopePoint {
  double t;
  double slope;  // -d log|u| / d log t
};

struct FitOptions {
  double floor_rel = 1e-12;  // times max|u| over the series
  double floor_abs = 1e-14;
  double warn_decades = 1.0;
  double min_decades = 0.3;

  /// Floors scaled to a working precision finer than double.
  static FitOptions for_precision(Precision p) {
    FitOptions o;
    if (p == Precision::Extended) {
      const double gain = std::numeric_limits<double>::epsilon() / std::numeric_limits<long double>::epsilon();
      o.floor_rel /= gain;
      o.floor_abs /= gain;
    }
    return o;
  }
};

struct TailEstimate {
  double exponent = 0.0;
  double amplitude = 0.0;
  int sign = 0;
  double t1 = 0.0;
  double t2 = 0.0;
  double residual = 0.0;  // rms in log|u|
  std::size_t samples = 0;
  bool short_window = false;  // under warn_decades
  std::vector<SlopePoint> slope;
};

namespace detail {

inline double series_max_abs(const TimeSeries& s) {
  double m = 0.0;
  for (double v : s.u) m = std::max(m, std::abs(v));
  return m;
}

inline double noise_floor(const TimeSeries& s, const FitOptions& o) {
  return std::max(o.floor_rel * series_max_abs(s), o.floor_abs);
}

}  // namespace detail

/// Centered differences of log|u| against log t on a log-uniform resampling
/// (`per_decade` points per decade) of [t_lo, t_hi].
inline std::vector<SlopePoint> local_slope(const TimeSeries& s, double t_lo, double t_hi, int per_decade = 40) {
  if (s.size() < 3) throw Error(ErrorKind::DomainError, "series too short for a slope");
  t_lo = std::max(t_lo, s.t.front());
  t_hi = std::min(t_hi, s.t.back());
  if (!(t_lo > 0.0) || !(t_hi > t_lo)) throw Error(ErrorKind::DomainError, "empty slope range");
  const double x0 = std::log10(t_lo), x1 = std::log10(t_hi);
  const int n = std::max(3, static_cast<int>(std::ceil((x1 - x0) * per_decade)) + 1);
  std::vector<double> lt(n), lu(n);
  int sign = 0;
  for (int i = 0; i < n; ++i) {
    const double t = std::pow(10.0, x0 + (x1 - x0) * i / (n - 1));
    const double u = s.at(std::min(t, t_hi));
    const int sg = (u > 0.0) - (u < 0.0);
    if (sg == 0 || (sign != 0 && sg != sign))
      throw Error(ErrorKind::SignChange, "u changes sign near t = " + std::to_string(t));
    sign = sg;
    lt[i] = std::log(t);
    lu[i] = std::log(std::abs(u));
  }
  std::vector<SlopePoint> out;
  out.reserve(n - 2);
  for (int i = 1; i + 1 < n; ++i)
    out.push_back({std::exp(lt[i]), -(lu[i + 1] - lu[i - 1]) / (lt[i + 1] - lt[i - 1])});
  return out;
}

/// Least-squares line through (log t, log|u|) over the samples in [t1, t2].
inline TailEstimate fit_power_law(const TimeSeries& s, FitWindow w, const FitOptions& o = {}) {
  if (!(w.t1 > 0.0) || !(w.t2 > w.t1)) throw Error(ErrorKind::DomainError, "fit window needs 0 < t1 < t2");
  if (s.empty() || w.t1 < s.t.front() || w.t2 > s.t.back())
    throw Error(ErrorKind::DomainError, "fit window outside the series range");
  const double decades = std::log10(w.t2 / w.t1);
  if (decades < o.min_decades)
    throw Error(ErrorKind::WindowTooShort, "window spans " + std::to_string(decades) + " decades");
  const double floor = detail::noise_floor(s, o);

  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  std::size_t n = 0;
  int sign = 0;
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < s.size(); ++i) {
    const double t = s.t[i];
    if (t < w.t1 || t > w.t2) continue;
    const double u = s.u[i];
    const int sg = (u > 0.0) - (u < 0.0);
    if (sg == 0 || (sign != 0 && sg != sign))
      throw Error(ErrorKind::SignChangeInWindow, "u changes sign at t = " + std::to_string(t));
    sign = sg;
    if (!(std::abs(u) > floor))
      throw Error(ErrorKind::BelowNoiseFloor,
                  "|u| = " + std::to_string(std::abs(u)) + " at t = " + std::to_string(t) + " under floor " + std::to_string(floor));
    const double x = std::log(t), y = std::log(std::abs(u));
    xs.push_back(x);
    ys.push_back(y);
    sx += x;
    sy += y;
    ++n;
  }
  if (n < 3) throw Error(ErrorKind::WindowTooShort, "fewer than 3 samples in window");
  // Centered sums keep the normal equations well conditioned.
  const double mx = sx / n, my = sy / n;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (xs[i] - mx) * (xs[i] - mx);
    sxy += (xs[i] - mx) * (ys[i] - my);
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;
  double rss = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ys[i] - (intercept + slope * xs[i]);
    rss += e * e;
  }

  TailEstimate est;
  est.exponent = -slope;
  est.sign = sign;
  est.amplitude = sign * std::exp(intercept);
  est.t1 = w.t1;
  est.t2 = w.t2;
  est.residual = std::sqrt(rss / n);
  est.samples = n;
  est.short_window = decades < o.warn_decades;
  try {
    est.slope = local_slope(s, w.t1, w.t2);
  } catch (const Error&) {
    // Not reachable for a sign-definite window; keep the fit regardless.
  }
  return est;
}

/// Start of the first stretch where the slope varies by less than `tol`
/// over half a decade; NaN if there is none.
inline double plateau_start(const std::vector<SlopePoint>& curve, double tol = 0.02, double span_decades = 0.5) {
  for (std::size_t i = 0; i < curve.size(); ++i) {
    const double end = curve[i].t * std::pow(10.0, span_decades);
    if (end > curve.back().t) break;
    double lo = curve[i].slope, hi = curve[i].slope;
    for (std::size_t j = i; j < curve.size() && curve[j].t <= end; ++j) {
      lo = std::min(lo, curve[j].slope);
      hi = std::max(hi, curve[j].slope);
    }
    if (hi - lo < tol) return curve[i].t;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

/// Default window [max(20(r_obs+R), plateau start), 0.9 t_max], moved past
/// the last sign change and cut where |u| drops to the noise floor.
inline FitWindow auto_window(const TimeSeries& s, double r_obs, double R, const FitOptions& o = {}) {
  if (s.size() < 3) throw Error(ErrorKind::DomainError, "series too short");
  const double t_max = s.t.back();
  double t1 = 20.0 * (r_obs + R);
  double t2 = 0.9 * t_max;
  const double floor = detail::noise_floor(s, o);

  // Last sign change and first sub-floor sample after t1.
  std::size_t last_flip = 0;
  for (std::size_t i = 1; i < s.size(); ++i)
    if ((s.u[i] > 0.0) != (s.u[i - 1] > 0.0) || s.u[i] == 0.0) last_flip = i;
  if (last_flip > 0) t1 = std::max(t1, s.t[last_flip] * 1.05);
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s.t[i] >= t1 && s.t[i] <= t2 && !(std::abs(s.u[i]) > floor)) {
      t2 = s.t[i - 1];
      break;
    }
  }
  if (t2 > t1) {
    try {
      const double p = plateau_start(local_slope(s, t1, t2));
      if (std::isfinite(p)) t1 = std::max(t1, p);
    } catch (const Error&) {
    }
  }
  if (!(t2 > t1) || std::log10(t2 / t1) < o.min_decades)
    throw Error(ErrorKind::WindowTooShort, "no admissible window: [" + std::to_string(t1) + ", " + std::to_string(t2) + "]");
  return {t1, t2};
}

}  // namespace wavetails
