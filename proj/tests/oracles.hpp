#pragma once

// Independent reference computations shared by the unit tests and the
// acceptance binary. Nothing here calls the code path it checks.

#include <cmath>
#include <functional>
#include <random>
#include <vector>

#include "wavetails/wavetails.hpp"

namespace oracle {

/// int_{-inf}^{inf} z^(2m) exp(-a z^2) dz = Gamma(m + 1/2) / a^(m + 1/2).
inline double gaussian_moment(int m, double a) { return std::tgamma(m + 0.5) / std::pow(a, m + 0.5); }

/// int (z^2 e^{-z^2})^p dz in closed form.
inline double h_power_integral(int p) { return gaussian_moment(p, p); }

/// Maximum of f on [a, b] by a fine scan then golden section.
inline double dense_max(const std::function<double(double)>& f, double a, double b, int n = 20000) {
  double best = a, fb = f(a);
  for (int i = 1; i <= n; ++i) {
    const double x = a + (b - a) * i / n;
    if (f(x) > fb) fb = f(x), best = x;
  }
  const double h = (b - a) / n;
  double lo = std::max(a, best - h), hi = std::min(b, best + h);
  const double g = (std::sqrt(5.0) - 1) / 2;
  for (int it = 0; it < 200; ++it) {
    const double c = hi - g * (hi - lo), d = lo + g * (hi - lo);
    if (f(c) > f(d)) hi = d; else lo = c;
  }
  return std::max(fb, f(0.5 * (lo + hi)));
}

struct RoundTrip {
  std::vector<double> dz, err_f, err_g;
  double order_f = 0, order_g = 0;
};

/// Recover f and g at t = 0 from h built on successively halved grids. g uses
/// a centered time difference with step dz, hence second order overall.
inline RoundTrip lemma1_round_trip(const wavetails::CauchyData& d, std::vector<int> halves) {
  RoundTrip rt;
  for (int n : halves) {
    const auto h = wavetails::build_h(d, n);
    const double dz = h.dz();
    double ef = 0, eg = 0;
    for (double r = 0.05; r < d.R; r += 0.0173) {
      ef = std::max(ef, std::abs(wavetails::free_solution(h, 0.0, r) - d.f(r)));
      const double gt = (wavetails::free_solution(h, dz, r) - wavetails::free_solution(h, -dz, r)) / (2 * dz);
      eg = std::max(eg, std::abs(gt - d.g(r)));
    }
    rt.dz.push_back(dz);
    rt.err_f.push_back(ef);
    rt.err_g.push_back(eg);
  }
  const std::size_t m = rt.dz.size();
  rt.order_f = std::log(rt.err_f[m - 2] / rt.err_f[m - 1]) / std::log(rt.dz[m - 2] / rt.dz[m - 1]);
  rt.order_g = std::log(rt.err_g[m - 2] / rt.err_g[m - 1]) / std::log(rt.dz[m - 2] / rt.dz[m - 1]);
  return rt;
}

/// Largest |u0| over grid points strictly past the outgoing pulse.
inline double huygens_residual(const wavetails::HFunction& h, double R, double dr) {
  double m = 0;
  for (double r = dr; r < 30; r += dr)
    for (double t = r + R + dr * 1.0001; t < r + R + 40; t += dr) m = std::max(m, std::abs(wavetails::free_solution(h, t, r)));
  return m;
}

struct Lemma2Sweep {
  int samples = 0;
  int violations = 0;
  double worst_ratio = 0;  // max defect / bound
};

/// Random admissible (t, r, R, alpha): R from the data support upward,
/// t past 2 alpha (r + R).
inline Lemma2Sweep lemma2_sweep(const wavetails::HFunction& h, int n, unsigned seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  Lemma2Sweep s;
  for (int i = 0; i < n; ++i) {
    const double alpha = 1.0 + 5.0 * (1.0 - U(rng));  // (1, 6]
    const double r = 20.0 * U(rng) * U(rng);
    const double R = h.R() * (1.0 + 2.0 * U(rng));
    const double t = 2.0 * alpha * (r + R) * std::pow(10.0, 2.0 * U(rng)) * (1.0 + 1e-9);
    const auto c = wavetails::lemma2_check(h, t, r, R, alpha);
    ++s.samples;
    if (!c.satisfied) ++s.violations;
    if (c.bound > 0) s.worst_ratio = std::max(s.worst_ratio, c.defect / c.bound);
  }
  return s;
}

}  // namespace oracle
