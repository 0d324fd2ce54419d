#pragma once

// One-dimensional quadrature and optimization primitives shared by the
// initial-data, Duhamel and tail modules.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <limits>
#include <numbers>
#include <queue>
#include <span>
#include <string>
#include <vector>

#include "wavetails/error.hpp"

namespace wavetails::quad {

struct Tolerance {
  double rel = 1e-9;
  double abs = 1e-300;
  int max_subdivisions = 2000;
};

struct Result {
  double value = 0.0;
  double error = 0.0;
  long evaluations = 0;
};

namespace detail {

// 10-point Gauss / 21-point Kronrod pair (QUADPACK qk21).
inline constexpr std::array<double, 5> kGaussW = {
    0.066671344308688137593568809893332, 0.149451349150580593145776339657697,
    0.219086362515982043995534934228163, 0.269266719309996355091226921569469,
    0.295524224714752870173892994651338};
inline constexpr std::array<double, 11> kKronrodX = {
    0.995657163025808080735527280689003, 0.973906528517171720077964012084452,
    0.930157491355708226001207180059508, 0.865063366688984510732096688423493,
    0.780817726586416897063717578345042, 0.679409568299024406234327365114874,
    0.562757134668604683339000099272694, 0.433395394129247190799265943165784,
    0.294392862701460198131126603103866, 0.14887433898163121088482600112972,
    0.0};
inline constexpr std::array<double, 11> kKronrodW = {
    0.011694638867371874278064396062192, 0.03255816230796472747881897245939,
    0.05475589657435199603138130024458,  0.07503967481091995276704314091619,
    0.093125454583697605535065465083366, 0.109387158802297641899210590325805,
    0.123491976262065851077958109831074, 0.134709217311473325928054001771707,
    0.142775938577060080797094273138717, 0.147739104901338491374841515972068,
    0.149445554002916905664936468389821};

struct Panel {
  double a, b, value, error;
  bool operator<(const Panel& o) const { return error < o.error; }
};

template <class F>
Panel gk21(F& f, double a, double b) {
  const double center = 0.5 * (a + b);
  const double half = 0.5 * (b - a);
  const double fc = f(center);
  double res_g = 0.0;
  double res_k = fc * kKronrodW[10];
  double res_abs = std::abs(res_k);
  std::array<double, 10> f1{}, f2{};
  for (int j = 0; j < 10; ++j) {
    const double dx = half * kKronrodX[j];
    f1[j] = f(center - dx);
    f2[j] = f(center + dx);
    const double sum = f1[j] + f2[j];
    res_k += kKronrodW[j] * sum;
    res_abs += kKronrodW[j] * (std::abs(f1[j]) + std::abs(f2[j]));
    if (j % 2 == 1) res_g += kGaussW[j / 2] * sum;
  }
  const double mean = 0.5 * res_k;
  double res_asc = kKronrodW[10] * std::abs(fc - mean);
  for (int j = 0; j < 10; ++j)
    res_asc += kKronrodW[j] * (std::abs(f1[j] - mean) + std::abs(f2[j] - mean));
  res_k *= half;
  res_abs *= std::abs(half);
  res_asc *= std::abs(half);
  double err = std::abs((res_k - res_g * half));
  if (res_asc != 0.0 && err != 0.0)
    err = res_asc * std::min(1.0, std::pow(200.0 * err / res_asc, 1.5));
  constexpr double eps = std::numeric_limits<double>::epsilon();
  if (res_abs > std::numeric_limits<double>::min() / (50.0 * eps))
    err = std::max(50.0 * eps * res_abs, err);
  return {a, b, res_k, err};
}

}  // namespace detail

/// Globally adaptive Gauss-Kronrod integration: the panel with the largest
/// error estimate is bisected until max(abs, rel*|I|) is met.
template <class F>
Result integrate(F&& f, double a, double b, const Tolerance& tol = {}) {
  if (a == b) return {};
  std::priority_queue<detail::Panel> panels;
  auto first = detail::gk21(f, a, b);
  double total = first.value;
  double total_err = first.error;
  long evals = 21;
  panels.push(first);
  int subdivisions = 0;
  // Panels never report less than 50 eps of roundoff, so neither can the total.
  const double rel = std::max(tol.rel, 100.0 * std::numeric_limits<double>::epsilon());
  while (total_err > std::max(tol.abs, rel * std::abs(total))) {
    if (subdivisions >= tol.max_subdivisions) {
      throw Error(ErrorKind::QuadratureNoConvergence,
                  "error estimate " + std::to_string(total_err) + " after " +
                      std::to_string(subdivisions) + " subdivisions on [" +
                      std::to_string(a) + ", " + std::to_string(b) + "]");
    }
    auto worst = panels.top();
    panels.pop();
    const double mid = 0.5 * (worst.a + worst.b);
    if (!(mid > worst.a && mid < worst.b)) {
      // Panel below floating-point resolution; accept what we have.
      panels.push(worst);
      break;
    }
    auto left = detail::gk21(f, worst.a, mid);
    auto right = detail::gk21(f, mid, worst.b);
    evals += 42;
    total += left.value + right.value - worst.value;
    total_err += left.error + right.error - worst.error;
    panels.push(left);
    panels.push(right);
    ++subdivisions;
  }
  // Re-sum to shed the drift accumulated by the incremental updates.
  double sum = 0.0, err = 0.0;
  while (!panels.empty()) {
    sum += panels.top().value;
    err += panels.top().error;
    panels.pop();
  }
  return {sum, err, evals};
}

/// Nodes and weights of the N-point Gauss-Legendre rule on [-1, 1].
template <int N>
struct GaussLegendre {
  std::array<double, N> x{};
  std::array<double, N> w{};

  GaussLegendre() {
    for (int i = 0; i < N; ++i) {
      double z = std::cos(std::numbers::pi * (i + 0.75) / (N + 0.5));
      for (int it = 0; it < 100; ++it) {
        double p0 = 1.0, p1 = z;
        for (int n = 2; n <= N; ++n) {
          const double p2 = ((2.0 * n - 1.0) * z * p1 - (n - 1.0) * p0) / n;
          p0 = p1;
          p1 = p2;
        }
        const double dp = N * (z * p1 - p0) / (z * z - 1.0);
        const double dz = p1 / dp;
        z -= dz;
        if (std::abs(dz) < 1e-16) {
          x[i] = z;
          w[i] = 2.0 / ((1.0 - z * z) * dp * dp);
          break;
        }
      }
    }
  }

  static const GaussLegendre& get() {
    static const GaussLegendre rule;
    return rule;
  }
};

/// Fixed composite Gauss-Legendre rule over consecutive breakpoints. Unlike
/// integrate(), the node set depends only on the breakpoints, so the result
/// is exactly linear in f.
template <int N = 4, class F>
double composite(F&& f, std::span<const double> breaks) {
  const auto& rule = GaussLegendre<N>::get();
  double sum = 0.0;
  for (std::size_t i = 0; i + 1 < breaks.size(); ++i) {
    const double a = breaks[i], b = breaks[i + 1];
    if (b <= a) continue;
    const double c = 0.5 * (a + b), h = 0.5 * (b - a);
    double part = 0.0;
    for (int q = 0; q < N; ++q) part += rule.w[q] * f(c + h * rule.x[q]);
    sum += h * part;
  }
  return sum;
}

/// Breakpoints a, every multiple of `step` strictly inside (a, b), b.
inline std::vector<double> aligned_breaks(double a, double b, double step) {
  std::vector<double> out{a};
  if (b > a) {
    const double first = std::floor(a / step) + 1.0;
    for (double m = first; m * step < b; m += 1.0) {
      const double x = m * step;
      if (x - out.back() > 1e-12 * step) out.push_back(x);
    }
    if (b - out.back() > 1e-12 * step) out.push_back(b);
    else out.back() = b;
  }
  return out;
}

/// Composite Simpson on uniform samples. An odd number of intervals closes
/// with the 3/8 rule on the last three.
inline double simpson(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  if (n < 2) return 0.0;
  if (n == 2) return 0.5 * h * (y[0] + y[1]);
  const std::size_t intervals = n - 1;
  const std::size_t simpson_end = (intervals % 2 == 0) ? intervals : intervals - 3;
  double s = 0.0;
  for (std::size_t i = 0; i + 2 <= simpson_end; i += 2)
    s += h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  if (simpson_end != intervals) {
    const std::size_t i = simpson_end;
    s += 3.0 * h / 8.0 * (y[i] + 3.0 * y[i + 1] + 3.0 * y[i + 2] + y[i + 3]);
  }
  return s;
}

/// tail[i] = integral of y from node i to the last node.
inline std::vector<double> cumulative_simpson_from_right(std::span<const double> y, double h) {
  const std::size_t n = y.size();
  std::vector<double> tail(n, 0.0);
  if (n < 2) return tail;
  const std::size_t last = n - 1;
  // Even offsets from the right end: pure Simpson pairs.
  for (std::size_t off = 2; off <= last; off += 2) {
    const std::size_t i = last - off;
    tail[i] = tail[i + 2] + h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
  }
  // Odd offsets: 3/8 rule on the three intervals nearest the end, Simpson beyond.
  if (last >= 1) {
    if (last >= 3) {
      const std::size_t i3 = last - 3;
      tail[i3] = 3.0 * h / 8.0 * (y[i3] + 3.0 * y[i3 + 1] + 3.0 * y[i3 + 2] + y[last]);
      for (std::size_t off = 5; off <= last; off += 2) {
        const std::size_t i = last - off;
        tail[i] = tail[i + 2] + h / 3.0 * (y[i] + 4.0 * y[i + 1] + y[i + 2]);
      }
      // Offset 1: integrate the last interval with the cubic through the last four nodes.
      tail[last - 1] = h / 24.0 * (y[last - 3] - 5.0 * y[last - 2] + 19.0 * y[last - 1] + 9.0 * y[last]);
    } else {
      tail[last - 1] = 0.5 * h * (y[last - 1] + y[last]);
    }
  }
  return tail;
}

struct Maximum {
  double x;
  double value;
};

/// Golden-section search for a maximum of a unimodal f on [a, b].
template <class F>
Maximum golden_section_max(F&& f, double a, double b, double rel_tol = 1e-10) {
  const double invphi = (std::sqrt(5.0) - 1.0) / 2.0;
  double c = b - invphi * (b - a);
  double d = a + invphi * (b - a);
  double fc = f(c), fd = f(d);
  for (int it = 0; it < 300 && (b - a) > rel_tol * (std::abs(a) + std::abs(b)); ++it) {
    if (fc > fd) {
      b = d;
      d = c;
      fd = fc;
      c = b - invphi * (b - a);
      fc = f(c);
    } else {
      a = c;
      c = d;
      fc = fd;
      d = a + invphi * (b - a);
      fd = f(d);
    }
  }
  const double x = 0.5 * (a + b);
  return {x, f(x)};
}

}  // namespace wavetails::quad
