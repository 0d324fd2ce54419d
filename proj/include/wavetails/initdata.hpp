#pragma once

// Cauchy data (f, g) and the single-variable profile h that encodes the free
// spherical wave  u0(t,r) = [h(t-r) - h(t+r)] / r.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "wavetails/error.hpp"
#include "wavetails/model.hpp"
#include "wavetails/profile.hpp"
#include "wavetails/quadrature.hpp"

namespace wavetails {

inline constexpr double kSupportThreshold = 1e-12;

struct CauchyData {
  RadialProfile f;
  RadialProfile g;
  double R = 0.0;
  /// |(1/2) int_R^inf r g dr| + (R/2)|f(R)|: what cutting the data at R drops from h.
  double truncation = 0.0;
  bool effective_support = false;

  CauchyData scaled(double c) const {
    return {f.scaled(c), g.scaled(c), R, std::abs(c) * truncation, effective_support};
  }
};

/// Smallest R with |f|, |g| < threshold on [R, r_scan].
inline double effective_radius(const RadialProfile& f, const RadialProfile& g, double threshold = kSupportThreshold,
                               double r_scan = 60.0, double step = 1e-3) {
  for (double r = r_scan; r >= 0.0; r -= step) {
    if (std::abs(f(r)) >= threshold || std::abs(g(r)) >= threshold) return std::min(r + step, r_scan);
  }
  return step;
}

/// Throws SupportViolation if f or g is visibly nonzero beyond R.
inline void check_support(const CauchyData& d, double tol = kSupportThreshold) {
  const double stop = d.R + std::max(10.0, d.R);
  for (double r = d.R; r <= stop; r += 1e-2) {
    if (std::abs(d.f(r)) > tol || std::abs(d.g(r)) > tol)
      throw Error(ErrorKind::SupportViolation, "data nonzero at r = " + std::to_string(r) + " > R = " + std::to_string(d.R));
  }
}

namespace data_family {

inline double paper_gaussian_g(double r) { return 4.0 * (r * r - 1.0) * std::exp(-r * r); }

/// exp(1 - 1/(1-x^2)) on |x| < 1: smooth, compactly supported, peak 1 at x = 0.
inline double bump(double x) {
  const double s = 1.0 - x * x;
  return s > 0.0 ? std::exp(1.0 - 1.0 / s) : 0.0;
}

inline double tail_truncation(const CauchyData& d) {
  auto integrand = [&](double r) { return r * d.g(r); };
  const double far = d.R + 30.0;
  const double tail = quad::integrate(integrand, d.R, far, {1e-10, 1e-300, 200}).value;
  return 0.5 * std::abs(tail) + 0.5 * d.R * std::abs(d.f(d.R));
}

/// f = 0, g = 4(r^2 - 1) exp(-r^2), cut at the effective radius.
inline CauchyData paper_gaussian(double amplitude = 1.0) {
  CauchyData d;
  d.f = RadialProfile::zero();
  d.g = RadialProfile::analytic([amplitude](double r) { return amplitude * paper_gaussian_g(r); });
  d.R = effective_radius(d.f, d.g);
  d.effective_support = true;
  d.truncation = tail_truncation(d);
  return d;
}

inline CauchyData smooth_bump(double radius, double f_amp, double g_amp) {
  if (!(radius > 0.0)) throw Error(ErrorKind::DomainError, "bump radius must be positive");
  CauchyData d;
  d.f = RadialProfile::analytic([=](double r) { return f_amp * bump(r / radius); });
  d.g = RadialProfile::analytic([=](double r) { return g_amp * bump(r / radius); });
  d.R = radius;
  return d;
}

/// CSV with header `r,f,g` on a uniform grid starting at r = 0.
inline CauchyData tabulated(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open data table " + path);
  std::string line;
  std::getline(in, line);
  std::vector<double> rs, fs, gs;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ss(line);
    double r, f, g;
    if (!(ss >> r >> f >> g)) throw Error(ErrorKind::ConfigError, path + ":" + std::to_string(lineno) + ": expected r,f,g");
    rs.push_back(r);
    fs.push_back(f);
    gs.push_back(g);
  }
  if (rs.size() < 4 || rs.front() != 0.0) throw Error(ErrorKind::ConfigError, path + ": table must start at r = 0 with >= 4 rows");
  const double dr = rs[1] - rs[0];
  for (std::size_t i = 1; i < rs.size(); ++i)
    if (std::abs(rs[i] - rs[i - 1] - dr) > 1e-9 * std::max(1.0, rs[i]))
      throw Error(ErrorKind::ConfigError, path + ": r column must be uniformly spaced");
  CauchyData d;
  d.f = RadialProfile::sampled(dr, std::move(fs));
  d.g = RadialProfile::sampled(dr, std::move(gs));
  d.R = effective_radius(d.f, d.g, kSupportThreshold, d.f.extent(), dr);
  d.effective_support = true;
  return d;
}

}  // namespace data_family

inline CauchyData make_cauchy_data(const DataSelector& sel, double scale = 1.0) {
  const double a = sel.amplitude * scale;
  if (sel.family == "paper-gaussian") return data_family::paper_gaussian(a);
  if (sel.family == "bump") return data_family::smooth_bump(sel.bump_radius, a * sel.bump_f, a * sel.bump_g);
  if (sel.family == "tabulated") return data_family::tabulated(sel.table_path).scaled(a);
  throw Error(ErrorKind::ConfigError, "unknown data family '" + sel.family + "'");
}

/// Clamped cubic spline of h on a symmetric uniform grid over [-R, R];
/// identically zero outside.
class HFunction {
 public:
  HFunction() = default;

  HFunction(double R, std::vector<double> values) : R_(R), y_(std::move(values)) {
    if (y_.size() < 3 || !(R > 0.0)) throw Error(ErrorKind::DomainError, "HFunction needs R > 0 and >= 3 samples");
    dz_ = 2.0 * R_ / static_cast<double>(y_.size() - 1);
    build_spline();
  }

  double R() const { return R_; }
  double dz() const { return dz_; }
  const std::vector<double>& samples() const { return y_; }
  double node(std::size_t j) const { return -R_ + dz_ * static_cast<double>(j); }

  double operator()(double z) const {
    if (!(z > -R_ && z < R_)) return 0.0;
    const auto [i, s] = locate(z);
    const double a = 1.0 - s;
    return a * y_[i] + s * y_[i + 1] +
           ((a * a * a - a) * m_[i] + (s * s * s - s) * m_[i + 1]) * dz_ * dz_ / 6.0;
  }

  double derivative(double z) const {
    if (!(z > -R_ && z < R_)) return 0.0;
    const auto [i, s] = locate(z);
    const double a = 1.0 - s;
    return (y_[i + 1] - y_[i]) / dz_ + (-(3.0 * a * a - 1.0) * m_[i] + (3.0 * s * s - 1.0) * m_[i + 1]) * dz_ / 6.0;
  }

  /// Composite Simpson of h^power over the sample grid.
  double integral_power(int power = 1) const {
    std::vector<double> v(y_.size());
    for (std::size_t j = 0; j < y_.size(); ++j) v[j] = std::pow(y_[j], power);
    return quad::simpson(v, dz_);
  }

  double integral_abs() const {
    std::vector<double> v(y_.size());
    for (std::size_t j = 0; j < y_.size(); ++j) v[j] = std::abs(y_[j]);
    return quad::simpson(v, dz_);
  }

 private:
  std::pair<std::size_t, double> locate(double z) const {
    const double x = (z + R_) / dz_;
    auto i = static_cast<std::size_t>(std::floor(x));
    i = std::min(i, y_.size() - 2);
    return {i, x - static_cast<double>(i)};
  }

  void build_spline() {
    // Clamped end conditions h'(+-R) = 0 (h vanishes with its derivative there).
    const std::size_t n = y_.size();
    std::vector<double> a(n, 1.0), b(n, 4.0), c(n, 1.0), d(n, 0.0);
    b[0] = 2.0;
    b[n - 1] = 2.0;
    d[0] = 6.0 / (dz_ * dz_) * (y_[1] - y_[0]);
    d[n - 1] = 6.0 / (dz_ * dz_) * (y_[n - 2] - y_[n - 1]);
    for (std::size_t i = 1; i + 1 < n; ++i) d[i] = 6.0 / (dz_ * dz_) * (y_[i + 1] - 2.0 * y_[i] + y_[i - 1]);
    // Thomas algorithm.
    for (std::size_t i = 1; i < n; ++i) {
      const double w = a[i] / b[i - 1];
      b[i] -= w * c[i - 1];
      d[i] -= w * d[i - 1];
    }
    m_.assign(n, 0.0);
    m_[n - 1] = d[n - 1] / b[n - 1];
    for (std::size_t i = n - 1; i-- > 0;) m_[i] = (d[i] - c[i] * m_[i + 1]) / b[i];
  }

  double R_ = 0.0;
  double dz_ = 0.0;
  std::vector<double> y_;
  std::vector<double> m_;
};

/// h(z) = -(z/2) f(|z|) + (1/2) int_z^R r' g(|r'|) dr' on 2*half_intervals
/// uniform intervals over [-R, R], integrated by cumulative Simpson.
inline HFunction build_h(const CauchyData& data, int half_intervals = 1200, double tol = 1e-9) {
  const double R = data.R;
  if (!(R > 0.0)) throw Error(ErrorKind::DomainError, "support radius must be positive");
  const std::size_t n = 2 * static_cast<std::size_t>(half_intervals) + 1;
  const double dz = R / half_intervals;
  std::vector<double> z(n), integrand(n);
  for (std::size_t j = 0; j < n; ++j) {
    z[j] = -R + dz * static_cast<double>(j);
    integrand[j] = z[j] * data.g(std::abs(z[j]));
  }
  const auto tail = quad::cumulative_simpson_from_right(integrand, dz);
  std::vector<double> h(n);
  double scale = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    h[j] = -0.5 * z[j] * data.f(std::abs(z[j])) + 0.5 * tail[j];
    scale = std::max(scale, std::abs(h[j]));
  }
  const double limit = tol * std::max(1.0, scale);
  if (std::abs(h.front()) > limit || std::abs(h.back()) > limit)
    throw Error(ErrorKind::SupportViolation, "h(-R) = " + std::to_string(h.front()) + ", h(R) = " +
                                                 std::to_string(h.back()) + " exceed tolerance");
  h.front() = 0.0;
  h.back() = 0.0;
  return HFunction(R, std::move(h));
}

/// u0(t, r) = [h(t-r) - h(t+r)] / r, with the r -> 0 limit -2 h'(t).
inline double free_solution(const HFunction& h, double t, double r) {
  if (r == 0.0) return -2.0 * h.derivative(t);
  return (h(t - r) - h(t + r)) / r;
}

struct DataNorms {
  double f0 = 0.0;
  double f1 = 0.0;
  double g0 = 0.0;
};

/// Weighted sup-norms ||f||_k, ||f'||_{k+1}, ||g||_{k+1} over r_j = j*dr up to R;
/// f' by centered differences.
inline DataNorms data_norms(const CauchyData& data, double k, double dr = 1e-3) {
  DataNorms n;
  const auto count = static_cast<std::size_t>(std::ceil(data.R / dr)) + 1;
  for (std::size_t j = 0; j <= count; ++j) {
    const double r = dr * static_cast<double>(j);
    const double w = 1.0 + r;
    const double fp = (data.f(r + dr) - data.f(std::abs(r - dr))) / (2.0 * dr);
    n.f0 = std::max(n.f0, std::pow(w, k) * std::abs(data.f(r)));
    n.f1 = std::max(n.f1, std::pow(w, k + 1.0) * std::abs(j == 0 ? 0.0 : fp));
    n.g0 = std::max(n.g0, std::pow(w, k + 1.0) * std::abs(data.g(r)));
  }
  return n;
}

}  // namespace wavetails
