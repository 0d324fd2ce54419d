#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <memory>
#include <utility>
#include <vector>

#include "wavetails/error.hpp"

namespace wavetails {

/// A function of r >= 0: either a closed-form callable or uniform samples
/// r_j = j*dr interpolated with local cubics. Sampled profiles vanish beyond
/// their last node.
class RadialProfile {
 public:
  RadialProfile() = default;

  static RadialProfile analytic(std::function<double(double)> fn) {
    RadialProfile p;
    p.fn_ = std::make_shared<const std::function<double(double)>>(std::move(fn));
    return p;
  }

  static RadialProfile sampled(double dr, std::vector<double> values) {
    if (!(dr > 0.0) || values.size() < 4)
      throw Error(ErrorKind::DomainError, "sampled profile needs dr > 0 and at least 4 nodes");
    RadialProfile p;
    p.dr_ = dr;
    p.samples_ = std::make_shared<const std::vector<double>>(std::move(values));
    return p;
  }

  static RadialProfile zero() {
    return analytic([](double) { return 0.0; });
  }

  bool is_sampled() const { return samples_ != nullptr; }
  bool empty() const { return !fn_ && !samples_; }
  double extent() const { return is_sampled() ? dr_ * static_cast<double>(samples_->size() - 1) : INFINITY; }

  double operator()(double r) const {
    r = std::abs(r);
    if (fn_) return (*fn_)(r);
    if (!samples_) return 0.0;
    const auto& y = *samples_;
    const double x = r / dr_;
    const auto n = static_cast<std::ptrdiff_t>(y.size());
    if (x > static_cast<double>(n - 1)) return 0.0;
    auto i = static_cast<std::ptrdiff_t>(std::floor(x));
    i = std::clamp<std::ptrdiff_t>(i, 0, n - 2);
    const double s = x - static_cast<double>(i);
    // Even extension about r = 0 supplies the left neighbour of node 0.
    auto at = [&](std::ptrdiff_t j) -> double {
      if (j < 0) return y[static_cast<std::size_t>(-j)];
      if (j >= n) return 0.0;
      return y[static_cast<std::size_t>(j)];
    };
    const double ym = at(i - 1), y0 = at(i), y1 = at(i + 1), y2 = at(i + 2);
    // Cubic Lagrange through nodes i-1..i+2.
    return -s * (s - 1.0) * (s - 2.0) / 6.0 * ym + (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0 * y0 -
           (s + 1.0) * s * (s - 2.0) / 2.0 * y1 + (s + 1.0) * s * (s - 1.0) / 6.0 * y2;
  }

  /// Samples on r_j = j*dr, j = 0..n-1.
  std::vector<double> sample(double dr, std::size_t n) const {
    std::vector<double> out(n);
    for (std::size_t j = 0; j < n; ++j) out[j] = (*this)(dr * static_cast<double>(j));
    return out;
  }

  RadialProfile scaled(double c) const {
    if (fn_) {
      auto fn = fn_;
      return analytic([fn, c](double r) { return c * (*fn)(r); });
    }
    if (!samples_) return *this;
    std::vector<double> y = *samples_;
    for (double& v : y) v *= c;
    return sampled(dr_, std::move(y));
  }

 private:
  std::shared_ptr<const std::function<double(double)>> fn_;
  std::shared_ptr<const std::vector<double>> samples_;
  double dr_ = 0.0;
};

}  // namespace wavetails
