#pragma once

// The zero-data solution operator L0 for  v_tt - Lap v = N  in spherical
// symmetry, written in null coordinates xi = t + r, eta = t - r:
//
//   v(t,r) = 1/(4r) int_{|t-r|}^{t+r} dxi int_{-xi}^{t-r} deta  rho N,
//   rho = (xi - eta)/2,
//
// together with the perturbation hierarchies built on it.
//
// Two evaluation paths:
//  * duhamel_solve: nested adaptive Gauss-Kronrod, for arbitrary sources.
//  * the hierarchy: lower orders are tabulated as w = rho v on a uniform
//    (xi, eta) grid by double-null marching,
//        w(i,j) = w(i-1,j) + w(i,j-1) - w(i-1,j-1) + 1/4 int_cell rho N,
//    and each order is evaluated at probe points by a fixed composite
//    Gauss-Legendre rule whose breakpoints sit on the grid lines. Both steps
//    are linear in the source, so sums of orders and the iteration form
//    share every quadrature node.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <memory>
#include <string>
#include <vector>

#include "wavetails/error.hpp"
#include "wavetails/initdata.hpp"
#include "wavetails/model.hpp"
#include "wavetails/quadrature.hpp"
#include "wavetails/tails.hpp"

namespace wavetails {

// ---------------------------------------------------------------------------
// Adaptive path

/// A source N(tau, rho) and a box in (xi, eta) outside of which it vanishes.
struct NullDomainSource {
  std::function<double(double, double)> fn;
  double xi_min = -INFINITY;
  double xi_max = INFINITY;
  double eta_min = -INFINITY;
  double eta_max = INFINITY;

  static NullDomainSource wedge(std::function<double(double, double)> f) { return {std::move(f)}; }

  /// Supported in the strip |tau - rho| <= R.
  static NullDomainSource strip(std::function<double(double, double)> f, double R) {
    NullDomainSource s{std::move(f)};
    s.eta_min = -R;
    s.eta_max = R;
    return s;
  }

  static NullDomainSource box(std::function<double(double, double)> f, double xi0, double xi1, double eta0, double eta1) {
    return {std::move(f), xi0, xi1, eta0, eta1};
  }
};

/// Nested adaptive quadrature of the Duhamel integral at (t, r), r > 0.
inline double duhamel_solve(const NullDomainSource& N, double t, double r, const quad::Tolerance& tol = {}) {
  if (!(r > 0.0) || t < 0.0) throw Error(ErrorKind::DomainError, "duhamel_solve needs t >= 0 and r > 0");
  const double xi0 = std::max(std::abs(t - r), N.xi_min);
  const double xi1 = std::min(t + r, N.xi_max);
  if (!(xi1 > xi0)) return 0.0;
  const double eta_top = std::min(t - r, N.eta_max);

  quad::Tolerance inner_tol = tol;
  inner_tol.rel = tol.rel * 0.1;
  inner_tol.abs = std::max(tol.abs * 0.1, 1e-300);
  auto inner = [&](double xi) {
    const double lo = std::max(-xi, N.eta_min);
    if (!(eta_top > lo)) return 0.0;
    auto integrand = [&](double eta) {
      const double rho = 0.5 * (xi - eta);
      return rho * N.fn(0.5 * (xi + eta), rho);
    };
    return quad::integrate(integrand, lo, eta_top, inner_tol).value;
  };
  // The inner range has a corner where -xi meets eta_min.
  double total = 0.0;
  const double kink = -N.eta_min;
  if (std::isfinite(kink) && kink > xi0 && kink < xi1) {
    total = quad::integrate(inner, xi0, kink, tol).value + quad::integrate(inner, kink, xi1, tol).value;
  } else {
    total = quad::integrate(inner, xi0, xi1, tol).value;
  }
  return total / (4.0 * r);
}

// ---------------------------------------------------------------------------
// Reduced forms, valid once the free wave has left: t > r + R

namespace detail {

inline void require_exterior(double t, double r, double R) {
  if (!(t > r + R)) throw Error(ErrorKind::DomainError, "reduced formula needs t > r + R");
  if (!(r > 0.0)) throw Error(ErrorKind::DomainError, "reduced formula needs r > 0");
}

inline std::vector<double> knots_of(const HFunction& h) {
  std::vector<double> k(h.samples().size());
  for (std::size_t j = 0; j < k.size(); ++j) k[j] = h.node(j);
  return k;
}

}  // namespace detail

/// v1 = -(1/4r) int h(eta) int_{t-r}^{t+r} V((xi - eta)/2) dxi deta.
inline double v1_reduced(const HFunction& h, const PotentialSpec& V, double t, double r) {
  detail::require_exterior(t, r, h.R());
  const auto knots = detail::knots_of(h);
  auto inner = [&](double eta) {
    // int V((xi-eta)/2) dxi = 2 int V(rho) drho over [(t-r-eta)/2, (t+r-eta)/2].
    const double a = 0.5 * (t - r - eta), b = 0.5 * (t + r - eta);
    return 2.0 * quad::integrate([&](double rho) { return V(rho); }, a, b, {1e-12, 1e-300, 200}).value;
  };
  // Outer rule on the spline knots; h is a cubic within each panel.
  const double s = quad::composite<4>([&](double eta) {
    const double hv = h(eta);
    return hv == 0.0 ? 0.0 : hv * inner(eta);
  }, knots);
  return -s / (4.0 * r);
}

/// v_p = 2^(p-3) b0 / r * int h^p int_{t-r}^{t+r} (xi - eta)^(1-p) dxi deta.
inline double vp_reduced(const HFunction& h, int p, double b0, double t, double r) {
  detail::require_exterior(t, r, h.R());
  if (p < 3) throw Error(ErrorKind::DomainError, "vp_reduced needs p >= 3");
  const auto knots = detail::knots_of(h);
  const double s = quad::composite<8>([&](double eta) {
    return std::pow(h(eta), p) * lemma2_inner(t, r, eta, p - 1.0);
  }, knots);
  return std::pow(2.0, p - 3) * b0 / r * s;
}

// ---------------------------------------------------------------------------
// Null-grid tables

/// w on nodes (xi_i, eta_j) = (i d, j d), stored for -i <= j <= min(i, J).
/// w vanishes for tau < 0 and is odd under xi <-> eta (rho -> -rho).
class NullTable {
 public:
  NullTable(double step, int imax, int jmax) : d_(step), I_(imax), J_(std::min(jmax, imax)) {
    offset_.resize(static_cast<std::size_t>(I_) + 2);
    std::size_t total = 0;
    for (int i = 0; i <= I_; ++i) {
      offset_[i] = total;
      total += static_cast<std::size_t>(std::min(i, J_) + i + 1);
    }
    offset_[I_ + 1] = total;
    data_.assign(total, 0.0);
  }

  double step() const { return d_; }
  int imax() const { return I_; }
  int jmax() const { return J_; }
  std::size_t nodes() const { return data_.size(); }

  /// Stored node; caller guarantees -i <= j <= min(i, J).
  double& at(int i, int j) { return data_[offset_[i] + static_cast<std::size_t>(j + i)]; }
  double at(int i, int j) const { return data_[offset_[i] + static_cast<std::size_t>(j + i)]; }

  /// Any node, using the symmetry rules.
  double node(int i, int j) const {
    if (i + j < 0) return 0.0;
    if (j > i) return -node(j, i);
    if (i > I_ || j > J_) return 0.0;  // never reached for in-range stencils
    return at(i, j);
  }

  /// Tensor cubic Lagrange interpolation; stencils are shifted inward at the
  /// far edges of the table.
  double operator()(double xi, double eta) const {
    const double x = xi / d_, y = eta / d_;
    int i0 = static_cast<int>(std::floor(x));
    int j0 = static_cast<int>(std::floor(y));
    i0 = std::min(i0, I_ - 2);
    j0 = std::min(j0, J_ - 2);
    const auto wx = weights(x - i0), wy = weights(y - j0);
    double sum = 0.0;
    for (int a = 0; a < 4; ++a) {
      double row = 0.0;
      for (int b = 0; b < 4; ++b) row += wy[b] * node(i0 - 1 + a, j0 - 1 + b);
      sum += wx[a] * row;
    }
    return sum;
  }

 private:
  static std::array<double, 4> weights(double s) {
    return {-s * (s - 1.0) * (s - 2.0) / 6.0, (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0, (s + 1.0) * s * (s - 1.0) / 6.0};
  }

  double d_;
  int I_, J_;
  std::vector<std::size_t> offset_;
  std::vector<double> data_;
};

namespace detail {

inline constexpr int kCellPoints = 4;

/// Fills `out` by marching 4 w_{xi eta} = S(xi, eta) from zero data.
template <class Source>
void march(NullTable& out, Source&& S) {
  const auto& gl = quad::GaussLegendre<kCellPoints>::get();
  const double d = out.step();
  std::array<double, kCellPoints> u{}, wu{};
  for (int q = 0; q < kCellPoints; ++q) {
    u[q] = 0.5 * (1.0 + gl.x[q]);
    wu[q] = 0.5 * gl.w[q];
  }
  for (int i = 1; i <= out.imax(); ++i) {
    const int jtop = std::min(i - 1, out.jmax());
    const double x1 = d * i;
    for (int j = -i + 1; j <= jtop; ++j) {
      const double y1 = d * j;
      double cell = 0.0;
      if (j == -i + 1) {
        // Triangle above tau = 0 with its right angle at (x1, y1).
        for (int a = 0; a < kCellPoints; ++a)
          for (int b = 0; b < kCellPoints; ++b) {
            const double s = u[a], v = u[b];
            cell += wu[a] * wu[b] * s * S(x1 - d * s * v, y1 - d * s * (1.0 - v));
          }
        out.at(i, j) = 0.25 * d * d * cell;
        continue;
      }
      for (int a = 0; a < kCellPoints; ++a)
        for (int b = 0; b < kCellPoints; ++b) cell += wu[a] * wu[b] * S(x1 - d + d * u[a], y1 - d + d * u[b]);
      out.at(i, j) = out.node(i - 1, j) + out.node(i, j - 1) - out.node(i - 1, j - 1) + 0.25 * d * d * cell;
    }
    if (i <= out.jmax()) out.at(i, i) = 0.0;
  }
}

/// 1/(4r) times the integral of S over the domain of dependence of (t, r),
/// composite Gauss-Legendre with breakpoints on multiples of `step`.
template <class Source>
double probe_integral(Source&& S, double t, double r, double step) {
  const auto& gl = quad::GaussLegendre<kCellPoints>::get();
  const double xi0 = std::abs(t - r), xi1 = t + r, top = t - r;
  const auto xb = quad::aligned_breaks(xi0, xi1, step);
  double total = 0.0;
  for (std::size_t k = 0; k + 1 < xb.size(); ++k) {
    const double a = xb[k], b = xb[k + 1];
    const double c = 0.5 * (a + b), hw = 0.5 * (b - a);
    for (int q = 0; q < kCellPoints; ++q) {
      const double xi = c + hw * gl.x[q];
      const double lo = -xi;
      if (!(top > lo)) continue;
      // Inner composite rule over eta in [lo, top] with breaks on the grid.
      double inner = 0.0;
      double e0 = lo;
      double m = std::floor(lo / step) + 1.0;
      while (e0 < top) {
        double e1 = std::min(m * step, top);
        if (e1 - e0 > 1e-12 * step) {
          const double ec = 0.5 * (e0 + e1), eh = 0.5 * (e1 - e0);
          double part = 0.0;
          for (int s = 0; s < kCellPoints; ++s) part += gl.w[s] * S(xi, ec + eh * gl.x[s]);
          inner += eh * part;
        }
        e0 = e1;
        m += 1.0;
      }
      total += hw * gl.w[q] * inner;
    }
  }
  return total / (4.0 * r);
}

/// [U^e]_n summed against the coefficients: the eps^n coefficient of
/// F(sum_k eps^k v_k), with v given for k = 1..n-1 (v[0] unused).
inline double collect_order(const NonlinearitySpec& F, const double* v, int n) {
  const int top_power = F.p + static_cast<int>(F.b.size()) - 1;
  if (n < F.p) return 0.0;
  std::array<double, 64> U{}, P{}, Q{};
  if (n >= static_cast<int>(U.size())) throw Error(ErrorKind::OrderCapExceeded, "order too high for composition");
  for (int k = 1; k < n; ++k) U[k] = v[k];
  // P = U^e, truncated at degree n; U^e starts at degree e.
  std::copy(U.begin(), U.begin() + n + 1, P.begin());
  double result = 0.0;
  for (int e = 2; e <= std::min(top_power, n); ++e) {
    std::fill(Q.begin(), Q.begin() + n + 1, 0.0);
    for (int i = e - 1; i < n; ++i) {
      if (P[i] == 0.0) continue;
      for (int k = 1; i + k <= n; ++k) Q[i + k] += P[i] * U[k];
    }
    std::copy(Q.begin(), Q.begin() + n + 1, P.begin());
    if (e >= F.p) result += F.b[e - F.p] * P[n];
  }
  return result;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Hierarchy

enum class Scheme { Linear, Nonlinear, Combined };

inline std::string to_string(Scheme s) {
  switch (s) {
    case Scheme::Linear: return "linear";
    case Scheme::Nonlinear: return "nonlinear";
    case Scheme::Combined: return "combined";
  }
  return "unknown";
}

struct Probe {
  double t;
  double r;
};

struct HierarchyOptions {
  double step = 0.1;  // null-grid spacing
  int order_cap = 8;
  std::size_t max_table_nodes = 40'000'000;
};

struct PerturbationStack {
  Scheme scheme = Scheme::Linear;
  int first_order = 0;  // 0 for the linear scheme, 1 otherwise
  int n_max = 0;
  int a = 0;                  // order shift of the potential term (combined: p - 1)
  double lambda = 0.0;        // coupling in the equation
  double lambda_tilde = 0.0;  // lambda / eps^a (combined) or lambda
  double epsilon = 1.0;
  std::vector<Probe> probes;
  std::vector<std::vector<double>> values;     // values[n][probe], n in [0, n_max]
  std::vector<std::vector<double>> potential;  // combined: -lambda~ L0(V v_{n-a}) part
  std::vector<std::vector<double>> nonlinear;  // combined: L0(F_n) part
  std::vector<bool> zero;                      // structurally vanishing orders

  double scale() const { return scheme == Scheme::Linear ? lambda : epsilon; }

  std::size_t probe_index(double t, double r) const {
    for (std::size_t i = 0; i < probes.size(); ++i)
      if (std::abs(probes[i].t - t) <= 1e-12 * std::max(1.0, t) && std::abs(probes[i].r - r) <= 1e-12 * std::max(1.0, r))
        return i;
    throw Error(ErrorKind::DomainError, "(" + std::to_string(t) + ", " + std::to_string(r) + ") is not a probe");
  }
};

namespace detail {

/// w_k(xi, eta) for the orders of one hierarchy: the analytic free wave at
/// the first order, tables above it, zero where the order vanishes.
struct OrderFields {
  const HFunction* h = nullptr;
  int first = 0;
  std::vector<std::shared_ptr<NullTable>> tables;  // indexed by order
  std::vector<bool> zero;

  double w(int k, double xi, double eta) const {
    if (k == first) return (*h)(eta) - (*h)(xi);
    if (zero[k]) return 0.0;
    return (*tables[k])(xi, eta);
  }
};

struct SchemeSetup {
  Scheme scheme;
  int first;
  int a;
  double lambda_tilde;
  double epsilon;
};

inline SchemeSetup scheme_of(const ModelConfig& c) {
  const bool lin = c.potential.has_value();
  const bool nl = c.nonlinearity.has_value();
  if (lin && !nl) return {Scheme::Linear, 0, 1, c.potential->lambda, 1.0};
  if (!lin && nl) return {Scheme::Nonlinear, 1, 0, 0.0, c.nonlinearity->epsilon};
  if (lin && nl) {
    const double eps = c.nonlinearity->epsilon;
    const int a = c.nonlinearity->p - 1;
    return {Scheme::Combined, 1, a, c.potential->lambda / std::pow(eps, a), eps};
  }
  throw Error(ErrorKind::ConfigError, "hierarchy needs a potential, a nonlinearity, or both");
}

}  // namespace detail

/// Orders v_first..v_{n_max} at the probes. `data` is the Cauchy data without
/// the epsilon factor (the series is in powers of epsilon).
inline PerturbationStack build_hierarchy(const ModelConfig& config, const CauchyData& data, int n_max,
                                         const std::vector<Probe>& probes, const HierarchyOptions& opt = {}) {
  if (n_max > opt.order_cap)
    throw Error(ErrorKind::OrderCapExceeded, "n_max = " + std::to_string(n_max) + " exceeds cap " + std::to_string(opt.order_cap));
  const auto setup = detail::scheme_of(config);
  if (n_max < setup.first) throw Error(ErrorKind::DomainError, "n_max below the first order");
  for (const auto& pr : probes)
    if (!(pr.r > 0.0) || pr.t < 0.0) throw Error(ErrorKind::DomainError, "probes need t >= 0 and r > 0");

  PerturbationStack st;
  st.scheme = setup.scheme;
  st.first_order = setup.first;
  st.n_max = n_max;
  st.a = setup.a;
  st.lambda = config.potential ? config.potential->lambda : 0.0;
  st.lambda_tilde = setup.lambda_tilde;
  st.epsilon = setup.epsilon;
  st.probes = probes;
  st.values.assign(n_max + 1, {});
  st.potential.assign(n_max + 1, {});
  st.nonlinear.assign(n_max + 1, {});
  st.zero.assign(n_max + 1, false);

  const HFunction h = build_h(data);
  detail::OrderFields fields;
  fields.h = &h;
  fields.first = setup.first;
  fields.tables.resize(n_max + 1);
  fields.zero.assign(n_max + 1, false);

  const PotentialSpec* V = config.potential ? &*config.potential : nullptr;
  const NonlinearitySpec* F = config.nonlinearity ? &*config.nonlinearity : nullptr;

  // An order vanishes identically when no source term reaches it.
  auto feeds_potential = [&](int n) { return V && n - setup.a >= setup.first && !fields.zero[n - setup.a]; };
  auto feeds_nonlinear = [&](int n) { return F && n >= F->p; };
  for (int n = setup.first + 1; n <= n_max; ++n) {
    fields.zero[n] = !(feeds_potential(n) || feeds_nonlinear(n));
    st.zero[n] = fields.zero[n];
  }

  double xi_max = 0.0, eta_max = 0.0;
  for (const auto& pr : probes) {
    xi_max = std::max(xi_max, pr.t + pr.r);
    eta_max = std::max(eta_max, pr.t - pr.r);
  }
  const double d = opt.step;
  const int I = static_cast<int>(std::ceil(xi_max / d)) + 3;
  const int J = std::max(static_cast<int>(std::ceil(eta_max / d)) + 3, 3);

  // Which orders feed a later source.
  const int shift = (setup.scheme == Scheme::Linear) ? 1 : (F ? F->p - 1 : setup.a);
  const int last_tabulated = n_max - shift;

  // Sources for order n, as rho N.
  auto potential_source = [&](int n) {
    const int k = n - setup.a;
    const double coef = setup.scheme == Scheme::Linear ? -1.0 : -setup.lambda_tilde;
    return [&, k, coef](double xi, double eta) {
      return coef * (*V)(0.5 * (xi - eta)) * fields.w(k, xi, eta);
    };
  };
  auto nonlinear_source = [&](int n) {
    return [&, n](double xi, double eta) {
      const double rho = 0.5 * (xi - eta);
      if (!(rho > 0.0)) return 0.0;
      std::array<double, 64> v{};
      for (int k = 1; k <= n - F->p + 1; ++k) v[k] = fields.w(k, xi, eta) / rho;
      return rho * detail::collect_order(*F, v.data(), n);
    };
  };
  for (int n = setup.first; n <= n_max; ++n) {
    auto& vals = st.values[n];
    vals.assign(probes.size(), 0.0);
    if (n == setup.first) {
      for (std::size_t q = 0; q < probes.size(); ++q) vals[q] = free_solution(h, probes[q].t, probes[q].r);
      continue;
    }
    if (fields.zero[n]) continue;
    const bool pot = feeds_potential(n);
    const bool non = feeds_nonlinear(n);
    const auto pot_src = potential_source(n);
    const auto non_src = nonlinear_source(n);
    auto total_source = [&](double xi, double eta) {
      double s = 0.0;
      if (pot) s += pot_src(xi, eta);
      if (non) s += non_src(xi, eta);
      return s;
    };
    if (setup.scheme == Scheme::Combined) {
      st.potential[n].assign(probes.size(), 0.0);
      st.nonlinear[n].assign(probes.size(), 0.0);
      for (std::size_t q = 0; q < probes.size(); ++q) {
        if (pot) st.potential[n][q] = detail::probe_integral(pot_src, probes[q].t, probes[q].r, d);
        if (non) st.nonlinear[n][q] = detail::probe_integral(non_src, probes[q].t, probes[q].r, d);
        vals[q] = st.potential[n][q] + st.nonlinear[n][q];
      }
    } else {
      for (std::size_t q = 0; q < probes.size(); ++q)
        vals[q] = detail::probe_integral(total_source, probes[q].t, probes[q].r, d);
    }
    if (n <= last_tabulated) {
      auto table = std::make_shared<NullTable>(d, I, J);
      if (table->nodes() > opt.max_table_nodes)
        throw Error(ErrorKind::ConfigError, "null grid needs " + std::to_string(table->nodes()) + " nodes; increase the step");
      detail::march(*table, total_source);
      fields.tables[n] = std::move(table);
    }
  }
  return st;
}

/// sum_{first <= n <= order} scale^n v_n at a probe.
inline double partial_sum(const PerturbationStack& st, int order, double t, double r) {
  if (order > st.n_max) throw Error(ErrorKind::DomainError, "order above n_max");
  const std::size_t q = st.probe_index(t, r);
  double sum = 0.0;
  for (int n = st.first_order; n <= order; ++n) sum += std::pow(st.scale(), n) * st.values[n][q];
  return sum;
}

/// Linear scheme in iteration form, u_{n+1} = I0(f, g) - lambda L0(V u_n),
/// on the same null grid and probe rule as build_hierarchy. Returns u_n at
/// the probes for n = 0..n_max.
inline std::vector<std::vector<double>> iterate_linear(const ModelConfig& config, const CauchyData& data, int n_max,
                                                       const std::vector<Probe>& probes, const HierarchyOptions& opt = {}) {
  if (!config.potential || config.nonlinearity) throw Error(ErrorKind::ConfigError, "iteration form needs the linear scheme");
  if (n_max > opt.order_cap) throw Error(ErrorKind::OrderCapExceeded, "n_max exceeds the cap");
  const HFunction h = build_h(data);
  const PotentialSpec& V = *config.potential;
  const double lambda = V.lambda;
  double xi_max = 0.0, eta_max = 0.0;
  for (const auto& pr : probes) {
    xi_max = std::max(xi_max, pr.t + pr.r);
    eta_max = std::max(eta_max, pr.t - pr.r);
  }
  const double d = opt.step;
  const int I = static_cast<int>(std::ceil(xi_max / d)) + 3;
  const int J = std::max(static_cast<int>(std::ceil(eta_max / d)) + 3, 3);

  std::vector<std::vector<double>> out(n_max + 1, std::vector<double>(probes.size()));
  std::vector<double> free(probes.size());
  for (std::size_t q = 0; q < probes.size(); ++q) free[q] = free_solution(h, probes[q].t, probes[q].r);
  out[0] = free;

  // u_n = free wave + table; the table of u_0 is empty.
  std::shared_ptr<NullTable> prev;
  for (int n = 1; n <= n_max; ++n) {
    auto source = [&](double xi, double eta) {
      const double w = h(eta) - h(xi) + (prev ? (*prev)(xi, eta) : 0.0);
      return -lambda * V(0.5 * (xi - eta)) * w;
    };
    for (std::size_t q = 0; q < probes.size(); ++q)
      out[n][q] = free[q] + detail::probe_integral(source, probes[q].t, probes[q].r, d);
    if (n < n_max) {
      auto table = std::make_shared<NullTable>(d, I, J);
      detail::march(*table, source);
      prev = std::move(table);
    }
  }
  return out;
}

// ---------------------------------------------------------------------------

struct FieldSample {
  double t;
  double r;
  double u;
};

/// sup <t+r>^s <t-r>^(q-s) |u| over the samples: a lower bound for the
/// norm over the region they cover.
inline double weighted_norm(const std::vector<FieldSample>& samples, double s, double q) {
  double m = 0.0;
  for (const auto& x : samples)
    m = std::max(m, std::pow(bracket(x.t + x.r), s) * std::pow(bracket(x.t - x.r), q - s) * std::abs(x.u));
  return m;
}

}  // namespace wavetails
