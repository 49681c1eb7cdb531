#pragma once

// Shared test helpers: independent oracles (brute-force dilogarithm series,
// LU determinant), rejection samplers for valid configurations, and
// finite-difference helpers for the volume derivatives.

#include <array>
#include <cmath>
#include <complex>
#include <random>

#include <hyptet/jacobian.hpp>
#include <hyptet/prism.hpp>
#include <hyptet/volume.hpp>

namespace testsupport {

using hyptet::Complex;

// Brute-force dilogarithm series; converges to ~1e-19 for |z| <= 0.5.
inline Complex dilog_series_oracle(Complex z, int terms = 200) {
  Complex sum(0.0, 0.0);
  Complex p(1.0, 0.0);
  for (int n = 1; n <= terms; ++n) {
    p *= z;
    sum += p / static_cast<double>(n) / static_cast<double>(n);
  }
  return sum;
}

// Determinant by Gaussian elimination with partial pivoting; independent of
// the library's cofactor-expansion route.
inline double lu_det4(std::array<std::array<double, 4>, 4> m) {
  double det = 1.0;
  for (int col = 0; col < 4; ++col) {
    int piv = col;
    for (int r = col + 1; r < 4; ++r)
      if (std::fabs(m[r][col]) > std::fabs(m[piv][col])) piv = r;
    if (m[piv][col] == 0.0) return 0.0;
    if (piv != col) {
      std::swap(m[piv], m[col]);
      det = -det;
    }
    det *= m[col][col];
    for (int r = col + 1; r < 4; ++r) {
      const double f = m[r][col] / m[col][col];
      for (int c = col; c < 4; ++c) m[r][c] -= f * m[col][c];
    }
  }
  return det;
}

inline std::array<std::array<double, 4>, 4> to_array(const hyptet::GramMatrix& g) {
  std::array<std::array<double, 4>, 4> m;
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 4; ++j) m[i][j] = g(i, j);
  return m;
}

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  double uniform(double a, double b) {
    return std::uniform_real_distribution<double>(a, b)(eng);
  }
  Complex in_disk(double radius) {
    const double r = radius * std::sqrt(uniform(0.0, 1.0));
    const double ph = uniform(-hyptet::kPi, hyptet::kPi);
    return std::polar(r, ph);
  }
};

// Margins keeping sampled configurations interior to the valid region, so
// finite-difference probes (step <= 1e-3) stay valid.
inline bool mild_margins_ok(const hyptet::MildTetConfig& cfg) {
  using namespace hyptet;
  const GramMatrix g = gram_mild(cfg);
  if (!gram_validity(g, cfg.signs)) return false;
  const GramMatrix k = g.dual_layout();
  if (determinant(k) > -1e-2) return false;
  for (int i = 0; i < 4; ++i)
    if (sign_value(cfg.signs[i]) * principal_minor(k, i) < 5e-2) return false;
  try {
    const EdgeQuantities eq = edge_quantities(g, cfg.signs);
    for (int e = 0; e < 6; ++e) {
      const auto [kk, ll] = kEdges[e];
      // acosh-type edges (equal signs) have unbounded derivatives as the
      // length shrinks; near-vanishing minors blow the lengths up.  Keep the
      // configuration uniformly interior so 1e-5 probes stay second-order.
      const bool acosh_edge = sign_value(cfg.signs[kk]) * sign_value(cfg.signs[ll]) == 1;
      if (eq.edge[e].length < (acosh_edge ? 0.25 : 0.05)) return false;
      if (eq.edge[e].length > 2.2) return false;
      if (std::fabs(eq.edge[e].sigma) < 0.05) return false;
    }
  } catch (const InvalidConfiguration&) {
    return false;
  }
  return true;
}

// pattern 0: all proper; 1: one ultra-ideal; 2: two ultra-ideal.
inline hyptet::MildTetConfig sample_mild(Rng& rng, int pattern) {
  using namespace hyptet;
  for (int tries = 0; tries < 200000; ++tries) {
    MildTetConfig cfg;
    switch (pattern % 3) {
      case 0:
        cfg.signs = kAllProper;
        for (int e = 0; e < 6; ++e) cfg.angles[e] = rng.uniform(1.0, 1.4);
        break;
      case 1:
        cfg.signs = {VertexSign::UltraIdeal, VertexSign::Proper, VertexSign::Proper,
                     VertexSign::Proper};
        // angles at vertex 0 small, opposite-face angles moderate
        cfg.angles[0] = rng.uniform(0.3, 0.9);
        cfg.angles[1] = rng.uniform(0.3, 0.9);
        cfg.angles[2] = rng.uniform(0.3, 0.9);
        cfg.angles[3] = rng.uniform(0.9, 1.6);
        cfg.angles[4] = rng.uniform(0.9, 1.6);
        cfg.angles[5] = rng.uniform(0.9, 1.6);
        break;
      default:
        cfg.signs = kPrismSigns;  // two ultra-ideal, mild (disjoint polars)
        cfg.angles[0] = rng.uniform(0.2, 1.2);
        cfg.angles[1] = rng.uniform(0.3, 1.0);
        cfg.angles[2] = rng.uniform(0.3, 1.0);
        cfg.angles[3] = rng.uniform(0.3, 1.0);
        cfg.angles[4] = rng.uniform(0.3, 1.0);
        cfg.angles[5] = rng.uniform(0.9, 1.9);
        break;
    }
    if (mild_margins_ok(cfg)) return cfg;
  }
  throw std::runtime_error("sample_mild: sampler exhausted");
}

// Realizable prism truncated configurations with mu in [0.1, 1.6] (the
// principal-branch-safe zone) and interior margins.
inline hyptet::PrismTetConfig sample_prism(Rng& rng) {
  using namespace hyptet;
  for (int tries = 0; tries < 400000; ++tries) {
    PrismTetConfig cfg;
    cfg.theta1 = rng.uniform(0.3, 2.4);
    cfg.theta2 = rng.uniform(0.4, 2.0);
    cfg.theta3 = rng.uniform(0.4, 2.0);
    cfg.theta5 = rng.uniform(0.4, 2.0);
    cfg.theta6 = rng.uniform(0.4, 2.0);
    cfg.ell = rng.uniform(0.1, 1.4);
    const GramMatrix g = gram_prism(cfg);
    if (!gram_validity(g, kPrismSigns)) continue;
    const GramMatrix k = g.dual_layout();
    if (determinant(k) > -1e-4) continue;
    bool minors_ok = true;
    for (int i = 0; i < 4; ++i)
      if (sign_value(kPrismSigns[i]) * principal_minor(k, i) < 1e-4) minors_ok = false;
    if (!minors_ok) continue;
    try {
      const EdgeQuantities eq = edge_quantities(g, kPrismSigns);
      const double mu = eq.mu();
      if (mu < 0.1 || mu > 1.6) continue;
      bool lengths_ok = true;
      for (int e = 1; e < 6; ++e) {
        // edge 5 = pair (2,3), the acosh-type edge between the proper vertices
        const double floor = (e == 5) ? 0.25 : 0.08;
        if (eq.edge[e].length < floor || eq.edge[e].length > 2.2) lengths_ok = false;
      }
      if (!lengths_ok) continue;
    } catch (const InvalidConfiguration&) {
      continue;
    }
    return cfg;
  }
  throw std::runtime_error("sample_prism: sampler exhausted");
}

inline double max_abs(const hyptet::DualJacobian& j) {
  double m = 0;
  for (const auto& row : j.m)
    for (double v : row) m = std::max(m, std::fabs(v));
  return m;
}

inline double max_abs_diff(const hyptet::DualJacobian& a, const hyptet::DualJacobian& b) {
  double m = 0;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) m = std::max(m, std::fabs(a.m[r][c] - b.m[r][c]));
  return m;
}

// Relative deviation of two Jacobians: max entry difference over the scale
// max(1, max |entry|).
inline double jacobian_rel_dev(const hyptet::DualJacobian& a, const hyptet::DualJacobian& b) {
  return max_abs_diff(a, b) / std::max(1.0, max_abs(a));
}

inline hyptet::PrismTetConfig with_ell(hyptet::PrismTetConfig cfg, double ell) {
  cfg.ell = ell;
  return cfg;
}

// Solves mu_angle(theta; ell) = mu_target for ell by bisection (mu is
// strictly increasing in ell).
inline double ell_for_mu(const hyptet::PrismTetConfig& cfg, double mu_target) {
  double lo = cfg.ell, hi = cfg.ell;
  auto f = [&cfg](double l) { return hyptet::mu_angle(with_ell(cfg, l)); };
  for (int i = 0; i < 60 && f(lo) > mu_target; ++i) lo *= 0.9;
  for (int i = 0; i < 60 && f(hi) < mu_target; ++i) hi *= 1.1;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (f(mid) < mu_target)
      lo = mid;
    else
      hi = mid;
    if (hi - lo < 1e-15 * std::max(1.0, hi)) break;
  }
  return 0.5 * (lo + hi);
}

// d(tet volume)/d(theta_k) at fixed mu: the inner solve keeps the dihedral
// angle along the intense edge constant while theta_k varies.
inline double dvol_dtheta_fixed_mu(const hyptet::PrismTetConfig& cfg, int k, double step) {
  const double mu0 = hyptet::mu_angle(cfg);
  auto shifted = [&cfg](int which, double h) {
    hyptet::PrismTetConfig p = cfg;
    double* f[5] = {&p.theta1, &p.theta2, &p.theta3, &p.theta5, &p.theta6};
    *f[which] += h;
    return p;
  };
  hyptet::PrismTetConfig p = shifted(k, step), m = shifted(k, -step);
  p.ell = ell_for_mu(p, mu0);
  m.ell = ell_for_mu(m, mu0);
  return (hyptet::tet_volume(p) - hyptet::tet_volume(m)) / (2.0 * step);
}

}  // namespace testsupport
