#pragma once

// Volume of a hyperbolic n-gonal prism by decomposition into n prism
// truncated tetrahedra glued along the common perpendicular of the top and
// bottom faces.  The perpendicular's length ell* is the unique zero of
//   phi'(ell) = pi - (1/2) sum_k mu_k(ell),
// which is strictly decreasing (each mu_k increases with ell).

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "errors.hpp"
#include "volume.hpp"

namespace hyptet {

struct PrismSpec {
  int n = 0;
  // Dihedral angles, all in (0, pi): alpha along the bottom-face edges,
  // beta along the top-face edges, gamma along the vertical edges.  Side k
  // (1-based) is adjacent to alpha_k, beta_k and gamma_k, gamma_{k+1}.
  std::vector<double> alpha, beta, gamma;
  // Mirrored angle-slot orientation for the per-side tetrahedra (swaps which
  // of beta_k / beta_{k+1} lands on theta2 vs theta3, and alpha likewise).
  bool mirrored = false;
};

struct SolveOptions {
  double tol = 1e-10;         // |phi'(ell*)| <= tol * pi
  double bracket_lo = 0.05;
  double bracket_hi = 1.0;
  double max_ell = 32.0;      // expansion cap
  int max_iterations = 200;
};

struct PrismSolution {
  double ell_star = 0;
  std::vector<double> mu;           // per-side dihedral angle along ell*
  std::vector<double> tet_volumes;  // per-side tetrahedron volume
  double total_volume = 0;
  int iterations = 0;
  double residual = 0;  // |phi'(ell_star)|
};

namespace detail {

inline void validate_spec(const PrismSpec& spec) {
  if (spec.n < 3) throw std::invalid_argument("prism: n must be >= 3");
  auto check = [&](const std::vector<double>& v, const char* name) {
    if (static_cast<int>(v.size()) != spec.n)
      throw std::invalid_argument(std::string("prism: ") + name + " must have n entries");
    for (double x : v)
      if (!(x > 0.0 && x < kPi))
        throw std::invalid_argument(std::string("prism: ") + name +
                                    " angles must lie in (0, pi)");
  };
  check(spec.alpha, "alpha");
  check(spec.beta, "beta");
  check(spec.gamma, "gamma");
}

}  // namespace detail

// The k-th decomposition tetrahedron T(alpha_k, alpha_{k+1}, beta_k,
// beta_{k+1}, gamma_{k+1}; ell), k = 1..n with cyclic indices.
inline PrismTetConfig tet_config_for_side(const PrismSpec& spec, int k, double ell) {
  detail::validate_spec(spec);
  if (k < 1 || k > spec.n)
    throw std::invalid_argument("tet_config_for_side: side index out of range");
  const int k0 = k - 1;
  const int k1 = k % spec.n;  // k (+) 1, zero-based
  PrismTetConfig cfg;
  cfg.theta1 = spec.gamma[k1];
  if (!spec.mirrored) {
    cfg.theta2 = spec.beta[k0];
    cfg.theta3 = spec.beta[k1];
    cfg.theta5 = spec.alpha[k0];
    cfg.theta6 = spec.alpha[k1];
  } else {
    cfg.theta2 = spec.beta[k1];
    cfg.theta3 = spec.beta[k0];
    cfg.theta5 = spec.alpha[k1];
    cfg.theta6 = spec.alpha[k0];
  }
  cfg.ell = ell;
  return cfg;
}

// phi'(ell) = pi - (1/2) sum_k mu_k(ell).  Validity failures carry the
// offending side index.
inline double phi_prime(const PrismSpec& spec, double ell) {
  detail::validate_spec(spec);
  double sum = 0.0;
  for (int k = 1; k <= spec.n; ++k) {
    double mu;
    try {
      mu = mu_angle(tet_config_for_side(spec, k, ell));
    } catch (const InvalidConfiguration& e) {
      throw InvalidConfiguration("phi_prime: side " + std::to_string(k) + " at ell = " +
                                 std::to_string(ell) + ": " + e.what());
    }
    if (!(mu > 0.0 && mu < kPi))
      throw InvalidConfiguration("phi_prime: side " + std::to_string(k) +
                                 " produced mu outside (0, pi)");
    sum += mu;
  }
  return kPi - 0.5 * sum;
}

// Sign-change bracketing (geometric expansion from [bracket_lo, bracket_hi])
// followed by Brent iteration until |phi'| <= tol * pi.
inline double solve_ell_star(const PrismSpec& spec, double tol,
                             const SolveOptions& base = {}, int* iterations = nullptr,
                             double* residual = nullptr) {
  detail::validate_spec(spec);
  if (!(tol >= 1e-14 && tol <= 1e-4))
    throw std::invalid_argument("solve_ell_star: tol must lie in [1e-14, 1e-4]");
  SolveOptions opt = base;
  opt.tol = tol;

  double lo = opt.bracket_lo, hi = opt.bracket_hi;
  double flo = phi_prime(spec, lo), fhi = phi_prime(spec, hi);
  int it = 0;
  // phi' decreases: grow hi while phi'(hi) > 0, shrink lo while phi'(lo) < 0.
  while (flo * fhi > 0.0) {
    ++it;
    if (fhi > 0.0 && hi < opt.max_ell) {
      hi = std::min(2.0 * hi, opt.max_ell);
      fhi = phi_prime(spec, hi);
    } else if (flo < 0.0 && lo > 1e-8) {
      lo *= 0.5;
      flo = phi_prime(spec, lo);
    } else {
      throw SolverFailure("solve_ell_star: no sign change of phi' on scanned interval [" +
                          std::to_string(lo) + ", " + std::to_string(hi) + "]");
    }
  }

  // Brent: bisection with secant/inverse-quadratic acceleration.
  double a = lo, b = hi, fa = flo, fb = fhi;
  double c = a, fc = fa, d = b - a, e = b - a;
  const double target = opt.tol * kPi;
  for (; it < opt.max_iterations; ++it) {
    if (std::fabs(fc) < std::fabs(fb)) {
      a = b; b = c; c = a;
      fa = fb; fb = fc; fc = fa;
    }
    const double tol1 = 2.0 * 1e-16 * std::fabs(b) + 1e-15;
    const double xm = 0.5 * (c - b);
    if (std::fabs(fb) <= target || std::fabs(xm) <= tol1) break;
    if (std::fabs(e) >= tol1 && std::fabs(fa) > std::fabs(fb)) {
      double p, q;
      const double s = fb / fa;
      if (a == c) {
        p = 2.0 * xm * s;
        q = 1.0 - s;
      } else {
        const double qq = fa / fc, r = fb / fc;
        p = s * (2.0 * xm * qq * (qq - r) - (b - a) * (r - 1.0));
        q = (qq - 1.0) * (r - 1.0) * (s - 1.0);
      }
      if (p > 0.0) q = -q;
      p = std::fabs(p);
      if (2.0 * p < std::min(3.0 * xm * q - std::fabs(tol1 * q), std::fabs(e * q))) {
        e = d;
        d = p / q;
      } else {
        d = xm;
        e = d;
      }
    } else {
      d = xm;
      e = d;
    }
    a = b;
    fa = fb;
    b += (std::fabs(d) > tol1) ? d : (xm > 0 ? tol1 : -tol1);
    fb = phi_prime(spec, b);
    if ((fb > 0.0) == (fc > 0.0)) {
      c = a;
      fc = fa;
      d = b - a;
      e = d;
    }
  }
  if (std::fabs(fb) > target)
    throw SolverFailure("solve_ell_star: residual " + std::to_string(std::fabs(fb)) +
                        " above tolerance after " + std::to_string(it) + " iterations");
  if (iterations) *iterations = it;
  if (residual) *residual = std::fabs(fb);
  return b;
}

inline PrismSolution prism_volume(const PrismSpec& spec, double tol = 1e-10,
                                  const SolveOptions& opt = {}) {
  PrismSolution sol;
  sol.ell_star = solve_ell_star(spec, tol, opt, &sol.iterations, &sol.residual);
  sol.mu.resize(spec.n);
  sol.tet_volumes.resize(spec.n);
  sol.total_volume = 0.0;
  for (int k = 1; k <= spec.n; ++k) {
    const TetEvaluation ev = evaluate_tet(tet_config_for_side(spec, k, sol.ell_star));
    sol.mu[k - 1] = ev.mu;
    sol.tet_volumes[k - 1] = ev.volume;
    sol.total_volume += ev.volume;
  }
  return sol;
}

}  // namespace hyptet
