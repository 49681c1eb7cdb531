#pragma once

// Closed-form volume and dihedral angle of a prism truncated tetrahedron:
// the dilogarithm sum U, the quadratic coefficients q0, q1, q2, the critical
// points z-, z+, the potential V, and Vol T / mu.
//
// Variables: a_k = exp(i theta_k) for k in {1,2,3,5,6} and a4 = exp(ell).
// All products of the a_k are assembled from accumulated phases, never by
// repeated complex multiplication, so angles near 0 or pi lose no precision.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>

#include "geometry.hpp"
#include "specfun.hpp"

namespace hyptet {

struct EdgeVariables {
  std::array<double, 5> theta{};  // theta1, theta2, theta3, theta5, theta6
  double ell = 0;

  static EdgeVariables from_config(const PrismTetConfig& cfg) {
    return {{cfg.theta1, cfg.theta2, cfg.theta3, cfg.theta5, cfg.theta6}, cfg.ell};
  }

  // a_k for k in {1,...,6}; a4 is real = exp(ell).
  Complex a(int k) const {
    if (k == 4) return Complex(std::exp(ell), 0.0);
    static constexpr int slot[7] = {-1, 0, 1, 2, -1, 3, 4};
    return std::polar(1.0, theta[slot[k]]);
  }

  // The four products whose dilogarithms enter with a plus sign:
  // 1, a1 a2 a4 a5, a1 a3 a4 a6, a2 a3 a5 a6.
  std::array<Complex, 4> plus_factors() const {
    const double r = std::exp(ell);
    return {Complex(1.0, 0.0),
            std::polar(r, theta[0] + theta[1] + theta[3]),
            std::polar(r, theta[0] + theta[2] + theta[4]),
            std::polar(1.0, theta[1] + theta[2] + theta[3] + theta[4])};
  }

  // The four minus-sign products: a1 a2 a3, a1 a5 a6, a2 a4 a6, a3 a4 a5.
  std::array<Complex, 4> minus_factors() const {
    const double r = std::exp(ell);
    return {std::polar(1.0, theta[0] + theta[1] + theta[2]),
            std::polar(1.0, theta[0] + theta[3] + theta[4]),
            std::polar(r, theta[1] + theta[4]),
            std::polar(r, theta[2] + theta[3])};
  }

  // a1 a2 a3 a4 a5 a6
  Complex total_product() const {
    return std::polar(std::exp(ell),
                      theta[0] + theta[1] + theta[2] + theta[3] + theta[4]);
  }
};

// U(z) = sum_plus Li2(f z) - sum_minus Li2(-h z).
inline Complex u_function(const EdgeVariables& vars, Complex z) {
  if (!is_finite(z)) throw std::domain_error("u_function: non-finite z");
  Complex u(0.0, 0.0);
  for (const Complex& f : vars.plus_factors()) u += dilog(f * z);
  for (const Complex& h : vars.minus_factors()) u -= dilog(-h * z);
  return u;
}

// z dU/dz = -sum_plus log(1 - f z) + sum_minus log(1 + h z).
inline Complex z_du_dz(const EdgeVariables& vars, Complex z) {
  Complex w(0.0, 0.0);
  for (const Complex& f : vars.plus_factors()) w -= principal_log(1.0 - f * z);
  for (const Complex& h : vars.minus_factors()) w += principal_log(1.0 + h * z);
  return w;
}

// a4 dU/da4: the four products containing a4 contribute
// -log(1 - a1a2a4a5 z) - log(1 - a1a3a4a6 z) + log(1 + a2a4a6 z) + log(1 + a3a4a5 z).
inline Complex a4_dU_da4(const EdgeVariables& vars, Complex z) {
  const auto f = vars.plus_factors();
  const auto h = vars.minus_factors();
  const Complex args[4] = {1.0 - f[1] * z, 1.0 - f[2] * z, 1.0 + h[2] * z,
                           1.0 + h[3] * z};
  for (const Complex& a : args)
    if (a.real() == 0.0 && a.imag() == 0.0)
      throw InvalidConfiguration("a4_dU_da4: singular logarithm argument");
  return -principal_log(args[0]) - principal_log(args[1]) + principal_log(args[2]) +
         principal_log(args[3]);
}

struct QCoefficients {
  Complex q0, q1, q2;     // as displayed
  Complex qn0, qn1, qn2;  // normalized q_i / (a1 a2 a3 a4 a5 a6)
};

inline QCoefficients q_coefficients(const EdgeVariables& vars) {
  QCoefficients q;
  const Complex big_a = vars.total_product();
  Complex q0(1.0, 0.0);
  {
    const auto f = vars.plus_factors();
    const auto h = vars.minus_factors();
    q0 += f[1] + f[2] + f[3] + h[0] + h[1] + h[2] + h[3];
  }
  // (a_k - 1/a_k) = 2i sin(theta_k) on the unit circle, 2 sinh(ell) for a4.
  const double s1 = std::sin(vars.theta[0]), s2 = std::sin(vars.theta[1]),
               s3 = std::sin(vars.theta[2]), s5 = std::sin(vars.theta[3]),
               s6 = std::sin(vars.theta[4]);
  const Complex qn1 =
      Complex(4.0 * (s2 * s5 + s3 * s6), -4.0 * s1 * std::sinh(vars.ell));
  const double r = std::exp(vars.ell);
  const Complex qn2 = std::polar(r, vars.theta[0]) +
                      std::polar(1.0, vars.theta[1] + vars.theta[3]) +
                      std::polar(1.0, vars.theta[2] + vars.theta[4]) +
                      std::polar(1.0, vars.theta[0] + vars.theta[1] + vars.theta[4]) +
                      std::polar(1.0, vars.theta[0] + vars.theta[2] + vars.theta[3]) +
                      std::polar(r, vars.theta[1] + vars.theta[2]) +
                      std::polar(r, vars.theta[3] + vars.theta[4]) + big_a;
  q.q0 = q0;
  q.qn0 = q0 / big_a;
  q.qn1 = qn1;
  q.q1 = qn1 * big_a;
  q.qn2 = qn2;
  q.q2 = qn2 * big_a;
  return q;
}

struct CriticalPair {
  Complex z_minus, z_plus;
  QCoefficients q;
  long m_minus = 0, m_plus = 0;  // z dU/dz = 2 pi i m at each critical point
  double quad_residual = 0;      // max normalized quadratic residual
  double exp_residual = 0;       // max |z dU/dz - 2 pi i m|
  bool variant_discriminant = false;  // true if the +4 q0 q2 variant verified
};

namespace detail {

inline double quad_residual(const QCoefficients& q, Complex z) {
  const double scale = std::abs(q.qn0) + std::abs(q.qn1) + std::abs(q.qn2);
  return std::abs((q.qn2 * z + q.qn1) * z + q.qn0) / scale;
}

}  // namespace detail

// Both roots of q2 z^2 + q1 z + q0 = 0 via the normalized coefficients,
// z-/z+ carrying the -/+ principal square root.  Each root is verified
// against the quadratic (residual <= 1e-10) and against exp(z dU/dz) = 1
// (z dU/dz within exp_tol of 2 pi i Z).  If the written discriminant
// q1^2 - 4 q0 q2 fails verification, the sign-variant q1^2 + 4 q0 q2 is
// tried and recorded.
inline CriticalPair critical_points(const EdgeVariables& vars, double exp_tol = 1e-8) {
  const QCoefficients q = q_coefficients(vars);
  const double scale =
      std::max({1.0, std::abs(q.qn0), std::abs(q.qn1), std::abs(q.qn2)});
  if (std::abs(q.qn2) < 1e-14 * scale)
    throw InvalidConfiguration("critical_points: |q2| ~ 0, quadratic degenerates");

  std::string failure;
  for (const bool variant : {false, true}) {
    Complex disc = variant ? q.qn1 * q.qn1 + 4.0 * q.qn0 * q.qn2
                           : q.qn1 * q.qn1 - 4.0 * q.qn0 * q.qn2;
    // The normalized discriminant is real for real-angle variables; snap
    // rounding-level imaginary parts to +0 so the principal square root picks
    // a reproducible side of the cut.
    if (std::fabs(disc.imag()) <= 1e-10 * std::max(1.0, std::abs(disc)))
      disc = Complex(disc.real(), 0.0);
    const Complex sq = std::sqrt(disc);
    CriticalPair cp;
    cp.q = q;
    cp.variant_discriminant = variant;
    cp.z_minus = (-q.qn1 - sq) / (2.0 * q.qn2);
    cp.z_plus = (-q.qn1 + sq) / (2.0 * q.qn2);
    cp.quad_residual =
        std::max(detail::quad_residual(q, cp.z_minus), detail::quad_residual(q, cp.z_plus));
    if (cp.quad_residual > 1e-10) {
      failure = "quadratic residual " + std::to_string(cp.quad_residual);
      continue;
    }
    bool ok = true;
    long* ms[2] = {&cp.m_minus, &cp.m_plus};
    const Complex zz[2] = {cp.z_minus, cp.z_plus};
    for (int s = 0; s < 2; ++s) {
      const Complex w = z_du_dz(vars, zz[s]);
      *ms[s] = std::lround(w.imag() / (2.0 * kPi));
      const double res = std::abs(w - Complex(0.0, 2.0 * kPi * *ms[s]));
      cp.exp_residual = std::max(cp.exp_residual, res);
      if (res > exp_tol) {
        failure = "exp(z dU/dz) != 1, residual " + std::to_string(res);
        ok = false;
      }
    }
    if (ok) return cp;
  }
  throw InvalidConfiguration("critical_points: root verification failed (" + failure + ")");
}

// V = (i/4) [ (U - z U_z log z) at z-  minus  the same at z+ ].
inline Complex v_function(const EdgeVariables& vars) {
  const CriticalPair cp = critical_points(vars);
  const auto w = [&vars](Complex z) {
    return u_function(vars, z) - z_du_dz(vars, z) * principal_log(z);
  };
  return Complex(0.0, 0.25) * (w(cp.z_minus) - w(cp.z_plus));
}

struct TetEvaluation {
  double volume = 0;
  double mu = 0;       // representative in (0, pi]
  double mu_raw = 0;   // before the mod-pi reduction
  CriticalPair crit;
  bool roots_swapped = false;  // z- <-> z+ exchanged by the volume sign rule
};

namespace detail {

struct VolMu {
  double volume, mu_raw;
};

inline VolMu de_evaluate(const EdgeVariables& vars, Complex z1, Complex z2) {
  const auto w = [&vars](Complex z) {
    return u_function(vars, z) - z_du_dz(vars, z) * principal_log(z);
  };
  const Complex v = Complex(0.0, 0.25) * (w(z1) - w(z2));
  const Complex ddiff = a4_dU_da4(vars, z1) - a4_dU_da4(vars, z2);
  const Complex a4dv = Complex(0.0, 0.25) * ddiff;
  VolMu out;
  out.volume = (-v + a4dv * vars.ell).real();
  out.mu_raw = -(Complex(0.0, 0.5) * ddiff).real();
  return out;
}

inline double reduce_mod_pi(double x) {
  double r = std::fmod(x, kPi);
  while (r <= 0.0) r += kPi;
  return r;
}

}  // namespace detail

// Vol T = Re(-V + a4 dV/da4 * ell) and mu = -Re((i a4 / 2) dU/da4 |_{z-,z+})
// mod pi, with a4 dV/da4 taken through the critical points (envelope
// property).  Root assignment: as written first; if the volume comes out
// negative the roots are exchanged (recorded in roots_swapped); a negative
// volume under both assignments is a branch failure.  Principal-branch
// evaluation is reliable for mu up to ~1.7; see README.
inline TetEvaluation evaluate_tet(const PrismTetConfig& cfg, double exp_tol = 1e-8) {
  const GramMatrix g = gram_prism(cfg);
  if (!gram_validity(g, kPrismSigns))
    throw InvalidConfiguration("evaluate_tet: Gram validity check failed");
  const EdgeVariables vars = EdgeVariables::from_config(cfg);
  TetEvaluation out;
  out.crit = critical_points(vars, exp_tol);
  detail::VolMu vm = detail::de_evaluate(vars, out.crit.z_minus, out.crit.z_plus);
  if (vm.volume < -1e-12) {
    vm = detail::de_evaluate(vars, out.crit.z_plus, out.crit.z_minus);
    out.roots_swapped = true;
    if (vm.volume < -1e-12)
      throw InvalidConfiguration(
          "evaluate_tet: branch failure, negative volume under both root assignments");
  }
  out.volume = vm.volume;
  out.mu_raw = vm.mu_raw;
  out.mu = detail::reduce_mod_pi(vm.mu_raw);
  return out;
}

inline double tet_volume(const PrismTetConfig& cfg) { return evaluate_tet(cfg).volume; }

inline double mu_angle(const PrismTetConfig& cfg) { return evaluate_tet(cfg).mu; }

}  // namespace hyptet
