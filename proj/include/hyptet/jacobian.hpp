#pragma once

// Closed-form dual Jacobian d(lengths)/d(angles) of a generalised hyperbolic
// tetrahedron: Jac = -eta * D * S * D with D = diag(sigma_e) over the six
// edges, plus its analytic continuation to the prism truncated case and a
// central-difference oracle.

#include <algorithm>
#include <array>
#include <cmath>
#include <complex>
#include <string>

#include "geometry.hpp"
#include "specfun.hpp"

namespace hyptet {

struct DualJacobian {
  enum class Ordering {
    // rows (l_01, l_02, l_03, l_12, l_13, l_23) vs columns (a_01, ..., a_23)
    Mild,
    // rows (mu, l1, l2, l3, l5, l6) vs columns (ell, theta1, theta2, theta3,
    // theta5, theta6)
    Prism,
  };
  std::array<std::array<double, 6>, 6> m{};
  Ordering ordering = Ordering::Mild;

  double operator()(int r, int c) const { return m[r][c]; }
};

// eta = sqrt( prod_i eps_i det G_ii / (-det G)^3 ), face layout.
inline double eta(const GramMatrix& g, const VertexSigns& signs) {
  const GramMatrix k = g.dual_layout();
  const double d = determinant(k);
  if (-d <= 1e-12)
    throw InvalidConfiguration("eta: degenerate configuration, -det G <= 1e-12");
  double prod = 1.0;
  for (int i = 0; i < 4; ++i) prod *= sign_value(signs[i]) * principal_minor(k, i);
  if (prod <= 0.0)
    throw InvalidConfiguration("eta: eps_i det G_ii product not positive");
  return std::sqrt(prod / (-d * -d * -d));
}

namespace detail {

// Entries of the symmetric kernel S, kEdges order.  Diagonal:
//   omega_kl = (-s'_ik s'_jl + eps_l s'_il s'_jl s'_kl
//               - s'_il s'_jk + eps_k s'_ik s'_jk s'_kl) / sigma_kl^2
// with {i,j} the complementary pair.  Off-diagonal: 1 for opposite edges,
// eps_m s'_jm for edges sharing vertex m (j the vertex on neither edge).
// The continued pair carries sigma_01 = i sin(mu); `negate_first_denominator`
// implements the resulting (i sin mu)^2 = -sin^2(mu) for the real-valued path.
template <typename T>
std::array<std::array<T, 6>, 6> s_kernel(const std::array<T, 6>& sig,
                                         const std::array<T, 6>& sigp,
                                         const VertexSigns& signs,
                                         bool negate_first_denominator) {
  std::array<std::array<T, 6>, 6> s{};
  for (int r = 0; r < 6; ++r) {
    const auto [k, l] = kEdges[r];
    for (int c = 0; c < 6; ++c) {
      const auto [i, j] = kEdges[c];
      if (r == c) {
        const auto [ii, jj] = kEdges[opposite_edge(r)];
        const double ek = sign_value(signs[k]), el = sign_value(signs[l]);
        const T num = -sigp[edge_index(ii, k)] * sigp[edge_index(jj, l)] +
                      el * sigp[edge_index(ii, l)] * sigp[edge_index(jj, l)] *
                          sigp[edge_index(k, l)] -
                      sigp[edge_index(ii, l)] * sigp[edge_index(jj, k)] +
                      ek * sigp[edge_index(ii, k)] * sigp[edge_index(jj, k)] *
                          sigp[edge_index(k, l)];
        T den = sig[r] * sig[r];
        if (negate_first_denominator && r == 0) den = -den;
        s[r][c] = num / den;
      } else if (k != i && k != j && l != i && l != j) {
        s[r][c] = T(1.0);
      } else {
        const int shared = (k == i || k == j) ? k : l;
        const int other_c = (i == shared) ? j : i;
        const int other_r = (k == shared) ? l : k;
        const int jo = 6 - shared - other_c - other_r;  // remaining vertex
        s[r][c] = static_cast<double>(sign_value(signs[shared])) *
                  sigp[edge_index(jo, shared)];
      }
    }
  }
  return s;
}

inline void require_nonzero_sigma(double s, int e) {
  if (std::fabs(s) < 1e-10)
    throw InvalidConfiguration("dual Jacobian: |sigma| < 1e-10 on edge index " +
                               std::to_string(e));
}

inline void require_nonzero_signs(const VertexSigns& signs) {
  for (int i = 0; i < 4; ++i)
    if (signs[i] == VertexSign::Ideal)
      throw InvalidConfiguration(
          "dual Jacobian: ideal vertices (eps = 0) are not supported here");
}

// Row/column order (mu, l1, l2, l3, l5, l6) as kEdges indices.
inline constexpr std::array<int, 6> kPrismOrder{0, 5, 1, 3, 4, 2};

}  // namespace detail

inline DualJacobian dual_jacobian_mild(const MildTetConfig& cfg) {
  detail::require_nonzero_signs(cfg.signs);
  const GramMatrix g = gram_mild(cfg);
  const EdgeQuantities eq = edge_quantities(g, cfg.signs);
  std::array<double, 6> sig, sigp;
  for (int e = 0; e < 6; ++e) {
    sig[e] = eq.edge[e].sigma;
    sigp[e] = eq.edge[e].sigma_prime;
    detail::require_nonzero_sigma(sig[e], e);
  }
  const double et = eta(g, cfg.signs);
  const auto s = detail::s_kernel(sig, sigp, cfg.signs, false);
  DualJacobian j;
  j.ordering = DualJacobian::Ordering::Mild;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < 6; ++c) j.m[r][c] = -et * sig[r] * s[r][c] * sig[c];
  return j;
}

// Real-valued evaluation of the analytic continuation a_01 = i*ell,
// l_01 = i*mu: the sigma table carries (sin mu, cos mu) at the continued
// pair, omega_01 takes the (i sin mu)^2 denominator, and conjugation by
// diag(i, 1, ..., 1) reduces to negating the first column after the
// reordering to (mu, l1, l2, l3, l5, l6).
inline DualJacobian dual_jacobian_prism(const PrismTetConfig& cfg) {
  const GramMatrix g = gram_prism(cfg);
  const EdgeQuantities eq = edge_quantities(g, kPrismSigns);
  std::array<double, 6> sig, sigp;
  for (int e = 0; e < 6; ++e) {
    sig[e] = eq.edge[e].sigma;
    sigp[e] = eq.edge[e].sigma_prime;
    detail::require_nonzero_sigma(sig[e], e);
  }
  const double et = eta(g, kPrismSigns);
  const auto s = detail::s_kernel(sig, sigp, kPrismSigns, true);
  DualJacobian j;
  j.ordering = DualJacobian::Ordering::Prism;
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      const int rr = detail::kPrismOrder[r], cc = detail::kPrismOrder[c];
      double v = -et * sig[rr] * s[rr][cc] * sig[cc];
      if (c == 0) v = -v;
      j.m[r][c] = v;
    }
  }
  return j;
}

// Verification path: evaluates the continuation in complex arithmetic with
// sigma_01 = i sin(mu) and takes real parts afterwards.  The imaginary
// residue (max |Im|) is reported through `imag_residue` when given; entries
// must agree with dual_jacobian_prism to rounding.
inline DualJacobian dual_jacobian_prism_continued(const PrismTetConfig& cfg,
                                                  double* imag_residue = nullptr) {
  const GramMatrix g = gram_prism(cfg);
  const EdgeQuantities eq = edge_quantities(g, kPrismSigns);
  std::array<Complex, 6> sig, sigp;
  for (int e = 0; e < 6; ++e) {
    sig[e] = eq.edge[e].sigma;
    sigp[e] = eq.edge[e].sigma_prime;
    detail::require_nonzero_sigma(std::abs(sig[e]), e);
  }
  sig[0] = Complex(0.0, eq.edge[0].sigma);  // i sin(mu)
  const double et = eta(g, kPrismSigns);
  const auto s = detail::s_kernel(sig, sigp, kPrismSigns, false);
  // T = Lambda^-1 (-eta D S D) Lambda with Lambda = diag(i, 1, ..., 1).
  double residue = 0.0;
  DualJacobian j;
  j.ordering = DualJacobian::Ordering::Prism;
  for (int r = 0; r < 6; ++r) {
    for (int c = 0; c < 6; ++c) {
      const int rr = detail::kPrismOrder[r], cc = detail::kPrismOrder[c];
      Complex v = -et * sig[rr] * s[rr][cc] * sig[cc];
      if (c == 0) v *= Complex(0.0, 1.0);
      if (r == 0) v /= Complex(0.0, 1.0);
      residue = std::max(residue, std::fabs(v.imag()));
      j.m[r][c] = v.real();
    }
  }
  if (imag_residue) *imag_residue = residue;
  return j;
}

namespace detail {

inline std::array<double, 6> length_vector(const MildTetConfig& cfg) {
  const EdgeQuantities eq = edge_quantities(gram_mild(cfg), cfg.signs);
  std::array<double, 6> out;
  for (int e = 0; e < 6; ++e) out[e] = eq.edge[e].length;
  return out;
}

// (mu, l1, l2, l3, l5, l6)
inline std::array<double, 6> length_vector(const PrismTetConfig& cfg) {
  const EdgeQuantities eq = edge_quantities(gram_prism(cfg), kPrismSigns);
  std::array<double, 6> out;
  for (int i = 0; i < 6; ++i) out[i] = eq.edge[kPrismOrder[i]].length;
  return out;
}

inline void require_fd_step(double step) {
  if (!(step >= 1e-7 && step <= 1e-3))
    throw std::invalid_argument("finite_difference_jacobian: step must be in [1e-7, 1e-3]");
}

}  // namespace detail

inline DualJacobian finite_difference_jacobian(const MildTetConfig& cfg, double step) {
  detail::require_fd_step(step);
  DualJacobian j;
  j.ordering = DualJacobian::Ordering::Mild;
  for (int c = 0; c < 6; ++c) {
    MildTetConfig p = cfg, m = cfg;
    p.angles[c] += step;
    m.angles[c] -= step;
    std::array<double, 6> lp, lm;
    try {
      lp = detail::length_vector(p);
      lm = detail::length_vector(m);
    } catch (const InvalidConfiguration& e) {
      throw InvalidConfiguration(std::string("finite_difference_jacobian: probe left the "
                                             "valid region: ") +
                                 e.what());
    }
    for (int r = 0; r < 6; ++r) j.m[r][c] = (lp[r] - lm[r]) / (2.0 * step);
  }
  return j;
}

inline DualJacobian finite_difference_jacobian(const PrismTetConfig& cfg, double step) {
  detail::require_fd_step(step);
  auto perturbed = [&cfg](int c, double h) {
    PrismTetConfig p = cfg;
    double* fields[6] = {&p.ell, &p.theta1, &p.theta2, &p.theta3, &p.theta5, &p.theta6};
    *fields[c] += h;
    return p;
  };
  DualJacobian j;
  j.ordering = DualJacobian::Ordering::Prism;
  for (int c = 0; c < 6; ++c) {
    std::array<double, 6> lp, lm;
    try {
      lp = detail::length_vector(perturbed(c, step));
      lm = detail::length_vector(perturbed(c, -step));
    } catch (const InvalidConfiguration& e) {
      throw InvalidConfiguration(std::string("finite_difference_jacobian: probe left the "
                                             "valid region: ") +
                                 e.what());
    }
    for (int r = 0; r < 6; ++r) j.m[r][c] = (lp[r] - lm[r]) / (2.0 * step);
  }
  return j;
}

}  // namespace hyptet
