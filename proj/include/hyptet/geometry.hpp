#pragma once

// Gram matrices of generalised hyperbolic tetrahedra, vertex signs,
// edge quantities (lengths, sigma, sigma'), face-angle quantities
// (b, mu, mu'), momenta, and the cofactor-based edge-length recovery.
//
// Vertices are 0..3.  Edges are enumerated
//   0:(0,1)  1:(0,2)  2:(0,3)  3:(1,2)  4:(1,3)  5:(2,3)
// and the angle of edge e and the length of edge e always refer to the same
// vertex pair.
//
// Two index layers coexist on the 4x4 Gram matrix.  The stored (public)
// layout is edge-indexed: entry (i,j) holds -cos of the dihedral angle
// along edge (i,j).  The determinant and cofactor identities, however, live
// on the face-normal layout, where entry (i,j) is the inner product of the
// outward normals of the faces opposite vertices i and j -- that is, -cos of
// the angle along the *complementary* edge.  dual_layout() swaps the layers;
// everything downstream of gram_validity uses the face layout internally.

#include <array>
#include <cmath>
#include <cstdlib>
#include <string>
#include <utility>

#include "errors.hpp"

namespace hyptet {

inline constexpr double kPi = 3.14159265358979323846;

enum class VertexSign : int { UltraIdeal = -1, Ideal = 0, Proper = 1 };

constexpr int sign_value(VertexSign s) { return static_cast<int>(s); }

using VertexSigns = std::array<VertexSign, 4>;

inline constexpr VertexSigns kAllProper{VertexSign::Proper, VertexSign::Proper,
                                        VertexSign::Proper, VertexSign::Proper};

// Vertex signs of a prism truncated tetrahedron: the truncating planes of the
// two ultra-ideal vertices 0 and 1 intersect along the edge of length ell.
inline constexpr VertexSigns kPrismSigns{VertexSign::UltraIdeal, VertexSign::UltraIdeal,
                                         VertexSign::Proper, VertexSign::Proper};

inline constexpr std::array<std::pair<int, int>, 6> kEdges{
    {{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}}};

constexpr int edge_index(int i, int j) {
  if (i > j) std::swap(i, j);
  for (int e = 0; e < 6; ++e)
    if (kEdges[e].first == i && kEdges[e].second == j) return e;
  return -1;
}

// Edge with the complementary vertex pair; pairs are (0,1)-(2,3),
// (0,2)-(1,3), (0,3)-(1,2).
constexpr int opposite_edge(int e) { return 5 - e; }

struct MildTetConfig {
  // Dihedral angles in radians, kEdges order, each in (0, pi).
  std::array<double, 6> angles{};
  VertexSigns signs = kAllProper;

  double angle(int i, int j) const { return angles[edge_index(i, j)]; }
};

struct PrismTetConfig {
  // Dihedral angles in radians, each in (0, pi), and the length ell > 0 of
  // the edge produced by the intense truncation.  Edge placement:
  // theta1->(2,3), theta2->(0,2), theta3->(1,2), theta5->(1,3),
  // theta6->(0,3); the continued pair is (0,1).
  double theta1 = 0, theta2 = 0, theta3 = 0, theta5 = 0, theta6 = 0;
  double ell = 0;
};

class GramMatrix {
 public:
  GramMatrix() {
    for (int i = 0; i < 4; ++i)
      for (int j = 0; j < 4; ++j) m_[4 * i + j] = (i == j) ? 1.0 : 0.0;
  }

  double operator()(int i, int j) const { return m_[4 * i + j]; }

  // Symmetric assignment of an off-diagonal entry.
  void set(int i, int j, double v) {
    m_[4 * i + j] = v;
    m_[4 * j + i] = v;
  }

  // Swap the edge-indexed and face-normal layers: out(i,j) = in at the
  // complementary pair.  Involutive.
  GramMatrix dual_layout() const {
    GramMatrix d;
    for (int e = 0; e < 6; ++e) {
      const auto [i, j] = kEdges[e];
      const auto [k, l] = kEdges[opposite_edge(e)];
      d.set(i, j, (*this)(k, l));
    }
    return d;
  }

 private:
  std::array<double, 16> m_;
};

using Matrix4 = std::array<std::array<double, 4>, 4>;

namespace detail {

inline double det3(double a, double b, double c,  //
                   double d, double e, double f,  //
                   double g, double h, double i) {
  return a * (e * i - f * h) - b * (d * i - f * g) + c * (d * h - e * g);
}

inline void require_angle_range(double a, const char* name) {
  if (!(a > 0.0 && a < kPi))
    throw InvalidConfiguration(std::string(name) + " must lie in (0, pi)");
}

}  // namespace detail

inline double determinant(const GramMatrix& g) {
  double det = 0.0;
  for (int j = 0; j < 4; ++j) {
    int r[3], n = 0;
    for (int k = 0; k < 4; ++k)
      if (k != j) r[n++] = k;
    const double minor =
        detail::det3(g(1, r[0]), g(1, r[1]), g(1, r[2]), g(2, r[0]), g(2, r[1]),
                     g(2, r[2]), g(3, r[0]), g(3, r[1]), g(3, r[2]));
    det += ((j % 2 == 0) ? 1.0 : -1.0) * g(0, j) * minor;
  }
  return det;
}

// det of the 3x3 principal minor obtained by deleting row/column i.
inline double principal_minor(const GramMatrix& g, int i) {
  int r[3], n = 0;
  for (int k = 0; k < 4; ++k)
    if (k != i) r[n++] = k;
  return detail::det3(g(r[0], r[0]), g(r[0], r[1]), g(r[0], r[2]),  //
                      g(r[1], r[0]), g(r[1], r[1]), g(r[1], r[2]),  //
                      g(r[2], r[0]), g(r[2], r[1]), g(r[2], r[2]));
}

// c_ij = (-1)^{i+j} det(G with row j and column i removed), so that
// G * c = det(G) * I.  (Adjugate; equals the cofactor matrix for symmetric G.)
inline Matrix4 cofactors(const GramMatrix& g) {
  Matrix4 c{};
  for (int i = 0; i < 4; ++i) {
    for (int j = 0; j < 4; ++j) {
      int rr[3], cc[3], nr = 0, nc = 0;
      for (int k = 0; k < 4; ++k) {
        if (k != j) rr[nr++] = k;  // rows, j removed
        if (k != i) cc[nc++] = k;  // columns, i removed
      }
      const double minor = detail::det3(
          g(rr[0], cc[0]), g(rr[0], cc[1]), g(rr[0], cc[2]),  //
          g(rr[1], cc[0]), g(rr[1], cc[1]), g(rr[1], cc[2]),  //
          g(rr[2], cc[0]), g(rr[2], cc[1]), g(rr[2], cc[2]));
      c[i][j] = (((i + j) % 2 == 0) ? 1.0 : -1.0) * minor;
    }
  }
  return c;
}

struct SigmaPair {
  double sigma;        // (e^l - eps_k eps_l e^-l) / 2
  double sigma_prime;  // (e^l + eps_k eps_l e^-l) / 2
};

inline SigmaPair sigma(double ell, VertexSign eps_k, VertexSign eps_l) {
  if (!std::isfinite(ell)) throw InvalidConfiguration("sigma: non-finite length");
  const double p = static_cast<double>(sign_value(eps_k) * sign_value(eps_l));
  const double ep = std::exp(ell), em = std::exp(-ell);
  return {0.5 * (ep - p * em), 0.5 * (ep + p * em)};
}

struct MuPair {
  double mu;        // integral of cos(sqrt(eps) s) from 0 to b
  double mu_prime;  // cos(sqrt(eps) b)
};

// Closed form of the link integral: (sin b, cos b) for a proper governing
// vertex, (b, 1) for ideal, (sinh b, cosh b) for ultra-ideal.
inline MuPair mu_of_b(double b, VertexSign governing) {
  if (!(std::isfinite(b) && b >= 0.0))
    throw InvalidConfiguration("mu_of_b: b must be finite and >= 0");
  switch (governing) {
    case VertexSign::Proper:
      return {std::sin(b), std::cos(b)};
    case VertexSign::Ideal:
      return {b, 1.0};
    case VertexSign::UltraIdeal:
      return {std::sinh(b), std::cosh(b)};
  }
  std::abort();
}

inline GramMatrix gram_mild(const MildTetConfig& cfg) {
  GramMatrix g;
  for (int e = 0; e < 6; ++e) {
    detail::require_angle_range(cfg.angles[e], "dihedral angle");
    g.set(kEdges[e].first, kEdges[e].second, -std::cos(cfg.angles[e]));
  }
  return g;
}

inline GramMatrix gram_prism(const PrismTetConfig& cfg) {
  detail::require_angle_range(cfg.theta1, "theta1");
  detail::require_angle_range(cfg.theta2, "theta2");
  detail::require_angle_range(cfg.theta3, "theta3");
  detail::require_angle_range(cfg.theta5, "theta5");
  detail::require_angle_range(cfg.theta6, "theta6");
  if (!(cfg.ell > 0.0 && std::isfinite(cfg.ell)))
    throw InvalidConfiguration("ell must be > 0");
  GramMatrix g;
  g.set(0, 1, -std::cosh(cfg.ell));
  g.set(2, 3, -std::cos(cfg.theta1));
  g.set(0, 2, -std::cos(cfg.theta2));
  g.set(1, 2, -std::cos(cfg.theta3));
  g.set(1, 3, -std::cos(cfg.theta5));
  g.set(0, 3, -std::cos(cfg.theta6));
  return g;
}

// Necessary realizability conditions: det G < 0 (with a 1e-12 degeneracy
// margin) and eps_i * det G_ii > 0 for every i, evaluated on the face layout.
inline bool gram_validity(const GramMatrix& g, const VertexSigns& signs) {
  const GramMatrix k = g.dual_layout();
  if (determinant(k) >= -1e-12) return false;
  for (int i = 0; i < 4; ++i)
    if (sign_value(signs[i]) * principal_minor(k, i) <= 0.0) return false;
  return true;
}

struct EdgeData {
  double length;       // l_kl; for the continued pair this slot holds mu
  double sigma;        // sin(mu) on the continued pair
  double sigma_prime;  // cos(mu) on the continued pair
};

struct EdgeQuantities {
  std::array<EdgeData, 6> edge;
  // True when the input Gram carries -cosh(ell) at pair (0,1): the intense
  // truncation case.  edge[0] then holds (mu, sin mu, cos mu).
  bool continued = false;

  double mu() const { return edge[0].length; }
};

// Cofactor recovery of all edge quantities:
//   sigma'_kl = c_kl / sqrt(eps_k c_kk * eps_l c_ll)
// on the face layout, then l = acosh(sigma') for eps_k eps_l = +1,
// l = asinh(sigma') for eps_k eps_l = -1, and cos(mu) = sigma' on the
// continued pair.
inline EdgeQuantities edge_quantities(const GramMatrix& g, const VertexSigns& signs) {
  if (!gram_validity(g, signs))
    throw InvalidConfiguration("edge_quantities: Gram validity check failed");
  const bool continued = g(0, 1) < -1.0;
  if (continued &&
      !(signs[0] == VertexSign::UltraIdeal && signs[1] == VertexSign::UltraIdeal))
    throw InvalidConfiguration(
        "edge_quantities: continued pair requires ultra-ideal vertices 0 and 1");

  const Matrix4 c = cofactors(g.dual_layout());
  EdgeQuantities out;
  out.continued = continued;
  for (int e = 0; e < 6; ++e) {
    const auto [k, l] = kEdges[e];
    const double den = (sign_value(signs[k]) * c[k][k]) * (sign_value(signs[l]) * c[l][l]);
    // eps_k c_kk > 0 is guaranteed by the validity gate.
    const double sp = c[k][l] / std::sqrt(den);
    if (continued && e == 0) {
      if (!(std::fabs(sp) < 1.0))
        throw InvalidConfiguration(
            "edge_quantities: |sigma'| >= 1 on the continued pair (no intersection angle)");
      const double mu = std::acos(sp);
      out.edge[e] = {mu, std::sin(mu), sp};
    } else if (sign_value(signs[k]) * sign_value(signs[l]) == 1) {
      if (!(sp >= 1.0))
        throw InvalidConfiguration("edge_quantities: non-realizable configuration, sigma' = " +
                                   std::to_string(sp) + " < 1 on edge (" +
                                   std::to_string(k) + "," + std::to_string(l) + ")");
      const double len = std::acosh(sp);
      out.edge[e] = {len, std::sinh(len), sp};
    } else {
      const double len = std::asinh(sp);
      out.edge[e] = {len, std::cosh(len), sp};
    }
  }
  return out;
}

struct FaceAngle {
  double b;         // plane angle / perpendicular length, per governing sign
  double mu;        // mu_of_b(b).mu
  double mu_prime;  // mu_of_b(b).mu_prime
  VertexSign governing;
};

// The twelve quantities mu^x_{yz}: the angle datum of the face opposite
// vertex x at vertex w, where {y,z} = {0,1,2,3} \ {x,w}, governed by eps_w.
class FaceAngleQuantities {
 public:
  const FaceAngle& at(int opposite_vertex, int at_vertex) const {
    return t_[4 * opposite_vertex + at_vertex];
  }
  FaceAngle& at(int opposite_vertex, int at_vertex) {
    return t_[4 * opposite_vertex + at_vertex];
  }

 private:
  std::array<FaceAngle, 16> t_{};
};

// Recovers every mu' twice -- from the link cosine law (angles only) and,
// when the configuration is non-degenerate, from the second face cosine law
// (recovered sigma tables) -- and cross-checks the two routes to 1e-9.
// Continued (prism) Gram matrices are rejected: their link quantities pick up
// imaginary shifts and are handled symbolically by the Jacobian path instead.
inline FaceAngleQuantities face_angle_quantities(const GramMatrix& g,
                                                 const VertexSigns& signs) {
  if (g(0, 1) < -1.0)
    throw InvalidConfiguration("face_angle_quantities: continued configuration unsupported");
  std::array<double, 6> cos_a, sin_a;
  for (int e = 0; e < 6; ++e) {
    cos_a[e] = -g(kEdges[e].first, kEdges[e].second);
    const double s2 = 1.0 - cos_a[e] * cos_a[e];
    if (!(s2 > 0.0))
      throw InvalidConfiguration("face_angle_quantities: angle outside (0, pi)");
    sin_a[e] = std::sqrt(s2);
  }

  const bool nondegenerate = gram_validity(g, signs);
  EdgeQuantities eq;
  if (nondegenerate) eq = edge_quantities(g, signs);

  FaceAngleQuantities out;
  for (int x = 0; x < 4; ++x) {
    for (int w = 0; w < 4; ++w) {
      if (w == x) continue;
      int yz[2], n = 0;
      for (int v = 0; v < 4; ++v)
        if (v != x && v != w) yz[n++] = v;
      const int y = yz[0], z = yz[1];
      // Link cosine law at vertex w.
      const double mp_link = (cos_a[edge_index(w, x)] +
                              cos_a[edge_index(w, y)] * cos_a[edge_index(w, z)]) /
                             (sin_a[edge_index(w, y)] * sin_a[edge_index(w, z)]);
      if (nondegenerate) {
        // Second face cosine law in the face opposite x.
        const double ew = static_cast<double>(sign_value(signs[w]));
        const double mp_face =
            (-ew * eq.edge[edge_index(y, z)].sigma_prime +
             eq.edge[edge_index(y, w)].sigma_prime * eq.edge[edge_index(z, w)].sigma_prime) /
            (eq.edge[edge_index(y, w)].sigma * eq.edge[edge_index(z, w)].sigma);
        if (std::fabs(mp_face - mp_link) > 1e-9)
          throw InvalidConfiguration(
              "face_angle_quantities: cosine-law recovery routes disagree by " +
              std::to_string(std::fabs(mp_face - mp_link)));
      }
      FaceAngle fa;
      fa.governing = signs[w];
      fa.mu_prime = mp_link;
      switch (signs[w]) {
        case VertexSign::Proper: {
          const double cl = std::min(1.0, std::max(-1.0, mp_link));
          fa.b = std::acos(cl);
          fa.mu = std::sqrt(std::max(0.0, 1.0 - cl * cl));
          break;
        }
        case VertexSign::Ideal:
          fa.b = 0.0;
          fa.mu = 0.0;
          break;
        case VertexSign::UltraIdeal: {
          const double cl = std::max(1.0, mp_link);
          fa.b = std::acosh(cl);
          fa.mu = std::sqrt(std::max(0.0, cl * cl - 1.0));
          break;
        }
      }
      out.at(x, w) = fa;
    }
  }
  return out;
}

struct Momenta {
  std::array<double, 4> vertex;  // M^i = mu^i_jk mu^i_jl sigma_kl
  std::array<double, 4> face;    // face[i] = M_jkl of the face opposite v_i
};

inline Momenta momenta(const MildTetConfig& cfg, const EdgeQuantities& eq,
                       const FaceAngleQuantities& fq) {
  Momenta m{};
  for (int i = 0; i < 4; ++i) {
    int rest[3], n = 0;
    for (int v = 0; v < 4; ++v)
      if (v != i) rest[n++] = v;
    const int j = rest[0], k = rest[1], l = rest[2];
    // mu^i_{jk} is governed by the complementary vertex l, i.e. fq.at(i, l).
    m.vertex[i] = fq.at(i, l).mu * fq.at(i, k).mu * eq.edge[edge_index(k, l)].sigma;
    // M_{jkl} = mu^j_{kl} sin a_ik sin a_il, with mu^j_{kl} = fq.at(j, i).
    m.face[i] = fq.at(j, i).mu * std::sin(cfg.angle(i, k)) * std::sin(cfg.angle(i, l));
  }
  return m;
}

}  // namespace hyptet
