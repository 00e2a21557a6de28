#pragma once

#include <cmath>
#include <stdexcept>

#include "braidc/complex_matrix.hpp"

namespace braidc {

/// Local invariants (g1, g2, g3) of a two-qubit gate. Two gates are
/// equivalent up to single-qubit operations exactly when their triples
/// agree; (1,0,3) is the identity class and (0,0,1) the CNOT class.
struct LocalInvariants {
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
};

/// The fixed Bell-basis change matrix Q. Conjugating by Q turns the
/// single-qubit subgroup into SO(4), which is what makes the transpose
/// trick behind the Makhlin matrix work.
inline const ComplexMatrix& bell_transform() {
  static const ComplexMatrix q = [] {
    const double s = 1.0 / std::sqrt(2.0);
    const Complex i{0.0, 1.0};
    ComplexMatrix m(4, 4,
                    {s, 0, 0, i * s,
                     0, i * s, s, 0,
                     0, i * s, -s, 0,
                     s, 0, 0, -i * s});
    return m;
  }();
  return q;
}

inline void require_4x4(const ComplexMatrix& u, const char* who) {
  if (u.rows() != 4 || u.cols() != 4)
    throw std::invalid_argument(std::string(who) + ": expected a 4x4 matrix");
}

/// U in the Bell basis: Q^dagger U Q.
inline ComplexMatrix bell_basis(const ComplexMatrix& u) {
  require_4x4(u, "bell_basis");
  const ComplexMatrix& q = bell_transform();
  return dagger(q) * u * q;
}

/// Makhlin matrix m_U = U_B^T U_B (plain transpose, not conjugate).
inline ComplexMatrix makhlin_matrix(const ComplexMatrix& u) {
  require_4x4(u, "makhlin_matrix");
  const ComplexMatrix ub = bell_basis(u);
  return transpose(ub) * ub;
}

/// g1 = Re[tr^2(m)/(16 det U)], g2 = Im[...], g3 = Re[(tr^2(m) - tr(m^2))/(4 det U)].
/// For unitary input the g3 expression is real up to roundoff; the Re
/// extraction is asserted harmless in the tests.
inline LocalInvariants local_invariants(const ComplexMatrix& u) {
  require_4x4(u, "local_invariants");
  const Complex det = determinant(u);
  if (std::abs(det) < 0.5)
    throw std::invalid_argument("local_invariants: input is far from unitary (|det| < 0.5)");
  const ComplexMatrix m = makhlin_matrix(u);
  const Complex tr = trace(m);
  const Complex tr_sq = tr * tr;
  const Complex tr_m2 = trace(m * m);
  const Complex g12 = tr_sq / (16.0 * det);
  const Complex g3 = (tr_sq - tr_m2) / (4.0 * det);
  return {g12.real(), g12.imag(), g3.real()};
}

/// Squared distance to the CNOT local equivalence class at (0,0,1).
inline double d_cnot(const LocalInvariants& g) {
  return g.g1 * g.g1 + g.g2 * g.g2 + (g.g3 - 1.0) * (g.g3 - 1.0);
}

inline double d_cnot(const ComplexMatrix& u) { return d_cnot(local_invariants(u)); }

/// Perfect-entangler cost (g1 - g3 sqrt(g1^2 + g2^2))^2; zero on the
/// perfect-entangler set.
inline double d_pe(const LocalInvariants& g) {
  const double radial = std::sqrt(g.g1 * g.g1 + g.g2 * g.g2);
  const double diff = g.g1 - g.g3 * radial;
  return diff * diff;
}

inline double d_pe(const ComplexMatrix& u) { return d_pe(local_invariants(u)); }

}  // namespace braidc
