#pragma once

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "braidc/complex_matrix.hpp"

namespace braidc {

/// Parameters of the NON-SEMI braid-gate construction. q is the eighth
/// root of unity e^{2 pi i k / 8}; alpha is the real deformation parameter.
/// The CPHASE angles default to the entangling gate native to alpha = 2.4.
struct AlphabetParams {
  double alpha = 2.4;
  int q_exponent_k = 1;
  double cphase_theta1 = -1.772;
  double cphase_theta2 = -1.682;
  ComplexMatrix v_block = ComplexMatrix::identity(2);
};

/// Ordered, labeled gate set over an n-dimensional space whose leading
/// n_C states form the computational subspace. Program digit d selects
/// gates[d].
struct GateAlphabet {
  std::vector<std::string> labels;
  std::vector<ComplexMatrix> gates;
  int n = 0;
  int n_C = 0;
  int n_NC = 0;

  int size() const { return static_cast<int>(gates.size()); }
};

struct BCoefficients {
  double b_plus;   // B_{alpha+1}
  double b_minus;  // B_{alpha-1}
};

class AlphabetError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// q^p for real p, taken directly from the exponent: e^{2 pi i k p / 8}.
/// Never computed as a power of an already-rounded complex number, so no
/// branch ambiguity arises for fractional p.
inline Complex q_power(int k, double p) {
  const double angle = 2.0 * std::numbers::pi * static_cast<double>(k) * p / 8.0;
  return {std::cos(angle), std::sin(angle)};
}

/// Principal-branch square root of a real number: sqrt(-x) = i sqrt(x).
inline Complex principal_sqrt(double x) {
  return x >= 0.0 ? Complex{std::sqrt(x), 0.0} : Complex{0.0, std::sqrt(-x)};
}

inline double cotangent(double x) { return std::cos(x) / std::sin(x); }

/// The pair (B_{alpha+1}, B_{alpha-1}). Note the second coefficient's
/// denominator uses cot(pi alpha / 4), exactly as defined. An infinite
/// cotangent gives a zero coefficient; only a vanishing denominator is a
/// construction error.
inline BCoefficients b_coefficients(double alpha) {
  constexpr double kDenomTol = 1e-12;
  const double pi = std::numbers::pi;
  auto coefficient = [&](double denom, const char* name) {
    if (!std::isfinite(denom)) return 0.0;
    if (std::abs(denom) < kDenomTol)
      throw AlphabetError(std::string("b_coefficients: zero denominator for ") + name +
                          " at alpha=" + std::to_string(alpha));
    return std::sqrt(2.0) / denom;
  };
  return {coefficient(-1.0 + cotangent(pi * (alpha + 1.0) / 4.0), "B_{alpha+1}"),
          coefficient(-1.0 + cotangent(pi * alpha / 4.0), "B_{alpha-1}")};
}

/// The single-qubit b1^2 = diag(q^alpha, q^-alpha); defined for every
/// alpha, independent of the B coefficients.
inline ComplexMatrix single_qubit_b1_squared(const AlphabetParams& params) {
  ComplexMatrix m(2, 2);
  m(0, 0) = q_power(params.q_exponent_k, params.alpha);
  m(1, 1) = q_power(params.q_exponent_k, -params.alpha);
  return m;
}

/// Single-qubit braid generators: b1^2 = diag(q^alpha, q^-alpha) and the
/// symmetric b2 matrix.
inline std::pair<ComplexMatrix, ComplexMatrix> single_qubit_gates(const AlphabetParams& params) {
  const double a = params.alpha;
  const int k = params.q_exponent_k;
  const BCoefficients b = b_coefficients(a);
  const ComplexMatrix b1_sq = single_qubit_b1_squared(params);

  const Complex denom_pos = 1.0 - q_power(k, 2.0 * a);
  const Complex denom_neg = 1.0 - q_power(k, -2.0 * a);
  if (std::abs(denom_pos) < 1e-12 || std::abs(denom_neg) < 1e-12)
    throw AlphabetError("single_qubit_gates: q^{2 alpha} = 1 makes b2 singular at alpha=" +
                        std::to_string(a));
  if (b.b_minus == 0.0)
    throw AlphabetError("single_qubit_gates: B_{alpha-1} = 0 makes the b2 off-diagonal "
                        "undefined at alpha=" +
                        std::to_string(a));

  const Complex ratio = principal_sqrt(b.b_plus) / principal_sqrt(b.b_minus);
  const Complex q1 = q_power(k, 1.0);
  const Complex diag_num = 1.0 + q_power(k, 2.0);
  ComplexMatrix b2(2, 2);
  b2(0, 0) = diag_num / denom_pos;
  b2(0, 1) = ratio / q1;
  b2(1, 0) = ratio / q1;
  b2(1, 1) = diag_num / denom_neg;
  b2 = (1.0 / q1) * b2;

  if (!b1_sq.all_finite() || !b2.all_finite())
    throw AlphabetError("single_qubit_gates: non-finite entries at alpha=" + std::to_string(a));
  return {b1_sq, b2};
}

namespace detail {

// (b1^{ass})^2, recovered from b1^2 = -q (b1^{ass})^2. Needs only the raw
// q powers, so it stays defined where the B coefficients are singular.
inline ComplexMatrix b1ss_squared(const AlphabetParams& params) {
  return (-q_power(params.q_exponent_k, -1.0)) * single_qubit_b1_squared(params);
}

// b2^{ass}, recovered from b2 = q^{-3/2} b2^{ass}.
inline ComplexMatrix b2ss(const AlphabetParams& params) {
  auto [b1_sq, b2] = single_qubit_gates(params);
  return q_power(params.q_exponent_k, 1.5) * b2;
}

}  // namespace detail

// Individual 6x6 gates, block-ordered computational-first: indices 0..3
// carry the two-qubit computational subspace, 4..5 the non-computational
// states.

inline ComplexMatrix gate_b1_squared(const AlphabetParams& params) {
  const ComplexMatrix b1ss_sq = detail::b1ss_squared(params);
  return direct_sum(kron(b1ss_sq, ComplexMatrix::identity(2)), b1ss_sq);
}

inline ComplexMatrix gate_b2(const AlphabetParams& params) {
  const Complex q_half = q_power(params.q_exponent_k, 0.5);
  return direct_sum(kron(detail::b2ss(params), ComplexMatrix::identity(2)),
                    q_half * ComplexMatrix::identity(2));
}

inline ComplexMatrix gate_j4(const AlphabetParams& params) {
  const int k = params.q_exponent_k;
  ComplexMatrix tail(2, 2);
  tail(0, 0) = q_power(k, 1.0 - params.alpha);
  tail(1, 1) = q_power(k, 1.0 + params.alpha);
  return direct_sum(kron(ComplexMatrix::identity(2), detail::b1ss_squared(params)), tail);
}

inline ComplexMatrix gate_b4(const AlphabetParams& params) {
  const Complex q_half = q_power(params.q_exponent_k, 0.5);
  return direct_sum(kron(ComplexMatrix::identity(2), detail::b2ss(params)),
                    q_half * ComplexMatrix::identity(2));
}

inline ComplexMatrix gate_cphase(const AlphabetParams& params) {
  if (params.v_block.rows() != 2 || params.v_block.cols() != 2)
    throw AlphabetError("gate_cphase: V block must be 2x2");
  if (!is_unitary(params.v_block, 1e-12))
    throw AlphabetError("gate_cphase: V block is not unitary");
  ComplexMatrix comp(4, 4);
  comp(0, 0) = 1.0;
  comp(1, 1) = 1.0;
  comp(2, 2) = std::polar(1.0, params.cphase_theta1);
  comp(3, 3) = std::polar(1.0, params.cphase_theta2);
  return direct_sum(comp, params.v_block);
}

/// Builds the full NON-SEMI alphabet {b1^2, b2, J4, b4, CPHASE} and
/// validates unitarity of every gate at 1e-10. The construction is only
/// unitary on part of the alpha line (alpha = 2.4 included); outside it
/// the residual check rejects the parameters.
inline GateAlphabet build_alphabet(const AlphabetParams& params) {
  if (params.q_exponent_k < 0 || params.q_exponent_k > 7)
    throw AlphabetError("build_alphabet: q exponent k must be in 0..7");
  GateAlphabet a;
  a.labels = {"b1^2", "b2", "J4", "b4", "CPHASE"};
  a.gates.reserve(5);
  a.gates.push_back(gate_b1_squared(params));
  a.gates.push_back(gate_b2(params));
  a.gates.push_back(gate_j4(params));
  a.gates.push_back(gate_b4(params));
  a.gates.push_back(gate_cphase(params));
  a.n = 6;
  a.n_C = 4;
  a.n_NC = 2;
  constexpr double kUnitaryTol = 1e-10;
  for (size_t i = 0; i < a.gates.size(); ++i) {
    if (!a.gates[i].all_finite())
      throw AlphabetError("build_alphabet: gate " + a.labels[i] + " has non-finite entries");
    const double res = unitarity_residual(a.gates[i]);
    if (res > kUnitaryTol)
      throw AlphabetError("build_alphabet: gate " + a.labels[i] +
                          " fails unitarity, residual=" + std::to_string(res));
  }
  return a;
}

struct GateValidation {
  std::string label;
  double unitarity_residual;
  double determinant_modulus;
};

struct ValidationReport {
  std::vector<GateValidation> gates;
  double cphase_off_block_residual = 0.0;

  bool ok(double tol) const {
    for (const auto& g : gates)
      if (g.unitarity_residual > tol) return false;
    return true;
  }
};

/// Per-gate unitarity residuals and determinant moduli, plus the maximum
/// off-block magnitude of the last gate (CPHASE) as a block-structure
/// check. Failures are reported, not thrown.
inline ValidationReport validate_alphabet(const GateAlphabet& alphabet, double /*tol*/ = 1e-10) {
  ValidationReport report;
  for (size_t i = 0; i < alphabet.gates.size(); ++i) {
    const ComplexMatrix& g = alphabet.gates[i];
    report.gates.push_back(GateValidation{
        i < alphabet.labels.size() ? alphabet.labels[i] : "gate" + std::to_string(i),
        unitarity_residual(g), std::abs(determinant(g))});
  }
  if (!alphabet.gates.empty() && alphabet.n_NC > 0) {
    const ComplexMatrix& last = alphabet.gates.back();
    double off = 0.0;
    for (int r = 0; r < alphabet.n_C; ++r)
      for (int c = alphabet.n_C; c < alphabet.n; ++c)
        off = std::max({off, std::abs(last(r, c)), std::abs(last(c, r))});
    report.cphase_off_block_residual = off;
  }
  return report;
}

}  // namespace braidc
