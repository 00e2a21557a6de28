#pragma once

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "braidc/alphabet.hpp"
#include "braidc/complex_matrix.hpp"
#include "braidc/invariants.hpp"

namespace braidc {

/// A braid program: the sequence of alphabet indices, printed as a digit
/// string. indices[t-1] is the gate applied at step t.
struct Program {
  std::vector<int> indices;

  int depth() const { return static_cast<int>(indices.size()); }

  std::string digits() const {
    std::string s;
    s.reserve(indices.size());
    for (int i : indices) s.push_back(static_cast<char>('0' + i));
    return s;
  }
};

class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses a digit string into a Program. Whitespace (including newlines
/// from wrapped table rows) is ignored; anything else is rejected with
/// its position, as is any digit >= alphabet_size.
inline Program parse_program(const std::string& text, int alphabet_size) {
  Program p;
  p.indices.reserve(text.size());
  for (size_t pos = 0; pos < text.size(); ++pos) {
    const char ch = text[pos];
    if (ch == ' ' || ch == '\t' || ch == '\n' || ch == '\r') continue;
    if (ch < '0' || ch > '9')
      throw ParseError("parse_program: illegal character '" + std::string(1, ch) +
                       "' at position " + std::to_string(pos + 1));
    const int digit = ch - '0';
    if (digit >= alphabet_size)
      throw ParseError("parse_program: digit " + std::to_string(digit) +
                       " out of range for alphabet of size " + std::to_string(alphabet_size) +
                       " at position " + std::to_string(pos + 1));
    p.indices.push_back(digit);
  }
  return p;
}

/// Which end of the printed digit string is applied first. The printed
/// tables do not state the convention, so both are supported; all the
/// gates here are symmetric matrices, which makes the two conventions
/// produce transposed products and identical metrics against symmetric
/// targets.
enum class ApplicationOrder { first_digit_first, first_digit_last };

/// Y_d = rho_{i_d} ... rho_{i_1}, each step left-multiplying the gate
/// chosen by the program (Y_0 = identity).
inline ComplexMatrix evaluate(const Program& program, const GateAlphabet& alphabet,
                              ApplicationOrder order = ApplicationOrder::first_digit_first) {
  ComplexMatrix y = ComplexMatrix::identity(alphabet.n);
  const auto& ix = program.indices;
  if (order == ApplicationOrder::first_digit_first) {
    for (size_t t = 0; t < ix.size(); ++t) {
      if (ix[t] < 0 || ix[t] >= alphabet.size())
        throw std::invalid_argument("evaluate: program index out of range");
      y = alphabet.gates[ix[t]] * y;
    }
  } else {
    for (size_t t = ix.size(); t > 0; --t) {
      if (ix[t - 1] < 0 || ix[t - 1] >= alphabet.size())
        throw std::invalid_argument("evaluate: program index out of range");
      y = alphabet.gates[ix[t - 1]] * y;
    }
  }
  return y;
}

/// Maximum entry magnitude over the two blocks coupling the computational
/// (leading n_C) and non-computational subspaces.
inline double leakage_of(const ComplexMatrix& y, int n_c) {
  if (!y.square()) throw std::invalid_argument("leakage_of: matrix must be square");
  if (n_c <= 0 || n_c >= y.rows())
    throw std::invalid_argument("leakage_of: computational dimension out of range");
  double leak = 0.0;
  for (int r = 0; r < n_c; ++r)
    for (int c = n_c; c < y.cols(); ++c)
      leak = std::max({leak, std::abs(y(r, c)), std::abs(y(c, r))});
  return leak;
}

/// Squared Frobenius distance between target and realized block.
inline double j_distance(const ComplexMatrix& target, const ComplexMatrix& u) {
  if (target.rows() != u.rows() || target.cols() != u.cols())
    throw std::invalid_argument("j_distance: dimension mismatch");
  return frobenius_norm_sq(target - u);
}

/// Norm-normalized Hilbert-Schmidt distance, bounded by [0, 2]. Zero for
/// positively proportional inputs.
inline double d2_distance(const ComplexMatrix& a, const ComplexMatrix& b) {
  const double na = frobenius_norm(a);
  const double nb = frobenius_norm(b);
  if (na == 0.0 || nb == 0.0)
    throw std::invalid_argument("d2_distance: zero-norm input");
  ComplexMatrix diff(a.rows(), a.cols());
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("d2_distance: dimension mismatch");
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) diff(r, c) = a(r, c) / na - b(r, c) / nb;
  return frobenius_norm(diff);
}

constexpr double kLeakageTolerance = 1e-8;

struct EvaluationReport {
  ComplexMatrix product;              // full n x n product Y_d
  ComplexMatrix computational_block;  // leading n_C x n_C block
  double leakage = 0.0;
  bool leaky = false;                 // leakage above tolerance; metrics advisory
  double j_frobenius = 0.0;           // vs the supplied target
  double d2_hilbert_schmidt = 0.0;
  bool has_invariants = false;        // only for 4x4 computational blocks
  LocalInvariants invariants;
  double d_cnot = 0.0;
  double d_pe = 0.0;
};

/// Full metric report of a program against a target gate on the
/// computational block. Invariant-based metrics are computed whenever the
/// block is 4x4; if the product leaks, they are still reported but the
/// leaky flag marks them advisory.
inline EvaluationReport evaluate_report(const Program& program, const GateAlphabet& alphabet,
                                        const ComplexMatrix& target,
                                        ApplicationOrder order = ApplicationOrder::first_digit_first,
                                        double leakage_tolerance = kLeakageTolerance) {
  if (target.rows() != alphabet.n_C || target.cols() != alphabet.n_C)
    throw std::invalid_argument("evaluate_report: target must match the computational dimension");
  EvaluationReport rep;
  rep.product = evaluate(program, alphabet, order);
  rep.computational_block = rep.product.block(0, 0, alphabet.n_C, alphabet.n_C);
  rep.leakage = alphabet.n_NC > 0 ? leakage_of(rep.product, alphabet.n_C) : 0.0;
  rep.leaky = rep.leakage > leakage_tolerance;
  rep.j_frobenius = j_distance(target, rep.computational_block);
  rep.d2_hilbert_schmidt = d2_distance(target, rep.computational_block);
  if (alphabet.n_C == 4) {
    // leaky blocks are still scored (advisory, per the leaky flag) unless
    // the block is so far from unitary that the invariants reject it
    try {
      rep.invariants = local_invariants(rep.computational_block);
      rep.d_cnot = braidc::d_cnot(rep.invariants);
      rep.d_pe = braidc::d_pe(rep.invariants);
      rep.has_invariants = true;
    } catch (const std::invalid_argument&) {
      rep.has_invariants = false;
    }
  }
  return rep;
}

struct SweepPoint {
  int power = 0;
  double d_pe = 0.0;
  double d_cnot = 0.0;
  double g1 = 0.0;
  double g2 = 0.0;
  double g3 = 0.0;
};

/// Metrics of successive powers of one alphabet gate, L = 1..l_max:
/// the distance-versus-power curve and the invariant trajectory.
inline std::vector<SweepPoint> power_sweep(int gate_index, const GateAlphabet& alphabet,
                                           int l_max) {
  if (gate_index < 0 || gate_index >= alphabet.size())
    throw std::invalid_argument("power_sweep: gate index out of range");
  if (l_max < 1) throw std::invalid_argument("power_sweep: l_max must be >= 1");
  if (alphabet.n_C != 4)
    throw std::invalid_argument("power_sweep: invariant sweep requires a 4-dim computational block");
  std::vector<SweepPoint> points;
  points.reserve(static_cast<size_t>(l_max));
  ComplexMatrix y = ComplexMatrix::identity(alphabet.n);
  for (int level = 1; level <= l_max; ++level) {
    y = alphabet.gates[gate_index] * y;
    const ComplexMatrix block = y.block(0, 0, alphabet.n_C, alphabet.n_C);
    const LocalInvariants g = local_invariants(block);
    points.push_back({level, d_pe(g), d_cnot(g), g.g1, g.g2, g.g3});
  }
  return points;
}

}  // namespace braidc
