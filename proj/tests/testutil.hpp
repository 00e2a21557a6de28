#pragma once

#include <complex>
#include <random>
#include <vector>

#include "braidc/alphabet.hpp"
#include "braidc/complex_matrix.hpp"

namespace testutil {

using braidc::Complex;
using braidc::ComplexMatrix;

// Random n x n unitary assembled from random Givens rotations with random
// phases; independent of any library decomposition.
inline ComplexMatrix random_unitary(int n, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> angle(0.0, 2.0 * 3.14159265358979323846);
  ComplexMatrix u = ComplexMatrix::identity(n);
  for (int sweep = 0; sweep < 2; ++sweep)
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        const double theta = angle(rng) / 2.0;
        const double phi = angle(rng);
        ComplexMatrix g = ComplexMatrix::identity(n);
        g(i, i) = std::cos(theta);
        g(i, j) = -std::sin(theta) * std::polar(1.0, -phi);
        g(j, i) = std::sin(theta) * std::polar(1.0, phi);
        g(j, j) = std::cos(theta);
        u = g * u;
      }
  for (int i = 0; i < n; ++i) {
    ComplexMatrix d = ComplexMatrix::identity(n);
    d(i, i) = std::polar(1.0, angle(rng));
    u = d * u;
  }
  return u;
}

// Random single-qubit unitary with unit determinant (SU(2)).
inline ComplexMatrix random_su2(std::mt19937_64& rng) {
  ComplexMatrix u = random_unitary(2, rng);
  const Complex det = braidc::determinant(u);
  const Complex scale = std::pow(det, -0.5);
  return scale * u;
}

// Determinant by LU decomposition with partial pivoting; the independent
// oracle for the cofactor-expansion determinant.
inline Complex lu_determinant(const ComplexMatrix& a) {
  const int n = a.rows();
  std::vector<std::vector<Complex>> m(static_cast<size_t>(n),
                                      std::vector<Complex>(static_cast<size_t>(n)));
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) m[static_cast<size_t>(r)][static_cast<size_t>(c)] = a(r, c);
  Complex det = 1.0;
  for (int col = 0; col < n; ++col) {
    int pivot = col;
    for (int r = col + 1; r < n; ++r)
      if (std::abs(m[static_cast<size_t>(r)][static_cast<size_t>(col)]) >
          std::abs(m[static_cast<size_t>(pivot)][static_cast<size_t>(col)]))
        pivot = r;
    if (std::abs(m[static_cast<size_t>(pivot)][static_cast<size_t>(col)]) == 0.0) return 0.0;
    if (pivot != col) {
      std::swap(m[static_cast<size_t>(pivot)], m[static_cast<size_t>(col)]);
      det = -det;
    }
    det *= m[static_cast<size_t>(col)][static_cast<size_t>(col)];
    for (int r = col + 1; r < n; ++r) {
      const Complex f =
          m[static_cast<size_t>(r)][static_cast<size_t>(col)] / m[static_cast<size_t>(col)][static_cast<size_t>(col)];
      for (int c = col; c < n; ++c)
        m[static_cast<size_t>(r)][static_cast<size_t>(c)] -=
            f * m[static_cast<size_t>(col)][static_cast<size_t>(c)];
    }
  }
  return det;
}

// Random alpha in a window where the braid-gate construction is unitary
// (between the singular points at alpha = 1 and 3 mod 4).
inline double random_valid_alpha(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> body(1.05, 2.95);
  std::uniform_int_distribution<int> shift(-1, 1);
  return body(rng) + 4.0 * shift(rng);
}

inline braidc::GateAlphabet nonsemi_alphabet() {
  return braidc::build_alphabet(braidc::AlphabetParams{});
}

inline std::string data_path(const std::string& name) {
  return std::string(BRAIDC_DATA_DIR) + "/" + name;
}

}  // namespace testutil
