#pragma once

#include <cmath>
#include <complex>
#include <initializer_list>
#include <stdexcept>
#include <string>
#include <vector>

namespace braidc {

using Complex = std::complex<double>;

/// Dense row-major complex matrix. Everything in this toolkit lives in
/// dimension <= 8, so no attempt is made at sparsity or blocking; the
/// value type is cheap to copy and immutable use is the norm.
class ComplexMatrix {
 public:
  ComplexMatrix() = default;

  ComplexMatrix(int rows, int cols)
      : rows_(rows), cols_(cols), entries_(static_cast<size_t>(rows * cols)) {
    if (rows <= 0 || cols <= 0)
      throw std::invalid_argument("ComplexMatrix: dimensions must be positive");
  }

  ComplexMatrix(int rows, int cols, std::initializer_list<Complex> vals)
      : ComplexMatrix(rows, cols) {
    if (static_cast<int>(vals.size()) != rows * cols)
      throw std::invalid_argument("ComplexMatrix: initializer size mismatch");
    std::copy(vals.begin(), vals.end(), entries_.begin());
  }

  static ComplexMatrix identity(int n) {
    ComplexMatrix m(n, n);
    for (int i = 0; i < n; ++i) m(i, i) = 1.0;
    return m;
  }

  static ComplexMatrix zero(int rows, int cols) { return {rows, cols}; }

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  bool square() const { return rows_ == cols_; }

  Complex& operator()(int r, int c) { return entries_[static_cast<size_t>(r) * cols_ + c]; }
  const Complex& operator()(int r, int c) const {
    return entries_[static_cast<size_t>(r) * cols_ + c];
  }

  const std::vector<Complex>& entries() const { return entries_; }

  bool all_finite() const {
    for (const Complex& z : entries_)
      if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
    return true;
  }

  ComplexMatrix block(int r0, int c0, int nr, int nc) const {
    if (r0 < 0 || c0 < 0 || r0 + nr > rows_ || c0 + nc > cols_)
      throw std::invalid_argument("ComplexMatrix::block: out of range");
    ComplexMatrix out(nr, nc);
    for (int r = 0; r < nr; ++r)
      for (int c = 0; c < nc; ++c) out(r, c) = (*this)(r0 + r, c0 + c);
    return out;
  }

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<Complex> entries_;
};

inline ComplexMatrix multiply(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.cols() != b.rows())
    throw std::invalid_argument("multiply: dimension mismatch (" + std::to_string(a.cols()) +
                                " vs " + std::to_string(b.rows()) + ")");
  ComplexMatrix out(a.rows(), b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int k = 0; k < a.cols(); ++k) {
      const Complex aik = a(i, k);
      if (aik == Complex{}) continue;
      for (int j = 0; j < b.cols(); ++j) out(i, j) += aik * b(k, j);
    }
  return out;
}

inline ComplexMatrix operator*(const ComplexMatrix& a, const ComplexMatrix& b) {
  return multiply(a, b);
}

inline ComplexMatrix operator*(Complex s, const ComplexMatrix& a) {
  ComplexMatrix out(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out(r, c) = s * a(r, c);
  return out;
}

inline ComplexMatrix operator-(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw std::invalid_argument("operator-: dimension mismatch");
  ComplexMatrix out(a.rows(), a.cols());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out(r, c) = a(r, c) - b(r, c);
  return out;
}

inline ComplexMatrix dagger(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out(c, r) = std::conj(a(r, c));
  return out;
}

inline ComplexMatrix transpose(const ComplexMatrix& a) {
  ComplexMatrix out(a.cols(), a.rows());
  for (int r = 0; r < a.rows(); ++r)
    for (int c = 0; c < a.cols(); ++c) out(c, r) = a(r, c);
  return out;
}

inline ComplexMatrix kron(const ComplexMatrix& a, const ComplexMatrix& b) {
  ComplexMatrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int ar = 0; ar < a.rows(); ++ar)
    for (int ac = 0; ac < a.cols(); ++ac) {
      const Complex v = a(ar, ac);
      if (v == Complex{}) continue;
      for (int br = 0; br < b.rows(); ++br)
        for (int bc = 0; bc < b.cols(); ++bc)
          out(ar * b.rows() + br, ac * b.cols() + bc) = v * b(br, bc);
    }
  return out;
}

/// Block-diagonal composition a (+) b; the off blocks are exactly zero.
inline ComplexMatrix direct_sum(const ComplexMatrix& a, const ComplexMatrix& b) {
  if (!a.square() || !b.square())
    throw std::invalid_argument("direct_sum: inputs must be square");
  const int n = a.rows(), m = b.rows();
  ComplexMatrix out(n + m, n + m);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) out(r, c) = a(r, c);
  for (int r = 0; r < m; ++r)
    for (int c = 0; c < m; ++c) out(n + r, n + c) = b(r, c);
  return out;
}

inline Complex trace(const ComplexMatrix& a) {
  if (!a.square()) throw std::invalid_argument("trace: matrix must be square");
  Complex t = 0.0;
  for (int i = 0; i < a.rows(); ++i) t += a(i, i);
  return t;
}

/// Sum of squared entry moduli, i.e. the squared Frobenius norm.
inline double frobenius_norm_sq(const ComplexMatrix& a) {
  double s = 0.0;
  for (const Complex& z : a.entries()) s += std::norm(z);
  return s;
}

inline double frobenius_norm(const ComplexMatrix& a) { return std::sqrt(frobenius_norm_sq(a)); }

inline double max_abs(const ComplexMatrix& a) {
  double m = 0.0;
  for (const Complex& z : a.entries()) m = std::max(m, std::abs(z));
  return m;
}

inline double max_abs_diff(const ComplexMatrix& a, const ComplexMatrix& b) {
  return max_abs(a - b);
}

namespace detail {

// First-row cofactor expansion over the live columns. `cols` holds the
// surviving column indices; `row` is the current expansion row.
inline Complex det_expand(const ComplexMatrix& a, int row, std::vector<int>& cols) {
  const int n = static_cast<int>(cols.size());
  if (n == 2) {
    return a(row, cols[0]) * a(row + 1, cols[1]) - a(row, cols[1]) * a(row + 1, cols[0]);
  }
  Complex det = 0.0;
  for (int j = 0; j < n; ++j) {
    const Complex pivot = a(row, cols[j]);
    if (pivot == Complex{}) continue;
    const int removed = cols[j];
    cols.erase(cols.begin() + j);
    const Complex minor = det_expand(a, row + 1, cols);
    cols.insert(cols.begin() + j, removed);
    det += ((j % 2 == 0) ? pivot : -pivot) * minor;
  }
  return det;
}

}  // namespace detail

/// Determinant by recursive first-row Laplace expansion. This is the same
/// expansion the optimization-model encoding uses, so library values and
/// model constraints agree by construction. Intended for dimension <= 8.
inline Complex determinant(const ComplexMatrix& a) {
  if (!a.square()) throw std::invalid_argument("determinant: matrix must be square");
  if (a.rows() > 8) throw std::invalid_argument("determinant: dimension > 8 unsupported");
  if (a.rows() == 1) return a(0, 0);
  std::vector<int> cols(a.rows());
  for (int i = 0; i < a.rows(); ++i) cols[i] = i;
  return detail::det_expand(a, 0, cols);
}

/// Max-entry deviation of a^dagger a from the identity.
inline double unitarity_residual(const ComplexMatrix& a) {
  if (!a.square()) throw std::invalid_argument("unitarity_residual: matrix must be square");
  return max_abs_diff(dagger(a) * a, ComplexMatrix::identity(a.rows()));
}

inline bool is_unitary(const ComplexMatrix& a, double tol) {
  return unitarity_residual(a) <= tol;
}

/// Matrix power by repeated squaring (exponent >= 0).
inline ComplexMatrix matrix_power(const ComplexMatrix& a, int exponent) {
  if (!a.square()) throw std::invalid_argument("matrix_power: matrix must be square");
  if (exponent < 0) throw std::invalid_argument("matrix_power: negative exponent");
  ComplexMatrix result = ComplexMatrix::identity(a.rows());
  ComplexMatrix base = a;
  while (exponent > 0) {
    if (exponent & 1) result = result * base;
    base = base * base;
    exponent >>= 1;
  }
  return result;
}

}  // namespace braidc
