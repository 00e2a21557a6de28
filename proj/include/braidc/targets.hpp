#pragma once

#include "braidc/complex_matrix.hpp"

namespace braidc {

/// The standard two-qubit CNOT (control on the first qubit).
inline ComplexMatrix cnot_gate() {
  ComplexMatrix m(4, 4);
  m(0, 0) = 1.0;
  m(1, 1) = 1.0;
  m(2, 3) = 1.0;
  m(3, 2) = 1.0;
  return m;
}

}  // namespace braidc
