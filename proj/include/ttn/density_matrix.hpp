#pragma once

#include <vector>

#include "ttn/dense_tensor.hpp"

namespace ttn {

// Reduced density matrix on one or two qudits.  For two targets (q1, q2) the
// row index is the composite i1*d + i2, i.e. q1 is the more significant
// factor; the same convention is used for two-qudit gate matrices.
struct DensityMatrix {
  std::vector<int> qudits;
  DenseTensor matrix;  // square, dimension d^(#qudits)

  double trace_deviation() const {
    cx tr = 0.0;
    const long n = matrix.dim(0);
    for (long i = 0; i < n; ++i) tr += matrix.at({i, i});
    return std::abs(tr - cx{1.0, 0.0});
  }
};

}  // namespace ttn
