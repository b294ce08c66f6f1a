#pragma once

#include <map>
#include <string>
#include <vector>

#include "ttn/dense_tensor.hpp"

namespace ttn {

// One Hermitian term acting on one qudit or a qudit pair; the coefficient is
// already folded into the matrix.
struct HamTerm {
  std::vector<int> sites;  // 0-based, one or two entries
  DenseTensor matrix;      // d x d or d^2 x d^2 (first site more significant)
};

struct HamiltonianSpec {
  std::string name;
  int n = 0;
  int d = 2;
  std::vector<HamTerm> terms;

  void validate() const;  // Hermiticity, site ranges, dimensions
};

// Builtin model library.  Known names:
//   tfim-chain        -J sum Z_i Z_{i+1} - g sum X_i            (params J, g)
//   tfim-tree         same couplings on a balanced binary tree graph
//   heisenberg-chain  J sum (XX + YY + ZZ) on nearest neighbours (param J)
//   long-range-ising  -J sum_{i<j} |i-j|^-alpha Z_i Z_j - g sum X_i
//                     (params J, alpha, g; g defaults to 0)
//   periodic-chain    -J sum Z_i Z_{i+1} with the (n,1) bond, - g sum X_i
//                     (params J, g; g defaults to 0)
// Defaults: J = 1, g = 1 unless stated.
HamiltonianSpec hamiltonian_library(const std::string& name, int n,
                                    const std::map<std::string, double>& params = {});

// JSON document {name?, n, d?, terms: [{sites: [..1-based..],
// matrix: "ZZ" | [2 k^2 interleaved re,im], coeff: real}]}
HamiltonianSpec parse_hamiltonian_json(const std::string& text);

}  // namespace ttn
