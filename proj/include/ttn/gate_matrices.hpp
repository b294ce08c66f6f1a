#pragma once

#include <string>

#include "ttn/dense_tensor.hpp"

namespace ttn {

// Builders for the named gate/observable matrices (d = 2 unless stated).
// Two-qudit matrices are d^2 x d^2 with the FIRST target as the more
// significant factor; kron2(A, B) applies A to the first target.

DenseTensor pauli_i();
DenseTensor pauli_x();
DenseTensor pauli_y();
DenseTensor pauli_z();
DenseTensor hadamard();
DenseTensor s_gate();
DenseTensor t_gate();
DenseTensor phase_gate(double theta);              // diag(1, e^{i theta})
DenseTensor rot_gate(char axis, double theta);     // exp(-i theta/2 sigma_axis)
DenseTensor cz_gate();
DenseTensor cnot_gate();                           // control = first target
DenseTensor swap2_gate();
DenseTensor kron2(const DenseTensor& a, const DenseTensor& b);

// Parse a named matrix: one of I,X,Y,Z,H,S,T,CZ,CNOT,SWAP, two-letter Pauli
// products (XX, YZ, ...), "phase(theta)" or "rot(axis,theta)".  Returns a
// d x d or d^2 x d^2 matrix; names are only defined for d = 2.
DenseTensor named_matrix(const std::string& name, int d);

// number of qudits a k x k matrix acts on (k = d^arity), or throws
int matrix_arity(const DenseTensor& m, int d);

bool is_unitary(const DenseTensor& m, double tol = 1e-10);
bool is_hermitian(const DenseTensor& m, double tol = 1e-10);

}  // namespace ttn
