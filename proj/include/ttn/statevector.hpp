#pragma once

#include <utility>
#include <vector>

#include "ttn/dense_tensor.hpp"
#include "ttn/density_matrix.hpp"
#include "ttn/hamiltonian.hpp"

namespace ttn {

// Dense amplitude vector of length d^n, big-endian qudit order: qudit 0 is
// the most significant digit of the amplitude index.
struct Statevector {
  int n = 0;
  int d = 2;
  std::vector<cx> amps;

  long size() const { return static_cast<long>(amps.size()); }
  double norm() const;
};

// memory guard for dense amplitude vectors; default 2^14 amplitudes,
// overridable via the TTNSIM_SV_BUDGET environment variable
long sv_budget();
void check_sv_budget(int n, int d);

Statevector sv_basis_state(int n, int d, const std::vector<int>& digits);
Statevector sv_from_locals(int n, int d, const std::vector<std::vector<cx>>& locals);

cx sv_inner(const Statevector& a, const Statevector& b);  // <a|b>

// Exact dense application of a 1- or 2-qudit operator (need not be unitary).
Statevector sv_apply_gate(const Statevector& v, const DenseTensor& g,
                          const std::vector<int>& targets);

DensityMatrix sv_partial_trace(const Statevector& v, const std::vector<int>& keep);

// Schmidt coefficients of the bipartition side_a : rest, non-increasing.
std::vector<double> sv_schmidt(const Statevector& v, const std::vector<int>& side_a);

// Orthonormal Schmidt basis of side_a: tensor [d^(|A|) x r] whose columns are
// the kept basis vectors (relative singular-value threshold 1e-12), plus the
// kept coefficients.
std::pair<DenseTensor, std::vector<double>> sv_schmidt_basis(
    const Statevector& v, const std::vector<int>& side_a);

double sv_expectation(const Statevector& v, const DenseTensor& obs,
                      const std::vector<int>& targets);

// Exact propagator exp(-iHt) (or exp(-Ht) with renormalization) by dense
// eigendecomposition.
Statevector sv_evolve_exact(const Statevector& v, const HamiltonianSpec& h,
                            double t, bool imaginary);

std::pair<double, Statevector> sv_ground_state(const HamiltonianSpec& h);

// dense matrix of the full Hamiltonian (d^n x d^n)
DenseTensor sv_dense_hamiltonian(const HamiltonianSpec& h);

}  // namespace ttn
