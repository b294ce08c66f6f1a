#pragma once

#include <vector>

#include "ttn/density_matrix.hpp"
#include "ttn/hamiltonian.hpp"
#include "ttn/statevector.hpp"
#include "ttn/ttn_state.hpp"

namespace ttn {

// Single-qudit reduced density matrix: absorb the two incident weight sets
// into the qudit's tensor and trace the shared indices (state must be
// canonical).
DensityMatrix rdm1(const TtnState& s, int q);

// Two-qudit reduced density matrix via the column-by-column contraction of
// the path tensors (O(m d^2 chi^4)); row index is i1*d + i2 with q1 the more
// significant factor.
DensityMatrix rdm2(const TtnState& s, int q1, int q2);

// tr(obs . rdm) on one or two target qudits; obs must be Hermitian.
double expectation(const TtnState& s, const DenseTensor& obs,
                   const std::vector<int>& targets);

double energy(const TtnState& s, const HamiltonianSpec& h);

// |<v | Psi>| for small systems (dense-budget guarded)
double fidelity(const TtnState& s, const Statevector& v);

}  // namespace ttn
