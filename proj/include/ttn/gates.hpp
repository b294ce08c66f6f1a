#pragma once

#include <string>

#include "ttn/dense_tensor.hpp"
#include "ttn/gate_matrices.hpp"
#include "ttn/ttn_state.hpp"

namespace ttn {

struct GateOp {
  DenseTensor matrix;  // d x d or d^2 x d^2 (first target more significant)
  int arity = 1;
  bool unitary = true;
};

GateOp make_gate(const DenseTensor& m, int d);
GateOp named_gate(const std::string& name, int d);

// Rank-control policy applied at every SVD inside swap and gate updates.
// chi_max = 0 means unbounded; cutoff is the relative squared-weight
// threshold (see svd_split).  Numerically-zero singular values are always
// dropped so stored weights stay positive.
struct TruncationPolicy {
  long chi_max = 0;
  double cutoff = 0.0;
};

// One-qudit operator absorbed into the leaf's tensor.  Unitary gates keep
// the canonical/normalized flags; non-unitary ones clear them.
void apply_local(TtnState& s, const GateOp& g, int qudit);

// Two-qudit operator on two leaves of the same vertex.
void apply_same_tensor(TtnState& s, const GateOp& g, int q1, int q2);

// Two-qudit operator on leaves of adjacent vertices: absorb lateral weights,
// contract across the shared edge, apply the gate, split by SVD and detach
// the lateral weights again.  Returns the discarded squared weight.  If g is
// not unitary the new central weights are renormalized and (by default) a
// full re-canonicalization sweep runs.
double apply_neighbor_gate(TtnState& s, const GateOp& g, int q1, int q2,
                           const TruncationPolicy& pol,
                           bool resweep_nonunitary = true);

// Exchange a qudit index of vertex u with an index of the adjacent vertex v
// (edge_on_v may be a leaf or an internal edge).  The quantum state is
// unchanged; the leaf map and the central edge weights are updated.  Returns
// the discarded squared weight.
double swap_step(TtnState& s, int u, int v, int qudit_on_u, int edge_on_v,
                 const TruncationPolicy& pol);

// Two-qudit gate between arbitrary qudits: swap q1's index along the tree
// path next to q2, apply the gate, swap back.  The leaf map ends identical
// to the start.  Returns the total discarded squared weight.
double apply_gate_routed(TtnState& s, const GateOp& g, int q1, int q2,
                         const TruncationPolicy& pol,
                         bool resweep_nonunitary = true);

}  // namespace ttn
