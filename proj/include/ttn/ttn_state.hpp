#pragma once

#include <vector>

#include "ttn/dense_tensor.hpp"
#include "ttn/statevector.hpp"
#include "ttn/topology.hpp"

namespace ttn {

// Raised when an operation's precondition on the state (canonical form,
// normalization, ...) is violated.
struct state_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Tree tensor network state: one rank-3 tensor per internal vertex (index
// order = the topology's incident-edge order for that vertex) and one
// non-increasing positive weight sequence per internal edge.  Weights are
// stored on the edges, never pre-absorbed into the tensors.
struct TtnState {
  TreeTopology topo;
  int d = 2;
  std::vector<DenseTensor> tensors;           // per internal vertex
  std::vector<std::vector<double>> weights;   // per edge id; empty on leaf edges

  // Status flags; any mutating operation that can break them must clear them.
  bool canonical = false;
  bool normalized = false;

  long edge_rank(int e) const;
  int chi_max_observed() const;
  void invalidate() { canonical = false; normalized = false; }
  // checks tensor shapes against edge ranks and weight invariants
  void check_shapes() const;
};

// Canonical rank-1 product state from per-qudit unit vectors.
TtnState product_state(const TreeTopology& topo, int d,
                       const std::vector<std::vector<cx>>& locals);

// Full contraction to amplitudes (big-endian qudit order); guarded by the
// dense budget.
Statevector to_statevector(const TtnState& s);

// Exact import of a normalized statevector: canonical output whose edge
// weights are the Schmidt coefficients of each bipartition.
TtnState from_statevector(const Statevector& v, const TreeTopology& topo);

// Stored Schmidt coefficients of an internal edge (state must be canonical).
const std::vector<double>& schmidt_spectrum(const TtnState& s, int edge);

}  // namespace ttn
