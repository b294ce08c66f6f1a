#pragma once

#include <vector>

#include "ttn/ttn_state.hpp"

namespace ttn {

// Matrix of scalar products M[a, a'] = <phi_a' | phi_a> of the bare subtree
// states across an internal edge (the edge's own weights are not included).
struct GramMatrix {
  int edge;
  int side;  // 0/1: the subtree containing edge_endpoints(edge)[side]
  DenseTensor m;
};

struct EdgeCanonicalReport {
  int edge;
  double gram_dev[2];      // max-abs deviation of the side-0 / side-1 Gram from I
  double weight_norm_dev;  // |sum lambda^2 - 1|
};

struct CanonicalReport {
  std::vector<EdgeCanonicalReport> edges;
  double norm_dev = 0.0;  // | <psi|psi> - 1 |
  double max_dev = 0.0;
  bool ok = false;
};

double state_norm(const TtnState& s);

// Rescales the tensors so <psi|psi> = 1; throws on a vanishing state.
void normalize_state(TtnState& s);

GramMatrix gram_matrix(const TtnState& s, int edge, int side);

// Orthonormalize a single edge (spectral decomposition of both side Grams,
// SVD of X^T Y, rotation of the two incident tensors); installs the edge's
// Schmidt coefficients renormalized to unit weight.  Returns the discarded
// squared weight.
double canonicalize_edge(TtnState& s, int edge, double cutoff);

// Full canonical form in one two-pass sweep (inward Gram accumulation from
// the leaves, outward per-edge orthonormalization); O(n chi^4).  Returns the
// largest per-edge discarded weight.
double canonicalize(TtnState& s, double cutoff = 0.0);

// Per-edge/per-side deviations from the canonical conditions; updates the
// state's canonical flag (true iff everything is below tol).
CanonicalReport check_canonical(TtnState& s, double tol = 1e-10);

// Keep the chi_tilde largest weights of one edge and renormalize.  Returns
// the kept weight K = sum of the retained lambda^2 before renormalization;
// the fidelity with the untruncated state is sqrt(K).  The canonical flag is
// kept: the state stays canonical up to an error of the order of 1 - K.
double truncate_edge(TtnState& s, int edge, long chi_tilde);

}  // namespace ttn
