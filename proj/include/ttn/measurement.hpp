#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "ttn/gates.hpp"
#include "ttn/random.hpp"
#include "ttn/ttn_state.hpp"

namespace ttn {

// Generalized local measurement {E_r} on one qudit; completeness
// sum_r E_r† E_r = I is enforced at validation time.
struct MeasurementOp {
  int target = 0;
  std::vector<DenseTensor> ops;
  void validate(int d) const;
};

MeasurementOp projective_z(int target, int d);
MeasurementOp projective_x(int target);  // d = 2
MeasurementOp projective_y(int target);  // d = 2
// E_r = |b_r><b_r| from the columns of a unitary matrix
MeasurementOp projective_basis(int target, const DenseTensor& basis);

// Born probabilities p_r = tr[E_r rho E_r†] from the single-qudit RDM.
std::vector<double> outcome_probabilities(const TtnState& s, const MeasurementOp& m);

// Deterministically collapse onto outcome r: absorb E_r, renormalize by
// 1/sqrt(p_r), re-canonicalize. Returns p_r.
double collapse(TtnState& s, const MeasurementOp& m, int r);

struct MeasureOutcome {
  int outcome;
  double probability;
};

// Sample an outcome by inverse CDF from the random source, then collapse.
MeasureOutcome measure(TtnState& s, const MeasurementOp& m, RandomSource& rng);

// Adaptive measurement patterns: each step picks one of its pre-declared
// bases through an affine function of earlier outcomes,
// bases[(constant + sum outcomes[step_refs]) mod #bases].
struct AffineSelector {
  int constant = 0;
  std::vector<int> step_refs;
};

struct PatternStep {
  int target = 0;
  std::vector<MeasurementOp> bases;
  AffineSelector selector;
};

struct MeasurementPattern {
  std::vector<PatternStep> steps;
  void validate(int n, int d) const;
};

struct TranscriptEntry {
  int step;
  int target;
  int outcome;
  double probability;
};

std::vector<TranscriptEntry> run_locc(TtnState& s, const MeasurementPattern& p,
                                      RandomSource& rng);
// same, but with every outcome forced (used to enumerate branches exactly)
std::vector<TranscriptEntry> run_locc_forced(TtnState& s, const MeasurementPattern& p,
                                             std::span<const int> outcomes);

// JSON pattern document: {steps: [{target: <1-based>, bases: ["X"|"Y"|"Z"|
// {ops: [[2 d^2 interleaved re,im], ...]}], selector: {const, terms}}]}
MeasurementPattern parse_pattern_json(const std::string& text, int d);

// Tree interaction graph for cluster states (vertices = qubits, 0-based).
struct TreeGraph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;
  void validate() const;
};

// TTN topology adapted to the graph: every internal-edge bipartition cuts
// graph edges that all share one graph vertex, which is what keeps the
// cluster-state rank at exactly 2 across every cut.
TreeTopology topology_for_graph(const TreeGraph& g);

// |+>^n followed by CZ on every graph edge (routed, untruncated), on the
// adapted topology (or an explicit one, without the rank-2 guarantee).
TtnState tree_cluster_state(const TreeGraph& g);
TtnState tree_cluster_state_on(const TreeGraph& g, const TreeTopology& topo);

struct MbqcResult {
  std::vector<TranscriptEntry> transcript;
  TtnState state;
};

MbqcResult run_mbqc(const TreeGraph& g, const MeasurementPattern& p, RandomSource& rng);

}  // namespace ttn
