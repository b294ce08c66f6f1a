#pragma once

#include <string>
#include <vector>

#include "ttn/gates.hpp"
#include "ttn/hamiltonian.hpp"
#include "ttn/ttn_state.hpp"

namespace ttn {

struct TrotterGate {
  std::vector<int> sites;
  GateOp gate;
  int term_index;
  double coeff;  // fraction of dt this gate advances for its term
  int layer;     // disjoint-support grouping (metadata)
};

struct TrotterSchedule {
  int order = 1;
  double dt = 0.0;
  bool imaginary = false;
  std::vector<TrotterGate> gates;
  int layer_count = 0;
};

// Per-term exponentials exp(-i h c dt) (real time) or exp(-h c dt)
// (imaginary time), order 1 or 2.  Terms are ordered by (min site, max site);
// a second-order step walks that order with half steps and then walks it
// reversed.  Layers group consecutive gates with disjoint supports.
TrotterSchedule trotter_schedule(const HamiltonianSpec& h, double dt, int order,
                                 bool imaginary = false);

struct EvolutionReport {
  struct StepRecord {
    long step;
    double time;
    double energy;
    long max_rank;
    double discarded_cum;
    double seconds;
  };
  std::vector<StepRecord> records;
  bool converged = false;
  double final_energy = 0.0;
  std::string message;
};

// When to run a full re-canonicalization sweep during non-unitary evolution.
enum class SweepPolicy { per_gate, per_layer, per_step };

// Real-time evolution for ceil(t/dt) full Trotter steps; every two-qudit
// gate is routed, every SVD truncated per the policy.
EvolutionReport evolve_real(TtnState& s, const HamiltonianSpec& h, double t,
                            double dt, int order, const TruncationPolicy& pol);

struct ImagTimeOptions {
  std::vector<double> dt_schedule = {0.1, 0.01, 0.001};
  long max_steps_per_dt = 2000;
  double energy_tol = 1e-8;       // |dE| per step at the final dt
  SweepPolicy sweep = SweepPolicy::per_layer;
  int order = 2;
};

// Imaginary-time evolution with an annealed dt schedule; stops each phase
// when the energy plateaus.  The energy must not increase across a step at
// fixed dt beyond 1e-8 (that signals broken canonical handling); failing to
// converge within the step caps is reported, not fatal.
EvolutionReport evolve_imag(TtnState& s, const HamiltonianSpec& h,
                            const ImagTimeOptions& opt, const TruncationPolicy& pol);

}  // namespace ttn
