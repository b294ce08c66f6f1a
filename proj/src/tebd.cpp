#include "ttn/tebd.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <stdexcept>

#include "ttn/canonical.hpp"
#include "ttn/observables.hpp"

namespace ttn {

namespace {

// exp(m * factor) of a Hermitian matrix via its spectral decomposition
DenseTensor hermitian_exp(const DenseTensor& m, cx factor) {
  EighResult es = eigh(m);
  const long n = m.dim(0);
  DenseTensor out({n, n});
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) {
      cx acc = 0.0;
      for (long k = 0; k < n; ++k)
        acc += es.vectors.at({i, k}) * std::exp(factor * es.eigenvalues[static_cast<size_t>(k)]) *
               std::conj(es.vectors.at({j, k}));
      out.set({i, j}, acc);
    }
  return out;
}

bool supports_disjoint(const std::vector<int>& a, const std::vector<int>& b) {
  for (int x : a)
    for (int y : b)
      if (x == y) return false;
  return true;
}

double wall_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point t0 = clock::now();
  return std::chrono::duration<double>(clock::now() - t0).count();
}

}  // namespace

TrotterSchedule trotter_schedule(const HamiltonianSpec& h, double dt, int order,
                                 bool imaginary) {
  if (order != 1 && order != 2)
    throw std::invalid_argument("trotter_schedule: order must be 1 or 2");
  if (dt == 0.0) throw std::invalid_argument("trotter_schedule: dt must be nonzero");
  h.validate();

  // deterministic term order: (min site, max site), stable on ties
  std::vector<int> idx(h.terms.size());
  for (size_t i = 0; i < idx.size(); ++i) idx[i] = static_cast<int>(i);
  auto key = [&](int i) {
    const auto& s = h.terms[static_cast<size_t>(i)].sites;
    int lo = *std::min_element(s.begin(), s.end());
    int hi = *std::max_element(s.begin(), s.end());
    return std::pair<int, int>(lo, hi);
  };
  std::stable_sort(idx.begin(), idx.end(),
                   [&](int a, int b) { return key(a) < key(b); });

  TrotterSchedule sched;
  sched.order = order;
  sched.dt = dt;
  sched.imaginary = imaginary;

  std::vector<std::pair<int, double>> seq;  // (term, coefficient of dt)
  if (order == 1) {
    for (int i : idx) seq.push_back({i, 1.0});
  } else {
    for (int i : idx) seq.push_back({i, 0.5});
    for (auto it = idx.rbegin(); it != idx.rend(); ++it) seq.push_back({*it, 0.5});
  }

  for (auto [i, c] : seq) {
    const auto& term = h.terms[static_cast<size_t>(i)];
    TrotterGate tg;
    tg.sites = term.sites;
    tg.term_index = i;
    tg.coeff = c;
    cx factor = imaginary ? cx{-c * dt, 0.0} : cx{0.0, -c * dt};
    GateOp g;
    g.matrix = hermitian_exp(term.matrix, factor);
    g.arity = static_cast<int>(term.sites.size());
    g.unitary = !imaginary;
    tg.gate = std::move(g);
    sched.gates.push_back(std::move(tg));
  }

  // layer metadata: maximal runs of consecutive disjoint-support gates
  int layer = 0;
  std::vector<std::vector<int>> occupied;
  for (auto& g : sched.gates) {
    bool fits = true;
    for (const auto& s : occupied)
      if (!supports_disjoint(s, g.sites)) fits = false;
    if (!fits) {
      ++layer;
      occupied.clear();
    }
    occupied.push_back(g.sites);
    g.layer = layer;
  }
  sched.layer_count = sched.gates.empty() ? 0 : layer + 1;
  return sched;
}

namespace {

double apply_schedule_once(TtnState& s, const TrotterSchedule& sched,
                           const TruncationPolicy& pol, SweepPolicy sweep) {
  double discarded = 0.0;
  int current_layer = sched.gates.empty() ? 0 : sched.gates.front().layer;
  for (const auto& g : sched.gates) {
    if (sweep == SweepPolicy::per_layer && g.layer != current_layer) {
      if (!s.canonical) canonicalize(s, 0.0);
      current_layer = g.layer;
    }
    if (g.sites.size() == 1) {
      apply_local(s, g.gate, g.sites[0]);
    } else {
      discarded += apply_gate_routed(s, g.gate, g.sites[0], g.sites[1], pol,
                                     /*resweep_nonunitary=*/sweep == SweepPolicy::per_gate);
    }
    if (sweep == SweepPolicy::per_gate && !s.canonical) canonicalize(s, 0.0);
  }
  if (!s.canonical) canonicalize(s, 0.0);
  return discarded;
}

}  // namespace

EvolutionReport evolve_real(TtnState& s, const HamiltonianSpec& h, double t,
                            double dt, int order, const TruncationPolicy& pol) {
  if (!s.canonical) throw state_error("evolve_real: state must be canonical");
  if (dt <= 0.0) throw std::invalid_argument("evolve_real: dt must be positive");
  TrotterSchedule sched = trotter_schedule(h, dt, order, /*imaginary=*/false);
  const long steps = static_cast<long>(std::ceil(t / dt - 1e-9));

  EvolutionReport rep;
  double discarded_cum = 0.0;
  for (long k = 0; k < steps; ++k) {
    const double t0 = wall_seconds();
    discarded_cum += apply_schedule_once(s, sched, pol, SweepPolicy::per_layer);
    const double e = energy(s, h);
    if (!std::isfinite(e))
      throw numerical_error("evolve_real: non-finite energy at step " + std::to_string(k + 1));
    rep.records.push_back({k + 1, (k + 1) * dt, e, s.chi_max_observed(), discarded_cum,
                           wall_seconds() - t0});
  }
  rep.converged = true;
  rep.final_energy = rep.records.empty() ? energy(s, h) : rep.records.back().energy;
  return rep;
}

EvolutionReport evolve_imag(TtnState& s, const HamiltonianSpec& h,
                            const ImagTimeOptions& opt, const TruncationPolicy& pol) {
  if (!s.canonical) throw state_error("evolve_imag: state must be canonical");
  if (opt.dt_schedule.empty())
    throw std::invalid_argument("evolve_imag: empty dt schedule");

  EvolutionReport rep;
  long step_count = 0;
  double discarded_cum = 0.0;
  double prev_energy = energy(s, h);
  bool all_converged = true;

  for (size_t phase = 0; phase < opt.dt_schedule.size(); ++phase) {
    const double dt = opt.dt_schedule[phase];
    if (dt <= 0.0) throw std::invalid_argument("evolve_imag: dt must be positive");
    TrotterSchedule sched = trotter_schedule(h, dt, opt.order, /*imaginary=*/true);
    const bool final_phase = phase + 1 == opt.dt_schedule.size();
    // intermediate phases only need to reach their own Trotter bias floor
    const double tol = final_phase ? opt.energy_tol
                                   : std::max(opt.energy_tol, 1e-4 * dt * dt);
    bool phase_converged = false;
    bool first_step_of_phase = true;

    for (long k = 0; k < opt.max_steps_per_dt; ++k) {
      const double t0 = wall_seconds();
      discarded_cum += apply_schedule_once(s, sched, pol, opt.sweep);
      const double e = energy(s, h);
      ++step_count;
      if (!std::isfinite(e))
        throw numerical_error("evolve_imag: non-finite energy at step " +
                              std::to_string(step_count));
      rep.records.push_back({step_count, step_count * dt, e, s.chi_max_observed(),
                             discarded_cum, wall_seconds() - t0});
      if (!first_step_of_phase && e > prev_energy + 1e-8)
        throw numerical_error(
            "evolve_imag: energy increased by " + std::to_string(e - prev_energy) +
            " across a step at fixed dt (broken canonical handling?)");
      const double delta = std::abs(e - prev_energy);
      prev_energy = e;
      if (!first_step_of_phase && delta < tol) {
        phase_converged = true;
        break;
      }
      first_step_of_phase = false;
    }
    if (!phase_converged) all_converged = false;
  }

  rep.converged = all_converged;
  rep.final_energy = prev_energy;
  if (!all_converged)
    rep.message = "energy did not plateau within the step cap of at least one dt phase";
  return rep;
}

}  // namespace ttn
