#include "ttn/observables.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ttn/gate_matrices.hpp"

namespace ttn {

namespace {

// vertex tensor with the weights of selected incident edges absorbed
DenseTensor dressed_tensor(const TtnState& s, int v, const std::vector<int>& absorb) {
  DenseTensor t = s.tensors[static_cast<size_t>(v)];
  for (int e : absorb) {
    if (!s.topo.is_internal_edge(e)) continue;
    int pos = s.topo.edge_position_in_vertex(v, e);
    t = scale_axis(t, pos, s.weights[static_cast<size_t>(e)]);
  }
  return t;
}

}  // namespace

DensityMatrix rdm1(const TtnState& s, int q) {
  if (!s.canonical) throw state_error("rdm1: state is not canonical");
  int leaf_edge = s.topo.leaf_edge_of_qudit(q);
  int v = s.topo.vertex_of_edge(leaf_edge);
  int lp = s.topo.edge_position_in_vertex(v, leaf_edge);
  const auto& ve = s.topo.vertex_edges(v);
  std::vector<int> others;
  for (int k = 0; k < 3; ++k)
    if (k != lp) others.push_back(ve[static_cast<size_t>(k)]);
  DenseTensor t = dressed_tensor(s, v, others);
  int p1 = s.topo.edge_position_in_vertex(v, others[0]);
  int p2 = s.topo.edge_position_in_vertex(v, others[1]);
  DenseTensor rho = contract(t, t.conjugate(), {{p1, p1}, {p2, p2}});  // [i, i']
  DensityMatrix out;
  out.qudits = {q};
  out.matrix = std::move(rho);
  return out;
}

DensityMatrix rdm2(const TtnState& s, int q1, int q2) {
  if (!s.canonical) throw state_error("rdm2: state is not canonical");
  if (q1 == q2) throw std::invalid_argument("rdm2: identical qudits");
  const long d = s.d;
  std::vector<int> path = s.topo.path_between(q1, q2);
  const int m = static_cast<int>(path.size());

  if (m == 1) {
    int v = path[0];
    int p1 = s.topo.edge_position_in_vertex(v, s.topo.leaf_edge_of_qudit(q1));
    int p2 = s.topo.edge_position_in_vertex(v, s.topo.leaf_edge_of_qudit(q2));
    int lp = 3 - p1 - p2;
    int lateral = s.topo.vertex_edges(v)[static_cast<size_t>(lp)];
    DenseTensor t = dressed_tensor(s, v, {lateral});
    DenseTensor t2 = permute(t, {p1, p2, lp});                       // [i, j, l]
    DenseTensor rho = contract(t2, t2.conjugate(), {{2, 2}});        // [i, j, i', j']
    DensityMatrix out;
    out.qudits = {q1, q2};
    out.matrix = rho.reshape({d * d, d * d});
    return out;
  }

  // first column: [i1, i1', e0, e0']
  DenseTensor x;
  {
    int v = path[0];
    int e_next = -1;
    for (int f : s.topo.vertex_edges(v))
      if (s.topo.is_internal_edge(f) && s.topo.other_vertex(f, v) == path[1]) e_next = f;
    int p_leaf = s.topo.edge_position_in_vertex(v, s.topo.leaf_edge_of_qudit(q1));
    int p_next = s.topo.edge_position_in_vertex(v, e_next);
    int p_lat = 3 - p_leaf - p_next;
    int lateral = s.topo.vertex_edges(v)[static_cast<size_t>(p_lat)];
    DenseTensor t = dressed_tensor(s, v, {lateral, e_next});
    DenseTensor t2 = permute(t, {p_leaf, p_lat, p_next});            // [i1, l, e0]
    x = contract(t2, t2.conjugate(), {{1, 1}});                      // [i1, e0, i1', e0']
    x = permute(x, {0, 2, 1, 3});                                    // [i1, i1', e0, e0']
  }

  for (int k = 1; k + 1 < m; ++k) {
    int v = path[static_cast<size_t>(k)];
    int e_prev = -1, e_next = -1;
    for (int f : s.topo.vertex_edges(v)) {
      if (!s.topo.is_internal_edge(f)) continue;
      int o = s.topo.other_vertex(f, v);
      if (o == path[static_cast<size_t>(k - 1)]) e_prev = f;
      if (o == path[static_cast<size_t>(k + 1)]) e_next = f;
    }
    int p_prev = s.topo.edge_position_in_vertex(v, e_prev);
    int p_next = s.topo.edge_position_in_vertex(v, e_next);
    int p_lat = 3 - p_prev - p_next;
    int lateral = s.topo.vertex_edges(v)[static_cast<size_t>(p_lat)];
    DenseTensor t = dressed_tensor(s, v, {lateral, e_next});
    DenseTensor t2 = permute(t, {p_prev, p_lat, p_next});            // [p, l, q]
    x = contract(x, t2, {{2, 0}});                                   // [i1, i1', e', l, q]
    x = contract(x, t2.conjugate(), {{2, 0}, {3, 1}});               // [i1, i1', q, q']
  }

  {
    int v = path[static_cast<size_t>(m - 1)];
    int e_prev = -1;
    for (int f : s.topo.vertex_edges(v))
      if (s.topo.is_internal_edge(f) &&
          s.topo.other_vertex(f, v) == path[static_cast<size_t>(m - 2)])
        e_prev = f;
    int p_prev = s.topo.edge_position_in_vertex(v, e_prev);
    int p_leaf = s.topo.edge_position_in_vertex(v, s.topo.leaf_edge_of_qudit(q2));
    int p_lat = 3 - p_prev - p_leaf;
    int lateral = s.topo.vertex_edges(v)[static_cast<size_t>(p_lat)];
    DenseTensor t = dressed_tensor(s, v, {lateral});
    DenseTensor t2 = permute(t, {p_prev, p_leaf, p_lat});            // [p, j, l]
    x = contract(x, t2, {{2, 0}});                                   // [i1, i1', e', j, l]
    x = contract(x, t2.conjugate(), {{2, 0}, {4, 2}});               // [i1, i1', j, j']
  }

  x = permute(x, {0, 2, 1, 3});  // [i1, j, i1', j']
  DensityMatrix out;
  out.qudits = {q1, q2};
  out.matrix = x.reshape({d * d, d * d});
  return out;
}

double expectation(const TtnState& s, const DenseTensor& obs,
                   const std::vector<int>& targets) {
  if (targets.empty() || targets.size() > 2)
    throw std::invalid_argument("expectation: one or two target qudits required");
  if (!is_hermitian(obs, 1e-10))
    throw std::invalid_argument("expectation: observable is not Hermitian");
  DensityMatrix rho = targets.size() == 1 ? rdm1(s, targets[0])
                                          : rdm2(s, targets[0], targets[1]);
  const long dim = rho.matrix.dim(0);
  if (obs.dim(0) != dim)
    throw std::invalid_argument("expectation: observable dimension mismatch");
  cx tr = 0.0;
  for (long a = 0; a < dim; ++a)
    for (long b = 0; b < dim; ++b) tr += obs.at({a, b}) * rho.matrix.at({b, a});
  return tr.real();  // imaginary residue below 1e-10 is discarded
}

double energy(const TtnState& s, const HamiltonianSpec& h) {
  double e = 0.0;
  for (const auto& term : h.terms) e += expectation(s, term.matrix, term.sites);
  return e;
}

double fidelity(const TtnState& s, const Statevector& v) {
  Statevector w = to_statevector(s);
  double f = std::abs(sv_inner(v, w));
  return std::min(f, 1.0);
}

}  // namespace ttn
