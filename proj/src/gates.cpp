#include "ttn/gates.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "ttn/canonical.hpp"

namespace ttn {

namespace {

// always drop exactly-zero singular values (relative squared weight)
constexpr double kZeroCutoff = 1e-26;

void absorb_if_internal(const TtnState& s, DenseTensor& t, int pos, int edge) {
  if (s.topo.is_internal_edge(edge))
    t = scale_axis(t, pos, s.weights[static_cast<size_t>(edge)]);
}

void detach_if_internal(const TtnState& s, DenseTensor& t, int pos, int edge) {
  if (s.topo.is_internal_edge(edge))
    t = scale_axis(t, pos, s.weights[static_cast<size_t>(edge)], /*invert=*/true);
}

std::vector<double> maybe_renormalized(const std::vector<double>& sv, bool renorm) {
  if (!renorm) return sv;
  double sum = 0.0;
  for (double v : sv) sum += v * v;
  if (!(sum > 0)) throw numerical_error("gate update produced a zero-norm state");
  std::vector<double> out = sv;
  const double inv = 1.0 / std::sqrt(sum);
  for (auto& v : out) v *= inv;
  return out;
}

int shared_internal_edge(const TreeTopology& topo, int u, int v) {
  for (int e : topo.vertex_edges(u))
    if (topo.is_internal_edge(e) && topo.other_vertex(e, u) == v) return e;
  throw std::invalid_argument("vertices are not adjacent");
}

// inverse placement: result position k takes source index src_of[k]
std::vector<int> placement(int rank, const std::vector<std::pair<int, int>>& pos_src) {
  std::vector<int> order(static_cast<size_t>(rank), -1);
  for (auto [pos, src] : pos_src) order[static_cast<size_t>(pos)] = src;
  return order;
}

}  // namespace

GateOp make_gate(const DenseTensor& m, int d) {
  GateOp g;
  g.matrix = m;
  g.arity = matrix_arity(m, d);
  g.unitary = is_unitary(m, 1e-10);
  return g;
}

GateOp named_gate(const std::string& name, int d) {
  return make_gate(named_matrix(name, d), d);
}

void apply_local(TtnState& s, const GateOp& g, int qudit) {
  if (g.arity != 1) throw std::invalid_argument("apply_local: one-qudit gate required");
  int e = s.topo.leaf_edge_of_qudit(qudit);
  int v = s.topo.vertex_of_edge(e);
  int pos = s.topo.edge_position_in_vertex(v, e);
  s.tensors[static_cast<size_t>(v)] =
      apply_matrix(s.tensors[static_cast<size_t>(v)], pos, g.matrix);
  if (!g.unitary) s.invalidate();
}

void apply_same_tensor(TtnState& s, const GateOp& g, int q1, int q2) {
  if (g.arity != 2) throw std::invalid_argument("apply_same_tensor: two-qudit gate required");
  if (q1 == q2) throw std::invalid_argument("apply_same_tensor: identical qudits");
  int v1 = s.topo.vertex_of_qudit(q1);
  int v2 = s.topo.vertex_of_qudit(q2);
  if (v1 != v2)
    throw std::invalid_argument("apply_same_tensor: qudits are not on the same vertex");
  int p1 = s.topo.edge_position_in_vertex(v1, s.topo.leaf_edge_of_qudit(q1));
  int p2 = s.topo.edge_position_in_vertex(v1, s.topo.leaf_edge_of_qudit(q2));
  int rest = 3 - p1 - p2;

  const long d = s.d;
  DenseTensor g4 = g.matrix.reshape({d, d, d, d});  // [i', j', i, j]
  DenseTensor t = contract(s.tensors[static_cast<size_t>(v1)], g4, {{p1, 2}, {p2, 3}});
  // t = [rest, i', j']
  s.tensors[static_cast<size_t>(v1)] =
      permute(t, placement(3, {{p1, 1}, {p2, 2}, {rest, 0}}));
  if (!g.unitary) s.invalidate();
}

double apply_neighbor_gate(TtnState& s, const GateOp& g, int q1, int q2,
                           const TruncationPolicy& pol, bool resweep_nonunitary) {
  if (g.arity != 2) throw std::invalid_argument("apply_neighbor_gate: two-qudit gate required");
  int u = s.topo.vertex_of_qudit(q1);
  int v = s.topo.vertex_of_qudit(q2);
  if (u == v)
    throw std::invalid_argument("apply_neighbor_gate: qudits share a vertex; use apply_same_tensor");
  int e = shared_internal_edge(s.topo, u, v);

  int leaf1_pos = s.topo.edge_position_in_vertex(u, s.topo.leaf_edge_of_qudit(q1));
  int e_pos_u = s.topo.edge_position_in_vertex(u, e);
  int c_pos = 3 - leaf1_pos - e_pos_u;
  int c_edge = s.topo.vertex_edges(u)[static_cast<size_t>(c_pos)];

  int leaf2_pos = s.topo.edge_position_in_vertex(v, s.topo.leaf_edge_of_qudit(q2));
  int e_pos_v = s.topo.edge_position_in_vertex(v, e);
  int w_pos = 3 - leaf2_pos - e_pos_v;
  int w_edge = s.topo.vertex_edges(v)[static_cast<size_t>(w_pos)];

  DenseTensor tu = s.tensors[static_cast<size_t>(u)];
  absorb_if_internal(s, tu, c_pos, c_edge);
  tu = scale_axis(tu, e_pos_u, s.weights[static_cast<size_t>(e)]);
  DenseTensor tv = s.tensors[static_cast<size_t>(v)];
  absorb_if_internal(s, tv, w_pos, w_edge);

  DenseTensor tu2 = permute(tu, {leaf1_pos, c_pos, e_pos_u});  // [i, c, e]
  DenseTensor tv2 = permute(tv, {e_pos_v, leaf2_pos, w_pos});  // [e, j, w]
  DenseTensor theta = contract(tu2, tv2, {{2, 0}});            // [i, c, j, w]

  const long d = s.d;
  DenseTensor g4 = g.matrix.reshape({d, d, d, d});
  theta = contract(theta, g4, {{0, 2}, {2, 3}});  // [c, w, i', j']
  theta = permute(theta, {2, 0, 3, 1});           // [i', c, j', w]

  SvdResult svd = svd_split(theta, {0, 1}, pol.chi_max, std::max(pol.cutoff, kZeroCutoff));
  s.weights[static_cast<size_t>(e)] = maybe_renormalized(svd.singular_values, s.normalized);

  DenseTensor left = svd.left;  // [i', c, k]
  detach_if_internal(s, left, 1, c_edge);
  s.tensors[static_cast<size_t>(u)] =
      permute(left, placement(3, {{leaf1_pos, 0}, {c_pos, 1}, {e_pos_u, 2}}));
  DenseTensor right = svd.right;  // [k, j', w]
  detach_if_internal(s, right, 2, w_edge);
  s.tensors[static_cast<size_t>(v)] =
      permute(right, placement(3, {{e_pos_v, 0}, {leaf2_pos, 1}, {w_pos, 2}}));

  if (!g.unitary) {
    s.canonical = false;
    if (resweep_nonunitary) canonicalize(s, 0.0);
  }
  return svd.discarded_weight;
}

double swap_step(TtnState& s, int u, int v, int qudit_on_u, int edge_on_v,
                 const TruncationPolicy& pol) {
  int e = shared_internal_edge(s.topo, u, v);
  int beta_edge = s.topo.leaf_edge_of_qudit(qudit_on_u);
  if (s.topo.vertex_of_edge(beta_edge) != u)
    throw std::invalid_argument("swap_step: qudit does not hang on vertex u");
  if (edge_on_v == e)
    throw std::invalid_argument("swap_step: cannot swap with the connecting edge");
  int gamma_pos = s.topo.edge_position_in_vertex(v, edge_on_v);  // validates incidence

  int beta_pos = s.topo.edge_position_in_vertex(u, beta_edge);
  int e_pos_u = s.topo.edge_position_in_vertex(u, e);
  int c_pos = 3 - beta_pos - e_pos_u;
  int c_edge = s.topo.vertex_edges(u)[static_cast<size_t>(c_pos)];
  int e_pos_v = s.topo.edge_position_in_vertex(v, e);
  int w_pos = 3 - gamma_pos - e_pos_v;
  int w_edge = s.topo.vertex_edges(v)[static_cast<size_t>(w_pos)];

  DenseTensor tu = s.tensors[static_cast<size_t>(u)];
  absorb_if_internal(s, tu, c_pos, c_edge);
  tu = scale_axis(tu, e_pos_u, s.weights[static_cast<size_t>(e)]);
  DenseTensor tv = s.tensors[static_cast<size_t>(v)];
  absorb_if_internal(s, tv, gamma_pos, edge_on_v);
  absorb_if_internal(s, tv, w_pos, w_edge);

  DenseTensor tu2 = permute(tu, {beta_pos, c_pos, e_pos_u});   // [beta, c, e]
  DenseTensor tv2 = permute(tv, {e_pos_v, gamma_pos, w_pos});  // [e, gamma, w]
  DenseTensor theta = contract(tu2, tv2, {{2, 0}});            // [beta, c, gamma, w]

  // new grouping: u hosts (gamma, c), v hosts (beta, w)
  SvdResult svd = svd_split(theta, {2, 1}, pol.chi_max, std::max(pol.cutoff, kZeroCutoff));
  s.weights[static_cast<size_t>(e)] = maybe_renormalized(svd.singular_values, s.normalized);

  DenseTensor left = svd.left;  // [gamma, c, k]
  detach_if_internal(s, left, 0, edge_on_v);
  detach_if_internal(s, left, 1, c_edge);
  DenseTensor right = svd.right;  // [k, beta, w]
  detach_if_internal(s, right, 2, w_edge);

  s.topo.exchange_edges(u, beta_edge, v, edge_on_v);
  // beta_pos at u now carries edge_on_v; gamma_pos at v now carries the leaf
  s.tensors[static_cast<size_t>(u)] =
      permute(left, placement(3, {{beta_pos, 0}, {c_pos, 1}, {e_pos_u, 2}}));
  s.tensors[static_cast<size_t>(v)] =
      permute(right, placement(3, {{e_pos_v, 0}, {gamma_pos, 1}, {w_pos, 2}}));
  return svd.discarded_weight;
}

double apply_gate_routed(TtnState& s, const GateOp& g, int q1, int q2,
                         const TruncationPolicy& pol, bool resweep_nonunitary) {
  if (q1 == q2) throw std::invalid_argument("apply_gate_routed: identical qudits");
  if (g.arity != 2) throw std::invalid_argument("apply_gate_routed: two-qudit gate required");
  std::vector<int> path = s.topo.path_between(q1, q2);
  const int m = static_cast<int>(path.size());
  double total = 0.0;

  if (m == 1) {
    apply_same_tensor(s, g, q1, q2);
    if (!g.unitary && resweep_nonunitary) canonicalize(s, 0.0);
    return 0.0;
  }

  std::vector<int> displaced;
  for (int i = 0; i + 2 < m; ++i) {
    int vn = path[static_cast<size_t>(i + 1)];
    int e_prev = shared_internal_edge(s.topo, path[static_cast<size_t>(i)], vn);
    int e_next = shared_internal_edge(s.topo, vn, path[static_cast<size_t>(i + 2)]);
    int gamma = -1;
    for (int f : s.topo.vertex_edges(vn))
      if (f != e_prev && f != e_next) gamma = f;
    total += swap_step(s, path[static_cast<size_t>(i)], vn, q1, gamma, pol);
    displaced.push_back(gamma);
  }

  total += apply_neighbor_gate(s, g, q1, q2, pol, /*resweep_nonunitary=*/false);

  for (int i = m - 3; i >= 0; --i)
    total += swap_step(s, path[static_cast<size_t>(i + 1)], path[static_cast<size_t>(i)],
                       q1, displaced[static_cast<size_t>(i)], pol);

  if (!g.unitary) {
    s.canonical = false;
    if (resweep_nonunitary) canonicalize(s, 0.0);
  }
  return total;
}

}  // namespace ttn
