#include "ttn/ttn_state.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ttn {

long TtnState::edge_rank(int e) const {
  if (!topo.is_internal_edge(e)) return d;
  return static_cast<long>(weights[static_cast<size_t>(e)].size());
}

int TtnState::chi_max_observed() const {
  long best = 1;
  for (int e : topo.internal_edge_ids())
    best = std::max(best, edge_rank(e));
  return static_cast<int>(best);
}

void TtnState::check_shapes() const {
  if (static_cast<int>(tensors.size()) != topo.num_vertices())
    throw state_error("tensor count does not match vertex count");
  if (static_cast<int>(weights.size()) != topo.num_edges())
    throw state_error("weight table size does not match edge count");
  for (int v = 0; v < topo.num_vertices(); ++v) {
    const auto& t = tensors[static_cast<size_t>(v)];
    if (t.rank() != 3) throw state_error("vertex tensor must have three indices");
    const auto& ve = topo.vertex_edges(v);
    for (int k = 0; k < 3; ++k) {
      long want = edge_rank(ve[static_cast<size_t>(k)]);
      if (t.dim(k) != want)
        throw state_error("tensor index range does not match edge rank");
    }
  }
  for (int e = 0; e < topo.num_edges(); ++e) {
    const auto& w = weights[static_cast<size_t>(e)];
    if (!topo.is_internal_edge(e)) {
      if (!w.empty()) throw state_error("leaf edge carries weights");
      continue;
    }
    if (w.empty()) throw state_error("internal edge has no weights");
    for (size_t i = 0; i < w.size(); ++i) {
      if (!(w[i] > 0.0)) throw state_error("edge weights must be strictly positive");
      if (i > 0 && w[i] > w[i - 1] + 1e-14)
        throw state_error("edge weights must be non-increasing");
    }
  }
}

TtnState product_state(const TreeTopology& topo, int d,
                       const std::vector<std::vector<cx>>& locals) {
  if (static_cast<int>(locals.size()) != topo.n())
    throw std::invalid_argument("product_state: need one local vector per qudit");
  for (const auto& loc : locals) {
    if (static_cast<int>(loc.size()) != d)
      throw std::invalid_argument("product_state: local vector dimension mismatch");
    double nrm2 = 0.0;
    for (const auto& a : loc) nrm2 += std::norm(a);
    if (std::abs(nrm2 - 1.0) > 1e-10)
      throw std::invalid_argument("product_state: local vector is not unit norm");
  }

  TtnState s;
  s.topo = topo;
  s.d = d;
  s.weights.assign(static_cast<size_t>(topo.num_edges()), {});
  for (int e : topo.internal_edge_ids()) s.weights[static_cast<size_t>(e)] = {1.0};

  for (int v = 0; v < topo.num_vertices(); ++v) {
    const auto& ve = topo.vertex_edges(v);
    std::vector<long> shape(3);
    std::vector<const std::vector<cx>*> leaf_vec(3, nullptr);
    for (int k = 0; k < 3; ++k) {
      int e = ve[static_cast<size_t>(k)];
      if (topo.is_internal_edge(e)) {
        shape[static_cast<size_t>(k)] = 1;
      } else {
        shape[static_cast<size_t>(k)] = d;
        const auto& ep = topo.edge_endpoints(e);
        int slot = topo.endpoint_is_leaf(ep[0]) ? topo.endpoint_id(ep[0])
                                                : topo.endpoint_id(ep[1]);
        leaf_vec[static_cast<size_t>(k)] = &locals[static_cast<size_t>(topo.qudit_at_slot(slot))];
      }
    }
    DenseTensor t(shape);
    std::vector<long> idx(3, 0);
    for (long off = 0; off < t.size(); ++off) {
      cx val = 1.0;
      for (int k = 0; k < 3; ++k)
        if (leaf_vec[static_cast<size_t>(k)])
          val *= (*leaf_vec[static_cast<size_t>(k)])[static_cast<size_t>(idx[static_cast<size_t>(k)])];
      t[off] = val;
      for (int k = 2; k >= 0; --k) {
        if (++idx[static_cast<size_t>(k)] < shape[static_cast<size_t>(k)]) break;
        idx[static_cast<size_t>(k)] = 0;
      }
    }
    s.tensors.push_back(std::move(t));
  }
  s.canonical = true;
  s.normalized = true;
  return s;
}

namespace {

struct Labeled {
  DenseTensor t;
  std::vector<int> labels;  // qudit id >= 0, or < 0 for auxiliary indices
};

Labeled contract_labeled(const Labeled& a, const Labeled& b,
                         const std::vector<std::pair<int, int>>& pairs) {
  Labeled out;
  out.t = contract(a.t, b.t, pairs);
  std::vector<char> ua(a.labels.size(), 0), ub(b.labels.size(), 0);
  for (auto [ia, ib] : pairs) {
    ua[static_cast<size_t>(ia)] = 1;
    ub[static_cast<size_t>(ib)] = 1;
  }
  for (size_t i = 0; i < a.labels.size(); ++i)
    if (!ua[i]) out.labels.push_back(a.labels[i]);
  for (size_t i = 0; i < b.labels.size(); ++i)
    if (!ub[i]) out.labels.push_back(b.labels[i]);
  return out;
}

constexpr int kBoundary = -1;

Labeled subtree_contraction(const TtnState& s, int v, int parent_edge) {
  Labeled cur;
  cur.t = s.tensors[static_cast<size_t>(v)];
  const auto& ve = s.topo.vertex_edges(v);
  std::vector<int> to_descend;
  for (int k = 0; k < 3; ++k) {
    int e = ve[static_cast<size_t>(k)];
    if (e == parent_edge) {
      cur.labels.push_back(kBoundary);
    } else if (!s.topo.is_internal_edge(e)) {
      const auto& ep = s.topo.edge_endpoints(e);
      int slot = s.topo.endpoint_is_leaf(ep[0]) ? s.topo.endpoint_id(ep[0])
                                                : s.topo.endpoint_id(ep[1]);
      cur.labels.push_back(s.topo.qudit_at_slot(slot));
    } else {
      cur.labels.push_back(-2 - e);  // placeholder, contracted below
      to_descend.push_back(e);
    }
  }
  for (int e : to_descend) {
    int child = s.topo.other_vertex(e, v);
    Labeled sub = subtree_contraction(s, child, e);
    int bpos = -1;
    for (size_t i = 0; i < sub.labels.size(); ++i)
      if (sub.labels[i] == kBoundary) bpos = static_cast<int>(i);
    sub.t = scale_axis(sub.t, bpos, s.weights[static_cast<size_t>(e)]);
    int mypos = -1;
    for (size_t i = 0; i < cur.labels.size(); ++i)
      if (cur.labels[i] == -2 - e) mypos = static_cast<int>(i);
    cur = contract_labeled(cur, sub, {{mypos, bpos}});
  }
  return cur;
}

}  // namespace

Statevector to_statevector(const TtnState& s) {
  check_sv_budget(s.topo.n(), s.d);
  Labeled full = subtree_contraction(s, 0, -1);
  // sort open indices into ascending qudit order
  std::vector<int> order(full.labels.size());
  std::vector<std::pair<int, int>> tagged;
  for (size_t i = 0; i < full.labels.size(); ++i)
    tagged.push_back({full.labels[i], static_cast<int>(i)});
  std::sort(tagged.begin(), tagged.end());
  for (size_t i = 0; i < tagged.size(); ++i) order[i] = tagged[i].second;
  DenseTensor arranged = permute(full.t, order);

  Statevector v;
  v.n = s.topo.n();
  v.d = s.d;
  v.amps.assign(arranged.data().begin(), arranged.data().end());
  return v;
}

namespace {

// Reshape a Schmidt basis matrix [d^(|qudits|) x r] into a labeled tensor
// [d, d, ..., r] with the given (ascending) qudit labels.
Labeled basis_to_labeled(const DenseTensor& basis, const std::vector<int>& qudits,
                         int d, int aux_label) {
  std::vector<long> shape(qudits.size(), d);
  shape.push_back(basis.dim(1));
  Labeled out;
  out.t = basis.reshape(shape);
  out.labels = qudits;
  out.labels.push_back(aux_label);
  return out;
}

}  // namespace

TtnState from_statevector(const Statevector& v, const TreeTopology& topo) {
  if (topo.n() != v.n)
    throw std::invalid_argument("from_statevector: topology leaf count mismatch");
  check_sv_budget(v.n, v.d);
  if (std::abs(v.norm() - 1.0) > 1e-8)
    throw std::invalid_argument("from_statevector: input must be normalized");

  const int nv = topo.num_vertices();
  TtnState s;
  s.topo = topo;
  s.d = v.d;
  s.tensors.resize(static_cast<size_t>(nv));
  s.weights.assign(static_cast<size_t>(topo.num_edges()), {});

  // orient internal edges away from the root (vertex 0)
  std::vector<int> parent_edge(static_cast<size_t>(nv), -1);
  std::vector<int> bfs{0};
  std::vector<char> seen(static_cast<size_t>(nv), 0);
  seen[0] = 1;
  for (size_t head = 0; head < bfs.size(); ++head) {
    int u = bfs[head];
    for (int e : topo.vertex_edges(u)) {
      if (!topo.is_internal_edge(e)) continue;
      int w = topo.other_vertex(e, u);
      if (seen[static_cast<size_t>(w)]) continue;
      seen[static_cast<size_t>(w)] = 1;
      parent_edge[static_cast<size_t>(w)] = e;
      bfs.push_back(w);
    }
  }

  // per internal edge: Schmidt basis of the away-from-root side
  std::vector<DenseTensor> basis(static_cast<size_t>(topo.num_edges()));
  std::vector<std::vector<int>> below(static_cast<size_t>(topo.num_edges()));
  for (int e : topo.internal_edge_ids()) {
    Bipartition bp = topo.bipartition_of(e);
    // child endpoint: the one whose vertex has e as parent edge
    int child_vertex = -1;
    for (int c : topo.edge_endpoints(e)) {
      int w = topo.endpoint_id(c);
      if (parent_edge[static_cast<size_t>(w)] == e) child_vertex = w;
    }
    // side_a belongs to endpoint 0
    bool side_a_is_child = topo.endpoint_id(topo.edge_endpoints(e)[0]) == child_vertex;
    below[static_cast<size_t>(e)] = side_a_is_child ? bp.side_a : bp.side_b;
    auto [phi, lam] = sv_schmidt_basis(v, below[static_cast<size_t>(e)]);
    basis[static_cast<size_t>(e)] = std::move(phi);
    s.weights[static_cast<size_t>(e)] = std::move(lam);
  }

  // build each vertex tensor by projecting the parent basis onto the child
  // bases (dividing out the child weights)
  DenseTensor psi_tensor(std::vector<long>(static_cast<size_t>(v.n), v.d),
                         std::vector<cx>(v.amps.begin(), v.amps.end()));
  for (int w = 0; w < nv; ++w) {
    Labeled p;
    int pe = parent_edge[static_cast<size_t>(w)];
    bool is_root = (w == 0);
    if (is_root) {
      p.t = psi_tensor;
      for (int q = 0; q < v.n; ++q) p.labels.push_back(q);
    } else {
      p = basis_to_labeled(basis[static_cast<size_t>(pe)], below[static_cast<size_t>(pe)],
                           v.d, -1);
    }
    for (int e : topo.vertex_edges(w)) {
      if (e == pe || !topo.is_internal_edge(e)) continue;
      Labeled c = basis_to_labeled(basis[static_cast<size_t>(e)].conjugate(),
                                   below[static_cast<size_t>(e)], v.d, -2 - e);
      std::vector<std::pair<int, int>> pairs;
      for (size_t i = 0; i < c.labels.size(); ++i) {
        if (c.labels[i] < 0) continue;
        for (size_t j = 0; j < p.labels.size(); ++j)
          if (p.labels[j] == c.labels[i]) pairs.push_back({static_cast<int>(j), static_cast<int>(i)});
      }
      p = contract_labeled(p, c, pairs);
      // divide out the child edge weights
      int cpos = -1;
      for (size_t i = 0; i < p.labels.size(); ++i)
        if (p.labels[i] == -2 - e) cpos = static_cast<int>(i);
      p.t = scale_axis(p.t, cpos, s.weights[static_cast<size_t>(e)], /*invert=*/true);
    }
    // arrange to the vertex's index convention
    std::vector<int> order;
    for (int e : topo.vertex_edges(w)) {
      int want;
      if (e == pe) {
        want = kBoundary;
      } else if (!topo.is_internal_edge(e)) {
        const auto& ep = topo.edge_endpoints(e);
        int slot = topo.endpoint_is_leaf(ep[0]) ? topo.endpoint_id(ep[0])
                                                : topo.endpoint_id(ep[1]);
        want = topo.qudit_at_slot(slot);
      } else {
        want = -2 - e;
      }
      int pos = -1;
      for (size_t i = 0; i < p.labels.size(); ++i)
        if (p.labels[i] == want) pos = static_cast<int>(i);
      if (pos < 0) throw std::logic_error("from_statevector: lost an index");
      order.push_back(pos);
    }
    s.tensors[static_cast<size_t>(w)] = permute(p.t, order);
  }

  s.canonical = true;
  s.normalized = true;
  s.check_shapes();
  return s;
}

const std::vector<double>& schmidt_spectrum(const TtnState& s, int edge) {
  if (!s.topo.is_internal_edge(edge))
    throw std::invalid_argument("schmidt_spectrum: edge is a leaf edge");
  if (!s.canonical)
    throw state_error("schmidt_spectrum: state is not canonical");
  return s.weights[static_cast<size_t>(edge)];
}

}  // namespace ttn
