#pragma once

#include <algorithm>
#include <cmath>
#include <functional>
#include <vector>

#include "ttn/canonical.hpp"
#include "ttn/gates.hpp"
#include "ttn/measurement.hpp"
#include "ttn/observables.hpp"
#include "ttn/random.hpp"
#include "ttn/serialize.hpp"
#include "ttn/statevector.hpp"
#include "ttn/tebd.hpp"
#include "ttn/ttn_state.hpp"

namespace ts {

using namespace ttn;

inline double max_abs_diff(const DenseTensor& a, const DenseTensor& b) {
  if (a.size() != b.size()) return 1e300;
  double dev = 0.0;
  for (long i = 0; i < a.size(); ++i) dev = std::max(dev, std::abs(a[i] - b[i]));
  return dev;
}

inline double max_abs_diff(const std::vector<double>& a, const std::vector<double>& b) {
  double dev = 0.0;
  for (size_t i = 0; i < std::max(a.size(), b.size()); ++i) {
    double x = i < a.size() ? a[i] : 0.0;
    double y = i < b.size() ? b[i] : 0.0;
    dev = std::max(dev, std::abs(x - y));
  }
  return dev;
}

inline double dev_from_identity(const DenseTensor& m) {
  double dev = 0.0;
  for (long i = 0; i < m.dim(0); ++i)
    for (long j = 0; j < m.dim(1); ++j)
      dev = std::max(dev, std::abs(m.at({i, j}) - (i == j ? cx{1, 0} : cx{0, 0})));
  return dev;
}

// the paper's 7-qudit example tree: two cherries and a path hanging off a
// central vertex
inline TreeTopology fig1_topology() {
  const int n = 7;
  auto v = [n](int k) { return n + k; };
  std::vector<std::array<int, 2>> edges = {
      {0, v(0)}, {1, v(0)}, {v(0), v(1)}, {2, v(1)}, {v(1), v(2)},
      {v(2), v(3)}, {3, v(3)}, {4, v(3)}, {v(2), v(4)}, {5, v(4)}, {6, v(4)}};
  return TreeTopology(n, std::move(edges));
}

inline Statevector ghz(int n) {
  check_sv_budget(n, 2);
  Statevector v{n, 2, std::vector<cx>(static_cast<size_t>(1L << n), cx{0, 0})};
  const double s = 1.0 / std::sqrt(2.0);
  v.amps.front() = s;
  v.amps.back() = s;
  return v;
}

inline std::vector<std::vector<cx>> random_locals(int n, int d, RandomSource& rng) {
  std::vector<std::vector<cx>> out;
  for (int k = 0; k < n; ++k) out.push_back(random_unit_vector(d, rng));
  return out;
}

// Random TTN with generic (non-canonical) tensors.  Edge ranks default to
// min(chi_cap, d^smaller-side); cap_by_bipartition = false keeps every rank
// at chi_cap regardless (useful for scaling benchmarks).
inline TtnState random_ttn(const TreeTopology& topo, int d, long chi_cap,
                           RandomSource& rng, bool cap_by_bipartition = true) {
  TtnState s;
  s.topo = topo;
  s.d = d;
  s.weights.assign(static_cast<size_t>(topo.num_edges()), {});
  for (int e : topo.internal_edge_ids()) {
    long rank = chi_cap;
    if (cap_by_bipartition) {
      Bipartition bp = topo.bipartition_of(e);
      long small = std::min(bp.side_a.size(), bp.side_b.size());
      long cap = 1;
      for (long k = 0; k < small && cap < chi_cap; ++k) cap *= d;
      rank = std::min(chi_cap, cap);
    }
    std::vector<double> w(static_cast<size_t>(rank));
    double sum = 0.0;
    for (auto& x : w) {
      x = 0.1 + rng.uniform01();
      sum += x * x;
    }
    std::sort(w.begin(), w.end(), std::greater<double>());
    for (auto& x : w) x /= std::sqrt(sum);
    s.weights[static_cast<size_t>(e)] = std::move(w);
  }
  for (int v = 0; v < topo.num_vertices(); ++v) {
    std::vector<long> shape;
    for (int e : topo.vertex_edges(v)) shape.push_back(s.edge_rank(e));
    s.tensors.push_back(random_tensor(shape, rng));
  }
  normalize_state(s);
  return s;
}

// Brute-force oracle: the explicit (bare) subtree states across an internal
// edge as columns of a [d^(side qudits) x rank] matrix, qudits flattened in
// ascending order.  Kept independent of the library's Gram recursion.
inline DenseTensor subtree_states(const TtnState& s, int edge, int side) {
  struct Node {
    DenseTensor t;
    std::vector<int> labels;  // qudit >= 0; -1 = the open edge index
  };
  std::function<Node(int, int)> walk = [&](int vertex, int from_edge) -> Node {
    Node cur;
    cur.t = s.tensors[static_cast<size_t>(vertex)];
    std::vector<int> descend;
    for (int e : s.topo.vertex_edges(vertex)) {
      if (e == from_edge) {
        cur.labels.push_back(-1);
      } else if (!s.topo.is_internal_edge(e)) {
        const auto& ep = s.topo.edge_endpoints(e);
        int slot = s.topo.endpoint_is_leaf(ep[0]) ? s.topo.endpoint_id(ep[0])
                                                  : s.topo.endpoint_id(ep[1]);
        cur.labels.push_back(s.topo.qudit_at_slot(slot));
      } else {
        cur.labels.push_back(-2 - e);
        descend.push_back(e);
      }
    }
    for (int e : descend) {
      Node child = walk(s.topo.other_vertex(e, vertex), e);
      int bpos = 0;
      while (child.labels[static_cast<size_t>(bpos)] != -1) ++bpos;
      child.t = scale_axis(child.t, bpos, s.weights[static_cast<size_t>(e)]);
      int mypos = 0;
      while (cur.labels[static_cast<size_t>(mypos)] != -2 - e) ++mypos;
      DenseTensor joined = contract(cur.t, child.t, {{mypos, bpos}});
      std::vector<int> labels;
      for (size_t i = 0; i < cur.labels.size(); ++i)
        if (static_cast<int>(i) != mypos) labels.push_back(cur.labels[i]);
      for (size_t i = 0; i < child.labels.size(); ++i)
        if (static_cast<int>(i) != bpos) labels.push_back(child.labels[i]);
      cur.t = std::move(joined);
      cur.labels = std::move(labels);
    }
    return cur;
  };

  int start = s.topo.endpoint_id(s.topo.edge_endpoints(edge)[static_cast<size_t>(side)]);
  Node res = walk(start, edge);
  // arrange: ascending qudits, then the open edge index last
  std::vector<std::pair<int, int>> tagged;
  for (size_t i = 0; i < res.labels.size(); ++i)
    tagged.push_back({res.labels[i] == -1 ? 1 << 30 : res.labels[i], static_cast<int>(i)});
  std::sort(tagged.begin(), tagged.end());
  std::vector<int> order;
  for (auto& [lbl, pos] : tagged) order.push_back(pos);
  DenseTensor arranged = permute(res.t, order);
  long rank = arranged.dim(arranged.rank() - 1);
  return arranged.reshape({arranged.size() / rank, rank});
}

// Gram of the oracle subtree states: M[a, a'] = <phi_a' | phi_a>
inline DenseTensor oracle_gram(const TtnState& s, int edge, int side) {
  DenseTensor phi = subtree_states(s, edge, side);
  return contract(phi, phi.conjugate(), {{0, 0}});
}

inline double overlap_mag(const Statevector& a, const Statevector& b) {
  return std::abs(sv_inner(a, b));
}

}  // namespace ts
