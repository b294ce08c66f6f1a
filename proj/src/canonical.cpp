#include "ttn/canonical.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace ttn {

namespace {

// relative eigenvalue threshold for "d_tau > 0" (pseudo-inverse onto the
// retained subspace)
constexpr double kEigRel = 1e-12;
// relative singular-value threshold below which an installed weight is
// treated as an exact zero
constexpr double kRankRel = 1e-13;

// Gram of the weighted family entering a vertex through edge `e`: identity
// for a leaf edge, else Lambda_e G Lambda_e with G the bare Gram of the far
// side.
DenseTensor weighted_env(const TtnState& s, int e, const DenseTensor* bare_gram) {
  if (!s.topo.is_internal_edge(e)) return DenseTensor::identity(s.d);
  const auto& lam = s.weights[static_cast<size_t>(e)];
  DenseTensor g = scale_axis(*bare_gram, 0, lam);
  return scale_axis(g, 1, lam);
}

// G[c, c'] = sum T[a, b, c] conj(T[a', b', c']) H1[a, a'] H2[b, b'] where
// p1/p2/p_out are the index positions of the H1/H2/output edges in T.
DenseTensor gram_through_vertex(const DenseTensor& t, int p1, int p2, int p_out,
                                const DenseTensor& h1, const DenseTensor& h2) {
  DenseTensor t1 = permute(t, {p1, p2, p_out});
  DenseTensor a = contract(t1, h1, {{0, 0}});        // [b, c, a']
  DenseTensor b = contract(a, h2, {{0, 0}});         // [c, a', b']
  return contract(b, t1.conjugate(), {{1, 0}, {2, 1}});  // [c, c']
}

// Bare Gram of the subtree hanging off `edge` on the side away from
// `from_vertex` (recursive, leaf edges contribute the identity).
DenseTensor gram_away(const TtnState& s, int edge, int from_vertex) {
  const auto& ep = s.topo.edge_endpoints(edge);
  int far_code = -1;
  for (int c : ep)
    if (s.topo.endpoint_is_leaf(c) || s.topo.endpoint_id(c) != from_vertex)
      far_code = c;
  if (s.topo.endpoint_is_leaf(far_code)) return DenseTensor::identity(s.d);
  const int w = s.topo.endpoint_id(far_code);
  const auto& ve = s.topo.vertex_edges(w);
  int p_out = s.topo.edge_position_in_vertex(w, edge);
  std::vector<int> others;
  for (int k = 0; k < 3; ++k)
    if (k != p_out) others.push_back(k);
  std::vector<DenseTensor> h;
  for (int k : others) {
    int f = ve[static_cast<size_t>(k)];
    if (!s.topo.is_internal_edge(f)) {
      h.push_back(DenseTensor::identity(s.d));
    } else {
      DenseTensor g = gram_away(s, f, w);
      h.push_back(weighted_env(s, f, &g));
    }
  }
  return gram_through_vertex(s.tensors[static_cast<size_t>(w)], others[0], others[1],
                             p_out, h[0], h[1]);
}

struct Orientation {
  std::vector<int> parent_edge;   // per vertex, -1 at root
  std::vector<int> vertex_order;  // BFS order from the root
};

Orientation orient_from(const TtnState& s, int root) {
  Orientation o;
  const int nv = s.topo.num_vertices();
  o.parent_edge.assign(static_cast<size_t>(nv), -1);
  std::vector<char> seen(static_cast<size_t>(nv), 0);
  o.vertex_order.push_back(root);
  seen[static_cast<size_t>(root)] = 1;
  for (size_t head = 0; head < o.vertex_order.size(); ++head) {
    int u = o.vertex_order[head];
    for (int e : s.topo.vertex_edges(u)) {
      if (!s.topo.is_internal_edge(e)) continue;
      int w = s.topo.other_vertex(e, u);
      if (seen[static_cast<size_t>(w)]) continue;
      seen[static_cast<size_t>(w)] = 1;
      o.parent_edge[static_cast<size_t>(w)] = e;
      o.vertex_order.push_back(w);
    }
  }
  return o;
}

// below (away-from-root) bare Grams for all internal edges, children first
std::vector<DenseTensor> below_grams(const TtnState& s, const Orientation& o) {
  std::vector<DenseTensor> below(static_cast<size_t>(s.topo.num_edges()));
  for (size_t i = o.vertex_order.size(); i-- > 0;) {
    int v = o.vertex_order[i];
    int pe = o.parent_edge[static_cast<size_t>(v)];
    if (pe < 0) continue;
    const auto& ve = s.topo.vertex_edges(v);
    int p_out = s.topo.edge_position_in_vertex(v, pe);
    std::vector<int> others;
    for (int k = 0; k < 3; ++k)
      if (k != p_out) others.push_back(k);
    std::vector<DenseTensor> h;
    for (int k : others) {
      int f = ve[static_cast<size_t>(k)];
      h.push_back(weighted_env(
          s, f, s.topo.is_internal_edge(f) ? &below[static_cast<size_t>(f)] : nullptr));
    }
    below[static_cast<size_t>(pe)] = gram_through_vertex(
        s.tensors[static_cast<size_t>(v)], others[0], others[1], p_out, h[0], h[1]);
  }
  return below;
}

struct EdgeUpdate {
  std::vector<double> new_weights;
  double discarded = 0.0;
  DenseTensor w_a;  // to fold into the A-side tensor's edge index
  DenseTensor w_b;
};

// The Eqs.-of-Theorem-1 step at one edge given both bare Grams; the old edge
// weights are absorbed into side A.
EdgeUpdate orthonormalize_edge(const std::vector<double>& lam_old,
                               const DenseTensor& gram_a, const DenseTensor& gram_b,
                               double cutoff) {
  DenseTensor m_a = scale_axis(scale_axis(gram_a, 0, lam_old), 1, lam_old);
  const DenseTensor& m_b = gram_b;

  auto spectral_half = [](const DenseTensor& m) {
    EighResult es = eigh(m);
    double top = es.eigenvalues.empty() ? 0.0 : es.eigenvalues[0];
    long keep = 0;
    while (keep < static_cast<long>(es.eigenvalues.size()) &&
           es.eigenvalues[static_cast<size_t>(keep)] > kEigRel * top &&
           es.eigenvalues[static_cast<size_t>(keep)] > 0.0)
      ++keep;
    if (keep == 0)
      throw numerical_error("canonicalize: vanishing Gram (zero-norm state)");
    DenseTensor vecs = slice_axis(es.vectors, 1, keep);  // [alpha, tau]
    std::vector<double> sq(static_cast<size_t>(keep)), isq(static_cast<size_t>(keep));
    for (long t = 0; t < keep; ++t) {
      sq[static_cast<size_t>(t)] = std::sqrt(es.eigenvalues[static_cast<size_t>(t)]);
      isq[static_cast<size_t>(t)] = 1.0 / sq[static_cast<size_t>(t)];
    }
    return std::tuple<DenseTensor, std::vector<double>, std::vector<double>>(
        std::move(vecs), std::move(sq), std::move(isq));
  };

  auto [xt, sqa, isqa] = spectral_half(m_a);
  auto [yt, sqb, isqb] = spectral_half(m_b);

  DenseTensor x = scale_axis(xt, 1, sqa);  // X = Xt sqrt(D)
  DenseTensor y = scale_axis(yt, 1, sqb);
  DenseTensor xty = contract(x, y, {{0, 0}});  // [tau, eta]

  SvdResult svd = svd_split(xty, {0}, 0, std::max(cutoff, 1e-26));
  // drop numerically-zero weights so every stored lambda stays positive
  long keep = static_cast<long>(svd.singular_values.size());
  const double top = svd.singular_values[0];
  double extra = 0.0;
  while (keep > 1 && svd.singular_values[static_cast<size_t>(keep - 1)] < kRankRel * top) {
    --keep;
    extra += svd.singular_values[static_cast<size_t>(keep)] * svd.singular_values[static_cast<size_t>(keep)];
  }

  EdgeUpdate up;
  up.discarded = svd.discarded_weight + extra;
  double kept = 0.0;
  for (long i = 0; i < keep; ++i)
    kept += svd.singular_values[static_cast<size_t>(i)] * svd.singular_values[static_cast<size_t>(i)];
  if (!(kept > 0)) throw numerical_error("canonicalize: all weights vanished");
  const double inv = 1.0 / std::sqrt(kept);
  up.new_weights.resize(static_cast<size_t>(keep));
  for (long i = 0; i < keep; ++i)
    up.new_weights[static_cast<size_t>(i)] = svd.singular_values[static_cast<size_t>(i)] * inv;

  DenseTensor u = slice_axis(svd.left, 1, keep);    // [tau, a]
  DenseTensor v = slice_axis(svd.right, 0, keep);   // [a, eta]
  // W_A[a, alpha] = sum_tau U[tau, a] / sqrt(d_tau) conj(Xt[alpha, tau])
  DenseTensor us = scale_axis(u, 0, isqa);
  DenseTensor w_a = contract(us, xt.conjugate(), {{0, 1}});
  // W_B[a, beta] = sum_eta V[a, eta] / sqrt(d_eta) conj(Yt[beta, eta])
  DenseTensor vs = scale_axis(v, 1, isqb);
  DenseTensor w_b = contract(vs, yt.conjugate(), {{1, 1}});
  // fold the old weights (absorbed into side A) into W_A
  up.w_a = scale_axis(w_a, 1, lam_old);
  up.w_b = std::move(w_b);
  return up;
}

void install_edge_update(TtnState& s, int edge, int vertex_a, int vertex_b,
                         EdgeUpdate&& up) {
  int pa = s.topo.edge_position_in_vertex(vertex_a, edge);
  int pb = s.topo.edge_position_in_vertex(vertex_b, edge);
  s.tensors[static_cast<size_t>(vertex_a)] =
      apply_matrix(s.tensors[static_cast<size_t>(vertex_a)], pa, up.w_a);
  s.tensors[static_cast<size_t>(vertex_b)] =
      apply_matrix(s.tensors[static_cast<size_t>(vertex_b)], pb, up.w_b);
  s.weights[static_cast<size_t>(edge)] = std::move(up.new_weights);
}

}  // namespace

double state_norm(const TtnState& s) {
  Orientation o = orient_from(s, 0);
  std::vector<DenseTensor> below = below_grams(s, o);
  const auto& ve = s.topo.vertex_edges(0);
  const DenseTensor& t = s.tensors[0];
  DenseTensor acc = t;
  for (int k = 0; k < 3; ++k) {
    int f = ve[static_cast<size_t>(k)];
    DenseTensor h = weighted_env(
        s, f, s.topo.is_internal_edge(f) ? &below[static_cast<size_t>(f)] : nullptr);
    // contracting index 0 each time cycles the indices left
    acc = contract(acc, h, {{0, 0}});
  }
  DenseTensor scal = contract(acc, t.conjugate(), {{0, 0}, {1, 1}, {2, 2}});
  double n2 = scal[0].real();
  return n2 > 0 ? std::sqrt(n2) : 0.0;
}

void normalize_state(TtnState& s) {
  double nrm = state_norm(s);
  if (!(nrm > 1e-150)) throw numerical_error("normalize: zero-norm state");
  if (std::abs(nrm - 1.0) > 1e-15) {
    const double f = std::pow(nrm, -1.0 / s.topo.num_vertices());
    for (auto& t : s.tensors) t = t.scaled(f);
  }
  s.normalized = true;
}

GramMatrix gram_matrix(const TtnState& s, int edge, int side) {
  if (!s.topo.is_internal_edge(edge))
    throw std::invalid_argument("gram_matrix: edge must be internal");
  if (side != 0 && side != 1) throw std::invalid_argument("gram_matrix: side is 0 or 1");
  // the subtree containing endpoint `side` is the one away from the other
  int other = s.topo.endpoint_id(s.topo.edge_endpoints(edge)[static_cast<size_t>(1 - side)]);
  GramMatrix g{edge, side, gram_away(s, edge, other)};
  return g;
}

double canonicalize_edge(TtnState& s, int edge, double cutoff) {
  if (!s.topo.is_internal_edge(edge))
    throw std::invalid_argument("canonicalize_edge: edge must be internal");
  int va = s.topo.endpoint_id(s.topo.edge_endpoints(edge)[0]);
  int vb = s.topo.endpoint_id(s.topo.edge_endpoints(edge)[1]);
  DenseTensor ga = gram_away(s, edge, vb);
  DenseTensor gb = gram_away(s, edge, va);
  EdgeUpdate up = orthonormalize_edge(s.weights[static_cast<size_t>(edge)], ga, gb, cutoff);
  double disc = up.discarded;
  install_edge_update(s, edge, va, vb, std::move(up));
  s.normalized = true;  // weights renormalized; both Schmidt bases orthonormal
  return disc;
}

double canonicalize(TtnState& s, double cutoff) {
  normalize_state(s);
  auto internal = s.topo.internal_edge_ids();
  if (internal.empty()) {
    s.canonical = true;
    return 0.0;
  }

  Orientation o = orient_from(s, 0);
  std::vector<DenseTensor> below = below_grams(s, o);
  std::vector<char> processed(static_cast<size_t>(s.topo.num_edges()), 0);
  double max_disc = 0.0;

  for (int u : o.vertex_order) {
    for (int e : s.topo.vertex_edges(u)) {
      if (!s.topo.is_internal_edge(e)) continue;
      if (e == o.parent_edge[static_cast<size_t>(u)]) continue;
      // A side: everything through u; B side: below e
      const auto& ve = s.topo.vertex_edges(u);
      int p_out = s.topo.edge_position_in_vertex(u, e);
      std::vector<int> others;
      for (int k = 0; k < 3; ++k)
        if (k != p_out) others.push_back(k);
      std::vector<DenseTensor> h;
      for (int k : others) {
        int f = ve[static_cast<size_t>(k)];
        if (!s.topo.is_internal_edge(f)) {
          h.push_back(DenseTensor::identity(s.d));
        } else if (processed[static_cast<size_t>(f)]) {
          // both sides of a processed edge are orthonormal: bare Gram = I
          const auto& lam = s.weights[static_cast<size_t>(f)];
          DenseTensor diag({static_cast<long>(lam.size()), static_cast<long>(lam.size())});
          for (size_t i = 0; i < lam.size(); ++i)
            diag.set({static_cast<long>(i), static_cast<long>(i)}, lam[i] * lam[i]);
          h.push_back(std::move(diag));
        } else {
          h.push_back(weighted_env(s, f, &below[static_cast<size_t>(f)]));
        }
      }
      DenseTensor gram_a = gram_through_vertex(s.tensors[static_cast<size_t>(u)],
                                               others[0], others[1], p_out, h[0], h[1]);
      int v = s.topo.other_vertex(e, u);
      EdgeUpdate up = orthonormalize_edge(s.weights[static_cast<size_t>(e)], gram_a,
                                          below[static_cast<size_t>(e)], cutoff);
      max_disc = std::max(max_disc, up.discarded);
      install_edge_update(s, e, u, v, std::move(up));
      processed[static_cast<size_t>(e)] = 1;
    }
  }
  s.canonical = true;
  s.normalized = true;
  return max_disc;
}

CanonicalReport check_canonical(TtnState& s, double tol) {
  CanonicalReport rep;
  rep.norm_dev = std::abs(state_norm(s) - 1.0);
  rep.max_dev = rep.norm_dev;

  Orientation o = orient_from(s, 0);
  std::vector<DenseTensor> below = below_grams(s, o);
  // above (toward-root) bare Grams, parents first
  std::vector<DenseTensor> above(static_cast<size_t>(s.topo.num_edges()));
  for (int u : o.vertex_order) {
    for (int e : s.topo.vertex_edges(u)) {
      if (!s.topo.is_internal_edge(e)) continue;
      if (e == o.parent_edge[static_cast<size_t>(u)]) continue;
      const auto& ve = s.topo.vertex_edges(u);
      int p_out = s.topo.edge_position_in_vertex(u, e);
      std::vector<int> others;
      for (int k = 0; k < 3; ++k)
        if (k != p_out) others.push_back(k);
      std::vector<DenseTensor> h;
      for (int k : others) {
        int f = ve[static_cast<size_t>(k)];
        if (!s.topo.is_internal_edge(f)) {
          h.push_back(DenseTensor::identity(s.d));
        } else if (f == o.parent_edge[static_cast<size_t>(u)]) {
          h.push_back(weighted_env(s, f, &above[static_cast<size_t>(f)]));
        } else {
          h.push_back(weighted_env(s, f, &below[static_cast<size_t>(f)]));
        }
      }
      above[static_cast<size_t>(e)] = gram_through_vertex(
          s.tensors[static_cast<size_t>(u)], others[0], others[1], p_out, h[0], h[1]);
    }
  }

  auto dev_from_identity = [](const DenseTensor& g) {
    double dev = 0.0;
    const long n = g.dim(0);
    for (long i = 0; i < n; ++i)
      for (long j = 0; j < n; ++j)
        dev = std::max(dev, std::abs(g.at({i, j}) - (i == j ? cx{1, 0} : cx{0, 0})));
    return dev;
  };

  for (int e : s.topo.internal_edge_ids()) {
    EdgeCanonicalReport er;
    er.edge = e;
    // below[] is the Gram away from the root: find which endpoint that is
    int child_vertex = -1;
    for (int c : s.topo.edge_endpoints(e)) {
      int w = s.topo.endpoint_id(c);
      if (o.parent_edge[static_cast<size_t>(w)] == e) child_vertex = w;
    }
    for (int side = 0; side < 2; ++side) {
      int sv = s.topo.endpoint_id(s.topo.edge_endpoints(e)[static_cast<size_t>(side)]);
      const DenseTensor& g = (sv == child_vertex) ? below[static_cast<size_t>(e)]
                                                  : above[static_cast<size_t>(e)];
      er.gram_dev[side] = dev_from_identity(g);
      rep.max_dev = std::max(rep.max_dev, er.gram_dev[side]);
    }
    double wsum = 0.0;
    for (double w : s.weights[static_cast<size_t>(e)]) wsum += w * w;
    er.weight_norm_dev = std::abs(wsum - 1.0);
    rep.max_dev = std::max(rep.max_dev, er.weight_norm_dev);
    rep.edges.push_back(er);
  }
  rep.ok = rep.max_dev < tol;
  s.canonical = rep.ok;
  if (rep.norm_dev < tol) s.normalized = true;
  return rep;
}

double truncate_edge(TtnState& s, int edge, long chi_tilde) {
  if (chi_tilde < 1) throw std::invalid_argument("truncate_edge: chi_tilde must be >= 1");
  if (!s.topo.is_internal_edge(edge))
    throw std::invalid_argument("truncate_edge: edge must be internal");
  if (!s.canonical) throw state_error("truncate_edge: state is not canonical");
  auto& lam = s.weights[static_cast<size_t>(edge)];
  if (chi_tilde >= static_cast<long>(lam.size())) return 1.0;

  double kept = 0.0;
  for (long i = 0; i < chi_tilde; ++i) kept += lam[static_cast<size_t>(i)] * lam[static_cast<size_t>(i)];
  const double inv = 1.0 / std::sqrt(kept);
  lam.resize(static_cast<size_t>(chi_tilde));
  for (auto& w : lam) w *= inv;

  for (int c : s.topo.edge_endpoints(edge)) {
    int v = s.topo.endpoint_id(c);
    int p = s.topo.edge_position_in_vertex(v, edge);
    s.tensors[static_cast<size_t>(v)] =
        slice_axis(s.tensors[static_cast<size_t>(v)], p, chi_tilde);
  }
  return kept;
}

}  // namespace ttn
