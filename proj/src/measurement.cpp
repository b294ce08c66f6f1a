#include "ttn/measurement.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <json.hpp>

#include "ttn/canonical.hpp"
#include "ttn/observables.hpp"

namespace ttn {

void MeasurementOp::validate(int d) const {
  if (ops.empty()) throw std::invalid_argument("measurement needs at least one operator");
  DenseTensor sum({d, d});
  for (const auto& e : ops) {
    if (e.rank() != 2 || e.dim(0) != d || e.dim(1) != d)
      throw std::invalid_argument("measurement operator has wrong dimension");
    DenseTensor ede = contract(e.conjugate(), e, {{0, 0}});  // E† E
    for (long i = 0; i < sum.size(); ++i) sum[i] += ede[i];
  }
  DenseTensor eye = DenseTensor::identity(d);
  double dev = 0.0;
  for (long i = 0; i < sum.size(); ++i) dev += std::norm(sum[i] - eye[i]);
  if (std::sqrt(dev) > 1e-10)
    throw std::invalid_argument("measurement operators are not complete: sum E†E != I");
}

MeasurementOp projective_z(int target, int d) {
  MeasurementOp m;
  m.target = target;
  for (int r = 0; r < d; ++r) {
    DenseTensor e({static_cast<long>(d), static_cast<long>(d)});
    e.set({r, r}, 1.0);
    m.ops.push_back(std::move(e));
  }
  return m;
}

MeasurementOp projective_basis(int target, const DenseTensor& basis) {
  if (!is_unitary(basis, 1e-10))
    throw std::invalid_argument("projective_basis: basis matrix must be unitary");
  const long d = basis.dim(0);
  MeasurementOp m;
  m.target = target;
  for (long r = 0; r < d; ++r) {
    DenseTensor e({d, d});
    for (long i = 0; i < d; ++i)
      for (long j = 0; j < d; ++j)
        e.set({i, j}, basis.at({i, r}) * std::conj(basis.at({j, r})));
    m.ops.push_back(std::move(e));
  }
  return m;
}

MeasurementOp projective_x(int target) {
  return projective_basis(target, hadamard());
}

MeasurementOp projective_y(int target) {
  const double s = 1.0 / std::sqrt(2.0);
  DenseTensor basis({2, 2}, {cx{s, 0}, cx{s, 0}, cx{0, s}, cx{0, -s}});
  return projective_basis(target, basis);
}

std::vector<double> outcome_probabilities(const TtnState& s, const MeasurementOp& m) {
  m.validate(s.d);
  DensityMatrix rho = rdm1(s, m.target);
  std::vector<double> probs;
  for (const auto& e : m.ops) {
    DenseTensor erho = contract(e, rho.matrix, {{1, 0}});        // E rho
    DenseTensor eree = contract(erho, e.conjugate(), {{1, 1}});  // E rho E†
    cx tr = 0.0;
    for (long i = 0; i < eree.dim(0); ++i) tr += eree.at({i, i});
    probs.push_back(std::max(tr.real(), 0.0));
  }
  double total = 0.0;
  for (double p : probs) total += p;
  if (total < 1e-14)
    throw numerical_error("measurement: all outcome probabilities vanish");
  return probs;
}

double collapse(TtnState& s, const MeasurementOp& m, int r) {
  if (r < 0 || r >= static_cast<int>(m.ops.size()))
    throw std::invalid_argument("collapse: outcome index out of range");
  std::vector<double> probs = outcome_probabilities(s, m);
  double p = probs[static_cast<size_t>(r)];
  if (p < 1e-14)
    throw numerical_error("collapse: forced branch has vanishing probability");

  GateOp g;
  g.matrix = m.ops[static_cast<size_t>(r)].scaled(1.0 / std::sqrt(p));
  g.arity = 1;
  g.unitary = false;
  apply_local(s, g, m.target);
  canonicalize(s, 0.0);
  return p;
}

MeasureOutcome measure(TtnState& s, const MeasurementOp& m, RandomSource& rng) {
  std::vector<double> probs = outcome_probabilities(s, m);
  double total = 0.0;
  for (double p : probs) total += p;
  const double u = rng.uniform01() * total;
  double acc = 0.0;
  int r = static_cast<int>(probs.size()) - 1;
  for (size_t i = 0; i < probs.size(); ++i) {
    acc += probs[i];
    if (u < acc) {
      r = static_cast<int>(i);
      break;
    }
  }
  double p = collapse(s, m, r);
  return {r, p};
}

void MeasurementPattern::validate(int n, int d) const {
  std::vector<char> measured(static_cast<size_t>(n), 0);
  for (size_t k = 0; k < steps.size(); ++k) {
    const auto& st = steps[k];
    if (st.target < 0 || st.target >= n)
      throw std::invalid_argument("pattern: target qudit out of range");
    if (measured[static_cast<size_t>(st.target)])
      throw std::invalid_argument("pattern: qudit measured more than once");
    measured[static_cast<size_t>(st.target)] = 1;
    if (st.bases.empty()) throw std::invalid_argument("pattern: step has no bases");
    for (const auto& b : st.bases) {
      if (b.target != st.target)
        throw std::invalid_argument("pattern: basis target mismatch");
      b.validate(d);
    }
    for (int ref : st.selector.step_refs)
      if (ref < 0 || ref >= static_cast<int>(k))
        throw std::invalid_argument("pattern: selector references a non-earlier step");
  }
}

namespace {

int resolve_basis(const PatternStep& st, const std::vector<TranscriptEntry>& transcript) {
  long v = st.selector.constant;
  for (int ref : st.selector.step_refs)
    v += transcript[static_cast<size_t>(ref)].outcome;
  long nb = static_cast<long>(st.bases.size());
  return static_cast<int>(((v % nb) + nb) % nb);
}

}  // namespace

std::vector<TranscriptEntry> run_locc(TtnState& s, const MeasurementPattern& p,
                                      RandomSource& rng) {
  p.validate(s.topo.n(), s.d);
  std::vector<TranscriptEntry> transcript;
  for (size_t k = 0; k < p.steps.size(); ++k) {
    const auto& st = p.steps[k];
    const MeasurementOp& basis = st.bases[static_cast<size_t>(resolve_basis(st, transcript))];
    MeasureOutcome out = measure(s, basis, rng);
    transcript.push_back({static_cast<int>(k), st.target, out.outcome, out.probability});
  }
  return transcript;
}

std::vector<TranscriptEntry> run_locc_forced(TtnState& s, const MeasurementPattern& p,
                                             std::span<const int> outcomes) {
  p.validate(s.topo.n(), s.d);
  if (outcomes.size() != p.steps.size())
    throw std::invalid_argument("run_locc_forced: outcome count mismatch");
  std::vector<TranscriptEntry> transcript;
  for (size_t k = 0; k < p.steps.size(); ++k) {
    const auto& st = p.steps[k];
    const MeasurementOp& basis = st.bases[static_cast<size_t>(resolve_basis(st, transcript))];
    double prob = collapse(s, basis, outcomes[k]);
    transcript.push_back({static_cast<int>(k), st.target, outcomes[k], prob});
  }
  return transcript;
}

MeasurementPattern parse_pattern_json(const std::string& text, int d) {
  nlohmann::json j = nlohmann::json::parse(text);
  MeasurementPattern p;
  for (const auto& js : j.at("steps")) {
    PatternStep st;
    st.target = js.at("target").get<int>() - 1;  // file format is 1-based
    for (const auto& jb : js.at("bases")) {
      if (jb.is_string()) {
        std::string name = jb.get<std::string>();
        if (name == "Z")
          st.bases.push_back(projective_z(st.target, d));
        else if (name == "X")
          st.bases.push_back(projective_x(st.target));
        else if (name == "Y")
          st.bases.push_back(projective_y(st.target));
        else
          throw std::invalid_argument("pattern: unknown basis name " + name);
      } else {
        MeasurementOp op;
        op.target = st.target;
        for (const auto& jop : jb.at("ops")) {
          std::vector<double> flat = jop.get<std::vector<double>>();
          if (static_cast<int>(flat.size()) != 2 * d * d)
            throw std::invalid_argument("pattern: raw operator needs 2 d^2 values");
          std::vector<cx> data(static_cast<size_t>(d) * static_cast<size_t>(d));
          for (size_t i = 0; i < data.size(); ++i)
            data[i] = cx{flat[2 * i], flat[2 * i + 1]};
          op.ops.push_back(DenseTensor({d, d}, std::move(data)));
        }
        st.bases.push_back(std::move(op));
      }
    }
    if (js.contains("selector")) {
      st.selector.constant = js["selector"].value("const", 0);
      if (js["selector"].contains("terms"))
        for (const auto& t : js["selector"]["terms"])
          st.selector.step_refs.push_back(t.get<int>());
    }
    p.steps.push_back(std::move(st));
  }
  return p;
}

void TreeGraph::validate() const {
  if (n < 1) throw std::invalid_argument("tree graph: empty vertex set");
  if (static_cast<int>(edges.size()) != n - 1)
    throw std::invalid_argument("tree graph: a tree on n vertices has n-1 edges");
  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (auto [a, b] : edges) {
    if (a < 0 || a >= n || b < 0 || b >= n || a == b)
      throw std::invalid_argument("tree graph: bad edge");
    adj[static_cast<size_t>(a)].push_back(b);
    adj[static_cast<size_t>(b)].push_back(a);
  }
  std::vector<char> seen(static_cast<size_t>(n), 0);
  std::vector<int> stack{0};
  seen[0] = 1;
  int count = 1;
  while (!stack.empty()) {
    int u = stack.back();
    stack.pop_back();
    for (int w : adj[static_cast<size_t>(u)])
      if (!seen[static_cast<size_t>(w)]) {
        seen[static_cast<size_t>(w)] = 1;
        ++count;
        stack.push_back(w);
      }
  }
  if (count != n) throw std::invalid_argument("tree graph: not connected");
}

TreeTopology topology_for_graph(const TreeGraph& g) {
  g.validate();
  const int n = g.n;
  if (n < 3) throw std::invalid_argument("topology_for_graph: need n >= 3");

  std::vector<std::vector<int>> adj(static_cast<size_t>(n));
  for (auto [a, b] : g.edges) {
    adj[static_cast<size_t>(a)].push_back(b);
    adj[static_cast<size_t>(b)].push_back(a);
  }
  int root = -1;
  for (int a = 0; a < n && root < 0; ++a)
    if (static_cast<int>(adj[static_cast<size_t>(a)].size()) >= 2) root = a;

  // rooted children lists (preorder DFS, adjacency order)
  std::vector<std::vector<int>> children(static_cast<size_t>(n));
  std::vector<int> order;
  {
    std::vector<char> seen(static_cast<size_t>(n), 0);
    std::vector<int> stack{root};
    seen[static_cast<size_t>(root)] = 1;
    while (!stack.empty()) {
      int u = stack.back();
      stack.pop_back();
      order.push_back(u);
      for (int w : adj[static_cast<size_t>(u)]) {
        if (seen[static_cast<size_t>(w)]) continue;
        seen[static_cast<size_t>(w)] = 1;
        children[static_cast<size_t>(u)].push_back(w);
        stack.push_back(w);
      }
    }
  }

  // one caterpillar gadget per graph vertex; gadget chains are linked along
  // the graph edges, so every chain-internal cut separates a suffix of one
  // vertex's children -- all crossing graph edges then share that vertex
  std::vector<std::array<int, 2>> edges;
  std::vector<int> chain_head(static_cast<size_t>(n), -1);
  int next_vertex = 0;
  auto vert = [n](int v) { return n + v; };

  // allocate chains in graph-vertex order for determinism
  std::vector<std::vector<int>> chain(static_cast<size_t>(n));
  for (int a : order) {
    int k = static_cast<int>(children[static_cast<size_t>(a)].size());
    int t = (a == root) ? k - 1 : k;
    for (int j = 0; j < t; ++j) chain[static_cast<size_t>(a)].push_back(next_vertex++);
    if (t > 0) chain_head[static_cast<size_t>(a)] = chain[static_cast<size_t>(a)][0];
  }

  // port of a child subtree: its chain head, or its qubit leaf if childless
  auto child_port = [&](int c) {
    return chain[static_cast<size_t>(c)].empty() ? c : vert(chain[static_cast<size_t>(c)][0]);
  };

  for (int a : order) {
    const auto& ch = children[static_cast<size_t>(a)];
    const auto& cv = chain[static_cast<size_t>(a)];
    const int k = static_cast<int>(ch.size());
    if (cv.empty()) continue;  // graph leaf: its qubit leaf is the port
    if (a == root) {
      // chain of k-1 vertices covering the qubit leaf and k child ports
      edges.push_back({vert(cv[0]), child_port(ch[0])});
      edges.push_back({vert(cv[0]), a});
      for (int j = 1; j < k - 1; ++j) {
        edges.push_back({vert(cv[static_cast<size_t>(j - 1)]), vert(cv[static_cast<size_t>(j)])});
        edges.push_back({vert(cv[static_cast<size_t>(j)]), child_port(ch[static_cast<size_t>(j)])});
      }
      edges.push_back({vert(cv.back()), child_port(ch[static_cast<size_t>(k - 1)])});
    } else {
      // chain of k vertices: upward port, qubit leaf, k child ports
      edges.push_back({vert(cv[0]), a});
      for (int j = 1; j < k; ++j) {
        edges.push_back({vert(cv[static_cast<size_t>(j - 1)]), vert(cv[static_cast<size_t>(j)])});
        edges.push_back({vert(cv[static_cast<size_t>(j)]), child_port(ch[static_cast<size_t>(j - 1)])});
      }
      edges.push_back({vert(cv.back()), child_port(ch[static_cast<size_t>(k - 1)])});
    }
  }
  return TreeTopology(n, std::move(edges));
}

TtnState tree_cluster_state_on(const TreeGraph& g, const TreeTopology& topo) {
  g.validate();
  if (topo.n() != g.n)
    throw std::invalid_argument("tree_cluster_state: topology size mismatch");
  const double s = 1.0 / std::sqrt(2.0);
  std::vector<std::vector<cx>> plus(static_cast<size_t>(g.n), {cx{s, 0}, cx{s, 0}});
  TtnState state = product_state(topo, 2, plus);
  GateOp cz = named_gate("CZ", 2);
  TruncationPolicy pol;  // unbounded; exact zeros dropped inside the SVDs
  for (auto [a, b] : g.edges) apply_gate_routed(state, cz, a, b, pol);
  return state;
}

TtnState tree_cluster_state(const TreeGraph& g) {
  return tree_cluster_state_on(g, topology_for_graph(g));
}

MbqcResult run_mbqc(const TreeGraph& g, const MeasurementPattern& p, RandomSource& rng) {
  MbqcResult res{.transcript = {}, .state = tree_cluster_state(g)};
  res.transcript = run_locc(res.state, p, rng);
  return res;
}

}  // namespace ttn
