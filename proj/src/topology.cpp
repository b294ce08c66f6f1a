#include "ttn/topology.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <sstream>
#include <stdexcept>

namespace ttn {

namespace {

// adjacency over encoded endpoints
std::vector<std::vector<std::pair<int, int>>> build_adjacency(
    int n, const std::vector<std::array<int, 2>>& edges) {
  std::vector<std::vector<std::pair<int, int>>> adj(
      static_cast<size_t>(2 * n));  // generous upper bound on node codes
  for (int e = 0; e < static_cast<int>(edges.size()); ++e) {
    int a = edges[static_cast<size_t>(e)][0];
    int b = edges[static_cast<size_t>(e)][1];
    if (a >= 0 && a < 2 * n) adj[static_cast<size_t>(a)].push_back({b, e});
    if (b >= 0 && b < 2 * n) adj[static_cast<size_t>(b)].push_back({a, e});
  }
  return adj;
}

}  // namespace

ValidationReport validate_topology(int n,
                                   const std::vector<std::array<int, 2>>& edges) {
  ValidationReport rep;
  auto fail = [&rep](const std::string& msg) {
    rep.valid = false;
    rep.violations.push_back(msg);
  };

  if (n < 3) {
    fail("qudit count must be >= 3 (no degree-3 tree exists below that)");
    return rep;
  }
  const int nv = n - 2;
  const int ncodes = n + nv;

  bool range_ok = true;
  for (const auto& e : edges) {
    for (int c : {e[0], e[1]})
      if (c < 0 || c >= ncodes) {
        fail("edge endpoint code out of range: " + std::to_string(c));
        range_ok = false;
      }
    if (e[0] == e[1]) fail("self-loop on endpoint " + std::to_string(e[0]));
  }
  if (!range_ok) return rep;

  if (static_cast<int>(edges.size()) != 2 * n - 3)
    fail("edge count must be 2n-3 = " + std::to_string(2 * n - 3) + ", got " +
         std::to_string(edges.size()));

  std::vector<int> degree(static_cast<size_t>(ncodes), 0);
  for (const auto& e : edges) {
    degree[static_cast<size_t>(e[0])]++;
    degree[static_cast<size_t>(e[1])]++;
  }
  for (int q = 0; q < n; ++q)
    if (degree[static_cast<size_t>(q)] != 1)
      fail("leaf q" + std::to_string(q + 1) + " must have degree 1, has " +
           std::to_string(degree[static_cast<size_t>(q)]));
  for (int v = 0; v < nv; ++v)
    if (degree[static_cast<size_t>(n + v)] != 3)
      fail("internal vertex v" + std::to_string(v + 1) +
           " must have degree 3, has " +
           std::to_string(degree[static_cast<size_t>(n + v)]));

  // connectivity and acyclicity via BFS over the multigraph
  auto adj = build_adjacency(n, edges);
  std::vector<int> seen_from(static_cast<size_t>(ncodes), -2);
  std::queue<int> bfs;
  bfs.push(0);
  seen_from[0] = -1;
  int visited = 1;
  bool cycle = false;
  while (!bfs.empty()) {
    int u = bfs.front();
    bfs.pop();
    for (auto [w, e] : adj[static_cast<size_t>(u)]) {
      if (seen_from[static_cast<size_t>(w)] == -2) {
        seen_from[static_cast<size_t>(w)] = e;
        ++visited;
        bfs.push(w);
      } else if (e != seen_from[static_cast<size_t>(u)] &&
                 e != seen_from[static_cast<size_t>(w)]) {
        cycle = true;
      }
    }
  }
  if (visited != ncodes) fail("connectivity violated: graph is not connected");
  if (cycle) fail("acyclicity violated: graph contains a cycle");
  return rep;
}

TreeTopology::TreeTopology(int n, std::vector<std::array<int, 2>> edges)
    : n_(n), edges_(std::move(edges)) {
  ValidationReport rep = validate_topology(n_, edges_);
  if (!rep.valid) {
    std::string msg = "invalid tree topology:";
    for (const auto& v : rep.violations) msg += "\n  " + v;
    throw std::invalid_argument(msg);
  }
  rebuild_tables();
  qudit_at_slot_.resize(static_cast<size_t>(n_));
  slot_of_qudit_.resize(static_cast<size_t>(n_));
  for (int q = 0; q < n_; ++q) qudit_at_slot_[static_cast<size_t>(q)] = q;
  for (int q = 0; q < n_; ++q) slot_of_qudit_[static_cast<size_t>(q)] = q;
}

void TreeTopology::rebuild_tables() {
  const int nv = n_ - 2;
  vertex_edges_.assign(static_cast<size_t>(nv), {-1, -1, -1});
  std::vector<int> fill(static_cast<size_t>(nv), 0);
  leaf_edge_.assign(static_cast<size_t>(n_), -1);
  for (int e = 0; e < static_cast<int>(edges_.size()); ++e) {
    for (int c : {edges_[static_cast<size_t>(e)][0], edges_[static_cast<size_t>(e)][1]}) {
      if (endpoint_is_leaf(c)) {
        leaf_edge_[static_cast<size_t>(c)] = e;
      } else {
        int v = endpoint_id(c);
        vertex_edges_[static_cast<size_t>(v)][static_cast<size_t>(fill[static_cast<size_t>(v)]++)] = e;
      }
    }
  }
}

bool TreeTopology::is_internal_edge(int e) const {
  const auto& ep = edge_endpoints(e);
  return !endpoint_is_leaf(ep[0]) && !endpoint_is_leaf(ep[1]);
}

std::vector<int> TreeTopology::internal_edge_ids() const {
  std::vector<int> out;
  for (int e = 0; e < num_edges(); ++e)
    if (is_internal_edge(e)) out.push_back(e);
  return out;
}

int TreeTopology::edge_position_in_vertex(int v, int e) const {
  const auto& ve = vertex_edges(v);
  for (int k = 0; k < 3; ++k)
    if (ve[static_cast<size_t>(k)] == e) return k;
  throw std::invalid_argument("edge not incident to vertex");
}

int TreeTopology::other_vertex(int e, int u) const {
  const auto& ep = edge_endpoints(e);
  for (int c : ep) {
    if (!endpoint_is_leaf(c) && endpoint_id(c) != u) return endpoint_id(c);
  }
  throw std::invalid_argument("edge has no other vertex endpoint");
}

int TreeTopology::vertex_of_edge(int e, int not_this_vertex) const {
  const auto& ep = edge_endpoints(e);
  for (int c : ep)
    if (!endpoint_is_leaf(c) && endpoint_id(c) != not_this_vertex)
      return endpoint_id(c);
  throw std::invalid_argument("edge has no vertex endpoint");
}

int TreeTopology::vertex_of_qudit(int q) const {
  int e = leaf_edge_of_qudit(q);
  return vertex_of_edge(e);
}

Bipartition TreeTopology::bipartition_of(int edge) const {
  if (!is_internal_edge(edge))
    throw std::invalid_argument("bipartition_of: edge is a leaf edge");
  Bipartition bp;
  bp.edge = edge;
  auto adj = build_adjacency(n_, edges_);
  // BFS from endpoint 0 without crossing `edge`
  std::vector<char> seen(static_cast<size_t>(2 * n_), 0);
  std::queue<int> bfs;
  int start = edge_endpoints(edge)[0];
  bfs.push(start);
  seen[static_cast<size_t>(start)] = 1;
  while (!bfs.empty()) {
    int u = bfs.front();
    bfs.pop();
    for (auto [w, e] : adj[static_cast<size_t>(u)]) {
      if (e == edge || seen[static_cast<size_t>(w)]) continue;
      seen[static_cast<size_t>(w)] = 1;
      bfs.push(w);
    }
  }
  for (int slot = 0; slot < n_; ++slot) {
    int q = qudit_at_slot(slot);
    if (seen[static_cast<size_t>(slot)])
      bp.side_a.push_back(q);
    else
      bp.side_b.push_back(q);
  }
  std::sort(bp.side_a.begin(), bp.side_a.end());
  std::sort(bp.side_b.begin(), bp.side_b.end());
  return bp;
}

std::vector<int> TreeTopology::path_between(int q1, int q2) const {
  if (q1 == q2) throw std::invalid_argument("path_between: identical qudits");
  if (q1 < 0 || q1 >= n_ || q2 < 0 || q2 >= n_)
    throw std::invalid_argument("path_between: unknown qudit index");
  int v_start = vertex_of_qudit(q1);
  int v_goal = vertex_of_qudit(q2);
  if (v_start == v_goal) return {v_start};
  // BFS over internal vertices only
  std::vector<int> prev(static_cast<size_t>(num_vertices()), -2);
  std::queue<int> bfs;
  bfs.push(v_start);
  prev[static_cast<size_t>(v_start)] = -1;
  while (!bfs.empty()) {
    int u = bfs.front();
    bfs.pop();
    if (u == v_goal) break;
    for (int e : vertex_edges(u)) {
      if (!is_internal_edge(e)) continue;
      int w = other_vertex(e, u);
      if (prev[static_cast<size_t>(w)] != -2) continue;
      prev[static_cast<size_t>(w)] = u;
      bfs.push(w);
    }
  }
  std::vector<int> path;
  for (int v = v_goal; v != -1; v = prev[static_cast<size_t>(v)]) path.push_back(v);
  std::reverse(path.begin(), path.end());
  return path;
}

int TreeTopology::max_path_vertices() const {
  int best = 0;
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      best = std::max(best, static_cast<int>(path_between(a, b).size()));
  return best;
}

void TreeTopology::exchange_edges(int u, int ea, int v, int eb) {
  auto swap_endpoint = [this](int e, int from_v, int to_v) {
    auto& ep = edges_[static_cast<size_t>(e)];
    int code_from = encode_vertex(from_v);
    if (ep[0] == code_from)
      ep[0] = encode_vertex(to_v);
    else if (ep[1] == code_from)
      ep[1] = encode_vertex(to_v);
    else
      throw std::invalid_argument("exchange_edges: edge not incident to vertex");
  };
  int pa = edge_position_in_vertex(u, ea);
  int pb = edge_position_in_vertex(v, eb);
  swap_endpoint(ea, u, v);
  swap_endpoint(eb, v, u);
  vertex_edges_[static_cast<size_t>(u)][static_cast<size_t>(pa)] = eb;
  vertex_edges_[static_cast<size_t>(v)][static_cast<size_t>(pb)] = ea;
}

void TreeTopology::set_leaf_map(const std::vector<int>& qudit_at_slot) {
  if (static_cast<int>(qudit_at_slot.size()) != n_)
    throw std::invalid_argument("leaf map must cover every slot");
  std::vector<char> seen(static_cast<size_t>(n_), 0);
  for (int q : qudit_at_slot) {
    if (q < 0 || q >= n_ || seen[static_cast<size_t>(q)])
      throw std::invalid_argument("leaf map must be a bijection on the qudits");
    seen[static_cast<size_t>(q)] = 1;
  }
  qudit_at_slot_ = qudit_at_slot;
  for (int slot = 0; slot < n_; ++slot)
    slot_of_qudit_[static_cast<size_t>(qudit_at_slot_[static_cast<size_t>(slot)])] = slot;
}

void TreeTopology::set_vertex_edge_order(const std::vector<std::array<int, 3>>& order) {
  if (order.size() != vertex_edges_.size())
    throw std::invalid_argument("vertex edge order must cover every vertex");
  for (size_t v = 0; v < order.size(); ++v) {
    std::array<int, 3> a = order[v], b = vertex_edges_[v];
    std::sort(a.begin(), a.end());
    std::sort(b.begin(), b.end());
    if (a != b)
      throw std::invalid_argument("vertex edge order is not a permutation of the incident edges");
  }
  vertex_edges_ = order;
}

TreeTopology TreeTopology::caterpillar(int n) {
  if (n < 3) throw std::invalid_argument("caterpillar: n must be >= 3");
  std::vector<std::array<int, 2>> edges;
  auto leaf = [](int q) { return q; };
  auto vert = [n](int v) { return n + v; };
  edges.push_back({leaf(0), vert(0)});
  edges.push_back({leaf(1), vert(0)});
  for (int v = 0; v + 1 < n - 2; ++v) {
    edges.push_back({vert(v), vert(v + 1)});
    edges.push_back({leaf(v + 2), vert(v + 1)});
  }
  edges.push_back({leaf(n - 1), vert(n - 3)});
  return TreeTopology(n, std::move(edges));
}

TreeTopology TreeTopology::balanced_binary(int n) {
  if (n < 3) throw std::invalid_argument("balanced_binary: n must be >= 3");
  std::vector<std::array<int, 2>> edges;
  int next_vertex = 0;
  auto vert = [n](int v) { return n + v; };
  // Builds a subtree over qudits [lo, lo+count) and returns the endpoint code
  // exposing it upward (a leaf for count == 1, else a fresh vertex).
  auto build = [&](auto&& self, int lo, int count) -> int {
    if (count == 1) return lo;
    int v = next_vertex++;
    int left = count - count / 2;
    int a = self(self, lo, left);
    int b = self(self, lo + left, count - left);
    edges.push_back({vert(v), a});
    edges.push_back({vert(v), b});
    return vert(v);
  };
  int left = n - n / 2;
  int a = build(build, 0, left);
  int b = build(build, left, n - left);
  // Join the two halves: each exposes a vertex with a free third port, except
  // when a half is a single leaf (n == 3).
  edges.push_back({a, b});
  return TreeTopology(n, std::move(edges));
}

TreeTopology TreeTopology::parse(const std::string& text) {
  std::istringstream in(text);
  std::string line;
  std::vector<std::array<int, 2>> raw;
  int max_leaf = 0, max_vert = 0;
  std::vector<std::array<std::pair<char, int>, 2>> named;
  while (std::getline(in, line)) {
    auto hash = line.find('#');
    if (hash != std::string::npos) line = line.substr(0, hash);
    std::istringstream ls(line);
    std::string a, b;
    if (!(ls >> a)) continue;
    if (!(ls >> b)) throw std::invalid_argument("topology line needs two endpoints: " + line);
    auto parse_ep = [](const std::string& s) -> std::pair<char, int> {
      if (s.size() < 2 || (s[0] != 'q' && s[0] != 'v'))
        throw std::invalid_argument("bad endpoint name: " + s);
      int k = std::stoi(s.substr(1));
      if (k < 1) throw std::invalid_argument("endpoint index must be >= 1: " + s);
      return {s[0], k};
    };
    auto ea = parse_ep(a);
    auto eb = parse_ep(b);
    for (auto& e : {ea, eb}) {
      if (e.first == 'q') max_leaf = std::max(max_leaf, e.second);
      else max_vert = std::max(max_vert, e.second);
    }
    named.push_back({ea, eb});
  }
  int n = max_leaf;
  for (const auto& e : named) {
    std::array<int, 2> enc;
    for (int k = 0; k < 2; ++k) {
      const auto& [kind, id] = e[static_cast<size_t>(k)];
      enc[static_cast<size_t>(k)] = (kind == 'q') ? id - 1 : n + id - 1;
    }
    raw.push_back(enc);
  }
  return TreeTopology(n, std::move(raw));
}

std::string TreeTopology::format() const {
  std::ostringstream out;
  for (const auto& e : edges_) {
    for (int k = 0; k < 2; ++k) {
      int c = e[static_cast<size_t>(k)];
      if (endpoint_is_leaf(c))
        out << 'q' << (endpoint_id(c) + 1);
      else
        out << 'v' << (endpoint_id(c) + 1);
      out << (k == 0 ? " " : "\n");
    }
  }
  return out.str();
}

}  // namespace ttn
