#pragma once

#include <array>
#include <string>
#include <vector>

namespace ttn {

// Endpoint of a tree edge: either a leaf slot (one per qudit) or an internal
// vertex.  Encoded as a single int: leaf k -> k, vertex v -> n + v.
struct Endpoint {
  bool is_leaf;
  int id;
};

struct ValidationReport {
  bool valid = true;
  std::vector<std::string> violations;
};

struct Bipartition {
  int edge;
  std::vector<int> side_a;  // qudits on the side of endpoint 0
  std::vector<int> side_b;
};

// Unrooted tree with n >= 3 leaves and n-2 internal vertices of degree
// exactly 3.  The graph (vertex/edge structure) is fixed at construction;
// which qudit each leaf slot hosts (the leaf map) changes under index swaps,
// and the ordered incident-edge list of each vertex defines the index order
// of the tensor sitting there.
class TreeTopology {
 public:
  TreeTopology() = default;  // empty placeholder, assign before use

  // edges use encoded endpoints (see Endpoint); throws listing every violated
  // invariant if the graph is not a valid topology.
  TreeTopology(int n, std::vector<std::array<int, 2>> edges);

  static TreeTopology caterpillar(int n);
  static TreeTopology balanced_binary(int n);

  // One edge per line, "q<k>" (leaf, 1-based) or "v<k>" (internal, 1-based).
  static TreeTopology parse(const std::string& text);
  std::string format() const;

  int n() const { return n_; }
  int num_vertices() const { return n_ - 2; }
  int num_edges() const { return static_cast<int>(edges_.size()); }

  int encode_leaf(int slot) const { return slot; }
  int encode_vertex(int v) const { return n_ + v; }
  bool endpoint_is_leaf(int code) const { return code < n_; }
  int endpoint_id(int code) const { return code < n_ ? code : code - n_; }

  const std::array<int, 2>& edge_endpoints(int e) const { return edges_.at(static_cast<size_t>(e)); }
  bool is_internal_edge(int e) const;
  std::vector<int> internal_edge_ids() const;
  const std::array<int, 3>& vertex_edges(int v) const { return vertex_edges_.at(static_cast<size_t>(v)); }
  int edge_position_in_vertex(int v, int e) const;
  // the vertex endpoint of edge e other than vertex u (e must be internal)
  int other_vertex(int e, int u) const;
  // the vertex incident to edge e (for a leaf edge: its unique vertex)
  int vertex_of_edge(int e, int not_this_vertex = -1) const;

  int leaf_edge_of_slot(int slot) const { return leaf_edge_.at(static_cast<size_t>(slot)); }
  int qudit_at_slot(int slot) const { return qudit_at_slot_.at(static_cast<size_t>(slot)); }
  int slot_of_qudit(int q) const { return slot_of_qudit_.at(static_cast<size_t>(q)); }
  int leaf_edge_of_qudit(int q) const { return leaf_edge_of_slot(slot_of_qudit(q)); }
  int vertex_of_qudit(int q) const;

  Bipartition bipartition_of(int edge) const;
  // ordered internal-vertex path from q1's vertex to q2's vertex (inclusive)
  std::vector<int> path_between(int q1, int q2) const;
  // longest leaf-to-leaf path measured in internal vertices
  int max_path_vertices() const;

  // Used by the index-swap operation: edge `ea` incident to vertex u trades
  // places with edge `eb` incident to vertex v (u, v adjacent).  Keeps each
  // vertex's incident-edge slot order: ea's slot at u now holds eb and vice
  // versa.
  void exchange_edges(int u, int ea, int v, int eb);

  // Restore a serialized leaf map (must be a bijection on 0..n-1).
  void set_leaf_map(const std::vector<int>& qudit_at_slot);

  // Restore a serialized incident-edge order (each vertex's list must be a
  // permutation of its incident edges); this is the tensor index convention.
  void set_vertex_edge_order(const std::vector<std::array<int, 3>>& order);

  bool operator==(const TreeTopology& o) const {
    return n_ == o.n_ && edges_ == o.edges_ && vertex_edges_ == o.vertex_edges_ &&
           qudit_at_slot_ == o.qudit_at_slot_;
  }

 private:
  void rebuild_tables();

  int n_ = 0;
  std::vector<std::array<int, 2>> edges_;
  std::vector<std::array<int, 3>> vertex_edges_;
  std::vector<int> leaf_edge_;
  std::vector<int> qudit_at_slot_;
  std::vector<int> slot_of_qudit_;
};

// Structural check of the topology invariants on a raw edge list; never
// throws, reports every violation found.
ValidationReport validate_topology(int n, const std::vector<std::array<int, 2>>& edges);

}  // namespace ttn
