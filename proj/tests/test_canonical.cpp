#include <doctest.h>

#include "support.hpp"

using namespace ttn;

namespace {

// GHZ on a 4-qudit caterpillar out of raw (non-canonical) tensors: both
// tensors are copy tensors and the middle edge carries flat weights, so the
// encoded state is sqrt(2) |GHZ>.
TtnState raw_ghz4(long padded_rank = 2) {
  TreeTopology topo = TreeTopology::caterpillar(4);
  TtnState s;
  s.topo = topo;
  s.d = 2;
  s.weights.assign(static_cast<size_t>(topo.num_edges()), {});
  int e = topo.internal_edge_ids()[0];
  s.weights[static_cast<size_t>(e)] = std::vector<double>(static_cast<size_t>(padded_rank), 1.0);
  for (int v = 0; v < 2; ++v) {
    std::vector<long> shape;
    for (int f : topo.vertex_edges(v)) shape.push_back(s.edge_rank(f));
    DenseTensor t(shape);
    int epos = topo.edge_position_in_vertex(v, e);
    for (long a = 0; a < 2; ++a) {
      std::vector<long> idx(3, a);
      idx[static_cast<size_t>(epos)] = a;  // copy tensor on the first two slices
      t.set(idx, 1.0);
    }
    s.tensors.push_back(std::move(t));
  }
  return s;
}

}  // namespace

TEST_SUITE_BEGIN("canonical");

TEST_CASE("gram matrices of a canonical state are the identity") {
  RandomSource rng(31);
  Statevector v{6, 2, random_unit_vector(64, rng)};
  TtnState s = from_statevector(v, TreeTopology::balanced_binary(6));
  for (int e : s.topo.internal_edge_ids())
    for (int side : {0, 1})
      CHECK(ts::dev_from_identity(gram_matrix(s, e, side).m) < 1e-10);
}

TEST_CASE("scaling one tensor scales the gram of its side") {
  RandomSource rng(32);
  TreeTopology topo = TreeTopology::caterpillar(4);
  TtnState s = product_state(topo, 2, ts::random_locals(4, 2, rng));
  int e = topo.internal_edge_ids()[0];
  // vertex 0 sits on one side of the single internal edge; scale it by 2
  s.tensors[0] = s.tensors[0].scaled(2.0);
  s.invalidate();
  int scaled_side = s.topo.endpoint_id(s.topo.edge_endpoints(e)[0]) == 0 ? 0 : 1;
  GramMatrix g = gram_matrix(s, e, scaled_side);
  REQUIRE(g.m.dim(0) == 1);
  CHECK(std::abs(g.m.at({0, 0}) - cx{4, 0}) < 1e-12);
  GramMatrix other = gram_matrix(s, e, 1 - scaled_side);
  CHECK(std::abs(other.m.at({0, 0}) - cx{1, 0}) < 1e-12);
}

TEST_CASE("gram matrices match the brute-force subtree oracle") {
  RandomSource rng(33);
  for (const auto& topo : {ts::fig1_topology(), TreeTopology::balanced_binary(7)}) {
    TtnState s = ts::random_ttn(topo, 2, 3, rng);
    for (int e : topo.internal_edge_ids())
      for (int side : {0, 1}) {
        DenseTensor oracle = ts::oracle_gram(s, e, side);
        CHECK(ts::max_abs_diff(gram_matrix(s, e, side).m, oracle) < 1e-10);
      }
  }
}

TEST_CASE("canonicalizing an already-canonical edge keeps its weights") {
  RandomSource rng(34);
  Statevector v{5, 2, random_unit_vector(32, rng)};
  TtnState s = from_statevector(v, TreeTopology::caterpillar(5));
  for (int e : s.topo.internal_edge_ids()) {
    std::vector<double> before = s.weights[static_cast<size_t>(e)];
    canonicalize_edge(s, e, 0.0);
    CHECK(ts::max_abs_diff(before, s.weights[static_cast<size_t>(e)]) < 1e-10);
  }
}

TEST_CASE("raw GHZ tensors acquire the GHZ weights after one edge pass") {
  TtnState s = raw_ghz4();
  int e = s.topo.internal_edge_ids()[0];
  canonicalize_edge(s, e, 0.0);
  const auto& w = s.weights[static_cast<size_t>(e)];
  REQUIRE(w.size() == 2);
  CHECK(w[0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
  CHECK(w[1] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-10));
}

TEST_CASE("zero-padded edges shrink to the exact Schmidt rank") {
  TtnState s = raw_ghz4(/*padded_rank=*/3);
  Statevector before = to_statevector(s);
  double nrm = before.norm();
  for (auto& a : before.amps) a /= nrm;
  canonicalize(s, 0.0);
  int e = s.topo.internal_edge_ids()[0];
  CHECK(s.edge_rank(e) == 2);  // oracle rank of GHZ across the middle cut
  CHECK(fidelity(s, before) > 1.0 - 1e-10);
}

TEST_CASE("canonicalize matches the oracle Schmidt weights on random states") {
  RandomSource rng(35);
  for (const auto& topo : {ts::fig1_topology(), TreeTopology::balanced_binary(7)}) {
    TtnState s = ts::random_ttn(topo, 2, 4, rng);
    Statevector sv_before = to_statevector(s);
    canonicalize(s, 0.0);
    CHECK(s.canonical);
    for (int e : topo.internal_edge_ids()) {
      Bipartition bp = topo.bipartition_of(e);
      auto oracle = sv_schmidt(sv_before, bp.side_a);
      CHECK(ts::max_abs_diff(schmidt_spectrum(s, e), oracle) < 1e-10);
    }
    CanonicalReport rep = check_canonical(s, 1e-10);
    CHECK(rep.ok);
  }
}

TEST_CASE("canonicalize normalizes unnormalized input") {
  RandomSource rng(36);
  TtnState s = ts::random_ttn(TreeTopology::caterpillar(5), 2, 3, rng);
  s.tensors[0] = s.tensors[0].scaled(3.7);
  s.invalidate();
  canonicalize(s, 0.0);
  CHECK(std::abs(state_norm(s) - 1.0) < 1e-10);
}

TEST_CASE("canonicalize is idempotent") {
  RandomSource rng(37);
  TtnState s = ts::random_ttn(ts::fig1_topology(), 2, 4, rng);
  canonicalize(s, 0.0);
  std::vector<std::vector<double>> w1 = s.weights;
  canonicalize(s, 0.0);
  for (int e : s.topo.internal_edge_ids())
    CHECK(ts::max_abs_diff(w1[static_cast<size_t>(e)], s.weights[static_cast<size_t>(e)]) < 1e-10);
}

TEST_CASE("canonicalize changes the state only by gauge") {
  RandomSource rng(38);
  TtnState s = ts::random_ttn(TreeTopology::balanced_binary(6), 2, 4, rng);
  Statevector before = to_statevector(s);
  canonicalize(s, 0.0);
  Statevector after = to_statevector(s);
  CHECK(ts::overlap_mag(before, after) > 1.0 - 1e-10);
}

TEST_CASE("canonicalize leaves every stored weight positive") {
  RandomSource rng(39);
  TtnState s = ts::random_ttn(TreeTopology::caterpillar(7), 2, 4, rng);
  canonicalize(s, 0.0);
  for (int e : s.topo.internal_edge_ids())
    for (double w : s.weights[static_cast<size_t>(e)]) CHECK(w > 0.0);
}

TEST_CASE("canonicalize rejects the zero state") {
  TtnState s = raw_ghz4();
  for (auto& t : s.tensors) t = DenseTensor(t.shape());
  CHECK_THROWS_AS(canonicalize(s, 0.0), numerical_error);
}

TEST_CASE("check_canonical flags a state hit by a non-unitary operator") {
  RandomSource rng(40);
  Statevector v{5, 2, random_unit_vector(32, rng)};
  TtnState s = from_statevector(v, TreeTopology::caterpillar(5));
  CanonicalReport good = check_canonical(s, 1e-10);
  CHECK(good.ok);

  DenseTensor e0({2, 2}, {1, 0, 0, 0.3});  // not unitary
  GateOp g{e0, 1, false};
  apply_local(s, g, 2);
  CanonicalReport bad = check_canonical(s, 1e-10);
  CHECK_FALSE(bad.ok);
  CHECK(bad.max_dev > 1e-10);
}

TEST_CASE("product states are canonical to near machine precision") {
  RandomSource rng(41);
  TtnState s = product_state(ts::fig1_topology(), 2, ts::random_locals(7, 2, rng));
  CanonicalReport rep = check_canonical(s, 1e-10);
  CHECK(rep.ok);
  CHECK(rep.max_dev < 1e-13);
}

TEST_CASE("truncation beyond the current rank is the identity") {
  Statevector g = ts::ghz(4);
  TtnState s = from_statevector(g, TreeTopology::caterpillar(4));
  int e = s.topo.internal_edge_ids()[0];
  double kept = truncate_edge(s, e, 10);
  CHECK(kept == doctest::Approx(1.0));
  CHECK(fidelity(s, g) > 1.0 - 1e-12);
}

TEST_CASE("GHZ truncated to rank one keeps weight 1/2") {
  Statevector g = ts::ghz(4);
  TtnState s = from_statevector(g, TreeTopology::caterpillar(4));
  int e = s.topo.internal_edge_ids()[0];
  double kept = truncate_edge(s, e, 1);
  CHECK(kept == doctest::Approx(0.5).epsilon(1e-10));
  CHECK(fidelity(s, g) == doctest::Approx(std::sqrt(0.5)).epsilon(1e-10));
}

TEST_CASE("single-edge truncation achieves the oracle optimum") {
  RandomSource rng(42);
  Statevector v{6, 2, random_unit_vector(64, rng)};
  TreeTopology topo = TreeTopology::balanced_binary(6);
  for (int e : topo.internal_edge_ids()) {
    TtnState s = from_statevector(v, topo);
    double kept = truncate_edge(s, e, 2);
    double fid = fidelity(s, v);
    CHECK(fid == doctest::Approx(std::sqrt(kept)).epsilon(1e-10));
    // oracle best rank-2 approximation across this bipartition
    auto sigma = sv_schmidt(v, topo.bipartition_of(e).side_a);
    double best = 0.0;
    for (size_t i = 0; i < std::min<size_t>(2, sigma.size()); ++i)
      best += sigma[i] * sigma[i];
    CHECK(fid == doctest::Approx(std::sqrt(best)).epsilon(1e-9));
  }
}

TEST_CASE("truncate_edge validates its inputs") {
  Statevector g = ts::ghz(4);
  TtnState s = from_statevector(g, TreeTopology::caterpillar(4));
  int e = s.topo.internal_edge_ids()[0];
  CHECK_THROWS_AS(truncate_edge(s, e, 0), std::invalid_argument);
  s.canonical = false;
  CHECK_THROWS_AS(truncate_edge(s, e, 1), state_error);
}

TEST_SUITE_END();
