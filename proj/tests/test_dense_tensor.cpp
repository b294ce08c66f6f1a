#include <doctest.h>

#include "support.hpp"

using namespace ttn;

TEST_SUITE_BEGIN("tensor");

TEST_CASE("permute acts as transpose on matrices") {
  DenseTensor m({2, 3}, {1, 2, 3, 4, 5, 6});
  DenseTensor t = permute(m, {1, 0});
  CHECK(t.shape() == std::vector<long>{3, 2});
  CHECK(t.at({0, 0}) == cx{1, 0});
  CHECK(t.at({0, 1}) == cx{4, 0});
  CHECK(t.at({2, 1}) == cx{6, 0});
}

TEST_CASE("identity permutation is bitwise equal") {
  RandomSource rng(1);
  DenseTensor t = random_tensor({2, 3, 4}, rng);
  DenseTensor p = permute(t, {0, 1, 2});
  for (long i = 0; i < t.size(); ++i) CHECK(p[i] == t[i]);
}

TEST_CASE("permute round-trips exactly through its inverse") {
  RandomSource rng(2);
  DenseTensor t = random_tensor({2, 3, 4, 5}, rng);
  std::vector<int> p{2, 0, 3, 1};
  std::vector<int> pinv(4);
  for (int k = 0; k < 4; ++k) pinv[static_cast<size_t>(p[static_cast<size_t>(k)])] = k;
  DenseTensor back = permute(permute(t, p), pinv);
  for (long i = 0; i < t.size(); ++i) CHECK(back[i] == t[i]);  // pure relocation
}

TEST_CASE("permute rejects malformed permutations") {
  DenseTensor t({2, 2});
  CHECK_THROWS_AS(permute(t, {0}), std::invalid_argument);
  CHECK_THROWS_AS(permute(t, {0, 0}), std::invalid_argument);
  CHECK_THROWS_AS(permute(t, {0, 2}), std::invalid_argument);
}

TEST_CASE("contract with the identity returns the vector") {
  DenseTensor eye = DenseTensor::identity(2);
  DenseTensor v({2}, {cx{0.3, 0.1}, cx{-0.5, 0.7}});
  DenseTensor r = contract(eye, v, {{1, 0}});
  CHECK(r.shape() == std::vector<long>{2});
  CHECK(std::abs(r[0] - v[0]) < 1e-15);
  CHECK(std::abs(r[1] - v[1]) < 1e-15);
}

TEST_CASE("contract reproduces the matrix product") {
  DenseTensor a({2, 3}, {1, 2, 3, 4, 5, 6});
  DenseTensor b({3, 2}, {7, 8, 9, 10, 11, 12});
  DenseTensor c = contract(a, b, {{1, 0}});
  CHECK(c.at({0, 0}) == cx{58, 0});
  CHECK(c.at({0, 1}) == cx{64, 0});
  CHECK(c.at({1, 0}) == cx{139, 0});
  CHECK(c.at({1, 1}) == cx{154, 0});
}

TEST_CASE("contract is associative on a random three-tensor chain") {
  RandomSource rng(3);
  DenseTensor a = random_tensor({3, 4}, rng);
  DenseTensor b = random_tensor({4, 5}, rng);
  DenseTensor c = random_tensor({5, 3}, rng);
  DenseTensor left = contract(contract(a, b, {{1, 0}}), c, {{1, 0}});
  DenseTensor right = contract(a, contract(b, c, {{1, 0}}), {{1, 0}});
  CHECK(ts::max_abs_diff(left, right) < 1e-12);

  // direct-summation oracle
  for (long i = 0; i < 3; ++i)
    for (long l = 0; l < 3; ++l) {
      cx acc = 0.0;
      for (long j = 0; j < 4; ++j)
        for (long k = 0; k < 5; ++k)
          acc += a.at({i, j}) * b.at({j, k}) * c.at({k, l});
      CHECK(std::abs(left.at({i, l}) - acc) < 1e-12);
    }
}

TEST_CASE("contract is bilinear") {
  RandomSource rng(4);
  DenseTensor a = random_tensor({3, 4}, rng);
  DenseTensor b = random_tensor({4, 2}, rng);
  const cx alpha{1.7, -0.4};
  DenseTensor lhs = contract(a.scaled(alpha), b, {{1, 0}});
  DenseTensor rhs = contract(a, b, {{1, 0}}).scaled(alpha);
  CHECK(ts::max_abs_diff(lhs, rhs) < 1e-14 * rhs.norm());
}

TEST_CASE("contract rejects dimension mismatches") {
  DenseTensor a({2, 3});
  DenseTensor b({4, 2});
  CHECK_THROWS_AS(contract(a, b, {{1, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(contract(a, b, {{0, 1}, {0, 1}}), std::invalid_argument);
}

TEST_CASE("svd of the identity has unit singular values") {
  SvdResult r = svd_split(DenseTensor::identity(2), {0}, 0, 0.0);
  REQUIRE(r.singular_values.size() == 2);
  CHECK(r.singular_values[0] == doctest::Approx(1.0));
  CHECK(r.singular_values[1] == doctest::Approx(1.0));
  CHECK(r.discarded_weight == 0.0);
}

TEST_CASE("svd drops the null direction of a rank-1 matrix") {
  DenseTensor m({2, 2}, {1, 0, 0, 0});
  SvdResult r = svd_split(m, {0}, 0, 1e-12);
  REQUIRE(r.singular_values.size() == 1);
  CHECK(r.singular_values[0] == doctest::Approx(1.0));
  CHECK(r.discarded_weight < 1e-24);
}

TEST_CASE("svd reconstructs a random matrix and preserves weight") {
  RandomSource rng(5);
  DenseTensor m = random_tensor({4, 4}, rng);
  SvdResult r = svd_split(m, {0}, 0, 0.0);
  DenseTensor ls = scale_axis(r.left, 1, r.singular_values);
  DenseTensor rec = contract(ls, r.right, {{1, 0}});
  CHECK(ts::max_abs_diff(rec, m) < 1e-12 * m.norm());

  double sum2 = 0.0;
  for (double s : r.singular_values) sum2 += s * s;
  CHECK(sum2 == doctest::Approx(m.norm() * m.norm()).epsilon(1e-12));

  DenseTensor utu = contract(r.left.conjugate(), r.left, {{0, 0}});
  CHECK(ts::dev_from_identity(utu) < 1e-12);
  DenseTensor vvt = contract(r.right, r.right.conjugate(), {{1, 1}});
  CHECK(ts::dev_from_identity(vvt) < 1e-12);
}

TEST_CASE("svd truncation caps rank first, then applies the relative cutoff") {
  DenseTensor m({4, 4});
  for (long i = 0; i < 4; ++i) m.set({i, i}, 4.0 - static_cast<double>(i));  // 4,3,2,1
  SvdResult capped = svd_split(m, {0}, 2, 0.0);
  REQUIRE(capped.singular_values.size() == 2);
  CHECK(capped.discarded_weight == doctest::Approx(4.0 + 1.0));

  const double total = 16.0 + 9.0 + 4.0 + 1.0;
  SvdResult cut = svd_split(m, {0}, 0, 4.5 / total);  // drops s = 2 and s = 1
  REQUIRE(cut.singular_values.size() == 2);
  CHECK(cut.discarded_weight == doctest::Approx(5.0));
}

TEST_CASE("svd rejects non-finite input") {
  DenseTensor m({2, 2}, {1, 0, 0, std::numeric_limits<double>::quiet_NaN()});
  CHECK_THROWS_AS(svd_split(m, {0}, 0, 0.0), numerical_error);
}

TEST_CASE("svd groups multiple left indices") {
  RandomSource rng(6);
  DenseTensor t = random_tensor({2, 3, 4}, rng);
  SvdResult r = svd_split(t, {0, 2}, 0, 0.0);
  CHECK(r.left.rank() == 3);
  CHECK(r.left.dim(0) == 2);
  CHECK(r.left.dim(1) == 4);
  CHECK(r.right.dim(1) == 3);
}

TEST_CASE("eigh of the identity") {
  EighResult r = eigh(DenseTensor::identity(3));
  for (double v : r.eigenvalues) CHECK(v == doctest::Approx(1.0));
}

TEST_CASE("eigh of a diagonal matrix sorts non-increasing") {
  DenseTensor m({2, 2}, {1, 0, 0, 3});
  EighResult r = eigh(m);
  CHECK(r.eigenvalues[0] == doctest::Approx(3.0));
  CHECK(r.eigenvalues[1] == doctest::Approx(1.0));
  CHECK(std::abs(r.vectors.at({1, 0})) == doctest::Approx(1.0));  // first column = e_1
  CHECK(std::abs(r.vectors.at({0, 1})) == doctest::Approx(1.0));
}

TEST_CASE("random Gram matrices are PSD and reconstruct") {
  RandomSource rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    DenseTensor a = random_tensor({5, 5}, rng);
    DenseTensor gram = contract(a.conjugate(), a, {{0, 0}});  // A† A
    EighResult r = eigh(gram);
    for (double v : r.eigenvalues) CHECK(v >= -1e-12);
    DenseTensor xd = scale_axis(r.vectors, 1, r.eigenvalues);
    DenseTensor rec = contract(xd, r.vectors.conjugate(), {{1, 1}});
    CHECK(ts::max_abs_diff(rec, gram) < 1e-10 * gram.norm());
  }
}

TEST_CASE("eigh rejects non-Hermitian input") {
  DenseTensor m({2, 2}, {0, 1, 0, 0});
  CHECK_THROWS_AS(eigh(m), std::invalid_argument);
}

TEST_SUITE_END();
