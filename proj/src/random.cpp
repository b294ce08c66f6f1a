#include "ttn/random.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace ttn {

DenseTensor random_tensor(const std::vector<long>& shape, RandomSource& rng) {
  DenseTensor t(shape);
  for (long i = 0; i < t.size(); ++i) t[i] = rng.gaussian_cx();
  // unit Frobenius norm keeps long contraction chains inside double range
  const double nrm = t.norm();
  if (nrm > 0) return t.scaled(1.0 / nrm);
  return t;
}

DenseTensor random_unitary(long n, RandomSource& rng) {
  Eigen::MatrixXcd g(n, n);
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) g(i, j) = rng.gaussian_cx();
  Eigen::HouseholderQR<Eigen::MatrixXcd> qr(g);
  Eigen::MatrixXcd q = qr.householderQ();
  Eigen::MatrixXcd r = qr.matrixQR().triangularView<Eigen::Upper>();
  for (long j = 0; j < n; ++j) {
    cx d = r(j, j);
    double a = std::abs(d);
    q.col(j) *= (a > 0 ? d / a : cx{1.0, 0.0});
  }
  DenseTensor out({n, n});
  for (long i = 0; i < n; ++i)
    for (long j = 0; j < n; ++j) out.set({i, j}, q(i, j));
  return out;
}

std::vector<cx> random_unit_vector(long n, RandomSource& rng) {
  std::vector<cx> v(static_cast<size_t>(n));
  double nrm2 = 0.0;
  for (auto& a : v) {
    a = rng.gaussian_cx();
    nrm2 += std::norm(a);
  }
  const double s = 1.0 / std::sqrt(nrm2);
  for (auto& a : v) a *= s;
  return v;
}

}  // namespace ttn
