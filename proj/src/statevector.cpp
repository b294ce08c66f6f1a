#include "ttn/statevector.hpp"

#include <Eigen/Dense>
#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <stdexcept>

namespace ttn {

namespace {

long pow_checked(int d, int n, long limit) {
  long r = 1;
  for (int k = 0; k < n; ++k) {
    if (r > limit / d)
      throw std::invalid_argument("statevector size exceeds the dense budget");
    r *= d;
  }
  return r;
}

std::vector<long> qudit_strides(int n, int d) {
  std::vector<long> st(static_cast<size_t>(n), 1);
  for (int k = n - 2; k >= 0; --k)
    st[static_cast<size_t>(k)] = st[static_cast<size_t>(k + 1)] * d;
  return st;
}

void check_targets(const Statevector& v, const std::vector<int>& targets) {
  for (size_t i = 0; i < targets.size(); ++i) {
    if (targets[i] < 0 || targets[i] >= v.n)
      throw std::invalid_argument("target qudit out of range");
    for (size_t j = i + 1; j < targets.size(); ++j)
      if (targets[i] == targets[j])
        throw std::invalid_argument("target qudits must be distinct");
  }
}

}  // namespace

double Statevector::norm() const {
  double s = 0.0;
  for (const auto& a : amps) s += std::norm(a);
  return std::sqrt(s);
}

long sv_budget() {
  static long budget = [] {
    if (const char* env = std::getenv("TTNSIM_SV_BUDGET")) {
      long v = std::atol(env);
      if (v > 0) return v;
    }
    return 16384L;
  }();
  return budget;
}

void check_sv_budget(int n, int d) { pow_checked(d, n, sv_budget()); }

Statevector sv_basis_state(int n, int d, const std::vector<int>& digits) {
  check_sv_budget(n, d);
  if (static_cast<int>(digits.size()) != n)
    throw std::invalid_argument("digit count must equal n");
  Statevector v{n, d, {}};
  long size = 1;
  for (int k = 0; k < n; ++k) size *= d;
  v.amps.assign(static_cast<size_t>(size), cx{0, 0});
  long idx = 0;
  for (int k = 0; k < n; ++k) {
    if (digits[static_cast<size_t>(k)] < 0 || digits[static_cast<size_t>(k)] >= d)
      throw std::invalid_argument("basis digit out of range");
    idx = idx * d + digits[static_cast<size_t>(k)];
  }
  v.amps[static_cast<size_t>(idx)] = 1.0;
  return v;
}

Statevector sv_from_locals(int n, int d,
                           const std::vector<std::vector<cx>>& locals) {
  check_sv_budget(n, d);
  if (static_cast<int>(locals.size()) != n)
    throw std::invalid_argument("need one local vector per qudit");
  Statevector v{n, d, {cx{1, 0}}};
  for (int k = 0; k < n; ++k) {
    const auto& loc = locals[static_cast<size_t>(k)];
    if (static_cast<int>(loc.size()) != d)
      throw std::invalid_argument("local vector has wrong dimension");
    std::vector<cx> next(v.amps.size() * static_cast<size_t>(d));
    for (size_t i = 0; i < v.amps.size(); ++i)
      for (int a = 0; a < d; ++a)
        next[i * static_cast<size_t>(d) + static_cast<size_t>(a)] =
            v.amps[i] * loc[static_cast<size_t>(a)];
    v.amps = std::move(next);
  }
  return v;
}

cx sv_inner(const Statevector& a, const Statevector& b) {
  if (a.n != b.n || a.d != b.d)
    throw std::invalid_argument("statevector shape mismatch");
  cx s = 0.0;
  for (size_t i = 0; i < a.amps.size(); ++i)
    s += std::conj(a.amps[i]) * b.amps[i];
  return s;
}

Statevector sv_apply_gate(const Statevector& v, const DenseTensor& g,
                          const std::vector<int>& targets) {
  check_targets(v, targets);
  const int d = v.d;
  long dim = 1;
  for (size_t k = 0; k < targets.size(); ++k) dim *= d;
  if (g.rank() != 2 || g.dim(0) != dim || g.dim(1) != dim)
    throw std::invalid_argument("gate dimension does not match targets");

  Statevector out = v;
  const auto st = qudit_strides(v.n, d);
  // enumerate assignments of the non-target qudits via all indices whose
  // target digits are zero
  std::vector<long> tstrides;
  for (int t : targets) tstrides.push_back(st[static_cast<size_t>(t)]);

  std::vector<long> offsets(static_cast<size_t>(dim), 0);
  for (long c = 0; c < dim; ++c) {
    long rem = c, off = 0;
    for (size_t k = targets.size(); k-- > 0;) {
      off += (rem % d) * tstrides[k];
      rem /= d;
    }
    offsets[static_cast<size_t>(c)] = off;
  }

  std::vector<cx> in_block(static_cast<size_t>(dim));
  for (long base = 0; base < v.size(); ++base) {
    bool zero_targets = true;
    for (long o : tstrides)
      if ((base / o) % d != 0) {
        zero_targets = false;
        break;
      }
    if (!zero_targets) continue;
    for (long c = 0; c < dim; ++c)
      in_block[static_cast<size_t>(c)] = v.amps[static_cast<size_t>(base + offsets[static_cast<size_t>(c)])];
    for (long r = 0; r < dim; ++r) {
      cx acc = 0.0;
      for (long c = 0; c < dim; ++c)
        acc += g.at({r, c}) * in_block[static_cast<size_t>(c)];
      out.amps[static_cast<size_t>(base + offsets[static_cast<size_t>(r)])] = acc;
    }
  }
  return out;
}

DensityMatrix sv_partial_trace(const Statevector& v, const std::vector<int>& keep) {
  if (keep.empty() || keep.size() > 2)
    throw std::invalid_argument("partial trace keeps one or two qudits");
  check_targets(v, keep);
  const int d = v.d;
  long dim = 1;
  for (size_t k = 0; k < keep.size(); ++k) dim *= d;
  const auto st = qudit_strides(v.n, d);

  DensityMatrix rho;
  rho.qudits = keep;
  rho.matrix = DenseTensor({dim, dim});
  std::vector<long> kstrides;
  for (int t : keep) kstrides.push_back(st[static_cast<size_t>(t)]);

  auto comp_offset = [&](long c) {
    long rem = c, off = 0;
    for (size_t k = keep.size(); k-- > 0;) {
      off += (rem % d) * kstrides[k];
      rem /= d;
    }
    return off;
  };
  std::vector<long> offsets(static_cast<size_t>(dim));
  for (long c = 0; c < dim; ++c) offsets[static_cast<size_t>(c)] = comp_offset(c);

  for (long base = 0; base < v.size(); ++base) {
    bool zero = true;
    for (long o : kstrides)
      if ((base / o) % d != 0) {
        zero = false;
        break;
      }
    if (!zero) continue;
    for (long r = 0; r < dim; ++r)
      for (long c = 0; c < dim; ++c) {
        cx val = v.amps[static_cast<size_t>(base + offsets[static_cast<size_t>(r)])] *
                 std::conj(v.amps[static_cast<size_t>(base + offsets[static_cast<size_t>(c)])]);
        rho.matrix[r * dim + c] += val;
      }
  }
  return rho;
}

namespace {

// amplitude matrix (side_a x rest), rows/cols in ascending qudit order
Eigen::MatrixXcd bipartition_matrix(const Statevector& v,
                                    const std::vector<int>& side_a) {
  const int d = v.d;
  std::vector<char> in_a(static_cast<size_t>(v.n), 0);
  for (int q : side_a) {
    if (q < 0 || q >= v.n) throw std::invalid_argument("bipartition qudit out of range");
    in_a[static_cast<size_t>(q)] = 1;
  }
  std::vector<int> a_list, b_list;
  for (int q = 0; q < v.n; ++q) (in_a[static_cast<size_t>(q)] ? a_list : b_list).push_back(q);
  if (a_list.empty() || b_list.empty())
    throw std::invalid_argument("bipartition side must be a proper nonempty subset");

  const auto st = qudit_strides(v.n, d);
  long ra = 1, rb = 1;
  for (size_t k = 0; k < a_list.size(); ++k) ra *= d;
  for (size_t k = 0; k < b_list.size(); ++k) rb *= d;
  Eigen::MatrixXcd m(ra, rb);
  std::vector<int> digits(static_cast<size_t>(v.n), 0);
  for (long idx = 0; idx < v.size(); ++idx) {
    long row = 0, col = 0;
    for (int q : a_list) row = row * d + static_cast<int>((idx / st[static_cast<size_t>(q)]) % d);
    for (int q : b_list) col = col * d + static_cast<int>((idx / st[static_cast<size_t>(q)]) % d);
    m(row, col) = v.amps[static_cast<size_t>(idx)];
  }
  return m;
}

}  // namespace

std::vector<double> sv_schmidt(const Statevector& v, const std::vector<int>& side_a) {
  Eigen::MatrixXcd m = bipartition_matrix(v, side_a);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m);
  std::vector<double> out(svd.singularValues().data(),
                          svd.singularValues().data() + svd.singularValues().size());
  return out;
}

std::pair<DenseTensor, std::vector<double>> sv_schmidt_basis(
    const Statevector& v, const std::vector<int>& side_a) {
  Eigen::MatrixXcd m = bipartition_matrix(v, side_a);
  Eigen::JacobiSVD<Eigen::MatrixXcd> svd(m, Eigen::ComputeThinU);
  const auto& sv = svd.singularValues();
  long keep = 0;
  const double thresh = (sv.size() > 0 ? sv[0] : 0.0) * 1e-12;
  while (keep < sv.size() && sv[keep] > thresh) ++keep;
  keep = std::max<long>(keep, 1);
  DenseTensor basis({m.rows(), keep});
  for (long i = 0; i < m.rows(); ++i)
    for (long j = 0; j < keep; ++j) basis.set({i, j}, svd.matrixU()(i, j));
  std::vector<double> vals(sv.data(), sv.data() + keep);
  return {std::move(basis), std::move(vals)};
}

double sv_expectation(const Statevector& v, const DenseTensor& obs,
                      const std::vector<int>& targets) {
  Statevector w = sv_apply_gate(v, obs, targets);
  return sv_inner(v, w).real();
}

DenseTensor sv_dense_hamiltonian(const HamiltonianSpec& h) {
  h.validate();
  const int d = h.d;
  long size = pow_checked(d, h.n, 4096);
  DenseTensor m({size, size});
  const auto st = qudit_strides(h.n, d);
  for (const auto& term : h.terms) {
    long dim = 1;
    for (size_t k = 0; k < term.sites.size(); ++k) dim *= d;
    std::vector<long> tstrides;
    for (int t : term.sites) tstrides.push_back(st[static_cast<size_t>(t)]);
    std::vector<long> offsets(static_cast<size_t>(dim));
    for (long c = 0; c < dim; ++c) {
      long rem = c, off = 0;
      for (size_t k = term.sites.size(); k-- > 0;) {
        off += (rem % d) * tstrides[k];
        rem /= d;
      }
      offsets[static_cast<size_t>(c)] = off;
    }
    for (long base = 0; base < size; ++base) {
      bool zero = true;
      for (long o : tstrides)
        if ((base / o) % d != 0) {
          zero = false;
          break;
        }
      if (!zero) continue;
      for (long r = 0; r < dim; ++r)
        for (long c = 0; c < dim; ++c)
          m[(base + offsets[static_cast<size_t>(r)]) * size + base + offsets[static_cast<size_t>(c)]] +=
              term.matrix.at({r, c});
    }
  }
  return m;
}

Statevector sv_evolve_exact(const Statevector& v, const HamiltonianSpec& h,
                            double t, bool imaginary) {
  if (h.n != v.n || h.d != v.d)
    throw std::invalid_argument("hamiltonian does not match statevector");
  DenseTensor hm = sv_dense_hamiltonian(h);
  EighResult es = eigh(hm);
  const long size = v.size();
  // vectors tensor is row-major [i, j]; column j = eigenvector j
  Eigen::MatrixXcd u(size, size);
  for (long i = 0; i < size; ++i)
    for (long j = 0; j < size; ++j) u(i, j) = es.vectors.at({i, j});
  Eigen::Map<const Eigen::VectorXcd> vin(v.amps.data(), size);
  Eigen::VectorXcd coeff = u.adjoint() * vin;
  for (long j = 0; j < size; ++j) {
    const double e = es.eigenvalues[static_cast<size_t>(j)];
    coeff[j] *= imaginary ? cx{std::exp(-e * t), 0.0} : std::polar(1.0, -e * t);
  }
  Eigen::VectorXcd vout = u * coeff;
  Statevector out{v.n, v.d, std::vector<cx>(vout.data(), vout.data() + size)};
  if (imaginary) {
    double nrm = out.norm();
    if (nrm < 1e-300)
      throw numerical_error("imaginary-time evolution annihilated the state");
    for (auto& a : out.amps) a /= nrm;
  }
  return out;
}

std::pair<double, Statevector> sv_ground_state(const HamiltonianSpec& h) {
  DenseTensor hm = sv_dense_hamiltonian(h);
  EighResult es = eigh(hm);
  const long size = hm.dim(0);
  // eigh sorts non-increasing; the ground pair is the last one
  const long j = size - 1;
  Statevector v{h.n, h.d, std::vector<cx>(static_cast<size_t>(size))};
  for (long i = 0; i < size; ++i) v.amps[static_cast<size_t>(i)] = es.vectors.at({i, j});
  return {es.eigenvalues[static_cast<size_t>(j)], std::move(v)};
}

}  // namespace ttn
