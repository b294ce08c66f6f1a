#include "ttn/dense_tensor.hpp"

#include <Eigen/Dense>
#include <Eigen/SVD>
#include <algorithm>
#include <cmath>
#include <numeric>

namespace ttn {

namespace {

using RowMat =
    Eigen::Matrix<cx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using MapRowMat = Eigen::Map<RowMat>;
using MapConstRowMat = Eigen::Map<const RowMat>;

long checked_size(const std::vector<long>& shape) {
  long n = 1;
  for (long s : shape) {
    if (s < 1) throw std::invalid_argument("tensor dimension must be >= 1");
    n *= s;
  }
  return n;
}

std::vector<long> row_major_strides(const std::vector<long>& shape) {
  std::vector<long> st(shape.size(), 1);
  for (long k = static_cast<long>(shape.size()) - 2; k >= 0; --k)
    st[k] = st[k + 1] * shape[k + 1];
  return st;
}

}  // namespace

DenseTensor::DenseTensor(std::vector<long> shape)
    : shape_(std::move(shape)), data_(checked_size(shape_), cx{0.0, 0.0}) {}

DenseTensor::DenseTensor(std::vector<long> shape, std::vector<cx> data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  if (static_cast<long>(data_.size()) != checked_size(shape_))
    throw std::invalid_argument("tensor data length does not match shape");
}

DenseTensor DenseTensor::identity(long n) {
  DenseTensor t({n, n});
  for (long i = 0; i < n; ++i) t.data_[static_cast<size_t>(i * n + i)] = 1.0;
  return t;
}

long DenseTensor::offset(const std::vector<long>& idx) const {
  if (idx.size() != shape_.size())
    throw std::invalid_argument("index rank mismatch");
  long off = 0;
  for (size_t k = 0; k < shape_.size(); ++k) {
    if (idx[k] < 0 || idx[k] >= shape_[k])
      throw std::out_of_range("tensor index out of range");
    off = off * shape_[k] + idx[k];
  }
  return off;
}

DenseTensor DenseTensor::reshape(std::vector<long> shape) const {
  if (checked_size(shape) != size())
    throw std::invalid_argument("reshape size mismatch");
  DenseTensor t;
  t.shape_ = std::move(shape);
  t.data_ = data_;
  return t;
}

DenseTensor DenseTensor::conjugate() const {
  DenseTensor t = *this;
  for (auto& v : t.data_) v = std::conj(v);
  return t;
}

DenseTensor DenseTensor::scaled(cx factor) const {
  DenseTensor t = *this;
  for (auto& v : t.data_) v *= factor;
  return t;
}

double DenseTensor::norm() const {
  double s = 0.0;
  for (const auto& v : data_) s += std::norm(v);
  return std::sqrt(s);
}

bool DenseTensor::all_finite() const {
  for (const auto& v : data_)
    if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) return false;
  return true;
}

DenseTensor permute(const DenseTensor& t, const std::vector<int>& order) {
  const long r = t.rank();
  if (static_cast<long>(order.size()) != r)
    throw std::invalid_argument("permutation length does not match rank");
  std::vector<char> seen(static_cast<size_t>(r), 0);
  bool is_identity = true;
  for (long k = 0; k < r; ++k) {
    int p = order[static_cast<size_t>(k)];
    if (p < 0 || p >= r) throw std::invalid_argument("permutation entry out of range");
    if (seen[static_cast<size_t>(p)]) throw std::invalid_argument("repeated permutation entry");
    seen[static_cast<size_t>(p)] = 1;
    if (p != k) is_identity = false;
  }
  if (is_identity) return t;

  std::vector<long> out_shape(static_cast<size_t>(r));
  const auto in_strides = row_major_strides(t.shape());
  std::vector<long> step(static_cast<size_t>(r));
  for (long k = 0; k < r; ++k) {
    out_shape[static_cast<size_t>(k)] = t.dim(order[static_cast<size_t>(k)]);
    step[static_cast<size_t>(k)] = in_strides[static_cast<size_t>(order[static_cast<size_t>(k)])];
  }

  DenseTensor out(out_shape);
  const long n = out.size();
  std::vector<long> idx(static_cast<size_t>(r), 0);
  long in_off = 0;
  for (long o = 0; o < n; ++o) {
    out[o] = t[in_off];
    for (long k = r - 1; k >= 0; --k) {
      idx[static_cast<size_t>(k)]++;
      in_off += step[static_cast<size_t>(k)];
      if (idx[static_cast<size_t>(k)] < out_shape[static_cast<size_t>(k)]) break;
      in_off -= idx[static_cast<size_t>(k)] * step[static_cast<size_t>(k)];
      idx[static_cast<size_t>(k)] = 0;
    }
  }
  return out;
}

DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<int, int>>& pairs) {
  std::vector<char> used_a(static_cast<size_t>(a.rank()), 0);
  std::vector<char> used_b(static_cast<size_t>(b.rank()), 0);
  for (const auto& [ia, ib] : pairs) {
    if (ia < 0 || ia >= a.rank() || ib < 0 || ib >= b.rank())
      throw std::invalid_argument("contraction index out of range");
    if (used_a[static_cast<size_t>(ia)] || used_b[static_cast<size_t>(ib)])
      throw std::invalid_argument("index paired twice in contraction");
    used_a[static_cast<size_t>(ia)] = used_b[static_cast<size_t>(ib)] = 1;
    if (a.dim(ia) != b.dim(ib))
      throw std::invalid_argument(
          "dimension mismatch in contraction: a[" + std::to_string(ia) + "]=" +
          std::to_string(a.dim(ia)) + " vs b[" + std::to_string(ib) + "]=" +
          std::to_string(b.dim(ib)));
  }

  std::vector<int> pa, pb;
  std::vector<long> out_shape;
  long m = 1, k = 1, n = 1;
  for (int i = 0; i < a.rank(); ++i)
    if (!used_a[static_cast<size_t>(i)]) {
      pa.push_back(i);
      out_shape.push_back(a.dim(i));
      m *= a.dim(i);
    }
  for (const auto& [ia, ib] : pairs) {
    pa.push_back(ia);
    k *= a.dim(ia);
  }
  for (const auto& [ia, ib] : pairs) pb.push_back(ib);
  for (int i = 0; i < b.rank(); ++i)
    if (!used_b[static_cast<size_t>(i)]) {
      pb.push_back(i);
      out_shape.push_back(b.dim(i));
      n *= b.dim(i);
    }

  DenseTensor ta = permute(a, pa);
  DenseTensor tb = permute(b, pb);
  DenseTensor out(out_shape);
  MapConstRowMat ma(ta.data().data(), m, k);
  MapConstRowMat mb(tb.data().data(), k, n);
  MapRowMat mc(out.data().data(), m, n);
  mc.noalias() = ma * mb;
  return out;
}

SvdResult svd_split(const DenseTensor& t, const std::vector<int>& left_indices,
                    long max_rank, double cutoff) {
  const long r = t.rank();
  if (left_indices.empty())
    throw std::invalid_argument("svd_split: empty left index group");
  if (static_cast<long>(left_indices.size()) >= r)
    throw std::invalid_argument("svd_split: left group must be a proper subset");
  if (cutoff < 0.0) throw std::invalid_argument("svd_split: negative cutoff");
  if (!t.all_finite())
    throw numerical_error("svd_split: non-finite input data");

  std::vector<char> is_left(static_cast<size_t>(r), 0);
  for (int i : left_indices) {
    if (i < 0 || i >= r) throw std::invalid_argument("svd_split: index out of range");
    if (is_left[static_cast<size_t>(i)])
      throw std::invalid_argument("svd_split: repeated left index");
    is_left[static_cast<size_t>(i)] = 1;
  }

  std::vector<int> order(left_indices.begin(), left_indices.end());
  std::vector<long> lshape, rshape;
  long m = 1, n = 1;
  for (int i : left_indices) {
    lshape.push_back(t.dim(i));
    m *= t.dim(i);
  }
  for (int i = 0; i < r; ++i)
    if (!is_left[static_cast<size_t>(i)]) {
      order.push_back(i);
      rshape.push_back(t.dim(i));
      n *= t.dim(i);
    }

  DenseTensor tp = permute(t, order);
  MapConstRowMat mat(tp.data().data(), m, n);

  Eigen::MatrixXcd u, vadj;
  Eigen::VectorXd sv;
  if (std::min(m, n) <= 32) {
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    vadj = svd.matrixV().adjoint();
    sv = svd.singularValues();
  } else {
    Eigen::BDCSVD<Eigen::MatrixXcd> svd(mat, Eigen::ComputeThinU | Eigen::ComputeThinV);
    u = svd.matrixU();
    vadj = svd.matrixV().adjoint();
    sv = svd.singularValues();
  }

  const long full = sv.size();
  double total = 0.0;
  for (long i = 0; i < full; ++i) total += sv[i] * sv[i];

  long keep = full;
  if (max_rank > 0) keep = std::min(keep, max_rank);
  while (keep > 1 && sv[keep - 1] * sv[keep - 1] < cutoff * total) --keep;

  double discarded = 0.0;
  for (long i = keep; i < full; ++i) discarded += sv[i] * sv[i];

  SvdResult res;
  res.singular_values.assign(sv.data(), sv.data() + keep);
  res.discarded_weight = discarded;

  lshape.push_back(keep);
  DenseTensor left(lshape);
  MapRowMat ml(left.data().data(), m, keep);
  ml = u.leftCols(keep);
  res.left = std::move(left);

  rshape.insert(rshape.begin(), keep);
  DenseTensor right(rshape);
  MapRowMat mr(right.data().data(), keep, n);
  mr = vadj.topRows(keep);
  res.right = std::move(right);
  return res;
}

EighResult eigh(const DenseTensor& m) {
  if (m.rank() != 2 || m.dim(0) != m.dim(1))
    throw std::invalid_argument("eigh: input must be a square matrix");
  if (!m.all_finite()) throw numerical_error("eigh: non-finite input data");
  const long n = m.dim(0);
  MapConstRowMat a(m.data().data(), n, n);
  const double nrm = a.norm();
  const double herm_dev = (a - a.adjoint()).norm();
  if (herm_dev > 1e-10 * std::max(nrm, 1e-300) && herm_dev > 1e-300)
    throw std::invalid_argument("eigh: input is not Hermitian within tolerance");

  Eigen::MatrixXcd sym = 0.5 * (a + a.adjoint());
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXcd> es(sym);
  if (es.info() != Eigen::Success)
    throw numerical_error("eigh: eigendecomposition failed");

  EighResult res;
  res.eigenvalues.resize(static_cast<size_t>(n));
  DenseTensor vecs({n, n});
  MapRowMat mv(vecs.data().data(), n, n);
  // SelfAdjointEigenSolver sorts ascending; flip to non-increasing.
  for (long j = 0; j < n; ++j) {
    res.eigenvalues[static_cast<size_t>(j)] = es.eigenvalues()[n - 1 - j];
    mv.col(j) = es.eigenvectors().col(n - 1 - j);
  }
  res.vectors = std::move(vecs);
  return res;
}

DenseTensor scale_axis(const DenseTensor& t, int axis,
                       std::span<const double> factors, bool invert) {
  if (axis < 0 || axis >= t.rank())
    throw std::invalid_argument("scale_axis: axis out of range");
  if (static_cast<long>(factors.size()) != t.dim(axis))
    throw std::invalid_argument("scale_axis: factor count mismatch");
  std::vector<double> f(factors.begin(), factors.end());
  if (invert) {
    for (auto& v : f) {
      if (std::abs(v) < 1e-16)
        throw numerical_error("scale_axis: division by vanishing weight");
      v = 1.0 / v;
    }
  }
  DenseTensor out = t;
  const auto strides = row_major_strides(t.shape());
  const long stride = strides[static_cast<size_t>(axis)];
  const long dim = t.dim(axis);
  const long block = stride;
  const long outer = t.size() / (dim * block);
  cx* p = out.data().data();
  for (long o = 0; o < outer; ++o)
    for (long i = 0; i < dim; ++i) {
      cx* row = p + (o * dim + i) * block;
      const double fi = f[static_cast<size_t>(i)];
      for (long j = 0; j < block; ++j) row[j] *= fi;
    }
  return out;
}

DenseTensor slice_axis(const DenseTensor& t, int axis, long new_dim) {
  if (axis < 0 || axis >= t.rank())
    throw std::invalid_argument("slice_axis: axis out of range");
  if (new_dim < 1 || new_dim > t.dim(axis))
    throw std::invalid_argument("slice_axis: bad target dimension");
  if (new_dim == t.dim(axis)) return t;
  std::vector<long> shape = t.shape();
  shape[static_cast<size_t>(axis)] = new_dim;
  DenseTensor out(shape);
  const auto strides = row_major_strides(t.shape());
  const long block = strides[static_cast<size_t>(axis)];
  const long dim = t.dim(axis);
  const long outer = t.size() / (dim * block);
  const cx* src = t.data().data();
  cx* dst = out.data().data();
  for (long o = 0; o < outer; ++o)
    for (long i = 0; i < new_dim; ++i)
      std::copy_n(src + (o * dim + i) * block, block,
                  dst + (o * new_dim + i) * block);
  return out;
}

DenseTensor apply_matrix(const DenseTensor& t, int axis, const DenseTensor& w) {
  if (w.rank() != 2) throw std::invalid_argument("apply_matrix: w must be a matrix");
  DenseTensor r = contract(t, w, {{axis, 1}});
  // contract moved the new index to the back; rotate it home.
  std::vector<int> order;
  int pos = 0;
  for (int i = 0; i < r.rank(); ++i) {
    if (i == axis)
      order.push_back(r.rank() - 1);
    else
      order.push_back(pos++);
  }
  return permute(r, order);
}

}  // namespace ttn
