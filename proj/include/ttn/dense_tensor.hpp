#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace ttn {

using cx = std::complex<double>;

// Raised when a computation produces or receives non-finite data, or when
// an iterative routine diverges.  The CLI maps this to exit code 2.
struct numerical_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Dense complex tensor with a fixed row-major layout: the LAST index varies
// fastest.  A rank-0 tensor holds a single scalar.
class DenseTensor {
 public:
  DenseTensor() : shape_{}, data_(1, cx{0.0, 0.0}) {}
  explicit DenseTensor(std::vector<long> shape);
  DenseTensor(std::vector<long> shape, std::vector<cx> data);

  static DenseTensor identity(long n);
  static DenseTensor from_matrix(long rows, long cols, std::vector<cx> data) {
    return DenseTensor({rows, cols}, std::move(data));
  }

  long rank() const { return static_cast<long>(shape_.size()); }
  long dim(long k) const { return shape_.at(static_cast<size_t>(k)); }
  const std::vector<long>& shape() const { return shape_; }
  long size() const { return static_cast<long>(data_.size()); }

  std::span<const cx> data() const { return data_; }
  std::span<cx> data() { return data_; }
  const cx& operator[](long i) const { return data_[static_cast<size_t>(i)]; }
  cx& operator[](long i) { return data_[static_cast<size_t>(i)]; }

  cx at(const std::vector<long>& idx) const { return data_[offset(idx)]; }
  void set(const std::vector<long>& idx, cx v) { data_[offset(idx)] = v; }
  long offset(const std::vector<long>& idx) const;

  // Reinterpret the same data with a new shape (sizes must agree).
  DenseTensor reshape(std::vector<long> shape) const;

  DenseTensor conjugate() const;
  DenseTensor scaled(cx factor) const;
  double norm() const;  // Frobenius
  bool all_finite() const;

 private:
  std::vector<long> shape_;
  std::vector<cx> data_;
};

// Relocate entries so that result index k enumerates t's index order[k]
// (numpy transpose semantics): result.shape[k] == t.shape[order[k]].
DenseTensor permute(const DenseTensor& t, const std::vector<int>& order);

// Pairwise contraction of a and b over the given (index-of-a, index-of-b)
// pairs.  The result carries a's unpaired indices (in their original order)
// followed by b's unpaired indices.  An empty pair list is an outer product.
DenseTensor contract(const DenseTensor& a, const DenseTensor& b,
                     const std::vector<std::pair<int, int>>& pairs);

struct SvdResult {
  DenseTensor left;                     // [left dims..., k], U†U = I
  std::vector<double> singular_values;  // non-increasing, length k
  DenseTensor right;                    // [k, right dims...], VV† = I
  double discarded_weight = 0.0;        // sum of squares of dropped values
};

// Reshape t into a matrix (left index group x the rest), compute its SVD and
// truncate: at most max_rank values are kept (0 = unbounded), then any value
// with s^2 < cutoff * (sum of all s^2) is dropped.  At least one value is
// always kept.
SvdResult svd_split(const DenseTensor& t, const std::vector<int>& left_indices,
                    long max_rank, double cutoff);

struct EighResult {
  std::vector<double> eigenvalues;  // real, non-increasing
  DenseTensor vectors;              // [i, j]: component i of eigenvector j
};

// Spectral decomposition of a Hermitian matrix; input is symmetrized as
// (m + m†)/2 after checking ‖m − m†‖ ≤ 1e-10 ‖m‖.
EighResult eigh(const DenseTensor& m);

// Multiply slices along one index by real factors (or their inverses).
DenseTensor scale_axis(const DenseTensor& t, int axis,
                       std::span<const double> factors, bool invert = false);

// Keep only the first new_dim slices along one index.
DenseTensor slice_axis(const DenseTensor& t, int axis, long new_dim);

// Contract a matrix w[new, old] into index `axis` of t, keeping the index in
// place: result[..., a, ...] = sum_b w[a, b] t[..., b, ...].
DenseTensor apply_matrix(const DenseTensor& t, int axis, const DenseTensor& w);

}  // namespace ttn
