#pragma once

// Dense complex tensors whose axes are identified by labeled indices.
//
// Storage is row-major over the declared index order: the last index varies
// fastest. Permutations are explicit; contract() never reorders the free
// indices of its operands beyond "free indices of a, then free indices of b".

#include <complex>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace bpg {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;
using RowMajorMatrix = Eigen::Matrix<Complex, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

enum class IndexKind { site, bond };

/// A tensor axis label. Two indices name the same axis when both `id` and
/// `level` agree; `level` separates the ket (0) and bra (1) copies of one
/// logical index in norm networks.
struct Index {
  std::uint64_t id = 0;
  long dim = 1;
  IndexKind kind = IndexKind::bond;
  int level = 0;

  /// Same id and kind at a different level.
  Index at_level(int lvl) const { return Index{id, dim, kind, lvl}; }
  Index with_dim(long d) const { return Index{id, d, kind, level}; }

  bool same_label(const Index& o) const { return id == o.id && level == o.level; }
  friend bool operator==(const Index& a, const Index& b) {
    return a.id == b.id && a.dim == b.dim && a.kind == b.kind && a.level == b.level;
  }
};

/// A fresh index with a process-unique id.
Index make_index(long dim, IndexKind kind = IndexKind::bond);

std::string to_string(const Index& idx);

class LabeledTensor {
 public:
  /// Rank-0 tensor holding 0.
  LabeledTensor();
  /// Zero-filled tensor over `indices`.
  explicit LabeledTensor(std::vector<Index> indices);
  LabeledTensor(std::vector<Index> indices, std::vector<Complex> data);

  static LabeledTensor scalar(Complex value);

  std::size_t rank() const { return indices_.size(); }
  std::size_t size() const { return data_.size(); }
  const std::vector<Index>& indices() const { return indices_; }
  const Index& index(std::size_t axis) const { return indices_[axis]; }
  std::vector<long> dims() const;

  std::span<const Complex> data() const { return data_; }
  std::span<Complex> data() { return data_; }
  std::vector<Complex>& storage() { return data_; }

  /// Axis carrying the label of `idx`, if any.
  std::optional<std::size_t> axis_of(const Index& idx) const;
  bool has(const Index& idx) const { return axis_of(idx).has_value(); }

  Complex& at(std::span<const long> multi);
  Complex at(std::span<const long> multi) const;

  /// Value of a rank-0 tensor.
  Complex value() const;

  /// Reorder axes so the indices appear as in `order` (matched by label).
  LabeledTensor permuted(std::span<const Index> order) const;
  LabeledTensor permuted_axes(std::span<const std::size_t> perm) const;

  LabeledTensor conj() const;
  /// Replace the label of one index, keeping data. Dimensions must agree.
  LabeledTensor relabeled(const Index& from, const Index& to) const;
  /// Move every index to `level`.
  LabeledTensor at_level(int level) const;

  LabeledTensor& operator*=(Complex s);
  double norm() const;

 private:
  std::vector<Index> indices_;
  std::vector<Complex> data_;
};

LabeledTensor operator*(Complex s, LabeledTensor t);
LabeledTensor operator+(const LabeledTensor& a, const LabeledTensor& b);
LabeledTensor operator-(const LabeledTensor& a, const LabeledTensor& b);

/// Sum over every index label shared by `a` and `b`. The result carries
/// the free indices of `a` followed by those of `b`.
LabeledTensor contract(const LabeledTensor& a, const LabeledTensor& b);

/// Rows/columns split of a tensor for the matrix factorizations.
struct MatrixView {
  const LabeledTensor& tensor;
  std::vector<Index> row_indices;
  std::vector<Index> col_indices;
};

/// Validates the split and flattens it; rows are row-major over
/// `row_indices`, columns row-major over `col_indices`.
Matrix to_matrix(const MatrixView& view);
LabeledTensor from_matrix(const Matrix& m, std::vector<Index> row_indices,
                          std::vector<Index> col_indices);

/// Generic axis permutation of row-major data.
std::vector<Complex> permute_data(std::span<const Complex> in, std::span<const long> dims,
                                  std::span<const std::size_t> perm);

// Axis kernels used by the network algorithms. They avoid the generic
// permute/GEMM/permute cycle when one axis is acted on by a matrix.

/// out[.., a, ..] = sum_k t[.., k, ..] * m(k, a); the axis label becomes `new_index`.
LabeledTensor apply_on_axis(const LabeledTensor& t, std::size_t axis, const Matrix& m,
                            const Index& new_index);

/// g(b, k) = sum over all other axes of conj(bra[.., b, ..]) * ket[.., k, ..].
/// Both tensors must have identical shapes.
Matrix axis_gram(const LabeledTensor& bra, const LabeledTensor& ket, std::size_t axis);

/// In-place diagonal scaling of one axis.
void scale_axis(LabeledTensor& t, std::size_t axis, std::span<const double> weights);

}  // namespace bpg
