#include "bpg/tensor.hpp"

#include <algorithm>
#include <atomic>
#include <numeric>
#include <sstream>

#include "bpg/errors.hpp"

namespace bpg {
namespace {

std::atomic<std::uint64_t> next_index_id{1};

long product(std::span<const long> dims) {
  return std::accumulate(dims.begin(), dims.end(), 1L, std::multiplies<>());
}

std::vector<long> dims_of(const std::vector<Index>& indices) {
  std::vector<long> d;
  d.reserve(indices.size());
  for (const auto& i : indices) d.push_back(i.dim);
  return d;
}

void check_unique(const std::vector<Index>& indices) {
  for (std::size_t i = 0; i < indices.size(); ++i) {
    if (indices[i].dim < 1) throw DimensionMismatch("index dimension must be >= 1: " + to_string(indices[i]));
    for (std::size_t j = i + 1; j < indices.size(); ++j) {
      if (indices[i].same_label(indices[j])) {
        throw DimensionMismatch("repeated index label on one tensor: " + to_string(indices[i]));
      }
    }
  }
}

using ConstRowMap = Eigen::Map<const RowMajorMatrix>;
using RowMap = Eigen::Map<RowMajorMatrix>;

}  // namespace

Index make_index(long dim, IndexKind kind) {
  return Index{next_index_id.fetch_add(1, std::memory_order_relaxed), dim, kind, 0};
}

std::string to_string(const Index& idx) {
  std::ostringstream os;
  os << (idx.kind == IndexKind::site ? "s" : "b") << idx.id;
  if (idx.level) os << "'" << idx.level;
  os << "(" << idx.dim << ")";
  return os.str();
}

LabeledTensor::LabeledTensor() : data_(1, Complex{0.0, 0.0}) {}

LabeledTensor::LabeledTensor(std::vector<Index> indices) : indices_(std::move(indices)) {
  check_unique(indices_);
  data_.assign(static_cast<std::size_t>(product(dims_of(indices_))), Complex{});
}

LabeledTensor::LabeledTensor(std::vector<Index> indices, std::vector<Complex> data)
    : indices_(std::move(indices)), data_(std::move(data)) {
  check_unique(indices_);
  if (static_cast<long>(data_.size()) != product(dims_of(indices_))) {
    throw DimensionMismatch("tensor data length does not match index dimensions");
  }
}

LabeledTensor LabeledTensor::scalar(Complex value) {
  LabeledTensor t;
  t.data_[0] = value;
  return t;
}

std::vector<long> LabeledTensor::dims() const { return dims_of(indices_); }

std::optional<std::size_t> LabeledTensor::axis_of(const Index& idx) const {
  for (std::size_t i = 0; i < indices_.size(); ++i) {
    if (indices_[i].same_label(idx)) return i;
  }
  return std::nullopt;
}

Complex& LabeledTensor::at(std::span<const long> multi) {
  long off = 0;
  for (std::size_t i = 0; i < indices_.size(); ++i) off = off * indices_[i].dim + multi[i];
  return data_[static_cast<std::size_t>(off)];
}

Complex LabeledTensor::at(std::span<const long> multi) const {
  long off = 0;
  for (std::size_t i = 0; i < indices_.size(); ++i) off = off * indices_[i].dim + multi[i];
  return data_[static_cast<std::size_t>(off)];
}

Complex LabeledTensor::value() const {
  if (!indices_.empty()) throw DimensionMismatch("value() requires a rank-0 tensor");
  return data_[0];
}

LabeledTensor LabeledTensor::permuted(std::span<const Index> order) const {
  if (order.size() != indices_.size()) throw DimensionMismatch("permutation has the wrong rank");
  std::vector<std::size_t> perm;
  perm.reserve(order.size());
  for (const auto& idx : order) {
    auto ax = axis_of(idx);
    if (!ax) throw DimensionMismatch("permutation names a missing index " + to_string(idx));
    perm.push_back(*ax);
  }
  return permuted_axes(perm);
}

LabeledTensor LabeledTensor::permuted_axes(std::span<const std::size_t> perm) const {
  bool identity = true;
  for (std::size_t i = 0; i < perm.size(); ++i) identity = identity && perm[i] == i;
  if (identity) return *this;
  std::vector<Index> out_idx;
  out_idx.reserve(perm.size());
  for (auto p : perm) out_idx.push_back(indices_[p]);
  auto d = dims();
  return LabeledTensor(std::move(out_idx), permute_data(data_, d, perm));
}

LabeledTensor LabeledTensor::conj() const {
  LabeledTensor t = *this;
  for (auto& x : t.data_) x = std::conj(x);
  return t;
}

LabeledTensor LabeledTensor::relabeled(const Index& from, const Index& to) const {
  auto ax = axis_of(from);
  if (!ax) throw DimensionMismatch("relabel of missing index " + to_string(from));
  if (indices_[*ax].dim != to.dim) throw DimensionMismatch("relabel changes dimension");
  LabeledTensor t = *this;
  t.indices_[*ax] = to;
  check_unique(t.indices_);
  return t;
}

LabeledTensor LabeledTensor::at_level(int level) const {
  LabeledTensor t = *this;
  for (auto& i : t.indices_) i.level = level;
  return t;
}

LabeledTensor& LabeledTensor::operator*=(Complex s) {
  for (auto& x : data_) x *= s;
  return *this;
}

double LabeledTensor::norm() const {
  double acc = 0.0;
  for (const auto& x : data_) acc += std::norm(x);
  return std::sqrt(acc);
}

LabeledTensor operator*(Complex s, LabeledTensor t) {
  t *= s;
  return t;
}

namespace {
LabeledTensor combine(const LabeledTensor& a, const LabeledTensor& b, double sign) {
  LabeledTensor bb = b.permuted(a.indices());
  for (std::size_t i = 0; i < a.rank(); ++i) {
    if (a.index(i).dim != bb.index(i).dim) throw DimensionMismatch("elementwise op on mismatched dims");
  }
  LabeledTensor out = a;
  auto od = out.data();
  auto bd = bb.data();
  for (std::size_t i = 0; i < od.size(); ++i) od[i] += sign * bd[i];
  return out;
}
}  // namespace

LabeledTensor operator+(const LabeledTensor& a, const LabeledTensor& b) { return combine(a, b, 1.0); }
LabeledTensor operator-(const LabeledTensor& a, const LabeledTensor& b) { return combine(a, b, -1.0); }

std::vector<Complex> permute_data(std::span<const Complex> in, std::span<const long> dims,
                                  std::span<const std::size_t> perm) {
  const std::size_t r = dims.size();
  std::vector<Complex> out(in.size());
  if (r == 0 || in.empty()) {
    std::copy(in.begin(), in.end(), out.begin());
    return out;
  }
  std::vector<long> in_stride(r, 1);
  for (std::size_t i = r - 1; i > 0; --i) in_stride[i - 1] = in_stride[i] * dims[i];
  std::vector<long> out_dims(r), stride(r);
  for (std::size_t k = 0; k < r; ++k) {
    out_dims[k] = dims[perm[k]];
    stride[k] = in_stride[perm[k]];
  }
  const long inner = out_dims[r - 1];
  const long inner_stride = stride[r - 1];
  std::vector<long> counter(r, 0);
  long in_off = 0;
  std::size_t o = 0;
  const std::size_t total = in.size();
  while (o < total) {
    const Complex* src = in.data() + in_off;
    for (long j = 0; j < inner; ++j) out[o++] = src[j * inner_stride];
    // advance the odometer over all but the innermost output axis
    std::size_t k = r - 1;
    while (k > 0) {
      --k;
      ++counter[k];
      in_off += stride[k];
      if (counter[k] < out_dims[k]) break;
      in_off -= stride[k] * out_dims[k];
      counter[k] = 0;
    }
  }
  return out;
}

LabeledTensor contract(const LabeledTensor& a, const LabeledTensor& b) {
  std::vector<std::size_t> a_free, a_shared, b_free, b_shared;
  for (std::size_t i = 0; i < a.rank(); ++i) {
    auto j = b.axis_of(a.index(i));
    if (j) {
      if (a.index(i).dim != b.index(*j).dim) {
        throw DimensionMismatch("contracted index dims differ: " + to_string(a.index(i)) + " vs " +
                                to_string(b.index(*j)));
      }
      a_shared.push_back(i);
      b_shared.push_back(*j);
    } else {
      a_free.push_back(i);
    }
  }
  for (std::size_t j = 0; j < b.rank(); ++j) {
    if (std::find(b_shared.begin(), b_shared.end(), j) == b_shared.end()) b_free.push_back(j);
  }

  std::vector<std::size_t> pa(a_free);
  pa.insert(pa.end(), a_shared.begin(), a_shared.end());
  std::vector<std::size_t> pb(b_shared);
  pb.insert(pb.end(), b_free.begin(), b_free.end());
  const LabeledTensor ap = a.permuted_axes(pa);
  const LabeledTensor bp = b.permuted_axes(pb);

  long m = 1, k = 1, n = 1;
  std::vector<Index> out_idx;
  for (auto i : a_free) {
    m *= a.index(i).dim;
    out_idx.push_back(a.index(i));
  }
  for (auto i : a_shared) k *= a.index(i).dim;
  for (auto j : b_free) {
    n *= b.index(j).dim;
    out_idx.push_back(b.index(j));
  }
  std::vector<Complex> out(static_cast<std::size_t>(m * n));
  ConstRowMap am(ap.data().data(), m, k);
  ConstRowMap bm(bp.data().data(), k, n);
  RowMap cm(out.data(), m, n);
  cm.noalias() = am * bm;
  return LabeledTensor(std::move(out_idx), std::move(out));
}

Matrix to_matrix(const MatrixView& view) {
  const auto& t = view.tensor;
  if (view.row_indices.size() + view.col_indices.size() != t.rank()) {
    throw DimensionMismatch("matrix view must partition the tensor indices");
  }
  std::vector<Index> order(view.row_indices);
  order.insert(order.end(), view.col_indices.begin(), view.col_indices.end());
  LabeledTensor p = t.permuted(order);
  long rows = 1, cols = 1;
  for (const auto& i : view.row_indices) rows *= t.index(*t.axis_of(i)).dim;
  for (const auto& i : view.col_indices) cols *= t.index(*t.axis_of(i)).dim;
  return ConstRowMap(p.data().data(), rows, cols);
}

LabeledTensor from_matrix(const Matrix& m, std::vector<Index> row_indices, std::vector<Index> col_indices) {
  long rows = 1, cols = 1;
  for (const auto& i : row_indices) rows *= i.dim;
  for (const auto& i : col_indices) cols *= i.dim;
  if (rows != m.rows() || cols != m.cols()) throw DimensionMismatch("from_matrix: shape does not match indices");
  std::vector<Complex> data(static_cast<std::size_t>(rows * cols));
  RowMap(data.data(), rows, cols) = m;
  row_indices.insert(row_indices.end(), col_indices.begin(), col_indices.end());
  return LabeledTensor(std::move(row_indices), std::move(data));
}

LabeledTensor apply_on_axis(const LabeledTensor& t, std::size_t axis, const Matrix& m, const Index& new_index) {
  const auto dims = t.dims();
  const long chi = dims[axis];
  if (m.rows() != chi) throw DimensionMismatch("apply_on_axis: matrix rows do not match axis dimension");
  if (m.cols() != new_index.dim) throw DimensionMismatch("apply_on_axis: matrix cols do not match new index");
  long pre = 1, post = 1;
  for (std::size_t i = 0; i < axis; ++i) pre *= dims[i];
  for (std::size_t i = axis + 1; i < dims.size(); ++i) post *= dims[i];
  const long out_chi = m.cols();

  std::vector<Index> idx = t.indices();
  idx[axis] = new_index;
  std::vector<Complex> out(static_cast<std::size_t>(pre * out_chi * post));
  const Complex* src = t.data().data();
  if (post == 1) {
    RowMap(out.data(), pre, out_chi).noalias() = ConstRowMap(src, pre, chi) * m;
  } else {
    const Matrix mt = m.transpose();
    for (long p = 0; p < pre; ++p) {
      RowMap(out.data() + p * out_chi * post, out_chi, post).noalias() =
          mt * ConstRowMap(src + p * chi * post, chi, post);
    }
  }
  return LabeledTensor(std::move(idx), std::move(out));
}

Matrix axis_gram(const LabeledTensor& bra, const LabeledTensor& ket, std::size_t axis) {
  const auto dims = ket.dims();
  if (bra.dims() != dims) throw DimensionMismatch("axis_gram: tensors have different shapes");
  long pre = 1, post = 1;
  for (std::size_t i = 0; i < axis; ++i) pre *= dims[i];
  for (std::size_t i = axis + 1; i < dims.size(); ++i) post *= dims[i];
  const long chi = dims[axis];
  const Complex* b = bra.data().data();
  const Complex* k = ket.data().data();
  Matrix g(chi, chi);
  if (post == 1) {
    g.noalias() = ConstRowMap(b, pre, chi).adjoint() * ConstRowMap(k, pre, chi);
  } else {
    g.setZero();
    for (long p = 0; p < pre; ++p) {
      g.noalias() += ConstRowMap(b + p * chi * post, chi, post).conjugate() *
                     ConstRowMap(k + p * chi * post, chi, post).transpose();
    }
  }
  return g;
}

void scale_axis(LabeledTensor& t, std::size_t axis, std::span<const double> weights) {
  const auto dims = t.dims();
  if (static_cast<long>(weights.size()) != dims[axis]) throw DimensionMismatch("scale_axis: weight count");
  long pre = 1, post = 1;
  for (std::size_t i = 0; i < axis; ++i) pre *= dims[i];
  for (std::size_t i = axis + 1; i < dims.size(); ++i) post *= dims[i];
  const long chi = dims[axis];
  Complex* d = t.data().data();
  for (long p = 0; p < pre; ++p) {
    for (long c = 0; c < chi; ++c) {
      Complex* row = d + (p * chi + c) * post;
      const double w = weights[static_cast<std::size_t>(c)];
      for (long q = 0; q < post; ++q) row[q] *= w;
    }
  }
}

}  // namespace bpg
