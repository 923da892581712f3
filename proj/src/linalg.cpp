#include "bpg/linalg.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "bpg/errors.hpp"

namespace bpg {

void TruncationPolicy::validate() const {
  if (max_rank && *max_rank < 1) throw InvalidSpec("max_rank must be >= 1");
  if (cutoff < 0.0 || cutoff >= 1.0) throw InvalidSpec("cutoff must lie in [0, 1)");
}

namespace linalg {

void require_finite(const Matrix& m, const char* what) {
  if (!m.allFinite()) throw NumericalError(std::string(what) + ": non-finite input");
}

namespace {

struct ThinSvd {
  Matrix u;
  RealVector s;
  Matrix v;
};

// Eigen 3.4.0's divide-and-conquer SVD occasionally returns inaccurate
// factors; those results are recomputed with the Jacobi solver.
ThinSvd thin_svd(const Matrix& m) {
  Eigen::BDCSVD<Matrix> dec(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (dec.info() == Eigen::Success) {
    ThinSvd out{dec.matrixU(), dec.singularValues(), dec.matrixV()};
    const double scale = m.norm();
    const double residual = (out.u * out.s.cast<Complex>().asDiagonal() * out.v.adjoint() - m).norm();
    if (residual <= 1e-11 * scale) return out;
  }
  Eigen::JacobiSVD<Matrix> jac(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
  if (jac.info() != Eigen::Success) throw NumericalError("svd: decomposition failed");
  return {jac.matrixU(), jac.singularValues(), jac.matrixV()};
}

}  // namespace

Svd svd(const Matrix& m, const TruncationPolicy& trunc) {
  require_finite(m, "svd");
  const ThinSvd dec = thin_svd(m);
  const RealVector& sv = dec.s;
  const long full = sv.size();
  long keep = full;
  if (full > 0 && trunc.cutoff > 0.0) {
    const double floor = trunc.cutoff * sv(0);
    keep = 0;
    while (keep < full && sv(keep) > floor) ++keep;
  }
  if (trunc.max_rank) keep = std::min(keep, *trunc.max_rank);
  keep = std::max<long>(keep, std::min<long>(full, 1));

  Svd out;
  out.total_sq = sv.squaredNorm();
  out.discarded_sq = sv.tail(full - keep).squaredNorm();
  out.s = sv.head(keep);
  out.u = dec.u.leftCols(keep);
  out.vh = dec.v.leftCols(keep).adjoint();
  return out;
}

Qr qr(const Matrix& m) {
  require_finite(m, "qr");
  const long rows = m.rows();
  const long cols = m.cols();
  const long k = std::min(rows, cols);
  Eigen::HouseholderQR<Matrix> dec(m);
  Qr out;
  out.q = dec.householderQ() * Matrix::Identity(rows, k);
  out.r = dec.matrixQR().topRows(k).triangularView<Eigen::Upper>();
  return out;
}

HermitianEig hermitian_eig(const Matrix& m) {
  require_finite(m, "hermitian_eig");
  Eigen::SelfAdjointEigenSolver<Matrix> es(m);
  if (es.info() != Eigen::Success) throw NumericalError("hermitian_eig: decomposition failed");
  const long n = m.rows();
  HermitianEig out;
  out.values = es.eigenvalues().reverse();
  out.vectors = es.eigenvectors().rowwise().reverse();
  for (long j = 0; j < n; ++j) {
    Eigen::Index pivot = 0;
    out.vectors.col(j).cwiseAbs().maxCoeff(&pivot);
    const Complex c = out.vectors(pivot, j);
    if (std::abs(c) > 0.0) out.vectors.col(j) *= std::conj(c) / std::abs(c);
  }
  return out;
}

SqrtPair sqrt_and_inv_sqrt(const Matrix& m, double pinv_cutoff) {
  if (m.rows() != m.cols()) throw DimensionMismatch("sqrt_and_inv_sqrt: matrix must be square");
  const double scale = m.norm();
  if ((m - m.adjoint()).norm() > kHermitianTolerance * scale) {
    throw NotHermitian("sqrt_and_inv_sqrt: matrix is not Hermitian");
  }
  const Matrix herm = 0.5 * (m + m.adjoint());
  const HermitianEig eig = hermitian_eig(herm);
  const long n = m.rows();
  const double top = n > 0 ? std::max(eig.values(0), 0.0) : 0.0;
  // negative noise below the tolerance is clamped to zero
  if (n > 0 && -eig.values(n - 1) > kNegativeEigenTolerance * top) {
    throw NotPositive("sqrt_and_inv_sqrt: significantly negative eigenvalue");
  }
  RealVector root(n), inv_root(n);
  for (long i = 0; i < n; ++i) {
    const double lam = std::max(eig.values(i), 0.0);
    const bool kept = lam > pinv_cutoff * top && lam > 0.0;
    root(i) = kept ? std::sqrt(lam) : 0.0;
    inv_root(i) = kept ? 1.0 / std::sqrt(lam) : 0.0;
  }
  SqrtPair out;
  out.half = eig.vectors * root.asDiagonal() * eig.vectors.adjoint();
  out.inv_half = eig.vectors * inv_root.asDiagonal() * eig.vectors.adjoint();
  return out;
}

double trace_norm(const Matrix& m) {
  require_finite(m, "trace_norm");
  if (m.rows() == m.cols() && (m - m.adjoint()).norm() <= 1e-14 * (m.norm() + 1e-300)) {
    Eigen::SelfAdjointEigenSolver<Matrix> es(m, Eigen::EigenvaluesOnly);
    return es.eigenvalues().cwiseAbs().sum();
  }
  Eigen::JacobiSVD<Matrix> dec(m);
  return dec.singularValues().sum();
}

double normalized_trace_distance(const Matrix& a, const Matrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols()) {
    throw DimensionMismatch("normalized_trace_distance: matrices must be square with equal dims");
  }
  const Complex ta = a.trace();
  const Complex tb = b.trace();
  if (std::abs(ta) == 0.0 || std::abs(tb) == 0.0) throw DegenerateInput("normalized_trace_distance: zero trace");
  return trace_norm(a / ta - b / tb);
}

Matrix expm_hermitian(const Matrix& h, Complex factor) {
  const HermitianEig eig = hermitian_eig(0.5 * (h + h.adjoint()));
  Vector ex(eig.values.size());
  for (long i = 0; i < ex.size(); ++i) ex(i) = std::exp(factor * eig.values(i));
  return eig.vectors * ex.asDiagonal() * eig.vectors.adjoint();
}

Matrix pinv(const Matrix& m, double cutoff) {
  require_finite(m, "pinv");
  const ThinSvd dec = thin_svd(m);
  const RealVector& s = dec.s;
  RealVector inv(s.size());
  const double top = s.size() ? s(0) : 0.0;
  for (long i = 0; i < s.size(); ++i) inv(i) = (s(i) > cutoff * top && s(i) > 0.0) ? 1.0 / s(i) : 0.0;
  return dec.v * inv.asDiagonal() * dec.u.adjoint();
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (long i = 0; i < a.rows(); ++i) {
    for (long j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  }
  return out;
}

}  // namespace linalg

TensorSvd svd(const MatrixView& view, std::optional<long> max_rank, std::optional<double> cutoff) {
  TruncationPolicy trunc{max_rank, cutoff.value_or(0.0)};
  trunc.validate();
  const Matrix m = to_matrix(view);
  const linalg::Svd dec = linalg::svd(m, trunc);
  const long r = dec.s.size();
  const Index bond = make_index(r, IndexKind::bond);
  const Index bond_v = bond.at_level(1);

  TensorSvd out{from_matrix(dec.u, view.row_indices, {bond}),
                from_matrix(Matrix(dec.s.cast<Complex>().asDiagonal()), {bond}, {bond_v}),
                from_matrix(dec.vh, {bond_v}, view.col_indices),
                std::vector<double>(dec.s.data(), dec.s.data() + r), dec.discarded_sq};
  return out;
}

TensorQr qr(const MatrixView& view) {
  const Matrix m = to_matrix(view);
  const linalg::Qr dec = linalg::qr(m);
  const Index inner = make_index(dec.q.cols(), IndexKind::bond);
  return {from_matrix(dec.q, view.row_indices, {inner}), from_matrix(dec.r, {inner}, view.col_indices)};
}

TensorSqrtPair sqrt_and_inv_sqrt(const MatrixView& view, double pinv_cutoff) {
  const Matrix m = to_matrix(view);
  const linalg::SqrtPair p = linalg::sqrt_and_inv_sqrt(m, pinv_cutoff);
  const Index inner = make_index(m.rows(), IndexKind::bond);
  return {from_matrix(p.half, {inner}, view.col_indices),
          from_matrix(p.inv_half, view.col_indices, {inner.at_level(1)})};
}

double normalized_trace_distance(const MatrixView& a, const MatrixView& b) {
  return linalg::normalized_trace_distance(to_matrix(a), to_matrix(b));
}

}  // namespace bpg
