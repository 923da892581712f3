#pragma once

// Dense factorizations backed by Eigen, plus their labeled-tensor forms.

#include <optional>
#include <vector>

#include "bpg/tensor.hpp"

namespace bpg {

/// Which singular values survive a factorization. Values below
/// `cutoff * largest` and beyond `max_rank` are dropped.
struct TruncationPolicy {
  std::optional<long> max_rank;
  double cutoff = 0.0;

  static TruncationPolicy none() { return {}; }
  static TruncationPolicy rank(long r, double cut = 0.0) { return {r, cut}; }
  void validate() const;
};

namespace linalg {

inline constexpr double kDefaultPinvCutoff = 1e-12;
inline constexpr double kNegativeEigenTolerance = 1e-12;
inline constexpr double kHermitianTolerance = 1e-10;

struct Svd {
  Matrix u;             // rows x r, isometric columns
  RealVector s;         // r values, descending
  Matrix vh;            // r x cols, isometric rows
  double discarded_sq;  // sum of squares of the dropped values
  double total_sq;      // sum of squares of all values
};

Svd svd(const Matrix& m, const TruncationPolicy& trunc = {});

struct Qr {
  Matrix q;  // rows x k, k = min(rows, cols)
  Matrix r;  // k x cols
};

Qr qr(const Matrix& m);

/// m = vecs * diag(vals) * vecs^dagger, eigenvalues descending; each
/// eigenvector has its largest-magnitude component real and positive.
struct HermitianEig {
  RealVector values;
  Matrix vectors;
};

HermitianEig hermitian_eig(const Matrix& m);

/// half^dagger * half = m and half * inv_half = projector onto the retained
/// eigenspace. Eigenvalues below pinv_cutoff * max are treated as zero.
struct SqrtPair {
  Matrix half;
  Matrix inv_half;
};

SqrtPair sqrt_and_inv_sqrt(const Matrix& m, double pinv_cutoff = kDefaultPinvCutoff);

/// Sum of singular values.
double trace_norm(const Matrix& m);

/// ||a/Tr a - b/Tr b||_1.
double normalized_trace_distance(const Matrix& a, const Matrix& b);

/// exp(factor * h) for Hermitian h.
Matrix expm_hermitian(const Matrix& h, Complex factor);

/// Moore-Penrose inverse with a relative singular-value cutoff.
Matrix pinv(const Matrix& m, double cutoff = kDefaultPinvCutoff);

void require_finite(const Matrix& m, const char* what);

/// Kronecker product, a's index slower.
Matrix kron(const Matrix& a, const Matrix& b);

}  // namespace linalg

// Labeled forms.

struct TensorSvd {
  LabeledTensor u;  // row indices + bond
  LabeledTensor s;  // (bond, bond') diagonal
  LabeledTensor v;  // bond' + col indices
  std::vector<double> singular_values;
  double discarded_sq = 0.0;
};

/// Splits `view` as U * S * V. The new bond carries `bond` on U's side and
/// `bond.at_level(1)` on V's side, so contract(contract(u, s), v) rebuilds
/// the (possibly truncated) tensor.
TensorSvd svd(const MatrixView& view, std::optional<long> max_rank = std::nullopt,
              std::optional<double> cutoff = std::nullopt);

struct TensorQr {
  LabeledTensor q;
  LabeledTensor r;
};

TensorQr qr(const MatrixView& view);

struct TensorSqrtPair {
  LabeledTensor half;
  LabeledTensor inv_half;
};

/// `half` maps the view's column space onto a fresh inner index and
/// `inv_half` maps back: half(inner, cols), inv_half(rows, inner).
TensorSqrtPair sqrt_and_inv_sqrt(const MatrixView& view, double pinv_cutoff = linalg::kDefaultPinvCutoff);

double normalized_trace_distance(const MatrixView& a, const MatrixView& b);

}  // namespace bpg
