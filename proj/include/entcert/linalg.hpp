#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

#include "entcert/errors.hpp"

namespace entcert {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;
using Vector = Eigen::VectorXcd;
using RealVector = Eigen::VectorXd;

// Local dimension of each party, party 0 first.
using Dims = std::vector<int>;

inline constexpr double kHermitianTol = 1e-10;  // relative
inline constexpr double kPsdTol = 1e-9;         // absolute
inline constexpr double kSupportEps = 1e-12;
inline constexpr std::size_t kDefaultMaxDim = std::size_t{1} << 14;

std::size_t total_dim(const Dims& dims);

// Process-wide cap on Hilbert-space dimension, kDefaultMaxDim unless changed.
std::size_t max_dimension();
void set_max_dimension(std::size_t cap);

// Throws InvalidInput when dim exceeds cap (0 means max_dimension()).
void check_dimension(std::size_t dim, std::size_t cap = 0);

/// Kronecker product of all factors, composed left to right.
template <typename Scalar>
Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> kron_all(
    std::span<const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>> ops) {
  using Mat = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;
  require(!ops.empty(), "kron_all: empty factor list");
  Mat acc = ops.front();
  for (std::size_t f = 1; f < ops.size(); ++f) {
    const Mat& b = ops[f];
    Mat next(acc.rows() * b.rows(), acc.cols() * b.cols());
    for (Eigen::Index i = 0; i < acc.rows(); ++i)
      for (Eigen::Index j = 0; j < acc.cols(); ++j)
        next.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = acc(i, j) * b;
    acc = std::move(next);
  }
  return acc;
}

inline Matrix kron_all(std::initializer_list<Matrix> ops) {
  std::vector<Matrix> v(ops);
  return kron_all<Complex>(std::span<const Matrix>(v));
}

inline Matrix kron_all(const std::vector<Matrix>& ops) {
  return kron_all<Complex>(std::span<const Matrix>(ops));
}

/// Reduced operator on the parties in `keep` (ascending order in the output).
template <typename Derived>
Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic> partial_trace(
    const Eigen::MatrixBase<Derived>& op, const Dims& dims, std::vector<int> keep) {
  using Scalar = typename Derived::Scalar;
  const std::size_t dim = total_dim(dims);
  require(op.rows() == op.cols() && static_cast<std::size_t>(op.rows()) == dim,
          "partial_trace: operator dimension does not match dims");
  std::sort(keep.begin(), keep.end());
  keep.erase(std::unique(keep.begin(), keep.end()), keep.end());
  const int n = static_cast<int>(dims.size());
  std::vector<bool> kept(n, false);
  for (int k : keep) {
    require(k >= 0 && k < n, "partial_trace: party index out of range");
    kept[k] = true;
  }

  // Offsets of every kept / traced multi-index inside the full index.
  std::vector<std::size_t> stride(n, 1);
  for (int i = n - 2; i >= 0; --i) stride[i] = stride[i + 1] * dims[i + 1];
  std::vector<std::size_t> keep_off{0}, trace_off{0};
  for (int i = 0; i < n; ++i) {
    auto& target = kept[i] ? keep_off : trace_off;
    std::vector<std::size_t> grown;
    grown.reserve(target.size() * dims[i]);
    for (std::size_t base : target)
      for (int s = 0; s < dims[i]; ++s) grown.push_back(base + s * stride[i]);
    target = std::move(grown);
  }

  const auto dk = static_cast<Eigen::Index>(keep_off.size());
  Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> out =
      Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>::Zero(dk, dk);
  for (Eigen::Index r = 0; r < dk; ++r)
    for (Eigen::Index c = 0; c < dk; ++c) {
      Scalar acc{0};
      for (std::size_t t : trace_off) acc += op(keep_off[r] + t, keep_off[c] + t);
      out(r, c) = acc;
    }
  return out;
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& op, double rel_tol = kHermitianTol) {
  if (op.rows() != op.cols()) return false;
  const double scale = std::max(op.norm(), 1.0);
  return (op - op.adjoint()).norm() <= rel_tol * scale;
}

template <typename Derived>
bool is_finite(const Eigen::MatrixBase<Derived>& op) {
  return op.allFinite();
}

struct Spectrum {
  RealVector eigenvalues;  // descending
  Matrix eigenvectors;     // column k belongs to eigenvalues[k]
};

Spectrum hermitian_eig(const Matrix& op);

struct Takagi {
  Matrix u;
  RealVector sigma;  // descending, nonnegative
};

/// Takagi factorization sym = U diag(sigma) U^T of a complex-symmetric matrix.
Takagi takagi(const Matrix& sym);

Matrix matrix_log2_on_support(const Matrix& op, double eps = kSupportEps);

struct PsdCheck {
  bool ok;
  double min_eig;
};

PsdCheck psd_check(const Matrix& op, double tol = kPsdTol);

// S(rho) in bits; rho must be PSD with unit trace.
double von_neumann_entropy(const Matrix& rho, double eps = kSupportEps);

// Projector onto the span of eigenvectors with eigenvalue above eps.
Matrix support_projector(const Matrix& op, double eps = kSupportEps);

// Local operator `local` acting on `party`, identity elsewhere, applied from
// the left: (I ⊗ local ⊗ I) * m. Avoids forming the full Kronecker product.
Matrix apply_local_left(const Matrix& m, const Dims& dims, int party, const Matrix& local);

// (⊗ locals) * m * (⊗ locals)^†
Matrix conjugate_by_locals(const Matrix& m, const Dims& dims, const std::vector<Matrix>& locals);

}  // namespace entcert
