#include "entcert/linalg.hpp"

#include <atomic>
#include <cmath>
#include <string>

namespace entcert {

const char* to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::InvalidInput: return "InvalidInput";
    case ErrorKind::NotPSD: return "NotPSD";
    case ErrorKind::InternalError: return "InternalError";
    case ErrorKind::NotInvariant: return "NotInvariant";
    case ErrorKind::InfiniteRelativeEntropy: return "InfiniteRelativeEntropy";
    case ErrorKind::NoFiniteBound: return "NoFiniteBound";
    case ErrorKind::MeanNotMaximallyMixed: return "MeanNotMaximallyMixed";
  }
  return "Unknown";
}

MeanNotMaximallyMixed::MeanNotMaximallyMixed(double deviation)
    : Error(ErrorKind::MeanNotMaximallyMixed,
            "mean closest product state deviates from I/D by " + std::to_string(deviation)),
      deviation_(deviation) {}

std::size_t total_dim(const Dims& dims) {
  require(!dims.empty(), "empty party list");
  std::size_t d = 1;
  for (int k : dims) {
    require(k >= 1, "local dimensions must be positive");
    d *= static_cast<std::size_t>(k);
  }
  return d;
}

namespace {
std::atomic<std::size_t> g_max_dim{kDefaultMaxDim};
}

std::size_t max_dimension() { return g_max_dim.load(); }

void set_max_dimension(std::size_t cap) {
  require(cap >= 1, "dimension cap must be positive");
  g_max_dim.store(cap);
}

void check_dimension(std::size_t dim, std::size_t cap) {
  if (cap == 0) cap = max_dimension();
  if (dim > cap)
    fail(ErrorKind::InvalidInput, "Hilbert-space dimension " + std::to_string(dim) +
                                      " exceeds cap " + std::to_string(cap));
}

Spectrum hermitian_eig(const Matrix& op) {
  require(is_hermitian(op), "hermitian_eig: input is not Hermitian");
  Eigen::SelfAdjointEigenSolver<Matrix> es(op);
  if (es.info() != Eigen::Success) fail(ErrorKind::InternalError, "eigensolver did not converge");
  // Eigen returns ascending order; flip to descending.
  Spectrum s;
  s.eigenvalues = es.eigenvalues().reverse();
  s.eigenvectors = es.eigenvectors().rowwise().reverse();
  return s;
}

namespace {

// Q with Z = Q Q^T for a symmetric unitary Z. Real and imaginary parts of Z
// are commuting real symmetric matrices, so a single real orthogonal O
// diagonalizes both.
Matrix symmetric_unitary_sqrt(const Matrix& z) {
  const Eigen::MatrixXd a = z.real();
  const Eigen::MatrixXd b = z.imag();
  const Eigen::Index m = z.rows();
  for (double c : {0.7548776662466927, 0.3819660112501051, 1.324717957244746, 2.718281828459045}) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(a + c * b);
    const Eigen::MatrixXd o = es.eigenvectors();
    const Matrix oc = o.cast<Complex>();
    const Matrix diag = oc.transpose() * z * oc;
    const double off = (diag - Matrix(diag.diagonal().asDiagonal())).norm();
    if (off > 1e-8 * std::sqrt(static_cast<double>(m))) continue;
    Vector half(m);
    for (Eigen::Index k = 0; k < m; ++k) half(k) = std::polar(1.0, std::arg(diag(k, k)) / 2.0);
    return oc * half.asDiagonal();
  }
  fail(ErrorKind::InternalError, "takagi: could not diagonalize degenerate block");
}

}  // namespace

Takagi takagi(const Matrix& sym) {
  require(sym.rows() == sym.cols(), "takagi: matrix must be square");
  const double scale = std::max(sym.norm(), 1e-300);
  require((sym - sym.transpose()).norm() <= kHermitianTol * scale,
          "takagi: matrix is not complex-symmetric");
  const Eigen::Index m = sym.rows();
  Eigen::JacobiSVD<Matrix> svd(sym, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const Matrix v = svd.matrixU();
  const Matrix w = svd.matrixV();
  const RealVector s = svd.singularValues();

  // sym = V S W^† = conj(W) S V^T, hence conj(W) = V Z with Z block diagonal
  // over groups of equal singular values and symmetric inside each group.
  const Matrix z = v.adjoint() * w.conjugate();
  Matrix q = Matrix::Identity(m, m);
  const double smax = m > 0 ? s(0) : 0.0;
  Eigen::Index start = 0;
  while (start < m) {
    Eigen::Index end = start + 1;
    while (end < m && std::abs(s(end) - s(start)) <= 1e-11 * std::max(smax, 1e-300)) ++end;
    const Eigen::Index len = end - start;
    if (s(start) > 1e-14 * smax) {
      Matrix zb = z.block(start, start, len, len);
      zb = (0.5 * (zb + zb.transpose())).eval();
      q.block(start, start, len, len) = symmetric_unitary_sqrt(zb);
    }
    start = end;
  }
  return Takagi{v * q, s};
}

Matrix matrix_log2_on_support(const Matrix& op, double eps) {
  const Spectrum sp = hermitian_eig(op);
  RealVector logs(sp.eigenvalues.size());
  for (Eigen::Index k = 0; k < logs.size(); ++k) {
    const double lam = sp.eigenvalues(k);
    if (lam < -eps && lam < -kPsdTol)
      fail(ErrorKind::NotPSD, "matrix_log2_on_support: negative eigenvalue " + std::to_string(lam));
    logs(k) = lam > eps ? std::log2(lam) : 0.0;
  }
  return sp.eigenvectors * logs.cast<Complex>().asDiagonal() * sp.eigenvectors.adjoint();
}

PsdCheck psd_check(const Matrix& op, double tol) {
  const Spectrum sp = hermitian_eig(op);
  const double min_eig = sp.eigenvalues.size() ? sp.eigenvalues(sp.eigenvalues.size() - 1) : 0.0;
  return PsdCheck{min_eig >= -tol, min_eig};
}

double von_neumann_entropy(const Matrix& rho, double eps) {
  const Spectrum sp = hermitian_eig(rho);
  require(std::abs(rho.trace().real() - 1.0) <= 1e-10, "von_neumann_entropy: trace is not 1");
  double s = 0.0;
  for (Eigen::Index k = 0; k < sp.eigenvalues.size(); ++k) {
    const double lam = sp.eigenvalues(k);
    if (lam < -kPsdTol)
      fail(ErrorKind::NotPSD, "von_neumann_entropy: negative eigenvalue " + std::to_string(lam));
    if (lam > eps) s -= lam * std::log2(lam);
  }
  return std::max(s, 0.0);
}

Matrix support_projector(const Matrix& op, double eps) {
  const Spectrum sp = hermitian_eig(op);
  Eigen::Index rank = 0;
  while (rank < sp.eigenvalues.size() && sp.eigenvalues(rank) > eps) ++rank;
  const Matrix basis = sp.eigenvectors.leftCols(rank);
  return basis * basis.adjoint();
}

Matrix apply_local_left(const Matrix& m, const Dims& dims, int party, const Matrix& local) {
  const std::size_t dim = total_dim(dims);
  require(static_cast<std::size_t>(m.rows()) == dim, "apply_local_left: row count mismatch");
  require(party >= 0 && party < static_cast<int>(dims.size()), "apply_local_left: bad party");
  const int d = dims[party];
  require(local.rows() == d && local.cols() == d, "apply_local_left: local operator has wrong size");
  std::size_t right = 1;
  for (std::size_t i = party + 1; i < dims.size(); ++i) right *= dims[i];
  const std::size_t left = dim / (right * d);
  const auto r = static_cast<Eigen::Index>(right);

  Matrix out(m.rows(), m.cols());
  const Matrix local_t = local.transpose();
  for (Eigen::Index c = 0; c < m.cols(); ++c) {
    for (std::size_t l = 0; l < left; ++l) {
      const std::size_t off = l * d * right;
      Eigen::Map<const Matrix> in(m.col(c).data() + off, r, d);
      Eigen::Map<Matrix> dst(out.col(c).data() + off, r, d);
      dst.noalias() = in * local_t;
    }
  }
  return out;
}

Matrix conjugate_by_locals(const Matrix& m, const Dims& dims, const std::vector<Matrix>& locals) {
  require(locals.size() == dims.size(), "conjugate_by_locals: one local operator per party");
  Matrix tmp = m;
  for (std::size_t i = 0; i < locals.size(); ++i)
    tmp = apply_local_left(tmp, dims, static_cast<int>(i), locals[i]);
  Matrix adj = tmp.adjoint();
  for (std::size_t i = 0; i < locals.size(); ++i)
    adj = apply_local_left(adj, dims, static_cast<int>(i), locals[i]);
  return adj.adjoint();
}

}  // namespace entcert
