#include "entcert/witness.hpp"

#include <cmath>
#include <limits>
#include <random>

namespace entcert {

namespace {

constexpr double kViolationTol = 1e-7;

ProductState random_product(const Dims& dims, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  std::vector<Vector> locals;
  for (int d : dims) {
    Vector v(d);
    for (int k = 0; k < d; ++k) {
      const double re = normal(rng);
      const double im = normal(rng);
      v(k) = Complex(re, im);
    }
    locals.push_back(v.normalized());
  }
  return ProductState(std::move(locals));
}

}  // namespace

Witness witness_from_alpha(const DensityOp& rho_op, double alpha, std::string source_id) {
  require(alpha > 0.0 && alpha <= 1.0 + 1e-12, "witness: alpha must lie in (0, 1]");
  const Matrix rho = rho_op.normalized();
  const auto dim = rho.rows();
  Witness w{rho_op.dims(), Matrix::Identity(dim, dim) - rho / alpha, alpha, rho, std::move(source_id), false};
  const Spectrum sp = hermitian_eig(w.op);
  if (sp.eigenvalues(0) > 1.0 + 1e-9) fail(ErrorKind::InternalError, "witness: operator exceeds identity");
  w.trivial = sp.eigenvalues(dim - 1) >= -1e-9;
  return w;
}

Witness build_WG(const DensityOp& rho, const GeoResult& geo, std::string source_id) {
  require(geo.witness.dims() == rho.dims(), "build_WG: geometric result has wrong dims");
  return witness_from_alpha(rho, std::exp2(-geo.value_bits), std::move(source_id));
}

double witness_expectation(const Witness& w, const Matrix& rho) {
  require(rho.rows() == w.op.rows() && rho.cols() == w.op.cols(), "witness_expectation: dimension mismatch");
  return (w.op * rho).trace().real();
}

double witness_expectation(const Witness& w, const ProductState& sigma) {
  require(sigma.dims() == w.dims, "witness_expectation: dims mismatch");
  return sigma.expectation(w.op);
}

ValiditySample witness_validity_sample(const Witness& w, int samples, std::uint64_t seed) {
  require(samples >= 1, "witness_validity_sample: samples must be >= 1");
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32), 0x5eedu};
  std::mt19937_64 rng(seq);
  std::optional<ProductState> worst;
  double min_value = std::numeric_limits<double>::infinity();
  for (int s = 0; s < samples; ++s) {
    ProductState p = random_product(w.dims, rng);
    const double v = p.expectation(w.op);
    if (v < min_value) {
      min_value = v;
      worst = std::move(p);
    }
  }
  // min_σ tr(Wσ) = 1 − max_σ⟨σ|ρ|σ⟩/α, so refine by ascending ⟨σ|ρ|σ⟩.
  const GeoResult refined = refine_mixed(DensityOp(w.dims, w.rho), *worst);
  const double v = witness_expectation(w, refined.witness);
  if (v < min_value) {
    min_value = v;
    worst = refined.witness;
  }
  ValiditySample out{min_value, *worst, std::nullopt};
  if (min_value < -kViolationTol) out.violating = *worst;
  return out;
}

}  // namespace entcert
