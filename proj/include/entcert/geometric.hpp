#pragma once

#include <cstdint>
#include <optional>

#include "entcert/states.hpp"

namespace entcert {

struct GeoOptions {
  int restarts = 32;  // Haar-random restarts, on top of one deterministic start
  int max_iters = 500;
  double tol = 1e-12;  // stop when a sweep improves the overlap by less than this
  std::uint64_t seed = 1;
  int threads = 1;
};

/// Best product state found and the geometric value it certifies.
///
/// `value_bits` is -log2(overlap) for the reported witness, so it is always an
/// upper bound on the true optimum; `converged` says whether the best run met
/// the tolerance before `max_iters`.
struct GeoResult {
  double value_bits = 0.0;
  ProductState witness;
  double overlap = 0.0;
  int iterations = 0;
  int restarts_used = 0;
  bool converged = false;
  bool monotone = true;  // no sweep of any run decreased the overlap
};

GeoResult geometric_measure_pure(const PureState& psi, const GeoOptions& opts = {});

// G(rho) = -log2 max_Φ ⟨Φ|rho|Φ⟩ for a trace-normalized PSD operator.
GeoResult geometric_G_mixed(const DensityOp& rho, const GeoOptions& opts = {});

// Optimizes over φ^{⊗n} only; psi must lie in the symmetric subspace.
GeoResult symmetric_restricted_measure(const PureState& psi, const GeoOptions& opts = {});

// Pairwise Takagi symmetrization of an optimal product state of a symmetric
// state. Returns a product with all locals equal and at least the input
// overlap, or nullopt if the sweeps did not make the locals coincide.
std::optional<ProductState> symmetrize_witness(const PureState& psi, const ProductState& witness,
                                               double tol = 1e-9);

// Alternating ascent of ⟨Φ|rho|Φ⟩ from a given product state (one run).
GeoResult refine_mixed(const DensityOp& rho, const ProductState& start, const GeoOptions& opts = {});

// geometric_measure_pure, but for permutation-symmetric states the reported
// witness is symmetric (φ^{⊗n}) whenever that does not lose overlap.
GeoResult geometric_measure_best(const PureState& psi, const GeoOptions& opts = {});

double dicke_closed_form(int n, const std::vector<int>& kvec);
double antisym_closed_form(int n);

// Number of optimizer sweeps, process-wide, that lowered the overlap.
std::size_t ascent_violations();

bool in_symmetric_subspace(const PureState& psi, double tol = 1e-8);

}  // namespace entcert
