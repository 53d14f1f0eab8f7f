#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "entcert/geometric.hpp"

namespace entcert {

/// W = (αI − ρ)/α for a trace-one ρ. With α the largest product-state
/// overlap of ρ this is nonnegative on every separable state.
struct Witness {
  Dims dims;
  Matrix op;
  double alpha;
  Matrix rho;
  std::string source_id;
  bool trivial;  // W ⪰ 0, so it detects nothing
};

// α = 2^{−geo.value_bits}
Witness build_WG(const DensityOp& rho, const GeoResult& geo, std::string source_id = "");
Witness witness_from_alpha(const DensityOp& rho, double alpha, std::string source_id = "");

double witness_expectation(const Witness& w, const Matrix& rho);
double witness_expectation(const Witness& w, const ProductState& sigma);

struct ValiditySample {
  double min_value;
  ProductState worst;
  std::optional<ProductState> violating;  // set when min_value < −1e-7
};

// Minimum of tr(Wσ) over Haar-random product states, then an alternating
// ascent of ⟨σ|ρ|σ⟩ started from the worst sample.
ValiditySample witness_validity_sample(const Witness& w, int samples, std::uint64_t seed);

}  // namespace entcert
