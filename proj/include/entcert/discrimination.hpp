#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entcert/symmetry.hpp"

namespace entcert {

struct EnsembleMember {
  double prior;
  Matrix rho;  // unit trace
  std::optional<PureState> pure;
  std::string label;
};

/// Labeled states with priors; duplicate states are kept as distinct labels.
class Ensemble {
 public:
  Ensemble(Dims dims, std::vector<EnsembleMember> members);

  const Dims& dims() const noexcept { return dims_; }
  const std::vector<EnsembleMember>& members() const noexcept { return members_; }
  std::size_t size() const noexcept { return members_.size(); }
  std::size_t total_dim() const noexcept { return dim_; }

 private:
  Dims dims_;
  std::size_t dim_;
  std::vector<EnsembleMember> members_;
};

struct POVM {
  std::vector<Matrix> elements;
  bool locc_projective = false;  // rank-one product projectors, measurable locally

  // ΣM_i = I and M_i ⪰ 0, both within tol.
  void validate(double tol = 1e-9) const;
};

// X on every subset of qubits, ordered by bitmask with party 0 the most
// significant bit, so element k maps |0…0⟩ to |k⟩.
std::vector<LocalUnitary> x_flip_group(int n);
// The single-qubit X on each party.
std::vector<LocalUnitary> x_flip_generators(int n);

// Uniform-prior ensemble {g|ψ⟩} over explicit group elements.
Ensemble orbit_ensemble(const PureState& fiducial, const std::vector<LocalUnitary>& elements);
// Same, over the closure of `generators`; InvalidInput if the orbit exceeds `cap`.
Ensemble orbit_ensemble_generated(const PureState& fiducial, const std::vector<LocalUnitary>& generators,
                                  std::size_t cap = 4096);

std::vector<ProductState> orbit_products(const ProductState& seed, const std::vector<LocalUnitary>& elements);

// M_i = p_i D |ψ_i⟩⟨ψ_i|; throws MeanNotMaximallyMixed unless Σp_iψ_i = I/D
// within `tol` in operator norm.
POVM srm_from_closest_products(const Ensemble& ens, const std::vector<ProductState>& products, double tol = 1e-8);

double success_probability(const Ensemble& ens, const POVM& povm);

// G(ρ_i) for every member.
std::vector<double> member_geometric(const Ensemble& ens, const GeoOptions& opts = {});

// D·max_i p_i 2^{−G_i}
double upper_bound_G(const Ensemble& ens, const std::vector<double>& g_bits);
double upper_bound_G(const Ensemble& ens, const GeoOptions& opts = {});

struct LowerBoundG {
  double sum_form;  // D Σ p_i² ⟨ψ_i|ρ_i|ψ_i⟩
  double min_form;  // D min_i p_i ⟨ψ_i|ρ_i|ψ_i⟩
  double achieved;  // success probability of the square-root measurement
  POVM povm;
};

LowerBoundG lower_bound_G(const Ensemble& ens, const std::vector<ProductState>& products);

struct RobustnessData {
  double t;             // robustness upper bound
  double purity;        // tr ρ²
  double support_size;  // rank of ρ
};

RobustnessData robustness_data(const EnsembleMember& member, double t);

struct LowerBoundR {
  double purity_form;   // D min_i tr ρ_i² p_i/(1 + t_i)
  double support_form;  // D min_i p_i/(|P_i|(1 + t_i))
};

LowerBoundR lower_bound_robustness(const Ensemble& ens, const std::vector<RobustnessData>& data);

}  // namespace entcert
