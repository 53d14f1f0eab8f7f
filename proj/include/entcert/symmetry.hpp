#pragma once

#include <memory>
#include <string>
#include <variant>

#include "entcert/geometric.hpp"

namespace entcert {

// A tensor product of local unitaries, one per party.
using LocalUnitary = std::vector<Matrix>;

/// Group-averaging super-operator ρ ↦ ∫ π(g) ρ π(g)^† dg over a group of
/// local unitaries.
///
/// Four realizations are supported:
///  - finite group: explicit list of elements, closure checked on construction
///    (up to global phases, which do not affect the average);
///  - stabilizer twirl: average over the 2^n elements of a stabilizer group;
///  - type projection: the exact average over the local phase torus
///    diag(e^{iθ_0}, …, e^{iθ_{d-1}})^{⊗n}, i.e. Σ_k⃗ P_k⃗ ρ P_k⃗ over type classes;
///  - composite: sequential application of commuting twirls, which is the
///    twirl over the group they generate.
class TwirlChannel {
 public:
  struct FiniteGroup {
    std::vector<LocalUnitary> elements;
  };
  struct Stabilizer {
    StabilizerGroup group;
    std::vector<PauliString> elements;
  };
  struct TypeProjection {
    int n;
    int d;
    std::vector<int> class_of;
  };
  struct Composite {
    std::vector<TwirlChannel> parts;
  };
  using Kind = std::variant<FiniteGroup, Stabilizer, TypeProjection, Composite>;

  static constexpr std::size_t kMaxGroupOrder = std::size_t{1} << 16;

  static TwirlChannel finite_group(Dims dims, std::vector<LocalUnitary> elements, std::string label = "finite");
  // Closure of `generators` (identity included) under multiplication.
  static TwirlChannel generated_group(Dims dims, const std::vector<LocalUnitary>& generators,
                                      std::string label = "generated");
  static TwirlChannel stabilizer(const StabilizerGroup& group);
  static TwirlChannel type_projection(int n, int d);
  static TwirlChannel composite(std::vector<TwirlChannel> parts, std::string label = "composite");
  static TwirlChannel identity(Dims dims);

  const Dims& dims() const noexcept { return dims_; }
  const Kind& kind() const noexcept { return kind_; }
  const std::string& label() const noexcept { return label_; }

  Matrix apply(const Matrix& rho) const;
  DensityOp apply(const DensityOp& rho) const;

 private:
  TwirlChannel(Dims dims, Kind kind, std::string label)
      : dims_(std::move(dims)), kind_(std::move(kind)), label_(std::move(label)) {}

  Dims dims_;
  Kind kind_;
  std::string label_;
};

// Elements of the group generated by `generators`, identity first, in
// breadth-first order. Elements equal up to a global phase are merged.
std::vector<LocalUnitary> group_closure(const Dims& dims, const std::vector<LocalUnitary>& generators,
                                        std::size_t cap = TwirlChannel::kMaxGroupOrder);

// Channel that certifies symmetric basis states: the local phase torus.
TwirlChannel dicke_channel(int n, int d);
// Phase torus plus permutations of the `n` occupied levels, as U^{⊗n}.
TwirlChannel antisymmetric_channel(int n, int d, int offset = 0);
// U^{⊗n} over the 24-element single-qubit Clifford group (a unitary 3-design).
TwirlChannel clifford_tensor_channel(int n);

Matrix apply_twirl(const TwirlChannel& channel, const Matrix& rho);

// ‖twirl(ρ) − ρ‖_F ≤ tol·‖ρ‖_F
bool invariance_check(const TwirlChannel& channel, const Matrix& rho, double tol = 1e-9);

/// Pure state or projector whose measures are being certified. A pure state
/// is the rank-one projector with tr P = 1.
struct Target {
  std::string id;
  Dims dims;
  Matrix projector;  // P, unnormalized
  double trace;      // tr P
  std::optional<PureState> pure;

  static Target from_pure(std::string id, const PureState& psi);
  static Target from_projector(std::string id, const DensityOp& p);

  Matrix normalized() const { return projector / trace; }
  DensityOp state() const { return DensityOp(dims, normalized()); }
};

enum class Verdict { Certified, NotCertified };
const char* to_string(Verdict v);

struct EqualityCertificate {
  std::string state_id;
  double eg_bits;         // G − log2 tr P (E_g for pure states)
  Matrix candidate;       // twirled closest product state ω'
  double residual_min_eig;
  bool psd_ok;
  double lr_upper_bits;   // −log2 of the noise weight certified by the residual
  bool invariant;
  bool converged;
  Verdict verdict;
};

EqualityCertificate certify_equality(const Target& target, const TwirlChannel& channel, const GeoResult& geo,
                                     double psd_tol = kPsdTol);

Matrix closest_separable_candidate(const Target& target, const TwirlChannel& channel, const GeoResult& geo);

}  // namespace entcert
