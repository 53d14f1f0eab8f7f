#pragma once

#include <cstdint>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "entcert/linalg.hpp"

namespace entcert {

// Computational-basis ordering: party 0 is the most significant digit.
std::size_t basis_index(std::span<const int> digits, const Dims& dims);
std::vector<int> basis_digits(std::size_t index, const Dims& dims);

/// Normalized pure state over a multi-party tensor product.
class PureState {
 public:
  PureState(Dims dims, Vector amplitudes);

  const Dims& dims() const noexcept { return dims_; }
  const Vector& amplitudes() const noexcept { return amps_; }
  int parties() const noexcept { return static_cast<int>(dims_.size()); }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(amps_.size()); }

  Matrix projector() const { return amps_ * amps_.adjoint(); }

 private:
  Dims dims_;
  Vector amps_;
};

/// One unit-norm local vector per party.
class ProductState {
 public:
  explicit ProductState(std::vector<Vector> locals);

  const std::vector<Vector>& locals() const noexcept { return locals_; }
  const Vector& local(int party) const { return locals_.at(party); }
  int parties() const noexcept { return static_cast<int>(locals_.size()); }
  Dims dims() const;

  Vector vector() const;  // tensor product amplitudes
  PureState to_pure() const { return PureState(dims(), vector()); }

  // ⟨Φ|ψ⟩ without forming Φ.
  Complex inner(const PureState& psi) const;
  // ⟨Φ|op|Φ⟩
  double expectation(const Matrix& op) const;

 private:
  std::vector<Vector> locals_;
};

ProductState product_state(std::vector<Vector> locals);
inline PureState to_pure(const ProductState& p) { return p.to_pure(); }

/// Hermitian PSD operator with party structure. Projection states are kept
/// unnormalized; `trace()` records tr P.
class DensityOp {
 public:
  DensityOp(Dims dims, Matrix matrix);

  static DensityOp from_pure(const PureState& psi);

  const Dims& dims() const noexcept { return dims_; }
  const Matrix& matrix() const noexcept { return m_; }
  double trace() const noexcept { return trace_; }
  std::size_t dimension() const noexcept { return static_cast<std::size_t>(m_.rows()); }

  Matrix normalized() const { return m_ / trace_; }

 private:
  Dims dims_;
  Matrix m_;
  double trace_;
};

/// Pauli string i^phase · X^x Z^z (per qubit X^x_q Z^z_q). `phase` is mod 4.
struct PauliString {
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> z;
  int phase = 0;

  int qubits() const noexcept { return static_cast<int>(x.size()); }
  PauliString operator*(const PauliString& rhs) const;
  bool commutes_with(const PauliString& rhs) const;
  Matrix matrix() const;
  Vector apply(const Vector& v) const;
};

struct StabilizerGenerator {
  std::vector<std::uint8_t> x;
  std::vector<std::uint8_t> z;
  int sign = 1;  // ±1; the Y-phase i^{x·z} is implied so the operator is Hermitian

  PauliString pauli() const;
};

/// n independent, pairwise-commuting Hermitian Pauli generators on n qubits.
class StabilizerGroup {
 public:
  explicit StabilizerGroup(std::vector<StabilizerGenerator> generators);

  // Generators from strings like "+XZI", "-YY", "ZZ".
  static StabilizerGroup from_paulis(const std::vector<std::string>& paulis);

  int qubits() const noexcept { return n_; }
  const std::vector<StabilizerGenerator>& generators() const noexcept { return gens_; }

  // Same generators with signs multiplied by (-1)^{flips[i]}.
  StabilizerGroup with_sign_flips(const std::vector<int>& flips) const;

  // All 2^n group elements, identity first.
  std::vector<PauliString> elements() const;

 private:
  int n_;
  std::vector<StabilizerGenerator> gens_;
};

StabilizerGroup ghz_stabilizers(int n);
StabilizerGroup linear_cluster_stabilizers(int n);

/// Type classes: k⃗ -> computational indices whose digit counts equal k⃗.
struct TypeIndex {
  int n = 0;
  int d = 0;
  std::map<std::vector<int>, std::vector<std::size_t>> classes;
  std::vector<int> class_of;  // per computational index, dense class id
  std::vector<std::vector<int>> class_keys;
};

TypeIndex type_index(int n, int d);

// C_{n,k⃗} = n! / Π k_j!
double multinomial(int n, std::span<const int> kvec);

PureState dicke(int n, const std::vector<int>& kvec);
ProductState closest_product_dicke(int n, const std::vector<int>& kvec);

// |offset⟩ ∧ |offset+1⟩ ∧ … ∧ |offset+n-1⟩ in (C^d)^{⊗n}.
PureState antisymmetric_basis(int n, int d, int offset = 0);

PureState stabilizer_state(const StabilizerGroup& group);

struct LabeledState {
  std::vector<int> signs;  // g_i: generator i has eigenvalue (-1)^{g_i}
  PureState state;
};

// 2^n states, ordered by the sign vector read as a binary number (g_0 most significant).
std::vector<LabeledState> stabilizer_eigenbasis(const StabilizerGroup& group);

DensityOp symmetric_projector(int n, int d);
DensityOp antisymmetric_projector(int n, int d);

// Amplitudes of psi with parties reordered: output party i is input party perm[i].
Vector permute_parties(const Vector& amps, const Dims& dims, const std::vector<int>& perm);

// (1/n!) Σ_σ P_σ psi for n identical parties.
Vector symmetrize(const Vector& amps, const Dims& dims);

}  // namespace entcert
