#include "entcert/symmetry.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <map>
#include <numeric>

namespace entcert {

namespace {

// Phase-insensitive key: each local is divided by the phase of its first
// sizeable entry and rounded onto a 1e-7 grid.
std::vector<long long> canonical_key(const LocalUnitary& u) {
  std::vector<long long> key;
  for (const Matrix& m : u) {
    Complex ref{1.0, 0.0};
    for (Eigen::Index k = 0; k < m.size(); ++k)
      if (std::abs(m.data()[k]) > 1e-3) {
        ref = std::abs(m.data()[k]) / m.data()[k];
        break;
      }
    for (Eigen::Index k = 0; k < m.size(); ++k) {
      const Complex z = m.data()[k] * ref;
      key.push_back(std::llround(z.real() * 1e7));
      key.push_back(std::llround(z.imag() * 1e7));
    }
  }
  return key;
}

bool equal_up_to_phase(const LocalUnitary& a, const LocalUnitary& b, double tol) {
  for (std::size_t i = 0; i < a.size(); ++i) {
    const Complex overlap = (a[i].adjoint() * b[i]).trace();
    const double d = static_cast<double>(a[i].rows());
    const Complex phase = std::abs(overlap) > 0 ? overlap / std::abs(overlap) : Complex{1.0, 0.0};
    if ((a[i] * phase - b[i]).norm() > tol * std::sqrt(d)) return false;
  }
  return true;
}

LocalUnitary multiply(const LocalUnitary& a, const LocalUnitary& b) {
  LocalUnitary out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
  return out;
}

class ElementIndex {
 public:
  explicit ElementIndex(const std::vector<LocalUnitary>* elements) : elements_(elements) {
    for (std::size_t k = 0; k < elements_->size(); ++k) keys_.emplace(canonical_key((*elements_)[k]), k);
  }

  void add(std::size_t k) { keys_.emplace(canonical_key((*elements_)[k]), k); }

  bool contains(const LocalUnitary& u, double tol) const {
    auto it = keys_.find(canonical_key(u));
    if (it != keys_.end() && equal_up_to_phase((*elements_)[it->second], u, tol)) return true;
    // Rounding can split a key at a grid boundary; fall back to a scan.
    for (const auto& e : *elements_)
      if (equal_up_to_phase(e, u, tol)) return true;
    return false;
  }

 private:
  const std::vector<LocalUnitary>* elements_;
  std::map<std::vector<long long>, std::size_t> keys_;
};

void validate_element(const Dims& dims, const LocalUnitary& u) {
  require(u.size() == dims.size(), "twirl: element needs one local unitary per party");
  for (std::size_t i = 0; i < dims.size(); ++i) {
    require(u[i].rows() == dims[i] && u[i].cols() == dims[i], "twirl: local unitary has wrong size");
    require((u[i].adjoint() * u[i] - Matrix::Identity(dims[i], dims[i])).norm() <= 1e-10,
            "twirl: local operator is not unitary");
  }
}

// Deterministic pairwise tree reduction of term(0) + … + term(count-1).
template <typename Term>
Matrix pairwise_sum(std::size_t lo, std::size_t hi, const Term& term) {
  if (hi - lo == 1) return term(lo);
  const std::size_t mid = lo + (hi - lo) / 2;
  return pairwise_sum(lo, mid, term) + pairwise_sum(mid, hi, term);
}

Matrix conjugate_pauli(const Matrix& rho, const PauliString& p) {
  const int n = p.qubits();
  const std::size_t dim = std::size_t{1} << n;
  std::size_t xmask = 0, zmask = 0;
  for (int q = 0; q < n; ++q) {
    if (p.x[q]) xmask |= std::size_t{1} << (n - 1 - q);
    if (p.z[q]) zmask |= std::size_t{1} << (n - 1 - q);
  }
  // G|b⟩ = s(b)|b⊕x⟩ with s(b) = ±1 up to a global phase that cancels.
  Eigen::VectorXd sign(dim);
  for (std::size_t b = 0; b < dim; ++b) sign(b) = (std::popcount(b & zmask) % 2) ? -1.0 : 1.0;
  Matrix out(dim, dim);
  for (std::size_t c = 0; c < dim; ++c)
    for (std::size_t r = 0; r < dim; ++r) out(r ^ xmask, c ^ xmask) = sign(r) * sign(c) * rho(r, c);
  return out;
}

}  // namespace

TwirlChannel TwirlChannel::finite_group(Dims dims, std::vector<LocalUnitary> elements, std::string label) {
  require(!elements.empty(), "finite_group: empty element list");
  require(elements.size() <= kMaxGroupOrder, "finite_group: group order exceeds cap");
  for (const auto& e : elements) validate_element(dims, e);
  const ElementIndex index(&elements);
  for (const auto& a : elements)
    for (const auto& b : elements)
      require(index.contains(multiply(a, b), 1e-10), "finite_group: element list is not closed");
  return TwirlChannel(std::move(dims), FiniteGroup{std::move(elements)}, std::move(label));
}

std::vector<LocalUnitary> group_closure(const Dims& dims, const std::vector<LocalUnitary>& generators,
                                        std::size_t cap) {
  LocalUnitary identity;
  for (int d : dims) identity.push_back(Matrix::Identity(d, d));
  for (const auto& g : generators) validate_element(dims, g);
  std::vector<LocalUnitary> elements{identity};
  ElementIndex index(&elements);
  for (std::size_t k = 0; k < elements.size(); ++k) {
    for (const auto& g : generators) {
      LocalUnitary next = multiply(elements[k], g);
      if (index.contains(next, 1e-9)) continue;
      elements.push_back(std::move(next));
      index.add(elements.size() - 1);
      require(elements.size() <= cap, "group closure: group order exceeds cap");
    }
  }
  return elements;
}

TwirlChannel TwirlChannel::generated_group(Dims dims, const std::vector<LocalUnitary>& generators,
                                           std::string label) {
  auto elements = group_closure(dims, generators, kMaxGroupOrder);
  return TwirlChannel(std::move(dims), FiniteGroup{std::move(elements)}, std::move(label));
}

TwirlChannel TwirlChannel::stabilizer(const StabilizerGroup& group) {
  require(group.qubits() <= 16, "stabilizer twirl: group order exceeds cap");
  return TwirlChannel(Dims(group.qubits(), 2), Stabilizer{group, group.elements()}, "stabilizer");
}

TwirlChannel TwirlChannel::type_projection(int n, int d) {
  TypeIndex t = type_index(n, d);
  return TwirlChannel(Dims(n, d), TypeProjection{n, d, std::move(t.class_of)}, "type-projection");
}

TwirlChannel TwirlChannel::composite(std::vector<TwirlChannel> parts, std::string label) {
  require(!parts.empty(), "composite: no parts");
  const Dims dims = parts.front().dims();
  for (const auto& p : parts) require(p.dims() == dims, "composite: parts act on different spaces");
  return TwirlChannel(dims, Composite{std::move(parts)}, std::move(label));
}

TwirlChannel TwirlChannel::identity(Dims dims) {
  LocalUnitary id;
  for (int d : dims) id.push_back(Matrix::Identity(d, d));
  return TwirlChannel(std::move(dims), FiniteGroup{{id}}, "identity");
}

Matrix TwirlChannel::apply(const Matrix& rho) const {
  const std::size_t dim = total_dim(dims_);
  require(rho.rows() == rho.cols() && static_cast<std::size_t>(rho.rows()) == dim,
          "apply_twirl: operator does not match channel dimensions");
  return std::visit(
      [&](const auto& k) -> Matrix {
        using K = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<K, FiniteGroup>) {
          const auto& els = k.elements;
          return pairwise_sum(0, els.size(), [&](std::size_t g) { return conjugate_by_locals(rho, dims_, els[g]); }) /
                 static_cast<double>(els.size());
        } else if constexpr (std::is_same_v<K, Stabilizer>) {
          const auto& els = k.elements;
          return pairwise_sum(0, els.size(), [&](std::size_t g) { return conjugate_pauli(rho, els[g]); }) /
                 static_cast<double>(els.size());
        } else if constexpr (std::is_same_v<K, TypeProjection>) {
          Matrix out = rho;
          for (Eigen::Index c = 0; c < out.cols(); ++c)
            for (Eigen::Index r = 0; r < out.rows(); ++r)
              if (k.class_of[r] != k.class_of[c]) out(r, c) = Complex{0.0, 0.0};
          return out;
        } else {
          Matrix out = rho;
          for (const auto& part : k.parts) out = part.apply(out);
          return out;
        }
      },
      kind_);
}

DensityOp TwirlChannel::apply(const DensityOp& rho) const {
  require(rho.dims() == dims_, "apply_twirl: dims mismatch");
  Matrix out = apply(rho.matrix());
  out = (0.5 * (out + out.adjoint())).eval();
  return DensityOp(dims_, std::move(out));
}

Matrix apply_twirl(const TwirlChannel& channel, const Matrix& rho) { return channel.apply(rho); }

bool invariance_check(const TwirlChannel& channel, const Matrix& rho, double tol) {
  return (channel.apply(rho) - rho).norm() <= tol * rho.norm();
}

TwirlChannel dicke_channel(int n, int d) { return TwirlChannel::type_projection(n, d); }

TwirlChannel antisymmetric_channel(int n, int d, int offset) {
  require(n >= 1 && n <= d, "antisymmetric_channel: need 1 <= n <= d");
  require(offset >= 0 && offset + n <= d, "antisymmetric_channel: offset out of range");
  const Dims dims(n, d);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::vector<LocalUnitary> elements;
  do {
    Matrix u = Matrix::Identity(d, d);
    for (int a = 0; a < n; ++a) {
      u.col(offset + a).setZero();
      u(offset + perm[a], offset + a) = 1.0;
    }
    elements.push_back(LocalUnitary(n, u));
  } while (std::next_permutation(perm.begin(), perm.end()));
  return TwirlChannel::composite(
      {TwirlChannel::type_projection(n, d), TwirlChannel::finite_group(dims, std::move(elements), "level-permutations")},
      "antisymmetric");
}

TwirlChannel clifford_tensor_channel(int n) {
  require(n >= 1, "clifford_tensor_channel: n must be positive");
  const double s = 1.0 / std::sqrt(2.0);
  Matrix h(2, 2);
  h << s, s, s, -s;
  Matrix ph(2, 2);
  ph << 1, 0, 0, Complex(0, 1);
  return TwirlChannel::generated_group(Dims(n, 2), {LocalUnitary(n, h), LocalUnitary(n, ph)}, "clifford-tensor");
}

// ---------------------------------------------------------------------------

Target Target::from_pure(std::string id, const PureState& psi) {
  return Target{std::move(id), psi.dims(), psi.projector(), 1.0, psi};
}

Target Target::from_projector(std::string id, const DensityOp& p) {
  const Matrix& m = p.matrix();
  require((m * m - m).norm() <= 1e-9 * std::max(1.0, m.norm()), "Target: operator is not a projector");
  return Target{std::move(id), p.dims(), m, p.trace(), std::nullopt};
}

const char* to_string(Verdict v) { return v == Verdict::Certified ? "Certified" : "NotCertified"; }

Matrix closest_separable_candidate(const Target& target, const TwirlChannel& channel, const GeoResult& geo) {
  require(channel.dims() == target.dims, "closest_separable_candidate: channel dims mismatch");
  require(geo.witness.dims() == target.dims, "closest_separable_candidate: witness dims mismatch");
  if (!invariance_check(channel, target.normalized()))
    fail(ErrorKind::NotInvariant, "state '" + target.id + "' is not invariant under channel '" + channel.label() + "'");
  const Vector phi = geo.witness.vector();
  Matrix omega = channel.apply(Matrix(phi * phi.adjoint()));
  return (0.5 * (omega + omega.adjoint())).eval();
}

EqualityCertificate certify_equality(const Target& target, const TwirlChannel& channel, const GeoResult& geo,
                                     double psd_tol) {
  const Matrix omega = closest_separable_candidate(target, channel, geo);
  const double weight = geo.witness.expectation(target.projector);  // ⟨Φ0|P|Φ0⟩
  const Matrix residual = omega - (weight / target.trace) * target.projector;
  const PsdCheck res = psd_check(residual, psd_tol);
  const PsdCheck cand = psd_check(omega, psd_tol);
  const bool candidate_ok = cand.ok && std::abs(omega.trace().real() - 1.0) <= 1e-9;

  EqualityCertificate cert{
      .state_id = target.id,
      .eg_bits = geo.value_bits - std::log2(target.trace),
      .candidate = omega,
      .residual_min_eig = res.min_eig,
      .psd_ok = res.ok,
      .lr_upper_bits = weight > 0.0 ? -std::log2(weight) : std::numeric_limits<double>::infinity(),
      .invariant = true,
      .converged = geo.converged,
      .verdict = Verdict::NotCertified,
  };
  if (res.ok && candidate_ok && geo.converged && weight > 0.0) cert.verdict = Verdict::Certified;
  return cert;
}

}  // namespace entcert
