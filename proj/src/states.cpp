#include "entcert/states.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <numeric>

namespace entcert {

namespace {

constexpr double kNormTol = 1e-10;

bool same_local_dims(const Dims& dims) {
  return std::adjacent_find(dims.begin(), dims.end(), std::not_equal_to<>()) == dims.end();
}

// Sign of the permutation taking 0..n-1 to `p`; 0 if p has repeats.
int permutation_sign(std::span<const int> p) {
  const std::size_t n = p.size();
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (p[i] == p[j]) return 0;
  int inversions = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (p[i] > p[j]) ++inversions;
  return inversions % 2 == 0 ? 1 : -1;
}

void fix_global_phase(Vector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    if (std::abs(v(i)) > 1e-12) {
      v *= std::conj(v(i)) / std::abs(v(i));
      return;
    }
  }
}

Complex i_pow(int k) {
  switch (((k % 4) + 4) % 4) {
    case 0: return {1, 0};
    case 1: return {0, 1};
    case 2: return {-1, 0};
    default: return {0, -1};
  }
}

}  // namespace

std::size_t basis_index(std::span<const int> digits, const Dims& dims) {
  require(digits.size() == dims.size(), "basis_index: digit count mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < dims.size(); ++i) {
    require(digits[i] >= 0 && digits[i] < dims[i], "basis_index: digit out of range");
    idx = idx * dims[i] + digits[i];
  }
  return idx;
}

std::vector<int> basis_digits(std::size_t index, const Dims& dims) {
  std::vector<int> digits(dims.size());
  for (std::size_t i = dims.size(); i-- > 0;) {
    digits[i] = static_cast<int>(index % dims[i]);
    index /= dims[i];
  }
  return digits;
}

// ---------------------------------------------------------------------------

PureState::PureState(Dims dims, Vector amplitudes) : dims_(std::move(dims)), amps_(std::move(amplitudes)) {
  check_dimension(static_cast<std::size_t>(amps_.size()));
  require(static_cast<std::size_t>(amps_.size()) == total_dim(dims_),
          "PureState: amplitude count does not match dims");
  require(amps_.allFinite(), "PureState: non-finite amplitude");
  require(std::abs(amps_.norm() - 1.0) <= kNormTol, "PureState: amplitudes are not normalized");
}

ProductState::ProductState(std::vector<Vector> locals) : locals_(std::move(locals)) {
  require(!locals_.empty(), "ProductState: no parties");
  for (const Vector& v : locals_) {
    require(v.size() >= 1 && v.allFinite(), "ProductState: bad local vector");
    require(std::abs(v.norm() - 1.0) <= kNormTol, "ProductState: local vector is not unit-norm");
  }
}

Dims ProductState::dims() const {
  Dims d;
  d.reserve(locals_.size());
  for (const Vector& v : locals_) d.push_back(static_cast<int>(v.size()));
  return d;
}

Vector ProductState::vector() const {
  Vector acc = locals_.front();
  for (std::size_t i = 1; i < locals_.size(); ++i) {
    const Vector& b = locals_[i];
    Vector next(acc.size() * b.size());
    for (Eigen::Index a = 0; a < acc.size(); ++a) next.segment(a * b.size(), b.size()) = acc(a) * b;
    acc = std::move(next);
  }
  return acc;
}

Complex ProductState::inner(const PureState& psi) const {
  require(psi.dims() == dims(), "ProductState::inner: dims mismatch");
  return vector().dot(psi.amplitudes());
}

double ProductState::expectation(const Matrix& op) const {
  const Vector v = vector();
  require(op.rows() == v.size(), "ProductState::expectation: dims mismatch");
  return v.dot(op * v).real();
}

ProductState product_state(std::vector<Vector> locals) { return ProductState(std::move(locals)); }

DensityOp::DensityOp(Dims dims, Matrix matrix) : dims_(std::move(dims)), m_(std::move(matrix)) {
  require(static_cast<std::size_t>(m_.rows()) == total_dim(dims_) && m_.rows() == m_.cols(),
          "DensityOp: matrix dimension does not match dims");
  require(is_hermitian(m_), "DensityOp: matrix is not Hermitian");
  trace_ = m_.trace().real();
  require(trace_ > 0.0, "DensityOp: trace must be positive");
  const PsdCheck psd = psd_check(m_, kPsdTol);
  if (!psd.ok) fail(ErrorKind::NotPSD, "DensityOp: min eigenvalue " + std::to_string(psd.min_eig));
}

DensityOp DensityOp::from_pure(const PureState& psi) { return DensityOp(psi.dims(), psi.projector()); }

// ---------------------------------------------------------------------------

PauliString PauliString::operator*(const PauliString& rhs) const {
  require(qubits() == rhs.qubits(), "PauliString: qubit count mismatch");
  PauliString out;
  out.x.resize(x.size());
  out.z.resize(z.size());
  int sign_flips = 0;
  // (X^x1 Z^z1)(X^x2 Z^z2) = (-1)^{z1·x2} X^{x1+x2} Z^{z1+z2}
  for (std::size_t q = 0; q < x.size(); ++q) {
    sign_flips += z[q] & rhs.x[q];
    out.x[q] = x[q] ^ rhs.x[q];
    out.z[q] = z[q] ^ rhs.z[q];
  }
  out.phase = (phase + rhs.phase + 2 * sign_flips) % 4;
  return out;
}

bool PauliString::commutes_with(const PauliString& rhs) const {
  int s = 0;
  for (std::size_t q = 0; q < x.size(); ++q) s += (x[q] & rhs.z[q]) + (z[q] & rhs.x[q]);
  return s % 2 == 0;
}

Matrix PauliString::matrix() const {
  const std::size_t dim = std::size_t{1} << x.size();
  Matrix m = Matrix::Zero(dim, dim);
  for (std::size_t b = 0; b < dim; ++b) m.col(b) = apply(Vector::Unit(dim, b));
  return m;
}

Vector PauliString::apply(const Vector& v) const {
  const int n = qubits();
  const std::size_t dim = std::size_t{1} << n;
  require(static_cast<std::size_t>(v.size()) == dim, "PauliString::apply: dimension mismatch");
  std::size_t xmask = 0, zmask = 0;
  for (int q = 0; q < n; ++q) {
    if (x[q]) xmask |= std::size_t{1} << (n - 1 - q);
    if (z[q]) zmask |= std::size_t{1} << (n - 1 - q);
  }
  const Complex global = i_pow(phase);
  Vector out(dim);
  for (std::size_t b = 0; b < dim; ++b) {
    const double zsign = (std::popcount(b & zmask) % 2) ? -1.0 : 1.0;
    out(b ^ xmask) = global * zsign * v(b);
  }
  return out;
}

PauliString StabilizerGenerator::pauli() const {
  PauliString p{x, z, 0};
  int xz = 0;
  for (std::size_t q = 0; q < x.size(); ++q) xz += x[q] & z[q];
  p.phase = ((sign < 0 ? 2 : 0) + xz) % 4;
  return p;
}

StabilizerGroup::StabilizerGroup(std::vector<StabilizerGenerator> generators) : gens_(std::move(generators)) {
  n_ = static_cast<int>(gens_.size());
  require(n_ >= 1, "StabilizerGroup: no generators");
  require(n_ <= 20, "StabilizerGroup: too many qubits");
  for (const auto& g : gens_) {
    require(static_cast<int>(g.x.size()) == n_ && static_cast<int>(g.z.size()) == n_,
            "StabilizerGroup: need n generators on n qubits");
    require(g.sign == 1 || g.sign == -1, "StabilizerGroup: sign must be ±1");
    for (int q = 0; q < n_; ++q) require(g.x[q] <= 1 && g.z[q] <= 1, "StabilizerGroup: bits must be 0/1");
  }
  for (int a = 0; a < n_; ++a)
    for (int b = a + 1; b < n_; ++b)
      require(gens_[a].pauli().commutes_with(gens_[b].pauli()),
              "StabilizerGroup: generators " + std::to_string(a) + " and " + std::to_string(b) +
                  " anticommute");

  // Rank over GF(2) of the n x 2n symplectic rows.
  std::vector<std::vector<std::uint8_t>> rows;
  for (const auto& g : gens_) {
    std::vector<std::uint8_t> r(g.x);
    r.insert(r.end(), g.z.begin(), g.z.end());
    rows.push_back(std::move(r));
  }
  int rank = 0;
  for (int col = 0; col < 2 * n_ && rank < n_; ++col) {
    int pivot = -1;
    for (int r = rank; r < n_; ++r)
      if (rows[r][col]) { pivot = r; break; }
    if (pivot < 0) continue;
    std::swap(rows[rank], rows[pivot]);
    for (int r = 0; r < n_; ++r)
      if (r != rank && rows[r][col])
        for (int c = 0; c < 2 * n_; ++c) rows[r][c] ^= rows[rank][c];
    ++rank;
  }
  require(rank == n_, "StabilizerGroup: generators are not independent");
}

StabilizerGroup StabilizerGroup::from_paulis(const std::vector<std::string>& paulis) {
  std::vector<StabilizerGenerator> gens;
  for (std::string s : paulis) {
    StabilizerGenerator g;
    if (!s.empty() && (s[0] == '+' || s[0] == '-')) {
      g.sign = s[0] == '-' ? -1 : 1;
      s.erase(0, 1);
    }
    for (char c : s) {
      switch (c) {
        case 'I': g.x.push_back(0); g.z.push_back(0); break;
        case 'X': g.x.push_back(1); g.z.push_back(0); break;
        case 'Y': g.x.push_back(1); g.z.push_back(1); break;
        case 'Z': g.x.push_back(0); g.z.push_back(1); break;
        default: fail(ErrorKind::InvalidInput, std::string("bad Pauli letter '") + c + "'");
      }
    }
    gens.push_back(std::move(g));
  }
  return StabilizerGroup(std::move(gens));
}

StabilizerGroup StabilizerGroup::with_sign_flips(const std::vector<int>& flips) const {
  require(static_cast<int>(flips.size()) == n_, "with_sign_flips: one flag per generator");
  auto gens = gens_;
  for (int i = 0; i < n_; ++i)
    if (flips[i]) gens[i].sign = -gens[i].sign;
  return StabilizerGroup(std::move(gens));
}

std::vector<PauliString> StabilizerGroup::elements() const {
  PauliString identity{std::vector<std::uint8_t>(n_, 0), std::vector<std::uint8_t>(n_, 0), 0};
  std::vector<PauliString> out{identity};
  for (const auto& g : gens_) {
    const PauliString p = g.pauli();
    const std::size_t m = out.size();
    for (std::size_t k = 0; k < m; ++k) out.push_back(out[k] * p);
  }
  return out;
}

StabilizerGroup ghz_stabilizers(int n) {
  require(n >= 2, "GHZ needs at least 2 qubits");
  std::vector<std::string> p{std::string(n, 'X')};
  for (int i = 0; i + 1 < n; ++i) {
    std::string s(n, 'I');
    s[i] = s[i + 1] = 'Z';
    p.push_back(s);
  }
  return StabilizerGroup::from_paulis(p);
}

StabilizerGroup linear_cluster_stabilizers(int n) {
  require(n >= 2, "cluster state needs at least 2 qubits");
  std::vector<std::string> p;
  for (int i = 0; i < n; ++i) {
    std::string s(n, 'I');
    s[i] = 'X';
    if (i > 0) s[i - 1] = 'Z';
    if (i + 1 < n) s[i + 1] = 'Z';
    p.push_back(s);
  }
  return StabilizerGroup::from_paulis(p);
}

// ---------------------------------------------------------------------------

TypeIndex type_index(int n, int d) {
  require(n >= 1 && d >= 1, "type_index: need n >= 1 and d >= 1");
  const Dims dims(n, d);
  const std::size_t dim = total_dim(dims);
  TypeIndex t;
  t.n = n;
  t.d = d;
  t.class_of.resize(dim);
  std::map<std::vector<int>, int> ids;
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::vector<int> k(d, 0);
    for (int digit : basis_digits(idx, dims)) ++k[digit];
    t.classes[k].push_back(idx);
    auto [it, inserted] = ids.emplace(k, static_cast<int>(ids.size()));
    if (inserted) t.class_keys.push_back(k);
    t.class_of[idx] = it->second;
  }
  return t;
}

double multinomial(int n, std::span<const int> kvec) {
  double lg = std::lgamma(n + 1.0);
  for (int k : kvec) lg -= std::lgamma(k + 1.0);
  return std::round(std::exp(lg));
}

namespace {

void validate_kvec(int n, const std::vector<int>& kvec) {
  require(n >= 1, "dicke: n must be positive");
  require(!kvec.empty(), "dicke: empty occupation vector");
  int sum = 0;
  for (int k : kvec) {
    require(k >= 0, "dicke: negative occupation");
    sum += k;
  }
  require(sum == n, "dicke: occupations must sum to n");
}

}  // namespace

PureState dicke(int n, const std::vector<int>& kvec) {
  validate_kvec(n, kvec);
  const int d = static_cast<int>(kvec.size());
  const Dims dims(n, d);
  const std::size_t dim = total_dim(dims);
  check_dimension(dim);
  const double amp = 1.0 / std::sqrt(multinomial(n, kvec));
  Vector v = Vector::Zero(dim);
  std::vector<int> k(d);
  for (std::size_t idx = 0; idx < dim; ++idx) {
    std::fill(k.begin(), k.end(), 0);
    for (int digit : basis_digits(idx, dims)) ++k[digit];
    if (k == kvec) v(idx) = amp;
  }
  return PureState(dims, v);
}

ProductState closest_product_dicke(int n, const std::vector<int>& kvec) {
  validate_kvec(n, kvec);
  Vector local(kvec.size());
  for (std::size_t l = 0; l < kvec.size(); ++l) local(l) = std::sqrt(static_cast<double>(kvec[l]) / n);
  return ProductState(std::vector<Vector>(n, local));
}

PureState antisymmetric_basis(int n, int d, int offset) {
  require(n >= 1, "antisymmetric_basis: n must be positive");
  require(n <= d, "antisymmetric_basis: need n <= d");
  require(offset >= 0 && offset + n <= d, "antisymmetric_basis: offset out of range");
  const Dims dims(n, d);
  const std::size_t dim = total_dim(dims);
  check_dimension(dim);
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  const double amp = 1.0 / std::sqrt(std::tgamma(n + 1.0));
  Vector v = Vector::Zero(dim);
  std::vector<int> digits(n);
  do {
    for (int i = 0; i < n; ++i) digits[i] = perm[i] + offset;
    v(basis_index(digits, dims)) = amp * permutation_sign(perm);
  } while (std::next_permutation(perm.begin(), perm.end()));
  return PureState(dims, v);
}

PureState stabilizer_state(const StabilizerGroup& group) {
  const int n = group.qubits();
  const std::size_t dim = std::size_t{1} << n;
  check_dimension(dim);
  std::vector<PauliString> gens;
  for (const auto& g : group.generators()) gens.push_back(g.pauli());

  // Π_i (I + G_i)/2 has rank one; project basis vectors until one survives.
  for (std::size_t b = 0; b < dim; ++b) {
    Vector v = Vector::Unit(dim, b);
    for (const auto& g : gens) v = 0.5 * (v + g.apply(v));
    const double norm = v.norm();
    if (norm * norm < 0.5 / static_cast<double>(dim)) continue;
    v /= norm;
    for (const auto& g : gens)
      if ((g.apply(v) - v).norm() > 1e-10)
        fail(ErrorKind::InternalError, "stabilizer_state: projected vector is not stabilized");
    fix_global_phase(v);
    return PureState(Dims(n, 2), v);
  }
  fail(ErrorKind::InternalError, "stabilizer_state: stabilizer projector has rank zero");
}

std::vector<LabeledState> stabilizer_eigenbasis(const StabilizerGroup& group) {
  const int n = group.qubits();
  std::vector<LabeledState> out;
  for (std::size_t label = 0; label < (std::size_t{1} << n); ++label) {
    std::vector<int> g(n);
    for (int i = 0; i < n; ++i) g[i] = static_cast<int>((label >> (n - 1 - i)) & 1u);
    out.push_back(LabeledState{g, stabilizer_state(group.with_sign_flips(g))});
  }
  return out;
}

DensityOp symmetric_projector(int n, int d) {
  require(n >= 1 && d >= 1, "symmetric_projector: need n, d >= 1");
  const Dims dims(n, d);
  const std::size_t dim = total_dim(dims);
  check_dimension(dim);
  Matrix p = Matrix::Zero(dim, dim);
  for (const auto& [k, indices] : type_index(n, d).classes) {
    const double w = 1.0 / static_cast<double>(indices.size());
    for (std::size_t r : indices)
      for (std::size_t c : indices) p(r, c) = w;
  }
  return DensityOp(dims, p);
}

DensityOp antisymmetric_projector(int n, int d) {
  require(n >= 1, "antisymmetric_projector: n must be positive");
  require(n <= d, "antisymmetric_projector: need n <= d");
  const Dims dims(n, d);
  const std::size_t dim = total_dim(dims);
  check_dimension(dim);
  Matrix p = Matrix::Zero(dim, dim);
  const double norm = 1.0 / std::tgamma(n + 1.0);
  // One wedge state per increasing n-subset of levels.
  std::vector<int> mask(d, 0);
  std::fill(mask.begin(), mask.begin() + n, 1);
  std::vector<int> levels(n), perm(n), digits(n);
  do {
    for (int l = 0, j = 0; l < d; ++l)
      if (mask[l]) levels[j++] = l;
    std::vector<std::pair<std::size_t, int>> support;
    std::iota(perm.begin(), perm.end(), 0);
    do {
      for (int i = 0; i < n; ++i) digits[i] = levels[perm[i]];
      support.emplace_back(basis_index(digits, dims), permutation_sign(perm));
    } while (std::next_permutation(perm.begin(), perm.end()));
    for (auto [r, sr] : support)
      for (auto [c, sc] : support) p(r, c) += norm * sr * sc;
  } while (std::prev_permutation(mask.begin(), mask.end()));
  return DensityOp(dims, p);
}

Vector permute_parties(const Vector& amps, const Dims& dims, const std::vector<int>& perm) {
  const std::size_t dim = total_dim(dims);
  require(static_cast<std::size_t>(amps.size()) == dim, "permute_parties: size mismatch");
  require(perm.size() == dims.size(), "permute_parties: permutation length mismatch");
  Dims out_dims(dims.size());
  for (std::size_t i = 0; i < perm.size(); ++i) out_dims[i] = dims.at(perm[i]);
  Vector out(dim);
  std::vector<int> od(dims.size());
  for (std::size_t idx = 0; idx < dim; ++idx) {
    const std::vector<int> digits = basis_digits(idx, dims);
    for (std::size_t i = 0; i < perm.size(); ++i) od[i] = digits[perm[i]];
    out(basis_index(od, out_dims)) = amps(idx);
  }
  return out;
}

Vector symmetrize(const Vector& amps, const Dims& dims) {
  require(same_local_dims(dims), "symmetrize: parties must share a local dimension");
  std::vector<int> perm(dims.size());
  std::iota(perm.begin(), perm.end(), 0);
  Vector acc = Vector::Zero(amps.size());
  double count = 0;
  do {
    acc += permute_parties(amps, dims, perm);
    count += 1;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return acc / count;
}

}  // namespace entcert
