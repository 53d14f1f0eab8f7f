#include "entcert/discrimination.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace entcert {

namespace {

const Matrix& pauli_x() {
  static const Matrix x = (Matrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished();
  return x;
}

Vector apply_locals(const Vector& v, const Dims& dims, const LocalUnitary& u) {
  Matrix m = v;
  for (std::size_t i = 0; i < dims.size(); ++i) m = apply_local_left(m, dims, static_cast<int>(i), u[i]);
  return m.col(0);
}

}  // namespace

Ensemble::Ensemble(Dims dims, std::vector<EnsembleMember> members)
    : dims_(std::move(dims)), dim_(entcert::total_dim(dims_)), members_(std::move(members)) {
  require(!members_.empty(), "Ensemble: no members");
  double total = 0.0;
  for (const auto& m : members_) {
    require(m.prior >= 0.0, "Ensemble: negative prior");
    require(static_cast<std::size_t>(m.rho.rows()) == dim_ && m.rho.cols() == m.rho.rows(),
            "Ensemble: member has wrong dimension");
    require(std::abs(m.rho.trace().real() - 1.0) <= 1e-9, "Ensemble: member trace is not 1");
    require(is_hermitian(m.rho), "Ensemble: member is not Hermitian");
    total += m.prior;
  }
  require(std::abs(total - 1.0) <= 1e-12, "Ensemble: priors do not sum to 1");
}

void POVM::validate(double tol) const {
  require(!elements.empty(), "POVM: no elements");
  Matrix sum = Matrix::Zero(elements[0].rows(), elements[0].cols());
  for (const Matrix& m : elements) {
    require(m.rows() == sum.rows() && m.cols() == sum.cols(), "POVM: element size mismatch");
    if (!psd_check(m, tol).ok) fail(ErrorKind::NotPSD, "POVM: element is not PSD");
    sum += m;
  }
  const double dev = (sum - Matrix::Identity(sum.rows(), sum.cols())).norm();
  if (dev > tol) fail(ErrorKind::InternalError, "POVM: elements do not sum to identity (" + std::to_string(dev) + ")");
}

std::vector<LocalUnitary> x_flip_group(int n) {
  require(n >= 1 && n <= 12, "x_flip_group: n must be in [1, 12]");
  std::vector<LocalUnitary> out;
  for (std::size_t mask = 0; mask < (std::size_t{1} << n); ++mask) {
    LocalUnitary u;
    for (int i = 0; i < n; ++i)
      u.push_back((mask >> (n - 1 - i)) & 1 ? pauli_x() : Matrix::Identity(2, 2));
    out.push_back(std::move(u));
  }
  return out;
}

std::vector<LocalUnitary> x_flip_generators(int n) {
  require(n >= 1, "x_flip_generators: n must be >= 1");
  std::vector<LocalUnitary> out;
  for (int i = 0; i < n; ++i) {
    LocalUnitary u(n, Matrix::Identity(2, 2));
    u[i] = pauli_x();
    out.push_back(std::move(u));
  }
  return out;
}

Ensemble orbit_ensemble(const PureState& fiducial, const std::vector<LocalUnitary>& elements) {
  require(!elements.empty(), "orbit_ensemble: no group elements");
  const double p = 1.0 / static_cast<double>(elements.size());
  std::vector<EnsembleMember> members;
  members.reserve(elements.size());
  for (std::size_t k = 0; k < elements.size(); ++k) {
    require(elements[k].size() == fiducial.dims().size(), "orbit_ensemble: element has wrong party count");
    PureState s(fiducial.dims(), apply_locals(fiducial.amplitudes(), fiducial.dims(), elements[k]));
    members.push_back({p, s.projector(), s, "g" + std::to_string(k)});
  }
  return Ensemble(fiducial.dims(), std::move(members));
}

Ensemble orbit_ensemble_generated(const PureState& fiducial, const std::vector<LocalUnitary>& generators,
                                  std::size_t cap) {
  return orbit_ensemble(fiducial, group_closure(fiducial.dims(), generators, cap));
}

std::vector<ProductState> orbit_products(const ProductState& seed, const std::vector<LocalUnitary>& elements) {
  std::vector<ProductState> out;
  out.reserve(elements.size());
  for (const auto& u : elements) {
    require(u.size() == seed.locals().size(), "orbit_products: element has wrong party count");
    std::vector<Vector> locals;
    for (std::size_t i = 0; i < u.size(); ++i) locals.push_back(u[i] * seed.locals()[i]);
    out.emplace_back(std::move(locals));
  }
  return out;
}

POVM srm_from_closest_products(const Ensemble& ens, const std::vector<ProductState>& products, double tol) {
  require(products.size() == ens.size(), "srm_from_closest_products: one product per member required");
  const auto D = static_cast<double>(ens.total_dim());
  const Eigen::Index dim = static_cast<Eigen::Index>(ens.total_dim());
  Matrix mean = Matrix::Zero(dim, dim);
  std::vector<Vector> vecs;
  for (std::size_t i = 0; i < products.size(); ++i) {
    require(products[i].dims() == ens.dims(), "srm_from_closest_products: product dims mismatch");
    vecs.push_back(products[i].vector());
    mean += ens.members()[i].prior * vecs.back() * vecs.back().adjoint();
  }
  const Spectrum sp = hermitian_eig(mean - Matrix::Identity(dim, dim) / D);
  const double dev = sp.eigenvalues.cwiseAbs().maxCoeff();
  if (dev > tol) throw MeanNotMaximallyMixed(dev);

  POVM povm;
  povm.locc_projective = true;
  for (std::size_t i = 0; i < vecs.size(); ++i) {
    const double w = ens.members()[i].prior * D;
    povm.elements.push_back(w * vecs[i] * vecs[i].adjoint());
    povm.locc_projective = povm.locc_projective && std::abs(w - 1.0) <= 1e-12;
  }
  povm.validate();
  return povm;
}

double success_probability(const Ensemble& ens, const POVM& povm) {
  require(povm.elements.size() == ens.size(), "success_probability: POVM size does not match ensemble");
  double ps = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const auto& m = ens.members()[i];
    require(povm.elements[i].rows() == m.rho.rows(), "success_probability: dimension mismatch");
    ps += m.prior * (povm.elements[i] * m.rho).trace().real();
  }
  return ps;
}

std::vector<double> member_geometric(const Ensemble& ens, const GeoOptions& opts) {
  std::vector<double> out;
  for (const auto& m : ens.members()) {
    if (m.pure) out.push_back(geometric_measure_best(*m.pure, opts).value_bits);
    else out.push_back(geometric_G_mixed(DensityOp(ens.dims(), m.rho), opts).value_bits);
  }
  return out;
}

double upper_bound_G(const Ensemble& ens, const std::vector<double>& g_bits) {
  require(g_bits.size() == ens.size(), "upper_bound_G: one G value per member required");
  double best = 0.0;
  for (std::size_t i = 0; i < ens.size(); ++i)
    best = std::max(best, ens.members()[i].prior * std::exp2(-g_bits[i]));
  return static_cast<double>(ens.total_dim()) * best;
}

double upper_bound_G(const Ensemble& ens, const GeoOptions& opts) {
  return upper_bound_G(ens, member_geometric(ens, opts));
}

LowerBoundG lower_bound_G(const Ensemble& ens, const std::vector<ProductState>& products) {
  LowerBoundG out{0.0, 0.0, 0.0, srm_from_closest_products(ens, products)};
  const auto D = static_cast<double>(ens.total_dim());
  double min_term = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const auto& m = ens.members()[i];
    const double overlap = products[i].expectation(m.rho);
    out.sum_form += m.prior * m.prior * overlap;
    min_term = std::min(min_term, m.prior * overlap);
  }
  out.sum_form *= D;
  out.min_form = D * min_term;
  out.achieved = success_probability(ens, out.povm);
  return out;
}

RobustnessData robustness_data(const EnsembleMember& member, double t) {
  require(t >= 0.0, "robustness_data: t must be nonnegative");
  const Spectrum sp = hermitian_eig(member.rho);
  double rank = 0.0;
  for (Eigen::Index k = 0; k < sp.eigenvalues.size(); ++k)
    if (sp.eigenvalues(k) > 1e-10) rank += 1.0;
  return {t, (member.rho * member.rho).trace().real(), rank};
}

LowerBoundR lower_bound_robustness(const Ensemble& ens, const std::vector<RobustnessData>& data) {
  require(data.size() == ens.size(), "lower_bound_robustness: one entry per member required");
  const auto D = static_cast<double>(ens.total_dim());
  double purity = std::numeric_limits<double>::infinity();
  double support = purity;
  for (std::size_t i = 0; i < ens.size(); ++i) {
    const double p = ens.members()[i].prior;
    require(data[i].t >= 0.0 && data[i].support_size >= 1.0, "lower_bound_robustness: invalid member data");
    purity = std::min(purity, data[i].purity * p / (1.0 + data[i].t));
    support = std::min(support, p / (data[i].support_size * (1.0 + data[i].t)));
  }
  return {D * purity, D * support};
}

}  // namespace entcert
