#include "entcert/measures.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace entcert {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kLeakTol = 1e-10;
constexpr double kChainTol = 1e-7;

double xlog2(double x, double y) { return x > 0.0 ? x * std::log2(y) : 0.0; }

void require_unit_trace(const Matrix& m, const char* what) {
  require(m.rows() == m.cols(), std::string(what) + ": not square");
  require(std::abs(m.trace().real() - 1.0) <= 1e-8, std::string(what) + ": trace is not 1");
}

// ω_p = p|Φ⟩⟨Φ| + (1−p) I/D with p chosen to minimize S(ρ‖ω_p); the optimum
// puts weight c = ⟨Φ|ρ|Φ⟩ on Φ whenever c ≥ 1/D.
struct Depolarized {
  double p;
  double er_bits;
};

Depolarized depolarized_candidate(double c, double entropy, std::size_t dim) {
  const double D = static_cast<double>(dim);
  if (dim == 1) return {1.0, 0.0};
  if (c < 1.0 / D) return {0.0, std::log2(D) - entropy};
  c = std::min(c, 1.0);
  const double b = (1.0 - c) / (D - 1.0);
  const double cross = xlog2(c, c) + xlog2(1.0 - c, b);
  const double p = (c - 1.0 / D) / (1.0 - 1.0 / D);
  return {std::min(p, 1.0), std::max(-entropy - cross, 0.0)};
}

}  // namespace

double relative_entropy(const Matrix& rho, const Matrix& sigma) {
  require_unit_trace(rho, "relative_entropy(rho)");
  require_unit_trace(sigma, "relative_entropy(sigma)");
  require(rho.rows() == sigma.rows(), "relative_entropy: dimension mismatch");
  const Spectrum sp = hermitian_eig(sigma);
  Eigen::Index rank = 0;
  while (rank < sp.eigenvalues.size() && sp.eigenvalues(rank) > kSupportEps) ++rank;
  const Matrix basis = sp.eigenvectors.leftCols(rank);
  const double inside = (basis.adjoint() * rho * basis).trace().real();
  if (1.0 - inside > kLeakTol) {
    std::ostringstream os;
    os << "relative_entropy: weight " << 1.0 - inside << " of rho lies outside supp(sigma)";
    fail(ErrorKind::InfiniteRelativeEntropy, os.str());
  }
  const Matrix logs = matrix_log2_on_support(sigma, kSupportEps);
  const double cross = (rho * logs).trace().real();
  const double value = -von_neumann_entropy(rho) - cross;
  if (value < -1e-10) fail(ErrorKind::InternalError, "relative_entropy: negative value " + std::to_string(value));
  return std::max(value, 0.0);
}

double relative_entropy(const DensityOp& rho, const DensityOp& sigma) {
  return relative_entropy(rho.normalized(), sigma.normalized());
}

RobustnessBound robustness_upper_from_candidate(const Matrix& rho, const Matrix& omega, double tol) {
  require_unit_trace(rho, "robustness_upper_from_candidate(rho)");
  require_unit_trace(omega, "robustness_upper_from_candidate(omega)");
  require(rho.rows() == omega.rows(), "robustness_upper_from_candidate: dimension mismatch");
  require(psd_check(omega, kPsdTol).ok, "robustness_upper_from_candidate: omega is not PSD");
  const Matrix outside = Matrix::Identity(rho.rows(), rho.cols()) - support_projector(omega, kSupportEps);
  if ((outside * rho * outside).trace().real() > 1e-10)
    fail(ErrorKind::NoFiniteBound, "robustness_upper_from_candidate: rho is not inside supp(omega)");
  auto feasible = [&](double lambda) { return psd_check(omega - lambda * rho, tol).ok; };

  double lo = 0.0;
  double hi = 1.0;
  if (feasible(1.0)) {
    lo = 1.0;
  } else {
    while (hi - lo > 1e-12) {
      const double mid = 0.5 * (lo + hi);
      (feasible(mid) ? lo : hi) = mid;
    }
  }
  if (lo <= 0.0) fail(ErrorKind::NoFiniteBound, "robustness_upper_from_candidate: rho is not inside supp(omega)");
  return {lo, 1.0 / lo - 1.0, -std::log2(lo)};
}

GeoResult optimize_target(const Target& target, const GeoOptions& opts) {
  if (target.pure) return geometric_measure_best(*target.pure, opts);
  return geometric_G_mixed(target.state(), opts);
}

MeasureReport measure_chain_report(const Target& target, const TwirlChannel& channel, const ReportOptions& opts) {
  MeasureReport r;
  r.id = target.id;
  auto note = [&](const Error& e) {
    if (r.note.empty()) r.note = std::string(to_string(e.kind())) + ": " + e.what();
  };
  try {
    const GeoResult geo = optimize_target(target, opts.geo);
    const Matrix rho = target.normalized();
    r.geometric_bits = geo.value_bits;
    r.eg_bits = geo.value_bits - std::log2(target.trace);
    r.entropy_bits = target.pure ? 0.0 : von_neumann_entropy(rho);
    r.converged = geo.converged;

    double er = kInf;
    double t = kInf;
    try {
      EqualityCertificate cert = certify_equality(target, channel, geo, opts.psd_tol);
      r.residual_min_eig = cert.residual_min_eig;
      try {
        er = relative_entropy(rho, cert.candidate);
        r.candidate_id = "twirl:" + channel.label();
      } catch (const Error& e) {
        note(e);
      }
      try {
        t = robustness_upper_from_candidate(rho, cert.candidate, opts.robustness_tol).t;
      } catch (const Error& e) {
        note(e);
      }
      r.certificate = std::move(cert);
    } catch (const Error& e) {
      note(e);
    }

    const Depolarized dep = depolarized_candidate(geo.overlap, r.entropy_bits, target.projector.rows());
    if (dep.er_bits < er - kChainTol || !std::isfinite(er)) {
      er = std::min(er, dep.er_bits);
      r.candidate_id = "depolarized-product";
    }
    if (!std::isfinite(t) || !r.certificate || r.certificate->verdict != Verdict::Certified) {
      const Vector phi = geo.witness.vector();
      const auto D = static_cast<double>(rho.rows());
      const Matrix omega = dep.p * (phi * phi.adjoint()) +
                           ((1.0 - dep.p) / D) * Matrix::Identity(rho.rows(), rho.cols());
      try {
        t = std::min(t, robustness_upper_from_candidate(rho, omega, opts.robustness_tol).t);
      } catch (const Error& e) {
        note(e);
      }
    }

    r.er_upper_bits = er;
    r.robustness_t = t;
    r.lr_upper_bits = std::isfinite(t) ? std::log2(1.0 + t) : kInf;
    r.chain_ok = r.er_upper_bits >= r.eg_bits - kChainTol;
    r.equality_certified = r.certificate && r.certificate->verdict == Verdict::Certified &&
                           std::abs(r.er_upper_bits - r.eg_bits) <= kChainTol &&
                           std::abs(r.lr_upper_bits - r.eg_bits) <= kChainTol;
    r.geo = geo;
  } catch (const Error& e) {
    note(e);
    r.eg_bits = r.er_upper_bits = r.lr_upper_bits = std::numeric_limits<double>::quiet_NaN();
    r.equality_certified = false;
  }
  return r;
}

FamilySpec FamilySpec::dicke(int n, std::vector<int> kvec) {
  FamilySpec s;
  s.family = Family::Dicke;
  s.n = n;
  s.d = static_cast<int>(kvec.size());
  s.kvec = std::move(kvec);
  int total = 0;
  for (int k : s.kvec) {
    require(k >= 0, "dicke: occupation numbers must be nonnegative");
    total += k;
  }
  require(n >= 1 && total == n, "dicke: occupation numbers must sum to n");
  require(s.d >= 1, "dicke: empty occupation vector");
  return s;
}

FamilySpec FamilySpec::antisym(int n, int d) {
  FamilySpec s;
  s.family = Family::Antisym;
  s.n = n;
  s.d = d == 0 ? n : d;
  require(n >= 2 && s.d >= n, "antisym: need n >= 2 and d >= n");
  return s;
}

std::string FamilySpec::id() const {
  std::ostringstream os;
  if (family == Family::Dicke) {
    os << "dicke:" << n << ',';
    for (std::size_t i = 0; i < kvec.size(); ++i) os << (i ? "-" : "") << kvec[i];
  } else {
    os << "antisym:" << n;
    if (d != n) os << ',' << d;
  }
  return os.str();
}

Target FamilySpec::target() const {
  if (family == Family::Dicke) return Target::from_pure(id(), entcert::dicke(n, kvec));
  return Target::from_pure(id(), antisymmetric_basis(n, d));
}

TwirlChannel FamilySpec::channel() const {
  if (family == Family::Dicke) return dicke_channel(n, d);
  return antisymmetric_channel(n, d);
}

double FamilySpec::closed_form() const {
  return family == Family::Dicke ? dicke_closed_form(n, kvec) : antisym_closed_form(n);
}

std::vector<Table1Row> table1_values(const std::vector<FamilySpec>& specs, const ReportOptions& opts) {
  std::vector<Table1Row> rows;
  rows.reserve(specs.size());
  for (const FamilySpec& s : specs) {
    const MeasureReport rep = measure_chain_report(s.target(), s.channel(), opts);
    const double exact = s.closed_form();
    const double dev = std::max({std::abs(rep.eg_bits - exact), std::abs(rep.er_upper_bits - exact),
                                 std::abs(rep.lr_upper_bits - exact)});
    rows.push_back({s.id(), exact, rep.eg_bits, rep.er_upper_bits, rep.lr_upper_bits, rep.equality_certified,
                    !(dev <= 1e-6)});
  }
  return rows;
}

namespace {

void partitions(int remaining, int max_part, int parts_left, std::vector<int>& cur,
                std::vector<std::vector<int>>& out) {
  if (remaining == 0) {
    out.push_back(cur);
    return;
  }
  if (parts_left == 0) return;
  for (int k = std::min(remaining, max_part); k >= 1; --k) {
    cur.push_back(k);
    partitions(remaining - k, k, parts_left - 1, cur, out);
    cur.pop_back();
  }
}

}  // namespace

std::vector<FamilySpec> table1_specs(int n_max, int d_max) {
  require(n_max >= 2, "table1: n_max must be >= 2");
  require(d_max >= 2, "table1: d_max must be >= 2");
  std::vector<FamilySpec> specs;
  for (int n = 2; n <= n_max; ++n) {
    std::vector<std::vector<int>> parts;
    std::vector<int> cur;
    partitions(n, n, d_max, cur, parts);
    for (auto& k : parts)
      if (k.size() >= 2) specs.push_back(FamilySpec::dicke(n, k));
  }
  // antisym(5) already lives in a 3125-dimensional space; stop at 4.
  for (int n = 2; n <= std::min(n_max, 4); ++n) specs.push_back(FamilySpec::antisym(n));
  return specs;
}

}  // namespace entcert
