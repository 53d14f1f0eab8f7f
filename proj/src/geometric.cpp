#include "entcert/geometric.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <numbers>
#include <random>
#include <thread>

namespace entcert {

namespace {

// Digit table of every computational index, row-major (index, party).
class Indexer {
 public:
  explicit Indexer(const Dims& dims) : dims_(dims), dim_(total_dim(dims)), n_(dims.size()) {
    digits_.resize(dim_ * n_);
    for (std::size_t idx = 0; idx < dim_; ++idx) {
      const std::vector<int> d = basis_digits(idx, dims);
      std::copy(d.begin(), d.end(), digits_.begin() + idx * n_);
    }
  }

  const Dims& dims() const { return dims_; }
  std::size_t dim() const { return dim_; }
  int parties() const { return static_cast<int>(n_); }
  int digit(std::size_t idx, int party) const { return digits_[idx * n_ + party]; }

  // B(idx, a) = δ(digit_party = a) Π_{j≠party} locals_j[digit_j], so that
  // B^† psi contracts psi against every other local and B^† rho B conditions rho.
  Matrix embed_others(const std::vector<Vector>& locals, int party) const {
    Matrix b = Matrix::Zero(dim_, dims_[party]);
    for (std::size_t idx = 0; idx < dim_; ++idx) {
      Complex w{1.0, 0.0};
      for (std::size_t j = 0; j < n_; ++j)
        if (static_cast<int>(j) != party) w *= locals[j](digit(idx, j));
      b(idx, digit(idx, party)) = w;
    }
    return b;
  }

 private:
  Dims dims_;
  std::size_t dim_;
  std::size_t n_;
  std::vector<int> digits_;
};

struct Run {
  std::vector<Vector> locals;
  double overlap = 0.0;
  int iterations = 0;
  bool converged = false;
  bool monotone = true;
};

Vector haar_vector(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> normal(0.0, 1.0);
  Vector v(d);
  for (int k = 0; k < d; ++k) {
    const double re = normal(rng);
    const double im = normal(rng);
    v(k) = Complex(re, im);
  }
  return v / v.norm();
}

std::vector<Vector> haar_product(const Dims& dims, std::uint64_t seed, int restart) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::vector<Vector> locals;
  for (int d : dims) locals.push_back(haar_vector(d, rng));
  return locals;
}

std::vector<Vector> basis_product(const Dims& dims, std::size_t index) {
  const std::vector<int> digits = basis_digits(index, dims);
  std::vector<Vector> locals;
  for (std::size_t i = 0; i < dims.size(); ++i) locals.push_back(Vector::Unit(dims[i], digits[i]));
  return locals;
}

// Runs `count` independent restarts, restart 0 deterministic, and returns
// them in restart order regardless of scheduling.
template <typename RunFn>
std::vector<Run> run_restarts(int count, int threads, RunFn&& fn) {
  std::vector<std::optional<Run>> slots(count);
  const int workers = std::max(1, std::min(threads, count));
  if (workers == 1) {
    for (int r = 0; r < count; ++r) slots[r] = fn(r);
  } else {
    std::vector<std::jthread> pool;
    for (int w = 0; w < workers; ++w)
      pool.emplace_back([&, w] {
        for (int r = w; r < count; r += workers) slots[r] = fn(r);
      });
  }
  std::vector<Run> out;
  out.reserve(count);
  for (auto& s : slots) out.push_back(std::move(*s));
  return out;
}

// Lowest restart index wins unless a later one is strictly better.
std::size_t best_run(const std::vector<Run>& runs) {
  std::size_t best = 0;
  for (std::size_t r = 1; r < runs.size(); ++r)
    if (runs[r].overlap > runs[best].overlap * (1.0 + 1e-12) + 1e-300) best = r;
  return best;
}

void validate(const GeoOptions& opts) {
  require(opts.restarts >= 1, "GeoOptions: restarts must be >= 1");
  require(opts.max_iters >= 1, "GeoOptions: max_iters must be >= 1");
  require(opts.tol > 0.0, "GeoOptions: tol must be positive");
}

// Rotates the first local so that ⟨Φ|psi⟩ is real and nonnegative.
ProductState phase_aligned(std::vector<Vector> locals, const PureState& psi) {
  ProductState p(locals);
  const Complex amp = p.inner(psi);
  if (std::abs(amp) > 0.0) locals[0] *= amp / std::abs(amp);
  return ProductState(std::move(locals));
}

GeoResult make_result(ProductState witness, double overlap, const std::vector<Run>& runs, std::size_t best) {
  bool monotone = true;
  for (const Run& r : runs) monotone = monotone && r.monotone;
  GeoResult res{.value_bits = -std::log2(overlap),
                .witness = std::move(witness),
                .overlap = overlap,
                .iterations = runs[best].iterations,
                .restarts_used = static_cast<int>(runs.size()),
                .converged = runs[best].converged,
                .monotone = monotone};
  return res;
}

constexpr double kAscentSlack = 1e-13;

std::atomic<std::size_t> g_ascent_violations{0};

void flag_descent(Run& run) {
  run.monotone = false;
  g_ascent_violations.fetch_add(1);
}

Run ascend_pure(const Indexer& ix, const Vector& psi, std::vector<Vector> locals, const GeoOptions& opts) {
  Run run;
  double prev = std::norm(ProductState(locals).vector().dot(psi));
  double last = prev;
  for (int it = 1; it <= opts.max_iters; ++it) {
    for (int i = 0; i < ix.parties(); ++i) {
      const Vector v = ix.embed_others(locals, i).adjoint() * psi;
      const double nv = v.norm();
      if (nv <= 1e-300) continue;
      locals[i] = v / nv;
      const double now = nv * nv;
      if (now < last - kAscentSlack * std::max(1.0, last)) flag_descent(run);
      last = now;
    }
    run.iterations = it;
    if (last - prev < opts.tol) {
      run.converged = true;
      break;
    }
    prev = last;
  }
  run.locals = std::move(locals);
  run.overlap = std::norm(ProductState(run.locals).vector().dot(psi));
  return run;
}

Run ascend_mixed(const Indexer& ix, const Matrix& rho, std::vector<Vector> locals, const GeoOptions& opts) {
  Run run;
  auto value = [&](const std::vector<Vector>& l) {
    const Vector v = ProductState(l).vector();
    return v.dot(rho * v).real();
  };
  double prev = value(locals);
  double last = prev;
  for (int it = 1; it <= opts.max_iters; ++it) {
    for (int i = 0; i < ix.parties(); ++i) {
      const Matrix b = ix.embed_others(locals, i);
      Matrix m = b.adjoint() * rho * b;
      m = (0.5 * (m + m.adjoint())).eval();
      const Spectrum sp = hermitian_eig(m);
      locals[i] = sp.eigenvectors.col(0).normalized();
      const double now = sp.eigenvalues(0);
      if (now < last - kAscentSlack * std::max(1.0, last)) flag_descent(run);
      last = now;
    }
    run.iterations = it;
    if (last - prev < opts.tol) {
      run.converged = true;
      break;
    }
    prev = last;
  }
  run.locals = std::move(locals);
  run.overlap = value(run.locals);
  return run;
}

}  // namespace

GeoResult geometric_measure_pure(const PureState& psi, const GeoOptions& opts) {
  validate(opts);
  const Indexer ix(psi.dims());
  const Vector& amps = psi.amplitudes();
  Eigen::Index top = 0;
  amps.cwiseAbs().maxCoeff(&top);

  const auto runs = run_restarts(opts.restarts + 1, opts.threads, [&](int r) {
    auto start = r == 0 ? basis_product(psi.dims(), static_cast<std::size_t>(top))
                        : haar_product(psi.dims(), opts.seed, r);
    return ascend_pure(ix, amps, std::move(start), opts);
  });
  const std::size_t best = best_run(runs);
  ProductState witness = phase_aligned(runs[best].locals, psi);
  const double overlap = std::norm(witness.inner(psi));
  return make_result(std::move(witness), overlap, runs, best);
}

GeoResult geometric_G_mixed(const DensityOp& rho_op, const GeoOptions& opts) {
  validate(opts);
  require(std::abs(rho_op.trace() - 1.0) <= 1e-9, "geometric_G_mixed: operator must have unit trace");
  const Matrix& rho = rho_op.matrix();
  const Indexer ix(rho_op.dims());
  Eigen::Index top = 0;
  rho.diagonal().real().maxCoeff(&top);

  const auto runs = run_restarts(opts.restarts + 1, opts.threads, [&](int r) {
    auto start = r == 0 ? basis_product(rho_op.dims(), static_cast<std::size_t>(top))
                        : haar_product(rho_op.dims(), opts.seed, r);
    return ascend_mixed(ix, rho, std::move(start), opts);
  });
  const std::size_t best = best_run(runs);
  ProductState witness(runs[best].locals);
  const double overlap = witness.expectation(rho);
  return make_result(std::move(witness), overlap, runs, best);
}

GeoResult refine_mixed(const DensityOp& rho_op, const ProductState& start, const GeoOptions& opts) {
  validate(opts);
  require(start.dims() == rho_op.dims(), "refine_mixed: dims mismatch");
  const Indexer ix(rho_op.dims());
  std::vector<Run> runs{ascend_mixed(ix, rho_op.matrix(), start.locals(), opts)};
  ProductState witness(runs[0].locals);
  const double overlap = witness.expectation(rho_op.matrix());
  return make_result(std::move(witness), overlap, runs, 0);
}

GeoResult geometric_measure_best(const PureState& psi, const GeoOptions& opts) {
  GeoResult general = geometric_measure_pure(psi, opts);
  if (!in_symmetric_subspace(psi)) return general;
  GeoResult sym = symmetric_restricted_measure(psi, opts);
  if (sym.overlap >= general.overlap * (1.0 - 1e-9)) {
    sym.monotone = sym.monotone && general.monotone;
    return sym;
  }
  if (auto w = symmetrize_witness(psi, general.witness)) {
    const double overlap = std::norm(w->inner(psi));
    general.witness = std::move(*w);
    general.overlap = overlap;
    general.value_bits = -std::log2(overlap);
  }
  return general;
}

bool in_symmetric_subspace(const PureState& psi, double tol) {
  const Dims& dims = psi.dims();
  if (std::adjacent_find(dims.begin(), dims.end(), std::not_equal_to<>()) != dims.end()) return false;
  return (symmetrize(psi.amplitudes(), dims) - psi.amplitudes()).norm() <= tol;
}

namespace {

// Symmetric power iteration with an adaptive shift: φ <- normalize(v + αφ)
// where v contracts psi against φ on all parties but one. The shift grows
// whenever a plain step would lower |⟨φ^{⊗n}|psi⟩|², so the run ascends.
Run ascend_symmetric(const Indexer& ix, const Vector& psi, Vector phi, const GeoOptions& opts) {
  const int n = ix.parties();
  auto contract = [&](const Vector& f) {
    return Vector(ix.embed_others(std::vector<Vector>(n, f), 0).adjoint() * psi);
  };
  auto gauge = [&](Vector f) {
    const Complex g = f.dot(contract(f));
    if (std::abs(g) > 0.0) f *= std::polar(1.0, std::arg(g) / n);
    return f;
  };
  auto value = [&](const Vector& f) { return std::norm(f.dot(contract(f))); };

  Run run;
  phi = gauge(phi.normalized());
  double cur = value(phi);
  double alpha = 0.0;
  for (int it = 1; it <= opts.max_iters; ++it) {
    run.iterations = it;
    const Vector v = contract(phi);
    Vector next;
    double val = 0.0;
    bool accepted = false;
    for (int attempt = 0; attempt < 60; ++attempt) {
      const Vector step = v + alpha * phi;
      if (step.norm() <= 1e-300) break;
      next = gauge(step.normalized());
      val = value(next);
      if (val >= cur - kAscentSlack * std::max(1.0, cur)) {
        accepted = true;
        break;
      }
      alpha = std::max(1.0, 2.0 * alpha);
    }
    if (!accepted) {
      run.converged = true;
      break;
    }
    const double gain = val - cur;
    const double move = (next - phi).norm();
    phi = next;
    cur = val;
    alpha *= 0.5;
    if (gain < opts.tol && move < 1e-7) {
      run.converged = true;
      break;
    }
  }
  run.locals.assign(n, phi);
  run.overlap = cur;
  return run;
}

}  // namespace

GeoResult symmetric_restricted_measure(const PureState& psi, const GeoOptions& opts) {
  validate(opts);
  require(in_symmetric_subspace(psi), "symmetric_restricted_measure: state is not permutation symmetric");
  const Dims& dims = psi.dims();
  const int n = psi.parties();
  const int d = dims[0];

  if (n == 1) {
    std::vector<Vector> locals{psi.amplitudes()};
    ProductState w = phase_aligned(locals, psi);
    const double ov = std::norm(w.inner(psi));
    std::vector<Run> runs{Run{w.locals(), ov, 0, true, true}};
    return make_result(std::move(w), ov, runs, 0);
  }

  if (n == 2) {
    // Exact: with Ψ = U Σ U^T, ⟨φ⊗φ|ψ⟩ = φ̄^T Ψ φ̄ is maximized by φ = U e_1.
    Matrix psi_mat(d, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b) psi_mat(a, b) = psi.amplitudes()(a * d + b);
    psi_mat = (0.5 * (psi_mat + psi_mat.transpose())).eval();
    const Takagi t = takagi(psi_mat);
    const Vector phi = t.u.col(0);
    std::vector<Vector> locals(2, phi);
    ProductState w(locals);
    const Complex amp = w.inner(psi);
    if (std::abs(amp) > 0.0) {
      const Vector rot = phi * std::polar(1.0, std::arg(amp) / 2.0);
      w = ProductState(std::vector<Vector>(2, rot));
    }
    const double ov = std::norm(w.inner(psi));
    std::vector<Run> runs{Run{w.locals(), ov, 1, true, true}};
    return make_result(std::move(w), ov, runs, 0);
  }

  const Indexer ix(dims);
  // Deterministic start: square roots of the single-party level populations.
  Vector marginal = Vector::Zero(d);
  for (std::size_t idx = 0; idx < ix.dim(); ++idx)
    marginal(ix.digit(idx, 0)) += std::norm(psi.amplitudes()(idx));
  for (int l = 0; l < d; ++l) marginal(l) = std::sqrt(marginal(l).real());

  const auto runs = run_restarts(opts.restarts + 1, opts.threads, [&](int r) {
    Vector start = r == 0 ? marginal : haar_product(Dims{d}, opts.seed, r).front();
    return ascend_symmetric(ix, psi.amplitudes(), std::move(start), opts);
  });
  const std::size_t best = best_run(runs);

  // Phase-align while keeping every local identical.
  Vector phi = runs[best].locals.front();
  const Complex amp = ProductState(std::vector<Vector>(n, phi)).inner(psi);
  if (std::abs(amp) > 0.0) phi *= std::polar(1.0, std::arg(amp) / n);
  ProductState witness(std::vector<Vector>(n, phi));
  const double overlap = std::norm(witness.inner(psi));
  return make_result(std::move(witness), overlap, runs, best);
}

std::optional<ProductState> symmetrize_witness(const PureState& psi, const ProductState& witness,
                                               double tol) {
  require(in_symmetric_subspace(psi), "symmetrize_witness: state is not permutation symmetric");
  require(witness.dims() == psi.dims(), "symmetrize_witness: dims mismatch");
  const int n = psi.parties();
  const int d = psi.dims()[0];
  const Indexer ix(psi.dims());
  const double target = std::abs(witness.inner(psi));
  std::vector<Vector> locals = witness.locals();

  auto parallel = [](const Vector& a, const Vector& b) { return std::abs(a.dot(b)) > 1.0 - 1e-10; };

  for (int sweep = 0; sweep < 50; ++sweep) {
    bool changed = false;
    for (int i = 0; i < n; ++i)
      for (int j = i + 1; j < n; ++j) {
        if (parallel(locals[i], locals[j])) continue;
        // Reduced symmetric bipartite amplitude on parties (i, j).
        Matrix pair = Matrix::Zero(d, d);
        for (std::size_t idx = 0; idx < ix.dim(); ++idx) {
          Complex w = psi.amplitudes()(idx);
          for (int k = 0; k < n; ++k)
            if (k != i && k != j) w *= std::conj(locals[k](ix.digit(idx, k)));
          pair(ix.digit(idx, i), ix.digit(idx, j)) += w;
        }
        pair = (0.5 * (pair + pair.transpose())).eval();
        const Takagi t = takagi(pair);
        locals[i] = locals[j] = t.u.col(0);
        changed = true;
      }
    if (!changed) break;
  }

  for (int k = 1; k < n; ++k)
    if (!parallel(locals[0], locals[k])) return std::nullopt;
  Vector phi = locals[0];
  const Complex amp = ProductState(std::vector<Vector>(n, phi)).inner(psi);
  if (std::abs(amp) > 0.0) phi *= std::polar(1.0, std::arg(amp) / n);
  ProductState out(std::vector<Vector>(n, phi));
  if (std::abs(out.inner(psi)) < target - tol) return std::nullopt;
  return out;
}

double dicke_closed_form(int n, const std::vector<int>& kvec) {
  require(n >= 1, "dicke_closed_form: n must be positive");
  int sum = 0;
  for (int k : kvec) {
    require(k >= 0, "dicke_closed_form: negative occupation");
    sum += k;
  }
  require(sum == n, "dicke_closed_form: occupations must sum to n");
  const double ln2 = std::numbers::ln2;
  auto log2_factorial = [&](int m) { return std::lgamma(m + 1.0) / ln2; };
  auto xlog2x = [](int m) { return m > 0 ? m * std::log2(static_cast<double>(m)) : 0.0; };
  double v = xlog2x(n) - log2_factorial(n);
  for (int k : kvec) v -= xlog2x(k) - log2_factorial(k);
  return v;
}

double antisym_closed_form(int n) {
  require(n >= 1, "antisym_closed_form: n must be positive");
  return std::lgamma(n + 1.0) / std::numbers::ln2;
}

std::size_t ascent_violations() { return g_ascent_violations.load(); }

}  // namespace entcert
