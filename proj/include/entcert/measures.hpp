#pragma once

#include <optional>
#include <string>
#include <vector>

#include "entcert/symmetry.hpp"

namespace entcert {

// S(ρ‖σ) = −S(ρ) − tr ρ log2 σ in bits. Both arguments must have unit trace.
// Throws InfiniteRelativeEntropy when ρ leaks out of supp σ by more than 1e-10.
double relative_entropy(const Matrix& rho, const Matrix& sigma);
double relative_entropy(const DensityOp& rho, const DensityOp& sigma);

struct RobustnessBound {
  double lambda;   // largest λ with ω − λρ ⪰ −tol
  double t;        // 1/λ − 1
  double lr_bits;  // log2(1 + t)
};

// Bisection on PSD feasibility; t upper-bounds R_g(ρ) when ω is separable.
RobustnessBound robustness_upper_from_candidate(const Matrix& rho, const Matrix& omega, double tol = kPsdTol);

struct MeasureReport {
  std::string id;
  double eg_bits = 0.0;         // G − log2 tr P, i.e. E_g for pure states
  double geometric_bits = 0.0;  // G of the normalized state
  double entropy_bits = 0.0;    // S(ρ)
  double er_upper_bits = 0.0;
  double lr_upper_bits = 0.0;
  double robustness_t = 0.0;
  bool chain_ok = false;
  bool equality_certified = false;
  std::string candidate_id;
  bool converged = false;
  double residual_min_eig = 0.0;
  std::optional<GeoResult> geo;
  std::optional<EqualityCertificate> certificate;
  std::string note;  // first component error, if any
};

struct ReportOptions {
  GeoOptions geo;
  double psd_tol = kPsdTol;
  double robustness_tol = 1e-10;
};

// Best geometric optimization for a target: symmetric witness for symmetric
// pure states, mixed ALS for projectors.
GeoResult optimize_target(const Target& target, const GeoOptions& opts);

MeasureReport measure_chain_report(const Target& target, const TwirlChannel& channel, const ReportOptions& opts = {});

/// Family descriptor restricted to the two closed-form families.
struct FamilySpec {
  enum class Family { Dicke, Antisym };
  Family family = Family::Dicke;
  int n = 0;
  std::vector<int> kvec;  // Dicke occupation numbers
  int d = 0;              // local dimension (antisym: >= n)

  static FamilySpec dicke(int n, std::vector<int> kvec);
  static FamilySpec antisym(int n, int d = 0);

  std::string id() const;
  Target target() const;
  TwirlChannel channel() const;
  double closed_form() const;
};

struct Table1Row {
  std::string id;
  double closed_form;
  double eg_bits;
  double er_upper_bits;
  double lr_upper_bits;
  bool certified;
  bool mismatch;  // any reported value differs from the closed form by > 1e-6
};

std::vector<Table1Row> table1_values(const std::vector<FamilySpec>& specs, const ReportOptions& opts = {});

// Dicke rows for every partition of n ≤ n_max into 2..d_max positive parts,
// followed by antisym(n) for n = 2..min(n_max, 4).
std::vector<FamilySpec> table1_specs(int n_max, int d_max = 3);

}  // namespace entcert
