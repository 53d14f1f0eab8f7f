#include <gtest/gtest.h>

#include "entcert/measures.hpp"
#include "support.hpp"

using namespace entcert;
using namespace testing_support;

namespace {

Matrix bell(int which) {
  const double r = 1.0 / std::sqrt(2.0);
  const Vector v = which == 0 ? ket({r, 0, 0, r}) : ket({r, 0, 0, -r});
  return v * v.adjoint();
}

ErrorKind kind_of(auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.kind();
  }
  return ErrorKind::InternalError;
}

MeasureReport ghz3_report() {
  const StabilizerGroup g = ghz_stabilizers(3);
  return measure_chain_report(Target::from_pure("ghz3", stabilizer_state(g)), TwirlChannel::stabilizer(g));
}

}  // namespace

TEST(RelativeEntropy, SelfIsZero) {
  Rng rng(51);
  for (int trial = 0; trial < 10; ++trial) {
    const Matrix rho = random_density(rng, 6, rng.integer(1, 6));
    EXPECT_NEAR(relative_entropy(rho, rho), 0.0, 1e-9);
  }
}

TEST(RelativeEntropy, BellAgainstDephased) {
  // Both operators are diagonal in the Bell basis: 1·log2(1/(1/2)) = 1.
  EXPECT_NEAR(relative_entropy(bell(0), 0.5 * bell(0) + 0.5 * bell(1)), 1.0, 1e-12);
}

TEST(RelativeEntropy, DisjointSupport) {
  const Matrix p0 = Vector::Unit(2, 0) * Vector::Unit(2, 0).adjoint();
  const Matrix p1 = Vector::Unit(2, 1) * Vector::Unit(2, 1).adjoint();
  EXPECT_EQ(kind_of([&] { relative_entropy(p0, p1); }), ErrorKind::InfiniteRelativeEntropy);
}

TEST(RelativeEntropy, NonnegativeProperty) {
  Rng rng(52);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix rho = random_density(rng, 4, rng.integer(1, 4));
    const Matrix sigma = random_density(rng, 4, 4);
    EXPECT_GE(relative_entropy(rho, sigma), 0.0);
  }
}

TEST(Robustness, SeparableAgainstItself) {
  const Matrix rho = Matrix::Identity(4, 4) / 4.0;
  const RobustnessBound b = robustness_upper_from_candidate(rho, rho);
  EXPECT_NEAR(b.t, 0.0, 1e-12);
  EXPECT_NEAR(b.lambda, 1.0, 1e-12);
}

TEST(Robustness, Ghz3) {
  const StabilizerGroup g = ghz_stabilizers(3);
  const PureState ghz = stabilizer_state(g);
  const Matrix omega = apply_twirl(TwirlChannel::stabilizer(g), Vector::Unit(8, 0) * Vector::Unit(8, 0).adjoint());
  const RobustnessBound b = robustness_upper_from_candidate(ghz.projector(), omega);
  EXPECT_NEAR(b.lambda, 0.5, 1e-9);
  EXPECT_NEAR(b.t, 1.0, 1e-8);
  EXPECT_NEAR(b.lr_bits, 1.0, 1e-8);
}

TEST(Robustness, Singlet) {
  const PureState s = antisymmetric_basis(2, 2);
  const GeoResult geo = geometric_measure_pure(s);
  const Matrix omega = closest_separable_candidate(Target::from_pure("s", s), antisymmetric_channel(2, 2), geo);
  EXPECT_NEAR(robustness_upper_from_candidate(s.projector(), omega).t, 1.0, 1e-8);
}

TEST(Robustness, NoFiniteBound) {
  const Matrix p0 = Vector::Unit(2, 0) * Vector::Unit(2, 0).adjoint();
  const Matrix p1 = Vector::Unit(2, 1) * Vector::Unit(2, 1).adjoint();
  EXPECT_EQ(kind_of([&] { robustness_upper_from_candidate(p0, p1); }), ErrorKind::NoFiniteBound);
}

TEST(Robustness, BisectionBracketProperty) {
  Rng rng(53);
  for (int trial = 0; trial < 30; ++trial) {
    const Matrix rho = random_density(rng, 4, rng.integer(1, 2));
    const Matrix omega = random_density(rng, 4, 4);
    const RobustnessBound b = robustness_upper_from_candidate(rho, omega);
    EXPECT_TRUE(psd_check(omega - b.lambda * rho).ok);
    if (b.lambda < 1.0) EXPECT_FALSE(psd_check(omega - (b.lambda + 1e-6) * rho).ok);
    EXPECT_NEAR(b.t, 1.0 / b.lambda - 1.0, 1e-12);
  }
}

TEST(MeasureReport, Ghz3) {
  const MeasureReport r = ghz3_report();
  EXPECT_NEAR(r.eg_bits, 1.0, 1e-9);
  EXPECT_NEAR(r.er_upper_bits, 1.0, 1e-7);
  EXPECT_NEAR(r.lr_upper_bits, 1.0, 1e-7);
  EXPECT_TRUE(r.equality_certified);
  EXPECT_TRUE(r.chain_ok);
  EXPECT_EQ(r.candidate_id, "twirl:stabilizer");
}

TEST(MeasureReport, DickeFourTwo) {
  const FamilySpec f = FamilySpec::dicke(4, {2, 2});
  const MeasureReport r = measure_chain_report(f.target(), f.channel());
  const double v = std::log2(8.0 / 3.0);
  EXPECT_NEAR(v, 1.415037, 1e-6);
  EXPECT_NEAR(r.eg_bits, v, 1e-7);
  EXPECT_NEAR(r.er_upper_bits, v, 1e-7);
  EXPECT_NEAR(r.lr_upper_bits, v, 1e-7);
  EXPECT_TRUE(r.equality_certified);
}

TEST(MeasureReport, AntisymmetricThree) {
  const FamilySpec f = FamilySpec::antisym(3);
  const MeasureReport r = measure_chain_report(f.target(), f.channel());
  EXPECT_NEAR(r.eg_bits, std::log2(6.0), 1e-7);
  EXPECT_NEAR(r.er_upper_bits, std::log2(6.0), 1e-7);
  EXPECT_NEAR(r.lr_upper_bits, std::log2(6.0), 1e-7);
  EXPECT_TRUE(r.equality_certified);
}

TEST(MeasureReport, ProjectionStates) {
  MeasureReport r = measure_chain_report(Target::from_projector("sym", symmetric_projector(2, 2)),
                                         clifford_tensor_channel(2));
  EXPECT_NEAR(r.geometric_bits, std::log2(3.0), 1e-9);
  EXPECT_NEAR(r.entropy_bits, std::log2(3.0), 1e-9);
  EXPECT_NEAR(r.eg_bits, 0.0, 1e-9);
  EXPECT_NEAR(r.lr_upper_bits, 0.0, 1e-7);
  EXPECT_TRUE(r.equality_certified);
  r = measure_chain_report(Target::from_projector("anti", antisymmetric_projector(2, 2)), clifford_tensor_channel(2));
  EXPECT_NEAR(r.eg_bits, 1.0, 1e-7);
  EXPECT_NEAR(r.er_upper_bits, 1.0, 1e-7);
  EXPECT_NEAR(r.lr_upper_bits, 1.0, 1e-7);
  EXPECT_TRUE(r.equality_certified);
}

TEST(MeasureReport, ComponentErrorsBecomeNotCertified) {
  const double r2 = 1.0 / std::sqrt(2.0);
  Vector v = ket({r2, 0, 0, 0});
  v(1) = r2;
  const PureState psi({2, 2}, v);  // |0⟩|+⟩: not torus invariant
  const MeasureReport r = measure_chain_report(Target::from_pure("p", psi), TwirlChannel::type_projection(2, 2));
  EXPECT_FALSE(r.equality_certified);
  EXPECT_NE(r.note.find("NotInvariant"), std::string::npos);
  EXPECT_TRUE(r.chain_ok);
  EXPECT_NEAR(r.eg_bits, 0.0, 1e-9);
}

TEST(MeasureReport, CertifiedCasesAgreeProperty) {
  std::vector<std::pair<Target, TwirlChannel>> cases;
  for (int n = 2; n <= 5; ++n) {
    const StabilizerGroup g = ghz_stabilizers(n);
    cases.emplace_back(Target::from_pure("ghz", stabilizer_state(g)), TwirlChannel::stabilizer(g));
    const StabilizerGroup c = linear_cluster_stabilizers(n);
    cases.emplace_back(Target::from_pure("cluster", stabilizer_state(c)), TwirlChannel::stabilizer(c));
  }
  for (const auto& [t, ch] : cases) {
    const MeasureReport r = measure_chain_report(t, ch);
    ASSERT_TRUE(r.certificate.has_value());
    if (r.certificate->verdict == Verdict::Certified) {
      EXPECT_NEAR(r.er_upper_bits, r.eg_bits, 1e-7);
      EXPECT_NEAR(r.lr_upper_bits, r.eg_bits, 1e-7);
      EXPECT_TRUE(r.equality_certified);
    }
  }
}

TEST(MeasureReport, UncertifiedChainProperty) {
  Rng rng(54);
  const std::vector<Dims> shapes{{2, 2}, {2, 3}, {2, 2, 2}, {3, 3}};
  for (int trial = 0; trial < 24; ++trial) {
    const Dims& dims = shapes[trial % shapes.size()];
    const PureState psi = random_state(rng, dims);
    const MeasureReport r = measure_chain_report(Target::from_pure("rand", psi), TwirlChannel::identity(dims));
    EXPECT_TRUE(r.chain_ok) << "trial " << trial;
    EXPECT_GE(r.er_upper_bits, r.eg_bits - 1e-7);
    EXPECT_GE(r.lr_upper_bits, r.er_upper_bits - 1e-7);
    EXPECT_FALSE(r.equality_certified);
  }
}

TEST(Table1, Rows) {
  const auto rows = table1_values({FamilySpec::antisym(3), FamilySpec::dicke(3, {2, 1}), FamilySpec::dicke(2, {1, 1})});
  ASSERT_EQ(rows.size(), 3u);
  EXPECT_EQ(rows[0].id, "antisym:3");
  EXPECT_NEAR(rows[0].closed_form, std::log2(6.0), 1e-12);
  EXPECT_NEAR(rows[1].closed_form, 1.169925, 1e-6);
  EXPECT_NEAR(rows[2].closed_form, 1.0, 1e-12);
  for (const auto& r : rows) {
    EXPECT_FALSE(r.mismatch) << r.id;
    EXPECT_TRUE(r.certified) << r.id;
    EXPECT_NEAR(r.eg_bits, r.closed_form, 1e-6);
  }
}

TEST(Table1, SpecsEnumeratePartitions) {
  const auto specs = table1_specs(4);
  std::vector<std::string> ids;
  for (const auto& s : specs) ids.push_back(s.id());
  const std::vector<std::string> expected{"dicke:2,1-1", "dicke:3,2-1", "dicke:3,1-1-1", "dicke:4,3-1", "dicke:4,2-2",
                                          "dicke:4,2-1-1", "antisym:2", "antisym:3", "antisym:4"};
  EXPECT_EQ(ids, expected);
}

TEST(Table1, AntisymmetricOverDickeRatioGrows) {
  // E_g(antisym n) / E_g(dicke(n, 1…1)) for n = 3..6, from the closed forms.
  double prev = 0.0;
  for (int n = 3; n <= 6; ++n) {
    const double ratio = antisym_closed_form(n) / dicke_closed_form(n, std::vector<int>(n, 1));
    EXPECT_GT(ratio, prev) << n;
    prev = ratio;
  }
}

TEST(FamilySpec, Validation) {
  EXPECT_THROW(FamilySpec::dicke(3, {1, 1}), Error);
  EXPECT_THROW(FamilySpec::antisym(3, 2), Error);
  EXPECT_EQ(FamilySpec::antisym(2, 3).id(), "antisym:2,3");
}
