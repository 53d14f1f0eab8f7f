#pragma once

#include <cmath>
#include <cstdint>
#include <random>

#include "entcert/linalg.hpp"
#include "entcert/states.hpp"

namespace testing_support {

using namespace entcert;

// Seeded generators for property tests. Each property owns its engine so that
// test order does not change the draws.
struct Rng {
  explicit Rng(std::uint64_t seed) : engine(seed) {}

  double normal() { return gauss(engine); }
  double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(engine); }
  int integer(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(engine); }
  Complex complex() {
    const double re = normal();
    const double im = normal();
    return {re, im};
  }

  std::mt19937_64 engine;
  std::normal_distribution<double> gauss{0.0, 1.0};
};

inline Matrix random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Matrix m(rows, cols);
  for (Eigen::Index c = 0; c < cols; ++c)
    for (Eigen::Index r = 0; r < rows; ++r) m(r, c) = rng.complex();
  return m;
}

inline Vector random_vector(Rng& rng, Eigen::Index n) {
  Vector v = random_matrix(rng, n, 1).col(0);
  return v / v.norm();
}

// Haar unitary via QR of a Ginibre matrix with the diagonal phases fixed.
inline Matrix random_unitary(Rng& rng, int d) {
  const Matrix g = random_matrix(rng, d, d);
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ();
  const Matrix r = qr.matrixQR();
  for (int k = 0; k < d; ++k) q.col(k) *= std::abs(r(k, k)) / r(k, k);
  return q;
}

inline PureState random_state(Rng& rng, const Dims& dims) {
  return PureState(dims, random_vector(rng, static_cast<Eigen::Index>(total_dim(dims))));
}

// Random density matrix of the given rank, trace one.
inline Matrix random_density(Rng& rng, Eigen::Index dim, Eigen::Index rank) {
  const Matrix a = random_matrix(rng, dim, rank);
  Matrix rho = a * a.adjoint();
  return rho / rho.trace().real();
}

inline ProductState random_product(Rng& rng, const Dims& dims) {
  std::vector<Vector> locals;
  for (int d : dims) locals.push_back(random_vector(rng, d));
  return ProductState(std::move(locals));
}

inline Matrix pauli_x() { return (Matrix(2, 2) << 0.0, 1.0, 1.0, 0.0).finished(); }
inline Matrix pauli_z() { return (Matrix(2, 2) << 1.0, 0.0, 0.0, -1.0).finished(); }
inline Vector ket(std::initializer_list<double> amps) {
  Vector v(static_cast<Eigen::Index>(amps.size()));
  Eigen::Index k = 0;
  for (double a : amps) v(k++) = a;
  return v;
}

}  // namespace testing_support
