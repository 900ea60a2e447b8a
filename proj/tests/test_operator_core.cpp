#include "doctest.h"

#include <random>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "lab/operator_core.hpp"
#include "test_helpers.hpp"

using namespace lab;
using lab::testing::random_matrix;
using lab::testing::random_unitary;

TEST_CASE("embed places sigma_z on the leftmost factor") {
  ComplexMatrix e = embed(pauli_z(), Support({0}), 2, 2);
  ComplexMatrix expect = ComplexMatrix::Zero(4, 4);
  expect.diagonal() << 1, 1, -1, -1;
  CHECK((e - expect).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("embedding the identity gives the identity") {
  ComplexMatrix e = embed(identity_matrix(2), Support({1}), 3, 2);
  CHECK((e - identity_matrix(8)).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("embed preserves the spectral norm") {
  std::mt19937_64 rng(7);
  for (int rep = 0; rep < 5; ++rep) {
    ComplexMatrix A = random_matrix(2, 2, rng);
    ComplexMatrix e = embed(A, Support({2}), 4, 2);
    CHECK(spectral_norm(e) == doctest::Approx(spectral_norm(A)).epsilon(1e-10));
  }
}

TEST_CASE("embed is an algebra homomorphism") {
  std::mt19937_64 rng(8);
  for (int rep = 0; rep < 5; ++rep) {
    ComplexMatrix A = random_matrix(4, 4, rng);
    ComplexMatrix B = random_matrix(4, 4, rng);
    Support sup({0, 2});
    ComplexMatrix lhs = embed(A * B, sup, 3, 2);
    ComplexMatrix rhs = embed(A, sup, 3, 2) * embed(B, sup, 3, 2);
    CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
  }
}

TEST_CASE("pauli commutators") {
  CHECK(spectral_norm(commutator(pauli_x(), pauli_x())) == doctest::Approx(0.0));
  ComplexMatrix expect = Complex(0, 2) * pauli_z();
  CHECK((commutator(pauli_x(), pauli_y()) - expect).cwiseAbs().maxCoeff() < 1e-15);
}

TEST_CASE("disjoint-support embeddings commute exactly") {
  std::mt19937_64 rng(9);
  ComplexMatrix A = random_matrix(2, 2, rng);
  ComplexMatrix B = random_matrix(2, 2, rng);
  ComplexMatrix ea = embed(A, Support({0}), 3, 2);
  ComplexMatrix eb = embed(B, Support({2}), 3, 2);
  CHECK(commutator(ea, eb).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("spectral norm basics") {
  CHECK(spectral_norm(pauli_z()) == doctest::Approx(1.0));
  CHECK(spectral_norm(ComplexMatrix::Zero(3, 3)) == doctest::Approx(0.0));
}

TEST_CASE("spectral norm matches an independent eigensolve of M^dag M") {
  std::mt19937_64 rng(10);
  ComplexMatrix M = random_matrix(8, 8, rng);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(M.adjoint() * M);
  const double expect = std::sqrt(es.eigenvalues().maxCoeff());
  CHECK(spectral_norm(M) == doctest::Approx(expect).epsilon(1e-11));
}

TEST_CASE("spectral norm is submultiplicative and unitarily invariant") {
  std::mt19937_64 rng(11);
  for (int rep = 0; rep < 20; ++rep) {
    ComplexMatrix A = random_matrix(6, 6, rng);
    ComplexMatrix B = random_matrix(6, 6, rng);
    CHECK(spectral_norm(A * B) <= spectral_norm(A) * spectral_norm(B) + 1e-10);
    ComplexMatrix U = random_unitary(6, rng);
    CHECK(spectral_norm(U * A) == doctest::Approx(spectral_norm(A)).epsilon(1e-10));
  }
}

TEST_CASE("trace norm basics and dominance") {
  CHECK(trace_norm(pauli_z()) == doctest::Approx(2.0));
  // rank-3 projector
  ComplexMatrix P = ComplexMatrix::Zero(5, 5);
  P(0, 0) = P(2, 2) = P(4, 4) = 1.0;
  CHECK(trace_norm(P) == doctest::Approx(3.0));
  std::mt19937_64 rng(12);
  for (int rep = 0; rep < 50; ++rep) {
    ComplexMatrix A = random_matrix(5, 5, rng);
    CHECK(trace_norm(A) >= spectral_norm(A) - 1e-12);
  }
}

TEST_CASE("partial trace of a product state factorizes") {
  std::mt19937_64 rng(13);
  ComplexMatrix rho = random_matrix(2, 2, rng);
  ComplexMatrix sigma = random_matrix(2, 2, rng);
  ComplexMatrix joint = kron(rho, sigma);
  ComplexMatrix reduced = partial_trace(joint, Support({1}), 2, 2);
  ComplexMatrix expect = rho * sigma.trace();
  CHECK((reduced - expect).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("partial trace of the identity") {
  ComplexMatrix out = partial_trace(identity_matrix(8), Support({0}), 3, 2);
  CHECK((out - 2.0 * identity_matrix(4)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("partial trace preserves the trace") {
  std::mt19937_64 rng(14);
  ComplexMatrix A = random_matrix(8, 8, rng);
  ComplexMatrix out = partial_trace(A, Support({0, 2}), 3, 2);
  CHECK(std::abs(out.trace() - A.trace()) < 1e-12);
}

TEST_CASE("vec/devec round-trip and apply_super") {
  std::mt19937_64 rng(15);
  for (int d : {2, 3, 4, 8}) {
    ComplexMatrix A = random_matrix(d, d, rng);
    CHECK((devec(vec(A), d) - A).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  }
  ComplexMatrix A = random_matrix(4, 4, rng);
  CHECK((apply_super(identity_super(4, Picture::heisenberg), A) - A)
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  // vec(HA) = (1 (x) H) vec(A) under column stacking
  ComplexMatrix H = random_matrix(4, 4, rng);
  ComplexMatrix out = apply_super(left_mult_super(H, Picture::heisenberg), A);
  CHECK((out - H * A).cwiseAbs().maxCoeff() < 1e-12);
  out = apply_super(right_mult_super(H, Picture::heisenberg), A);
  CHECK((out - A * H).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("apply_super is linear") {
  std::mt19937_64 rng(16);
  Superoperator S(random_matrix(16, 16, rng), 4, Picture::heisenberg);
  ComplexMatrix A = random_matrix(4, 4, rng);
  ComplexMatrix B = random_matrix(4, 4, rng);
  const Complex c(0.3, -1.2);
  ComplexMatrix lhs = apply_super(S, A + c * B);
  ComplexMatrix rhs = apply_super(S, A) + c * apply_super(S, B);
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("hs_adjoint is an involution and satisfies the pairing identity") {
  std::mt19937_64 rng(17);
  Superoperator S(random_matrix(16, 16, rng), 4, Picture::heisenberg);
  Superoperator SS = hs_adjoint(hs_adjoint(S));
  CHECK((SS.mat - S.mat).cwiseAbs().maxCoeff() == doctest::Approx(0.0));
  CHECK(SS.picture == S.picture);
  CHECK(hs_adjoint(S).picture == Picture::schrodinger);

  for (int rep = 0; rep < 5; ++rep) {
    ComplexMatrix A = random_matrix(4, 4, rng);
    ComplexMatrix B = random_matrix(4, 4, rng);
    const Complex lhs = (dag(B) * apply_super(S, A)).trace();
    const Complex rhs = (dag(apply_super(hs_adjoint(S), B)) * A).trace();
    CHECK(std::abs(lhs - rhs) < 1e-10);
  }
}

TEST_CASE("adjoint of a unital Heisenberg map is trace-preserving") {
  // conjugation by a random unitary is unital in both pictures
  std::mt19937_64 rng(18);
  ComplexMatrix U = random_unitary(4, rng);
  Superoperator heis = conjugation_super(U, Picture::heisenberg);
  Superoperator schro = hs_adjoint(heis);
  ComplexMatrix rho = random_matrix(4, 4, rng);
  CHECK(std::abs(apply_super(schro, rho).trace() - rho.trace()) < 1e-12);
}

TEST_CASE("trace projector superoperator") {
  std::mt19937_64 rng(19);
  ComplexMatrix A = random_matrix(2, 2, rng);
  ComplexMatrix out = apply_super(trace_projector_super(2, Picture::heisenberg), A);
  ComplexMatrix expect = identity_matrix(2) * (A.trace() / 2.0);
  CHECK((out - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("hermiticity preservation residual") {
  std::mt19937_64 rng(20);
  ComplexMatrix U = random_unitary(2, rng);
  CHECK(hermiticity_preservation_residual(
            conjugation_super(U, Picture::heisenberg)) < 1e-13);
  CHECK(hermiticity_preservation_residual(
            left_mult_super(pauli_x(), Picture::heisenberg)) > 0.1);
}

TEST_CASE("support validation and helpers") {
  CHECK_THROWS(Support({2, 1}));
  CHECK_THROWS(Support({-1}));
  Support s({1, 3});
  CHECK(s.diameter() == 2);
  CHECK(s.distance(Support({5})) == 2);
  CHECK(s.united(Support({2})).sites == std::vector<int>{1, 2, 3});
}
