#include "doctest.h"

#include <random>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "lab/channels.hpp"
#include "lab/models.hpp"
#include "test_helpers.hpp"

using namespace lab;
using lab::testing::random_matrix;
using lab::testing::random_cptp_superoperator;

TEST_CASE("choi of the identity channel is 2|Omega><Omega|") {
  ComplexMatrix J = choi(identity_super(2, Picture::schrodinger));
  ComplexVector omega(4);
  omega << 1, 0, 0, 1;  // unnormalized maximally entangled vector
  ComplexMatrix expect = (omega * omega.adjoint()) / 2.0 * 2.0;
  CHECK((J - expect).cwiseAbs().maxCoeff() < 1e-14);
  CHECK(trace_norm(J) == doctest::Approx(2.0));
}

TEST_CASE("choi of the fully depolarizing qubit channel is 1 x 1/2") {
  ComplexMatrix J = choi(trace_projector_super(2, Picture::schrodinger));
  CHECK((J - 0.5 * identity_matrix(4)).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("random Kraus channels have PSD Choi matrices") {
  std::mt19937_64 rng(41);
  for (int rep = 0; rep < 10; ++rep) {
    Superoperator S = random_cptp_superoperator(3, 2, rng);
    ComplexMatrix J = choi(S);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(J, Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues().minCoeff() >= -1e-12);
  }
}

TEST_CASE("phi family: depolarizing point, acceptance and rejection") {
  // Phi(0,0) sends everything to Tr(A)/2 * 1
  std::mt19937_64 rng(42);
  ComplexMatrix A = random_matrix(2, 2, rng);
  ComplexMatrix out = apply_super(phi_action(0, 0), A);
  CHECK((out - identity_matrix(2) * (A.trace() / 2.0)).cwiseAbs().maxCoeff() <
        1e-14);

  ChannelSpec ok = phi_family(0.4, 0.4);
  CHECK(ok.choi_min_eigenvalue == doctest::Approx(0.1).epsilon(1e-10));
  CHECK(ok.trace_preservation_residual < 1e-14);

  CHECK_THROWS_AS(phi_family(0.6, 0.6), NotCompletelyPositive);
  try {
    phi_family(0.6, 0.6);
  } catch (const NotCompletelyPositive& e) {
    CHECK(e.choi_min_eigenvalue == doctest::Approx(-0.1).epsilon(1e-10));
  }
}

TEST_CASE("phi CP region matches the |lambda|+|t| rule on a grid") {
  // coarse version of the acceptance sweep
  for (double lam = -1.0; lam <= 1.0; lam += 0.25)
    for (double t = -1.0; t <= 1.0; t += 0.25) {
      if (std::abs(std::abs(lam) + std::abs(t) - 1.0) <= 1e-6) continue;
      const bool rule = std::abs(lam) + std::abs(t) < 1.0;
      const bool psd = choi_min_eigenvalue(phi_action(lam, t)) >= -1e-12;
      CHECK(rule == psd);
    }
}

TEST_CASE("psi family: substitution cases and window") {
  std::mt19937_64 rng(43);
  ComplexMatrix A = random_matrix(2, 2, rng);
  // Psi(1,0) dephases (boundary case, outside the strict window)
  ComplexMatrix deph = apply_super(psi_action(1, 0), A);
  ComplexMatrix expect = ComplexMatrix::Zero(2, 2);
  expect(0, 0) = A(0, 0);
  expect(1, 1) = A(1, 1);
  CHECK((deph - expect).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS(psi_family(1, 0));

  ComplexMatrix unif = apply_super(psi_action(0, 0), A);
  CHECK((unif - identity_matrix(2) * (A.trace() / 2.0)).cwiseAbs().maxCoeff() <
        1e-14);

  ChannelSpec ok = psi_family(0.3, 0.2);
  CHECK(ok.trace_preservation_residual < 1e-14);
  CHECK(ok.choi_min_eigenvalue >= -1e-12);
}

TEST_CASE("uniform pauli twirl is the fully depolarizing channel") {
  auto reps = twirl_group_reps(TwirlGroup::pauli);
  ChannelSpec tw = twirl_channel(reps, {0.25, 0.25, 0.25, 0.25});
  CHECK((tw.schrodinger_action.mat - trace_projector_super(2, Picture::schrodinger).mat)
            .cwiseAbs()
            .maxCoeff() < 1e-14);
}

TEST_CASE("single-element twirl is unitary conjugation, group twirl idempotent") {
  std::mt19937_64 rng(44);
  ComplexMatrix U = lab::testing::random_unitary(2, rng);
  ChannelSpec tw = twirl_channel({U}, {1.0});
  CHECK((tw.schrodinger_action.mat - conjugation_super(U, Picture::schrodinger).mat)
            .cwiseAbs()
            .maxCoeff() < 1e-13);

  auto reps = twirl_group_reps(TwirlGroup::z2);
  ChannelSpec z2 = twirl_channel(reps, {0.5, 0.5});
  ComplexMatrix P = z2.schrodinger_action.mat;
  CHECK((P * P - P).cwiseAbs().maxCoeff() < 1e-13);

  ComplexMatrix not_unitary = 2.0 * U;
  CHECK_THROWS(twirl_channel({not_unitary}, {1.0}));
}

TEST_CASE("phi mixture term: accepted, unique uniform fixed point") {
  LindbladTerm term = phi_mixture_pair_term(PhiMixtureParams{}, Support({0, 1}));
  CHECK(term.fixed_point_dim == 1);
  CHECK(term.theorem_class);

  // I[1] = 0 and I*[1] = 0
  ComplexVector one = vec(identity_matrix(4));
  CHECK((term.heisenberg_action.mat * one).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((term.heisenberg_action.mat.adjoint() * one).cwiseAbs().maxCoeff() < 1e-12);

  // I + I* <= 0
  ComplexMatrix herm =
      (term.heisenberg_action.mat + term.heisenberg_action.mat.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
  CHECK(es.eigenvalues().maxCoeff() <= 1e-12);

  TermValidation v = validate_term(term);
  CHECK(v.ok());
  CHECK(v.adjoint_unitality_residual < 1e-12);
}

TEST_CASE("single identity component gives the zero generator") {
  ChannelSpec id = make_channel(identity_super(2, Picture::schrodinger), "id");
  LindbladTerm term = mixture_interaction({{1.0, id, id}}, Support({0, 1}));
  CHECK(term.heisenberg_action.mat.cwiseAbs().maxCoeff() < 1e-14);
  CHECK(term.fixed_point_dim == 16);
  CHECK_THROWS(mixture_interaction({{1.0, id, id}}, Support({0, 1}), true));
}

TEST_CASE("psi mixture term under the determinant condition") {
  LindbladTerm term = psi_mixture_pair_term(PsiMixtureParams{}, Support({0, 1}));
  CHECK(term.fixed_point_dim == 1);
  CHECK(term.theorem_class);
  CHECK(validate_term(term).ok());
}

TEST_CASE("psi determinant check") {
  CHECK_FALSE(psi_determinant_check(0, 0, 0, 0, 0, 0, 0, 0));
  // frozen by direct 4x4 evaluation: det = -16
  CHECK(psi_determinant_check(0.5, 0.5, -0.5, 0.5, 0.5, -0.5, -0.5, -0.5));
  // duplicated columns are singular
  CHECK_FALSE(psi_determinant_check(0.3, 0.4, 0.3, 0.4, 0.5, -0.5, -0.5, -0.5));
}

TEST_CASE("hamiltonian term: annihilates commuting observables, anti-Hermitian") {
  ComplexMatrix h = kron(pauli_z(), pauli_z());
  LindbladTerm term = hamiltonian_term(h, Support({0, 1}));
  ComplexMatrix zz1 = kron(pauli_z(), identity_matrix(2));
  CHECK((term.heisenberg_action.mat * vec(zz1)).cwiseAbs().maxCoeff() < 1e-14);
  CHECK((term.heisenberg_action.mat + term.heisenberg_action.mat.adjoint())
            .cwiseAbs()
            .maxCoeff() < 1e-14);

  // exp(tI) is conjugation by exp(ith)
  const double t = 0.7;
  ComplexMatrix lhs =
      devec((t * term.heisenberg_action.mat).exp() * vec(kron(pauli_x(), pauli_y())),
            4);
  ComplexMatrix U = (Complex(0, 1) * t * h).exp();
  ComplexMatrix rhs = U * kron(pauli_x(), pauli_y()) * U.adjoint();
  CHECK((lhs - rhs).cwiseAbs().maxCoeff() < 1e-12);

  std::mt19937_64 rng(45);
  CHECK_THROWS(hamiltonian_term(random_matrix(2, 2, rng), Support({0})));
}

TEST_CASE("depolarization term") {
  LindbladTerm term = depolarization_term(Support({2}), 1.5);
  ComplexVector one = vec(identity_matrix(2));
  CHECK((term.heisenberg_action.mat * one).cwiseAbs().maxCoeff() < 1e-14);
  ComplexMatrix out = apply_super(term.heisenberg_action, pauli_z());
  CHECK((out + 1.5 * pauli_z()).cwiseAbs().maxCoeff() < 1e-14);
  CHECK_THROWS(depolarization_term(Support({0}), 0.0));

  // semigroup fixed point is the uniform state
  ComplexMatrix schro = term.heisenberg_action.mat.adjoint();
  Eigen::ComplexEigenSolver<ComplexMatrix> es(schro);
  int zero_modes = 0;
  long zero_idx = -1;
  for (long i = 0; i < 4; ++i)
    if (std::abs(es.eigenvalues()(i)) < 1e-12) {
      ++zero_modes;
      zero_idx = i;
    }
  CHECK(zero_modes == 1);
  ComplexMatrix fix = devec(es.eigenvectors().col(zero_idx), 2);
  fix /= fix.trace();
  CHECK((fix - identity_matrix(2) / 2.0).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("mixture validity invariants hold for every built term") {
  for (const LindbladTerm& term :
       {phi_mixture_pair_term(PhiMixtureParams{}, Support({0, 1})),
        psi_mixture_pair_term(PsiMixtureParams{}, Support({0, 1}))}) {
    TermValidation v = validate_term(term);
    CHECK(v.unitality_residual <= 1e-12);
    CHECK(v.choi_min_eigenvalue >= -1e-10);
    CHECK(v.adjoint_unitality_residual <= 1e-12);
  }
}
