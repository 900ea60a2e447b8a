#include "doctest.h"

#include <random>

#include <unsupported/Eigen/MatrixFunctions>

#include "lab/dynamics.hpp"
#include "lab/models.hpp"
#include "test_helpers.hpp"

using namespace lab;
using lab::testing::random_hermitian;
using lab::testing::random_matrix;
using lab::testing::random_model;

namespace {

EvolutionPlan dense_plan() {
  EvolutionPlan p;
  p.method = EvolutionPlan::Method::dense_expm;
  return p;
}

EvolutionPlan integrate_plan() {
  EvolutionPlan p;
  p.method = EvolutionPlan::Method::integrate;
  return p;
}

}  // namespace

TEST_CASE("assemble: empty model gives the zero superoperator") {
  LatticeModel model;
  model.n_sites = 2;
  model.local_dim = 2;
  CHECK(assemble(model).mat.cwiseAbs().maxCoeff() == doctest::Approx(0.0));
}

TEST_CASE("assemble matches a by-hand embedded depolarizer") {
  LatticeModel model;
  model.n_sites = 2;
  model.local_dim = 2;
  model.terms.push_back(depolarization_term(Support({0}), 1.3));
  Superoperator L = assemble(model);
  ComplexMatrix expect = embedded_super_matrix(
      model.terms[0].heisenberg_action, Support({0}), 2, 2);
  CHECK((L.mat - expect).cwiseAbs().maxCoeff() < 1e-14);
}

TEST_CASE("assemble is additive over terms") {
  LatticeModel a = build_phi_mixture_chain(3);
  LatticeModel left = a, right = a;
  left.terms = {a.terms[0]};
  right.terms = {a.terms[1]};
  CHECK((assemble(a).mat - assemble(left).mat - assemble(right).mat)
            .cwiseAbs()
            .maxCoeff() < 1e-13);
}

TEST_CASE("restricted generator drops exactly the touching terms") {
  LatticeModel model = build_phi_mixture_chain(4);
  LatticeModel kept = drop_terms_intersecting(model, Support({0}));
  CHECK(kept.terms.size() == model.terms.size() - 1);
  LatticeModel none = drop_terms_intersecting(model, Support({0, 1, 2, 3}));
  CHECK(none.terms.empty());
  LatticeModel all = drop_terms_intersecting(model, Support{});
  CHECK(all.terms.size() == model.terms.size());
  CHECK((restricted_generator(model, Support{}).mat - assemble(model).mat)
            .cwiseAbs()
            .maxCoeff() < 1e-13);
}

TEST_CASE("evolution preserves the identity") {
  LatticeModel model = build_phi_mixture_chain(3);
  ComplexMatrix one = identity_matrix(8);
  for (double t : {0.3, 1.7}) {
    CHECK((evolve(model, one, t, dense_plan()) - one).cwiseAbs().maxCoeff() <
          1e-10);
    CHECK((evolve(model, one, t, integrate_plan()) - one).cwiseAbs().maxCoeff() <
          1e-10);
  }
}

TEST_CASE("Hamiltonian-only chain evolves by unitary conjugation") {
  LatticeModel model;
  model.n_sites = 3;
  model.local_dim = 2;
  model.range = 1;
  ComplexMatrix h = (kron(pauli_x(), pauli_x()) + kron(pauli_y(), pauli_y()) +
                     kron(pauli_z(), pauli_z())) /
                    3.0;
  model.terms.push_back(hamiltonian_term(h, Support({0, 1})));
  model.terms.push_back(hamiltonian_term(h, Support({1, 2})));

  ComplexMatrix H =
      embed(h, Support({0, 1}), 3, 2) + embed(h, Support({1, 2}), 3, 2);
  ComplexMatrix A = embed(pauli_z(), Support({0}), 3, 2);
  const double t = 0.9;
  ComplexMatrix U = (Complex(0, 1) * t * H).exp();
  ComplexMatrix expect = U * A * U.adjoint();
  CHECK((evolve(model, A, t, dense_plan()) - expect).cwiseAbs().maxCoeff() < 1e-10);
  CHECK((evolve(model, A, t, integrate_plan()) - expect).cwiseAbs().maxCoeff() <
        1e-8);
}

TEST_CASE("dense and integrate modes agree to 1e-8 at n=4, t=2") {
  LatticeModel model = build_phi_mixture_chain(4);
  ComplexMatrix A = embed(pauli_z(), Support({1}), 4, 2);
  ComplexMatrix d = evolve(model, A, 2.0, dense_plan());
  ComplexMatrix i = evolve(model, A, 2.0, integrate_plan());
  CHECK(spectral_norm(d - i) <= 1e-8);
}

TEST_CASE("semigroup, contractivity and trace preservation on random models") {
  for (std::uint64_t seed : {11ull, 12ull, 13ull}) {
    LatticeModel model = random_model(3, seed);
    validate_model(model);
    std::mt19937_64 rng(seed * 7 + 1);
    ComplexMatrix A = random_matrix(8, 8, rng);

    ComplexMatrix one_step = evolve(model, A, 1.1, dense_plan());
    ComplexMatrix two_step =
        evolve(model, evolve(model, A, 0.6, dense_plan()), 0.5, dense_plan());
    CHECK(spectral_norm(one_step - two_step) <= 1e-8);

    CHECK(spectral_norm(one_step) <= spectral_norm(A) * (1 + 1e-9));

    // Schrodinger picture preserves the trace
    LatticeModel adj = model;
    for (auto& term : adj.terms)
      term.heisenberg_action = hs_adjoint(term.heisenberg_action);
    ComplexMatrix rho = random_hermitian(8, rng);
    rho = rho * rho;  // PSD
    rho /= rho.trace();
    ComplexMatrix evolved = evolve(adj, rho, 0.8, dense_plan());
    CHECK(std::abs(evolved.trace() - Complex(1.0, 0.0)) <= 1e-10);
  }
}

TEST_CASE("commutator profile: zero at t=0 and bounded by 2||A|| ||B||") {
  LatticeModel model = build_phi_mixture_chain(4);
  LocalObservable A{pauli_z(), Support({0})};
  std::vector<LocalObservable> Bs{{pauli_z(), Support({2})},
                                  {pauli_z(), Support({3})}};
  std::vector<double> grid{0.0, 0.4, 1.2, 2.5};
  auto points = commutator_profile(model, A, Bs, grid, dense_plan());
  REQUIRE(points.size() == 8);
  for (const auto& pt : points) {
    if (pt.t == 0.0) CHECK(pt.empirical_norm <= 1e-12);
    CHECK(pt.empirical_norm <= 2.0 + 1e-9);
    CHECK(pt.distance == pt.site_b - pt.site_a);
  }
  // disjoint support requirement
  CHECK_THROWS(commutator_profile(model, A, {{pauli_z(), Support({0})}}, grid,
                                  dense_plan()));
}

TEST_CASE("mixture chains never grow observable supports") {
  // every component map's Heisenberg adjoint is unital, so tensor products
  // map A (x) 1 to (.) (x) 1: the commutator profile vanishes identically
  LatticeModel model = build_phi_mixture_chain(4);
  LocalObservable A{pauli_z(), Support({0})};
  std::vector<LocalObservable> Bs{{pauli_z(), Support({3})},
                                  {pauli_x(), Support({2})}};
  std::vector<double> grid{0.0, 1.0, 3.0};
  for (const auto& pt : commutator_profile(model, A, Bs, grid, dense_plan()))
    CHECK(pt.empirical_norm <= 1e-12);

  // evolution inside the support is still nontrivial
  ComplexMatrix Ae = embed(pauli_z(), Support({0}), 4, 2);
  CHECK(spectral_norm(evolve(model, Ae, 1.0, dense_plan()) - Ae) > 0.1);
}

TEST_CASE("Hamiltonian hopping develops a genuine light cone") {
  LocalizationModel lm =
      build_hamiltonian_depolarizing(4, 0.3, HamiltonianKind::heisenberg, 3);
  LocalObservable A{pauli_z(), Support({0})};
  std::vector<LocalObservable> Bs{{pauli_z(), Support({3})}};
  std::vector<double> grid{0.0, 1.0, 3.0};
  auto pts = commutator_profile(lm.model, A, Bs, grid, dense_plan());
  CHECK(pts[0].empirical_norm <= 1e-12);
  CHECK(pts[1].empirical_norm > 1e-6);
  CHECK(pts[2].empirical_norm > pts[1].empirical_norm);
}

TEST_CASE("steady state of unital models is the uniform state") {
  LatticeModel model = build_clustering_model(3, 1.0);
  SteadyState ss = steady_state(model);
  CHECK(ss.unique);
  CHECK(ss.residual_trace_norm <= 1e-10);
  CHECK(ss.min_eigenvalue >= -1e-12);
  ComplexMatrix uniform = identity_matrix(8) / 8.0;
  CHECK((ss.rho - uniform).cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("steady state matches long-time evolution on a random model") {
  LatticeModel model = random_model(3, 21);
  SteadyState ss = steady_state(model);
  CHECK(ss.residual_trace_norm <= 1e-10);

  LatticeModel adj = model;
  for (auto& term : adj.terms)
    term.heisenberg_action = hs_adjoint(term.heisenberg_action);
  const double gap = dissipative_gap(model);
  REQUIRE(gap > 0);
  ComplexMatrix rho0 = identity_matrix(8) / 8.0;
  ComplexMatrix late = evolve(adj, rho0, 50.0 / gap, dense_plan());
  CHECK(trace_norm(late - ss.rho) <= 1e-6);
}

TEST_CASE("dissipative gap: depolarizer rate, Hamiltonian zero, scaling") {
  LatticeModel model;
  model.n_sites = 1;
  model.local_dim = 2;
  model.terms.push_back(depolarization_term(Support({0}), 1.7));
  CHECK(dissipative_gap(model) == doctest::Approx(1.7).epsilon(1e-10));

  LatticeModel ham;
  ham.n_sites = 2;
  ham.local_dim = 2;
  ham.range = 1;
  ham.terms.push_back(
      hamiltonian_term(kron(pauli_z(), pauli_z()), Support({0, 1})));
  CHECK(dissipative_gap(ham) == doctest::Approx(0.0));

  LatticeModel m3 = build_clustering_model(3, 0.8);
  LatticeModel m3s = build_clustering_model(3, 0.8);
  for (auto& term : m3s.terms) term.heisenberg_action.mat *= 2.0;
  CHECK(dissipative_gap(m3s) ==
        doctest::Approx(2.0 * dissipative_gap(m3)).epsilon(1e-8));
}

TEST_CASE("frustration-freeness of the uniform state") {
  LatticeModel model = build_clustering_model(3, 1.0);
  ComplexMatrix uniform = identity_matrix(8) / 8.0;
  CHECK(frustration_free_check(model, uniform));

  // a Hamiltonian term with a non-commuting state fails
  LatticeModel ham;
  ham.n_sites = 2;
  ham.local_dim = 2;
  ham.range = 1;
  ham.terms.push_back(
      hamiltonian_term(kron(pauli_z(), pauli_z()), Support({0, 1})));
  ComplexMatrix rho = ComplexMatrix::Zero(4, 4);
  rho(0, 0) = 0.5;
  rho(0, 3) = rho(3, 0) = 0.3;
  rho(3, 3) = 0.5;
  ComplexMatrix plus = ComplexMatrix::Ones(4, 4) / 4.0;  // |++><++|
  CHECK_FALSE(frustration_free_check(ham, plus));

  LatticeModel empty;
  empty.n_sites = 2;
  empty.local_dim = 2;
  CHECK(frustration_free_check(empty, identity_matrix(4) / 4.0));
}

TEST_CASE("correlations vanish in product states and the uniform state") {
  LatticeModel model = build_clustering_model(3, 1.0);
  ComplexMatrix uniform = identity_matrix(8) / 8.0;
  LocalObservable A{pauli_z(), Support({0})};
  LocalObservable B{pauli_z(), Support({2})};
  CHECK(correlation(model, uniform, A, B) <= 1e-14);

  // a correlated state has a nonzero connected correlation
  ComplexVector ghz = ComplexVector::Zero(8);
  ghz(0) = ghz(7) = 1.0 / std::sqrt(2.0);
  ComplexMatrix rho = ghz * ghz.adjoint();
  CHECK(correlation(model, rho, A, B) == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("ultra-locality: twirl chain is exact, Hamiltonian chain is not") {
  LatticeModel twirl = build_twirl_chain(4, TwirlGroup::pauli, 1.0);
  LocalObservable A{pauli_z(), Support({1})};
  for (double t : {0.5, 2.0, 5.0})
    CHECK(ultra_locality_residual(twirl, A, t, dense_plan()) <= 1e-10);
  CHECK(ultra_locality_residual(twirl, A, 0.0, dense_plan()) <= 1e-14);

  LatticeModel ham;
  ham.n_sites = 4;
  ham.local_dim = 2;
  ham.range = 1;
  ComplexMatrix h = kron(pauli_x(), pauli_x()) + 0.5 * kron(pauli_z(), identity_matrix(2));
  for (int i = 0; i + 1 < 4; ++i)
    ham.terms.push_back(hamiltonian_term(h, Support({i, i + 1})));
  CHECK(ultra_locality_residual(ham, A, 2.0, dense_plan()) > 1e-3);
}

TEST_CASE("evolution plan guards") {
  LatticeModel model = build_phi_mixture_chain(2);
  ComplexMatrix A = identity_matrix(4);
  CHECK_THROWS(evolve(model, A, -1.0));
  LatticeModel big = build_phi_mixture_chain(7);
  ComplexMatrix Abig = identity_matrix(128);
  CHECK_THROWS(evolve(big, Abig, 0.1, dense_plan()));
}
