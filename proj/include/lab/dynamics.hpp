#pragma once

// Heisenberg-picture evolution on the chain, commutator profiles, steady
// states, the dissipative gap and the restricted-generator checks.

#include <vector>

#include "lab/lattice_model.hpp"

namespace lab {

struct EvolutionPlan {
  enum class Method { automatic, dense_expm, integrate };
  Method method = Method::automatic;
  double rel_tol = 1e-9;
  double abs_tol = 1e-11;
};

/// A local observable placed on the chain.
struct LocalObservable {
  ComplexMatrix op;  // on the support's Hilbert space
  Support support;
};

/// Dense global Heisenberg generator; requires op-space dimension <= 4096.
Superoperator assemble(const LatticeModel& model);

/// Dense generator with every term intersecting `exclude` removed.
Superoperator restricted_generator(const LatticeModel& model,
                                   const Support& exclude);

/// e^{tL}[A] for a chain-sized observable A.
ComplexMatrix evolve(const LatticeModel& model, const ComplexMatrix& A,
                     double t, const EvolutionPlan& plan = {});

/// e^{t_k L}[A] along a sorted time grid (one pass, re-stepping
/// between grid points).
std::vector<ComplexMatrix> evolve_sequence(const LatticeModel& model,
                                           const ComplexMatrix& A,
                                           const std::vector<double>& t_grid,
                                           const EvolutionPlan& plan = {});

struct ProfilePoint {
  double t = 0.0;
  int site_a = 0;
  int site_b = 0;
  int distance = 0;
  double empirical_norm = 0.0;
};

/// ||[e^{tL} A, B]|| for every grid time and every B; A is evolved once.
std::vector<ProfilePoint> commutator_profile(
    const LatticeModel& model, const LocalObservable& A,
    const std::vector<LocalObservable>& Bs, const std::vector<double>& t_grid,
    const EvolutionPlan& plan = {});

struct SteadyState {
  ComplexMatrix rho;
  double residual_trace_norm = 0.0;  // ||L* rho||_1
  double min_eigenvalue = 0.0;
  int kernel_dim = 1;
  bool unique = true;
};

/// Null-space solve of the Schrodinger generator (dense mode) or long-time
/// propagation (matrix-free mode).
SteadyState steady_state(const LatticeModel& model);

/// Decay rate off the steady subspace: -max Re of the generator spectrum
/// after excluding eigenvalues with |Re| <= 1e-10.
double dissipative_gap(const LatticeModel& model);

/// ||I_X* rho||_1 <= tol for every term.
bool frustration_free_check(const LatticeModel& model, const ComplexMatrix& rho,
                            double tol = 1e-10);

/// |Tr(rho A B) - Tr(rho A) Tr(rho B)| with embedded observables.
double correlation(const LatticeModel& model, const ComplexMatrix& rho,
                   const LocalObservable& A, const LocalObservable& B);

/// || e^{tL}A - e^{t L_A}A || with L_A the terms touching A's support.
double ultra_locality_residual(const LatticeModel& model,
                               const LocalObservable& A, double t,
                               const EvolutionPlan& plan = {});

}  // namespace lab
