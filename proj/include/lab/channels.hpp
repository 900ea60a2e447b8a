#pragma once

// Completely positive maps and local Lindblad terms, including the example
// channel families and their validity checks.

#include <optional>
#include <string>
#include <vector>

#include "lab/operator_core.hpp"

namespace lab {

/// Thrown when a requested channel fails complete positivity; carries the
/// offending Choi minimum eigenvalue.
struct NotCompletelyPositive : std::runtime_error {
  double choi_min_eigenvalue;
  NotCompletelyPositive(const std::string& what, double min_eig)
      : std::runtime_error(what), choi_min_eigenvalue(min_eig) {}
};

struct ChannelSpec {
  int local_dim = 0;
  Superoperator schrodinger_action;
  std::string label;
  double trace_preservation_residual = 0.0;
  double choi_min_eigenvalue = 0.0;
  /// Set when the Heisenberg-picture adjoint fails to be trace-preserving
  /// (equivalently the channel is not unital); informational only.
  bool adjoint_not_trace_preserving = false;

  Superoperator heisenberg_action() const { return hs_adjoint(schrodinger_action); }
};

struct LindbladTerm {
  Support support;
  Superoperator heisenberg_action;  // on the support's operator space
  std::string label;
  /// Heisenberg adjoint annihilates the identity (uniform state invariant).
  bool theorem_class = false;
  /// Dimension of the fixed-point space of the defining composite map, when
  /// the term was built from one (mixture terms); 0 otherwise.
  int fixed_point_dim = 0;

  Superoperator schrodinger_action() const { return hs_adjoint(heisenberg_action); }
};

/// Diagnostics from validating a LindbladTerm against its defining
/// properties (exp[tI] identity preserving and CP at sampled t).
struct TermValidation {
  double unitality_residual = 0.0;       // max_t ||exp(tI)[1] - 1||
  double choi_min_eigenvalue = 0.0;      // min over sampled t
  double adjoint_unitality_residual = 0.0;  // ||I*[1]||, theorem-class check
  bool ok(double cp_tol = 1e-10, double unital_tol = 1e-12) const {
    return unitality_residual <= unital_tol && choi_min_eigenvalue >= -cp_tol;
  }
};

/// Choi matrix J(S) = sum_ij E_ij (x) S(E_ij); S must be in the Schrodinger
/// picture.
ComplexMatrix choi(const Superoperator& S);

double choi_min_eigenvalue(const Superoperator& schrodinger);

/// Validated channel from a Schrodinger-picture action.
ChannelSpec make_channel(Superoperator schrodinger, std::string label,
                         double cp_tol = 1e-12, double tp_tol = 1e-12);

/// Raw Schrodinger action of the Phi(lambda, t) family, no validity check.
/// Bloch picture: (a, x, y, z) -> (a, lambda*x + t*a, 0, 0).
Superoperator phi_action(double lambda, double t);

/// Phi(lambda, t); rejects |lambda| + |t| >= 1 (not completely positive).
ChannelSpec phi_family(double lambda, double t);

/// Raw Schrodinger action of the diagonal Psi(lambda, t) family.
Superoperator psi_action(double lambda, double t);

/// Psi(lambda, t); requires -1 < lambda, t < 1 and 1 - |lambda| - |t| > 0.
ChannelSpec psi_family(double lambda, double t);

/// Group-average channel A -> sum_g mu(g) U_g A U_g^dag.
ChannelSpec twirl_channel(const std::vector<ComplexMatrix>& unitaries,
                          const std::vector<double>& weights);

struct MixtureComponent {
  double weight;
  ChannelSpec left;   // acts on the first site of the pair
  ChannelSpec right;  // acts on the second site
};

/// Two-site term I = (sum_k c_k Gamma_k (x) Phi_k) - id on the pair's operator
/// space, Heisenberg picture. Records the fixed-point multiplicity of the
/// composite Schrodinger map; throws if `require_unique_fixed_point` is set
/// and the multiplicity exceeds one.
LindbladTerm mixture_interaction(const std::vector<MixtureComponent>& components,
                                 const Support& support,
                                 bool require_unique_fixed_point = false);

/// |det| > 1e-10 of the 4x4 sign-pattern matrix for the Psi-mixture family.
bool psi_determinant_check(double r1, double r2, double s1, double s2,
                           double t1, double t2, double u1, double u2);

/// Heisenberg generator A -> i[h, A]; h must be Hermitian.
LindbladTerm hamiltonian_term(const ComplexMatrix& h, const Support& support);

/// One-site depolarization gamma (Tr(.)/d 1 - id), Heisenberg picture.
LindbladTerm depolarization_term(const Support& site, double gamma,
                                 int local_dim = 2);

/// Validate exp(tI) at sampled t in {0.1, 1.0}.
TermValidation validate_term(const LindbladTerm& term);

}  // namespace lab
