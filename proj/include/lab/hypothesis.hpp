#pragma once

// Numerical verification of the theorem's hypotheses: kernel projectors,
// structural equations, the dissipation rate nu, cb-norm brackets, the
// alpha/beta ratios, covariance and the localization assumptions.

#include <cstdint>
#include <string>
#include <vector>

#include "lab/lattice_model.hpp"

namespace lab {

struct KernelProjector {
  Support support;
  Superoperator projector;  // HS-orthogonal, on the support's operator space
  int rank = 0;
  double tolerance_used = 0.0;
  /// Eigenvalue found inside (tol, 10*tol): the kernel split is not clean.
  bool ambiguous = false;
};

/// Projector onto the kernel of (I + I*)/2 from a Hermitian eigensolve;
/// eigenvectors with |eigenvalue| <= tol span the kernel.
KernelProjector kernel_projector(const LindbladTerm& term, double tol = 1e-9);

/// Max over overlapping ordered pairs (X, Y) of || P_Y I_X (1 - P_Y) || and
/// || P_Y P_X (1 - P_Y) ||, evaluated on the operator space of X u Y.
double structure_residuals(const std::vector<LindbladTerm>& terms,
                           const std::vector<KernelProjector>& projectors,
                           int local_dim);

struct NuResult {
  double value = 0.0;
  /// Labels of terms whose (I + I*)/2 has no eigenvalue past the kernel
  /// tolerance (purely Hamiltonian terms contribute nothing).
  std::vector<std::string> inert_terms;
  /// Some term has non-kernel eigenvalues spread over more than a decade.
  bool multi_rate = false;
};

/// nu = -(largest non-kernel eigenvalue of (I + I*)/2, maximized over terms).
/// Throws if a term has a positive eigenvalue beyond tolerance, or if no term
/// has any non-kernel eigenvalue at all.
NuResult nu(const std::vector<LindbladTerm>& terms, double kernel_tol = 1e-9);

enum class CbMode { lower_estimate, upper_bound };

struct CbOptions {
  int restarts = 50;
  int max_iters = 500;
  double tol = 1e-9;
  std::uint64_t seed = 0x9E3779B97F4A7C15ull;
};

/// Completely bounded norm bracket of a Heisenberg-picture map.
///   upper_bound:   trace norm of the Choi matrix of the HS adjoint
///   lower_estimate: ||S (x) id_d|| by alternating singular-vector ascent
///                   over unit-spectral-norm inputs, seeded random restarts
double cb_norm(const Superoperator& S, CbMode mode, const CbOptions& opts = {});

struct AlphaBeta {
  double alpha = 0.0;
  double beta = 0.0;
  struct Entry {
    std::string label;
    double cb_lower = 0.0;      // lower estimate of ||I||_cb
    double cb_upper = 0.0;      // Choi-trace upper bound of ||I||_cb
    double alpha_numerator = 0.0;  // upper bound of ||I P||_cb
    double beta_numerator = 0.0;   // upper bound of ||I (1-P)||_cb
  };
  std::vector<Entry> table;
};

/// alpha = max_X up||I P|| / low||I||, beta = max_X up||I(1-P)|| / low||I||.
/// Upper bounds in numerators and lower estimates in denominators keep the
/// resulting envelope a valid upper bound. ||I P|| below 1e-12 entrywise
/// short-circuits to exactly zero.
AlphaBeta alpha_beta(const std::vector<LindbladTerm>& terms,
                     const std::vector<KernelProjector>& projectors,
                     const CbOptions& opts = {});

/// True iff I_X commutes with conjugation by V_g placed on every single site
/// of its support, for every g; residual measured in spectral norm.
bool covariance_check(const LindbladTerm& term,
                      const std::vector<ComplexMatrix>& reps,
                      double tol = 1e-10);

/// Product over the support's sites of single-site group averages.
KernelProjector twirl_projector(const Support& support,
                                const std::vector<ComplexMatrix>& reps,
                                const std::vector<double>& weights,
                                int local_dim);

struct LocalizationCheck {
  bool passed = false;
  double commutation_residual = 0.0;  // max || [P_j, P_k] ||
  double projection_residual = 0.0;   // max || Pc Lc Pc - Pc Lc ||
};

/// Checks the localization assumptions on a small window (<= 5 sites):
/// (a) pairwise commutation of the dressed kernel projectors P_{Lambda_j},
/// (b) Pc Lc Pc = Pc Lc over path-prefix exclusions.
LocalizationCheck localization_assumptions(const LatticeModel& model,
                                           double tol = 1e-10);

struct HypothesisReport {
  double structure_residual_max = 0.0;
  double nu = 0.0;
  double alpha = 0.0;
  double beta = 0.0;
  std::vector<AlphaBeta::Entry> cb_norm_table;
  bool passed = false;
  // diagnostics
  std::vector<std::string> inert_terms;
  bool multi_rate = false;
  bool ambiguous_projector = false;

  std::string to_json() const;
};

struct HypothesisOptions {
  double structure_tol = 1e-10;
  double kernel_tol = 1e-9;
  CbOptions cb;
};

/// Full hypothesis pipeline for a model: projectors, structural equations,
/// nu, cb table, alpha/beta. passed <=> structure residual within tolerance
/// and nu > 0.
HypothesisReport evaluate_hypotheses(const LatticeModel& model,
                                     const HypothesisOptions& opts = {});

}  // namespace lab
