#include "lab/hypothesis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include <Eigen/Eigenvalues>
#include <Eigen/SVD>

#include "json.hpp"

namespace lab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

long ipow(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

/// Support re-indexed to window-local coordinates.
Support localize(const Support& s, const Support& window) {
  std::vector<int> idx;
  idx.reserve(s.sites.size());
  for (int site : s.sites) idx.push_back(window.index_of(site));
  return Support(std::move(idx));
}

KernelProjector projector_from_hermitian(const Support& support,
                                         const ComplexMatrix& herm, int dim,
                                         double tol) {
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm);
  const auto& evals = es.eigenvalues();
  KernelProjector out;
  out.support = support;
  out.tolerance_used = tol;
  std::vector<long> kernel_idx;
  for (long i = 0; i < evals.size(); ++i) {
    const double a = std::abs(evals(i));
    if (a <= tol)
      kernel_idx.push_back(i);
    else if (a < 10 * tol)
      out.ambiguous = true;
  }
  out.rank = static_cast<int>(kernel_idx.size());
  ComplexMatrix P = ComplexMatrix::Zero(herm.rows(), herm.cols());
  for (long i : kernel_idx) {
    ComplexVector v = es.eigenvectors().col(i);
    P += v * v.adjoint();
  }
  out.projector = Superoperator(std::move(P), dim, Picture::heisenberg);
  return out;
}

}  // namespace

KernelProjector kernel_projector(const LindbladTerm& term, double tol) {
  require(tol > 0 && tol <= 1e-6, "kernel_projector: tol must be in (0, 1e-6]");
  const Superoperator& I = term.heisenberg_action;
  ComplexMatrix herm = (I.mat + I.mat.adjoint()) / 2.0;
  return projector_from_hermitian(term.support, herm, I.dim, tol);
}

double structure_residuals(const std::vector<LindbladTerm>& terms,
                           const std::vector<KernelProjector>& projectors,
                           int local_dim) {
  require(terms.size() == projectors.size(),
          "structure_residuals: terms/projectors mismatch");
  double worst = 0.0;
  for (std::size_t y = 0; y < terms.size(); ++y) {
    for (std::size_t x = 0; x < terms.size(); ++x) {
      const Support& SX = terms[x].support;
      const Support& SY = terms[y].support;
      if (!SX.intersects(SY)) continue;  // exactly zero, skipped
      Support window = SX.united(SY);
      if (window.size() > 5)
        throw std::invalid_argument("structure_residuals: window exceeds 5 sites");
      const int nw = window.size();
      ComplexMatrix PY =
          embedded_super_matrix(projectors[y].projector, localize(SY, window),
                                nw, local_dim);
      ComplexMatrix IX = embedded_super_matrix(
          terms[x].heisenberg_action, localize(SX, window), nw, local_dim);
      ComplexMatrix PX = embedded_super_matrix(
          projectors[x].projector, localize(SX, window), nw, local_dim);
      ComplexMatrix one_minus =
          ComplexMatrix::Identity(PY.rows(), PY.cols()) - PY;
      worst = std::max(worst, spectral_norm(PY * IX * one_minus));
      worst = std::max(worst, spectral_norm(PY * PX * one_minus));
    }
  }
  return worst;
}

NuResult nu(const std::vector<LindbladTerm>& terms, double kernel_tol) {
  require(!terms.empty(), "nu: no terms");
  NuResult out;
  double best = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (const auto& term : terms) {
    const Superoperator& I = term.heisenberg_action;
    ComplexMatrix herm = (I.mat + I.mat.adjoint()) / 2.0;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(herm, Eigen::EigenvaluesOnly);
    const auto& evals = es.eigenvalues();
    if (evals.maxCoeff() > 1e-10)
      throw std::runtime_error("nu: term '" + term.label +
                               "' is not dissipative ((I+I*)/2 has a positive "
                               "eigenvalue)");
    double largest = -std::numeric_limits<double>::infinity();
    double smallest = 0.0;
    bool term_any = false;
    for (long i = 0; i < evals.size(); ++i) {
      if (std::abs(evals(i)) <= kernel_tol) continue;
      term_any = true;
      largest = std::max(largest, evals(i));
      smallest = std::min(smallest, evals(i));
    }
    if (!term_any) {
      out.inert_terms.push_back(term.label);
      continue;
    }
    if (std::abs(smallest) > 10.0 * std::abs(largest)) out.multi_rate = true;
    best = std::max(best, largest);
    any = true;
  }
  if (!any)
    throw std::runtime_error(
        "nu: no term has a non-kernel eigenvalue (no dissipation)");
  out.value = -best;
  return out;
}

namespace {

ComplexMatrix random_unitary(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix Z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) Z(i, j) = Complex(gauss(rng), gauss(rng));
  Eigen::JacobiSVD<ComplexMatrix> svd(Z, Eigen::ComputeFullU | Eigen::ComputeFullV);
  return svd.matrixU() * svd.matrixV().adjoint();
}

/// One ascent pass: alternate between the optimal unit-trace-norm witness
/// (top singular dyad of T(V)) and the optimal unit-spectral-norm input
/// (polar factor of T*(Y)).
double ascend(const ComplexMatrix& T, int d, ComplexMatrix V, int max_iters,
              double tol) {
  double last = -1.0;
  double val = 0.0;
  for (int it = 0; it < max_iters; ++it) {
    ComplexMatrix W = devec(T * vec(V), d);
    Eigen::JacobiSVD<ComplexMatrix> sw(W, Eigen::ComputeFullU | Eigen::ComputeFullV);
    val = sw.singularValues()(0);
    ComplexMatrix Y = sw.matrixU().col(0) * sw.matrixV().col(0).adjoint();
    ComplexMatrix G = devec(T.adjoint() * vec(Y), d);
    Eigen::JacobiSVD<ComplexMatrix> sg(G, Eigen::ComputeFullU | Eigen::ComputeFullV);
    V = sg.matrixU() * sg.matrixV().adjoint();
    if (std::abs(val - last) <= tol * std::max(1.0, val)) break;
    last = val;
  }
  return val;
}

}  // namespace

double cb_norm(const Superoperator& S, CbMode mode, const CbOptions& opts) {
  require(S.picture == Picture::heisenberg,
          "cb_norm: expects a Heisenberg-picture map");
  if (hermiticity_preservation_residual(S) > 1e-10)
    throw std::invalid_argument("cb_norm: map is not hermiticity-preserving");

  if (mode == CbMode::upper_bound) {
    // Choi matrix of the Schrodinger-picture adjoint
    const int d = S.dim;
    Superoperator schro(S.mat.adjoint(), d, Picture::schrodinger);
    ComplexMatrix J(d * d, d * d);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        J.block(i * d, j * d, d, d) = apply_super(schro, basis_matrix(i, j, d));
    return trace_norm(J);
  }

  // lower estimate: stabilize with an ancilla of the same dimension, at which
  // the cb supremum is attained, then ascend from random unitary starts
  const int d = S.dim;
  ComplexMatrix T = embedded_super_matrix(S, Support({0}), 2, d);
  const int d_stab = d * d;
  double best = 0.0;
  for (int k = 0; k < std::max(opts.restarts, 1); ++k) {
    std::mt19937_64 rng(opts.seed + 0x9E3779B97F4A7C15ull * (k + 1));
    ComplexMatrix V0 = random_unitary(d_stab, rng);
    best = std::max(best, ascend(T, d_stab, V0, opts.max_iters, opts.tol));
  }
  return best;
}

AlphaBeta alpha_beta(const std::vector<LindbladTerm>& terms,
                     const std::vector<KernelProjector>& projectors,
                     const CbOptions& opts) {
  require(terms.size() == projectors.size(), "alpha_beta: size mismatch");
  AlphaBeta out;
  for (std::size_t k = 0; k < terms.size(); ++k) {
    const Superoperator& I = terms[k].heisenberg_action;
    const Superoperator& P = projectors[k].projector;
    AlphaBeta::Entry e;
    e.label = terms[k].label;
    e.cb_lower = cb_norm(I, CbMode::lower_estimate, opts);
    e.cb_upper = cb_norm(I, CbMode::upper_bound, opts);
    if (e.cb_lower <= 0.0)
      throw std::runtime_error("alpha_beta: null term '" + e.label + "'");

    Superoperator IP = compose(I, P);
    if (IP.mat.cwiseAbs().maxCoeff() <= 1e-12)
      e.alpha_numerator = 0.0;  // exact-zero shortcut
    else
      e.alpha_numerator = cb_norm(IP, CbMode::upper_bound, opts);

    Superoperator IQ(I.mat * (ComplexMatrix::Identity(P.mat.rows(), P.mat.cols()) -
                              P.mat),
                     I.dim, Picture::heisenberg);
    if (IQ.mat.cwiseAbs().maxCoeff() <= 1e-12)
      e.beta_numerator = 0.0;
    else
      e.beta_numerator = cb_norm(IQ, CbMode::upper_bound, opts);

    out.alpha = std::max(out.alpha, e.alpha_numerator / e.cb_lower);
    out.beta = std::max(out.beta, e.beta_numerator / e.cb_lower);
    out.table.push_back(std::move(e));
  }
  return out;
}

bool covariance_check(const LindbladTerm& term,
                      const std::vector<ComplexMatrix>& reps, double tol) {
  const Superoperator& I = term.heisenberg_action;
  const int m = term.support.size();
  const int d = static_cast<int>(reps.empty() ? 2 : reps.front().rows());
  for (const auto& U : reps) {
    require(U.rows() == d && U.cols() == d, "covariance_check: dim mismatch");
    if ((U.adjoint() * U - identity_matrix(d)).cwiseAbs().maxCoeff() > 1e-12)
      throw std::invalid_argument("covariance_check: non-unitary representative");
  }
  for (int i = 0; i < m; ++i) {
    for (const auto& U : reps) {
      ComplexMatrix C = embedded_super_matrix(
          conjugation_super(U, Picture::heisenberg), Support({i}), m, d);
      if (spectral_norm(I.mat * C - C * I.mat) > tol) return false;
    }
  }
  return true;
}

KernelProjector twirl_projector(const Support& support,
                                const std::vector<ComplexMatrix>& reps,
                                const std::vector<double>& weights,
                                int local_dim) {
  require(!reps.empty() && reps.size() == weights.size(),
          "twirl_projector: reps/weights mismatch");
  double wsum = 0.0;
  for (double w : weights) wsum += w;
  require(std::abs(wsum - 1.0) <= 1e-12,
          "twirl_projector: weights must sum to 1");
  const int m = support.size();
  ComplexMatrix single = ComplexMatrix::Zero(local_dim * local_dim,
                                             local_dim * local_dim);
  for (std::size_t k = 0; k < reps.size(); ++k)
    single += weights[k] * conjugation_super(reps[k], Picture::heisenberg).mat;
  Superoperator site_avg(std::move(single), local_dim, Picture::heisenberg);

  const long D2 = ipow(local_dim, 2 * m);
  ComplexMatrix P = ComplexMatrix::Identity(D2, D2);
  for (int i = 0; i < m; ++i)
    P = embedded_super_matrix(site_avg, Support({i}), m, local_dim) * P;

  KernelProjector out;
  out.support = support;
  out.tolerance_used = 1e-12;
  double idem = (P * P - P).cwiseAbs().maxCoeff();
  double sadj = (P - P.adjoint()).cwiseAbs().maxCoeff();
  require(idem <= 1e-12 && sadj <= 1e-12,
          "twirl_projector: group average is not an orthogonal projector "
          "(weights not an invariant mean?)");
  out.rank = static_cast<int>(std::lround(P.trace().real()));
  out.projector = Superoperator(std::move(P), ipow(local_dim, m),
                                Picture::heisenberg);
  return out;
}

LocalizationCheck localization_assumptions(const LatticeModel& model,
                                           double tol) {
  if (model.n_sites > 5)
    throw std::invalid_argument(
        "localization_assumptions: window too large for dense check (> 5 sites)");
  const int d = model.local_dim;

  std::vector<const LindbladTerm*> interactions;
  std::vector<const LindbladTerm*> dissipators;
  for (const auto& term : model.terms) {
    if (term.support.size() > 1)
      interactions.push_back(&term);
    else
      dissipators.push_back(&term);
  }
  require(!interactions.empty(),
          "localization_assumptions: need interaction terms");
  // without dissipators the dressed kernels fall back to Ker(I + I*),
  // which for Hamiltonian interactions is everything (trivially true)

  // Dressed projector P_{Lambda_j}: kernel of I_j + I_j* + sum_{k in Lambda_j}
  // (D_k + D_k*), evaluated on Lambda_j's own operator space.
  std::vector<ComplexMatrix> P_window;
  for (const auto* inter : interactions) {
    const Support& sup = inter->support;
    const int m = sup.size();
    ComplexMatrix K = inter->heisenberg_action.mat +
                      inter->heisenberg_action.mat.adjoint();
    for (const auto* dis : dissipators) {
      if (!sup.contains(dis->support.sites.front())) continue;
      ComplexMatrix D = embedded_super_matrix(
          dis->heisenberg_action, localize(dis->support, sup), m, d);
      K += D + D.adjoint();
    }
    KernelProjector kp = projector_from_hermitian(
        sup, K / 2.0, static_cast<int>(ipow(d, m)), 1e-9);
    P_window.push_back(embedded_super_matrix(
        kp.projector, localize(sup, Support([&] {
          std::vector<int> all(model.n_sites);
          for (int s = 0; s < model.n_sites; ++s) all[s] = s;
          return all;
        }())),
        model.n_sites, d));
  }

  LocalizationCheck out;
  for (std::size_t a = 0; a < P_window.size(); ++a)
    for (std::size_t b = a + 1; b < P_window.size(); ++b)
      out.commutation_residual =
          std::max(out.commutation_residual,
                   spectral_norm(P_window[a] * P_window[b] -
                                 P_window[b] * P_window[a]));

  // Path prefixes on a chain are contiguous runs of interactions.
  std::vector<std::vector<int>> exclusions;
  exclusions.push_back({});
  const int ni = static_cast<int>(interactions.size());
  for (int i = 0; i < ni; ++i)
    for (int j = i; j < ni; ++j) {
      std::vector<int> run;
      for (int k = i; k <= j; ++k) run.push_back(k);
      exclusions.push_back(run);
    }

  std::vector<ComplexMatrix> I_window;
  for (const auto* inter : interactions)
    I_window.push_back(embedded_super_matrix(
        inter->heisenberg_action, inter->support, model.n_sites, d));
  ComplexMatrix D_sum =
      ComplexMatrix::Zero(model.op_space_dim(), model.op_space_dim());
  for (const auto* dis : dissipators)
    D_sum += embedded_super_matrix(dis->heisenberg_action, dis->support,
                                   model.n_sites, d);

  for (const auto& excl : exclusions) {
    Support path_sites;
    for (int k : excl) path_sites = path_sites.united(interactions[k]->support);
    ComplexMatrix Pc =
        ComplexMatrix::Identity(model.op_space_dim(), model.op_space_dim());
    for (int k = 0; k < ni; ++k) {
      if (std::find(excl.begin(), excl.end(), k) != excl.end()) continue;
      Pc = P_window[k] * Pc;
    }
    ComplexMatrix Lc = D_sum;
    for (int k = 0; k < ni; ++k)
      if (path_sites.empty() || !interactions[k]->support.intersects(path_sites))
        Lc += I_window[k];
    out.projection_residual = std::max(
        out.projection_residual, spectral_norm(Pc * Lc * Pc - Pc * Lc));
  }

  out.passed =
      out.commutation_residual <= tol && out.projection_residual <= tol;
  return out;
}

std::string HypothesisReport::to_json() const {
  nlohmann::json j;
  j["structure_residual_max"] = structure_residual_max;
  j["nu"] = nu;
  j["alpha"] = alpha;
  j["beta"] = beta;
  nlohmann::json table = nlohmann::json::array();
  for (const auto& e : cb_norm_table) {
    table.push_back({{"label", e.label},
                     {"lower_estimate", e.cb_lower},
                     {"upper_bound", e.cb_upper},
                     {"alpha_numerator", e.alpha_numerator},
                     {"beta_numerator", e.beta_numerator}});
  }
  j["cb_norms"] = table;
  j["passed"] = passed;
  return j.dump(2);
}

HypothesisReport evaluate_hypotheses(const LatticeModel& model,
                                     const HypothesisOptions& opts) {
  validate_model(model);
  std::vector<KernelProjector> projectors;
  projectors.reserve(model.terms.size());
  for (const auto& term : model.terms)
    projectors.push_back(kernel_projector(term, opts.kernel_tol));

  HypothesisReport report;
  for (const auto& p : projectors) report.ambiguous_projector |= p.ambiguous;
  report.structure_residual_max =
      structure_residuals(model.terms, projectors, model.local_dim);
  NuResult nures = nu(model.terms, opts.kernel_tol);
  report.nu = nures.value;
  report.inert_terms = std::move(nures.inert_terms);
  report.multi_rate = nures.multi_rate;
  AlphaBeta ab = alpha_beta(model.terms, projectors, opts.cb);
  report.alpha = ab.alpha;
  report.beta = ab.beta;
  report.cb_norm_table = std::move(ab.table);
  report.passed =
      report.structure_residual_max <= opts.structure_tol && report.nu > 0.0;
  return report;
}

}  // namespace lab
