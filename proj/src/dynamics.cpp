#include "lab/dynamics.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include <boost/numeric/odeint.hpp>

namespace lab {

namespace {

constexpr long kDenseLimit = 4096;

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

using OdeState = std::vector<Complex>;

struct GeneratorRhs {
  const GeneratorPlan* gen;
  void operator()(const OdeState& x, OdeState& dxdt, double /*t*/) const {
    dxdt.resize(x.size());
    gen->apply(x.data(), dxdt.data());
  }
};

/// Integrate vec(A) from t0 to t1 in place with an adaptive
/// Dormand-Prince 5(4) stepper.
void integrate_leg(const GeneratorPlan& gen, OdeState& state, double t0,
                   double t1, const EvolutionPlan& plan) {
  namespace ode = boost::numeric::odeint;
  if (t1 <= t0) return;
  using Stepper = ode::runge_kutta_dopri5<OdeState>;
  auto stepper = ode::make_controlled<Stepper>(plan.abs_tol, plan.rel_tol);
  GeneratorRhs rhs{&gen};
  const double dt0 = std::min(1e-3, (t1 - t0) / 10.0);
  ode::integrate_adaptive(stepper, rhs, state, t0, t1, dt0);
}

bool use_dense(const LatticeModel& model, const EvolutionPlan& plan) {
  switch (plan.method) {
    case EvolutionPlan::Method::dense_expm:
      require(model.op_space_dim() <= kDenseLimit,
              "evolve: dense mode size limit exceeded");
      return true;
    case EvolutionPlan::Method::integrate:
      return false;
    case EvolutionPlan::Method::automatic:
      return model.op_space_dim() <= 256;
  }
  return false;
}

ComplexMatrix embed_observable(const LocalObservable& A, int n_sites,
                               int local_dim) {
  return embed(A.op, A.support, n_sites, local_dim);
}

}  // namespace

Superoperator assemble(const LatticeModel& model) {
  require(model.op_space_dim() <= kDenseLimit,
          "assemble: dense mode size limit exceeded");
  const long dim = model.op_space_dim();
  GeneratorPlan gen = make_generator_plan(model);
  ComplexMatrix L = ComplexMatrix::Zero(dim, dim);
  ComplexVector e(dim), col(dim);
  for (long k = 0; k < dim; ++k) {
    e.setZero();
    e(k) = 1.0;
    col.resize(dim);
    gen.apply(e, col);
    L.col(k) = col;
  }
  return Superoperator(std::move(L), static_cast<int>(model.hilbert_dim()),
                       Picture::heisenberg);
}

Superoperator restricted_generator(const LatticeModel& model,
                                   const Support& exclude) {
  return assemble(drop_terms_intersecting(model, exclude));
}

ComplexMatrix evolve(const LatticeModel& model, const ComplexMatrix& A,
                     double t, const EvolutionPlan& plan) {
  require(t >= 0.0, "evolve: negative time");
  std::vector<double> grid{t};
  return evolve_sequence(model, A, grid, plan).front();
}

std::vector<ComplexMatrix> evolve_sequence(const LatticeModel& model,
                                           const ComplexMatrix& A,
                                           const std::vector<double>& t_grid,
                                           const EvolutionPlan& plan) {
  const long d = model.hilbert_dim();
  require(A.rows() == d && A.cols() == d, "evolve: observable dimension mismatch");
  require(std::is_sorted(t_grid.begin(), t_grid.end()),
          "evolve: time grid must be sorted");
  require(t_grid.empty() || t_grid.front() >= 0.0, "evolve: negative time");

  require(plan.rel_tol > 0 && plan.abs_tol > 0,
          "evolve: tolerances must be positive");

  std::vector<ComplexMatrix> out;
  out.reserve(t_grid.size());

  if (use_dense(model, plan)) {
    const Superoperator L = assemble(model);
    // Grids whose points are integer multiples of a common step need a
    // single matrix exponential; otherwise exponentiate per point.
    double base = 0.0;
    for (double t : t_grid)
      if (t > 0.0) {
        base = t;
        break;
      }
    bool commensurate = base > 0.0;
    if (commensurate)
      for (double t : t_grid) {
        const double k = t / base;
        if (std::abs(k - std::round(k)) > 1e-9) commensurate = false;
      }
    if (commensurate && base > 0.0) {
      ComplexMatrix step = (base * L.mat).exp();
      ComplexVector v = vec(A);
      long steps_done = 0;
      for (double t : t_grid) {
        const long k = std::lround(t / base);
        for (; steps_done < k; ++steps_done) v = step * v;
        out.push_back(devec(v, static_cast<int>(d)));
      }
    } else {
      for (double t : t_grid)
        out.push_back(devec((t * L.mat).exp() * vec(A), static_cast<int>(d)));
    }
    return out;
  }

  GeneratorPlan gen = make_generator_plan(model);
  ComplexVector v0 = vec(A);
  OdeState state(v0.data(), v0.data() + v0.size());
  double t_prev = 0.0;
  for (double t : t_grid) {
    integrate_leg(gen, state, t_prev, t, plan);
    t_prev = t;
    out.push_back(devec(
        Eigen::Map<const ComplexVector>(state.data(), state.size()),
        static_cast<int>(d)));
  }
  return out;
}

std::vector<ProfilePoint> commutator_profile(
    const LatticeModel& model, const LocalObservable& A,
    const std::vector<LocalObservable>& Bs, const std::vector<double>& t_grid,
    const EvolutionPlan& plan) {
  for (const auto& B : Bs)
    require(!A.support.intersects(B.support),
            "commutator_profile: observables must have disjoint supports");

  ComplexMatrix A_emb = embed_observable(A, model.n_sites, model.local_dim);
  std::vector<ComplexMatrix> B_emb;
  B_emb.reserve(Bs.size());
  for (const auto& B : Bs)
    B_emb.push_back(embed_observable(B, model.n_sites, model.local_dim));

  std::vector<ComplexMatrix> evolved = evolve_sequence(model, A_emb, t_grid, plan);
  std::vector<ProfilePoint> out;
  out.reserve(t_grid.size() * Bs.size());
  for (std::size_t ti = 0; ti < t_grid.size(); ++ti) {
    for (std::size_t bi = 0; bi < Bs.size(); ++bi) {
      ProfilePoint pt;
      pt.t = t_grid[ti];
      pt.site_a = A.support.sites.front();
      pt.site_b = Bs[bi].support.sites.front();
      pt.distance = A.support.distance(Bs[bi].support);
      pt.empirical_norm = spectral_norm(commutator(evolved[ti], B_emb[bi]));
      out.push_back(pt);
    }
  }
  return out;
}

SteadyState steady_state(const LatticeModel& model) {
  const long dim = model.op_space_dim();
  const int d = static_cast<int>(model.hilbert_dim());
  GeneratorPlan schro = make_schrodinger_plan(model);

  SteadyState out;
  if (dim <= kDenseLimit) {
    ComplexMatrix Ls = ComplexMatrix::Zero(dim, dim);
    {
      ComplexVector e(dim), col(dim);
      for (long k = 0; k < dim; ++k) {
        e.setZero();
        e(k) = 1.0;
        schro.apply(e, col);
        Ls.col(k) = col;
      }
    }
    ComplexMatrix G = Ls.adjoint() * Ls;
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(G);
    const double lmax = std::max(es.eigenvalues().maxCoeff(), 1.0);
    const double sigma_tol = 1e-7 * std::sqrt(lmax);
    int kernel_dim = 0;
    for (long i = 0; i < es.eigenvalues().size(); ++i)
      if (std::sqrt(std::max(es.eigenvalues()(i), 0.0)) <= sigma_tol) ++kernel_dim;
    out.kernel_dim = std::max(kernel_dim, 1);
    out.unique = (out.kernel_dim == 1);

    // kernel candidate with the largest trace component
    ComplexVector best = es.eigenvectors().col(0);
    double best_trace = std::abs(devec(best, d).trace());
    for (int i = 1; i < out.kernel_dim; ++i) {
      ComplexVector v = es.eigenvectors().col(i);
      double tr = std::abs(devec(v, d).trace());
      if (tr > best_trace) {
        best = v;
        best_trace = tr;
      }
    }
    // a couple of inverse-iteration sweeps sharpen the kernel component
    const double shift = lmax * 1e-15;
    ComplexMatrix Gs = G + shift * ComplexMatrix::Identity(dim, dim);
    Eigen::LDLT<ComplexMatrix> ldlt(Gs);
    for (int pass = 0; pass < 2; ++pass) {
      best = ldlt.solve(best);
      best.normalize();
    }
    ComplexMatrix rho = devec(best, d);
    rho = (rho + rho.adjoint()) / 2.0;
    const Complex tr = rho.trace();
    if (std::abs(tr) < 1e-10)
      throw std::runtime_error("steady_state: traceless kernel vector");
    rho /= tr;
    out.rho = rho;
  } else {
    // matrix-free: long-time propagation of the uniform state
    EvolutionPlan plan;
    plan.method = EvolutionPlan::Method::integrate;
    double nu_est = 0.1;
    ComplexMatrix rho =
        identity_matrix(d) / static_cast<double>(d);
    LatticeModel adj_model = model;  // evolve with the Schrodinger plan
    for (auto& term : adj_model.terms)
      term.heisenberg_action = hs_adjoint(term.heisenberg_action);
    const double dt = 1.0 / nu_est;
    ComplexVector res(dim);
    for (int it = 0; it < 200; ++it) {
      rho = evolve(adj_model, rho, dt, plan);
      rho = (rho + rho.adjoint()) / 2.0;
      rho /= rho.trace();
      ComplexVector v = vec(rho);
      schro.apply(v.data(), res.data());
      if (trace_norm(devec(res, d)) <= 1e-11) break;
    }
    out.rho = rho;
    out.kernel_dim = 1;  // not resolved in matrix-free mode
  }

  ComplexVector v = vec(out.rho);
  ComplexVector res(dim);
  schro.apply(v.data(), res.data());
  out.residual_trace_norm = trace_norm(devec(res, d));
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> rho_es(out.rho,
                                                      Eigen::EigenvaluesOnly);
  out.min_eigenvalue = rho_es.eigenvalues().minCoeff();
  return out;
}

double dissipative_gap(const LatticeModel& model) {
  const long dim = model.op_space_dim();
  require(dim <= kDenseLimit, "dissipative_gap: dense mode infeasible");
  Superoperator L = assemble(model);
  Eigen::ComplexEigenSolver<ComplexMatrix> es(L.mat, false);
  double gap_edge = -std::numeric_limits<double>::infinity();
  bool any = false;
  for (long i = 0; i < es.eigenvalues().size(); ++i) {
    const double re = es.eigenvalues()(i).real();
    if (std::abs(re) <= 1e-10) continue;  // steady subspace band
    gap_edge = std::max(gap_edge, re);
    any = true;
  }
  if (!any) return 0.0;  // purely imaginary spectrum: no dissipative gap
  return -gap_edge;
}

bool frustration_free_check(const LatticeModel& model, const ComplexMatrix& rho,
                            double tol) {
  const int d = static_cast<int>(model.hilbert_dim());
  require(rho.rows() == d && rho.cols() == d,
          "frustration_free_check: state dimension mismatch");
  for (const auto& term : model.terms) {
    LocalSuperPlan plan =
        make_local_super_plan(hs_adjoint(term.heisenberg_action), term.support,
                              model.n_sites, model.local_dim);
    ComplexVector v = vec(rho);
    ComplexVector res(v.size());
    apply_local_super(plan, v.data(), res.data(), /*accumulate=*/false);
    if (trace_norm(devec(res, d)) > tol) return false;
  }
  return true;
}

double correlation(const LatticeModel& model, const ComplexMatrix& rho,
                   const LocalObservable& A, const LocalObservable& B) {
  const int d = static_cast<int>(model.hilbert_dim());
  require(rho.rows() == d && rho.cols() == d, "correlation: dimension mismatch");
  ComplexMatrix Ae = embed_observable(A, model.n_sites, model.local_dim);
  ComplexMatrix Be = embed_observable(B, model.n_sites, model.local_dim);
  const Complex joint = (rho * Ae * Be).trace();
  const Complex ma = (rho * Ae).trace();
  const Complex mb = (rho * Be).trace();
  return std::abs(joint - ma * mb);
}

double ultra_locality_residual(const LatticeModel& model,
                               const LocalObservable& A, double t,
                               const EvolutionPlan& plan) {
  ComplexMatrix A_emb = embed_observable(A, model.n_sites, model.local_dim);
  ComplexMatrix full = evolve(model, A_emb, t, plan);
  LatticeModel touching = keep_terms_intersecting(model, A.support);
  ComplexMatrix part = evolve(touching, A_emb, t, plan);
  return spectral_norm(full - part);
}

}  // namespace lab
