#include "lab/channels.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>
#include <unsupported/Eigen/MatrixFunctions>

#include "lab/kernels.hpp"

namespace lab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

double tp_residual(const Superoperator& schrodinger) {
  // trace preservation of S  <=>  S^dag fixes vec(1)
  ComplexVector one = vec(identity_matrix(schrodinger.dim));
  return (schrodinger.mat.adjoint() * one - one).cwiseAbs().maxCoeff();
}

}  // namespace

ComplexMatrix choi(const Superoperator& S) {
  require(S.picture == Picture::schrodinger, "choi: expects Schrodinger picture");
  const int d = S.dim;
  ComplexMatrix J(d * d, d * d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      ComplexMatrix SE = apply_super(S, basis_matrix(i, j, d));
      J.block(i * d, j * d, d, d) = SE;
    }
  return J;
}

double choi_min_eigenvalue(const Superoperator& schrodinger) {
  ComplexMatrix J = choi(schrodinger);
  ComplexMatrix Jh = (J + J.adjoint()) / 2.0;
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(Jh, Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

ChannelSpec make_channel(Superoperator schrodinger, std::string label,
                         double cp_tol, double tp_tol) {
  require(schrodinger.picture == Picture::schrodinger,
          "make_channel: expects Schrodinger picture");
  ChannelSpec spec;
  spec.local_dim = schrodinger.dim;
  spec.label = std::move(label);
  spec.trace_preservation_residual = tp_residual(schrodinger);
  spec.choi_min_eigenvalue = choi_min_eigenvalue(schrodinger);
  if (spec.trace_preservation_residual > tp_tol)
    throw std::invalid_argument("channel '" + spec.label +
                                "' is not trace-preserving");
  if (spec.choi_min_eigenvalue < -cp_tol)
    throw NotCompletelyPositive(
        "channel '" + spec.label + "' is not completely positive (Choi min eig " +
            std::to_string(spec.choi_min_eigenvalue) + ")",
        spec.choi_min_eigenvalue);
  // unitality of S = trace preservation of the Heisenberg adjoint
  ComplexVector one = vec(identity_matrix(schrodinger.dim));
  spec.adjoint_not_trace_preserving =
      (schrodinger.mat * one - one).cwiseAbs().maxCoeff() > 1e-12;
  spec.schrodinger_action = std::move(schrodinger);
  return spec;
}

Superoperator phi_action(double lambda, double t) {
  // vec order (A11, A21, A12, A22)
  ComplexMatrix m(4, 4);
  m << 0.5, 0, 0, 0.5,
       t / 2, lambda / 2, lambda / 2, t / 2,
       t / 2, lambda / 2, lambda / 2, t / 2,
       0.5, 0, 0, 0.5;
  return Superoperator(std::move(m), 2, Picture::schrodinger);
}

ChannelSpec phi_family(double lambda, double t) {
  require(std::abs(lambda) <= 1 && std::abs(t) <= 1,
          "phi_family: parameters must lie in [-1, 1]");
  Superoperator S = phi_action(lambda, t);
  if (std::abs(lambda) + std::abs(t) >= 1.0)
    throw NotCompletelyPositive(
        "phi_family(" + std::to_string(lambda) + ", " + std::to_string(t) +
            "): |lambda| + |t| >= 1, not completely positive (Choi min eig " +
            std::to_string(choi_min_eigenvalue(S)) + ")",
        choi_min_eigenvalue(S));
  return make_channel(std::move(S), "phi(" + std::to_string(lambda) + "," +
                                        std::to_string(t) + ")");
}

Superoperator psi_action(double lambda, double t) {
  ComplexMatrix m = ComplexMatrix::Zero(4, 4);
  m(0, 0) = (1 + lambda + t) / 2;
  m(0, 3) = (1 - lambda + t) / 2;
  m(3, 0) = (1 - lambda - t) / 2;
  m(3, 3) = (1 + lambda - t) / 2;
  return Superoperator(std::move(m), 2, Picture::schrodinger);
}

ChannelSpec psi_family(double lambda, double t) {
  if (!(lambda > -1 && lambda < 1 && t > -1 && t < 1 &&
        1.0 - std::abs(lambda) - std::abs(t) > 0))
    throw std::invalid_argument(
        "psi_family(" + std::to_string(lambda) + ", " + std::to_string(t) +
        "): outside the strict parameter window -1 < lambda,t < 1, "
        "1 - |lambda| - |t| > 0");
  return make_channel(psi_action(lambda, t), "psi(" + std::to_string(lambda) +
                                                 "," + std::to_string(t) + ")");
}

ChannelSpec twirl_channel(const std::vector<ComplexMatrix>& unitaries,
                          const std::vector<double>& weights) {
  require(!unitaries.empty() && unitaries.size() == weights.size(),
          "twirl_channel: need matching unitaries and weights");
  const int d = static_cast<int>(unitaries.front().rows());
  double wsum = 0.0;
  for (double w : weights) {
    require(w >= 0.0, "twirl_channel: negative weight");
    wsum += w;
  }
  require(std::abs(wsum - 1.0) <= 1e-12, "twirl_channel: weights must sum to 1");
  ComplexMatrix m = ComplexMatrix::Zero(d * d, d * d);
  for (std::size_t k = 0; k < unitaries.size(); ++k) {
    const ComplexMatrix& U = unitaries[k];
    require(U.rows() == d && U.cols() == d, "twirl_channel: dimension mismatch");
    double unit_res =
        (U.adjoint() * U - identity_matrix(d)).cwiseAbs().maxCoeff();
    if (unit_res > 1e-12)
      throw std::invalid_argument("twirl_channel: non-unitary representative");
    m += weights[k] * kron(U.conjugate(), U);
  }
  return make_channel(Superoperator(std::move(m), d, Picture::schrodinger),
                      "twirl");
}

LindbladTerm mixture_interaction(const std::vector<MixtureComponent>& components,
                                 const Support& support,
                                 bool require_unique_fixed_point) {
  require(!components.empty(), "mixture_interaction: no components");
  require(support.size() == 2, "mixture_interaction: two-site support expected");
  const int d = components.front().left.local_dim;
  double csum = 0.0;
  for (const auto& comp : components) {
    require(comp.weight > 0.0 && comp.weight <= 1.0,
            "mixture_interaction: weights must lie in (0, 1]");
    require(comp.left.local_dim == d && comp.right.local_dim == d,
            "mixture_interaction: mixed local dimensions");
    csum += comp.weight;
  }
  require(std::abs(csum - 1.0) <= 1e-12,
          "mixture_interaction: weights must sum to 1");

  const long D2 = static_cast<long>(d) * d * d * d;
  Support left({0}), right({1});
  ComplexMatrix composite = ComplexMatrix::Zero(D2, D2);
  for (const auto& comp : components) {
    ComplexMatrix a =
        embedded_super_matrix(comp.left.schrodinger_action, left, 2, d);
    ComplexMatrix b =
        embedded_super_matrix(comp.right.schrodinger_action, right, 2, d);
    composite += comp.weight * (a * b);
  }

  Eigen::ComplexEigenSolver<ComplexMatrix> es(composite, false);
  int fixed_dim = 0;
  for (long i = 0; i < es.eigenvalues().size(); ++i)
    if (std::abs(es.eigenvalues()(i) - Complex(1.0, 0.0)) < 1e-9) ++fixed_dim;
  if (require_unique_fixed_point && fixed_dim != 1)
    throw std::runtime_error(
        "mixture_interaction: fixed-point multiplicity " +
        std::to_string(fixed_dim) + " (unique fixed point requested)");

  LindbladTerm term;
  term.support = support;
  term.label = "mixture" + support.str();
  term.fixed_point_dim = fixed_dim;
  ComplexMatrix heis =
      composite.adjoint() - ComplexMatrix::Identity(D2, D2);
  term.heisenberg_action =
      Superoperator(std::move(heis), d * d, Picture::heisenberg);
  ComplexVector one = vec(identity_matrix(d * d));
  term.theorem_class =
      (composite * one - one).cwiseAbs().maxCoeff() <= 1e-12;
  return term;
}

bool psi_determinant_check(double r1, double r2, double s1, double s2,
                           double t1, double t2, double u1, double u2) {
  auto col = [](double a, double b) {
    return Eigen::Vector4d((1 + a) * (1 + b), (1 + a) * (1 - b),
                           (1 - a) * (1 + b), (1 - a) * (1 - b));
  };
  Eigen::Matrix4d M;
  M.col(0) = col(r1, r2);
  M.col(1) = col(s1, s2);
  M.col(2) = col(t1, t2);
  M.col(3) = col(u1, u2);
  return std::abs(M.determinant()) > 1e-10;
}

LindbladTerm hamiltonian_term(const ComplexMatrix& h, const Support& support) {
  const double herm_res = (h - h.adjoint()).cwiseAbs().maxCoeff();
  require(herm_res <= 1e-12, "hamiltonian_term: h is not Hermitian");
  const int d = static_cast<int>(h.rows());
  ComplexMatrix m =
      Complex(0, 1) * (kron(identity_matrix(d), h) - kron(h.transpose(), identity_matrix(d)));
  LindbladTerm term;
  term.support = support;
  term.label = "hamiltonian" + support.str();
  term.heisenberg_action = Superoperator(std::move(m), d, Picture::heisenberg);
  term.theorem_class = true;  // I*[1] = -i[h,1] = 0
  return term;
}

LindbladTerm depolarization_term(const Support& site, double gamma,
                                 int local_dim) {
  require(gamma > 0.0, "depolarization_term: rate must be positive");
  require(site.size() == 1, "depolarization_term: one-site support expected");
  ComplexMatrix m =
      gamma * (trace_projector_super(local_dim, Picture::heisenberg).mat -
               ComplexMatrix::Identity(local_dim * local_dim, local_dim * local_dim));
  LindbladTerm term;
  term.support = site;
  term.label = "depolarize" + site.str();
  term.heisenberg_action =
      Superoperator(std::move(m), local_dim, Picture::heisenberg);
  term.theorem_class = true;  // self-adjoint generator, annihilates 1
  return term;
}

TermValidation validate_term(const LindbladTerm& term) {
  TermValidation v;
  const Superoperator& I = term.heisenberg_action;
  ComplexVector one = vec(identity_matrix(I.dim));
  v.adjoint_unitality_residual = (I.mat.adjoint() * one).cwiseAbs().maxCoeff();
  v.choi_min_eigenvalue = std::numeric_limits<double>::infinity();
  for (double t : {0.1, 1.0}) {
    ComplexMatrix expo = (t * I.mat).exp();
    v.unitality_residual = std::max(
        v.unitality_residual, (expo * one - one).cwiseAbs().maxCoeff());
    // CP is a statement about the Schrodinger semigroup exp(t I*)
    Superoperator schro((t * I.mat).adjoint().exp(), I.dim, Picture::schrodinger);
    v.choi_min_eigenvalue =
        std::min(v.choi_min_eigenvalue, choi_min_eigenvalue(schro));
  }
  return v;
}

}  // namespace lab
