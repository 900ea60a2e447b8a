#include "lab/models.hpp"

#include <cmath>
#include <random>

#include <Eigen/Dense>

#include "json.hpp"

namespace lab {

namespace {

void require(bool cond, const std::string& msg) {
  if (!cond) throw std::invalid_argument(msg);
}

ComplexMatrix random_hermitian_unit_norm(int d, std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  ComplexMatrix Z(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) Z(i, j) = Complex(gauss(rng), gauss(rng));
  ComplexMatrix H = (Z + Z.adjoint()) / 2.0;
  return H / spectral_norm(H);
}

}  // namespace

LindbladTerm phi_mixture_pair_term(const PhiMixtureParams& p,
                                   const Support& support) {
  const auto& l = p.lambdas;
  require(std::abs(p.t1 + p.r + p.s) <= 1e-12 &&
              std::abs(p.t2 - p.r + p.s) <= 1e-12 &&
              std::abs(p.r * p.r - p.s * p.s) <= 1e-12,
          "phi mixture: t-parameter constraints violated");
  std::vector<MixtureComponent> comps;
  comps.push_back({1.0 / 3.0, phi_family(l[0], p.t1), phi_family(l[1], p.t2)});
  comps.push_back({1.0 / 3.0, phi_family(l[2], p.s), phi_family(l[3], p.s)});
  comps.push_back({1.0 / 3.0, phi_family(l[4], p.r), phi_family(l[5], -p.r)});
  return mixture_interaction(comps, support, /*require_unique_fixed_point=*/true);
}

LatticeModel build_phi_mixture_chain(int n_sites, const PhiMixtureParams& p) {
  LatticeModel model;
  model.n_sites = n_sites;
  model.local_dim = 2;
  model.range = 1;
  for (int i = 0; i + 1 < n_sites; ++i)
    model.terms.push_back(phi_mixture_pair_term(p, Support({i, i + 1})));
  return model;
}

LindbladTerm psi_mixture_pair_term(const PsiMixtureParams& p,
                                   const Support& support) {
  require(psi_determinant_check(p.t_pairs[0].first, p.t_pairs[0].second,
                                p.t_pairs[1].first, p.t_pairs[1].second,
                                p.t_pairs[2].first, p.t_pairs[2].second,
                                p.t_pairs[3].first, p.t_pairs[3].second),
          "psi mixture: sign-pattern determinant vanishes; no unital weights");
  // Solve sum c = 1, sum c t_a = sum c t_b = sum c t_a t_b = 0.
  Eigen::Matrix4d M;
  for (int k = 0; k < 4; ++k) {
    M(0, k) = 1.0;
    M(1, k) = p.t_pairs[k].first;
    M(2, k) = p.t_pairs[k].second;
    M(3, k) = p.t_pairs[k].first * p.t_pairs[k].second;
  }
  Eigen::Vector4d rhs(1.0, 0.0, 0.0, 0.0);
  Eigen::Vector4d c = M.fullPivLu().solve(rhs);
  for (int k = 0; k < 4; ++k)
    require(c(k) > 0.0 && c(k) <= 1.0,
            "psi mixture: solved weights fall outside (0, 1]");
  std::vector<MixtureComponent> comps;
  for (int k = 0; k < 4; ++k)
    comps.push_back({c(k), psi_family(p.lambdas[2 * k], p.t_pairs[k].first),
                     psi_family(p.lambdas[2 * k + 1], p.t_pairs[k].second)});
  return mixture_interaction(comps, support, /*require_unique_fixed_point=*/true);
}

LatticeModel build_psi_mixture_chain(int n_sites, const PsiMixtureParams& p) {
  LatticeModel model;
  model.n_sites = n_sites;
  model.local_dim = 2;
  model.range = 1;
  for (int i = 0; i + 1 < n_sites; ++i)
    model.terms.push_back(psi_mixture_pair_term(p, Support({i, i + 1})));
  return model;
}

LocalizationModel build_hamiltonian_depolarizing(int n_sites, double gamma,
                                                 HamiltonianKind kind,
                                                 std::uint64_t seed) {
  LocalizationModel out;
  out.model.n_sites = n_sites;
  out.model.local_dim = 2;
  out.model.range = 1;
  std::mt19937_64 rng(seed);
  for (int i = 0; i + 1 < n_sites; ++i) {
    ComplexMatrix h;
    if (kind == HamiltonianKind::heisenberg) {
      h = (kron(pauli_x(), pauli_x()) + kron(pauli_y(), pauli_y()) +
           kron(pauli_z(), pauli_z())) /
          3.0;
    } else {
      h = random_hermitian_unit_norm(4, rng);
    }
    out.max_h_norm = std::max(out.max_h_norm, spectral_norm(h));
    out.model.terms.push_back(hamiltonian_term(h, Support({i, i + 1})));
  }
  for (int i = 0; i < n_sites; ++i)
    out.model.terms.push_back(depolarization_term(Support({i}), gamma));
  return out;
}

std::vector<ComplexMatrix> twirl_group_reps(TwirlGroup group) {
  switch (group) {
    case TwirlGroup::pauli:
      return {identity_matrix(2), pauli_x(), pauli_y(), pauli_z()};
    case TwirlGroup::z2:
      return {identity_matrix(2), pauli_z()};
  }
  return {};
}

LatticeModel build_twirl_chain(int n_sites, TwirlGroup group, double rate) {
  require(rate > 0, "twirl chain: rate must be positive");
  auto reps = twirl_group_reps(group);
  std::vector<double> weights(reps.size(), 1.0 / reps.size());
  ChannelSpec W = twirl_channel(reps, weights);
  std::vector<MixtureComponent> comps{{1.0, W, W}};
  LatticeModel model;
  model.n_sites = n_sites;
  model.local_dim = 2;
  model.range = 1;
  for (int i = 0; i + 1 < n_sites; ++i) {
    LindbladTerm term = mixture_interaction(comps, Support({i, i + 1}));
    term.heisenberg_action.mat *= rate;
    term.label = "twirl" + term.support.str();
    model.terms.push_back(std::move(term));
  }
  return model;
}

LatticeModel build_clustering_model(int n_sites, double gamma,
                                    const PhiMixtureParams& params) {
  LatticeModel model = build_phi_mixture_chain(n_sites, params);
  for (int i = 0; i < n_sites; ++i)
    model.terms.push_back(depolarization_term(Support({i}), gamma));
  return model;
}

LatticeModel build_from_config(const ExperimentConfig& cfg) try {
  const auto params = nlohmann::json::parse(cfg.model.params_json);
  const std::string& fam = cfg.model.family;
  if (fam == "phi_mixture" || fam == "mixture_depolarizing") {
    PhiMixtureParams p;
    if (params.contains("lambdas")) {
      auto ls = params.at("lambdas");
      if (!ls.is_array() || ls.size() != 6)
        throw ConfigError("phi mixture: lambdas must have 6 entries");
      for (int k = 0; k < 6; ++k) p.lambdas[k] = ls.at(k).get<double>();
    }
    p.t1 = params.value("t1", p.t1);
    p.t2 = params.value("t2", p.t2);
    p.s = params.value("s", p.s);
    p.r = params.value("r", p.r);
    if (fam == "phi_mixture") return build_phi_mixture_chain(cfg.model.n_sites, p);
    return build_clustering_model(cfg.model.n_sites,
                                  params.value("gamma", 1.0), p);
  }
  if (fam == "psi_mixture") {
    PsiMixtureParams p;
    return build_psi_mixture_chain(cfg.model.n_sites, p);
  }
  if (fam == "hamiltonian_depolarizing") {
    const std::string kind = params.value("h_kind", "random");
    return build_hamiltonian_depolarizing(
               cfg.model.n_sites, params.value("gamma", 1.0),
               kind == "heisenberg" ? HamiltonianKind::heisenberg
                                    : HamiltonianKind::random,
               cfg.seed)
        .model;
  }
  if (fam == "twirl_chain") {
    const std::string group = params.value("group", "pauli");
    return build_twirl_chain(cfg.model.n_sites,
                             group == "z2" ? TwirlGroup::z2 : TwirlGroup::pauli,
                             params.value("rate", 1.0));
  }
  throw ConfigError("unknown model family " + fam);
} catch (const nlohmann::json::exception& e) {
  throw ConfigError(std::string("model params: ") + e.what());
}

}  // namespace lab
