#pragma once

// Ready-made chain models for the experiments.

#include <array>
#include <cstdint>

#include "lab/config.hpp"
#include "lab/lattice_model.hpp"

namespace lab {

/// Three-component Phi-mixture pair term. The t-parameters obey
/// t1 + r + s = t2 - r + s = r^2 - s^2 = 0 so the composite is unital, and
/// the lambdas obey s*l4 + r*l6 = 0 and t2*l1 + s*l3 - r*l5 = 0 so the
/// mixed lambda/t moments vanish; both are needed for the structural
/// equations to hold.
struct PhiMixtureParams {
  std::array<double, 6> lambdas{0.25, 0.35, 0.2, 0.3, 0.3, 0.3};
  double t1 = 0.0;
  double t2 = 0.4;
  double s = -0.2;
  double r = 0.2;
};

LindbladTerm phi_mixture_pair_term(const PhiMixtureParams& params,
                                   const Support& support);

/// Nearest-neighbor chain of Phi-mixture terms.
LatticeModel build_phi_mixture_chain(int n_sites,
                                     const PhiMixtureParams& params = {});

/// Four-component Psi-mixture pair term; weights are solved from the
/// unitality conditions (possible iff the sign-pattern determinant is
/// nonzero) and must land in (0, 1]. The default lambdas also cancel the
/// mixed lambda/t moments, as for the Phi mixture.
struct PsiMixtureParams {
  std::array<double, 8> lambdas{0.4, 0.2, 0.3, 0.25, 0.35, 0.15, 0.45, 0.3};
  // t-parameters of the four components, (left, right) per component
  std::array<std::pair<double, double>, 4> t_pairs{
      std::pair<double, double>{0.3, 0.3},
      {0.3, -0.3},
      {-0.3, 0.3},
      {-0.3, -0.3}};
};

LindbladTerm psi_mixture_pair_term(const PsiMixtureParams& params,
                                   const Support& support);

LatticeModel build_psi_mixture_chain(int n_sites,
                                     const PsiMixtureParams& params = {});

enum class HamiltonianKind { heisenberg, random };

struct LocalizationModel {
  LatticeModel model;
  double max_h_norm = 0.0;  // max_j ||h_{j,j+1}||
};

/// Nearest-neighbor Hamiltonian chain with one-site depolarizers of rate
/// gamma; h has spectral norm 1 per bond (Heisenberg exchange or a seeded
/// random Hermitian per bond).
LocalizationModel build_hamiltonian_depolarizing(int n_sites, double gamma,
                                                 HamiltonianKind kind,
                                                 std::uint64_t seed);

enum class TwirlGroup { pauli, z2 };

std::vector<ComplexMatrix> twirl_group_reps(TwirlGroup group);

/// Chain of two-site twirl-difference terms rate (W (x) W - id); covariant
/// for the group generating W.
LatticeModel build_twirl_chain(int n_sites, TwirlGroup group, double rate);

/// Phi-mixture chain plus a depolarizer on every site (frustration free,
/// uniform fixed point).
LatticeModel build_clustering_model(int n_sites, double gamma,
                                    const PhiMixtureParams& params = {});

/// Builds the model named by a parsed config (localization models get their
/// gamma from the config sweep instead).
LatticeModel build_from_config(const ExperimentConfig& cfg);

}  // namespace lab
