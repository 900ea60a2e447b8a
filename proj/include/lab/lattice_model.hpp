#pragma once

// Chain geometry plus the list of local Lindblad terms; the full Heisenberg
// generator is L = sum_X I_X.

#include <vector>

#include "lab/channels.hpp"
#include "lab/kernels.hpp"

namespace lab {

struct LatticeModel {
  int n_sites = 0;
  int local_dim = 2;
  std::vector<LindbladTerm> terms;
  int range = 1;  // maximal support diameter

  long hilbert_dim() const;
  long op_space_dim() const;
};

/// Structural checks: supports in range, diameters within `range`, generator
/// unital to 1e-12. Throws on violation.
void validate_model(const LatticeModel& model);

/// Matrix-free application plans for the Heisenberg generator.
GeneratorPlan make_generator_plan(const LatticeModel& model);

/// Plans for the Schrodinger generator (term-wise HS adjoints).
GeneratorPlan make_schrodinger_plan(const LatticeModel& model);

/// Model with every term intersecting `region` removed.
LatticeModel drop_terms_intersecting(const LatticeModel& model,
                                     const Support& region);

/// Model keeping only terms that intersect `region`.
LatticeModel keep_terms_intersecting(const LatticeModel& model,
                                     const Support& region);

}  // namespace lab
