#include "lab/lattice_model.hpp"

#include <stdexcept>

namespace lab {

namespace {
long ipow(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}
}  // namespace

long LatticeModel::hilbert_dim() const { return ipow(local_dim, n_sites); }
long LatticeModel::op_space_dim() const { return ipow(local_dim, 2 * n_sites); }

void validate_model(const LatticeModel& model) {
  if (model.n_sites <= 0) throw std::invalid_argument("model: no sites");
  for (const auto& term : model.terms) {
    if (term.support.empty())
      throw std::invalid_argument("model: term with empty support");
    if (term.support.sites.back() >= model.n_sites)
      throw std::invalid_argument("model: term support out of range");
    if (term.support.diameter() > model.range)
      throw std::invalid_argument("model: term diameter exceeds range");
    const long d_loc = ipow(model.local_dim, term.support.size());
    if (term.heisenberg_action.dim != d_loc)
      throw std::invalid_argument("model: term dimension mismatch");
  }
  // generator unitality: L[1] = 0
  GeneratorPlan gen = make_generator_plan(model);
  ComplexVector one = vec(identity_matrix(static_cast<int>(model.hilbert_dim())));
  ComplexVector out;
  gen.apply(one, out);
  if (out.cwiseAbs().maxCoeff() > 1e-12 * std::max(1.0, one.cwiseAbs().maxCoeff()))
    throw std::invalid_argument("model: generator is not unital (L[1] != 0)");
}

GeneratorPlan make_generator_plan(const LatticeModel& model) {
  GeneratorPlan gen;
  gen.n_sites = model.n_sites;
  gen.local_dim = model.local_dim;
  for (const auto& term : model.terms)
    gen.terms.push_back(make_local_super_plan(term.heisenberg_action,
                                              term.support, model.n_sites,
                                              model.local_dim));
  return gen;
}

GeneratorPlan make_schrodinger_plan(const LatticeModel& model) {
  GeneratorPlan gen;
  gen.n_sites = model.n_sites;
  gen.local_dim = model.local_dim;
  for (const auto& term : model.terms)
    gen.terms.push_back(make_local_super_plan(hs_adjoint(term.heisenberg_action),
                                              term.support, model.n_sites,
                                              model.local_dim));
  return gen;
}

LatticeModel drop_terms_intersecting(const LatticeModel& model,
                                     const Support& region) {
  LatticeModel out = model;
  out.terms.clear();
  for (const auto& term : model.terms)
    if (region.empty() || !term.support.intersects(region))
      out.terms.push_back(term);
  return out;
}

LatticeModel keep_terms_intersecting(const LatticeModel& model,
                                     const Support& region) {
  LatticeModel out = model;
  out.terms.clear();
  for (const auto& term : model.terms)
    if (!region.empty() && term.support.intersects(region))
      out.terms.push_back(term);
  return out;
}

}  // namespace lab
