#include "lab/kernels.hpp"

#include <stdexcept>

#ifdef _OPENMP
#include <omp.h>
#endif

namespace lab {

namespace {

long ipow(long base, int exp) {
  long r = 1;
  for (int i = 0; i < exp; ++i) r *= base;
  return r;
}

// Grain below which the OpenMP kernel is not worth the fork/join.
constexpr long kParallelGrain = 1 << 14;

}  // namespace

LocalSuperPlan make_local_super_plan(const Superoperator& local,
                                     const Support& support, int n_sites,
                                     int local_dim) {
  const int m = support.size();
  if (m == 0) throw std::invalid_argument("plan: empty support");
  if (support.sites.back() >= n_sites)
    throw std::invalid_argument("plan: support out of range");
  const long d_loc = ipow(local_dim, m);
  if (local.dim != d_loc)
    throw std::invalid_argument("plan: local superoperator dimension mismatch");

  LocalSuperPlan plan;
  plan.n_sites = n_sites;
  plan.local_dim = local_dim;
  plan.support = support;
  plan.block = static_cast<int>(d_loc * d_loc);
  plan.op.resize(static_cast<std::size_t>(plan.block) * plan.block);
  for (int r = 0; r < plan.block; ++r)
    for (int c = 0; c < plan.block; ++c)
      plan.op[static_cast<std::size_t>(r) * plan.block + c] = local.mat(r, c);

  // Digit positions in the flattened (col-digits, row-digits) global vec
  // index: row digit of site s sits at base-d position n-1-s, col digit at
  // 2n-1-s (vec index = col * d^n + row, site 0 most significant).
  auto pos_value = [&](int pos) { return ipow(local_dim, pos); };
  std::vector<int> local_pos;
  for (int k = 0; k < m; ++k) {
    local_pos.push_back(n_sites - 1 - support.sites[k]);
    local_pos.push_back(2 * n_sites - 1 - support.sites[k]);
  }

  // local vec index l = J_loc * d_loc + I_loc, support order MSB-first
  plan.local_offset.assign(plan.block, 0);
  for (long l = 0; l < plan.block; ++l) {
    long row = l % d_loc;
    long col = l / d_loc;
    for (int k = m - 1; k >= 0; --k) {
      plan.local_offset[l] += (row % local_dim) * pos_value(n_sites - 1 - support.sites[k]);
      plan.local_offset[l] += (col % local_dim) * pos_value(2 * n_sites - 1 - support.sites[k]);
      row /= local_dim;
      col /= local_dim;
    }
  }

  std::vector<int> rest_pos;
  for (int pos = 0; pos < 2 * n_sites; ++pos) {
    bool taken = false;
    for (int p : local_pos) taken |= (p == pos);
    if (!taken) rest_pos.push_back(pos);
  }
  const long n_rest = ipow(local_dim, static_cast<int>(rest_pos.size()));
  plan.rest_base.assign(n_rest, 0);
  for (long r = 0; r < n_rest; ++r) {
    long rr = r;
    for (int p : rest_pos) {
      plan.rest_base[r] += (rr % local_dim) * pos_value(p);
      rr /= local_dim;
    }
  }
  return plan;
}

namespace {

inline void apply_block(const LocalSuperPlan& plan, const Complex* in,
                        Complex* out, bool accumulate, std::int64_t base,
                        Complex* gathered) {
  const int B = plan.block;
  for (int l = 0; l < B; ++l) gathered[l] = in[base + plan.local_offset[l]];
  const Complex* op = plan.op.data();
  for (int r = 0; r < B; ++r) {
    Complex acc(0.0, 0.0);
    const Complex* row = op + static_cast<std::size_t>(r) * B;
    for (int c = 0; c < B; ++c) acc += row[c] * gathered[c];
    Complex* slot = out + base + plan.local_offset[r];
    if (accumulate)
      *slot += acc;
    else
      *slot = acc;
  }
}

}  // namespace

void apply_local_super_serial(const LocalSuperPlan& plan, const Complex* in,
                              Complex* out, bool accumulate) {
  std::vector<Complex> gathered(plan.block);
  for (std::int64_t base : plan.rest_base)
    apply_block(plan, in, out, accumulate, base, gathered.data());
}

void apply_local_super_omp(const LocalSuperPlan& plan, const Complex* in,
                           Complex* out, bool accumulate) {
#ifdef _OPENMP
  const long n_rest = static_cast<long>(plan.rest_base.size());
#pragma omp parallel
  {
    std::vector<Complex> gathered(plan.block);
#pragma omp for schedule(static)
    for (long r = 0; r < n_rest; ++r)
      apply_block(plan, in, out, accumulate, plan.rest_base[r], gathered.data());
  }
#else
  apply_local_super_serial(plan, in, out, accumulate);
#endif
}

void apply_local_super(const LocalSuperPlan& plan, const Complex* in,
                       Complex* out, bool accumulate) {
  const long work = static_cast<long>(plan.rest_base.size()) * plan.block * plan.block;
  if (work >= kParallelGrain)
    apply_local_super_omp(plan, in, out, accumulate);
  else
    apply_local_super_serial(plan, in, out, accumulate);
}

long GeneratorPlan::op_space_dim() const {
  return ipow(local_dim, 2 * n_sites);
}

void GeneratorPlan::apply(const Complex* in, Complex* out) const {
  const long dim = op_space_dim();
  std::fill(out, out + dim, Complex(0.0, 0.0));
  for (const auto& term : terms) apply_local_super(term, in, out, true);
}

void GeneratorPlan::apply(const ComplexVector& in, ComplexVector& out) const {
  out.resize(in.size());
  apply(in.data(), out.data());
}

ComplexMatrix embedded_super_matrix(const Superoperator& local,
                                    const Support& support, int n_sites,
                                    int local_dim) {
  LocalSuperPlan plan = make_local_super_plan(local, support, n_sites, local_dim);
  const long dim = ipow(local_dim, 2 * n_sites);
  ComplexMatrix out(dim, dim);
  ComplexVector col(dim), e(dim);
  for (long k = 0; k < dim; ++k) {
    e.setZero();
    e(k) = 1.0;
    apply_local_super(plan, e.data(), col.data(), /*accumulate=*/false);
    out.col(k) = col;
  }
  return out;
}

}  // namespace lab
