#pragma once

// Matrix-free application of local superoperators to vectorized chain
// operators. This is the hot inner loop of the integrator; an OpenMP
// kernel does the work in production and a plain serial reference is
// kept for testing and benchmarking.

#include <cstdint>
#include <vector>

#include "lab/operator_core.hpp"

namespace lab {

/// Precomputed gather/scatter plan for one local superoperator embedded
/// into the operator space of an n-site chain.
struct LocalSuperPlan {
  int n_sites = 0;
  int local_dim = 0;
  Support support;
  int block = 0;                       // d^(2|X|), size of the local op space
  std::vector<Complex> op;             // block x block, row-major
  std::vector<std::int64_t> local_offset;  // address of each local vec index
  std::vector<std::int64_t> rest_base;     // base address per spectator assignment
};

LocalSuperPlan make_local_super_plan(const Superoperator& local,
                                     const Support& support, int n_sites,
                                     int local_dim);

/// out[addr(l,r)] (+)= sum_l' op[l,l'] * in[addr(l',r)] for every spectator r.
/// `in` and `out` must not alias. Serial reference implementation.
void apply_local_super_serial(const LocalSuperPlan& plan, const Complex* in,
                              Complex* out, bool accumulate);

/// Same contract as the serial kernel; parallelized over spectator indices.
/// Writes are disjoint, so the result is bitwise independent of the thread
/// count.
void apply_local_super_omp(const LocalSuperPlan& plan, const Complex* in,
                           Complex* out, bool accumulate);

/// Dispatches to the OpenMP kernel for large spectator counts.
void apply_local_super(const LocalSuperPlan& plan, const Complex* in,
                       Complex* out, bool accumulate);

/// Sum of embedded local superoperators, applied term by term.
struct GeneratorPlan {
  int n_sites = 0;
  int local_dim = 0;
  std::vector<LocalSuperPlan> terms;

  long op_space_dim() const;
  /// out = sum_X (term_X (x) id)(in)
  void apply(const Complex* in, Complex* out) const;
  void apply(const ComplexVector& in, ComplexVector& out) const;
};

/// Dense matrix of an embedded local superoperator (plan applied to basis
/// vectors). Intended for small windows.
ComplexMatrix embedded_super_matrix(const Superoperator& local,
                                    const Support& support, int n_sites,
                                    int local_dim);

}  // namespace lab
