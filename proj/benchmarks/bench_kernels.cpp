// Serial-vs-OpenMP comparison of the local-superoperator kernel and the
// generator application it feeds.

#include <random>

#include <benchmark/benchmark.h>

#include "lab/kernels.hpp"
#include "lab/models.hpp"

namespace {

using namespace lab;

struct Fixture {
  LatticeModel model;
  GeneratorPlan gen;
  ComplexVector in, out;

  explicit Fixture(int n_sites) {
    model = build_phi_mixture_chain(n_sites);
    gen = make_generator_plan(model);
    std::mt19937_64 rng(1234);
    std::normal_distribution<double> gauss(0.0, 1.0);
    in.resize(model.op_space_dim());
    for (long i = 0; i < in.size(); ++i) in(i) = Complex(gauss(rng), gauss(rng));
    out.resize(in.size());
  }
};

void BM_local_term_serial(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  const LocalSuperPlan& plan = f.gen.terms.front();
  for (auto _ : state) {
    apply_local_super_serial(plan, f.in.data(), f.out.data(), false);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long>(plan.rest_base.size()) * plan.block);
}

void BM_local_term_omp(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  const LocalSuperPlan& plan = f.gen.terms.front();
  for (auto _ : state) {
    apply_local_super_omp(plan, f.in.data(), f.out.data(), false);
    benchmark::DoNotOptimize(f.out.data());
  }
  state.SetItemsProcessed(state.iterations() *
                          static_cast<long>(plan.rest_base.size()) * plan.block);
}

void BM_generator_serial(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    std::fill(f.out.data(), f.out.data() + f.out.size(), Complex(0, 0));
    for (const auto& term : f.gen.terms)
      apply_local_super_serial(term, f.in.data(), f.out.data(), true);
    benchmark::DoNotOptimize(f.out.data());
  }
}

void BM_generator_omp(benchmark::State& state) {
  Fixture f(static_cast<int>(state.range(0)));
  for (auto _ : state) {
    f.gen.apply(f.in.data(), f.out.data());
    benchmark::DoNotOptimize(f.out.data());
  }
}

}  // namespace

BENCHMARK(BM_local_term_serial)->Arg(6)->Arg(7)->Arg(8)->Arg(9);
BENCHMARK(BM_local_term_omp)->Arg(6)->Arg(7)->Arg(8)->Arg(9);
BENCHMARK(BM_generator_serial)->Arg(6)->Arg(7)->Arg(8);
BENCHMARK(BM_generator_omp)->Arg(6)->Arg(7)->Arg(8);

BENCHMARK_MAIN();
