// Copyright 2026 The qmeas Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include <cmath>
#include <cstdint>
#include <random>

#include <benchmark/benchmark.h>

#include "qmeas/identical_particles.hpp"
#include "qmeas/objectification.hpp"
#include "qmeas/premeasurement.hpp"
#include "qmeas/scenario.hpp"

namespace {

using namespace qmeas;

hilbert::StateVector random_state(std::mt19937_64& rng, Index dim) {
  std::normal_distribution<double> g;
  RawVector v(dim);
  for (Index i = 0; i < dim; ++i) {
    v(i) = Complex(g(rng), g(rng));
  }
  return hilbert::StateVector::normalize(v);
}

void BM_PartialTrace(benchmark::State& state) {
  const Index d = state.range(0);
  std::mt19937_64 rng(1);
  const hilbert::ProductSpace space({d, d});
  const auto rho = hilbert::outer(random_state(rng, d * d));
  for (auto _ : state) {
    benchmark::DoNotOptimize(hilbert::partial_trace(rho, space, 1));
  }
}
BENCHMARK(BM_PartialTrace)->Arg(4)->Arg(16)->Arg(64);

void BM_VonNeumannEntropy(benchmark::State& state) {
  const Index d = state.range(0);
  std::mt19937_64 rng(2);
  const auto rho = hilbert::partial_trace(random_state(rng, d * d), hilbert::ProductSpace({d, d}), 0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(hilbert::von_neumann_entropy(rho));
  }
}
BENCHMARK(BM_VonNeumannEntropy)->Arg(8)->Arg(64)->Arg(256);

void BM_Symmetrize(benchmark::State& state) {
  const auto grid = particles::LatticeGrid::spanning(-20.0, 20.0, state.range(0));
  const auto psi = particles::gaussian_packet(grid, 0.0, 1.0);
  const auto phi = particles::gaussian_packet(grid, 10.0, 1.0);
  for (auto _ : state) {
    benchmark::DoNotOptimize(particles::symmetrize(psi, phi, particles::ExchangeSymmetry::kFermion));
  }
}
BENCHMARK(BM_Symmetrize)->Arg(256)->Arg(512)->Arg(1024);

void BM_TwoParticleExpectation(benchmark::State& state) {
  const auto grid = particles::LatticeGrid::spanning(-20.0, 20.0, state.range(0));
  const auto big = particles::symmetrize(particles::gaussian_packet(grid, 0.0, 1.0),
                                         particles::gaussian_packet(grid, 10.0, 1.0),
                                         particles::ExchangeSymmetry::kBoson);
  const auto a = particles::symmetrized_observable(particles::KernelOperator::position(grid));
  for (auto _ : state) {
    benchmark::DoNotOptimize(particles::expectation_two_particle(a, big));
  }
}
BENCHMARK(BM_TwoParticleExpectation)->Arg(256)->Arg(512)->Arg(1024);

void BM_PremeasurementUnitary(benchmark::State& state) {
  const Index sectors = state.range(0);
  std::vector<double> eigs;
  std::vector<Index> degs;
  for (Index k = 0; k < sectors; ++k) {
    eigs.push_back(static_cast<double>(k));
    degs.push_back(2);
  }
  const auto spec = bcl::BclSpec::canonical(eigs, degs, sectors);
  for (auto _ : state) {
    benchmark::DoNotOptimize(bcl::build_premeasurement_unitary(spec, {static_cast<std::uint64_t>(state.range(1))}));
  }
}
BENCHMARK(BM_PremeasurementUnitary)->Args({2, 0})->Args({4, 0})->Args({8, 0})->Args({8, 7});

void BM_FullMeasurementPipeline(benchmark::State& state) {
  const auto config =
      scenario::parse_scenario(*scenario::bundled_scenario_text("rule2_comparison"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(scenario::run_scenario(config));
  }
}
BENCHMARK(BM_FullMeasurementPipeline);

void BM_DLocalScenario(benchmark::State& state) {
  const auto config =
      scenario::parse_scenario(*scenario::bundled_scenario_text("dlocal_agreement"));
  for (auto _ : state) {
    benchmark::DoNotOptimize(scenario::run_scenario(config));
  }
}
BENCHMARK(BM_DLocalScenario)->Unit(benchmark::kMillisecond);

}  // namespace

BENCHMARK_MAIN();
