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

#include <algorithm>
#include <chrono>
#include <cmath>
#include <optional>
#include <string>

#include "qmeas/identical_particles.hpp"
#include "qmeas/objectification.hpp"
#include "qmeas/premeasurement.hpp"
#include "qmeas/scenario.hpp"
#include "scenario_internal.hpp"

namespace qmeas::scenario {

using particles::ExchangeSymmetry;

namespace {

class Recorder {
 public:
  explicit Recorder(RunReport& report) : report_(report) {}

  void metric(std::string key, double value) {
    report_.metrics.push_back({std::move(key), value});
  }
  void flag(std::string key, bool value) { metric(std::move(key), value ? 1.0 : 0.0); }

  void verdict(std::string name, double residual, double tolerance) {
    report_.verdicts.push_back({std::move(name), residual, tolerance, residual <= tolerance});
  }

 private:
  RunReport& report_;
};

template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const Error& e) {
    throw StageError(name, e.what());
  }
}

particles::LatticeGrid make_grid(const GridConfig& g) {
  return particles::LatticeGrid(g.x_min, g.dx, g.n_points);
}

particles::KernelOperator make_kernel(KernelChoice choice, const particles::LatticeGrid& grid) {
  return choice == KernelChoice::kPosition ? particles::KernelOperator::position(grid)
                                           : particles::KernelOperator::identity(grid);
}

// ---------------------------------------------------------------------------

void run_symmetrization(const ScenarioConfig& c, Recorder& rec) {
  const auto grid = stage("grid", [&] { return make_grid(*c.grid); });
  const auto psi = stage("gaussian_packet",
                         [&] { return particles::gaussian_packet(grid, c.packets[0].center, c.packets[0].width); });
  const auto phi = stage("gaussian_packet",
                         [&] { return particles::gaussian_packet(grid, c.packets[1].center, c.packets[1].width); });
  const auto a = make_kernel(c.observable, grid);
  const auto sym_a = stage("symmetrized_observable", [&] { return particles::symmetrized_observable(a); });

  const double overlap = std::abs(psi.inner(phi));
  const double e_psi = particles::expectation_single(a, psi).real();
  const double e_phi = particles::expectation_single(a, phi).real();
  rec.metric("grid.dx", grid.dx());
  rec.metric("grid.n_points", static_cast<double>(grid.n_points()));
  rec.metric("overlap_abs", overlap);
  rec.metric("single_avg.psi", e_psi);
  rec.metric("single_avg.phi", e_phi);
  rec.verdict("exchange_symmetry", sym_a.exchange_asymmetry(), c.tolerances.invariant);

  std::vector<double> two_particle;
  for (ExchangeSymmetry sym : c.symmetries) {
    const std::string tag = particles::to_string(sym);
    const auto state = stage("symmetrize", [&] { return particles::symmetrize(psi, phi, sym); });
    const double e2 = particles::expectation_two_particle(sym_a, state).real();
    two_particle.push_back(e2);
    rec.metric("nu." + tag, state.nu());
    rec.metric("two_particle_avg." + tag, e2);
    rec.metric("discrepancy." + tag, e2 - e_psi);
    rec.verdict("discrepancy_theorem." + tag, std::abs(e2 - (e_psi + e_phi)), c.tolerances.agreement);
    if (overlap < tol::kInvariant) {
      rec.verdict("nu_orthogonal." + tag, std::abs(state.nu() - 1.0 / std::sqrt(2.0)), c.tolerances.nu);
    }
  }
  if (two_particle.size() == 2 && overlap < tol::kInvariant) {
    rec.verdict("symmetry_independence", std::abs(two_particle[0] - two_particle[1]),
                c.tolerances.symmetry);
  }
}

void run_dlocal(const ScenarioConfig& c, Recorder& rec) {
  const auto grid = stage("grid", [&] { return make_grid(*c.grid); });
  const auto psi = stage("gaussian_packet",
                         [&] { return particles::gaussian_packet(grid, c.packets[0].center, c.packets[0].width); });
  const auto phi = stage("gaussian_packet",
                         [&] { return particles::gaussian_packet(grid, c.packets[1].center, c.packets[1].width); });
  const auto domain = stage("domain", [&] {
    return particles::Domain::from_interval(grid, c.domain->lower, c.domain->upper);
  });
  const auto a = make_kernel(c.observable, grid);
  const auto localized = particles::localize(a, domain);

  const double raw_residual = particles::d_locality_residual(a, domain);
  const double local_residual = particles::d_locality_residual(localized, domain);
  const double e_psi = particles::expectation_single(a, psi).real();
  const double e_phi = particles::expectation_single(a, phi).real();
  const double psi_leak = particles::mass_outside(psi, domain);
  const double phi_inside = grid.dx() * phi.values().squaredNorm() - particles::mass_outside(phi, domain);

  rec.metric("grid.dx", grid.dx());
  rec.metric("grid.n_points", static_cast<double>(grid.n_points()));
  rec.metric("domain.points", static_cast<double>(domain.count()));
  rec.metric("support.psi_mass_outside", psi_leak);
  rec.metric("support.phi_mass_inside", phi_inside);
  rec.metric("d_locality_residual.raw", raw_residual);
  rec.flag("is_d_local.raw", raw_residual <= 0.0);
  rec.metric("d_locality_residual.localized", local_residual);
  rec.flag("is_d_local.localized", local_residual <= 0.0);
  rec.metric("single_avg.psi", e_psi);
  rec.metric("single_avg.phi", e_phi);
  rec.verdict("localized_is_d_local", local_residual, 0.0);

  const auto sym_raw = particles::symmetrized_observable(a);
  for (ExchangeSymmetry sym : c.symmetries) {
    const std::string tag = particles::to_string(sym);
    const auto check = stage("dlocal_agreement_check", [&] {
      return particles::dlocal_agreement_check(a, domain, psi, phi, sym, c.tolerances.support_mass);
    });
    const auto state = particles::symmetrize(psi, phi, sym);
    const double e2_raw = particles::expectation_two_particle(sym_raw, state).real();
    rec.metric("two_particle_avg_localized." + tag, check.two_particle.real());
    rec.metric("agreement_difference." + tag, check.difference);
    rec.metric("two_particle_avg_raw." + tag, e2_raw);
    rec.metric("raw_difference." + tag, e2_raw - e_psi);
    rec.verdict("agreement." + tag, check.difference, c.tolerances.agreement);
    rec.verdict("raw_discrepancy." + tag, std::abs((e2_raw - e_psi) - e_phi), c.tolerances.agreement);
  }
}

// ---------------------------------------------------------------------------

struct MeasurementRun {
  bcl::BclSpec spec;
  bcl::PremeasurementResult result;
  objectification::GemengeDecomposition gemenge;
};

// Returns nullopt when the measurement condition fails: the verdict is
// recorded and the unitary stages are skipped.
std::optional<MeasurementRun> run_bcl(const ScenarioConfig& c, Recorder& rec) {
  const bcl::BclSpec spec = stage("bcl_spec", [&] { return detail::make_spec(*c.bcl); });
  const auto phi = stage("initial_state", [&] {
    return hilbert::StateVector::from_amplitudes(*c.initial_state);
  });
  const double t_inv = c.tolerances.invariant;

  const bcl::ValidationReport validation = bcl::validate_spec(spec);
  for (const bcl::Residual& r : validation.invariants) {
    rec.verdict("spec." + r.name, r.value, t_inv);
  }
  rec.flag("measurement_condition", validation.measurement_condition);
  rec.verdict("measurement_condition", validation.measurement_residual, t_inv);
  if (!validation.measurement_condition) {
    return std::nullopt;
  }

  bcl::PremeasurementResult result =
      stage("premeasure", [&] { return bcl::premeasure(spec, phi); });

  // U must send every phi_kl (x) psi to phi'_kl (x) psi_k.
  double extension = 0.0;
  for (std::size_t k = 0; k < spec.sector_count(); ++k) {
    for (std::size_t l = 0; l < spec.degeneracy(k); ++l) {
      const RawVector image = result.unitary.apply(
          hilbert::kron(spec.system_eigenbasis()[k][l].amplitudes(), spec.ready_state().amplitudes()));
      const RawVector expected = hilbert::kron(spec.transfer_family()[k][l].amplitudes(),
                                               spec.pointer_basis()[k].amplitudes());
      extension = std::max(extension, (image - expected).cwiseAbs().maxCoeff());
    }
  }
  rec.metric("unitarity_residual", result.unitary.unitarity_residual());
  rec.metric("extension_residual", extension);
  rec.verdict("unitarity", result.unitary.unitarity_residual(), t_inv);
  rec.verdict("extension", extension, t_inv);

  double p_sum = 0.0;
  double formula = 0.0;
  for (std::size_t k = 0; k < result.probabilities.size(); ++k) {
    const double p = result.probabilities[k];
    rec.metric("probability." + std::to_string(k), p);
    p_sum += p;
    double direct = 0.0;
    for (const Complex& ckl : result.coefficients[k]) {
      direct += std::norm(ckl);
    }
    formula = std::max(formula, std::abs(p - direct));
  }
  rec.verdict("probability_sum", std::abs(p_sum - 1.0), t_inv);
  rec.verdict("probability_formula", formula, c.tolerances.compare);
  rec.verdict("reconstruction", result.reconstruction_residual(spec), t_inv);

  std::vector<hilbert::StateVector> present;
  for (const auto& s : result.conditional_states) {
    if (s) {
      present.push_back(*s);
    }
  }
  rec.verdict("conditional_orthonormality", hilbert::gram_residual(present), t_inv);

  const auto app = bcl::apparatus_marginal(result, spec);
  const double app_distance =
      hilbert::trace_distance(app, bcl::pointer_mixture(result.probabilities, spec));
  rec.metric("apparatus_marginal_distance", app_distance);
  rec.verdict("apparatus_marginal", app_distance, t_inv);

  const double shannon = hilbert::shannon_entropy(result.probabilities);
  const double s_sys = hilbert::von_neumann_entropy(bcl::system_marginal(result, spec));
  rec.metric("entropy.shannon", shannon);
  rec.metric("entropy.system_marginal", s_sys);
  rec.verdict("schmidt_entropy", std::abs(s_sys - shannon), c.tolerances.entropy);

  // Rule 2 fires at the end of every premeasurement run.
  auto gemenge = stage("apply_rule2", [&] { return objectification::apply_rule2(result, spec); });
  const double s_rule2 = hilbert::von_neumann_entropy(
      objectification::gemenge_density_matrix(gemenge, spec.space()));
  rec.metric("rule2.components", static_cast<double>(gemenge.size()));
  rec.metric("entropy_rule2", s_rule2);
  rec.verdict("rule2_entropy", std::abs(s_rule2 - shannon), c.tolerances.entropy);

  return MeasurementRun{spec, std::move(result), std::move(gemenge)};
}

objectification::MatrixOperator make_witness(WitnessChoice w, const bcl::BclSpec& spec) {
  switch (w) {
    case WitnessChoice::kSigmaX:
      return objectification::sigma_x_witness(spec);
    case WitnessChoice::kObservable:
      return objectification::observable_witness(spec);
    case WitnessChoice::kPointerDiagonal:
      return objectification::pointer_diagonal_witness(spec);
  }
  return objectification::sigma_x_witness(spec);
}

void run_full_measurement(const ScenarioConfig& c, Recorder& rec) {
  const std::optional<MeasurementRun> maybe_run = run_bcl(c, rec);
  if (!maybe_run) {
    return;
  }
  const MeasurementRun& run = *maybe_run;
  const bcl::BclSpec& spec = run.spec;
  const auto space = spec.space();
  const double t_inv = c.tolerances.invariant;

  const auto witness = stage("witness", [&] { return make_witness(c.witness, spec); });
  const auto report = stage("compare_states", [&] {
    return objectification::compare_states(run.result, run.gemenge, spec, witness);
  });
  rec.metric("coherence.unitary", report.pointer_block_coherence_unitary);
  rec.metric("coherence.rule2", report.pointer_block_coherence_rule2);
  rec.metric("marginal_distance.system", report.marginal_agreement_system);
  rec.metric("marginal_distance.apparatus", report.marginal_agreement_apparatus);
  rec.metric("witness.unitary", report.witness_expectation_unitary);
  rec.metric("witness.rule2", report.witness_expectation_rule2);
  rec.metric("entropy.unitary_state", report.entropy_unitary_state);
  rec.metric("entropy.rule2_state", report.entropy_rule2_state);
  rec.metric("entropy_gap", report.entropy_gap());

  const double shannon = hilbert::shannon_entropy(run.result.probabilities);
  rec.verdict("marginal_preservation.system", report.marginal_agreement_system, t_inv);
  rec.verdict("marginal_preservation.apparatus", report.marginal_agreement_apparatus, t_inv);
  rec.verdict("rule2_coherence_zero", report.pointer_block_coherence_rule2, c.tolerances.coherence_zero);
  rec.verdict("entropy_gap", std::abs(report.entropy_gap() - shannon), c.tolerances.entropy);

  const auto diagonal = objectification::pointer_diagonal_witness(spec);
  const auto unitary_state = hilbert::outer(run.result.final_state);
  const auto rule2_state = objectification::gemenge_density_matrix(run.gemenge, space);
  rec.verdict("diagonal_observable_agreement",
              std::abs(diagonal.expectation(unitary_state).real() -
                       diagonal.expectation(rule2_state).real()),
              t_inv);

  const auto dephased_unitary =
      objectification::pointer_block_dephase(unitary_state, spec.pointer_basis(), space);
  rec.verdict("dephasing_matches_rule2", hilbert::trace_distance(dephased_unitary, rule2_state), t_inv);
  const auto dephased_rule2 =
      objectification::pointer_block_dephase(rule2_state, spec.pointer_basis(), space);
  rec.verdict("rule2_idempotence",
              (dephased_rule2.entries() - rule2_state.entries()).cwiseAbs().maxCoeff(),
              c.tolerances.compare);

  const bool pure = std::abs(rule2_state.purity() - 1.0) <= t_inv;
  rec.verdict("purity_boundary", pure == (run.gemenge.size() == 1) ? 0.0 : 1.0, 0.0);
}

}  // namespace

bool RunReport::all_pass() const {
  return std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
}

std::optional<double> RunReport::metric(std::string_view key) const {
  for (const Metric& m : metrics) {
    if (m.key == key) {
      return m.value;
    }
  }
  return std::nullopt;
}

const Verdict* RunReport::verdict(std::string_view name) const {
  for (const Verdict& v : verdicts) {
    if (v.name == name) {
      return &v;
    }
  }
  return nullptr;
}

RunReport run_scenario(const ScenarioConfig& config) {
  const bool lattice =
      config.kind == ScenarioKind::kSymmetrization || config.kind == ScenarioKind::kDLocal;
  if (lattice && (!config.grid || config.packets.size() != 2)) {
    throw ValidationError("grid", "lattice scenarios need a grid and two packets");
  }
  if (config.kind == ScenarioKind::kDLocal && !config.domain) {
    throw ValidationError("domain", "dlocal scenarios need a domain");
  }
  if (!lattice && (!config.bcl || !config.initial_state)) {
    throw ValidationError("bcl", "measurement scenarios need a bcl block and an initial state");
  }
  const auto start = std::chrono::steady_clock::now();
  RunReport report;
  report.scenario_name = config.name;
  report.kind = config.kind;
  report.scenario_echo = scenario_to_json(config);
  Recorder rec(report);
  switch (config.kind) {
    case ScenarioKind::kSymmetrization:
      run_symmetrization(config, rec);
      break;
    case ScenarioKind::kDLocal:
      run_dlocal(config, rec);
      break;
    case ScenarioKind::kBcl:
      (void)run_bcl(config, rec);
      break;
    case ScenarioKind::kFullMeasurement:
      run_full_measurement(config, rec);
      break;
  }
  report.wall_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return report;
}

}  // namespace qmeas::scenario
