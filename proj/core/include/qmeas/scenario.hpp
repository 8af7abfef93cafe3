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

// Scenario files, the pipelines they drive, and run reports.
//
// A scenario is a single JSON document with a strict schema (unknown keys are
// errors); see docs/scenario_format.md. A run produces a RunReport holding
// computed metrics and, separately, verdicts (residual vs tolerance) so the
// numbers can be re-judged with other tolerances downstream.

#ifndef QMEAS_SCENARIO_HPP
#define QMEAS_SCENARIO_HPP

#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qmeas/hilbert.hpp"
#include "qmeas/identical_particles.hpp"

namespace qmeas::scenario {

enum class ScenarioKind { kSymmetrization, kDLocal, kBcl, kFullMeasurement };
enum class KernelChoice { kPosition, kIdentity };
enum class WitnessChoice { kSigmaX, kObservable, kPointerDiagonal };
enum class ReportFormat { kJson, kCsv };

const char* to_string(ScenarioKind kind);
const char* to_string(ReportFormat format);

struct GridConfig {
  double x_min = 0.0;
  double dx = 0.0;
  Index n_points = 0;
};

struct PacketConfig {
  double center = 0.0;
  double width = 0.0;
};

struct DomainConfig {
  double lower = 0.0;
  double upper = 0.0;
};

using VectorList = std::vector<RawVector>;

struct BclConfig {
  Index system_dim = 0;
  Index apparatus_dim = 0;
  std::vector<double> eigenvalues;
  std::vector<Index> degeneracies;
  /// Explicit eigenbasis per sector; absent means canonical.
  std::optional<std::vector<VectorList>> system_eigenbasis;
  /// Explicit pointer states; absent means canonical e_k.
  std::optional<VectorList> pointer_basis;
  /// Explicit transfer family; absent means phi'_kl = phi_kl.
  std::optional<std::vector<VectorList>> transfer_family;
  /// Absent means e_0.
  std::optional<RawVector> ready_state;
};

/// Verdict tolerances. Defaults are the library's contract values.
struct Tolerances {
  double invariant = tol::kInvariant;
  double compare = tol::kCompare;
  double agreement = tol::kExpectationAgreement;
  double nu = 1e-8;
  double symmetry = 1e-8;
  double entropy = 1e-8;
  double coherence_zero = 1e-14;
  double support_mass = tol::kSupportMass;

  bool operator==(const Tolerances&) const = default;
};

struct OutputConfig {
  std::optional<std::string> path;
  ReportFormat format = ReportFormat::kJson;
};

struct ScenarioConfig {
  std::string name;
  std::string description;
  ScenarioKind kind = ScenarioKind::kBcl;

  // Lattice scenarios.
  std::optional<GridConfig> grid;
  std::vector<PacketConfig> packets;
  std::optional<DomainConfig> domain;
  KernelChoice observable = KernelChoice::kPosition;
  std::vector<particles::ExchangeSymmetry> symmetries{particles::ExchangeSymmetry::kBoson,
                                                      particles::ExchangeSymmetry::kFermion};

  // Measurement scenarios.
  std::optional<BclConfig> bcl;
  std::optional<RawVector> initial_state;
  bool normalize_initial_state = false;
  WitnessChoice witness = WitnessChoice::kSigmaX;

  Tolerances tolerances;
  OutputConfig output;
};

/// Parses and validates scenario text. Throws ParseError for malformed JSON
/// and ValidationError (with key path) for schema violations.
ScenarioConfig parse_scenario(std::string_view text);

/// Reads and parses a scenario file. Throws IoError if unreadable.
ScenarioConfig load_scenario(const std::string& path);

/// Canonical JSON text of a validated config, defaults filled in. Parsing it
/// back yields an equivalent config.
std::string scenario_to_json(const ScenarioConfig& config);

struct Metric {
  std::string key;
  double value;
};

struct Verdict {
  std::string name;
  double residual;
  double tolerance;
  bool pass;
};

struct RunReport {
  std::string scenario_name;
  ScenarioKind kind = ScenarioKind::kBcl;
  /// scenario_to_json of the config that produced the report.
  std::string scenario_echo;
  std::vector<Metric> metrics;
  std::vector<Verdict> verdicts;
  double wall_seconds = 0.0;

  bool all_pass() const;
  std::optional<double> metric(std::string_view key) const;
  const Verdict* verdict(std::string_view name) const;
};

/// A module error annotated with the pipeline stage that raised it.
class StageError : public Error {
 public:
  StageError(std::string stage, const std::string& message)
      : Error("stage '" + stage + "': " + message), stage_(std::move(stage)) {}
  const std::string& stage() const noexcept { return stage_; }

 private:
  std::string stage_;
};

/// Runs the pipeline selected by config.kind. Deterministic in its metrics
/// and verdicts; only wall_seconds varies between runs.
RunReport run_scenario(const ScenarioConfig& config);

/// Serializes a report. JSON keys appear in a fixed order and doubles are
/// written in shortest round-trip form; `include_timing = false` drops the
/// timing section, leaving a byte-stable payload.
std::string render_report(const RunReport& report, ReportFormat format,
                          bool include_timing = true);

/// Writes render_report output to `path`. Throws IoError on failure.
void emit_report(const RunReport& report, ReportFormat format, const std::string& path);

/// Inverse of render_report(..., kJson, ...). Throws ParseError.
RunReport report_from_json(std::string_view text);

/// Names of the scenarios compiled into the library.
std::vector<std::string> bundled_scenario_names();
/// Text of a bundled scenario, or nullopt for an unknown name.
std::optional<std::string> bundled_scenario_text(std::string_view name);

}  // namespace qmeas::scenario

#endif  // QMEAS_SCENARIO_HPP
