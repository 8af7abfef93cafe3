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

#include <cstdio>
#include <fstream>

#include "json.hpp"
#include "qmeas/scenario.hpp"
#include "scenario_internal.hpp"

namespace qmeas::scenario {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kSchema = "qmeas.run_report/1";

std::string format_double(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) {
    return s;
  }
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') {
      out += '"';
    }
    out += ch;
  }
  return out + "\"";
}

ScenarioKind kind_from_string(const std::string& s) {
  for (ScenarioKind k : {ScenarioKind::kSymmetrization, ScenarioKind::kDLocal, ScenarioKind::kBcl,
                         ScenarioKind::kFullMeasurement}) {
    if (s == to_string(k)) {
      return k;
    }
  }
  throw ParseError("report: unknown scenario kind '" + s + "'");
}

std::string render_json(const RunReport& r, bool include_timing) {
  ojson j;
  j["schema"] = kSchema;
  j["scenario"] = ojson::parse(r.scenario_echo);
  ojson metrics = ojson::object();
  for (const Metric& m : r.metrics) {
    metrics[m.key] = m.value;
  }
  j["metrics"] = std::move(metrics);
  ojson verdicts = ojson::array();
  std::size_t failed = 0;
  for (const Verdict& v : r.verdicts) {
    verdicts.push_back(
        {{"name", v.name}, {"residual", v.residual}, {"tolerance", v.tolerance}, {"pass", v.pass}});
    failed += v.pass ? 0 : 1;
  }
  j["verdicts"] = std::move(verdicts);
  j["summary"] = {{"verdicts", r.verdicts.size()}, {"failed", failed}, {"pass", failed == 0}};
  if (include_timing) {
    j["timing"] = {{"wall_seconds", r.wall_seconds}};
  }
  return j.dump(2) + "\n";
}

std::string render_csv(const RunReport& r) {
  std::string out = "metric,value,tolerance,verdict\n";
  for (const Metric& m : r.metrics) {
    out += csv_field(m.key) + "," + format_double(m.value) + ",,\n";
  }
  for (const Verdict& v : r.verdicts) {
    out += csv_field("check." + v.name) + "," + format_double(v.residual) + "," +
           format_double(v.tolerance) + "," + (v.pass ? "pass" : "fail") + "\n";
  }
  return out;
}

}  // namespace

std::string render_report(const RunReport& report, ReportFormat format, bool include_timing) {
  return format == ReportFormat::kJson ? render_json(report, include_timing) : render_csv(report);
}

void emit_report(const RunReport& report, ReportFormat format, const std::string& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) {
    throw IoError("cannot open '" + path + "' for writing");
  }
  out << render_report(report, format);
  out.flush();
  if (!out) {
    throw IoError("error writing '" + path + "'");
  }
}

RunReport report_from_json(std::string_view text) {
  try {
    const ojson j = ojson::parse(text.begin(), text.end());
    if (j.at("schema").get<std::string>() != kSchema) {
      throw ParseError("report: unsupported schema");
    }
    RunReport r;
    const ojson& scenario = j.at("scenario");
    r.scenario_echo = scenario.dump(2);
    r.scenario_name = scenario.at("name").get<std::string>();
    r.kind = kind_from_string(scenario.at("kind").get<std::string>());
    for (const auto& item : j.at("metrics").items()) {
      r.metrics.push_back({item.key(), item.value().get<double>()});
    }
    for (const ojson& v : j.at("verdicts")) {
      r.verdicts.push_back({v.at("name").get<std::string>(), v.at("residual").get<double>(),
                            v.at("tolerance").get<double>(), v.at("pass").get<bool>()});
    }
    if (j.contains("timing")) {
      r.wall_seconds = j["timing"].at("wall_seconds").get<double>();
    }
    return r;
  } catch (const ojson::exception& e) {
    throw ParseError(std::string("report: ") + e.what());
  }
}

std::vector<std::string> bundled_scenario_names() {
  std::vector<std::string> names;
  for (const auto& [name, text] : detail::bundled_scenarios()) {
    names.emplace_back(name);
  }
  return names;
}

std::optional<std::string> bundled_scenario_text(std::string_view name) {
  for (const auto& [n, text] : detail::bundled_scenarios()) {
    if (n == name) {
      return std::string(text);
    }
  }
  return std::nullopt;
}

}  // namespace qmeas::scenario
