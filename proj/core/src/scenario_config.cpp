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
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"
#include "qmeas/premeasurement.hpp"
#include "qmeas/scenario.hpp"
#include "scenario_internal.hpp"

namespace qmeas::scenario {

using json = nlohmann::json;
using ojson = nlohmann::ordered_json;
using particles::ExchangeSymmetry;

namespace {

std::string join(const std::string& path, std::string_view key) {
  return path.empty() ? std::string(key) : path + "." + std::string(key);
}

std::string at(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

void allow_keys(const json& obj, const std::string& path,
                std::initializer_list<std::string_view> keys) {
  if (!obj.is_object()) {
    throw ValidationError(path.empty() ? "<root>" : path, "expected an object");
  }
  for (const auto& item : obj.items()) {
    if (std::find(keys.begin(), keys.end(), item.key()) == keys.end()) {
      throw ValidationError(join(path, item.key()), "unknown key '" + item.key() + "'");
    }
  }
}

const json& require(const json& obj, std::string_view key, const std::string& path) {
  const auto it = obj.find(std::string(key));
  if (it == obj.end()) {
    throw ValidationError(join(path, key), "required key is missing");
  }
  return *it;
}

double get_number(const json& j, const std::string& path) {
  if (!j.is_number()) {
    throw ValidationError(path, "expected a number");
  }
  const double v = j.get<double>();
  if (!std::isfinite(v)) {
    throw ValidationError(path, "must be finite");
  }
  return v;
}

Index get_integer(const json& j, const std::string& path) {
  if (!j.is_number_integer()) {
    throw ValidationError(path, "expected an integer");
  }
  return j.get<Index>();
}

std::string get_string(const json& j, const std::string& path) {
  if (!j.is_string()) {
    throw ValidationError(path, "expected a string");
  }
  return j.get<std::string>();
}

bool get_bool(const json& j, const std::string& path) {
  if (!j.is_boolean()) {
    throw ValidationError(path, "expected true or false");
  }
  return j.get<bool>();
}

const json& get_array(const json& j, const std::string& path) {
  if (!j.is_array()) {
    throw ValidationError(path, "expected an array");
  }
  return j;
}

Complex get_complex(const json& j, const std::string& path) {
  if (j.is_number()) {
    return {get_number(j, path), 0.0};
  }
  if (j.is_array() && j.size() == 2) {
    return {get_number(j[0], at(path, 0)), get_number(j[1], at(path, 1))};
  }
  throw ValidationError(path, "expected a number or a [re, im] pair");
}

RawVector get_vector(const json& j, const std::string& path, Index expected_dim) {
  get_array(j, path);
  if (static_cast<Index>(j.size()) != expected_dim) {
    throw ValidationError(path, "expected " + std::to_string(expected_dim) + " amplitudes, got " +
                                    std::to_string(j.size()));
  }
  RawVector v(expected_dim);
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Index>(i)) = get_complex(j[i], at(path, i));
  }
  return v;
}

std::vector<VectorList> get_sector_family(const json& j, const std::string& path,
                                          const std::vector<Index>& degeneracies, Index dim) {
  get_array(j, path);
  if (j.size() != degeneracies.size()) {
    throw ValidationError(path, "expected one entry per eigenvalue sector");
  }
  std::vector<VectorList> out;
  for (std::size_t k = 0; k < j.size(); ++k) {
    const std::string sp = at(path, k);
    get_array(j[k], sp);
    if (static_cast<Index>(j[k].size()) != degeneracies[k]) {
      throw ValidationError(sp, "expected " + std::to_string(degeneracies[k]) +
                                    " vectors (the sector degeneracy)");
    }
    VectorList sector;
    for (std::size_t l = 0; l < j[k].size(); ++l) {
      sector.push_back(get_vector(j[k][l], at(sp, l), dim));
    }
    out.push_back(std::move(sector));
  }
  return out;
}

template <typename Enum>
Enum get_choice(const json& j, const std::string& path,
                std::initializer_list<std::pair<std::string_view, Enum>> choices) {
  const std::string s = get_string(j, path);
  std::string allowed;
  for (const auto& [name, value] : choices) {
    if (s == name) {
      return value;
    }
    allowed += allowed.empty() ? "" : ", ";
    allowed += name;
  }
  throw ValidationError(path, "'" + s + "' is not one of: " + allowed);
}

bool is_power_of_two(Index n) { return n > 0 && (n & (n - 1)) == 0; }

GridConfig parse_grid(const json& j, const std::string& path) {
  allow_keys(j, path, {"x_min", "x_max", "dx", "n_points"});
  GridConfig g;
  g.x_min = get_number(require(j, "x_min", path), join(path, "x_min"));
  g.n_points = get_integer(require(j, "n_points", path), join(path, "n_points"));
  if (!is_power_of_two(g.n_points) || g.n_points < 64 || g.n_points > 4096) {
    throw ValidationError(join(path, "n_points"), "must be a power of two between 64 and 4096");
  }
  const bool has_dx = j.contains("dx");
  const bool has_max = j.contains("x_max");
  if (has_dx == has_max) {
    throw ValidationError(path, "exactly one of 'dx' or 'x_max' is required");
  }
  if (has_dx) {
    g.dx = get_number(j["dx"], join(path, "dx"));
    if (!(g.dx > 0.0)) {
      throw ValidationError(join(path, "dx"), "must be positive");
    }
  } else {
    const double x_max = get_number(j["x_max"], join(path, "x_max"));
    if (!(x_max > g.x_min)) {
      throw ValidationError(join(path, "x_max"), "must exceed x_min");
    }
    g.dx = (x_max - g.x_min) / static_cast<double>(g.n_points - 1);
  }
  return g;
}

std::vector<PacketConfig> parse_packets(const json& j, const std::string& path,
                                        const GridConfig& grid) {
  get_array(j, path);
  if (j.size() != 2) {
    throw ValidationError(path, "exactly two packets (psi, phi) are required");
  }
  const double x_max = grid.x_min + static_cast<double>(grid.n_points - 1) * grid.dx;
  std::vector<PacketConfig> out;
  for (std::size_t i = 0; i < j.size(); ++i) {
    const std::string p = at(path, i);
    allow_keys(j[i], p, {"center", "width"});
    PacketConfig pc;
    pc.center = get_number(require(j[i], "center", p), join(p, "center"));
    pc.width = get_number(require(j[i], "width", p), join(p, "width"));
    if (pc.center < grid.x_min || pc.center > x_max) {
      throw ValidationError(join(p, "center"), "must lie inside the grid");
    }
    if (!(pc.width > 2.0 * grid.dx)) {
      throw ValidationError(join(p, "width"), "must exceed 2 dx");
    }
    out.push_back(pc);
  }
  return out;
}

DomainConfig parse_domain(const json& j, const std::string& path) {
  allow_keys(j, path, {"lower", "upper"});
  DomainConfig d;
  d.lower = get_number(require(j, "lower", path), join(path, "lower"));
  d.upper = get_number(require(j, "upper", path), join(path, "upper"));
  if (!(d.lower < d.upper)) {
    throw ValidationError(join(path, "upper"), "must exceed lower");
  }
  return d;
}

BclConfig parse_bcl(const json& j, const std::string& path) {
  allow_keys(j, path, {"system_dim", "apparatus_dim", "eigenvalues", "degeneracies", "basis",
                       "transfer", "ready_state"});
  BclConfig b;
  b.system_dim = get_integer(require(j, "system_dim", path), join(path, "system_dim"));
  b.apparatus_dim = get_integer(require(j, "apparatus_dim", path), join(path, "apparatus_dim"));
  if (b.system_dim < 1) {
    throw ValidationError(join(path, "system_dim"), "must be positive");
  }
  if (b.apparatus_dim < 1) {
    throw ValidationError(join(path, "apparatus_dim"), "must be positive");
  }
  if (b.system_dim * b.apparatus_dim > tol::kMaxDenseDim) {
    throw ValidationError(join(path, "apparatus_dim"),
                          "system_dim * apparatus_dim must not exceed 4096");
  }
  const std::string ep = join(path, "eigenvalues");
  const json& ev = get_array(require(j, "eigenvalues", path), ep);
  if (ev.empty()) {
    throw ValidationError(ep, "at least one eigenvalue is required");
  }
  for (std::size_t k = 0; k < ev.size(); ++k) {
    const double o = get_number(ev[k], at(ep, k));
    if (std::find(b.eigenvalues.begin(), b.eigenvalues.end(), o) != b.eigenvalues.end()) {
      throw ValidationError(at(ep, k), "eigenvalues must be distinct");
    }
    b.eigenvalues.push_back(o);
  }
  const std::size_t sectors = b.eigenvalues.size();
  if (j.contains("degeneracies")) {
    const std::string dp = join(path, "degeneracies");
    const json& dg = get_array(j["degeneracies"], dp);
    if (dg.size() != sectors) {
      throw ValidationError(dp, "expected one degeneracy per eigenvalue");
    }
    for (std::size_t k = 0; k < dg.size(); ++k) {
      const Index d = get_integer(dg[k], at(dp, k));
      if (d < 1) {
        throw ValidationError(at(dp, k), "must be positive");
      }
      b.degeneracies.push_back(d);
    }
  } else {
    b.degeneracies.assign(sectors, 1);
  }
  Index total = 0;
  for (Index d : b.degeneracies) {
    total += d;
  }
  if (total != b.system_dim) {
    throw ValidationError(join(path, "degeneracies"),
                          "degeneracies sum to " + std::to_string(total) +
                              " but system_dim is " + std::to_string(b.system_dim));
  }
  if (b.apparatus_dim < static_cast<Index>(sectors)) {
    throw ValidationError(join(path, "apparatus_dim"),
                          "must be at least the number of eigenvalues");
  }

  if (j.contains("basis")) {
    const std::string bp = join(path, "basis");
    const json& basis = j["basis"];
    if (basis.is_string()) {
      if (basis.get<std::string>() != "canonical") {
        throw ValidationError(bp, "expected \"canonical\" or an object of explicit vectors");
      }
    } else {
      allow_keys(basis, bp, {"system_eigenbasis", "pointer_basis"});
      if (basis.contains("system_eigenbasis")) {
        b.system_eigenbasis = get_sector_family(basis["system_eigenbasis"],
                                                join(bp, "system_eigenbasis"), b.degeneracies,
                                                b.system_dim);
      }
      if (basis.contains("pointer_basis")) {
        const std::string pp = join(bp, "pointer_basis");
        const json& pb = get_array(basis["pointer_basis"], pp);
        if (pb.size() != sectors) {
          throw ValidationError(pp, "expected one pointer state per eigenvalue");
        }
        VectorList pointers;
        for (std::size_t k = 0; k < pb.size(); ++k) {
          pointers.push_back(get_vector(pb[k], at(pp, k), b.apparatus_dim));
        }
        b.pointer_basis = std::move(pointers);
      }
    }
  }
  if (j.contains("transfer")) {
    const std::string tp = join(path, "transfer");
    const json& t = j["transfer"];
    if (t.is_string()) {
      if (t.get<std::string>() != "default") {
        throw ValidationError(tp, "expected \"default\" or an explicit family");
      }
    } else {
      b.transfer_family = get_sector_family(t, tp, b.degeneracies, b.system_dim);
    }
  }
  if (j.contains("ready_state")) {
    b.ready_state = get_vector(j["ready_state"], join(path, "ready_state"), b.apparatus_dim);
  }
  return b;
}

Tolerances parse_tolerances(const json& j, const std::string& path) {
  allow_keys(j, path, {"invariant", "compare", "agreement", "nu", "symmetry", "entropy",
                       "coherence_zero", "support_mass"});
  Tolerances t;
  auto field = [&](const char* key, double& slot) {
    if (j.contains(key)) {
      slot = get_number(j[key], join(path, key));
      if (slot < 0.0) {
        throw ValidationError(join(path, key), "must be non-negative");
      }
    }
  };
  field("invariant", t.invariant);
  field("compare", t.compare);
  field("agreement", t.agreement);
  field("nu", t.nu);
  field("symmetry", t.symmetry);
  field("entropy", t.entropy);
  field("coherence_zero", t.coherence_zero);
  field("support_mass", t.support_mass);
  if (!(t.support_mass > 0.0 && t.support_mass < 1.0)) {
    throw ValidationError(join(path, "support_mass"), "must lie in (0, 1)");
  }
  return t;
}

OutputConfig parse_output(const json& j, const std::string& path) {
  allow_keys(j, path, {"path", "format"});
  OutputConfig o;
  if (j.contains("path")) {
    o.path = get_string(j["path"], join(path, "path"));
  }
  if (j.contains("format")) {
    o.format = get_choice<ReportFormat>(j["format"], join(path, "format"),
                                        {{"json", ReportFormat::kJson}, {"csv", ReportFormat::kCsv}});
  }
  return o;
}

void forbid(const json& root, std::string_view key, ScenarioKind kind) {
  if (root.contains(std::string(key))) {
    throw ValidationError(std::string(key), std::string("not used by kind '") + to_string(kind) + "'");
  }
}

ojson vector_json(const RawVector& v) {
  ojson out = ojson::array();
  for (Index i = 0; i < v.size(); ++i) {
    out.push_back(ojson::array({v(i).real(), v(i).imag()}));
  }
  return out;
}

ojson family_json(const std::vector<VectorList>& family) {
  ojson out = ojson::array();
  for (const VectorList& sector : family) {
    ojson s = ojson::array();
    for (const RawVector& v : sector) {
      s.push_back(vector_json(v));
    }
    out.push_back(std::move(s));
  }
  return out;
}

const char* kernel_name(KernelChoice k) {
  return k == KernelChoice::kPosition ? "position" : "identity";
}

const char* witness_name(WitnessChoice w) {
  switch (w) {
    case WitnessChoice::kSigmaX:
      return "sigma_x";
    case WitnessChoice::kObservable:
      return "observable";
    case WitnessChoice::kPointerDiagonal:
      return "pointer_diagonal";
  }
  return "sigma_x";
}

}  // namespace

const char* to_string(ScenarioKind kind) {
  switch (kind) {
    case ScenarioKind::kSymmetrization:
      return "symmetrization";
    case ScenarioKind::kDLocal:
      return "dlocal";
    case ScenarioKind::kBcl:
      return "bcl";
    case ScenarioKind::kFullMeasurement:
      return "full_measurement";
  }
  return "bcl";
}

const char* to_string(ReportFormat format) {
  return format == ReportFormat::kJson ? "json" : "csv";
}

ScenarioConfig parse_scenario(std::string_view text) {
  json root;
  try {
    root = json::parse(text.begin(), text.end());
  } catch (const json::parse_error& e) {
    throw ParseError(std::string("scenario is not valid JSON: ") + e.what());
  }
  allow_keys(root, "", {"name", "description", "kind", "grid", "packets", "domain", "observable",
                        "symmetries", "bcl", "initial_state", "normalize_initial_state",
                        "witness", "tolerances", "output"});
  ScenarioConfig c;
  if (root.contains("name")) {
    c.name = get_string(root["name"], "name");
  }
  if (root.contains("description")) {
    c.description = get_string(root["description"], "description");
  }
  c.kind = get_choice<ScenarioKind>(require(root, "kind", ""), "kind",
                                    {{"symmetrization", ScenarioKind::kSymmetrization},
                                     {"dlocal", ScenarioKind::kDLocal},
                                     {"bcl", ScenarioKind::kBcl},
                                     {"full_measurement", ScenarioKind::kFullMeasurement}});
  if (root.contains("tolerances")) {
    c.tolerances = parse_tolerances(root["tolerances"], "tolerances");
  }
  if (root.contains("output")) {
    c.output = parse_output(root["output"], "output");
  }

  const bool lattice = c.kind == ScenarioKind::kSymmetrization || c.kind == ScenarioKind::kDLocal;
  if (lattice) {
    for (std::string_view k : {"bcl", "initial_state", "normalize_initial_state", "witness"}) {
      forbid(root, k, c.kind);
    }
    if (c.kind == ScenarioKind::kSymmetrization) {
      forbid(root, "domain", c.kind);
    }
    c.grid = parse_grid(require(root, "grid", ""), "grid");
    c.packets = parse_packets(require(root, "packets", ""), "packets", *c.grid);
    if (c.kind == ScenarioKind::kDLocal) {
      c.domain = parse_domain(require(root, "domain", ""), "domain");
    }
    if (root.contains("observable")) {
      c.observable = get_choice<KernelChoice>(
          root["observable"], "observable",
          {{"position", KernelChoice::kPosition}, {"identity", KernelChoice::kIdentity}});
    }
    if (root.contains("symmetries")) {
      const json& s = get_array(root["symmetries"], "symmetries");
      if (s.empty()) {
        throw ValidationError("symmetries", "at least one symmetry is required");
      }
      c.symmetries.clear();
      for (std::size_t i = 0; i < s.size(); ++i) {
        const auto sym = get_choice<ExchangeSymmetry>(
            s[i], at("symmetries", i),
            {{"boson", ExchangeSymmetry::kBoson}, {"fermion", ExchangeSymmetry::kFermion}});
        if (std::find(c.symmetries.begin(), c.symmetries.end(), sym) != c.symmetries.end()) {
          throw ValidationError(at("symmetries", i), "duplicate symmetry");
        }
        c.symmetries.push_back(sym);
      }
    }
    return c;
  }

  for (std::string_view k : {"grid", "packets", "domain", "observable", "symmetries"}) {
    forbid(root, k, c.kind);
  }
  c.bcl = parse_bcl(require(root, "bcl", ""), "bcl");
  if (root.contains("normalize_initial_state")) {
    c.normalize_initial_state = get_bool(root["normalize_initial_state"], "normalize_initial_state");
  }
  RawVector phi = get_vector(require(root, "initial_state", ""), "initial_state", c.bcl->system_dim);
  const double norm = phi.norm();
  if (c.normalize_initial_state) {
    if (!(norm >= tol::kNullNorm)) {
      throw ValidationError("initial_state", "cannot normalize a zero vector");
    }
    phi /= norm;
  } else if (std::abs(norm - 1.0) > tol::kInvariant) {
    throw ValidationError("initial_state", "not unit norm (set normalize_initial_state to rescale)");
  }
  c.initial_state = std::move(phi);
  if (root.contains("witness")) {
    c.witness = get_choice<WitnessChoice>(root["witness"], "witness",
                                          {{"sigma_x", WitnessChoice::kSigmaX},
                                           {"observable", WitnessChoice::kObservable},
                                           {"pointer_diagonal", WitnessChoice::kPointerDiagonal}});
  }
  if (c.witness == WitnessChoice::kSigmaX && c.bcl->eigenvalues.size() < 2) {
    throw ValidationError("witness", "sigma_x needs at least two eigenvalue sectors");
  }
  try {
    (void)detail::make_spec(*c.bcl);
  } catch (const SpecInvalid& e) {
    throw ValidationError("bcl", e.what());
  } catch (const NotNormalized& e) {
    throw ValidationError("bcl", e.what());
  }
  return c;
}

ScenarioConfig load_scenario(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) {
    throw IoError("cannot open scenario file '" + path + "'");
  }
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) {
    throw IoError("error reading scenario file '" + path + "'");
  }
  return parse_scenario(buf.str());
}

std::string scenario_to_json(const ScenarioConfig& c) {
  ojson j;
  j["name"] = c.name;
  j["description"] = c.description;
  j["kind"] = to_string(c.kind);
  if (c.grid) {
    j["grid"] = {{"x_min", c.grid->x_min}, {"dx", c.grid->dx}, {"n_points", c.grid->n_points}};
  }
  if (!c.packets.empty()) {
    ojson p = ojson::array();
    for (const PacketConfig& pc : c.packets) {
      p.push_back({{"center", pc.center}, {"width", pc.width}});
    }
    j["packets"] = std::move(p);
  }
  if (c.domain) {
    j["domain"] = {{"lower", c.domain->lower}, {"upper", c.domain->upper}};
  }
  if (c.grid) {
    j["observable"] = kernel_name(c.observable);
    ojson s = ojson::array();
    for (ExchangeSymmetry sym : c.symmetries) {
      s.push_back(particles::to_string(sym));
    }
    j["symmetries"] = std::move(s);
  }
  if (c.bcl) {
    const BclConfig& b = *c.bcl;
    ojson bj;
    bj["system_dim"] = b.system_dim;
    bj["apparatus_dim"] = b.apparatus_dim;
    bj["eigenvalues"] = b.eigenvalues;
    bj["degeneracies"] = b.degeneracies;
    if (b.system_eigenbasis || b.pointer_basis) {
      ojson basis;
      if (b.system_eigenbasis) {
        basis["system_eigenbasis"] = family_json(*b.system_eigenbasis);
      }
      if (b.pointer_basis) {
        ojson pb = ojson::array();
        for (const RawVector& v : *b.pointer_basis) {
          pb.push_back(vector_json(v));
        }
        basis["pointer_basis"] = std::move(pb);
      }
      bj["basis"] = std::move(basis);
    } else {
      bj["basis"] = "canonical";
    }
    if (b.transfer_family) {
      bj["transfer"] = family_json(*b.transfer_family);
    } else {
      bj["transfer"] = "default";
    }
    if (b.ready_state) {
      bj["ready_state"] = vector_json(*b.ready_state);
    }
    j["bcl"] = std::move(bj);
  }
  if (c.initial_state) {
    j["initial_state"] = vector_json(*c.initial_state);
    j["normalize_initial_state"] = c.normalize_initial_state;
    j["witness"] = witness_name(c.witness);
  }
  const Tolerances& t = c.tolerances;
  j["tolerances"] = {{"invariant", t.invariant},       {"compare", t.compare},
                     {"agreement", t.agreement},       {"nu", t.nu},
                     {"symmetry", t.symmetry},         {"entropy", t.entropy},
                     {"coherence_zero", t.coherence_zero}, {"support_mass", t.support_mass}};
  ojson out;
  out["format"] = to_string(c.output.format);
  if (c.output.path) {
    out["path"] = *c.output.path;
  }
  j["output"] = std::move(out);
  return j.dump(2);
}

// ---------------------------------------------------------------------------

namespace detail {

bcl::BclSpec make_spec(const BclConfig& b) {
  using hilbert::StateVector;
  if (!b.system_eigenbasis && !b.pointer_basis && !b.transfer_family && !b.ready_state) {
    return bcl::BclSpec::canonical(b.eigenvalues, b.degeneracies, b.apparatus_dim);
  }
  const bcl::BclSpec canonical =
      bcl::BclSpec::canonical(b.eigenvalues, b.degeneracies, b.apparatus_dim);
  auto to_family = [](const std::vector<VectorList>& f) {
    bcl::SectorFamily out;
    for (const VectorList& sector : f) {
      std::vector<StateVector> s;
      for (const RawVector& v : sector) {
        s.push_back(StateVector::from_amplitudes(v));
      }
      out.push_back(std::move(s));
    }
    return out;
  };
  bcl::BclSpec::Parts parts{
      b.eigenvalues,
      b.system_eigenbasis ? to_family(*b.system_eigenbasis) : canonical.system_eigenbasis(),
      canonical.pointer_basis(),
      b.ready_state ? StateVector::from_amplitudes(*b.ready_state) : canonical.ready_state(),
      {}};
  if (b.pointer_basis) {
    parts.pointer_basis.clear();
    for (const RawVector& v : *b.pointer_basis) {
      parts.pointer_basis.push_back(StateVector::from_amplitudes(v));
    }
  }
  parts.transfer_family = b.transfer_family ? to_family(*b.transfer_family) : parts.system_eigenbasis;
  return bcl::BclSpec::create(std::move(parts));
}

}  // namespace detail

}  // namespace qmeas::scenario
