#pragma once

// Sweep configuration (flat JSON key-value documents plus overrides), CSV and
// JSON emitters, run manifests and gnuplot scripts.

#include <nlohmann/json.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "qphase/errors.hpp"
#include "qphase/sweep.hpp"

namespace qphase::io {

using json = nlohmann::json;

class IoError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Configuration

namespace detail {

enum class KeyType { String, Number, Integer };

struct KeyInfo {
  const char* name;
  KeyType type;
};

inline constexpr KeyInfo kKeys[] = {
    {"swept", KeyType::String},       {"from", KeyType::Number},        {"to", KeyType::Number},
    {"steps", KeyType::Integer},      {"metric", KeyType::String},      {"alpha", KeyType::Number},
    {"g", KeyType::Number},           {"t", KeyType::Number},           {"gt", KeyType::Number},
    {"delta", KeyType::Number},       {"theta", KeyType::Number},       {"theta1", KeyType::Number},
    {"beta", KeyType::Number},        {"nmax", KeyType::Integer},       {"tail_tol", KeyType::Number},
    {"nmax_ceiling", KeyType::Integer}, {"field_mode", KeyType::String}, {"formula_mode", KeyType::String},
};

inline const KeyInfo* find_key(const std::string& name) {
  for (const auto& k : kKeys)
    if (name == k.name) return &k;
  return nullptr;
}

inline void check_document(const json& doc, const std::string& origin) {
  if (!doc.is_object()) throw ConfigError(origin + ": expected a JSON object of scalars");
  for (const auto& [key, value] : doc.items()) {
    const KeyInfo* info = find_key(key);
    if (info == nullptr) throw ConfigError(key + ": unknown key (" + origin + ")");
    if (value.is_null()) continue;
    bool ok = false;
    switch (info->type) {
      case KeyType::String: ok = value.is_string(); break;
      case KeyType::Number: ok = value.is_number(); break;
      case KeyType::Integer: ok = value.is_number_integer(); break;
    }
    if (!ok) {
      const char* want = info->type == KeyType::String ? "a string" : info->type == KeyType::Number ? "a number" : "an integer";
      throw ConfigError(key + ": type mismatch, expected " + want + " (" + origin + ")");
    }
  }
}

inline std::optional<double> opt_number(const json& doc, const char* key) {
  if (!doc.contains(key) || doc[key].is_null()) return std::nullopt;
  return doc[key].get<double>();
}

inline double required_number(const json& doc, const char* key) {
  if (!doc.contains(key) || doc[key].is_null()) throw ConfigError(std::string(key) + ": missing required parameter");
  return doc[key].get<double>();
}

inline std::string required_string(const json& doc, const char* key) {
  if (!doc.contains(key) || doc[key].is_null()) throw ConfigError(std::string(key) + ": missing required parameter");
  return doc[key].get<std::string>();
}

}  // namespace detail

inline json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  try {
    return json::parse(in);
  } catch (const json::parse_error& e) {
    throw ConfigError("'" + path.string() + "': invalid JSON: " + e.what());
  }
}

/// Merges `overrides` over `file_doc` and resolves a SweepSpec. Both documents
/// must be flat objects with known keys; null values in overrides are ignored.
inline SweepSpec spec_from_json(const json& file_doc, const json& overrides = json::object(),
                                std::size_t default_ceiling = TruncationPolicy::kDefaultCeiling) {
  detail::check_document(file_doc, "config");
  detail::check_document(overrides, "flags");
  json doc = file_doc;
  for (const auto& [key, value] : overrides.items())
    if (!value.is_null()) doc[key] = value;

  SweepSpec s;
  s.metric = parse_metric(detail::required_string(doc, "metric"));
  s.swept = parse_sweep_variable(detail::required_string(doc, "swept"));
  s.from = detail::required_number(doc, "from");
  s.to = detail::required_number(doc, "to");
  if (!doc.contains("steps") || doc["steps"].is_null()) throw ConfigError("steps: missing required parameter");
  s.steps = doc["steps"].get<int>();
  s.alpha = detail::opt_number(doc, "alpha");
  s.g = detail::opt_number(doc, "g");
  s.t = detail::opt_number(doc, "t");
  s.gt = detail::opt_number(doc, "gt");
  s.delta = detail::opt_number(doc, "delta");
  s.theta = detail::opt_number(doc, "theta");
  s.theta1 = detail::opt_number(doc, "theta1");
  s.beta = detail::opt_number(doc, "beta");
  if (doc.contains("nmax") && !doc["nmax"].is_null()) {
    const auto n = doc["nmax"].get<long long>();
    if (n < 8) throw ConfigError("nmax: must be >= 8");
    s.nmax = static_cast<std::size_t>(n);
  }
  if (auto tol = detail::opt_number(doc, "tail_tol")) s.tail_tol = *tol;
  s.nmax_ceiling = default_ceiling;
  if (doc.contains("nmax_ceiling") && !doc["nmax_ceiling"].is_null()) {
    const auto n = doc["nmax_ceiling"].get<long long>();
    if (n < 8) throw ConfigError("nmax_ceiling: must be >= 8");
    s.nmax_ceiling = static_cast<std::size_t>(n);
  }
  try {
    if (doc.contains("field_mode") && !doc["field_mode"].is_null())
      s.field_mode = parse_field_mode(doc["field_mode"].get<std::string>());
    if (doc.contains("formula_mode") && !doc["formula_mode"].is_null())
      s.formula_mode = parse_formula_mode(doc["formula_mode"].get<std::string>());
  } catch (const ConfigError&) {
    throw;
  } catch (const DomainError& e) {
    throw ConfigError(std::string("mode: ") + e.what());
  }
  s.validate();
  return s;
}

inline SweepSpec parse_config(const std::optional<std::filesystem::path>& file, const json& overrides = json::object(),
                              std::size_t default_ceiling = TruncationPolicy::kDefaultCeiling) {
  const json file_doc = file ? read_json_file(*file) : json::object();
  return spec_from_json(file_doc, overrides, default_ceiling);
}

/// Flat, fully resolved key-value form of a spec; feeding it back through
/// spec_from_json reproduces the spec exactly.
inline json spec_to_json(const SweepSpec& s) {
  json j = json::object();
  j["swept"] = std::string(to_string(s.swept));
  j["from"] = s.from;
  j["to"] = s.to;
  j["steps"] = s.steps;
  j["metric"] = std::string(to_string(s.metric));
  auto put = [&](const char* key, const std::optional<double>& v) {
    if (v) j[key] = *v;
  };
  put("alpha", s.alpha);
  put("g", s.g);
  put("t", s.t);
  put("gt", s.gt);
  put("delta", s.delta);
  put("theta", s.theta);
  put("theta1", s.theta1);
  put("beta", s.beta);
  if (s.nmax) j["nmax"] = *s.nmax;
  j["tail_tol"] = s.tail_tol;
  j["nmax_ceiling"] = s.nmax_ceiling;
  j["field_mode"] = std::string(to_string(s.field_mode));
  j["formula_mode"] = std::string(to_string(s.formula_mode));
  return j;
}

// ---------------------------------------------------------------------------
// Manifest

struct RunManifest {
  std::string tool_version{kToolVersion};
  json resolved = json::object();
  TruncationSummary truncation;
  std::string truncation_mode;
  double tail_tolerance = 0.0;
  std::size_t ceiling = 0;
  std::string field_mode;
  std::string formula_mode;
  double wall_time_s = 0.0;
  std::vector<std::string> outputs;
  std::optional<std::string> failure;
  json notes = json::object();
};

inline RunManifest make_manifest(const SweepResult& r) {
  RunManifest m;
  m.resolved = spec_to_json(r.spec);
  m.truncation = r.truncation;
  m.truncation_mode = r.spec.nmax ? "fixed" : "adaptive";
  m.tail_tolerance = r.spec.tail_tol;
  m.ceiling = r.spec.nmax_ceiling;
  m.field_mode = std::string(to_string(r.spec.field_mode));
  m.formula_mode = std::string(to_string(r.spec.formula_mode));
  m.wall_time_s = r.wall_time_s;
  m.failure = r.failure;
  return m;
}

inline json to_json(const RunManifest& m) {
  json j;
  j["tool"] = "qphase";
  j["tool_version"] = m.tool_version;
  j["resolved"] = m.resolved;
  j["truncation"] = {{"mode", m.truncation_mode},
                     {"n_max_min", m.truncation.n_max_min},
                     {"n_max_max", m.truncation.n_max_max},
                     {"tail_mass_max", m.truncation.tail_mass_max},
                     {"tail_tolerance", m.tail_tolerance},
                     {"ceiling", m.ceiling}};
  j["field_mode"] = m.field_mode;
  j["formula_mode"] = m.formula_mode;
  j["wall_time_s"] = m.wall_time_s;
  j["outputs"] = m.outputs;
  j["failure"] = m.failure ? json(*m.failure) : json(nullptr);
  j["notes"] = m.notes;
  return j;
}

/// Accepts a bare manifest or an emitted JSON table and returns its resolved spec.
inline json resolved_from_manifest(const json& doc) {
  const json& m = doc.contains("manifest") ? doc.at("manifest") : doc;
  if (!m.contains("resolved")) throw ConfigError("manifest: no 'resolved' section");
  return m.at("resolved");
}

// ---------------------------------------------------------------------------
// Tables

inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

inline std::string format_csv(const std::vector<SweepRow>& rows) {
  std::string out = "x,value,status\n";
  for (const auto& r : rows) {
    out += format_double(r.x);
    out += ',';
    if (r.value) out += format_double(*r.value);
    out += ',';
    out += r.status;
    out += '\n';
  }
  return out;
}

inline json rows_to_json(const std::vector<SweepRow>& rows) {
  json arr = json::array();
  for (const auto& r : rows)
    arr.push_back({{"x", r.x}, {"value", r.value ? json(*r.value) : json(nullptr)}, {"status", r.status}});
  return arr;
}

inline std::vector<SweepRow> rows_from_json(const json& doc) {
  const json& arr = doc.contains("rows") ? doc.at("rows") : doc;
  std::vector<SweepRow> rows;
  for (const auto& r : arr) {
    SweepRow row;
    row.x = r.at("x").get<double>();
    if (!r.at("value").is_null()) row.value = r.at("value").get<double>();
    row.status = r.at("status").get<std::string>();
    rows.push_back(std::move(row));
  }
  return rows;
}

inline std::string format_json(const std::vector<SweepRow>& rows, const RunManifest& manifest) {
  json doc;
  doc["manifest"] = to_json(manifest);
  doc["rows"] = rows_to_json(rows);
  return doc.dump(2) + "\n";
}

inline void write_text(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) {
    std::error_code ec;
    std::filesystem::create_directories(path.parent_path(), ec);
    if (ec) throw IoError("cannot create directory '" + path.parent_path().string() + "': " + ec.message());
  }
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << text;
  out.flush();
  if (!out) throw IoError("write failed for '" + path.string() + "'");
}

enum class Format { Csv, Json };

inline Format parse_format(std::string_view s) {
  if (s == "csv") return Format::Csv;
  if (s == "json") return Format::Json;
  throw ConfigError("format: expected csv or json, got '" + std::string(s) + "'");
}

/// Writes the table at `path` plus a sidecar manifest `<path>.manifest.json`.
/// The manifest's output list is filled in before it is written.
inline std::vector<std::string> emit(const std::vector<SweepRow>& rows, RunManifest manifest, Format format,
                                     const std::filesystem::path& path) {
  const std::filesystem::path sidecar = path.string() + ".manifest.json";
  manifest.outputs = {path.string(), sidecar.string()};
  write_text(path, format == Format::Csv ? format_csv(rows) : format_json(rows, manifest));
  write_text(sidecar, to_json(manifest).dump(2) + "\n");
  return manifest.outputs;
}

struct PlotCurve {
  std::string csv_path;
  std::string title;
};

inline std::string gnuplot_script(const std::vector<PlotCurve>& curves, const std::string& xlabel,
                                  const std::string& ylabel) {
  std::ostringstream s;
  s << "set datafile separator ','\n";
  s << "set datafile missing ''\n";
  s << "set xlabel '" << xlabel << "'\n";
  s << "set ylabel '" << ylabel << "'\n";
  s << "set key best\n";
  s << "plot ";
  for (std::size_t i = 0; i < curves.size(); ++i) {
    if (i > 0) s << ", \\\n     ";
    s << "'" << curves[i].csv_path << "' every ::1 using 1:2 with lines title '" << curves[i].title << "'";
  }
  s << "\n";
  return s.str();
}

}  // namespace qphase::io
