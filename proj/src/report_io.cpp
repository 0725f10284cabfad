#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"

#include "readability/errors.hpp"
#include "readability/graphio.hpp"

namespace readability::io {

using nlohmann::json;

namespace {

json finite(double v, std::string_view name) {
  if (!std::isfinite(v)) throw InvariantError("metric '" + std::string(name) + "' is not finite");
  return v;
}

template <typename T>
json optional_json(const std::optional<T>& v, std::string_view name) {
  if (!v) return nullptr;
  if constexpr (std::is_floating_point_v<T>) {
    return finite(*v, name);
  } else {
    return *v;
  }
}

const json& field(const json& obj, const std::string& key, std::string_view path) {
  if (!obj.is_object() || !obj.contains(key)) throw SchemaError("report is missing field '" + std::string(path) + "'");
  return obj.at(key);
}

double number(const json& obj, const std::string& key, std::string_view path) {
  const json& v = field(obj, key, path);
  if (!v.is_number()) throw SchemaError("report field '" + std::string(path) + "' must be a number");
  return v.get<double>();
}

std::string text(const json& obj, const std::string& key, std::string_view path) {
  const json& v = field(obj, key, path);
  if (!v.is_string()) throw SchemaError("report field '" + std::string(path) + "' must be a string");
  return v.get<std::string>();
}

template <typename T>
std::optional<T> optional_number(const json& metrics, const std::string& key) {
  const std::string path = "metrics." + key;
  const json& v = field(metrics, key, path);
  if (v.is_null()) return std::nullopt;
  if constexpr (std::is_integral_v<T>) {
    if (!v.is_number_unsigned() && !(v.is_number_integer() && v.get<std::int64_t>() >= 0)) {
      throw SchemaError("report field '" + path + "' must be a nonnegative integer");
    }
  } else if (!v.is_number()) {
    throw SchemaError("report field '" + path + "' must be a number or null");
  }
  return v.get<T>();
}

}  // namespace

std::string serialize_report(const ReadabilityReport& report) {
  json doc;
  doc["mode"] = std::string(mode_name(report.mode));
  doc["threads"] = report.threads;
  const auto& p = report.params;
  doc["params"] = {
      {"radius", p.radius},
      {"ideal_angle", p.ideal_angle},
      {"ideal_angle_deg", p.ideal_angle * 180.0 / geometry::kPi},
      {"strip_width", p.strip_width},
      {"orientation", std::string(orientation_name(p.orientation))},
  };
  doc["metrics"] = {
      {"nc", optional_json(report.node_occlusion, "nc")},
      {"ma", optional_json(report.minimum_angle, "ma")},
      {"ml", optional_json(report.edge_length_variation, "ml")},
      {"ec", optional_json(report.edge_crossing, "ec")},
      {"eca", optional_json(report.edge_crossing_angle, "eca")},
  };
  json elapsed = json::object();
  for (const auto& [k, v] : report.elapsed) elapsed[k] = v;
  doc["elapsed"] = std::move(elapsed);
  doc["warnings"] = report.warnings;
  return doc.dump(2) + "\n";
}

ReadabilityReport parse_report(std::string_view text_in) {
  json doc;
  try {
    doc = json::parse(text_in);
  } catch (const json::parse_error& e) {
    throw SchemaError(std::string("report is not valid JSON: ") + e.what());
  }
  ReadabilityReport r;
  const auto mode = parse_mode(text(doc, "mode", "mode"));
  if (!mode) throw SchemaError("report field 'mode' has an unknown value");
  r.mode = *mode;
  const json& threads = field(doc, "threads", "threads");
  if (!threads.is_number_unsigned() && !(threads.is_number_integer() && threads.get<std::int64_t>() >= 0)) {
    throw SchemaError("report field 'threads' must be a nonnegative integer");
  }
  r.threads = threads.get<std::size_t>();

  const json& params = field(doc, "params", "params");
  r.params.radius = number(params, "radius", "params.radius");
  r.params.ideal_angle = number(params, "ideal_angle", "params.ideal_angle");
  r.params.strip_width = number(params, "strip_width", "params.strip_width");
  const auto orientation = parse_orientation(text(params, "orientation", "params.orientation"));
  if (!orientation) throw SchemaError("report field 'params.orientation' has an unknown value");
  r.params.orientation = *orientation;

  const json& metrics = field(doc, "metrics", "metrics");
  r.node_occlusion = optional_number<std::uint64_t>(metrics, "nc");
  r.minimum_angle = optional_number<double>(metrics, "ma");
  r.edge_length_variation = optional_number<double>(metrics, "ml");
  r.edge_crossing = optional_number<std::uint64_t>(metrics, "ec");
  r.edge_crossing_angle = optional_number<double>(metrics, "eca");

  const json& elapsed = field(doc, "elapsed", "elapsed");
  if (!elapsed.is_object()) throw SchemaError("report field 'elapsed' must be an object");
  for (const auto& [k, v] : elapsed.items()) {
    if (!v.is_number()) throw SchemaError("report field 'elapsed." + k + "' must be a number");
    r.elapsed[k] = v.get<double>();
  }
  const json& warnings = field(doc, "warnings", "warnings");
  if (!warnings.is_array()) throw SchemaError("report field 'warnings' must be an array");
  for (const auto& w : warnings) {
    if (!w.is_string()) throw SchemaError("report field 'warnings' must hold strings");
    r.warnings.push_back(w.get<std::string>());
  }
  return r;
}

void write_report(const std::filesystem::path& path, const ReadabilityReport& report) {
  const std::string doc = serialize_report(report);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw InputError("cannot open '" + path.string() + "' for writing");
  out << doc;
  if (!out) throw InputError("failed writing '" + path.string() + "'");
}

ReadabilityReport read_report(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open '" + path.string() + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_report(buf.str());
}

}  // namespace readability::io
