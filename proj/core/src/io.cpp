#include "deltachain/io.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "deltachain/error.hpp"

namespace deltachain {
namespace {

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  throw Error(ErrorKind::SchemaError, (pointer.empty() ? "/" : pointer) + ": " + what);
}

const Json& require(const Json& obj, const char* key, const std::string& pointer) {
  auto it = obj.find(key);
  if (it == obj.end()) schema_error(pointer, std::string("missing field '") + key + "'");
  return *it;
}

std::int64_t as_int(const Json& v, const std::string& pointer) {
  if (!v.is_number_integer()) schema_error(pointer, "expected an integer");
  return v.get<std::int64_t>();
}

std::vector<PointId> id_array(const Json& v, const std::string& pointer) {
  if (!v.is_array()) schema_error(pointer, "expected an array of ids");
  std::vector<PointId> ids;
  for (std::size_t i = 0; i < v.size(); ++i) {
    ids.push_back(static_cast<PointId>(as_int(v[i], pointer + "/" + std::to_string(i))));
  }
  return ids;
}

RealMatrix matrix_from_json(const Json& v, const std::string& pointer) {
  if (!v.is_array() || v.empty()) schema_error(pointer, "expected a non-empty matrix");
  const std::size_t rows = v.size();
  const std::size_t cols = v[0].is_array() ? v[0].size() : 0;
  RealMatrix m(rows, cols);
  for (std::size_t r = 0; r < rows; ++r) {
    const std::string row_ptr = pointer + "/" + std::to_string(r);
    if (!v[r].is_array() || v[r].size() != cols) schema_error(row_ptr, "ragged matrix row");
    for (std::size_t c = 0; c < cols; ++c) {
      if (!v[r][c].is_number()) schema_error(row_ptr + "/" + std::to_string(c), "expected a number");
      m(r, c) = v[r][c].get<double>();
    }
  }
  return m;
}

}  // namespace

void require_known_keys(const Json& obj, std::initializer_list<const char*> allowed,
                        const std::string& pointer) {
  if (!obj.is_object()) schema_error(pointer, "expected an object");
  for (const auto& item : obj.items()) {
    const bool known = std::any_of(allowed.begin(), allowed.end(),
                                   [&](const char* k) { return item.key() == k; });
    if (!known) schema_error(pointer + "/" + item.key(), "unknown field '" + item.key() + "'");
  }
}

LoadedSystem system_from_json(const Json& doc) {
  require_known_keys(doc, {"points", "metric", "map"}, "");
  const std::vector<PointId> map = id_array(require(doc, "map", ""), "/map");
  const std::size_t n = map.size();

  std::vector<std::string> labels;
  if (auto it = doc.find("points"); it != doc.end()) {
    if (!it->is_array() || it->size() != n) schema_error("/points", "need one label per map entry");
    for (std::size_t i = 0; i < n; ++i) {
      const Json& p = (*it)[i];
      labels.push_back(p.is_string() ? p.get<std::string>() : p.dump());
    }
  }

  const Json& metric = require(doc, "metric", "");
  require_known_keys(metric, {"matrix", "circle_grid", "line_grid"}, "/metric");
  if (metric.size() != 1) schema_error("/metric", "exactly one metric kind is required");
  RealMatrix raw;
  if (auto it = metric.find("matrix"); it != metric.end()) {
    raw = matrix_from_json(*it, "/metric/matrix");
  } else if (auto it = metric.find("circle_grid"); it != metric.end()) {
    raw = circle_grid_metric(static_cast<std::size_t>(as_int(*it, "/metric/circle_grid")));
    if (labels.empty()) labels = grid_labels(raw.rows(), raw.rows());
  } else {
    const auto g = static_cast<std::size_t>(as_int(metric["line_grid"], "/metric/line_grid"));
    raw = line_grid_metric(g);
    if (labels.empty()) labels = grid_labels(g, g > 1 ? g - 1 : 1);
  }
  if (raw.rows() != n) schema_error("/metric", "metric size differs from map length");
  for (std::size_t i = 0; i < n; ++i) {
    if (map[i] < 0 || static_cast<std::size_t>(map[i]) >= n) {
      schema_error("/map/" + std::to_string(i), "id out of range");
    }
  }
  bool clamped = false;
  FiniteMetricSystem sys = FiniteMetricSystem::from_raw(raw, map, labels, &clamped);
  return {std::move(sys), clamped};
}

Json system_to_json(const FiniteMetricSystem& sys) {
  Json doc;
  doc["points"] = sys.labels();
  Json matrix = Json::array();
  for (std::size_t i = 0; i < sys.size(); ++i) {
    Json row = Json::array();
    for (std::size_t j = 0; j < sys.size(); ++j) row.push_back(sys.dist(i, j));
    matrix.push_back(std::move(row));
  }
  doc["metric"] = {{"matrix", std::move(matrix)}};
  doc["map"] = sys.map_image();
  return doc;
}

FiniteTrajectory trajectory_from_json(const Json& doc, const std::string& where) {
  if (doc.is_array()) return FiniteTrajectory(0, id_array(doc, where));
  require_known_keys(doc, {"origin", "entries"}, where);
  const Coord origin = doc.contains("origin") ? as_int(doc["origin"], where + "/origin") : 0;
  std::vector<PointId> entries = id_array(require(doc, "entries", where), where + "/entries");
  if (entries.empty()) schema_error(where + "/entries", "trajectory must be non-empty");
  return FiniteTrajectory(origin, std::move(entries));
}

Json trajectory_to_json(const FiniteTrajectory& traj) {
  return {{"origin", traj.origin()}, {"entries", traj.entries()}};
}

SpacedSpecification specification_from_json(const Json& doc) {
  require_known_keys(doc, {"segments"}, "");
  const Json& segs = require(doc, "segments", "");
  if (!segs.is_array() || segs.empty()) schema_error("/segments", "expected a non-empty array");
  SpacedSpecification spec;
  for (std::size_t i = 0; i < segs.size(); ++i) {
    const std::string ptr = "/segments/" + std::to_string(i);
    require_known_keys(segs[i], {"a", "b", "source"}, ptr);
    spec.segments.push_back(IntervalSegment{as_int(require(segs[i], "a", ptr), ptr + "/a"),
                                            as_int(require(segs[i], "b", ptr), ptr + "/b"),
                                            trajectory_from_json(require(segs[i], "source", ptr),
                                                                 ptr + "/source")});
  }
  return spec;
}

Json periodic_chain_to_json(const PeriodicChain& chain, const FiniteMetricSystem& sys) {
  Json labels = Json::array();
  for (PointId u : chain.word) labels.push_back(sys.label(u));
  return {{"word", chain.word},
          {"labels", std::move(labels)},
          {"period", chain.period},
          {"origin_offset", chain.origin_offset}};
}

MeasureSpec measure_from_json(const Json& doc, std::size_t n_points) {
  if (!doc.is_object()) schema_error("", "expected a measure object");
  const Json& type = require(doc, "type", "");
  if (!type.is_string()) schema_error("/type", "expected a string");
  const std::string kind = type.get<std::string>();
  auto check_ids = [n_points](const std::vector<PointId>& ids, const std::string& ptr) {
    for (std::size_t i = 0; i < ids.size(); ++i) {
      if (ids[i] < 0 || static_cast<std::size_t>(ids[i]) >= n_points) {
        schema_error(ptr + "/" + std::to_string(i), "id out of range");
      }
    }
  };
  if (kind == "periodic") {
    require_known_keys(doc, {"type", "word"}, "");
    std::vector<PointId> word = id_array(require(doc, "word", ""), "/word");
    if (word.empty()) schema_error("/word", "word must be non-empty");
    check_ids(word, "/word");
    return PeriodicOrbitMeasure(word);
  }
  if (kind == "markov") {
    require_known_keys(doc, {"type", "P", "support"}, "");
    RealMatrix p = matrix_from_json(require(doc, "P", ""), "/P");
    std::vector<PointId> labels;
    if (doc.contains("support")) {
      labels = id_array(doc["support"], "/support");
    } else {
      for (std::size_t i = 0; i < p.rows(); ++i) labels.push_back(static_cast<PointId>(i));
    }
    if (labels.size() != p.rows()) schema_error("/support", "need one label per state");
    check_ids(labels, "/support");
    return MarkovMeasure(std::move(p), std::move(labels));
  }
  schema_error("/type", "unknown measure type '" + kind + "'");
}

Json read_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::IoError, "cannot open " + path.string());
  try {
    return Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorKind::SchemaError, path.string() + ": " + e.what());
  }
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorKind::IoError, "cannot write " + path.string());
  out << text;
  if (!out) throw Error(ErrorKind::IoError, "write failed for " + path.string());
}

}  // namespace deltachain
