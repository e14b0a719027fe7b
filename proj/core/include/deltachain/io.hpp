#pragma once

#include <filesystem>
#include <string>
#include <variant>

#include <nlohmann/json.hpp>

#include "deltachain/measures.hpp"
#include "deltachain/metric_system.hpp"
#include "deltachain/specification.hpp"
#include "deltachain/trajectory.hpp"

namespace deltachain {

using Json = nlohmann::json;

struct LoadedSystem {
  FiniteMetricSystem system;
  bool clamped = false;
};

/// {"points": [...], "metric": {"matrix"|"circle_grid"|"line_grid": ...},
///  "map": [...]}. Normalizes the metric; SchemaError names the JSON pointer.
LoadedSystem system_from_json(const Json& doc);
Json system_to_json(const FiniteMetricSystem& sys);

/// Either a bare id array (origin 0) or {"origin": k, "entries": [...]}.
FiniteTrajectory trajectory_from_json(const Json& doc, const std::string& where = "");
Json trajectory_to_json(const FiniteTrajectory& traj);

/// {"segments": [{"a": 0, "b": 3, "source": <trajectory>}, ...]}
SpacedSpecification specification_from_json(const Json& doc);
Json periodic_chain_to_json(const PeriodicChain& chain, const FiniteMetricSystem& sys);

/// {"type": "periodic", "word": [...]} or
/// {"type": "markov", "P": [[...]], "support": [state labels]}.
using MeasureSpec = std::variant<PeriodicOrbitMeasure, MarkovMeasure>;
MeasureSpec measure_from_json(const Json& doc, std::size_t n_points);

Json read_json_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, const std::string& text);

/// Throws SchemaError unless every key of `obj` is in `allowed`.
void require_known_keys(const Json& obj, std::initializer_list<const char*> allowed,
                        const std::string& pointer);

}  // namespace deltachain
