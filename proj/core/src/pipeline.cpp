#include "deltachain/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <ctime>
#include <functional>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <random>
#include <sstream>
#include <thread>

#include "deltachain/consistency.hpp"
#include "deltachain/error.hpp"
#include "deltachain/specification.hpp"

namespace deltachain {
namespace {

[[noreturn]] void schema_error(const std::string& pointer, const std::string& what) {
  throw Error(ErrorKind::SchemaError, pointer + ": " + what);
}

std::size_t get_count(const Json& v, const std::string& ptr, std::size_t min_value) {
  if (!v.is_number_integer() || v.get<std::int64_t>() < static_cast<std::int64_t>(min_value)) {
    schema_error(ptr, "expected an integer >= " + std::to_string(min_value));
  }
  return v.get<std::size_t>();
}

double get_positive(const Json& v, const std::string& ptr, double max_value) {
  if (!v.is_number() || !(v.get<double>() > 0.0) || v.get<double>() > max_value) {
    schema_error(ptr, "expected a number in (0, " + std::to_string(max_value) + "]");
  }
  return v.get<double>();
}

Rational parse_weight(const Json& v, const std::string& ptr) {
  std::int64_t num = 0, den = 0;
  if (v.is_array() && v.size() == 2 && v[0].is_number_integer() && v[1].is_number_integer()) {
    num = v[0].get<std::int64_t>();
    den = v[1].get<std::int64_t>();
  } else if (v.is_string()) {
    const std::string s = v.get<std::string>();
    const auto slash = s.find('/');
    try {
      num = std::stoll(s.substr(0, slash));
      den = slash == std::string::npos ? 1 : std::stoll(s.substr(slash + 1));
    } catch (const std::exception&) {
      schema_error(ptr, "malformed rational '" + s + "'");
    }
  } else {
    schema_error(ptr, "expected \"p/q\" or [p, q]");
  }
  if (num <= 0 || den <= 0) schema_error(ptr, "weight must be a positive rational");
  return {num, den};
}

std::string weight_text(const Rational& r) {
  return std::to_string(r.num) + "/" + std::to_string(r.den);
}

std::string timestamp_now() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::ostringstream os;
  os << std::put_time(&tm, "%Y-%m-%dT%H:%M:%SZ");
  return os.str();
}

// Runs body(i) for i < count on a small pool; results are written by index.
void parallel_for(std::size_t count, unsigned threads, const std::function<void(std::size_t)>& body) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = static_cast<unsigned>(std::min<std::size_t>(threads, std::max<std::size_t>(count, 1)));
  std::atomic<std::size_t> next{0};
  std::exception_ptr failure;
  std::mutex failure_mutex;
  auto worker = [&] {
    for (std::size_t i = next++; i < count; i = next++) {
      try {
        body(i);
      } catch (...) {
        std::lock_guard<std::mutex> lock(failure_mutex);
        if (!failure) failure = std::current_exception();
      }
    }
  };
  std::vector<std::thread> pool;
  for (unsigned t = 1; t < threads; ++t) pool.emplace_back(worker);
  worker();
  for (auto& th : pool) th.join();
  if (failure) std::rethrow_exception(failure);
}

std::uint64_t level_seed(std::uint64_t seed, std::size_t a, std::size_t b) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed), static_cast<std::uint32_t>(seed >> 32),
                    static_cast<std::uint32_t>(a), static_cast<std::uint32_t>(b)};
  std::uint32_t out[2];
  seq.generate(out, out + 2);
  return (static_cast<std::uint64_t>(out[0]) << 32) | out[1];
}

std::vector<TargetComponent> default_target(const ErgodicSet& e) {
  const PeriodicOrbitMeasure* fixed = nullptr;
  const PeriodicOrbitMeasure* two = nullptr;
  for (const auto& m : e.measures) {
    if (m.period() == 1 && !fixed) fixed = &m;
    if (m.period() == 2 && !two) two = &m;
  }
  if (fixed && two) return {{fixed->word(), {1, 2}}, {two->word(), {1, 2}}};
  if (e.measures.size() >= 2) {
    return {{e.measures[0].word(), {1, 2}}, {e.measures[1].word(), {1, 2}}};
  }
  if (e.measures.size() == 1) return {{e.measures[0].word(), {1, 1}}};
  return {};
}

Json certificate_to_json(const MixingCertificate& c) {
  Json j{{"strongly_connected", c.strongly_connected},
         {"scc_count", c.scc_count},
         {"period", c.period},
         {"mixing_constant", nullptr},
         {"minimality_witness", nullptr}};
  if (c.mixing_constant) j["mixing_constant"] = *c.mixing_constant;
  if (c.minimality_witness) {
    j["minimality_witness"] = {c.minimality_witness->first, c.minimality_witness->second};
  }
  return j;
}

MixingCertificate certificate_from_json(const Json& j) {
  MixingCertificate c;
  c.strongly_connected = j.at("strongly_connected").get<bool>();
  c.scc_count = j.at("scc_count").get<std::size_t>();
  c.period = j.at("period").get<std::size_t>();
  if (!j.at("mixing_constant").is_null()) c.mixing_constant = j["mixing_constant"].get<std::size_t>();
  if (!j.at("minimality_witness").is_null()) {
    c.minimality_witness = std::make_pair(j["minimality_witness"][0].get<PointId>(),
                                          j["minimality_witness"][1].get<PointId>());
  }
  return c;
}

Json optional_number(const std::optional<double>& v) { return v ? Json(*v) : Json(nullptr); }

std::optional<double> read_optional(const Json& j) {
  if (j.is_null()) return std::nullopt;
  return j.get<double>();
}

Json target_to_json(const std::vector<TargetComponent>& target) {
  Json arr = Json::array();
  for (const auto& c : target) arr.push_back({{"word", c.word}, {"weight", weight_text(c.weight)}});
  return arr;
}

std::vector<TargetComponent> target_from_json(const Json& arr, const std::string& ptr) {
  if (!arr.is_array()) schema_error(ptr, "expected an array of components");
  std::vector<TargetComponent> out;
  for (std::size_t i = 0; i < arr.size(); ++i) {
    const std::string p = ptr + "/" + std::to_string(i);
    require_known_keys(arr[i], {"word", "weight"}, p);
    if (!arr[i].contains("word") || !arr[i]["word"].is_array() || arr[i]["word"].empty()) {
      schema_error(p + "/word", "expected a non-empty id array");
    }
    Word w;
    for (const auto& id : arr[i]["word"]) {
      if (!id.is_number_integer()) schema_error(p + "/word", "expected integer ids");
      w.push_back(id.get<PointId>());
    }
    if (!arr[i].contains("weight")) schema_error(p, "missing field 'weight'");
    out.push_back({std::move(w), parse_weight(arr[i]["weight"], p + "/weight")});
  }
  return out;
}

std::string fmt(double x) {
  std::ostringstream os;
  os << std::setprecision(12) << x;
  return os.str();
}

}  // namespace

PipelineConfig config_from_json(const Json& doc, const std::filesystem::path& base_dir) {
  require_known_keys(doc,
                     {"system", "n_max", "period_cap", "enumeration_cap", "cylinder_depth",
                      "pi_radius", "eps", "target", "block_scales", "output_dir", "seed",
                      "density_threshold", "hull_tolerance", "distance_sample_cap",
                      "mixture_samples", "threads"},
                     "");
  PipelineConfig cfg;
  if (!doc.contains("system")) schema_error("", "missing field 'system'");
  const Json& sys = doc["system"];
  if (sys.is_string()) {
    std::filesystem::path p = sys.get<std::string>();
    cfg.system_path = p.is_relative() && !base_dir.empty() ? base_dir / p : p;
  } else if (sys.is_object()) {
    cfg.system_inline = sys;
  } else {
    schema_error("/system", "expected a path or an inline system object");
  }
  if (doc.contains("n_max")) cfg.n_max = get_count(doc["n_max"], "/n_max", 1);
  if (doc.contains("period_cap")) cfg.period_cap = get_count(doc["period_cap"], "/period_cap", 1);
  if (doc.contains("enumeration_cap"))
    cfg.enumeration_cap = get_count(doc["enumeration_cap"], "/enumeration_cap", 1);
  if (doc.contains("cylinder_depth"))
    cfg.cylinder_depth = get_count(doc["cylinder_depth"], "/cylinder_depth", 1);
  if (doc.contains("pi_radius"))
    cfg.pi_radius = static_cast<std::int64_t>(get_count(doc["pi_radius"], "/pi_radius", 1));
  if (doc.contains("eps")) {
    const Json& e = doc["eps"];
    if (!e.is_array()) schema_error("/eps", "expected an array");
    cfg.eps.clear();
    for (std::size_t i = 0; i < e.size(); ++i) {
      cfg.eps.push_back(get_positive(e[i], "/eps/" + std::to_string(i), 1.0));
    }
  }
  if (doc.contains("target")) {
    const Json& t = doc["target"];
    require_known_keys(t, {"level", "components"}, "/target");
    if (t.contains("level")) cfg.target.level = get_count(t["level"], "/target/level", 0);
    if (t.contains("components")) {
      cfg.target.components = target_from_json(t["components"], "/target/components");
    }
  }
  if (cfg.target.level > cfg.n_max) schema_error("/target/level", "level exceeds n_max");
  if (doc.contains("block_scales")) {
    const Json& b = doc["block_scales"];
    if (!b.is_array() || b.empty()) schema_error("/block_scales", "expected a non-empty array");
    cfg.block_scales.clear();
    for (std::size_t i = 0; i < b.size(); ++i) {
      cfg.block_scales.push_back(get_count(b[i], "/block_scales/" + std::to_string(i), 1));
    }
  }
  if (doc.contains("output_dir")) {
    if (!doc["output_dir"].is_string()) schema_error("/output_dir", "expected a string");
    cfg.output_dir = doc["output_dir"].get<std::string>();
  }
  if (doc.contains("seed")) {
    if (!doc["seed"].is_number_integer() || doc["seed"].get<std::int64_t>() < 0) schema_error("/seed", "expected a non-negative integer");
    cfg.seed = doc["seed"].get<std::uint64_t>();
  }
  if (doc.contains("density_threshold"))
    cfg.density_threshold = get_positive(doc["density_threshold"], "/density_threshold", 1.0);
  if (doc.contains("hull_tolerance"))
    cfg.hull_tolerance = get_positive(doc["hull_tolerance"], "/hull_tolerance", 1.0);
  if (doc.contains("distance_sample_cap"))
    cfg.distance_sample_cap = get_count(doc["distance_sample_cap"], "/distance_sample_cap", 1);
  if (doc.contains("mixture_samples"))
    cfg.mixture_samples = get_count(doc["mixture_samples"], "/mixture_samples", 0);
  if (doc.contains("threads"))
    cfg.threads = static_cast<unsigned>(get_count(doc["threads"], "/threads", 0));
  return cfg;
}

PipelineConfig load_config(const std::filesystem::path& path) {
  return config_from_json(read_json_file(path), path.parent_path());
}

Json config_to_json(const PipelineConfig& cfg) {
  Json j;
  j["system"] = cfg.system_inline ? *cfg.system_inline : Json(cfg.system_path.string());
  j["n_max"] = cfg.n_max;
  j["period_cap"] = cfg.period_cap;
  j["enumeration_cap"] = cfg.enumeration_cap;
  j["cylinder_depth"] = cfg.cylinder_depth;
  j["pi_radius"] = cfg.pi_radius;
  j["eps"] = cfg.eps;
  Json target{{"level", cfg.target.level}};
  if (!cfg.target.components.empty()) target["components"] = target_to_json(cfg.target.components);
  j["target"] = std::move(target);
  j["block_scales"] = cfg.block_scales;
  j["output_dir"] = cfg.output_dir.string();
  j["seed"] = cfg.seed;
  j["density_threshold"] = cfg.density_threshold;
  j["hull_tolerance"] = cfg.hull_tolerance;
  j["distance_sample_cap"] = cfg.distance_sample_cap;
  j["mixture_samples"] = cfg.mixture_samples;
  j["threads"] = cfg.threads;
  return j;
}

std::string config_hash(const PipelineConfig& cfg) {
  Json j = config_to_json(cfg);
  // neither changes any reported number
  j.erase("output_dir");
  j.erase("threads");
  if (!cfg.system_inline) {
    // hash the system contents, not where they happen to live
    j["system"] = read_json_file(cfg.system_path);
  }
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : j.dump()) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  std::ostringstream os;
  os << std::hex << std::setw(16) << std::setfill('0') << h;
  return os.str();
}

LoadedSystem load_pipeline_system(const PipelineConfig& cfg) {
  if (cfg.system_inline) return system_from_json(*cfg.system_inline);
  return system_from_json(read_json_file(cfg.system_path));
}

DensityReport density_demo(const PipelineConfig& cfg, const ChainGraph& g,
                           const ErgodicSet& ergodic) {
  DensityReport out;
  out.target = cfg.target.components.empty() ? default_target(ergodic) : cfg.target.components;
  if (out.target.empty()) throw Error(ErrorKind::EmptySet, "no ergodic measure to build a target from");
  if (!mixing_certificate(g).primitive()) {
    throw Error(ErrorKind::NotMixing, "density demo needs a primitive chain graph");
  }
  std::vector<WeightedOrbit> target;
  std::vector<CylinderDistributions> parts;
  std::vector<double> weights;
  for (const auto& c : out.target) {
    target.push_back({PeriodicOrbitMeasure(c.word), c.weight});
    parts.push_back(empirical_measure(target.back().measure, cfg.cylinder_depth));
    weights.push_back(c.weight.value());
  }
  const CylinderDistributions target_cyl = mix_cylinders(parts, weights);
  const FiniteMetricSystem& sys = g.system();

  std::optional<double> previous;
  double num = 0.0, den = 0.0;
  for (std::size_t scale : cfg.block_scales) {
    DensityRow row;
    row.block_scale = scale;
    try {
      const PeriodicOrbitMeasure approx = sigmund_approximation(target, g, scale);
      row.period = approx.period();
      const double w = weakstar_proxy(empirical_measure(approx, cfg.cylinder_depth), target_cyl,
                                      cfg.cylinder_depth, sys);
      double pb = 0.0;
      for (const auto& t : target) {
        pb += t.weight.value() * pi_bar_periodic(t.measure, approx, sys, cfg.pi_radius).value;
      }
      row.weakstar = w;
      row.pi_bar = pb;
      if (previous && w > *previous + 1e-12) out.nonincreasing_after_first = false;
      previous = w;
      if (!out.l_star && w < cfg.density_threshold) out.l_star = scale;
      const double inv = 1.0 / static_cast<double>(scale);
      num += w * inv;
      den += inv * inv;
    } catch (const Error& e) {
      if (e.kind() == ErrorKind::NotMixing) throw;
      row.error = e.what();
    }
    out.rows.push_back(std::move(row));
  }
  if (den > 0.0) out.fitted_rate = num / den;
  return out;
}

PipelineReport run_pipeline(const PipelineConfig& cfg) {
  PipelineReport report;
  report.generated_at = timestamp_now();
  report.config_hash = config_hash(cfg);
  report.seed = cfg.seed;
  LoadedSystem loaded = load_pipeline_system(cfg);
  report.points = loaded.system.size();
  report.clamped = loaded.clamped;
  const SystemPtr sys = std::make_shared<const FiniteMetricSystem>(std::move(loaded.system));

  const std::size_t levels = cfg.n_max;
  std::vector<std::optional<ChainGraph>> graphs(levels);
  std::vector<ErgodicSet> ergodic(levels);
  std::vector<std::vector<PeriodicOrbitMeasure>> samples(levels);
  std::vector<std::vector<StageError>> level_errors(levels);
  report.levels.resize(levels);

  parallel_for(levels, cfg.threads, [&](std::size_t i) {
    const std::size_t n = i + 1;
    LevelReport& lr = report.levels[i];
    lr.level = n;
    lr.delta = 1.0 / static_cast<double>(n);
    graphs[i].emplace(sys, lr.delta);
    const ChainGraph& g = *graphs[i];
    lr.edge_count = g.edge_count();
    lr.certificate = mixing_certificate(g);
    for (double eps : cfg.eps) {
      if (!lr.certificate.primitive()) {
        level_errors[i].push_back({"specification", n, to_string(ErrorKind::NotMixing),
                                   "no spacing constant at eps " + fmt(eps) +
                                       ": chain graph is not primitive"});
        continue;
      }
      const SpacingConstant sc = spacing_constant(eps, lr.certificate);
      lr.spacing.push_back({eps, sc.window, sc.spacing});
    }
    ergodic[i] = ergodic_measures_of_graph(g, cfg.period_cap, cfg.enumeration_cap);
    lr.ergodic_count = ergodic[i].measures.size();
    lr.truncated = ergodic[i].truncated;
    std::mt19937_64 rng(level_seed(cfg.seed, n, 0));
    for (std::size_t k : sample_indices(lr.ergodic_count, cfg.distance_sample_cap, rng)) {
      samples[i].push_back(ergodic[i].measures[k]);
    }
    lr.sampled = samples[i].size();
  });

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  for (std::size_t a = 0; a < levels; ++a)
    for (std::size_t b = a + 1; b < levels; ++b) pairs.emplace_back(a, b);
  std::vector<CrossLevelEntry> entries(pairs.size());
  parallel_for(pairs.size(), cfg.threads, [&](std::size_t p) {
    const auto [a, b] = pairs[p];
    CrossLevelEntry& e = entries[p];
    e.coarse = a + 1;
    e.fine = b + 1;
    e.error_bar = 1.0 / static_cast<double>(cfg.pi_radius + 2);
    if (samples[a].empty() || samples[b].empty()) return;
    const RealMatrix d = pi_bar_matrix(samples[a], samples[b], *sys, cfg.pi_radius, 1);
    const OneSidedCheck one = besicovitch_one_sided_check(samples[a], samples[b], d, *sys, cfg.pi_radius);
    e.distance = one.hausdorff;
    e.besicovitch_bound = one.besicovitch_bound;
    e.one_sided_holds = one.holds;
    std::mt19937_64 rng(level_seed(cfg.seed, e.coarse, e.fine));
    const HullCheck hull = ergodic_hull_check(d, cfg.mixture_samples, rng, cfg.hull_tolerance);
    e.hull_full = hull.full;
    e.hull_difference = hull.difference;
    e.hull_holds = hull.holds;
  });
  report.cross_level = std::move(entries);

  for (std::size_t i = 0; i < levels; ++i) {
    if (ergodic[i].measures.empty()) {
      report.errors.push_back({"ergodic", i + 1, to_string(ErrorKind::EmptySet),
                               "no cycle of length <= " + std::to_string(cfg.period_cap)});
    }
    report.errors.insert(report.errors.end(), level_errors[i].begin(), level_errors[i].end());
  }

  report.distance_to_finest.assign(levels, 0.0);
  for (const auto& e : report.cross_level) {
    if (e.fine == levels) report.distance_to_finest[e.coarse - 1] = e.distance;
  }
  if (levels > 1) {
    double num = 0.0, den = 0.0;
    for (std::size_t i = 0; i + 1 < levels; ++i) {
      const double delta = report.levels[i].delta;
      num += report.distance_to_finest[i] * delta;
      den += delta * delta;
    }
    report.trend_rate = num / den;
  }

  const std::size_t target_level = cfg.target.level == 0 ? levels : cfg.target.level;
  try {
    report.density = density_demo(cfg, *graphs[target_level - 1], ergodic[target_level - 1]);
    report.density->level = target_level;
  } catch (const Error& e) {
    report.errors.push_back({"density", target_level, to_string(e.kind()), e.message()});
  }
  return report;
}

Json report_to_json(const PipelineReport& r) {
  Json j;
  j["version"] = r.version;
  j["generated_at"] = r.generated_at;
  j["config_hash"] = r.config_hash;
  j["seed"] = r.seed;
  j["system"] = {{"points", r.points}, {"clamped", r.clamped}};
  Json levels = Json::array();
  for (const auto& l : r.levels) {
    Json spacing = Json::array();
    for (const auto& s : l.spacing) {
      spacing.push_back({{"eps", s.eps}, {"window", s.window}, {"spacing", s.spacing}});
    }
    levels.push_back({{"level", l.level},
                      {"delta", l.delta},
                      {"edge_count", l.edge_count},
                      {"mixing", certificate_to_json(l.certificate)},
                      {"ergodic_count", l.ergodic_count},
                      {"truncated", l.truncated},
                      {"sampled", l.sampled},
                      {"spacing", std::move(spacing)}});
  }
  j["levels"] = std::move(levels);
  Json cross = Json::array();
  for (const auto& e : r.cross_level) {
    cross.push_back({{"coarse", e.coarse},
                     {"fine", e.fine},
                     {"distance", e.distance},
                     {"error_bar", e.error_bar},
                     {"one_sided_check",
                      {{"kind", "sampled one-sided"},
                       {"besicovitch_bound", e.besicovitch_bound},
                       {"holds", e.one_sided_holds}}},
                     {"hull_check",
                      {{"kind", "sampled"},
                       {"full", e.hull_full},
                       {"difference", e.hull_difference},
                       {"holds", e.hull_holds}}}});
  }
  j["cross_level"] = std::move(cross);
  j["trend"] = {{"distance_to_finest", r.distance_to_finest},
                {"fitted_rate", optional_number(r.trend_rate)}};
  if (r.density) {
    const DensityReport& d = *r.density;
    Json rows = Json::array();
    for (const auto& row : d.rows) {
      rows.push_back({{"block_scale", row.block_scale},
                      {"period", row.period},
                      {"weakstar", optional_number(row.weakstar)},
                      {"pi_bar", optional_number(row.pi_bar)},
                      {"error", row.error}});
    }
    j["density"] = {{"level", d.level},
                    {"target", target_to_json(d.target)},
                    {"rows", std::move(rows)},
                    {"l_star", d.l_star ? Json(*d.l_star) : Json(nullptr)},
                    {"fitted_rate", optional_number(d.fitted_rate)},
                    {"nonincreasing_after_first", d.nonincreasing_after_first}};
  } else {
    j["density"] = nullptr;
  }
  Json errors = Json::array();
  for (const auto& e : r.errors) {
    errors.push_back({{"stage", e.stage}, {"level", e.level}, {"kind", e.kind}, {"message", e.message}});
  }
  j["errors"] = std::move(errors);
  return j;
}

PipelineReport report_from_json(const Json& j) {
  try {
    PipelineReport r;
    r.version = j.at("version").get<std::string>();
    r.generated_at = j.at("generated_at").get<std::string>();
    r.config_hash = j.at("config_hash").get<std::string>();
    r.seed = j.at("seed").get<std::uint64_t>();
    r.points = j.at("system").at("points").get<std::size_t>();
    r.clamped = j.at("system").at("clamped").get<bool>();
    for (const auto& l : j.at("levels")) {
      LevelReport lr;
      lr.level = l.at("level").get<std::size_t>();
      lr.delta = l.at("delta").get<double>();
      lr.edge_count = l.at("edge_count").get<std::size_t>();
      lr.certificate = certificate_from_json(l.at("mixing"));
      lr.ergodic_count = l.at("ergodic_count").get<std::size_t>();
      lr.truncated = l.at("truncated").get<bool>();
      lr.sampled = l.at("sampled").get<std::size_t>();
      for (const auto& s : l.at("spacing")) {
        lr.spacing.push_back({s.at("eps").get<double>(), s.at("window").get<std::int64_t>(),
                              s.at("spacing").get<std::int64_t>()});
      }
      r.levels.push_back(std::move(lr));
    }
    for (const auto& e : j.at("cross_level")) {
      CrossLevelEntry c;
      c.coarse = e.at("coarse").get<std::size_t>();
      c.fine = e.at("fine").get<std::size_t>();
      c.distance = e.at("distance").get<double>();
      c.error_bar = e.at("error_bar").get<double>();
      c.besicovitch_bound = e.at("one_sided_check").at("besicovitch_bound").get<double>();
      c.one_sided_holds = e.at("one_sided_check").at("holds").get<bool>();
      c.hull_full = e.at("hull_check").at("full").get<double>();
      c.hull_difference = e.at("hull_check").at("difference").get<double>();
      c.hull_holds = e.at("hull_check").at("holds").get<bool>();
      r.cross_level.push_back(c);
    }
    r.distance_to_finest = j.at("trend").at("distance_to_finest").get<std::vector<double>>();
    r.trend_rate = read_optional(j.at("trend").at("fitted_rate"));
    if (!j.at("density").is_null()) {
      const Json& d = j["density"];
      DensityReport dr;
      dr.level = d.at("level").get<std::size_t>();
      dr.target = target_from_json(d.at("target"), "/density/target");
      for (const auto& row : d.at("rows")) {
        dr.rows.push_back({row.at("block_scale").get<std::size_t>(), row.at("period").get<std::size_t>(),
                           read_optional(row.at("weakstar")), read_optional(row.at("pi_bar")),
                           row.at("error").get<std::string>()});
      }
      if (!d.at("l_star").is_null()) dr.l_star = d["l_star"].get<std::size_t>();
      dr.fitted_rate = read_optional(d.at("fitted_rate"));
      dr.nonincreasing_after_first = d.at("nonincreasing_after_first").get<bool>();
      r.density = std::move(dr);
    }
    for (const auto& e : j.at("errors")) {
      r.errors.push_back({e.at("stage").get<std::string>(), e.at("level").get<std::size_t>(),
                          e.at("kind").get<std::string>(), e.at("message").get<std::string>()});
    }
    return r;
  } catch (const Json::exception& e) {
    throw Error(ErrorKind::SchemaError, std::string("report: ") + e.what());
  }
}

void emit_report(const PipelineReport& report, const std::filesystem::path& dir) {
  write_text_file(dir / "report.json", report_to_json(report).dump(2) + "\n");

  std::ostringstream levels;
  levels << "level,delta,edge_count,primitive,period,mixing_constant,ergodic_count,truncated\n";
  for (const auto& l : report.levels) {
    levels << l.level << ',' << fmt(l.delta) << ',' << l.edge_count << ','
           << (l.certificate.primitive() ? 1 : 0) << ',' << l.certificate.period << ','
           << (l.certificate.mixing_constant ? std::to_string(*l.certificate.mixing_constant) : "")
           << ',' << l.ergodic_count << ',' << (l.truncated ? 1 : 0) << '\n';
  }
  write_text_file(dir / "levels.csv", levels.str());

  const std::size_t n = report.levels.size();
  RealMatrix m(n, n, 0.0);
  for (const auto& e : report.cross_level) {
    m(e.coarse - 1, e.fine - 1) = e.distance;
    m(e.fine - 1, e.coarse - 1) = e.distance;
  }
  std::ostringstream cross;
  cross << "level";
  for (std::size_t j = 0; j < n; ++j) cross << ",L" << (j + 1);
  cross << '\n';
  for (std::size_t i = 0; i < n; ++i) {
    cross << 'L' << (i + 1);
    for (std::size_t j = 0; j < n; ++j) cross << ',' << fmt(m(i, j));
    cross << '\n';
  }
  write_text_file(dir / "cross_level.csv", cross.str());

  std::ostringstream trend;
  trend << "# level delta distance_to_finest\n";
  for (std::size_t i = 0; i < n; ++i) {
    trend << (i + 1) << ' ' << fmt(report.levels[i].delta) << ' '
          << fmt(report.distance_to_finest[i]) << '\n';
  }
  write_text_file(dir / "levels.dat", trend.str());

  std::ostringstream csv, dat;
  csv << "block_scale,period,weakstar,pi_bar,error\n";
  dat << "# block_scale weakstar pi_bar\n";
  if (report.density) {
    for (const auto& row : report.density->rows) {
      csv << row.block_scale << ',' << row.period << ','
          << (row.weakstar ? fmt(*row.weakstar) : "") << ',' << (row.pi_bar ? fmt(*row.pi_bar) : "")
          << ',' << '"' << row.error << '"' << '\n';
      if (row.weakstar) {
        dat << row.block_scale << ' ' << fmt(*row.weakstar) << ' ' << fmt(*row.pi_bar) << '\n';
      }
    }
  }
  write_text_file(dir / "density.csv", csv.str());
  write_text_file(dir / "density.dat", dat.str());
}

}  // namespace deltachain
