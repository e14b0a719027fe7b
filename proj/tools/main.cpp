// Command-line front end: analyze, trace-spec, distances, density-demo,
// generate, chain-graph, besicovitch.

#include <cstdlib>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "deltachain/chain_graph.hpp"
#include "deltachain/error.hpp"
#include "deltachain/io.hpp"
#include "deltachain/measures.hpp"
#include "deltachain/pipeline.hpp"
#include "deltachain/shadowing.hpp"
#include "deltachain/specification.hpp"

namespace dc = deltachain;

namespace {

constexpr int kExitSchema = 2;
constexpr int kExitNotMixing = 3;

struct Common {
  std::string config;
  std::string system;
  std::string out;
  std::optional<std::uint64_t> seed;
};

dc::SystemPtr load_system(const Common& c) {
  if (c.system.empty() && c.config.empty()) {
    throw dc::Error(dc::ErrorKind::SchemaError, "either --system or --config is required");
  }
  dc::LoadedSystem loaded = !c.system.empty()
                                ? dc::system_from_json(dc::read_json_file(c.system))
                                : dc::load_pipeline_system(dc::load_config(c.config));
  if (loaded.clamped) std::cerr << "note: distances above 1 were clamped to 1\n";
  return std::make_shared<const dc::FiniteMetricSystem>(std::move(loaded.system));
}

void write_or_print(const std::string& out, const std::string& text) {
  if (out.empty()) {
    std::cout << text;
  } else {
    dc::write_text_file(out, text);
  }
}

dc::PipelineConfig pipeline_config(const Common& c) {
  if (c.config.empty()) throw dc::Error(dc::ErrorKind::SchemaError, "--config is required");
  dc::PipelineConfig cfg = dc::load_config(c.config);
  if (!c.out.empty()) cfg.output_dir = c.out;
  if (c.seed) cfg.seed = *c.seed;
  return cfg;
}

int cmd_analyze(const Common& c) {
  const dc::PipelineConfig cfg = pipeline_config(c);
  const dc::PipelineReport report = dc::run_pipeline(cfg);
  dc::emit_report(report, cfg.output_dir);
  for (const auto& l : report.levels) {
    std::cout << "level " << l.level << "  delta " << l.delta << "  edges " << l.edge_count
              << "  M " << (l.certificate.mixing_constant ? std::to_string(*l.certificate.mixing_constant) : "-")
              << "  ergodic " << l.ergodic_count << (l.truncated ? " (truncated)" : "") << '\n';
  }
  if (report.density && report.density->l_star) {
    std::cout << "density: L* = " << *report.density->l_star << '\n';
  }
  for (const auto& e : report.errors) {
    std::cerr << "[" << e.stage << " level " << e.level << "] " << e.message << '\n';
  }
  std::cout << "report written to " << cfg.output_dir.string() << '\n';
  return EXIT_SUCCESS;
}

int cmd_density(const Common& c) {
  const dc::PipelineConfig cfg = pipeline_config(c);
  const dc::LoadedSystem loaded = dc::load_pipeline_system(cfg);
  auto sys = std::make_shared<const dc::FiniteMetricSystem>(loaded.system);
  const std::size_t level = cfg.target.level == 0 ? cfg.n_max : cfg.target.level;
  const dc::ChainGraph g(sys, 1.0 / static_cast<double>(level));
  const dc::ErgodicSet e = dc::ergodic_measures_of_graph(g, cfg.period_cap, cfg.enumeration_cap);
  dc::PipelineReport report;
  report.config_hash = dc::config_hash(cfg);
  report.seed = cfg.seed;
  report.points = sys->size();
  report.clamped = loaded.clamped;
  report.density = dc::density_demo(cfg, g, e);
  report.density->level = level;
  dc::emit_report(report, cfg.output_dir);
  std::cout << "L\tperiod\tweakstar\tpi_bar\n";
  for (const auto& row : report.density->rows) {
    std::cout << row.block_scale << '\t' << row.period << '\t'
              << (row.weakstar ? std::to_string(*row.weakstar) : row.error) << '\t'
              << (row.pi_bar ? std::to_string(*row.pi_bar) : "") << '\n';
  }
  if (report.density->l_star) std::cout << "L* = " << *report.density->l_star << '\n';
  return EXIT_SUCCESS;
}

int cmd_trace(const Common& c, const std::string& spec_path, double delta, double eps) {
  const dc::SystemPtr sys = load_system(c);
  const dc::ChainGraph g(sys, delta);
  const dc::MixingCertificate cert = dc::mixing_certificate(g);
  if (!cert.primitive()) {
    std::cerr << "chain graph at delta " << delta << " is not primitive\n";
    return kExitNotMixing;
  }
  const dc::SpacedSpecification spec = dc::specification_from_json(dc::read_json_file(spec_path));
  const dc::PeriodicChain y = dc::trace_specification(spec, g, eps);
  const dc::TraceReport check = dc::verify_trace(y, spec, g, eps);
  const dc::SpacingConstant sc = dc::spacing_constant(eps, cert);
  dc::Json out = dc::periodic_chain_to_json(y, *sys);
  out["mixing_constant"] = *cert.mixing_constant;
  out["spacing"] = sc.spacing;
  out["verified"] = check.ok;
  if (!check.ok) out["failure"] = check.failure;
  write_or_print(c.out, out.dump(2) + "\n");
  return check.ok ? EXIT_SUCCESS : EXIT_FAILURE;
}

dc::Json measure_summary(const dc::MeasureSpec& m) {
  if (const auto* p = std::get_if<dc::PeriodicOrbitMeasure>(&m)) {
    return {{"type", "periodic"}, {"word", p->word()}};
  }
  return {{"type", "markov"}, {"states", std::get<dc::MarkovMeasure>(m).states()}};
}

int cmd_distances(const Common& c, const std::vector<std::string>& files, std::int64_t radius) {
  const dc::SystemPtr sys = load_system(c);
  std::vector<dc::MeasureSpec> ms;
  for (const auto& f : files) ms.push_back(dc::measure_from_json(dc::read_json_file(f), sys->size()));
  auto as_markov = [](const dc::MeasureSpec& m) {
    if (const auto* p = std::get_if<dc::PeriodicOrbitMeasure>(&m)) return dc::MarkovMeasure::from_periodic(*p);
    return std::get<dc::MarkovMeasure>(m);
  };
  dc::Json out{{"measures", dc::Json::array()}, {"pairs", dc::Json::array()}};
  for (const auto& m : ms) out["measures"].push_back(measure_summary(m));
  for (std::size_t i = 0; i < ms.size(); ++i) {
    for (std::size_t j = i + 1; j < ms.size(); ++j) {
      dc::Json pair{{"a", i}, {"b", j}};
      const auto* p = std::get_if<dc::PeriodicOrbitMeasure>(&ms[i]);
      const auto* q = std::get_if<dc::PeriodicOrbitMeasure>(&ms[j]);
      const dc::MarkovMeasure mi = as_markov(ms[i]);
      const dc::MarkovMeasure mj = as_markov(ms[j]);
      pair["w1"] = dc::w1_distance(mi.label_marginal(sys->size()), mj.label_marginal(sys->size()),
                                   sys->distances()).value;
      if (p && q) {
        const dc::PhaseResult r = dc::rho_bar_periodic(*p, *q, sys->distances());
        const dc::PhaseResult pb = dc::pi_bar_periodic(*p, *q, *sys, radius);
        pair["rho_bar"] = r.value;
        pair["phase"] = r.phase;
        pair["pi_bar"] = pb.value;
        pair["pi_bar_error"] = pb.error_bar;
      } else {
        const dc::CouplingResult r = dc::rho_bar_markov_upper(mi, mj, sys->distances());
        pair["rho_bar_upper"] = r.value;
        pair["rho_bar_lower"] = r.lower_bound ? dc::Json(*r.lower_bound) : dc::Json(nullptr);
      }
      out["pairs"].push_back(std::move(pair));
    }
  }
  write_or_print(c.out, out.dump(2) + "\n");
  return EXIT_SUCCESS;
}

int cmd_chain_graph(const Common& c, double delta, const std::string& emit) {
  const dc::SystemPtr sys = load_system(c);
  const dc::ChainGraph g(sys, delta);
  write_or_print(c.out, emit == "dot" ? dc::to_dot(g) : dc::to_adjacency_text(g));
  return EXIT_SUCCESS;
}

int cmd_besicovitch(const Common& c, const std::string& xf, const std::string& yf,
                    std::size_t horizon, std::int64_t radius, const std::string& variant) {
  const dc::SystemPtr sys = load_system(c);
  const dc::FiniteTrajectory x = dc::trajectory_from_json(dc::read_json_file(xf));
  const dc::FiniteTrajectory y = dc::trajectory_from_json(dc::read_json_file(yf));
  x.check_ids(*sys);
  y.check_ids(*sys);
  dc::BesicovitchEstimate est{};
  if (variant == "rho") est = dc::besicovitch_rho(*sys, x, y, horizon);
  else if (variant == "pi") est = dc::besicovitch_pi(*sys, x, y, horizon, radius);
  else if (variant == "hat-rho") est = dc::hat_rho(*sys, x, y, horizon);
  else est = dc::hat_pi(*sys, x, y, horizon, radius);
  const dc::Json out{{"variant", dc::to_string(est.variant)},
                     {"value", est.value},
                     {"horizon", est.horizon},
                     {"error_bar", est.error_bar}};
  write_or_print(c.out, out.dump(2) + "\n");
  return EXIT_SUCCESS;
}

int cmd_generate(const std::string& kind, std::size_t n, std::int64_t k, std::uint64_t seed,
                 const std::string& out) {
  dc::Json doc;
  if (kind == "circle-doubling" || kind == "circle-rotation") {
    const dc::FiniteMetricSystem sys = kind == "circle-doubling" ? dc::circle_doubling(n)
                                                                 : dc::circle_rotation(n, k);
    doc = {{"points", sys.labels()}, {"metric", {{"circle_grid", n}}}, {"map", sys.map_image()}};
  } else {
    doc = dc::system_to_json(dc::random_metric_system(n, seed));
  }
  write_or_print(out, doc.dump(2) + "\n");
  return EXIT_SUCCESS;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Chain-graph discretizations of dynamical systems and their invariant measures"};
  app.require_subcommand(1);
  Common common;
  std::uint64_t seed_value = 0;

  auto add_common = [&](CLI::App* sub, bool with_system) {
    sub->add_option("--config", common.config, "Pipeline configuration (JSON)");
    sub->add_option("--out", common.out, "Output directory or file");
    sub->add_option("--seed", seed_value, "Random seed")->each([&](const std::string&) {
      common.seed = seed_value;
    });
    if (with_system) sub->add_option("--system", common.system, "System file (JSON)");
  };

  auto* analyze = app.add_subcommand("analyze", "Run the full pipeline and write a report");
  add_common(analyze, false);
  auto* density = app.add_subcommand("density-demo", "Sigmund approximants of the target mixture");
  add_common(density, false);

  auto* trace = app.add_subcommand("trace-spec", "Trace a spaced specification by a periodic chain");
  add_common(trace, true);
  std::string spec_path;
  double delta = 0.25, eps = 0.5;
  trace->add_option("--spec", spec_path, "Specification file (JSON)")->required();
  trace->add_option("--emit", common.out, "Output file for the traced chain (same as --out)");
  trace->add_option("--delta", delta, "Chain tolerance")->check(CLI::Range(0.0, 1.0));
  trace->add_option("--eps", eps, "Tracing precision")->check(CLI::Range(0.0, 1.0));

  auto* dist = app.add_subcommand("distances", "W1, rho-bar and pi-bar between measures");
  add_common(dist, true);
  std::vector<std::string> measure_files;
  std::int64_t radius = 8;
  dist->add_option("measures", measure_files, "Measure files (JSON)")->required()->expected(2, -1);
  dist->add_option("--radius", radius, "Truncation radius for pi terms");

  auto* gen = app.add_subcommand("generate", "Write a built-in system as JSON");
  gen->require_subcommand(1);
  std::size_t gen_n = 16;
  std::int64_t gen_k = 1;
  std::uint64_t gen_seed = 0;
  std::string gen_out;
  std::string gen_kind;
  for (const char* name : {"circle-doubling", "circle-rotation", "random-metric"}) {
    auto* s = gen->add_subcommand(name);
    s->add_option("--n", gen_n, "Number of points")->required()->check(CLI::PositiveNumber);
    if (std::string(name) == "circle-rotation") s->add_option("--k", gen_k, "Rotation step")->required();
    if (std::string(name) == "random-metric") s->add_option("--seed", gen_seed, "Random seed");
    s->add_option("--out", gen_out, "Output file");
    s->callback([&gen_kind, name] { gen_kind = name; });
  }

  auto* graph = app.add_subcommand("chain-graph", "Emit the delta-chain graph");
  add_common(graph, true);
  std::string emit = "adj";
  graph->add_option("--delta", delta, "Chain tolerance")->check(CLI::Range(0.0, 1.0));
  graph->add_option("--emit", emit, "dot or adj")->check(CLI::IsMember({"dot", "adj"}));

  auto* besi = app.add_subcommand("besicovitch", "Finite-horizon Besicovitch estimates");
  add_common(besi, true);
  std::string x_file, y_file, variant = "rho";
  std::size_t horizon = 100;
  besi->add_option("--x", x_file, "First trajectory (JSON)")->required();
  besi->add_option("--y", y_file, "Second trajectory (JSON)")->required();
  besi->add_option("--horizon", horizon, "Horizon N")->check(CLI::PositiveNumber);
  besi->add_option("--radius", radius, "Truncation radius for pi terms");
  besi->add_option("--variant", variant, "rho, pi, hat-rho or hat-pi")
      ->check(CLI::IsMember({"rho", "pi", "hat-rho", "hat-pi"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitSchema;
  }

  try {
    if (*analyze) return cmd_analyze(common);
    if (*density) return cmd_density(common);
    if (*trace) return cmd_trace(common, spec_path, delta, eps);
    if (*dist) return cmd_distances(common, measure_files, radius);
    if (*gen) return cmd_generate(gen_kind, gen_n, gen_k, gen_seed, gen_out);
    if (*graph) return cmd_chain_graph(common, delta, emit);
    if (*besi) return cmd_besicovitch(common, x_file, y_file, horizon, radius, variant);
  } catch (const dc::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    switch (e.kind()) {
      case dc::ErrorKind::SchemaError: return kExitSchema;
      case dc::ErrorKind::NotMixing: return kExitNotMixing;
      default: return EXIT_FAILURE;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return EXIT_FAILURE;
  }
  return EXIT_FAILURE;
}
