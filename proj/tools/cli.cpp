#include "cli.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>
#include <ostream>

#include <fmt/format.h>
#include <fmt/ranges.h>

#include "CLI11.hpp"

#include "qwalk/certification.hpp"
#include "qwalk/config.hpp"
#include "qwalk/coupling.hpp"
#include "qwalk/error.hpp"
#include "qwalk/io.hpp"
#include "qwalk/propagator.hpp"
#include "qwalk/sampling.hpp"
#include "qwalk/svg.hpp"
#include "qwalk/twophoton.hpp"

namespace qwalk::cli {

namespace {

using nlohmann::json;

struct CommonOptions {
  std::string config_path;
  std::string out_dir;
  std::string format = "csv";
  std::uint64_t seed = 0;
  CLI::Option* seed_option = nullptr;
};

struct OutputFile {
  std::string name;
  std::string content;
};

/// Everything a command needs once the config has been validated.
struct Run {
  ExperimentConfig config;
  std::string config_hash;
  std::string command;
  std::string format;
  std::filesystem::path out_dir;
  std::vector<OutputFile> files;

  io::Meta meta() const { return {{"qwalk", command}, {"config_hash", config_hash}}; }

  std::string ext() const { return format == "json" ? ".json" : ".csv"; }

  void add_table(const std::string& stem, const io::Table& table, io::Meta extra = {}) {
    io::Meta m = meta();
    m.insert(m.end(), extra.begin(), extra.end());
    files.push_back({stem + ext(), format == "json" ? table.to_json(m) : table.to_csv(m)});
  }

  void add_svg(const std::string& stem, const std::string& svg) {
    files.push_back({stem + ".svg", fmt::format("<!-- qwalk {} config_hash={} -->\n", command, config_hash) + svg});
  }

  void add_json(const std::string& name, json doc) {
    doc["config_hash"] = config_hash;
    doc["qwalk"] = command;
    files.push_back({name, doc.dump(1) + "\n"});
  }
};

class IoFailure : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

Run prepare(const std::string& command, const CommonOptions& opts) {
  Run run;
  run.command = command;
  run.format = opts.format;
  run.config = opts.config_path.empty() ? ExperimentConfig{} : load_config(opts.config_path);
  if (opts.seed_option != nullptr && opts.seed_option->count() > 0) run.config.seed = opts.seed;
  if (!opts.out_dir.empty()) run.config.output_dir = opts.out_dir;
  run.config_hash = run.config.hash();
  run.out_dir = run.config.output_dir;
  return run;
}

void write_outputs(const Run& run, std::ostream& out) {
  std::error_code ec;
  std::filesystem::create_directories(run.out_dir, ec);
  if (ec) throw IoFailure(fmt::format("cannot create '{}': {}", run.out_dir.string(), ec.message()));
  for (const auto& file : run.files) {
    const auto path = run.out_dir / file.name;
    std::ofstream stream(path, std::ios::binary);
    stream << file.content;
    if (!stream) throw IoFailure(fmt::format("cannot write '{}'", path.string()));
    out << "wrote " << path.string() << "\n";
  }
}

std::string port_label(int port) { return port < 0 ? fmt::format("m{}", -port) : fmt::format("{}", port); }

// --- commands ---------------------------------------------------------------

void cmd_lattice(Run& run, std::ostream& out) {
  const WalkSystem system = build_system(run.config);
  json doc;
  if (system.lattice) {
    doc = io::lattice_to_json(*system.lattice);
  } else {
    doc["site_count"] = system.size();
    doc["spacing_um"] = system.spacing_um;
    json edges = json::array();
    for (const auto& [a, b] : system.edges) edges.push_back({a, b});
    doc["edges"] = edges;
  }
  doc["hamiltonian"] = io::hamiltonian_edge_list(system.hamiltonian);
  run.add_json("lattice.json", doc);

  std::vector<double> layers;
  for (const auto& s : system.sites) layers.push_back(s.layer);
  run.add_svg("lattice", svg::lattice_heatmap(system.positions_um, system.spacing_um, layers,
                                              fmt::format("{} sites, {} edges (colour = ring)", system.size(),
                                                          system.edges.size())));
  out << fmt::format("sites={} edges={}\n", system.size(), system.edges.size());
}

void cmd_evolve(Run& run, std::ostream& out) {
  const WalkSystem system = build_system(run.config);
  const UnitaryPropagator u = evolve(system.hamiltonian, run.config.z_mm);
  for (int port : run.config.input_ports) {
    const auto p = single_photon_probabilities(u, system.site_for_port(port));
    const std::string stem = "distribution_port_" + port_label(port);
    run.add_table(stem, io::distribution_table(system.sites, p), {{"input_port", std::to_string(port)},
                                                                  {"z_mm", io::format_double(run.config.z_mm)}});
    run.add_svg(stem, svg::lattice_heatmap(system.positions_um, system.spacing_um, p,
                                           fmt::format("single photon from port {}, z = {} mm", port,
                                                       run.config.z_mm)));
    double total = 0.0;
    for (double v : p) total += v;
    out << fmt::format("port {}: sum p = {:.15f}\n", port, total);
  }
}

struct Correlations {
  CorrelationMatrix quantum;
  CorrelationMatrix classical;
  CorrelationMatrix partial;
};

Correlations correlate(const WalkSystem& system, const ExperimentConfig& config) {
  const UnitaryPropagator u = evolve(system.hamiltonian, config.z_mm);
  const SitePair input = system.input_pair(config);
  Correlations c{quantum_correlation(u, input), classical_correlation(u, input),
                 partial_correlation(u, input, config.indistinguishability)};
  const double total = unordered_sum(c.quantum);
  if (!(std::abs(total - 1.0) <= 1e-10)) {
    throw Error(ErrorKind::Numerical, fmt::format("quantum correlations sum to {} over unordered pairs", total));
  }
  return c;
}

void cmd_correlate(Run& run, std::ostream& out) {
  const WalkSystem system = build_system(run.config);
  const Correlations c = correlate(system, run.config);
  const std::pair<const char*, const CorrelationMatrix*> matrices[] = {
      {"quantum", &c.quantum}, {"classical", &c.classical}, {"partial", &c.partial}};
  for (const auto& [name, m] : matrices) {
    run.add_table(std::string("correlation_") + name, io::correlation_table(*m),
                  {{"convention", to_string(m->convention)}});
    run.add_svg(std::string("correlation_") + name,
                svg::matrix_heatmap(m->values, fmt::format("{} correlation, ports {}", name,
                                                           fmt::join(run.config.input_ports, ", "))));
  }
  json report;
  report["indistinguishability"] = run.config.indistinguishability;
  report["unordered_sum"] = {{"quantum", unordered_sum(c.quantum)},
                             {"classical", unordered_sum(c.classical)},
                             {"partial", unordered_sum(c.partial)}};
  report["similarity_quantum_classical"] = matrix_similarity(c.quantum, c.classical);
  report["similarity_partial_quantum"] = matrix_similarity(c.partial, c.quantum);
  run.add_json("correlate_report.json", report);
  out << fmt::format("unordered sum (quantum) = {:.15f}\n", unordered_sum(c.quantum));
  out << fmt::format("similarity(quantum, classical) = {:.6f}\n", report["similarity_quantum_classical"].get<double>());
}

void cmd_hom(Run& run, std::ostream& out) {
  const WalkSystem system = build_system(run.config);
  const UnitaryPropagator u = evolve(system.hamiltonian, run.config.z_mm);
  const SitePair input = system.input_pair(run.config);
  const auto delays = run.config.delays_fs.empty() ? default_delays_fs() : run.config.delays_fs;
  const double sigma = run.config.effective_coherence_time_fs();
  const HomCurve curve = hom_scan(u, input, delays, sigma);
  const SitePair entry = run.config.hom_entry;
  const auto values = curve.entry(entry.first, entry.second);

  const io::Meta entry_meta = {{"entry", fmt::format("{}-{}", entry.first, entry.second)},
                               {"coherence_time_fs", io::format_double(sigma)}};
  run.add_table("hom_curve", io::hom_curve_table(delays, values), entry_meta);
  run.add_svg("hom_curve", svg::line_plot(delays, values,
                                          fmt::format("HOM curve, entry ({}, {})", entry.first, entry.second),
                                          "delay (fs)", "coincidence probability"));

  json report;
  report["entry"] = {entry.first, entry.second};
  report["coherence_time_fs"] = sigma;
  try {
    report["visibility"] = visibility(curve, entry);
  } catch (const Error& e) {
    report["visibility"] = nullptr;
    report["visibility_error"] = e.what();
  }

  const DetectionModel model = system.detection(run.config);
  const auto scan = sample_hom_scan(curve, entry, model, run.config.duration_s, run.config.seed);
  run.add_table("hom_scan_sampled", io::scan_table(scan),
                {{"seed", std::to_string(run.config.seed)}, {"duration_s", io::format_double(run.config.duration_s)}});
  try {
    const ZeroDelayFit fit = fit_zero_delay(scan);
    report["fit"] = {{"zero_delay_fs", fit.zero_delay_fs},
                     {"zero_delay_error_fs", fit.zero_delay_error_fs},
                     {"visibility", fit.visibility},
                     {"visibility_error", fit.visibility_error},
                     {"baseline", fit.baseline},
                     {"width_fs", fit.width_fs}};
  } catch (const Error& e) {
    report["fit"] = {{"error", e.what()}};
  }
  run.add_json("hom_report.json", report);
  out << "visibility = " << report["visibility"].dump() << "\n";
}

json certify_summary(const ViolationMap& map) {
  std::size_t undefined = 0;
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j = i + 1; j < map.size(); ++j) undefined += map.defined(i, j) ? 0 : 1;
  }
  json s;
  s["source"] = to_string(map.source);
  s["pairs"] = unordered_pair_count(map.size(), false);
  s["positive_pairs"] = positive_pairs(map).size();
  s["max_violation"] = map.size() > 1 ? json(max_violation(map)) : json(nullptr);
  if (map.source == ViolationSource::Counts) {
    s["undefined_pairs"] = undefined;
    s["pairs_above_3_sigma"] = positive_pairs(map, 3.0).size();
    const double best = max_significance(map);
    s["max_significance"] = std::isfinite(best) ? json(best) : json(nullptr);
  }
  return s;
}

void cmd_certify(Run& run, const std::string& counts_path, std::ostream& out) {
  json report;
  if (!counts_path.empty()) {
    std::ifstream in(counts_path);
    if (!in) throw Error(ErrorKind::Parse, fmt::format("cannot open counts '{}'", counts_path));
    const CountMatrix counts = io::parse_count_matrix(in);
    const ViolationMap map = violation_significance(counts);
    run.add_table("violation_counts", io::violation_table(map), {{"counts_file", counts_path}});
    run.add_svg("violation_counts", svg::violation_bars(map, "Cauchy-Schwarz violation (counts)"));
    report["counts"] = certify_summary(map);
    out << fmt::format("positive pairs: {} (above 3 sigma: {})\n", report["counts"]["positive_pairs"].get<std::size_t>(),
                       report["counts"]["pairs_above_3_sigma"].get<std::size_t>());
  } else {
    const WalkSystem system = build_system(run.config);
    const Correlations c = correlate(system, run.config);
    const std::pair<const char*, const CorrelationMatrix*> matrices[] = {
        {"quantum", &c.quantum}, {"classical", &c.classical}, {"partial", &c.partial}};
    for (const auto& [name, m] : matrices) {
      const ViolationMap map = violation_map(*m);
      run.add_table(std::string("violation_") + name, io::violation_table(map));
      run.add_svg(std::string("violation_") + name,
                  svg::violation_bars(map, fmt::format("Cauchy-Schwarz violation ({})", name)));
      report[name] = certify_summary(map);
      out << fmt::format("{}: positive pairs = {}\n", name, report[name]["positive_pairs"].get<std::size_t>());
    }
  }
  run.add_json("certify_report.json", report);
}

void cmd_sample(Run& run, std::ostream& out) {
  const WalkSystem system = build_system(run.config);
  const Correlations c = correlate(system, run.config);
  const CorrelationMatrix* source = &c.partial;
  if (run.config.sample_source == "quantum") source = &c.quantum;
  const CorrelationMatrix classical_normalized = normalized(c.classical);
  if (run.config.sample_source == "classical") source = &classical_normalized;

  const DetectionModel model = system.detection(run.config);
  const CountMatrix counts = sample_counts(*source, model, run.config.duration_s, run.config.seed);
  const std::string hash = io::model_hash(model);
  io::Meta extra = io::count_matrix_meta(counts, hash);
  extra.emplace_back("source", run.config.sample_source);
  // The count matrix is always CSV so that `certify --counts` can read it.
  const std::string saved_format = run.format;
  run.format = "csv";
  run.add_table("counts", io::count_matrix_table(counts), extra);
  run.format = saved_format;

  json report;
  report["source"] = run.config.sample_source;
  report["model"] = io::detection_model_json(model);
  report["model_hash"] = hash;
  report["total_counts"] = (counts.counts.sum() + counts.counts.diagonal().sum()) / 2;
  try {
    const CorrelationMatrix estimate = estimate_correlation(counts, model);
    report["similarity_to_source"] = matrix_similarity(estimate, *source);
    run.add_table("estimated_correlation", io::correlation_table(estimate));
  } catch (const Error& e) {
    report["similarity_to_source"] = nullptr;
    report["estimate_error"] = e.what();
  }
  run.add_json("sample_report.json", report);
  out << "total counts = " << report["total_counts"].dump() << "\n";
}

void cmd_fit_coupling(Run& run, const std::string& samples_path, std::ostream& out) {
  std::ifstream in(samples_path);
  if (!in) throw Error(ErrorKind::Parse, fmt::format("cannot open samples '{}'", samples_path));
  const auto samples = io::parse_coupling_samples(in);
  const CouplingModel model = fit_exponential(samples);
  json doc = io::coupling_model_json(model);
  doc["samples"] = samples.size();
  doc["spacing_um"] = run.config.spacing_um;
  doc["coupling_at_spacing_per_mm"] = coupling_at(model, run.config.spacing_um);
  run.add_json("coupling_model.json", doc);
  out << fmt::format("amplitude = {:.6g} /mm, decay length = {:.6g} um, C({} um) = {:.6g} /mm\n",
                     model.amplitude_per_mm, model.decay_length_um, run.config.spacing_um,
                     doc["coupling_at_spacing_per_mm"].get<double>());
}

int exit_code_for(const Error& e) {
  switch (e.kind()) {
    case ErrorKind::Parse:
    case ErrorKind::InvalidArgument:
    case ErrorKind::UnknownPort:
    case ErrorKind::IndexOutOfRange:
    case ErrorKind::LengthMismatch:
      return kExitConfig;
    default:
      return kExitNumerical;
  }
}

void add_common(CLI::App* sub, CommonOptions& opts) {
  sub->add_option("--config", opts.config_path, "Experiment config (JSON)")->check(CLI::ExistingFile);
  opts.seed_option = sub->add_option("--seed", opts.seed, "Override the config seed");
  sub->add_option("--out", opts.out_dir, "Output directory (overrides config output_dir)");
  sub->add_option("--format", opts.format, "Table format")->check(CLI::IsMember({"csv", "json"}));
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-photon continuous-time quantum walks on triangular photonic lattices"};
  app.name(args.empty() ? "qwalk" : args.front());
  app.require_subcommand(1);

  std::vector<std::pair<std::string, std::string>> subcommands = {
      {"lattice", "Build the lattice; write its JSON description and an SVG"},
      {"evolve", "Single-photon distributions for each input port"},
      {"correlate", "Quantum, classical and partial two-photon correlation matrices"},
      {"hom", "HOM delay scan, visibility, and a fit of a sampled scan"},
      {"certify", "Cauchy-Schwarz violation maps from a config or from a count matrix. "
                  "Significance always uses raw counts; efficiency correction only enters estimated correlations"},
      {"sample", "Synthetic coincidence counts through the detection model"},
      {"fit-coupling", "Fit the exponential coupling-versus-separation model"},
  };

  std::map<std::string, CommonOptions> options;
  std::map<std::string, CLI::App*> apps;
  for (const auto& [name, help] : subcommands) {
    apps[name] = app.add_subcommand(name, help);
    add_common(apps[name], options[name]);
  }
  std::string counts_path;
  apps["certify"]->add_option("--counts", counts_path, "Count matrix CSV written by `sample`")
      ->check(CLI::ExistingFile);
  std::string samples_path;
  apps["fit-coupling"]->add_option("--samples", samples_path, "CSV with separation_um,coupling_per_mm")
      ->required()
      ->check(CLI::ExistingFile);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    if (!reversed.empty()) reversed.pop_back();
    app.parse(reversed);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kExitConfig;
  }

  const std::string command = app.get_subcommands().front()->get_name();
  try {
    Run run = prepare(command, options[command]);
    if (command == "lattice") cmd_lattice(run, out);
    else if (command == "evolve") cmd_evolve(run, out);
    else if (command == "correlate") cmd_correlate(run, out);
    else if (command == "hom") cmd_hom(run, out);
    else if (command == "certify") cmd_certify(run, counts_path, out);
    else if (command == "sample") cmd_sample(run, out);
    else if (command == "fit-coupling") cmd_fit_coupling(run, samples_path, out);
    write_outputs(run, out);
  } catch (const Error& e) {
    err << "qwalk " << command << ": " << to_string(e.kind()) << ": " << e.what() << "\n";
    return exit_code_for(e);
  } catch (const IoFailure& e) {
    err << "qwalk " << command << ": " << e.what() << "\n";
    return kExitIo;
  }
  return kExitOk;
}

}  // namespace qwalk::cli
