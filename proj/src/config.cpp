#include "qwalk/config.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>

#include "qwalk/error.hpp"
#include "qwalk/io.hpp"

namespace qwalk {

namespace {

using nlohmann::json;

[[noreturn]] void fail(const std::string& message) { throw Error(ErrorKind::Parse, message); }

void expect_keys(const json& obj, std::string_view where, std::initializer_list<std::string_view> allowed) {
  if (!obj.is_object()) fail(fmt::format("'{}' must be an object", where));
  for (const auto& [key, value] : obj.items()) {
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end()) {
      fail(fmt::format("unknown key '{}' in '{}'", key, where));
    }
  }
}

double get_number(const json& obj, std::string_view key, double fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number()) fail(fmt::format("'{}' must be a number", key));
  const double v = it->get<double>();
  if (!std::isfinite(v)) fail(fmt::format("'{}' must be finite", key));
  return v;
}

std::int64_t get_integer(const json& obj, std::string_view key, std::int64_t fallback) {
  const auto it = obj.find(key);
  if (it == obj.end()) return fallback;
  if (!it->is_number_integer()) fail(fmt::format("'{}' must be an integer", key));
  return it->get<std::int64_t>();
}

void require(bool ok, std::string_view message) {
  if (!ok) fail(std::string(message));
}

std::vector<double> parse_delays(const json& node) {
  std::vector<double> delays;
  if (node.is_array()) {
    for (const auto& v : node) {
      if (!v.is_number()) fail("'delays_fs' entries must be numbers");
      delays.push_back(v.get<double>());
    }
    return delays;
  }
  expect_keys(node, "delays_fs", {"start", "stop", "step"});
  const double start = get_number(node, "start", -1500.0);
  const double stop = get_number(node, "stop", 1500.0);
  const double step = get_number(node, "step", 50.0);
  require(step > 0.0 && stop >= start, "'delays_fs' needs step > 0 and stop >= start");
  const auto count = static_cast<std::size_t>(std::floor((stop - start) / step + 1e-9)) + 1;
  require(count <= 100000, "'delays_fs' range has too many points");
  for (std::size_t k = 0; k < count; ++k) delays.push_back(start + static_cast<double>(k) * step);
  return delays;
}

}  // namespace

std::vector<double> default_delays_fs() {
  std::vector<double> delays;
  for (int k = -30; k <= 30; ++k) delays.push_back(50.0 * k);
  return delays;
}

double ExperimentConfig::effective_coupling_per_mm() const {
  return coupling_model ? coupling_at(*coupling_model, spacing_um) : coupling_per_mm;
}

double ExperimentConfig::effective_coherence_time_fs() const {
  return coherence_time_fs ? *coherence_time_fs : coherence_time_from_filter(filter_center_nm, filter_fwhm_nm);
}

json ExperimentConfig::to_json() const {
  json doc;
  if (graph) {
    json edges = json::array();
    for (const auto& [a, b] : graph->edges) edges.push_back({a, b});
    doc["graph"] = {{"site_count", graph->site_count}, {"edges", edges}, {"spacing_um", spacing_um}};
  } else {
    doc["lattice"] = {{"rings", rings}, {"spacing_um", spacing_um}};
  }
  json h = {{"beta_per_mm", beta_per_mm}};
  if (coupling_model) {
    h["coupling_model"] = io::coupling_model_json(*coupling_model);
  } else {
    h["coupling_per_mm"] = coupling_per_mm;
  }
  doc["hamiltonian"] = h;
  doc["z_mm"] = z_mm;
  doc["input_ports"] = input_ports;
  doc["indistinguishability"] = indistinguishability;
  json hom = {{"delays_fs", delays_fs.empty() ? default_delays_fs() : delays_fs},
              {"filter_center_nm", filter_center_nm},
              {"filter_fwhm_nm", filter_fwhm_nm},
              {"entry", {hom_entry.first, hom_entry.second}}};
  if (coherence_time_fs) hom["coherence_time_fs"] = *coherence_time_fs;
  doc["hom"] = hom;
  doc["detection"] = {{"efficiency", efficiency},
                      {"pair_rate_hz", pair_rate_hz},
                      {"diagonal_splitter", diagonal_splitter}};
  doc["duration_s"] = duration_s;
  doc["sample_source"] = sample_source;
  doc["seed"] = seed;
  doc["output_dir"] = output_dir;
  return doc;
}

std::string ExperimentConfig::hash() const {
  // where results go is not part of the experiment
  json doc = to_json();
  doc.erase("output_dir");
  return io::hash_hex(doc.dump());
}

ExperimentConfig config_from_json(const json& doc) {
  ExperimentConfig c;
  try {
    expect_keys(doc, "config",
                {"lattice", "graph", "hamiltonian", "z_mm", "input_ports", "indistinguishability", "hom",
                 "detection", "duration_s", "sample_source", "seed", "output_dir"});
    require(!(doc.contains("lattice") && doc.contains("graph")), "give either 'lattice' or 'graph', not both");

    if (const auto it = doc.find("lattice"); it != doc.end()) {
      expect_keys(*it, "lattice", {"rings", "spacing_um"});
      const auto rings = get_integer(*it, "rings", c.rings);
      require(rings >= 0 && rings <= 64, "'rings' must lie in 0..64");
      c.rings = static_cast<int>(rings);
      c.spacing_um = get_number(*it, "spacing_um", c.spacing_um);
    }
    if (const auto it = doc.find("graph"); it != doc.end()) {
      expect_keys(*it, "graph", {"site_count", "edges", "spacing_um"});
      GraphSpec g;
      const auto n = get_integer(*it, "site_count", 0);
      require(n >= 1 && n <= 4096, "'graph.site_count' must lie in 1..4096");
      g.site_count = static_cast<std::size_t>(n);
      for (const auto& e : it->value("edges", json::array())) {
        require(e.is_array() && e.size() == 2 && e[0].is_number_integer() && e[1].is_number_integer(),
                "graph edges must be [i, j] integer pairs");
        const auto a = e[0].get<std::int64_t>();
        const auto b = e[1].get<std::int64_t>();
        require(a >= 0 && b >= 0 && a < n && b < n && a != b, "graph edge out of range or self-loop");
        g.edges.emplace_back(static_cast<std::size_t>(std::min(a, b)), static_cast<std::size_t>(std::max(a, b)));
      }
      c.spacing_um = get_number(*it, "spacing_um", c.spacing_um);
      c.graph = std::move(g);
    }
    require(c.spacing_um > 0.0, "'spacing_um' must be positive");

    if (const auto it = doc.find("hamiltonian"); it != doc.end()) {
      expect_keys(*it, "hamiltonian", {"beta_per_mm", "coupling_per_mm", "coupling_model"});
      require(!(it->contains("coupling_per_mm") && it->contains("coupling_model")),
              "give either 'coupling_per_mm' or 'coupling_model'");
      c.beta_per_mm = get_number(*it, "beta_per_mm", c.beta_per_mm);
      c.coupling_per_mm = get_number(*it, "coupling_per_mm", c.coupling_per_mm);
      require(c.coupling_per_mm >= 0.0, "'coupling_per_mm' must be >= 0");
      if (const auto m = it->find("coupling_model"); m != it->end()) {
        expect_keys(*m, "coupling_model", {"amplitude_per_mm", "decay_length_um"});
        CouplingModel model{get_number(*m, "amplitude_per_mm", 0.0), get_number(*m, "decay_length_um", 0.0)};
        require(model.amplitude_per_mm > 0.0 && model.decay_length_um > 0.0,
                "coupling model parameters must be positive");
        c.coupling_model = model;
      }
    }

    c.z_mm = get_number(doc, "z_mm", c.z_mm);
    require(c.z_mm >= 0.0, "'z_mm' must be >= 0");

    if (const auto it = doc.find("input_ports"); it != doc.end()) {
      require(it->is_array() && !it->empty(), "'input_ports' must be a non-empty array");
      c.input_ports.clear();
      for (const auto& p : *it) {
        require(p.is_number_integer(), "'input_ports' entries must be integers");
        c.input_ports.push_back(p.get<int>());
      }
    }
    c.indistinguishability = get_number(doc, "indistinguishability", c.indistinguishability);
    require(c.indistinguishability >= 0.0 && c.indistinguishability <= 1.0,
            "'indistinguishability' must lie in [0, 1]");

    if (const auto it = doc.find("hom"); it != doc.end()) {
      expect_keys(*it, "hom", {"delays_fs", "coherence_time_fs", "filter_center_nm", "filter_fwhm_nm", "entry"});
      if (const auto d = it->find("delays_fs"); d != it->end()) c.delays_fs = parse_delays(*d);
      if (it->contains("coherence_time_fs")) {
        c.coherence_time_fs = get_number(*it, "coherence_time_fs", 0.0);
        require(*c.coherence_time_fs > 0.0, "'coherence_time_fs' must be positive");
      }
      c.filter_center_nm = get_number(*it, "filter_center_nm", c.filter_center_nm);
      c.filter_fwhm_nm = get_number(*it, "filter_fwhm_nm", c.filter_fwhm_nm);
      require(c.filter_center_nm > 0.0 && c.filter_fwhm_nm > 0.0, "filter parameters must be positive");
      if (const auto e = it->find("entry"); e != it->end()) {
        require(e->is_array() && e->size() == 2 && (*e)[0].is_number_unsigned() && (*e)[1].is_number_unsigned(),
                "'hom.entry' must be a pair of site indices");
        c.hom_entry = {(*e)[0].get<std::size_t>(), (*e)[1].get<std::size_t>()};
      }
    }

    if (const auto it = doc.find("detection"); it != doc.end()) {
      expect_keys(*it, "detection", {"efficiency", "pair_rate_hz", "diagonal_splitter"});
      if (const auto e = it->find("efficiency"); e != it->end()) {
        c.efficiency.clear();
        if (e->is_number()) {
          c.efficiency.push_back(e->get<double>());
        } else {
          require(e->is_array() && !e->empty(), "'efficiency' must be a number or a non-empty array");
          for (const auto& v : *e) {
            require(v.is_number(), "'efficiency' entries must be numbers");
            c.efficiency.push_back(v.get<double>());
          }
        }
        for (double eta : c.efficiency) require(eta > 0.0 && eta <= 1.0, "efficiencies must lie in (0, 1]");
      }
      c.pair_rate_hz = get_number(*it, "pair_rate_hz", c.pair_rate_hz);
      require(c.pair_rate_hz > 0.0, "'pair_rate_hz' must be positive");
      if (const auto s = it->find("diagonal_splitter"); s != it->end()) {
        require(s->is_boolean(), "'diagonal_splitter' must be a boolean");
        c.diagonal_splitter = s->get<bool>();
      }
    }

    c.duration_s = get_number(doc, "duration_s", c.duration_s);
    require(c.duration_s >= 0.0, "'duration_s' must be >= 0");
    if (const auto it = doc.find("sample_source"); it != doc.end()) {
      require(it->is_string(), "'sample_source' must be a string");
      c.sample_source = it->get<std::string>();
      require(c.sample_source == "partial" || c.sample_source == "quantum" || c.sample_source == "classical",
              "'sample_source' must be partial, quantum or classical");
    }
    if (const auto it = doc.find("seed"); it != doc.end()) {
      require(it->is_number_unsigned(), "'seed' must be a non-negative integer");
      c.seed = it->get<std::uint64_t>();
    }
    if (const auto it = doc.find("output_dir"); it != doc.end()) {
      require(it->is_string(), "'output_dir' must be a string");
      c.output_dir = it->get<std::string>();
    }
  } catch (const json::exception& e) {
    fail(std::string("config: ") + e.what());
  }

  // Cross-field checks against the described system.
  const std::size_t n = c.graph ? c.graph->site_count : hexagonal_site_count(c.rings);
  for (int port : c.input_ports) {
    if (c.graph) {
      require(port >= 0 && static_cast<std::size_t>(port) < n, fmt::format("input port {} is not a site index", port));
    } else {
      require(std::abs(port) <= c.rings, fmt::format("input port {} outside {}..{}", port, -c.rings, c.rings));
    }
  }
  require(c.hom_entry.first < n && c.hom_entry.second < n, "'hom.entry' site index out of range");
  require(c.efficiency.size() == 1 || c.efficiency.size() == n, "'efficiency' needs 1 or site_count values");
  return c;
}

ExperimentConfig load_config(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorKind::Parse, fmt::format("cannot open config '{}'", path.string()));
  json doc;
  try {
    doc = json::parse(in, nullptr, true, /*ignore_comments=*/true);
  } catch (const json::exception& e) {
    throw Error(ErrorKind::Parse, fmt::format("config '{}' is not valid JSON: {}", path.string(), e.what()));
  }
  return config_from_json(doc);
}

std::size_t WalkSystem::site_for_port(int port) const {
  if (lattice) return port_site(*lattice, port);
  if (port < 0 || static_cast<std::size_t>(port) >= size()) {
    throw Error(ErrorKind::UnknownPort, fmt::format("port {} is not a site index", port));
  }
  return static_cast<std::size_t>(port);
}

SitePair WalkSystem::input_pair(const ExperimentConfig& config) const {
  const int a = config.input_ports.front();
  const int b = config.input_ports.size() > 1 ? config.input_ports[1] : a;
  return {site_for_port(a), site_for_port(b)};
}

DetectionModel WalkSystem::detection(const ExperimentConfig& config) const {
  DetectionModel model;
  model.efficiency = config.efficiency.size() == 1 ? std::vector<double>(size(), config.efficiency.front())
                                                   : config.efficiency;
  model.pair_rate_hz = config.pair_rate_hz;
  model.diagonal_splitter = config.diagonal_splitter;
  model.validate(size());
  return model;
}

WalkSystem build_system(const ExperimentConfig& config) {
  const double coupling = config.effective_coupling_per_mm();
  if (config.graph) {
    std::vector<SiteCoord> sites;
    std::vector<std::pair<double, double>> positions;
    for (std::size_t i = 0; i < config.graph->site_count; ++i) {
      sites.push_back({static_cast<int>(i), 0, 0});
      positions.emplace_back(static_cast<double>(i) * config.spacing_um, 0.0);
    }
    Hamiltonian h = assemble_graph(config.graph->site_count, config.graph->edges, config.beta_per_mm, coupling);
    return {std::nullopt, std::move(sites), std::move(positions), config.graph->edges, std::move(h), config.spacing_um};
  }
  TriangularLattice lattice = build_hexagonal_lattice(config.rings, config.spacing_um);
  std::vector<std::pair<double, double>> positions;
  for (std::size_t i = 0; i < lattice.size(); ++i) positions.push_back(lattice.position_um(i));
  auto edges = lattice.edges();
  Hamiltonian h = assemble_uniform(lattice, config.beta_per_mm, coupling);
  auto sites = lattice.sites();
  return {std::move(lattice), std::move(sites), std::move(positions), std::move(edges), std::move(h), config.spacing_um};
}

}  // namespace qwalk
