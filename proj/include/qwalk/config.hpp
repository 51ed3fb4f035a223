#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qwalk/coupling.hpp"
#include "qwalk/hamiltonian.hpp"
#include "qwalk/lattice.hpp"
#include "qwalk/sampling.hpp"
#include "qwalk/twophoton.hpp"

namespace qwalk {

/// Explicit graph used instead of a hexagonal lattice. Ports are then plain
/// site indices and sites are drawn along one row.
struct GraphSpec {
  std::size_t site_count = 0;
  std::vector<Edge> edges;
};

/// One experiment definition. Every figure and table is regenerated from
/// this alone; `hash()` tags all outputs.
struct ExperimentConfig {
  int rings = 3;
  double spacing_um = 15.0;
  std::optional<GraphSpec> graph;

  double beta_per_mm = 0.0;
  /// Calibrated so C z = 2.2 at the 11 mm evolution length; not a measured value.
  double coupling_per_mm = 0.2;
  /// When set, the coupling is the model evaluated at `spacing_um`.
  std::optional<CouplingModel> coupling_model;

  double z_mm = 11.0;
  std::vector<int> input_ports{-1, 1};
  double indistinguishability = 1.0;

  std::vector<double> delays_fs;
  std::optional<double> coherence_time_fs;
  double filter_center_nm = 780.0;
  double filter_fwhm_nm = 3.0;
  SitePair hom_entry{0, 0};

  /// One value (broadcast) or one per site.
  std::vector<double> efficiency{1.0};
  /// Synthetic: 2000 s at 50 Hz gives ~1e5 detected pairs.
  double pair_rate_hz = 50.0;
  bool diagonal_splitter = true;
  double duration_s = 2000.0;
  std::string sample_source = "partial";

  std::uint64_t seed = 20210301;
  std::string output_dir = "qwalk_out";

  double effective_coupling_per_mm() const;
  double effective_coherence_time_fs() const;

  nlohmann::json to_json() const;
  /// hash_hex of the canonical to_json() dump without output_dir.
  std::string hash() const;
};

/// Strict: unknown keys, wrong types and out-of-range values raise
/// Error(Parse).
ExperimentConfig config_from_json(const nlohmann::json& doc);
ExperimentConfig load_config(const std::filesystem::path& path);

/// The walk a config describes: sites, graph, Hamiltonian and port mapping.
struct WalkSystem {
  std::optional<TriangularLattice> lattice;
  std::vector<SiteCoord> sites;
  std::vector<std::pair<double, double>> positions_um;
  std::vector<Edge> edges;
  Hamiltonian hamiltonian;
  double spacing_um = 15.0;

  std::size_t size() const noexcept { return sites.size(); }
  std::size_t site_for_port(int port) const;
  SitePair input_pair(const ExperimentConfig& config) const;
  DetectionModel detection(const ExperimentConfig& config) const;
};

WalkSystem build_system(const ExperimentConfig& config);

/// Default scan: -1500 fs to 1500 fs in 50 fs steps.
std::vector<double> default_delays_fs();

}  // namespace qwalk
