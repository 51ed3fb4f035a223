#pragma once

#include <cstdint>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "json.hpp"

#include "qwalk/certification.hpp"
#include "qwalk/coupling.hpp"
#include "qwalk/hamiltonian.hpp"
#include "qwalk/lattice.hpp"
#include "qwalk/sampling.hpp"
#include "qwalk/twophoton.hpp"

namespace qwalk::io {

/// FNV-1a, 64 bit.
std::uint64_t fnv1a64(std::string_view bytes) noexcept;
/// 16 lowercase hex digits of fnv1a64.
std::string hash_hex(std::string_view bytes);

/// Shortest text that round-trips the double ("{:.17g}" style).
std::string format_double(double value);

/// key=value lines written as `# key=value` above a CSV header, or as the
/// "meta" object of a JSON document.
using Meta = std::vector<std::pair<std::string, std::string>>;

/// Column-oriented result table that renders to CSV or JSON.
struct Table {
  std::vector<std::string> columns;
  std::vector<std::vector<nlohmann::json>> rows;

  std::string to_csv(const Meta& meta) const;
  std::string to_json(const Meta& meta) const;
};

/// Parsed CSV: `# key=value` comment lines, one header row, data rows.
struct CsvDocument {
  std::map<std::string, std::string> meta;
  std::vector<std::string> columns;
  std::vector<std::vector<std::string>> rows;

  std::size_t column(std::string_view name) const;
};

CsvDocument parse_csv(std::istream& in);

// --- per-module documents ---------------------------------------------------

nlohmann::json lattice_to_json(const TriangularLattice& lattice);

Table hamiltonian_table(const Hamiltonian& hamiltonian);
nlohmann::json hamiltonian_edge_list(const Hamiltonian& hamiltonian);

/// Columns site, q, r, probability.
Table distribution_table(std::span<const SiteCoord> sites, std::span<const double> probabilities);

/// Columns i, j, value over all N^2 entries.
Table correlation_table(const CorrelationMatrix& gamma);

/// Columns delay_fs, value.
Table hom_curve_table(std::span<const double> delays_fs, std::span<const double> values);

/// Columns i, j, V, sigma, significance over pairs i < j.
Table violation_table(const ViolationMap& map);

/// Columns i, j, count over pairs i <= j. The caller adds duration, seed and
/// model hash through count_matrix_meta.
Table count_matrix_table(const CountMatrix& counts);
Meta count_matrix_meta(const CountMatrix& counts, std::string_view model_hash);
CountMatrix parse_count_matrix(std::istream& in);

/// Columns delay_fs, counts.
Table scan_table(std::span<const ScanPoint> scan);
std::vector<ScanPoint> parse_scan(std::istream& in);

/// Columns separation_um, coupling_per_mm.
std::vector<CouplingSample> parse_coupling_samples(std::istream& in);
nlohmann::json coupling_model_json(const CouplingModel& model);

nlohmann::json detection_model_json(const DetectionModel& model);
std::string model_hash(const DetectionModel& model);

}  // namespace qwalk::io
