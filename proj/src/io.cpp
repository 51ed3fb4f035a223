#include "qwalk/io.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <sstream>

#include <fmt/format.h>

#include "qwalk/error.hpp"

namespace qwalk::io {

namespace {

using nlohmann::json;

Eigen::Index ix(std::size_t i) { return static_cast<Eigen::Index>(i); }

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::string field;
  std::istringstream ss(line);
  while (std::getline(ss, field, ',')) out.push_back(trim(field));
  if (!line.empty() && line.back() == ',') out.emplace_back();
  return out;
}

std::string cell_text(const json& cell) {
  if (cell.is_number_float()) return format_double(cell.get<double>());
  if (cell.is_number_integer()) return std::to_string(cell.get<std::int64_t>());
  if (cell.is_number_unsigned()) return std::to_string(cell.get<std::uint64_t>());
  if (cell.is_string()) return cell.get<std::string>();
  if (cell.is_boolean()) return cell.get<bool>() ? "true" : "false";
  if (cell.is_null()) return "nan";
  return cell.dump();
}

double to_double(const std::string& text, std::string_view what) {
  try {
    std::size_t used = 0;
    const double v = std::stod(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, fmt::format("cannot read {} from '{}'", what, text));
  }
}

std::int64_t to_int(const std::string& text, std::string_view what) {
  try {
    std::size_t used = 0;
    const long long v = std::stoll(text, &used);
    if (used != text.size()) throw std::invalid_argument("trailing characters");
    return v;
  } catch (const std::exception&) {
    throw Error(ErrorKind::Parse, fmt::format("cannot read {} from '{}'", what, text));
  }
}

json number_or_null(double v) { return std::isfinite(v) ? json(v) : json(nullptr); }

}  // namespace

std::uint64_t fnv1a64(std::string_view bytes) noexcept {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string hash_hex(std::string_view bytes) { return fmt::format("{:016x}", fnv1a64(bytes)); }

std::string format_double(double value) {
  if (std::isnan(value)) return "nan";
  return fmt::format("{}", value);
}

std::string Table::to_csv(const Meta& meta) const {
  std::string out;
  for (const auto& [key, value] : meta) out += fmt::format("# {}={}\n", key, value);
  for (std::size_t c = 0; c < columns.size(); ++c) {
    if (c) out += ',';
    out += columns[c];
  }
  out += '\n';
  for (const auto& row : rows) {
    for (std::size_t c = 0; c < row.size(); ++c) {
      if (c) out += ',';
      out += cell_text(row[c]);
    }
    out += '\n';
  }
  return out;
}

std::string Table::to_json(const Meta& meta) const {
  json doc;
  json m = json::object();
  for (const auto& [key, value] : meta) m[key] = value;
  doc["meta"] = m;
  doc["columns"] = columns;
  doc["rows"] = rows;
  return doc.dump(1) + "\n";
}

std::size_t CsvDocument::column(std::string_view name) const {
  const auto it = std::find(columns.begin(), columns.end(), name);
  if (it == columns.end()) throw Error(ErrorKind::Parse, fmt::format("missing column '{}'", name));
  return static_cast<std::size_t>(it - columns.begin());
}

CsvDocument parse_csv(std::istream& in) {
  CsvDocument doc;
  std::string line;
  bool have_header = false;
  while (std::getline(in, line)) {
    const std::string text = trim(line);
    if (text.empty()) continue;
    if (text.front() == '#') {
      const std::string body = trim(std::string_view(text).substr(1));
      if (const auto eq = body.find('='); eq != std::string::npos) {
        doc.meta[trim(body.substr(0, eq))] = trim(body.substr(eq + 1));
      }
      continue;
    }
    auto fields = split_fields(text);
    if (!have_header) {
      doc.columns = std::move(fields);
      have_header = true;
      continue;
    }
    if (fields.size() != doc.columns.size()) {
      throw Error(ErrorKind::Parse, fmt::format("row has {} fields, header has {}", fields.size(),
                                                doc.columns.size()));
    }
    doc.rows.push_back(std::move(fields));
  }
  if (!have_header) throw Error(ErrorKind::Parse, "CSV has no header row");
  return doc;
}

json lattice_to_json(const TriangularLattice& lattice) {
  json doc;
  doc["rings"] = lattice.rings();
  doc["site_count"] = lattice.size();
  doc["spacing_um"] = lattice.spacing_um();
  doc["orientation"] = "central row along +x; unit neighbours at multiples of 60 degrees";
  doc["metadata"] = {{"input_port_pitch_um", kInputPortPitchUm}, {"bend_radius_mm", kBendRadiusMm}};
  json sites = json::array();
  for (std::size_t i = 0; i < lattice.size(); ++i) {
    const auto& s = lattice.site(i);
    const auto [x, y] = lattice.position_um(i);
    sites.push_back({{"index", i}, {"q", s.q}, {"r", s.r}, {"layer", s.layer}, {"x_um", x}, {"y_um", y}});
  }
  doc["sites"] = std::move(sites);
  json edges = json::array();
  for (const auto& [a, b] : lattice.edges()) edges.push_back({a, b});
  doc["edges"] = std::move(edges);
  json ports = json::object();
  for (const auto& [port, site] : lattice.port_map()) ports[std::to_string(port)] = site;
  doc["port_map"] = std::move(ports);
  return doc;
}

Table hamiltonian_table(const Hamiltonian& hamiltonian) {
  const std::size_t n = hamiltonian.site_count();
  Table t;
  for (std::size_t j = 0; j < n; ++j) t.columns.push_back(fmt::format("h{}", j));
  for (std::size_t i = 0; i < n; ++i) {
    std::vector<json> row;
    for (std::size_t j = 0; j < n; ++j) row.emplace_back(hamiltonian.matrix()(ix(i), ix(j)));
    t.rows.push_back(std::move(row));
  }
  return t;
}

json hamiltonian_edge_list(const Hamiltonian& hamiltonian) {
  const auto& h = hamiltonian.matrix();
  const std::size_t n = hamiltonian.site_count();
  json doc;
  doc["site_count"] = n;
  doc["units"] = "1/mm";
  json diag = json::array();
  for (std::size_t i = 0; i < n; ++i) diag.push_back(h(ix(i), ix(i)));
  doc["propagation_constants"] = std::move(diag);
  json edges = json::array();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      if (h(ix(i), ix(j)) != 0.0) edges.push_back({{"i", i}, {"j", j}, {"coupling", h(ix(i), ix(j))}});
    }
  }
  doc["edges"] = std::move(edges);
  return doc;
}

Table distribution_table(std::span<const SiteCoord> sites, std::span<const double> probabilities) {
  if (sites.size() != probabilities.size()) {
    throw Error(ErrorKind::LengthMismatch, "one probability per site expected");
  }
  Table t{{"site", "q", "r", "probability"}, {}};
  for (std::size_t i = 0; i < sites.size(); ++i) {
    t.rows.push_back({i, sites[i].q, sites[i].r, probabilities[i]});
  }
  return t;
}

Table correlation_table(const CorrelationMatrix& gamma) {
  Table t{{"i", "j", "value"}, {}};
  for (std::size_t i = 0; i < gamma.size(); ++i) {
    for (std::size_t j = 0; j < gamma.size(); ++j) t.rows.push_back({i, j, gamma(i, j)});
  }
  return t;
}

Table hom_curve_table(std::span<const double> delays_fs, std::span<const double> values) {
  if (delays_fs.size() != values.size()) {
    throw Error(ErrorKind::LengthMismatch, "one value per delay expected");
  }
  Table t{{"delay_fs", "value"}, {}};
  for (std::size_t k = 0; k < values.size(); ++k) t.rows.push_back({delays_fs[k], values[k]});
  return t;
}

Table violation_table(const ViolationMap& map) {
  Table t{{"i", "j", "V", "sigma", "significance"}, {}};
  for (std::size_t i = 0; i < map.size(); ++i) {
    for (std::size_t j = i + 1; j < map.size(); ++j) {
      t.rows.push_back({i, j, map.violation(ix(i), ix(j)), number_or_null(map.sigma(ix(i), ix(j))),
                        number_or_null(map.significance(ix(i), ix(j)))});
    }
  }
  return t;
}

Table count_matrix_table(const CountMatrix& counts) {
  Table t{{"i", "j", "count"}, {}};
  for (std::size_t i = 0; i < counts.size(); ++i) {
    for (std::size_t j = i; j < counts.size(); ++j) t.rows.push_back({i, j, counts(i, j)});
  }
  return t;
}

Meta count_matrix_meta(const CountMatrix& counts, std::string_view model_hash) {
  return {{"site_count", std::to_string(counts.size())},
          {"duration_s", format_double(counts.duration_s)},
          {"seed", std::to_string(counts.seed)},
          {"model_hash", std::string(model_hash)}};
}

CountMatrix parse_count_matrix(std::istream& in) {
  const CsvDocument doc = parse_csv(in);
  const auto ci = doc.column("i");
  const auto cj = doc.column("j");
  const auto cc = doc.column("count");

  std::size_t n = 0;
  if (const auto it = doc.meta.find("site_count"); it != doc.meta.end()) {
    const auto v = to_int(it->second, "site_count");
    if (v < 0) throw Error(ErrorKind::Parse, "negative site_count");
    n = static_cast<std::size_t>(v);
  } else {
    for (const auto& row : doc.rows) {
      n = std::max<std::size_t>(n, static_cast<std::size_t>(std::max(to_int(row[ci], "i"), to_int(row[cj], "j"))) + 1);
    }
  }

  CountMatrix out{CountArray::Zero(ix(n), ix(n)), 0.0, 0};
  if (const auto it = doc.meta.find("duration_s"); it != doc.meta.end()) {
    out.duration_s = to_double(it->second, "duration_s");
  }
  if (const auto it = doc.meta.find("seed"); it != doc.meta.end()) {
    out.seed = static_cast<std::uint64_t>(to_int(it->second, "seed"));
  }
  for (const auto& row : doc.rows) {
    const auto i = to_int(row[ci], "i");
    const auto j = to_int(row[cj], "j");
    const auto c = to_int(row[cc], "count");
    if (i < 0 || j < 0 || static_cast<std::size_t>(i) >= n || static_cast<std::size_t>(j) >= n) {
      throw Error(ErrorKind::Parse, fmt::format("pair ({}, {}) outside {} sites", i, j, n));
    }
    if (c < 0) throw Error(ErrorKind::Parse, "negative count");
    out.counts(i, j) = c;
    out.counts(j, i) = c;
  }
  return out;
}

Table scan_table(std::span<const ScanPoint> scan) {
  Table t{{"delay_fs", "counts"}, {}};
  for (const auto& p : scan) t.rows.push_back({p.delay_fs, p.counts});
  return t;
}

std::vector<ScanPoint> parse_scan(std::istream& in) {
  const CsvDocument doc = parse_csv(in);
  const auto cd = doc.column("delay_fs");
  const auto cc = doc.column("counts");
  std::vector<ScanPoint> scan;
  for (const auto& row : doc.rows) {
    scan.push_back({to_double(row[cd], "delay_fs"), to_double(row[cc], "counts")});
  }
  return scan;
}

std::vector<CouplingSample> parse_coupling_samples(std::istream& in) {
  const CsvDocument doc = parse_csv(in);
  const auto cs = doc.column("separation_um");
  const auto cc = doc.column("coupling_per_mm");
  std::vector<CouplingSample> samples;
  for (const auto& row : doc.rows) {
    samples.push_back({to_double(row[cs], "separation_um"), to_double(row[cc], "coupling_per_mm")});
  }
  return samples;
}

json coupling_model_json(const CouplingModel& model) {
  return {{"amplitude_per_mm", model.amplitude_per_mm}, {"decay_length_um", model.decay_length_um}};
}

json detection_model_json(const DetectionModel& model) {
  return {{"efficiency", model.efficiency},
          {"pair_rate_hz", model.pair_rate_hz},
          {"diagonal_splitter", model.diagonal_splitter}};
}

std::string model_hash(const DetectionModel& model) { return hash_hex(detection_model_json(model).dump()); }

}  // namespace qwalk::io
