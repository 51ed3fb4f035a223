#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace qwalk {

/// Axial hexagonal coordinate of a lattice site. Unit neighbours are
/// (+-1,0), (0,+-1), (1,-1) and (-1,1); `layer` is the ring index.
struct SiteCoord {
  int q = 0;
  int r = 0;
  int layer = 0;

  friend bool operator==(const SiteCoord&, const SiteCoord&) = default;
};

/// Ring distance between two axial coordinates, max(|dq|, |dr|, |dq+dr|).
int hex_distance(int q1, int r1, int q2, int r2) noexcept;

using Edge = std::pair<std::size_t, std::size_t>;

/// Metadata of the fabricated chip. Neither value enters the dynamics.
inline constexpr double kInputPortPitchUm = 130.0;
inline constexpr double kBendRadiusMm = 30.0;

/// Hexagonally layered triangular lattice.
///
/// Sites are stored ring-major with the centre first; within ring k the sweep
/// starts at (k, 0) on the +q axis and runs counterclockwise. The central row
/// (r = 0) carries the port labels -k..k. Immutable after construction.
class TriangularLattice {
 public:
  TriangularLattice(int rings, double spacing_um);

  int rings() const noexcept { return rings_; }
  double spacing_um() const noexcept { return spacing_um_; }
  std::size_t size() const noexcept { return sites_.size(); }

  const std::vector<SiteCoord>& sites() const noexcept { return sites_; }
  const SiteCoord& site(std::size_t index) const;

  const std::vector<std::size_t>& neighbors(std::size_t index) const;
  std::size_t degree(std::size_t index) const { return neighbors(index).size(); }
  bool adjacent(std::size_t a, std::size_t b) const;

  /// Unordered adjacent pairs with first < second, sorted.
  std::vector<Edge> edges() const;

  std::optional<std::size_t> find(int q, int r) const;

  /// Port label -> site index along the central row.
  const std::map<int, std::size_t>& port_map() const noexcept { return port_map_; }

  /// Site index permutation of the reflection x -> -x, (q, r) -> (-q-r, r).
  std::vector<std::size_t> mirror_permutation() const;

  /// Cartesian position of a site in micrometres. The central row lies on
  /// the x axis and y points "up".
  std::pair<double, double> position_um(std::size_t index) const;

 private:
  int rings_;
  double spacing_um_;
  std::vector<SiteCoord> sites_;
  std::vector<std::vector<std::size_t>> neighbors_;
  std::vector<bool> adjacency_;
  std::map<std::pair<int, int>, std::size_t> index_of_;
  std::map<int, std::size_t> port_map_;
};

TriangularLattice build_hexagonal_lattice(int rings, double spacing_um);

/// N = 3k(k+1) + 1.
std::size_t hexagonal_site_count(int rings);

std::size_t edge_count(const TriangularLattice& lattice);

/// Throws Error(UnknownPort) when |port| > rings.
std::size_t port_site(const TriangularLattice& lattice, int port);

}  // namespace qwalk
