#include "qwalk/lattice.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdlib>
#include <string>

#include "qwalk/error.hpp"

namespace qwalk {

namespace {

constexpr std::array<std::pair<int, int>, 6> kNeighborOffsets = {{
    {1, 0}, {0, 1}, {-1, 1}, {-1, 0}, {0, -1}, {1, -1},
}};

// Ring walk directions: starting at (k, 0), these six legs of k steps each
// trace ring k counterclockwise.
constexpr std::array<std::pair<int, int>, 6> kRingLegs = {{
    {-1, 1}, {-1, 0}, {0, -1}, {1, -1}, {1, 0}, {0, 1},
}};

}  // namespace

int hex_distance(int q1, int r1, int q2, int r2) noexcept {
  const int dq = q1 - q2;
  const int dr = r1 - r2;
  return std::max({std::abs(dq), std::abs(dr), std::abs(dq + dr)});
}

std::size_t hexagonal_site_count(int rings) {
  if (rings < 0) throw Error(ErrorKind::InvalidArgument, "rings must be >= 0");
  const auto k = static_cast<std::size_t>(rings);
  return 3 * k * (k + 1) + 1;
}

TriangularLattice::TriangularLattice(int rings, double spacing_um)
    : rings_(rings), spacing_um_(spacing_um) {
  if (rings < 0) throw Error(ErrorKind::InvalidArgument, "rings must be >= 0");
  if (!(spacing_um > 0.0) || !std::isfinite(spacing_um)) {
    throw Error(ErrorKind::InvalidArgument, "spacing_um must be positive");
  }

  sites_.reserve(hexagonal_site_count(rings));
  sites_.push_back({0, 0, 0});
  for (int k = 1; k <= rings; ++k) {
    int q = k;
    int r = 0;
    for (const auto& [dq, dr] : kRingLegs) {
      for (int step = 0; step < k; ++step) {
        sites_.push_back({q, r, k});
        q += dq;
        r += dr;
      }
    }
  }

  for (std::size_t i = 0; i < sites_.size(); ++i) {
    index_of_.emplace(std::make_pair(sites_[i].q, sites_[i].r), i);
  }

  const std::size_t n = sites_.size();
  neighbors_.resize(n);
  adjacency_.assign(n * n, false);
  for (std::size_t i = 0; i < n; ++i) {
    for (const auto& [dq, dr] : kNeighborOffsets) {
      const auto it = index_of_.find({sites_[i].q + dq, sites_[i].r + dr});
      if (it == index_of_.end()) continue;
      neighbors_[i].push_back(it->second);
      adjacency_[i * n + it->second] = true;
    }
    std::sort(neighbors_[i].begin(), neighbors_[i].end());
  }

  for (int m = -rings; m <= rings; ++m) {
    port_map_.emplace(m, index_of_.at({m, 0}));
  }
}

const SiteCoord& TriangularLattice::site(std::size_t index) const {
  if (index >= sites_.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "site index " + std::to_string(index) + " out of range");
  }
  return sites_[index];
}

const std::vector<std::size_t>& TriangularLattice::neighbors(std::size_t index) const {
  if (index >= sites_.size()) {
    throw Error(ErrorKind::IndexOutOfRange, "site index " + std::to_string(index) + " out of range");
  }
  return neighbors_[index];
}

bool TriangularLattice::adjacent(std::size_t a, std::size_t b) const {
  const std::size_t n = sites_.size();
  if (a >= n || b >= n) throw Error(ErrorKind::IndexOutOfRange, "site index out of range");
  return adjacency_[a * n + b];
}

std::vector<Edge> TriangularLattice::edges() const {
  std::vector<Edge> out;
  for (std::size_t i = 0; i < neighbors_.size(); ++i) {
    for (std::size_t j : neighbors_[i]) {
      if (i < j) out.emplace_back(i, j);
    }
  }
  return out;
}

std::optional<std::size_t> TriangularLattice::find(int q, int r) const {
  const auto it = index_of_.find({q, r});
  if (it == index_of_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> TriangularLattice::mirror_permutation() const {
  std::vector<std::size_t> perm(sites_.size());
  for (std::size_t i = 0; i < sites_.size(); ++i) {
    perm[i] = index_of_.at({-sites_[i].q - sites_[i].r, sites_[i].r});
  }
  return perm;
}

std::pair<double, double> TriangularLattice::position_um(std::size_t index) const {
  const SiteCoord& s = site(index);
  const double x = (s.q + 0.5 * s.r) * spacing_um_;
  const double y = (std::sqrt(3.0) / 2.0) * s.r * spacing_um_;
  return {x, y};
}

TriangularLattice build_hexagonal_lattice(int rings, double spacing_um) {
  return TriangularLattice(rings, spacing_um);
}

std::size_t edge_count(const TriangularLattice& lattice) {
  std::size_t degree_sum = 0;
  for (std::size_t i = 0; i < lattice.size(); ++i) degree_sum += lattice.degree(i);
  return degree_sum / 2;
}

std::size_t port_site(const TriangularLattice& lattice, int port) {
  const auto it = lattice.port_map().find(port);
  if (it == lattice.port_map().end()) {
    throw Error(ErrorKind::UnknownPort,
                "port " + std::to_string(port) + " is outside -" + std::to_string(lattice.rings()) +
                    ".." + std::to_string(lattice.rings()));
  }
  return it->second;
}

}  // namespace qwalk
