#include <cmath>
#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "qwalk/certification.hpp"
#include "qwalk/error.hpp"
#include "qwalk/hamiltonian.hpp"

using namespace qwalk;

TEST_CASE("balanced coupler witness") {
  Eigen::MatrixXd h(2, 2);
  h << 0.0, 1.0, 1.0, 0.0;
  const auto u = evolve(Hamiltonian::from_matrix(h), M_PI / 4.0);
  const auto map = violation_map(quantum_correlation(u, SitePair{0, 1}));
  CHECK(map.source == ViolationSource::ExactCorrelations);
  CHECK(std::abs(map.violation(0, 1) - 1.0 / 3.0) < 1e-12);
  CHECK(map.violation(0, 1) == map.violation(1, 0));
  CHECK(map.violation(0, 0) == 0.0);
  CHECK(std::isnan(map.significance(0, 1)));
  CHECK(std::isnan(map.sigma(0, 1)));
  CHECK(positive_pairs(map).size() == 1);
  CHECK(max_violation(map) == doctest::Approx(1.0 / 3.0));
  CHECK(std::isinf(max_significance(map)));
}

TEST_CASE("bunching-only matrix violates everywhere") {
  Eigen::MatrixXd g = Eigen::MatrixXd::Zero(4, 4);
  g.diagonal() << 0.1, 0.2, 0.3, 0.4;
  const auto map = violation_map({g, Convention::Quantum});
  for (std::size_t i = 0; i < 4; ++i) {
    for (std::size_t j = 0; j < 4; ++j) {
      if (i != j) CHECK(map.violation(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 0.0);
    }
  }
  CHECK(positive_pairs(map).size() == 6);
}

TEST_CASE("property: classical matrices never violate") {
  std::mt19937_64 rng(50);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + static_cast<std::size_t>(unit(rng) * 30);
    const auto m = oracle::random_graph_hamiltonian(n, rng);
    const auto u = evolve(Hamiltonian::from_matrix(m), 4.0 * unit(rng));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    const auto map = violation_map(classical_correlation(u, SitePair{pick(rng), pick(rng)}));
    REQUIRE(max_violation(map) <= 1e-12);
  }
}

TEST_CASE("default configuration certifies quantum correlations") {
  const auto lattice = build_hexagonal_lattice(3, 15.0);
  const auto u = evolve(assemble_uniform(lattice, 0.0, 0.2), 11.0);
  const auto input = resolve_ports(lattice, {-1, 1, 1.0});
  CHECK(positive_pairs(violation_map(quantum_correlation(u, input))).size() > 0);
  CHECK(positive_pairs(violation_map(classical_correlation(u, input))).empty());
}

TEST_CASE("witness is scale covariant") {
  const auto lattice = build_hexagonal_lattice(2, 15.0);
  const auto u = evolve(assemble_uniform(lattice, 0.0, 0.3), 5.0);
  const auto g = quantum_correlation(u, resolve_ports(lattice, {-1, 1, 1.0}));
  const auto base = violation_map(g);
  for (double c : {0.5, 3.0, 1e4}) {
    const auto scaled = violation_map({c * g.values, g.convention});
    CHECK((scaled.violation - c * base.violation).cwiseAbs().maxCoeff() <= 1e-12 * c);
  }
}

TEST_CASE("count-based significance") {
  CountMatrix counts;
  counts.counts = CountArray::Zero(3, 3);
  counts.counts << 900, 0, 40,
                     0, 0, 5,
                    40, 5, 400;
  counts.duration_s = 1.0;
  const auto map = violation_significance(counts);
  CHECK(map.source == ViolationSource::Counts);

  // V = 2/3 sqrt(900 * 400) - 40 = 360, sigma^2 = 400/9 + 900/9 + 40
  const double v = 2.0 / 3.0 * 600.0 - 40.0;
  const double sigma = std::sqrt(400.0 / 9.0 + 900.0 / 9.0 + 40.0);
  CHECK(map.violation(0, 2) == doctest::Approx(v));
  CHECK(map.sigma(0, 2) == doctest::Approx(sigma));
  CHECK(map.significance(0, 2) == doctest::Approx(v / sigma));
  CHECK(map.defined(0, 2));

  // zero diagonal or zero cross count marks the pair undefined
  CHECK_FALSE(map.defined(0, 1));
  CHECK_FALSE(map.defined(1, 2));
  CHECK(std::isnan(map.significance(1, 2)));
  CHECK_FALSE(map.defined(1, 1));
  const auto pairs = positive_pairs(map, 3.0);
  REQUIRE(pairs.size() == 1);
  CHECK(pairs[0].first == 0);
  CHECK(pairs[0].second == 2);
  CHECK(max_significance(map) == doctest::Approx(v / sigma));

  CountMatrix bad = counts;
  bad.counts(0, 0) = -1;
  CHECK_THROWS_AS(violation_significance(bad), Error);
}

TEST_CASE("significance scales with the square root of the count level") {
  const auto lattice = build_hexagonal_lattice(3, 15.0);
  const auto u = evolve(assemble_uniform(lattice, 0.0, 0.2), 11.0);
  const auto g = quantum_correlation(u, resolve_ports(lattice, {-1, 1, 1.0}));
  const auto exact = violation_map(g);
  const auto scaled_counts = [&](double k) {
    CountMatrix c;
    c.counts = (k * g.values).array().round().cast<std::int64_t>().matrix();
    return violation_significance(c);
  };
  const auto low = scaled_counts(1e5);
  const auto high = scaled_counts(1e7);
  // pick the strongest witness of the exact map
  Eigen::Index bi = 0, bj = 1;
  double best = -1.0;
  for (Eigen::Index i = 0; i < 37; ++i) {
    for (Eigen::Index j = i + 1; j < 37; ++j) {
      if (exact.violation(i, j) > best && g.values(i, j) > 1e-4) {
        best = exact.violation(i, j);
        bi = i;
        bj = j;
      }
    }
  }
  REQUIRE(low.defined(static_cast<std::size_t>(bi), static_cast<std::size_t>(bj)));
  CHECK(high.significance(bi, bj) / low.significance(bi, bj) == doctest::Approx(10.0).epsilon(0.01));
}
