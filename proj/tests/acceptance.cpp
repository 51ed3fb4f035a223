// Acceptance suite: one PASS/FAIL line per criterion, nonzero exit on any failure.

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <numeric>
#include <random>
#include <sstream>
#include <string>

#include <fmt/format.h>

#include "cli.hpp"
#include "oracles.hpp"
#include "qwalk/certification.hpp"
#include "qwalk/hamiltonian.hpp"
#include "qwalk/io.hpp"
#include "qwalk/lattice.hpp"
#include "qwalk/propagator.hpp"
#include "qwalk/sampling.hpp"
#include "qwalk/twophoton.hpp"

using namespace qwalk;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

double max_abs_diff(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) { return (a - b).cwiseAbs().maxCoeff(); }

struct DefaultWalk {
  TriangularLattice lattice = build_hexagonal_lattice(3, 15.0);
  UnitaryPropagator u = evolve(assemble_uniform(lattice, 0.0, 0.2), 11.0);
  SitePair input = resolve_ports(lattice, {-1, 1, 1.0});
};

Outcome lattice_combinatorics() {
  const std::size_t n1 = build_hexagonal_lattice(1, 15.0).size();
  const std::size_t n2 = build_hexagonal_lattice(2, 15.0).size();
  const std::size_t n3 = build_hexagonal_lattice(3, 15.0).size();
  return {n1 == 7 && n2 == 19 && n3 == 37, fmt::format("N = {}, {}, {} for rings 1-3", n1, n2, n3)};
}

Outcome product_graph() {
  const auto lattice = build_hexagonal_lattice(3, 15.0);
  const auto graph = two_photon_graph(lattice);
  const std::size_t brute = oracle::brute_force_product_edges(lattice.sites());
  const long delta = static_cast<long>(graph.edge_count()) - 6600;
  return {graph.vertex_count() == 1369 && graph.edge_count() == brute,
          fmt::format("vertices = {}, edges = {} (brute force {}); quoted value 6600, delta {:+}",
                      graph.vertex_count(), graph.edge_count(), brute, delta)};
}

Outcome pair_enumeration() {
  const std::size_t off = unordered_pair_count(37, false);
  const std::size_t all = unordered_pair_count(37, true);
  CountMatrix counts{CountArray::Zero(37, 37), 1.0, 0};
  const std::size_t count_rows = io::count_matrix_table(counts).rows.size();
  const std::size_t witness_rows = io::violation_table(violation_significance(counts)).rows.size();
  return {off == 666 && all == 703 && count_rows == 703 && witness_rows == 666,
          fmt::format("off-diagonal {}, with diagonal {}, count rows {}, witness rows {}", off, all, count_rows,
                      witness_rows)};
}

Outcome unitarity_normalization() {
  std::mt19937_64 rng(4);
  std::uniform_int_distribution<std::size_t> size(2, 37);
  std::uniform_real_distribution<double> length(0.0, 12.0);
  double worst_u = 0.0, worst_p = 0.0, worst_g = 0.0;
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = trial == 19 ? 37 : size(rng);
    const auto h = Hamiltonian::from_matrix(oracle::random_graph_hamiltonian(n, rng));
    const auto u = evolve(h, length(rng));
    worst_u = std::max(worst_u, unitarity_deviation(u.matrix()));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    double sum = 0.0;
    for (double p : single_photon_probabilities(u, pick(rng))) sum += p;
    worst_p = std::max(worst_p, std::abs(sum - 1.0));
    worst_g = std::max(worst_g, std::abs(unordered_sum(quantum_correlation(u, {pick(rng), pick(rng)})) - 1.0));
  }
  return {worst_u < 1e-10 && worst_p < 1e-10 && worst_g < 1e-10,
          fmt::format("max |U^dag U - I| = {:.2e}, max |sum p - 1| = {:.2e}, max |sum G - 1| = {:.2e}", worst_u,
                      worst_p, worst_g)};
}

Outcome two_site_oracle() {
  Eigen::MatrixXd h(2, 2);
  h << 0.0, 1.0, 1.0, 0.0;
  const auto ham = Hamiltonian::from_matrix(h);
  double worst = 0.0;
  for (double cz : {0.1, 0.5, M_PI / 4.0, 1.3, 2.9}) {
    const auto p = single_photon_probabilities(evolve(ham, cz), 0);
    worst = std::max({worst, std::abs(p[0] - std::pow(std::cos(cz), 2)), std::abs(p[1] - std::pow(std::sin(cz), 2))});
  }
  const auto g = quantum_correlation(evolve(ham, M_PI / 4.0), {0, 1});
  const double hom = std::max({std::abs(g(0, 0) - 0.5), std::abs(g(1, 1) - 0.5), std::abs(g(0, 1))});
  return {worst < 1e-12 && hom < 1e-12,
          fmt::format("cos^2/sin^2 deviation {:.2e}; balanced-coupler bunching deviation {:.2e}", worst, hom)};
}

Outcome brute_force_equivalence() {
  std::mt19937_64 rng(6);
  double worst = 0.0;
  int instances = 0;
  for (std::size_t n = 2; n <= 10; ++n) {
    for (int rep = 0; rep < 5; ++rep) {
      const auto m = oracle::random_graph_hamiltonian(n, rng);
      const auto u = evolve(Hamiltonian::from_matrix(m), 0.5 + rep);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      const SitePair in{pick(rng), pick(rng)};
      worst = std::max(worst, max_abs_diff(quantum_correlation(u, in).values,
                                           oracle::product_basis_correlation(u.matrix(), in.first, in.second)));
      ++instances;
    }
  }
  return {worst < 1e-10, fmt::format("{} random graphs with N <= 10, max deviation {:.2e}", instances, worst)};
}

Outcome classical_bound() {
  std::mt19937_64 rng(7);
  std::uniform_int_distribution<std::size_t> size(2, 37);
  std::uniform_real_distribution<double> length(0.0, 12.0);
  double worst = -std::numeric_limits<double>::infinity();
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = size(rng);
    const auto u = evolve(Hamiltonian::from_matrix(oracle::random_graph_hamiltonian(n, rng)), length(rng));
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    worst = std::max(worst, max_violation(violation_map(classical_correlation(u, {pick(rng), pick(rng)}))));
  }
  const DefaultWalk w;
  const auto quantum = violation_map(quantum_correlation(w.u, w.input));
  const std::size_t positive = positive_pairs(quantum).size();
  return {worst <= 1e-12 && positive >= 1,
          fmt::format("classical max V = {:.3e} over 50 instances; default quantum map (C z = 2.2) has {} pairs "
                      "with V > 0, max V = {:.4f}",
                      worst, positive, max_violation(quantum))};
}

Outcome hom_endpoints() {
  const DefaultWalk w;
  const double sigma = coherence_time_from_filter(780.0, 3.0);
  const std::vector<double> delays = {-40 * sigma, -10 * sigma, 0.0, 10 * sigma, 40 * sigma};
  const auto curve = hom_scan(w.u, w.input, delays, sigma);
  const double at_zero = max_abs_diff(curve.matrices[2].values, quantum_correlation(w.u, w.input).values);
  const auto distinguishable = partial_correlation(w.u, w.input, 0.0).values;
  const double at_far = std::max(max_abs_diff(curve.matrices[1].values, distinguishable),
                                 max_abs_diff(curve.matrices[3].values, distinguishable));
  const double vis = visibility(curve, {0, 0});
  return {at_zero < 1e-6 && at_far < 1e-6 && vis == 1.0,
          fmt::format("tau = 0 deviation {:.2e}, tau = 10 sigma deviation {:.2e}, ideal visibility at site 0 = {} "
                      "(sigma = {:.3f} fs; measured 92% +- 3.5% is a benchmark, not reproduced)",
                      at_zero, at_far, vis, sigma)};
}

Outcome statistical_pipeline() {
  const DefaultWalk w;
  const auto quantum = quantum_correlation(w.u, w.input);
  const double duration = 2000.0;

  // round trip at 1e6 expected pairs with unequal efficiencies
  std::mt19937_64 rng(9);
  std::uniform_real_distribution<double> eff(0.5, 1.0);
  DetectionModel model = DetectionModel::uniform(37, 1.0, 1e6 / duration, true);
  for (auto& e : model.efficiency) e = eff(rng);
  const auto counts = sample_counts(quantum, model, duration, 20210301);
  const double similarity = matrix_similarity(estimate_correlation(counts, model), quantum);

  // false positives on classical-light counts
  const auto classical = normalized(classical_correlation(w.u, w.input));
  const auto flat = DetectionModel::uniform(37, 1.0, 1e6 / duration, true);
  std::size_t defined = 0, false_positive = 0;
  for (std::uint64_t seed = 0; seed < 100; ++seed) {
    const auto map = violation_significance(sample_counts(classical, flat, duration, seed));
    for (std::size_t i = 0; i < 37; ++i) {
      for (std::size_t j = i + 1; j < 37; ++j) {
        if (!map.defined(i, j)) continue;
        ++defined;
        if (map.significance(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) > 3.0) ++false_positive;
      }
    }
  }
  const double fp_rate = static_cast<double>(false_positive) / static_cast<double>(defined);

  // significance versus integration time on the strongest exact witness
  const auto exact = violation_map(quantum);
  Eigen::Index bi = 0, bj = 1;
  for (Eigen::Index i = 0; i < 37; ++i) {
    for (Eigen::Index j = i + 1; j < 37; ++j) {
      if (quantum.values(i, j) > 0.0 && exact.violation(i, j) > exact.violation(bi, bj)) {
        bi = i;
        bj = j;
      }
    }
  }
  const auto rate = DetectionModel::uniform(37, 1.0, 50.0, true);
  std::vector<double> log_t, log_s;
  for (double t : {500.0, 2000.0, 8000.0, 32000.0, 128000.0}) {
    double mean = 0.0;
    const int reps = 40;
    for (int rep = 0; rep < reps; ++rep) {
      const auto map = violation_significance(sample_counts(quantum, rate, t, 1000 + static_cast<std::uint64_t>(rep)));
      mean += map.significance(bi, bj) / reps;
    }
    log_t.push_back(std::log(t));
    log_s.push_back(std::log(mean));
  }
  const double mt = std::accumulate(log_t.begin(), log_t.end(), 0.0) / static_cast<double>(log_t.size());
  const double ms = std::accumulate(log_s.begin(), log_s.end(), 0.0) / static_cast<double>(log_s.size());
  double sxy = 0.0, sxx = 0.0;
  for (std::size_t k = 0; k < log_t.size(); ++k) {
    sxy += (log_t[k] - mt) * (log_s[k] - ms);
    sxx += (log_t[k] - mt) * (log_t[k] - mt);
  }
  const double slope = sxy / sxx;

  // run at the default statistics, for the record
  const auto default_scale = violation_significance(sample_counts(quantum, rate, duration, 20210301));
  const double sim_1e5 = matrix_similarity(
      estimate_correlation(sample_counts(quantum, rate, duration, 20210301), rate), quantum);

  return {similarity > 0.99 && fp_rate < 0.01 && std::abs(slope - 0.5) <= 0.05,
          fmt::format("similarity at 1e6 pairs = {:.5f}; classical false-positive rate = {:.4f} ({}/{}); "
                      "significance slope = {:.4f}; at 1e5 pairs: similarity {:.4f}, max significance {:.1f} "
                      "(measured 91.8% and 57 sigma are benchmarks only)",
                      similarity, fp_rate, false_positive, defined, slope, sim_1e5, max_significance(default_scale))};
}

std::string slurp(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome reproducibility() {
  const fs::path root = QWALK_TEST_TMP;
  fs::remove_all(root);
  std::ostringstream sink;
  int failures = 0;
  for (const char* run : {"a", "b"}) {
    for (const char* cmd : {"correlate", "hom", "sample", "certify", "evolve"}) {
      failures += cli::run({"qwalk", cmd, "--out", (root / run).string()}, sink, sink) != 0;
    }
  }
  std::size_t compared = 0, identical = 0;
  for (const auto& entry : fs::directory_iterator(root / "a")) {
    if (entry.path().extension() != ".csv") continue;
    ++compared;
    const fs::path twin = root / "b" / entry.path().filename();
    identical += fs::exists(twin) && slurp(entry.path()) == slurp(twin);
  }
  return {failures == 0 && compared > 0 && identical == compared,
          fmt::format("{} CSV files compared, {} byte-identical, {} failed runs", compared, identical, failures)};
}

}  // namespace

int main() {
  struct Criterion {
    int id;
    const char* name;
    double limit_s;
    std::function<Outcome()> check;
  };
  const std::vector<Criterion> criteria = {
      {1, "lattice combinatorics", 1.0, lattice_combinatorics},
      {2, "two-photon graph", 1.0, product_graph},
      {3, "pair enumeration", 1.0, pair_enumeration},
      {4, "unitarity and normalization", 10.0, unitarity_normalization},
      {5, "analytic two-site oracle", 1.0, two_site_oracle},
      {6, "brute-force equivalence", 30.0, brute_force_equivalence},
      {7, "classical bound and quantum witness", 30.0, classical_bound},
      {8, "HOM endpoints", 5.0, hom_endpoints},
      {9, "end-to-end statistical pipeline", 300.0, statistical_pipeline},
      {10, "reproducibility", 60.0, reproducibility},
  };

  int failed = 0;
  for (const auto& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome outcome;
    try {
      outcome = c.check();
    } catch (const std::exception& e) {
      outcome = {false, std::string("exception: ") + e.what()};
    }
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = elapsed < c.limit_s;
    const bool pass = outcome.pass && in_time;
    failed += pass ? 0 : 1;
    std::cout << fmt::format("{} {:2d} {} [{:.3f} s / {} s{}]: {}\n", pass ? "PASS" : "FAIL", c.id, c.name, elapsed,
                             c.limit_s, in_time ? "" : ", too slow", outcome.detail);
  }
  std::cout << fmt::format("{} of {} criteria passed\n", criteria.size() - static_cast<std::size_t>(failed),
                           criteria.size());
  return failed == 0 ? 0 : 1;
}
