#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qwalk/certification.hpp"
#include "qwalk/coupling.hpp"
#include "qwalk/error.hpp"
#include "qwalk/hamiltonian.hpp"
#include "qwalk/lattice.hpp"
#include "qwalk/propagator.hpp"
#include "qwalk/sampling.hpp"
#include "qwalk/twophoton.hpp"

namespace py = pybind11;
using namespace qwalk;

namespace {

SitePair to_pair(std::pair<std::size_t, std::size_t> p) { return {p.first, p.second}; }

}  // namespace

PYBIND11_MODULE(_qwalk, m) {
  m.doc() = "Two-photon quantum walks on triangular photonic lattices";

  static py::exception<Error> error(m, "QwalkError", PyExc_RuntimeError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const Error& e) {
      const std::string message = std::string(to_string(e.kind())) + ": " + e.what();
      py::set_error(error, message.c_str());
    }
  });

  // lattice
  py::class_<SiteCoord>(m, "SiteCoord")
      .def_readonly("q", &SiteCoord::q)
      .def_readonly("r", &SiteCoord::r)
      .def_readonly("layer", &SiteCoord::layer)
      .def("__repr__", [](const SiteCoord& s) {
        return "SiteCoord(q=" + std::to_string(s.q) + ", r=" + std::to_string(s.r) +
               ", layer=" + std::to_string(s.layer) + ")";
      });

  py::class_<TriangularLattice>(m, "TriangularLattice")
      .def(py::init<int, double>(), py::arg("rings"), py::arg("spacing_um") = 15.0)
      .def_property_readonly("rings", &TriangularLattice::rings)
      .def_property_readonly("spacing_um", &TriangularLattice::spacing_um)
      .def("__len__", &TriangularLattice::size)
      .def_property_readonly("sites", &TriangularLattice::sites)
      .def("neighbors", &TriangularLattice::neighbors)
      .def("degree", &TriangularLattice::degree)
      .def("adjacent", &TriangularLattice::adjacent)
      .def("edges", &TriangularLattice::edges)
      .def_property_readonly("port_map", &TriangularLattice::port_map)
      .def("port_site", [](const TriangularLattice& l, int port) { return port_site(l, port); })
      .def("mirror_permutation", &TriangularLattice::mirror_permutation)
      .def("position_um", &TriangularLattice::position_um);

  m.def("build_hexagonal_lattice", &build_hexagonal_lattice, py::arg("rings"), py::arg("spacing_um") = 15.0);
  m.def("edge_count", &edge_count);

  // hamiltonian
  py::class_<Hamiltonian>(m, "Hamiltonian")
      .def_static("from_matrix", &Hamiltonian::from_matrix)
      .def_property_readonly("matrix", &Hamiltonian::matrix)
      .def_property_readonly("site_count", &Hamiltonian::site_count);
  m.def("assemble_uniform", &assemble_uniform, py::arg("lattice"), py::arg("beta_per_mm"),
        py::arg("coupling_per_mm"));
  m.def(
      "assemble_graph",
      [](std::size_t n, const std::vector<Edge>& edges, double beta, double coupling) {
        return assemble_graph(n, edges, beta, coupling);
      },
      py::arg("site_count"), py::arg("edges"), py::arg("beta_per_mm"), py::arg("coupling_per_mm"));

  // coupling
  py::class_<CouplingModel>(m, "CouplingModel")
      .def(py::init<double, double>(), py::arg("amplitude_per_mm"), py::arg("decay_length_um"))
      .def_readwrite("amplitude_per_mm", &CouplingModel::amplitude_per_mm)
      .def_readwrite("decay_length_um", &CouplingModel::decay_length_um)
      .def("__call__", [](const CouplingModel& model, double d) { return coupling_at(model, d); });
  m.def(
      "fit_exponential",
      [](const std::vector<std::pair<double, double>>& samples) {
        std::vector<CouplingSample> s;
        for (const auto& [d, c] : samples) s.push_back({d, c});
        return fit_exponential(s);
      },
      py::arg("samples"), "Fit C(d) = A exp(-d / d0) to (separation_um, coupling_per_mm) pairs.");

  // propagator
  py::class_<UnitaryPropagator>(m, "UnitaryPropagator")
      .def_property_readonly("matrix", &UnitaryPropagator::matrix)
      .def_property_readonly("z_mm", &UnitaryPropagator::z_mm)
      .def("__len__", &UnitaryPropagator::size);
  m.def("evolve", &evolve, py::arg("hamiltonian"), py::arg("z_mm"));
  m.def("unitarity_deviation", [](const Eigen::MatrixXcd& u) { return unitarity_deviation(u); });
  m.def("single_photon_probabilities", &single_photon_probabilities, py::arg("propagator"),
        py::arg("input_site"));
  m.def("distribution_similarity",
        [](const std::vector<double>& p, const std::vector<double>& q) { return distribution_similarity(p, q); });

  // two-photon
  py::enum_<Convention>(m, "Convention")
      .value("Quantum", Convention::Quantum)
      .value("ClassicalProduct", Convention::ClassicalProduct)
      .value("PhysicalPartial", Convention::PhysicalPartial)
      .value("Estimated", Convention::Estimated);

  py::class_<CorrelationMatrix>(m, "CorrelationMatrix")
      .def(py::init([](Eigen::MatrixXd values, Convention convention) {
             return CorrelationMatrix{std::move(values), convention};
           }),
           py::arg("values"), py::arg("convention") = Convention::Quantum)
      .def_readonly("values", &CorrelationMatrix::values)
      .def_readonly("convention", &CorrelationMatrix::convention)
      .def("__len__", &CorrelationMatrix::size);

  m.def(
      "quantum_correlation",
      [](const UnitaryPropagator& u, std::pair<std::size_t, std::size_t> in) {
        return quantum_correlation(u, to_pair(in));
      },
      py::arg("propagator"), py::arg("input_sites"));
  m.def(
      "classical_correlation",
      [](const UnitaryPropagator& u, std::pair<std::size_t, std::size_t> in) {
        return classical_correlation(u, to_pair(in));
      },
      py::arg("propagator"), py::arg("input_sites"));
  m.def(
      "partial_correlation",
      [](const UnitaryPropagator& u, std::pair<std::size_t, std::size_t> in, double overlap) {
        return partial_correlation(u, to_pair(in), overlap);
      },
      py::arg("propagator"), py::arg("input_sites"), py::arg("indistinguishability"));
  m.def("unordered_sum", &unordered_sum);
  m.def("normalized", &normalized);
  m.def("unordered_pair_count", &unordered_pair_count, py::arg("n"), py::arg("include_diagonal"));
  m.def("matrix_similarity", &matrix_similarity);
  m.def("indistinguishability_at", &indistinguishability_at, py::arg("delay_fs"), py::arg("coherence_time_fs"));
  m.def("coherence_time_from_filter", &coherence_time_from_filter, py::arg("center_wavelength_nm"),
        py::arg("fwhm_nm"));

  py::class_<HomCurve>(m, "HomCurve")
      .def_readonly("delays_fs", &HomCurve::delays_fs)
      .def_readonly("matrices", &HomCurve::matrices)
      .def_readonly("coherence_time_fs", &HomCurve::coherence_time_fs)
      .def("entry", &HomCurve::entry);
  m.def(
      "hom_scan",
      [](const UnitaryPropagator& u, std::pair<std::size_t, std::size_t> in, const std::vector<double>& delays,
         double sigma) { return hom_scan(u, to_pair(in), delays, sigma); },
      py::arg("propagator"), py::arg("input_sites"), py::arg("delays_fs"), py::arg("coherence_time_fs"));
  m.def(
      "visibility",
      [](const HomCurve& curve, std::pair<std::size_t, std::size_t> entry) {
        return visibility(curve, to_pair(entry));
      },
      py::arg("curve"), py::arg("entry"));

  py::class_<TwoPhotonGraph>(m, "TwoPhotonGraph")
      .def_readonly("site_count", &TwoPhotonGraph::site_count)
      .def_readonly("edges", &TwoPhotonGraph::edges)
      .def_property_readonly("vertex_count", &TwoPhotonGraph::vertex_count)
      .def_property_readonly("edge_count", &TwoPhotonGraph::edge_count)
      .def("is_bunching", &TwoPhotonGraph::is_bunching);
  m.def("two_photon_graph", &two_photon_graph);

  // sampling
  py::class_<DetectionModel>(m, "DetectionModel")
      .def(py::init([](std::vector<double> efficiency, double rate, bool splitter) {
             return DetectionModel{std::move(efficiency), rate, splitter};
           }),
           py::arg("efficiency"), py::arg("pair_rate_hz") = 50.0, py::arg("diagonal_splitter") = true)
      .def_static("uniform", &DetectionModel::uniform, py::arg("channels"), py::arg("efficiency"),
                  py::arg("pair_rate_hz") = 50.0, py::arg("diagonal_splitter") = true)
      .def_readwrite("efficiency", &DetectionModel::efficiency)
      .def_readwrite("pair_rate_hz", &DetectionModel::pair_rate_hz)
      .def_readwrite("diagonal_splitter", &DetectionModel::diagonal_splitter);

  py::class_<CountMatrix>(m, "CountMatrix")
      .def(py::init([](CountArray counts, double duration, std::uint64_t seed) {
             return CountMatrix{std::move(counts), duration, seed};
           }),
           py::arg("counts"), py::arg("duration_s") = 0.0, py::arg("seed") = 0)
      .def_readonly("counts", &CountMatrix::counts)
      .def_readonly("duration_s", &CountMatrix::duration_s)
      .def_readonly("seed", &CountMatrix::seed);

  m.def("entry_seed", &entry_seed, py::arg("seed"), py::arg("index"));
  m.def("expected_counts", &expected_counts, py::arg("gamma"), py::arg("model"), py::arg("duration_s"));
  m.def("sample_counts", &sample_counts, py::arg("gamma"), py::arg("model"), py::arg("duration_s"),
        py::arg("seed"));
  m.def("estimate_correlation", &estimate_correlation, py::arg("counts"), py::arg("model"));

  py::class_<ZeroDelayFit>(m, "ZeroDelayFit")
      .def_readonly("zero_delay_fs", &ZeroDelayFit::zero_delay_fs)
      .def_readonly("visibility", &ZeroDelayFit::visibility)
      .def_readonly("baseline", &ZeroDelayFit::baseline)
      .def_readonly("width_fs", &ZeroDelayFit::width_fs)
      .def_readonly("zero_delay_error_fs", &ZeroDelayFit::zero_delay_error_fs)
      .def_readonly("visibility_error", &ZeroDelayFit::visibility_error)
      .def_readonly("baseline_error", &ZeroDelayFit::baseline_error)
      .def_readonly("width_error_fs", &ZeroDelayFit::width_error_fs)
      .def_readonly("iterations", &ZeroDelayFit::iterations);
  m.def(
      "fit_zero_delay",
      [](const std::vector<double>& delays, const std::vector<double>& counts) {
        if (delays.size() != counts.size()) throw Error(ErrorKind::LengthMismatch, "one count per delay expected");
        std::vector<ScanPoint> scan;
        for (std::size_t k = 0; k < delays.size(); ++k) scan.push_back({delays[k], counts[k]});
        return fit_zero_delay(scan);
      },
      py::arg("delays_fs"), py::arg("counts"));

  // certification
  py::enum_<ViolationSource>(m, "ViolationSource")
      .value("ExactCorrelations", ViolationSource::ExactCorrelations)
      .value("Counts", ViolationSource::Counts);
  py::class_<ViolationMap>(m, "ViolationMap")
      .def_readonly("violation", &ViolationMap::violation)
      .def_readonly("sigma", &ViolationMap::sigma)
      .def_readonly("significance", &ViolationMap::significance)
      .def_readonly("source", &ViolationMap::source)
      .def("defined", &ViolationMap::defined);
  m.def("violation_map", &violation_map);
  m.def("violation_significance", &violation_significance);
  m.def(
      "positive_pairs",
      [](const ViolationMap& map, double min_sig) {
        std::vector<std::pair<std::size_t, std::size_t>> out;
        for (const auto& p : positive_pairs(map, min_sig)) out.emplace_back(p.first, p.second);
        return out;
      },
      py::arg("map"), py::arg("min_significance") = 0.0);
  m.def("max_violation", &max_violation);
  m.def("max_significance", &max_significance);
}
