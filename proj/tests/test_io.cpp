#include <cmath>
#include <sstream>

#include "doctest.h"
#include "qwalk/config.hpp"
#include "qwalk/error.hpp"
#include "qwalk/io.hpp"

using namespace qwalk;
using nlohmann::json;

TEST_CASE("FNV-1a reference values") {
  CHECK(io::fnv1a64("") == 0xcbf29ce484222325ULL);
  CHECK(io::fnv1a64("a") == 0xaf63dc4c8601ec8cULL);
  CHECK(io::hash_hex("foobar") == "85944171f73967e8");
}

TEST_CASE("doubles round-trip through text") {
  for (double v : {0.1, 1.0 / 3.0, 2.5e-17, -7.0, 1e300, 0.0}) {
    CHECK(std::stod(io::format_double(v)) == v);
  }
  CHECK(io::format_double(0.5) == "0.5");
  CHECK(io::format_double(std::nan("")) == "nan");
}

TEST_CASE("tables render with metadata") {
  io::Table t{{"a", "b"}, {{1, 0.25}, {2, "x"}}};
  const std::string csv = t.to_csv({{"qwalk", "test"}, {"config_hash", "abc"}});
  CHECK(csv == "# qwalk=test\n# config_hash=abc\na,b\n1,0.25\n2,x\n");
  const auto doc = json::parse(t.to_json({{"qwalk", "test"}}));
  CHECK(doc["meta"]["qwalk"] == "test");
  CHECK(doc["columns"] == json::array({"a", "b"}));
  CHECK(doc["rows"][0][1] == 0.25);

  std::istringstream in(csv);
  const auto parsed = io::parse_csv(in);
  CHECK(parsed.meta.at("config_hash") == "abc");
  CHECK(parsed.columns == std::vector<std::string>{"a", "b"});
  REQUIRE(parsed.rows.size() == 2);
  CHECK(parsed.rows[1][1] == "x");
  CHECK_THROWS_AS(parsed.column("c"), Error);

  std::istringstream ragged("a,b\n1,2,3\n");
  CHECK_THROWS_AS(io::parse_csv(ragged), Error);
  std::istringstream empty("# only=meta\n");
  CHECK_THROWS_AS(io::parse_csv(empty), Error);
}

TEST_CASE("lattice JSON") {
  const auto doc = io::lattice_to_json(build_hexagonal_lattice(3, 15.0));
  CHECK(doc["site_count"] == 37);
  CHECK(doc["sites"].size() == 37);
  CHECK(doc["edges"].size() == 90);
  CHECK(doc["port_map"]["-1"] == 4);
  CHECK(doc["metadata"]["input_port_pitch_um"] == 130.0);
  CHECK(doc["metadata"]["bend_radius_mm"] == 30.0);
  CHECK(io::lattice_to_json(build_hexagonal_lattice(0, 15.0))["sites"].size() == 1);
}

TEST_CASE("count matrices round-trip") {
  CountMatrix counts{CountArray::Zero(3, 3), 2000.0, 42};
  counts.counts << 5, 1, 0,
                   1, 9, 3,
                   0, 3, 0;
  const auto table = io::count_matrix_table(counts);
  CHECK(table.rows.size() == 6);
  std::istringstream in(table.to_csv(io::count_matrix_meta(counts, "deadbeef")));
  const auto back = io::parse_count_matrix(in);
  CHECK(back.counts == counts.counts);
  CHECK(back.duration_s == 2000.0);
  CHECK(back.seed == 42);

  std::istringstream negative("i,j,count\n0,0,-3\n");
  CHECK_THROWS_AS(io::parse_count_matrix(negative), Error);
  std::istringstream garbage("i,j,count\n0,x,3\n");
  CHECK_THROWS_AS(io::parse_count_matrix(garbage), Error);
}

TEST_CASE("scans and coupling samples parse") {
  const std::vector<ScanPoint> scan = {{-50.0, 10.0}, {0.0, 20.5}, {50.0, 11.0}};
  std::istringstream in(io::scan_table(scan).to_csv({}));
  const auto back = io::parse_scan(in);
  REQUIRE(back.size() == 3);
  CHECK(back[1].counts == 20.5);

  std::istringstream samples("# synthetic\nseparation_um,coupling_per_mm\n10,0.6\n12, 0.4\n");
  const auto parsed = io::parse_coupling_samples(samples);
  REQUIRE(parsed.size() == 2);
  CHECK(parsed[1].coupling_per_mm == 0.4);
}

TEST_CASE("violation table writes undefined entries as nan") {
  CountMatrix counts{CountArray::Zero(2, 2), 1.0, 0};
  counts.counts << 4, 0, 0, 4;
  const auto table = io::violation_table(violation_significance(counts));
  REQUIRE(table.rows.size() == 1);
  CHECK(table.rows[0][3].is_null());
  CHECK(table.to_csv({}).find("nan") != std::string::npos);
}

TEST_CASE("config defaults and hash") {
  const ExperimentConfig c;
  CHECK(c.rings == 3);
  CHECK(c.z_mm == 11.0);
  CHECK(c.input_ports == std::vector<int>{-1, 1});
  CHECK(c.effective_coherence_time_fs() == doctest::Approx(179.271).epsilon(1e-5));
  CHECK(c.hash().size() == 16);
  CHECK(config_from_json(json::object()).hash() == c.hash());

  ExperimentConfig moved = c;
  moved.output_dir = "elsewhere";
  CHECK(moved.hash() == c.hash());
  ExperimentConfig reseeded = c;
  reseeded.seed = 1;
  CHECK(reseeded.hash() != c.hash());
  CHECK(config_from_json(c.to_json()).hash() == c.hash());
}

TEST_CASE("config parsing is strict") {
  const auto parse_kind = [](const char* text) {
    try {
      config_from_json(json::parse(text));
    } catch (const Error& e) {
      return e.kind();
    }
    return ErrorKind::Numerical;
  };
  CHECK(parse_kind(R"({"lattice": {"rings": 3, "colour": 1}})") == ErrorKind::Parse);
  CHECK(parse_kind(R"({"unknown": 1})") == ErrorKind::Parse);
  CHECK(parse_kind(R"({"z_mm": -1})") == ErrorKind::Parse);
  CHECK(parse_kind(R"({"z_mm": "long"})") == ErrorKind::Parse);
  CHECK(parse_kind(R"({"indistinguishability": 2})") == ErrorKind::Parse);
  CHECK(parse_kind(R"({"detection": {"efficiency": 0}})") == ErrorKind::Parse);
  CHECK(parse_kind(R"({"lattice": {}, "graph": {"site_count": 2}})") == ErrorKind::Parse);
  CHECK(parse_kind(R"({"graph": {"site_count": 2, "edges": [[0, 0]]}})") == ErrorKind::Parse);
  CHECK(parse_kind(R"({"sample_source": "laser"})") == ErrorKind::Parse);

  const auto c = config_from_json(json::parse(
      R"({"lattice": {"rings": 1}, "hom": {"delays_fs": {"start": -100, "stop": 100, "step": 50}},
          "hamiltonian": {"coupling_model": {"amplitude_per_mm": 4.5, "decay_length_um": 5.0}},
          "detection": {"efficiency": [0.5, 1, 1, 1, 1, 1, 1]}})"));
  CHECK(c.rings == 1);
  CHECK(c.delays_fs == std::vector<double>{-100, -50, 0, 50, 100});
  CHECK(c.effective_coupling_per_mm() == doctest::Approx(4.5 * std::exp(-3.0)));
  const auto system = build_system(c);
  CHECK(system.size() == 7);
  CHECK(system.detection(c).efficiency[0] == 0.5);
}

TEST_CASE("graph configs build a raw system") {
  const auto c = load_config(QWALK_SOURCE_DIR "/tests/data/two_site.json");
  const auto system = build_system(c);
  CHECK_FALSE(system.lattice.has_value());
  CHECK(system.size() == 2);
  CHECK(system.hamiltonian.matrix()(0, 1) == 1.0);
  const auto pair = system.input_pair(c);
  CHECK(pair.first == 0);
  CHECK(pair.second == 1);
  CHECK_THROWS_AS(system.site_for_port(2), Error);
  CHECK_THROWS_AS(load_config(QWALK_SOURCE_DIR "/tests/data/malformed.json"), Error);
}
