#include "conegeo/harness.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "doctest.h"
#include "support.hpp"

using namespace conegeo;
using conegeo::io::json;
namespace fs = std::filesystem;

namespace {

struct Run {
  int code;
  std::string out, err;
};

Run run(const json& cfg, const fs::path& base = fs::current_path()) {
  std::ostringstream out, err;
  const int code = harness::run(cfg, base, out, err);
  return {code, out.str(), err.str()};
}

json config(const char* name) {
  return harness::load_json_file(fs::path(CONEGEO_CONFIG_DIR) / name);
}

fs::path scratch_dir(const char* tag) {
  const fs::path d = fs::temp_directory_path() / ("conegeo_harness_" + std::string(tag));
  fs::remove_all(d);
  fs::create_directories(d);
  return d;
}

std::string slurp(const fs::path& p) {
  std::ifstream f(p, std::ios::binary);
  std::ostringstream s;
  s << f.rdbuf();
  return s.str();
}

const json kWolff = json::parse(R"({
  "task": "check-wolff",
  "cone": {"kind": "psd", "n": 2},
  "map": {"kind": "congruence", "matrix": [[1, 1], [0, 1]]},
  "params": {"hF": {"z": [[0, 0], [0, 1]]}, "hR": {"y": [[1, 0], [0, 0]]},
             "hH": {"y": [[1, 0], [0, 0]], "z": [[0, 0], [0, 1]]},
             "random_samples": 50, "r_hat": 1},
  "seed": 7
})");

}  // namespace

TEST_SUITE("harness") {
  TEST_CASE("perron config") {
    const Run r = run(config("perron.json"));
    CHECK(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["r_hat"].get<double>() == doctest::Approx(2.0).epsilon(1e-8));
    CHECK(j["interior_eigenvector_found"].get<bool>());
  }

  TEST_CASE("parabolic config finds the common functional") {
    const Run r = run(config("parabolic.json"));
    REQUIRE(r.code == 0);
    const json j = json::parse(r.out);
    CHECK(j["hypotheses_met"].get<bool>());
    CHECK(j["all_boundary"].get<bool>());
    CHECK(j["hull_in_boundary"].get<bool>());
    REQUIRE(j["common_functional"].is_array());
    const Vector phi = io::point_from_json(j["common_functional"], Cone::psd(2), "phi");
    CHECK((phi / phi.norm() - support::vec({0, 0, 1})).norm() <= 1e-3);
    for (const json& s : j["starts"]) CHECK(s["regime"]["regime"] == "unbounded");
  }

  TEST_CASE("scalar tasks") {
    const json cfg = json::parse(R"({
      "task": "metric", "cone": {"kind": "orthant", "n": 2},
      "params": {"kind": "hilbert", "x": [1, 2], "y": [2, 1]}})");
    const Run r = run(cfg);
    CHECK(r.code == 0);
    CHECK(r.out == "1.38629436111989\n");
    const json h = json::parse(R"({
      "task": "horo", "cone": {"kind": "psd", "n": 2},
      "params": {"kind": "hF", "z": [[0, 0], [0, 1]], "x": [[2, 1], [1, 3]]}})");
    const Run rh = run(h);
    CHECK(rh.code == 0);
    CHECK(std::stod(rh.out) == doctest::Approx(std::log(3.0)));
  }

  TEST_CASE("errors") {
    Run r = run(json::object());
    CHECK(r.code == 1);
    CHECK(r.err.rfind("conegeo: error: $.task", 0) == 0);

    json cfg = config("perron.json");
    cfg["params"]["tolerance"] = 1e-3;
    r = run(cfg);
    CHECK(r.code == 1);
    CHECK(r.err.find("$.params.tolerance") != std::string::npos);

    cfg = config("perron.json");
    cfg["map"]["matrix"] = json::parse("[[1, -1], [1, 1]]");
    r = run(cfg);
    CHECK(r.code == 1);
    CHECK(r.err.find("$.map") != std::string::npos);

    cfg = config("perron.json");
    cfg["task"] = "fly";
    CHECK(run(cfg).code == 1);

    r = run(harness::load_json_file(fs::path(CONEGEO_CONFIG_DIR).parent_path() / "tests" /
                                    "data" / "bad_dimension.json"));
    CHECK(r.code == 1);
    CHECK(r.err.find("params.x") != std::string::npos);
    CHECK_THROWS(harness::load_json_file("/nonexistent/config.json"));
  }

  TEST_CASE("unmet hypotheses") {
    const json cfg = json::parse(R"({
      "task": "dw-report", "cone": {"kind": "orthant", "n": 2},
      "map": {"kind": "linear", "matrix": [[1, 1], [1, 1]]},
      "params": {"starts": [[1, 1]], "k_max": 100}})");
    const Run r = run(cfg);
    CHECK(r.code == 2);
    CHECK(r.err.find("interior eigenvector") != std::string::npos);
    CHECK_FALSE(json::parse(r.out)["hypotheses_met"].get<bool>());
  }

  TEST_CASE("seeds and determinism") {
    ::unsetenv("CONEGEO_SEED");
    CHECK(harness::effective_seed(kWolff) == 7);
    CHECK(harness::effective_seed(json::object()) == 0);
    const Run a = run(kWolff), b = run(kWolff);
    CHECK(a.code == 0);
    CHECK(a.out == b.out);
    const json ja = json::parse(a.out);
    CHECK(ja["samples"] == 50);
    CHECK(ja["seed"] == 7);
    CHECK(ja["max_violation"].get<double>() <= 1e-9);

    ::setenv("CONEGEO_SEED", "11", 1);
    CHECK(harness::effective_seed(kWolff) == 11);
    const Run c = run(kWolff);
    ::unsetenv("CONEGEO_SEED");
    CHECK(json::parse(c.out)["seed"] == 11);
    CHECK(c.out != a.out);

    ::setenv("CONEGEO_SEED", "eleven", 1);
    CHECK(run(kWolff).code == 1);
    ::unsetenv("CONEGEO_SEED");
  }

  TEST_CASE("output files resolve against the base directory") {
    const fs::path dir = scratch_dir("outputs");
    const json cfg = json::parse(R"({
      "task": "orbit", "cone": {"kind": "orthant", "n": 2},
      "map": {"kind": "linear", "matrix": [[1, 0.5], [0, 1]]},
      "params": {"x0": [1, 1], "k_max": 5},
      "outputs": {"json": "orbit.json", "csv": "orbit.csv"}})");
    const Run r = run(cfg, dir);
    CHECK(r.code == 0);
    CHECK(r.out.empty());
    const std::string csv = slurp(dir / "orbit.csv");
    CHECK(csv.rfind("k,x0,x1,", 0) == 0);
    CHECK(std::count(csv.begin(), csv.end(), '\n') == 7);
    CHECK(json::parse(slurp(dir / "orbit.json")).is_object());

    // The same run again writes identical bytes.
    const std::string first = csv;
    CHECK(run(cfg, dir).code == 0);
    CHECK(slurp(dir / "orbit.csv") == first);
    fs::remove_all(dir);
  }

  TEST_CASE("starts file") {
    const fs::path dir = scratch_dir("starts");
    std::ofstream(dir / "starts.json") << "[[1, 2], [3, 1]]";
    json cfg = json::parse(R"({
      "task": "dw-report", "cone": {"kind": "orthant", "n": 2},
      "map": {"kind": "linear", "matrix": [[1, 0], [0, 0.5]]},
      "params": {"starts_file": "starts.json", "k_max": 200}})");
    const Run r = run(cfg, dir);
    CHECK(r.code == 0);
    CHECK(json::parse(r.out)["starts"].size() == 2);
    cfg["params"]["starts_file"] = "missing.json";
    CHECK(run(cfg, dir).code == 1);
    fs::remove_all(dir);
  }
}
