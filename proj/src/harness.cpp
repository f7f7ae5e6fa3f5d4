#include "conegeo/harness.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>

namespace conegeo::harness {

namespace fs = std::filesystem;
using io::json;
using io::SchemaError;

namespace {

void check_keys(const json& j, const std::set<std::string>& allowed,
                const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  for (auto it = j.begin(); it != j.end(); ++it) {
    if (!allowed.count(it.key())) throw SchemaError(path + "." + it.key(), "unknown field");
  }
}

const json& require(const json& j, const char* key, const std::string& path) {
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

double get_double(const json& p, const char* key, double def, const std::string& path) {
  return p.contains(key) ? io::to_double(p[key], path + "." + key) : def;
}

int get_int(const json& p, const char* key, int def, const std::string& path) {
  return p.contains(key) ? io::to_int(p[key], path + "." + key) : def;
}

std::string get_string(const json& p, const char* key, const std::string& def,
                       const std::string& path) {
  if (!p.contains(key)) return def;
  if (!p[key].is_string()) throw SchemaError(path + "." + key, "expected a string");
  return p[key].get<std::string>();
}

std::vector<Vector> points_from_json(const json& j, const Cone& cone,
                                     const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path, "expected a nonempty array of points");
  std::vector<Vector> pts;
  for (std::size_t i = 0; i < j.size(); ++i) {
    pts.push_back(io::point_from_json(j[i], cone, path + "[" + std::to_string(i) + "]"));
  }
  return pts;
}

SpectralOptions spectral_options(const json& p, const std::string& path) {
  SpectralOptions o;
  o.eps0 = get_double(p, "eps0", o.eps0, path);
  o.decay = get_double(p, "decay", o.decay, path);
  o.tol = get_double(p, "tol", o.tol, path);
  o.max_iter = get_int(p, "max_iter", o.max_iter, path);
  o.max_steps = get_int(p, "max_steps", o.max_steps, path);
  return o;
}

const std::set<std::string> kSpectralKeys = {"u", "eps0", "decay", "tol", "max_iter",
                                             "max_steps"};

// {"kind": "hF"|"hR"|"hH", "y": ..., "z": ..., "base": ...}
Horofunction horo_from_json(const json& j, const Cone& cone, const std::string& path) {
  check_keys(j, {"kind", "y", "z", "base"}, path);
  const std::string kind = get_string(j, "kind", "", path);
  auto pt = [&](const char* key) {
    return io::point_from_json(require(j, key, path), cone, path + "." + key);
  };
  try {
    if (kind == "hR") {
      std::optional<Vector> base;
      if (j.contains("base")) base = pt("base");
      return Horofunction::rfunk(cone, pt("y"), base);
    }
    if (kind == "hF") return Horofunction::funk_sym(cone, pt("z"));
    if (kind == "hH") return Horofunction::hilbert_sym(cone, pt("y"), pt("z"));
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(path + ".kind", "expected hF, hR or hH");
}

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

void write_file(const fs::path& path, const std::string& text) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write " + path.string());
  f << text;
}

struct Outputs {
  std::optional<fs::path> json_path;
  std::optional<fs::path> csv_path;
};

std::string format15(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}

struct TaskResult {
  json report;
  int exit_code = kOk;
  std::optional<OrbitTrace> trace;
  // Scalar tasks print a bare value when no JSON output is requested.
  std::optional<double> scalar;
};

Map load_map(const json& cfg, const Cone& cone) {
  return io::map_from_json(require(cfg, "map", "$"), cone);
}

TaskResult run_metric(const json& p, const Cone& cone) {
  const std::string path = "$.params";
  check_keys(p, {"kind", "x", "y"}, path);
  const std::string kind_s = get_string(p, "kind", "hilbert", path);
  MetricKind kind;
  try {
    kind = metric_kind_from_string(kind_s);
  } catch (const Error& e) {
    throw SchemaError(path + ".kind", e.what());
  }
  const Vector x = io::point_from_json(require(p, "x", path), cone, path + ".x");
  const Vector y = io::point_from_json(require(p, "y", path), cone, path + ".y");
  TaskResult r;
  const double v = distance(kind, cone, x, y);
  r.report = {{"task", "metric"}, {"kind", kind_s}, {"value", io::number(v)}};
  r.scalar = v;
  return r;
}

TaskResult run_spectral(const json& p, const Cone& cone, const Map& f) {
  const std::string path = "$.params";
  check_keys(p, kSpectralKeys, path);
  const Vector u =
      p.contains("u") ? io::point_from_json(p["u"], cone, path + ".u") : cone.unit();
  TaskResult r;
  r.report = io::to_json(spectral_radius(f, u, spectral_options(p, path)));
  return r;
}

TaskResult run_orbit(const json& p, const Cone& cone, const Map& f) {
  const std::string path = "$.params";
  check_keys(p, {"x0", "k_max", "mode", "stride", "gauge", "horo"}, path);
  const Vector x0 = io::point_from_json(require(p, "x0", path), cone, path + ".x0");
  const int k_max = get_int(p, "k_max", 1000, path);
  OrbitMode mode;
  try {
    mode = orbit_mode_from_string(get_string(p, "mode", "thompson", path));
  } catch (const Error& e) {
    throw SchemaError(path + ".mode", e.what());
  }
  OrbitOptions oo;
  oo.stride = get_int(p, "stride", 1, path);
  if (p.contains("horo")) {
    if (!p["horo"].is_array()) throw SchemaError(path + ".horo", "expected an array");
    for (std::size_t i = 0; i < p["horo"].size(); ++i) {
      oo.horo.push_back(
          horo_from_json(p["horo"][i], cone, path + ".horo[" + std::to_string(i) + "]"));
    }
  }
  std::optional<Map> wrapped;
  if (mode == OrbitMode::Hilbert && f.kind() != MapKind::Normalized) {
    const GaugeSpec g = p.contains("gauge")
                            ? io::gauge_from_json(p["gauge"], cone, path + ".gauge")
                            : GaugeSpec::order_unit();
    wrapped = Map::normalized(f, g);
  }
  TaskResult r;
  r.trace = iterate_orbit(wrapped ? *wrapped : f, x0, k_max, mode, oo);
  const OrbitTrace& tr = *r.trace;
  r.report = {{"task", "orbit"},
              {"mode", to_string(mode)},
              {"k_max", k_max},
              {"recorded", tr.steps.size()},
              {"truncated", tr.truncated},
              {"final_k", tr.steps.back().k},
              {"final_point", io::to_json(tr.steps.back().point)},
              {"final_log_gauge", io::number(tr.steps.back().log_gauge)}};
  if (tr.truncated) r.report["truncation_reason"] = tr.truncation_reason;
  return r;
}

TaskResult run_horo(const json& p, const Cone& cone) {
  const std::string path = "$.params";
  check_keys(p, {"kind", "y", "z", "base", "x"}, path);
  json hj = p;
  hj.erase("x");
  const Horofunction h = horo_from_json(hj, cone, path);
  const Vector x = io::point_from_json(require(p, "x", path), cone, path + ".x");
  TaskResult r;
  const double v = h(x);
  r.report = {{"task", "horo"}, {"kind", to_string(h.kind())}, {"value", io::number(v)}};
  r.scalar = v;
  return r;
}

TaskResult run_check_wolff(const json& p, const Cone& cone, const Map& f,
                           std::uint64_t seed) {
  const std::string path = "$.params";
  check_keys(p, {"hF", "hR", "hH", "samples", "random_samples", "r_hat"}, path);
  std::optional<Horofunction> hf, hr, hh;
  auto load = [&](const char* key, std::optional<Horofunction>& slot, const char* kind) {
    if (!p.contains(key)) return;
    json j = p[key];
    if (!j.is_object()) throw SchemaError(path + "." + key, "expected an object");
    j["kind"] = kind;
    slot = horo_from_json(j, cone, path + "." + key);
  };
  load("hF", hf, "hF");
  load("hR", hr, "hR");
  load("hH", hh, "hH");
  if (!hf && !hr && !hh) throw SchemaError(path, "at least one of hF, hR, hH is required");

  std::vector<Vector> samples;
  if (p.contains("samples")) samples = points_from_json(p["samples"], cone, path + ".samples");
  const int n_random = get_int(p, "random_samples", samples.empty() ? 100 : 0, path);
  std::mt19937_64 rng(seed);
  for (int i = 0; i < n_random; ++i) samples.push_back(sample_interior(cone, rng));

  TaskResult r;
  double r_hat;
  if (p.contains("r_hat")) {
    r_hat = io::to_double(p["r_hat"], path + ".r_hat");
  } else {
    r_hat = spectral_radius(f, cone.unit()).r_hat;
  }
  r.report = io::to_json(check_wolff(f, hf, hr, hh, samples, r_hat));
  r.report["r_hat"] = io::number(r_hat);
  r.report["seed"] = seed;
  return r;
}

TaskResult run_dw(const json& p, const Cone& cone, const Map& f, const fs::path& base) {
  const std::string path = "$.params";
  check_keys(p, {"gauge", "starts", "starts_file", "k_max", "stride", "tail_fraction",
                 "cluster_radius", "spectral"},
             path);
  const GaugeSpec g = p.contains("gauge")
                          ? io::gauge_from_json(p["gauge"], cone, path + ".gauge")
                          : GaugeSpec::order_unit();
  std::vector<Vector> starts;
  if (p.contains("starts")) {
    starts = points_from_json(p["starts"], cone, path + ".starts");
  } else if (p.contains("starts_file")) {
    const fs::path sf = resolve(base, get_string(p, "starts_file", "", path));
    if (!fs::exists(sf)) throw SchemaError(path + ".starts_file", "no such file " + sf.string());
    starts = points_from_json(load_json_file(sf), cone, sf.string());
  } else {
    starts = {cone.unit()};
  }
  DwOptions o;
  o.k_max = get_int(p, "k_max", o.k_max, path);
  o.stride = get_int(p, "stride", o.stride, path);
  o.tail_fraction = get_double(p, "tail_fraction", o.tail_fraction, path);
  o.cluster_radius = get_double(p, "cluster_radius", o.cluster_radius, path);
  if (p.contains("spectral")) {
    check_keys(p["spectral"], kSpectralKeys, path + ".spectral");
    o.spectral = spectral_options(p["spectral"], path + ".spectral");
  }
  TaskResult r;
  const DwReport rep = denjoy_wolff_report(f, g, starts, o);
  r.report = io::to_json(rep);
  if (!rep.hypotheses_met) r.exit_code = kHypothesesUnmet;
  return r;
}

TaskResult run_dichotomy(const json& p, const Cone& cone, const Map& f) {
  const std::string path = "$.params";
  check_keys(p, {"x0", "k_max", "stride", "rescale"}, path);
  const Vector x0 = p.contains("x0") ? io::point_from_json(p["x0"], cone, path + ".x0")
                                     : cone.unit();
  const int k_max = get_int(p, "k_max", 10000, path);
  const int stride = get_int(p, "stride", 1, path);
  bool rescale = true;
  if (p.contains("rescale")) {
    if (!p["rescale"].is_boolean()) throw SchemaError(path + ".rescale", "expected a boolean");
    rescale = p["rescale"].get<bool>();
  }
  double r_hat = 1.0;
  if (rescale) r_hat = spectral_radius(f, cone.unit()).r_hat;
  TaskResult r;
  r.report = io::to_json(polyhedral_dichotomy_check(f.scaled(1.0 / r_hat), x0, k_max, stride));
  r.report["r_hat"] = io::number(r_hat);
  return r;
}

}  // namespace

io::json load_json_file(const fs::path& path) {
  std::ifstream f(path);
  if (!f) throw Error("cannot open " + path.string());
  try {
    return json::parse(f);
  } catch (const json::parse_error& e) {
    throw SchemaError(path.string(), std::string("malformed JSON: ") + e.what());
  }
}

std::uint64_t effective_seed(const io::json& config) {
  if (const char* env = std::getenv("CONEGEO_SEED"); env && *env) {
    char* end = nullptr;
    const unsigned long long v = std::strtoull(env, &end, 10);
    if (*end != '\0') throw Error("CONEGEO_SEED must be an unsigned integer");
    return v;
  }
  if (config.is_object() && config.contains("seed")) {
    const json& s = config["seed"];
    if (!s.is_number_integer()) throw SchemaError("$.seed", "expected an integer");
    return s.get<std::uint64_t>();
  }
  return 0;
}

int run(const io::json& cfg, const fs::path& base_dir, std::ostream& out,
        std::ostream& err) {
  try {
    check_keys(cfg, {"task", "cone", "map", "params", "outputs", "seed", "description"},
               "$");
    const std::string task = get_string(cfg, "task", "", "$");
    if (task.empty()) throw SchemaError("$.task", "missing field");
    const Cone cone = io::cone_from_json(require(cfg, "cone", "$"));
    const json params = cfg.contains("params") ? cfg["params"] : json::object();
    if (!params.is_object()) throw SchemaError("$.params", "expected an object");
    const std::uint64_t seed = effective_seed(cfg);

    Outputs outs;
    if (cfg.contains("outputs")) {
      const json& o = cfg["outputs"];
      check_keys(o, {"json", "csv"}, "$.outputs");
      if (o.contains("json")) outs.json_path = resolve(base_dir, get_string(o, "json", "", "$.outputs"));
      if (o.contains("csv")) outs.csv_path = resolve(base_dir, get_string(o, "csv", "", "$.outputs"));
    }

    TaskResult r;
    if (task == "metric") {
      r = run_metric(params, cone);
    } else if (task == "horo") {
      r = run_horo(params, cone);
    } else {
      const Map f = load_map(cfg, cone);
      if (task == "spectral") {
        r = run_spectral(params, cone, f);
      } else if (task == "orbit") {
        r = run_orbit(params, cone, f);
      } else if (task == "check-wolff") {
        r = run_check_wolff(params, cone, f, seed);
      } else if (task == "dw-report") {
        r = run_dw(params, cone, f, base_dir);
      } else if (task == "dichotomy") {
        r = run_dichotomy(params, cone, f);
      } else {
        throw SchemaError("$.task", "unknown task '" + task + "'");
      }
    }

    if (r.trace) {
      if (outs.csv_path) {
        std::ofstream f(*outs.csv_path, std::ios::binary);
        if (!f) throw Error("cannot write " + outs.csv_path->string());
        io::write_orbit_csv(f, *r.trace);
      } else {
        io::write_orbit_csv(out, *r.trace);
      }
      if (outs.json_path) write_file(*outs.json_path, r.report.dump(2) + "\n");
    } else if (outs.json_path) {
      write_file(*outs.json_path, r.report.dump(2) + "\n");
    } else if (r.scalar) {
      out << format15(*r.scalar) << "\n";
    } else {
      out << r.report.dump(2) << "\n";
    }
    if (r.exit_code == kHypothesesUnmet) {
      err << "conegeo: " << r.report.value("message", std::string("hypotheses unmet")) << "\n";
    }
    return r.exit_code;
  } catch (const std::exception& e) {
    err << "conegeo: error: " << e.what() << "\n";
    return kError;
  }
}

}  // namespace conegeo::harness
