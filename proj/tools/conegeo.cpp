// conegeo command-line front end. Every subcommand assembles an experiment
// config and hands it to the harness, so `run <config>` reproduces any of them.

#include <filesystem>
#include <iostream>

#include "CLI11.hpp"
#include "conegeo/harness.hpp"

namespace fs = std::filesystem;
using conegeo::io::json;

namespace {

// Inline JSON when the argument starts with '{' or '[', otherwise a file path.
json json_arg(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\n");
  if (b != std::string::npos && (s[b] == '{' || s[b] == '[')) {
    try {
      return json::parse(s);
    } catch (const json::parse_error& e) {
      throw conegeo::Error(std::string("malformed inline JSON: ") + e.what());
    }
  }
  return conegeo::harness::load_json_file(s);
}

json csv_point(const std::string& s, const std::string& what) {
  return conegeo::io::to_json(conegeo::io::parse_csv_vector(s, what));
}

struct Common {
  std::string cone;
  std::string map;
  std::string out;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Cone metrics, spectral radii, horofunctions and orbit dynamics"};
  app.require_subcommand(1);

  json config;
  int exit_code = 0;
  auto finish = [&](json cfg, const std::string& out_json, const std::string& out_csv = "") {
    if (!out_json.empty()) cfg["outputs"]["json"] = out_json;
    if (!out_csv.empty()) cfg["outputs"]["csv"] = out_csv;
    config = std::move(cfg);
  };
  auto add_cone = [](CLI::App* sc, Common& c) {
    sc->add_option("--cone", c.cone, "Cone descriptor: inline JSON or a JSON file")->required();
  };
  auto add_map = [](CLI::App* sc, Common& c) {
    sc->add_option("--map", c.map, "Map spec: inline JSON or a JSON file")->required();
  };

  // metric
  Common mc;
  std::string m_kind = "hilbert", m_x, m_y;
  auto* metric = app.add_subcommand("metric", "Distance between two interior points");
  add_cone(metric, mc);
  metric->add_option("--kind", m_kind, "funk | rfunk | thompson | hilbert")
      ->check(CLI::IsMember({"funk", "rfunk", "thompson", "hilbert"}));
  metric->add_option("--x", m_x, "First point, comma separated")->required();
  metric->add_option("--y", m_y, "Second point, comma separated")->required();
  metric->add_option("--out", mc.out, "Write a JSON report here instead of printing the value");
  metric->callback([&] {
    finish({{"task", "metric"},
            {"cone", json_arg(mc.cone)},
            {"params", {{"kind", m_kind}, {"x", csv_point(m_x, "--x")}, {"y", csv_point(m_y, "--y")}}}},
           mc.out);
  });

  // spectral
  Common sc;
  double s_eps0 = 1.0, s_decay = 0.5, s_tol = 1e-10;
  int s_max_iter = 2000000;
  std::string s_u;
  auto* spectral = app.add_subcommand("spectral", "Cone spectral radius with certificates");
  add_cone(spectral, sc);
  add_map(spectral, sc);
  spectral->add_option("--eps0", s_eps0, "First perturbation size")->capture_default_str();
  spectral->add_option("--decay", s_decay, "Geometric decay of the perturbation")
      ->capture_default_str();
  spectral->add_option("--tol", s_tol, "Hilbert-metric tolerance of each solve")
      ->capture_default_str();
  spectral->add_option("--max-iter", s_max_iter, "Iteration budget per perturbation size")
      ->capture_default_str();
  spectral->add_option("--u", s_u, "Perturbation unit (default: the cone's order unit)");
  spectral->add_option("--out", sc.out, "Write the JSON report here");
  spectral->callback([&] {
    json p = {{"eps0", s_eps0}, {"decay", s_decay}, {"tol", s_tol}, {"max_iter", s_max_iter}};
    if (!s_u.empty()) p["u"] = csv_point(s_u, "--u");
    finish({{"task", "spectral"}, {"cone", json_arg(sc.cone)}, {"map", json_arg(sc.map)},
            {"params", p}},
           sc.out);
  });

  // orbit
  Common oc;
  std::string o_x0, o_mode = "thompson", o_gauge, o_json;
  int o_kmax = 1000, o_stride = 1;
  std::vector<std::string> o_horo;
  auto* orbit = app.add_subcommand("orbit", "Iterate a map and write the trace as CSV");
  add_cone(orbit, oc);
  add_map(orbit, oc);
  orbit->add_option("--x0", o_x0, "Interior start point, comma separated")->required();
  orbit->add_option("--mode", o_mode, "thompson (raw iterates) | hilbert (normalized)")
      ->check(CLI::IsMember({"thompson", "hilbert"}));
  orbit->add_option("--kmax", o_kmax, "Number of iterations")->capture_default_str();
  orbit->add_option("--stride", o_stride, "Record every stride-th iterate")
      ->capture_default_str();
  orbit->add_option("--gauge", o_gauge,
                    "Hilbert-mode gauge JSON, e.g. {\"kind\":\"functional\",\"phi\":[1,1]}");
  orbit->add_option("--horo", o_horo,
                    "Horofunction to record, JSON {\"kind\":\"hR\",\"y\":[...]}; repeatable");
  orbit->add_option("--out", oc.out, "CSV output file (default: stdout)");
  orbit->add_option("--summary", o_json, "Write a JSON summary here");
  orbit->callback([&] {
    json p = {{"x0", csv_point(o_x0, "--x0")}, {"k_max", o_kmax}, {"mode", o_mode},
              {"stride", o_stride}};
    if (!o_gauge.empty()) p["gauge"] = json_arg(o_gauge);
    if (!o_horo.empty()) {
      p["horo"] = json::array();
      for (const auto& h : o_horo) p["horo"].push_back(json_arg(h));
    }
    finish({{"task", "orbit"}, {"cone", json_arg(oc.cone)}, {"map", json_arg(oc.map)},
            {"params", p}},
           o_json, oc.out);
  });

  // horo and horo check-wolff
  Common hc;
  std::string h_kind, h_y, h_z, h_x, h_base;
  auto* horo = app.add_subcommand("horo", "Evaluate a horofunction");
  horo->require_subcommand(0, 1);
  horo->add_option("--cone", hc.cone, "Cone descriptor: inline JSON or a JSON file");
  horo->add_option("--kind", h_kind, "hF | hR | hH")->check(CLI::IsMember({"hF", "hR", "hH"}));
  horo->add_option("--param-y", h_y, "Reverse Funk boundary parameter y");
  horo->add_option("--param-z", h_z, "Funk boundary parameter z");
  horo->add_option("--base", h_base, "Base point for hR (default: the order unit)");
  horo->add_option("--x", h_x, "Interior evaluation point");
  horo->add_option("--out", hc.out, "Write a JSON report here instead of printing the value");

  Common wc;
  std::string w_fz, w_ry, w_rbase, w_hy, w_hz, w_samples;
  int w_random = -1;
  double w_rhat = 0.0;
  auto* wolff = horo->add_subcommand("check-wolff", "Check the Wolff-type inequalities along f");
  add_cone(wolff, wc);
  add_map(wolff, wc);
  wolff->add_option("--hF-z", w_fz, "Funk horofunction parameter z");
  wolff->add_option("--hR-y", w_ry, "Reverse Funk horofunction parameter y");
  wolff->add_option("--hR-base", w_rbase, "Base point of the reverse Funk horofunction");
  wolff->add_option("--hH-y", w_hy, "Hilbert horofunction parameter y");
  wolff->add_option("--hH-z", w_hz, "Hilbert horofunction parameter z");
  wolff->add_option("--samples", w_samples, "JSON array of interior sample points (file or inline)");
  wolff->add_option("--random", w_random, "Number of random interior samples (default 100)");
  auto* rhat_opt = wolff->add_option("--r-hat", w_rhat, "Spectral radius (default: computed)");
  wolff->add_option("--out", wc.out, "Write the JSON report here");
  wolff->callback([&] {
    json p = json::object();
    if (!w_fz.empty()) p["hF"] = {{"z", csv_point(w_fz, "--hF-z")}};
    if (!w_ry.empty()) {
      p["hR"] = {{"y", csv_point(w_ry, "--hR-y")}};
      if (!w_rbase.empty()) p["hR"]["base"] = csv_point(w_rbase, "--hR-base");
    }
    if (!w_hy.empty() || !w_hz.empty()) {
      p["hH"] = {{"y", csv_point(w_hy, "--hH-y")}, {"z", csv_point(w_hz, "--hH-z")}};
    }
    if (!w_samples.empty()) p["samples"] = json_arg(w_samples);
    if (w_random >= 0) p["random_samples"] = w_random;
    if (rhat_opt->count() > 0) p["r_hat"] = w_rhat;
    finish({{"task", "check-wolff"}, {"cone", json_arg(wc.cone)}, {"map", json_arg(wc.map)},
            {"params", p}},
           wc.out);
  });
  horo->callback([&] {
    if (wolff->parsed()) return;
    if (hc.cone.empty() || h_kind.empty() || h_x.empty()) {
      throw CLI::ValidationError("horo", "--cone, --kind and --x are required");
    }
    json p = {{"kind", h_kind}, {"x", csv_point(h_x, "--x")}};
    if (!h_y.empty()) p["y"] = csv_point(h_y, "--param-y");
    if (!h_z.empty()) p["z"] = csv_point(h_z, "--param-z");
    if (!h_base.empty()) p["base"] = csv_point(h_base, "--base");
    finish({{"task", "horo"}, {"cone", json_arg(hc.cone)}, {"params", p}}, hc.out);
  });

  // report dw
  Common dc;
  std::string d_starts, d_gauge;
  int d_kmax = 10000, d_stride = 1;
  double d_tail = 0.5, d_radius = 1e-4;
  auto* report = app.add_subcommand("report", "Aggregated reports");
  report->require_subcommand(1);
  auto* dw = report->add_subcommand("dw", "Denjoy-Wolff report for a fixed-point-free map");
  add_cone(dw, dc);
  add_map(dw, dc);
  dw->add_option("--starts", d_starts, "JSON array of interior start points (file or inline)");
  dw->add_option("--gauge", d_gauge, "Hilbert-mode gauge JSON (default: order-unit norm)");
  dw->add_option("--kmax", d_kmax, "Iterations per orbit")->capture_default_str();
  dw->add_option("--stride", d_stride, "Record every stride-th iterate")->capture_default_str();
  dw->add_option("--tail", d_tail, "Tail fraction used for clustering")->capture_default_str();
  dw->add_option("--radius", d_radius, "Cluster radius in the order-unit norm")
      ->capture_default_str();
  dw->add_option("--out", dc.out, "Write the JSON report here");
  dw->callback([&] {
    json p = {{"k_max", d_kmax}, {"stride", d_stride}, {"tail_fraction", d_tail},
              {"cluster_radius", d_radius}};
    if (!d_starts.empty()) p["starts"] = json_arg(d_starts);
    if (!d_gauge.empty()) p["gauge"] = json_arg(d_gauge);
    finish({{"task", "dw-report"}, {"cone", json_arg(dc.cone)}, {"map", json_arg(dc.map)},
            {"params", p}},
           dc.out);
  });

  // dichotomy
  Common yc;
  std::string y_x0;
  int y_kmax = 10000, y_stride = 1;
  bool y_no_rescale = false;
  auto* dich = app.add_subcommand(
      "dichotomy", "Check that an orbit is not both unbounded and boundary-accumulating");
  add_cone(dich, yc);
  add_map(dich, yc);
  dich->add_option("--x0", y_x0, "Interior start point (default: the order unit)");
  dich->add_option("--kmax", y_kmax, "Iterations")->capture_default_str();
  dich->add_option("--stride", y_stride, "Record every stride-th iterate")->capture_default_str();
  dich->add_flag("--no-rescale", y_no_rescale, "Do not rescale the map to spectral radius 1");
  dich->add_option("--out", yc.out, "Write the JSON report here");
  dich->callback([&] {
    json p = {{"k_max", y_kmax}, {"stride", y_stride}, {"rescale", !y_no_rescale}};
    if (!y_x0.empty()) p["x0"] = csv_point(y_x0, "--x0");
    finish({{"task", "dichotomy"}, {"cone", json_arg(yc.cone)}, {"map", json_arg(yc.map)},
            {"params", p}},
           yc.out);
  });

  // run
  std::string r_config;
  fs::path base = fs::current_path();
  auto* run = app.add_subcommand("run", "Run a JSON experiment config");
  run->add_option("config", r_config, "Config file")->required();
  run->callback([&] {
    config = conegeo::harness::load_json_file(r_config);
    base = fs::absolute(r_config).parent_path();
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::cerr << "conegeo: error: " << e.what() << "\n";
    return 1;
  }
  exit_code = conegeo::harness::run(config, base, std::cout, std::cerr);
  return exit_code;
}
