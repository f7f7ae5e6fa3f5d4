#include "conegeo/io.hpp"

#include <charconv>
#include <cmath>
#include <cstdio>
#include <limits>
#include <ostream>
#include <sstream>

#include "conegeo/sym_layout.hpp"

namespace conegeo::io {

namespace {

std::string idx(const std::string& path, std::size_t i) {
  return path + "[" + std::to_string(i) + "]";
}

const json& field(const json& j, const char* key, const std::string& path) {
  if (!j.is_object()) throw SchemaError(path, "expected an object");
  auto it = j.find(key);
  if (it == j.end()) throw SchemaError(path + "." + key, "missing field");
  return *it;
}

std::string string_field(const json& j, const char* key, const std::string& path) {
  const json& v = field(j, key, path);
  if (!v.is_string()) throw SchemaError(path + "." + key, "expected a string");
  return v.get<std::string>();
}

Vector vector_from_json(const json& j, const std::string& path) {
  if (!j.is_array()) throw SchemaError(path, "expected an array of numbers");
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = to_double(j[i], idx(path, i));
  }
  return v;
}

}  // namespace

std::string format_double(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

json number(double v) {
  if (std::isfinite(v)) return v;
  return format_double(v);
}

double to_double(const json& j, const std::string& path) {
  if (j.is_number()) return j.get<double>();
  if (j.is_string()) {
    const std::string s = j.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw SchemaError(path, "expected a number");
}

int to_int(const json& j, const std::string& path) {
  if (!j.is_number_integer()) throw SchemaError(path, "expected an integer");
  const auto v = j.get<long long>();
  if (v < std::numeric_limits<int>::min() || v > std::numeric_limits<int>::max()) {
    throw SchemaError(path, "integer out of range");
  }
  return static_cast<int>(v);
}

json to_json(const Vector& v) {
  json a = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) a.push_back(number(v(i)));
  return a;
}

Matrix matrix_from_json(const json& j, const std::string& path) {
  if (!j.is_array() || j.empty()) throw SchemaError(path, "expected a nonempty array of rows");
  const std::size_t cols = j[0].is_array() ? j[0].size() : 0;
  Matrix m(static_cast<Eigen::Index>(j.size()), static_cast<Eigen::Index>(cols));
  for (std::size_t r = 0; r < j.size(); ++r) {
    const std::string rp = idx(path, r);
    if (!j[r].is_array()) throw SchemaError(rp, "expected an array of numbers");
    if (j[r].size() != cols) throw SchemaError(rp, "rows have different lengths");
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          to_double(j[r][c], idx(rp, c));
    }
  }
  return m;
}

Vector point_from_json(const json& j, const Cone& cone, const std::string& path) {
  Vector v;
  if (cone.kind() == ConeKind::Psd && j.is_array() && !j.empty() && j[0].is_array()) {
    const Matrix m = matrix_from_json(j, path);
    if (m.rows() != cone.n() || m.cols() != cone.n()) {
      throw SchemaError(path, "expected a " + std::to_string(cone.n()) + "x" +
                                  std::to_string(cone.n()) + " matrix");
    }
    if ((m - m.transpose()).norm() > 1e-12 * std::max(1.0, m.norm())) {
      throw SchemaError(path, "matrix is not symmetric");
    }
    v = sym::pack(m);
  } else {
    v = vector_from_json(j, path);
  }
  if (v.size() != cone.ambient_dim()) {
    throw SchemaError(path, "expected " + std::to_string(cone.ambient_dim()) +
                                " coordinates, got " + std::to_string(v.size()));
  }
  return v;
}

Vector parse_csv_vector(const std::string& s, const std::string& what) {
  std::vector<double> vals;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto b = tok.find_first_not_of(" \t");
    const auto e = tok.find_last_not_of(" \t");
    if (b == std::string::npos) throw SchemaError(what, "empty entry in '" + s + "'");
    tok = tok.substr(b, e - b + 1);
    double v = 0.0;
    auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw SchemaError(what, "cannot parse '" + tok + "' as a number");
    }
    vals.push_back(v);
  }
  if (vals.empty()) throw SchemaError(what, "no coordinates given");
  return Eigen::Map<Vector>(vals.data(), static_cast<Eigen::Index>(vals.size()));
}

Cone cone_from_json(const json& j, const std::string& path) {
  const std::string kind = string_field(j, "kind", path);
  std::optional<Vector> u;
  if (j.contains("u")) u = vector_from_json(j["u"], path + ".u");
  try {
    if (kind == "polyhedral") {
      const Matrix facets = matrix_from_json(field(j, "facets", path), path + ".facets");
      if (j.contains("n") && to_int(j["n"], path + ".n") != facets.cols()) {
        throw SchemaError(path + ".n", "does not match the facet width");
      }
      return Cone::polyhedral(facets, u);
    }
    const int n = to_int(field(j, "n", path), path + ".n");
    if (n < 1) throw SchemaError(path + ".n", "must be positive");
    if (kind == "orthant") return Cone::orthant(n, u);
    if (kind == "lorentz") return Cone::lorentz(n, u);
    if (kind == "psd") return Cone::psd(n, u);
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(path + ".kind", "unknown cone kind '" + kind + "'");
}

json to_json(const Cone& cone) {
  json j;
  j["kind"] = to_string(cone.kind());
  if (cone.kind() == ConeKind::Polyhedral) {
    j["n"] = cone.ambient_dim();
    json rows = json::array();
    for (Eigen::Index r = 0; r < cone.raw_facets().rows(); ++r) {
      rows.push_back(to_json(Vector(cone.raw_facets().row(r).transpose())));
    }
    j["facets"] = rows;
  } else {
    j["n"] = cone.n();
  }
  j["u"] = to_json(cone.unit());
  return j;
}

GaugeSpec gauge_from_json(const json& j, const Cone& cone, const std::string& path) {
  const std::string kind = string_field(j, "kind", path);
  if (kind == "functional") {
    return GaugeSpec::functional(point_from_json(field(j, "phi", path), cone, path + ".phi"));
  }
  if (kind == "order_unit") {
    if (j.contains("u")) return GaugeSpec::order_unit(point_from_json(j["u"], cone, path + ".u"));
    return GaugeSpec::order_unit();
  }
  throw SchemaError(path + ".kind", "unknown gauge kind '" + kind + "'");
}

Map map_from_json(const json& j, const Cone& cone, const std::string& path) {
  const std::string kind = string_field(j, "kind", path);
  try {
    if (kind == "linear") {
      return Map::linear(cone, matrix_from_json(field(j, "matrix", path), path + ".matrix"));
    }
    if (kind == "congruence") {
      return Map::congruence(cone,
                             matrix_from_json(field(j, "matrix", path), path + ".matrix"));
    }
    if (kind == "topical") {
      const json& rows = field(j, "rows", path);
      const std::string rp = path + ".rows";
      if (!rows.is_array()) throw SchemaError(rp, "expected an array of rows");
      std::vector<TopicalRow> out;
      for (std::size_t r = 0; r < rows.size(); ++r) {
        const std::string rpath = idx(rp, r);
        if (!rows[r].is_array()) throw SchemaError(rpath, "expected an array of groups");
        TopicalRow row;
        for (std::size_t g = 0; g < rows[r].size(); ++g) {
          const std::string gpath = idx(rpath, g);
          if (!rows[r][g].is_array()) throw SchemaError(gpath, "expected an array of forms");
          MinGroup group;
          for (std::size_t w = 0; w < rows[r][g].size(); ++w) {
            group.push_back(point_from_json(rows[r][g][w], cone, idx(gpath, w)));
          }
          row.push_back(std::move(group));
        }
        out.push_back(std::move(row));
      }
      return Map::topical(cone, std::move(out));
    }
    if (kind == "perturbed") {
      const Map inner = map_from_json(field(j, "inner", path), cone, path + ".inner");
      const double eps = to_double(field(j, "eps", path), path + ".eps");
      std::optional<Vector> u;
      if (j.contains("u")) u = point_from_json(j["u"], cone, path + ".u");
      return Map::perturbed(inner, eps, u);
    }
    if (kind == "normalized") {
      const Map inner = map_from_json(field(j, "inner", path), cone, path + ".inner");
      return Map::normalized(inner,
                             gauge_from_json(field(j, "gauge", path), cone, path + ".gauge"));
    }
  } catch (const SchemaError&) {
    throw;
  } catch (const Error& e) {
    throw SchemaError(path, e.what());
  }
  throw SchemaError(path + ".kind", "unknown map kind '" + kind + "'");
}

json to_json(const DualFunctional& phi) { return to_json(phi.coords); }

json to_json(const SpectralReport& rep) {
  json j;
  j["r_hat"] = number(rep.r_hat);
  json tr = json::array();
  for (const EigenSolveResult& e : rep.eps_trace) {
    tr.push_back({{"eps", number(e.eps)},
                  {"r_eps", number(e.r_eps)},
                  {"iters", e.iterations},
                  {"contraction", number(e.measured_contraction)},
                  {"converged", e.converged},
                  {"v_eps", to_json(e.v_eps)}});
  }
  j["eps_trace"] = tr;
  json up = json::array();
  for (const CwUpperEntry& c : rep.cw_upper) {
    up.push_back({{"y", to_json(c.y)}, {"k", c.k}, {"bound", number(c.bound)}});
  }
  j["cw_upper"] = up;
  json lo = json::array();
  for (const CwLowerEntry& c : rep.cw_lower) {
    lo.push_back({{"y", to_json(c.y)}, {"bound", number(c.bound)}});
  }
  j["cw_lower"] = lo;
  j["interior_eigenvector_found"] = rep.interior_eigenvector_found;
  j["boundary_drift"] = number(rep.boundary_drift);
  j["truncated"] = rep.truncated;
  return j;
}

json to_json(const OmegaReport& rep) {
  json j;
  j["mode"] = to_string(rep.mode);
  json cl = json::array();
  for (const Cluster& c : rep.clusters) {
    cl.push_back({{"representative", to_json(c.representative)},
                  {"size", c.members.size()},
                  {"first_index", c.members.empty() ? -1 : c.members.back()},
                  {"last_index", c.members.empty() ? -1 : c.members.front()},
                  {"radius", number(c.radius)}});
  }
  j["clusters"] = cl;
  j["all_boundary"] = rep.all_boundary;
  j["separating_functional"] =
      rep.separating_functional ? to_json(*rep.separating_functional) : json();
  j["hull_in_boundary"] = rep.hull_in_boundary;
  j["interior_witness"] = to_json(rep.interior_witness);
  if (!rep.note.empty()) j["note"] = rep.note;
  return j;
}

json to_json(const RegimeInfo& info) {
  return {{"regime", to_string(info.regime)},
          {"log_gauge_span", number(info.span)},
          {"doubling_increments", {number(info.d1), number(info.d2), number(info.d3)}}};
}

json to_json(const DwReport& rep) {
  json j;
  j["hypotheses_met"] = rep.hypotheses_met;
  j["message"] = rep.message;
  j["r_hat"] = number(rep.spectral.r_hat);
  j["spectral"] = to_json(rep.spectral);
  json st = json::array();
  for (const StartReport& s : rep.starts) {
    st.push_back({{"x0", to_json(s.x0)},
                  {"regime", to_json(s.regime)},
                  {"truncated", s.truncated},
                  {"thompson", to_json(s.thompson)},
                  {"hilbert", to_json(s.hilbert)}});
  }
  j["starts"] = st;
  j["common_functional"] = rep.common_functional ? to_json(*rep.common_functional) : json();
  j["all_boundary"] = rep.all_boundary;
  j["hull_in_boundary"] = rep.hull_in_boundary;
  return j;
}

json to_json(const DichotomyReport& rep) {
  json j;
  j["polyhedral"] = rep.polyhedral;
  j["regime"] = to_json(rep.regime);
  j["bounded_tail_points"] = rep.bounded_tail_points;
  j["bounded_accumulation"] = rep.bounded_accumulation;
  j["accumulation_point"] = rep.accumulation_point ? to_json(*rep.accumulation_point) : json();
  j["violation"] = rep.violation;
  j["status"] = rep.violation ? "VIOLATION" : "PASS";
  return j;
}

json to_json(const WolffReport& rep) {
  return {{"funk_max_slack", number(rep.funk_max_slack)},
          {"rfunk_max_slack", number(rep.rfunk_max_slack)},
          {"hilbert_max_slack", number(rep.hilbert_max_slack)},
          {"max_violation", number(rep.max_violation)},
          {"max_abs_gap", number(rep.max_abs_gap)},
          {"samples", rep.samples}};
}

void write_orbit_csv(std::ostream& out, const OrbitTrace& trace) {
  const Eigen::Index d = trace.cone.ambient_dim();
  out << "k";
  for (Eigen::Index i = 0; i < d; ++i) out << ",x" << i;
  out << ",log_gauge,thompson_step,hilbert_step,interior_gap,hF,hR,hH\n";
  auto opt = [&](const std::optional<double>& v) {
    out << ',';
    if (v) out << format_double(*v);
  };
  for (const OrbitStep& s : trace.steps) {
    out << s.k;
    for (Eigen::Index i = 0; i < d; ++i) out << ',' << format_double(s.point(i));
    out << ',' << format_double(s.log_gauge);
    opt(s.thompson_step);
    opt(s.hilbert_step);
    out << ',' << format_double(s.interior_gap);
    opt(s.h_f);
    opt(s.h_r);
    opt(s.h_h);
    out << '\n';
  }
}

}  // namespace conegeo::io
