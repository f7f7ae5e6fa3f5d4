#pragma once

// JSON and CSV serialization of cones, maps, points and reports.
// Schema violations raise SchemaError carrying the JSON path of the field.

#include <iosfwd>
#include <string>

#include "json.hpp"
#include "conegeo/dynamics.hpp"

namespace conegeo::io {

using json = nlohmann::ordered_json;

class SchemaError : public Error {
 public:
  SchemaError(const std::string& path, const std::string& msg)
      : Error(path + ": " + msg), path_(path) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Finite doubles as numbers, infinities and NaN as "inf", "-inf", "nan".
json number(double v);
double to_double(const json& j, const std::string& path);
int to_int(const json& j, const std::string& path);

json to_json(const Vector& v);
/// Flat array, or for PSD cones also a nested n x n matrix (packed on read).
Vector point_from_json(const json& j, const Cone& cone, const std::string& path);
Matrix matrix_from_json(const json& j, const std::string& path);
/// "1,2,3" -> (1, 2, 3).
Vector parse_csv_vector(const std::string& s, const std::string& what);

Cone cone_from_json(const json& j, const std::string& path = "$.cone");
json to_json(const Cone& cone);

Map map_from_json(const json& j, const Cone& cone, const std::string& path = "$.map");
GaugeSpec gauge_from_json(const json& j, const Cone& cone, const std::string& path);

json to_json(const SpectralReport& rep);
json to_json(const OmegaReport& rep);
json to_json(const RegimeInfo& info);
json to_json(const DwReport& rep);
json to_json(const DichotomyReport& rep);
json to_json(const WolffReport& rep);
json to_json(const DualFunctional& phi);

/// Columns: k, point coordinates, log_gauge, thompson_step, hilbert_step,
/// interior_gap, hF, hR, hH; absent values are left blank.
void write_orbit_csv(std::ostream& out, const OrbitTrace& trace);

/// 17 significant digits, so the text reads back to the same double.
std::string format_double(double v);

}  // namespace conegeo::io
