#pragma once

#include "constructions.hpp"
#include "geometry.hpp"
#include "integer.hpp"
#include "point_set.hpp"
#include "random.hpp"
#include "vc.hpp"

#include <json.hpp>

#include <fstream>
#include <sstream>
#include <stdexcept>
#include <string>

namespace lgp {

using Json = nlohmann::ordered_json;

inline constexpr const char* kPointSetFormat = "latticeset/1";

/// Malformed or invalid point-set file.
class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Canonical file text: one compact JSON object and a trailing newline.
inline std::string dump_point_set(const PointSet& ps) {
  Json doc;
  doc["format"] = kPointSetFormat;
  doc["d"] = ps.dim();
  doc["n"] = ps.side();
  Json pts = Json::array();
  for (const auto& p : ps) pts.push_back(p.coords());
  doc["points"] = std::move(pts);
  return doc.dump() + "\n";
}

inline PointSet parse_point_set(const std::string& text) {
  Json doc;
  try {
    doc = Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(std::string("point-set file is not valid JSON: ") + e.what());
  }
  auto fail = [](const std::string& why) { throw FormatError("malformed point-set file: " + why); };
  if (!doc.is_object()) fail("top level must be an object");
  if (!doc.contains("format") || doc["format"] != kPointSetFormat) fail("format must be \"latticeset/1\"");
  for (const char* key : {"d", "n"})
    if (!doc.contains(key) || !doc[key].is_number_integer()) fail(std::string("missing integer field ") + key);
  if (!doc.contains("points") || !doc["points"].is_array()) fail("missing array field points");
  const auto d = doc["d"].get<std::int64_t>();
  const auto n = doc["n"].get<std::int64_t>();
  if (d < 2) fail("d must be at least 2");
  if (n < 1) fail("n must be at least 1");

  std::vector<LatticePoint> pts;
  for (const auto& row : doc["points"]) {
    if (!row.is_array() || row.size() != static_cast<std::size_t>(d)) fail("every point needs d coordinates");
    std::vector<Coord> c;
    for (const auto& x : row) {
      if (!x.is_number_integer()) fail("coordinates must be integers");
      c.push_back(x.get<Coord>());
    }
    LatticePoint p(std::move(c));
    if (!p.in_cube(n)) fail("point outside [1,n]^d");
    pts.push_back(std::move(p));
  }
  return PointSet(static_cast<std::size_t>(d), n, std::move(pts));
}

inline PointSet load_point_set(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot open " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_point_set(buf.str());
}

inline void store_point_set(const PointSet& ps, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << dump_point_set(ps);
}

// ---------------------------------------------------------------------------
// Reports

inline Json to_json(const Integer& v) {
  if (fits_int64(v)) return static_cast<std::int64_t>(v);
  return to_string(v);
}

inline Json to_json(const GeneralizedSphere& s) {
  Json c = Json::array();
  for (const auto& x : s.coefficients()) c.push_back(to_json(x));
  return c;
}

inline Json to_json(const ViolationWitness& w) {
  Json j;
  j["kind"] = w.surface.is_sphere() ? "sphere" : "hyperplane";
  j["coefficients"] = to_json(w.surface);
  j["size"] = w.members.size();
  Json m = Json::array();
  for (const auto& p : w.members) m.push_back(p.coords());
  j["members"] = std::move(m);
  return j;
}

inline Json to_json(const ConstructionReport& r) {
  Json j;
  j["method"] = to_string(r.method);
  j["d"] = r.d;
  j["n"] = r.n;
  j["seed"] = r.seed;
  j["generator"] = std::string(kGeneratorName);
  j["prime_used"] = r.prime_used ? Json(*r.prime_used) : Json(nullptr);
  j["D_used"] = r.D_used ? Json(*r.D_used) : Json(nullptr);
  j["sample_size"] = r.sample_size ? Json(*r.sample_size) : Json(nullptr);
  j["violations_found"] = r.violations_found;
  j["deleted"] = r.deleted;
  j["final_size"] = r.final_size;
  j["verified"] = r.verified;
  j["general_position"] = r.general_position;
  j["warnings"] = r.warnings;
  if (r.pipeline) {
    const auto& p = *r.pipeline;
    Json q;
    q["n_used"] = p.n_used;
    q["stage1_probability"] = std::to_string(p.stage1_probability.num) + "/" + std::to_string(p.stage1_probability.den);
    q["stage2_probability"] = p.stage2_probability;
    q["c_const"] = p.c_const;
    q["attempts"] = p.attempts;
    q["subsample_size"] = p.subsample_size;
    if (p.partition) {
      q["D_target"] = p.partition->target;
      q["D_clamped"] = p.partition->clamped;
    }
    q["size_window_ok"] = p.size_window_ok;
    q["balance_ok"] = p.balance_ok ? Json(*p.balance_ok) : Json(nullptr);
    q["min_population"] = p.min_population;
    q["max_population"] = p.max_population;
    q["max_codim2_sphere_points"] = p.max_codim2_sphere_points ? Json(*p.max_codim2_sphere_points) : Json(nullptr);
    q["cohyperplanar_tuples"] = p.cohyperplanar_tuples ? to_json(*p.cohyperplanar_tuples) : Json(nullptr);
    j["pipeline"] = std::move(q);
  }
  return j;
}

inline Json to_json(const VcRefutation& r) {
  auto points = [](const std::vector<FramePoint>& v) {
    Json a = Json::array();
    for (const auto& p : v) {
      Json c = Json::array();
      for (const auto& x : p) c.push_back(to_json(x));
      a.push_back(std::move(c));
    }
    return a;
  };
  Json j;
  j["dim"] = r.dim;
  j["reason"] = to_string(r.reason);
  j["subset"] = points(r.subset);
  j["target"] = points(r.target_points());
  if (r.recursion) j["recursion"] = to_json(*r.recursion);
  return j;
}

}  // namespace lgp
