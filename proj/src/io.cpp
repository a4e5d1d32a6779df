#include "rcsurf/io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include <nlohmann/json.hpp>

namespace rcsurf {

using nlohmann::json;

namespace {

const json& require(const json& j, const char* field) {
  if (!j.is_object()) throw ParseError("expected an object while reading '" + std::string(field) + "'");
  const auto it = j.find(field);
  if (it == j.end()) throw ParseError("missing field '" + std::string(field) + "'");
  return *it;
}

double number(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_number()) throw ParseError("field '" + std::string(field) + "' must be a number");
  return v.get<double>();
}

int integer(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_number_integer()) throw ParseError("field '" + std::string(field) + "' must be an integer");
  return v.get<int>();
}

std::vector<double> number_list(const json& j, const char* field) {
  const json& v = require(j, field);
  if (!v.is_array()) throw ParseError("field '" + std::string(field) + "' must be an array");
  std::vector<double> out;
  for (const auto& e : v) {
    if (!e.is_number()) throw ParseError("field '" + std::string(field) + "' must hold numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Vec3 vec3_from(const json& v, const char* field) {
  if (!v.is_array() || v.size() != 3)
    throw ParseError("field '" + std::string(field) + "' must be a [x, y, z] triple");
  for (const auto& e : v)
    if (!e.is_number()) throw ParseError("field '" + std::string(field) + "' must hold numbers");
  return Vec3(v[0].get<double>(), v[1].get<double>(), v[2].get<double>());
}

json vec3_json(const Vec3& v) { return json::array({v(0), v(1), v(2)}); }

}  // namespace

json surface_to_json(const TensorSurface& s) {
  json j;
  j["schema"] = kSchemaVersion;
  j["degree_u"] = s.ku().degree();
  j["degree_v"] = s.kv().degree();
  j["knots_u"] = s.ku().knots();
  j["knots_v"] = s.kv().knots();
  json rows = json::array();
  for (int a = 0; a < s.n1(); ++a) {
    json row = json::array();
    for (int b = 0; b < s.n2(); ++b) row.push_back(vec3_json(s.cp(a, b)));
    rows.push_back(std::move(row));
  }
  j["control_points"] = std::move(rows);
  return j;
}

TensorSurface surface_from_json(const json& j) {
  const int du = integer(j, "degree_u");
  const int dv = integer(j, "degree_v");
  KnotVector ku = [&] {
    try {
      return KnotVector(du, number_list(j, "knots_u"));
    } catch (const std::invalid_argument& e) {
      throw ParseError("field 'knots_u': " + std::string(e.what()));
    }
  }();
  KnotVector kv = [&] {
    try {
      return KnotVector(dv, number_list(j, "knots_v"));
    } catch (const std::invalid_argument& e) {
      throw ParseError("field 'knots_v': " + std::string(e.what()));
    }
  }();
  const json& cps = require(j, "control_points");
  if (!cps.is_array() || static_cast<int>(cps.size()) != ku.num_basis())
    throw ParseError("field 'control_points' must have #knots_u - degree_u - 1 rows");
  std::vector<Vec3> net;
  for (const auto& row : cps) {
    if (!row.is_array() || static_cast<int>(row.size()) != kv.num_basis())
      throw ParseError("field 'control_points' rows must have #knots_v - degree_v - 1 entries");
    for (const auto& p : row) net.push_back(vec3_from(p, "control_points"));
  }
  try {
    return TensorSurface(std::move(ku), std::move(kv), std::move(net));
  } catch (const std::invalid_argument& e) {
    throw ParseError("field 'control_points': " + std::string(e.what()));
  }
}

json model_to_json(const MultipatchModel& m) {
  json j;
  j["schema"] = kSchemaVersion;
  json patches = json::array();
  for (const TensorSurface& s : m.patches) patches.push_back(surface_to_json(s));
  j["patches"] = std::move(patches);
  json adj = json::array();
  for (const Adjacency& a : m.adjacency)
    adj.push_back({{"a", a.a},
                   {"edge_a", edge_name(a.edge_a)},
                   {"b", a.b},
                   {"edge_b", edge_name(a.edge_b)},
                   {"reversed", a.reversed}});
  j["adjacency"] = std::move(adj);
  return j;
}

MultipatchModel model_from_json(const json& j) {
  MultipatchModel m;
  const json& patches = require(j, "patches");
  if (!patches.is_array()) throw ParseError("field 'patches' must be an array");
  for (const auto& p : patches) m.patches.push_back(surface_from_json(p));
  const json& adj = require(j, "adjacency");
  if (!adj.is_array()) throw ParseError("field 'adjacency' must be an array");
  for (const auto& a : adj) {
    Adjacency rec;
    rec.a = integer(a, "a");
    rec.b = integer(a, "b");
    try {
      rec.edge_a = parse_edge(require(a, "edge_a").get<std::string>());
      rec.edge_b = parse_edge(require(a, "edge_b").get<std::string>());
    } catch (const std::invalid_argument& e) {
      throw ParseError("field 'adjacency': " + std::string(e.what()));
    }
    const json& rev = require(a, "reversed");
    if (!rev.is_boolean()) throw ParseError("field 'reversed' must be a boolean");
    rec.reversed = rev.get<bool>();
    if (rec.a < 0 || rec.a >= static_cast<int>(m.patches.size()) || rec.b < 0 ||
        rec.b >= static_cast<int>(m.patches.size()))
      throw ParseError("field 'adjacency': patch index out of range");
    m.adjacency.push_back(rec);
  }
  return m;
}

FitConfig fit_config_from_json(const json& j) {
  FitConfig c;
  c.degree = integer(j, "degree");
  c.level = integer(j, "level");
  c.scheme = require(j, "scheme").get<std::string>();
  if (c.scheme != "standard" && c.scheme != "rcc")
    throw ParseError("field 'scheme' must be \"standard\" or \"rcc\"");
  if (j.contains("two_step")) {
    if (!j["two_step"].is_boolean()) throw ParseError("field 'two_step' must be a boolean");
    c.two_step = j["two_step"].get<bool>();
  }
  if (j.contains("quad_points")) c.quad_points = integer(j, "quad_points");
  if (j.contains("corners")) {
    if (!j["corners"].is_array()) throw ParseError("field 'corners' must be an array");
    for (const auto& cj : j["corners"]) {
      CornerConstraintSpec spec;
      try {
        spec.id = parse_corner(require(cj, "id").get<std::string>());
      } catch (const std::invalid_argument& e) {
        throw ParseError("field 'corners.id': " + std::string(e.what()));
      }
      spec.alpha1 = number(cj, "alpha1");
      spec.alpha2 = 1.0 - spec.alpha1;
      if (cj.contains("alpha2")) spec.alpha2 = number(cj, "alpha2");
      spec.normal = vec3_from(require(cj, "normal"), "corners.normal");
      c.corners.push_back(spec);
    }
  }
  return c;
}

json fit_config_to_json(const FitConfig& c) {
  json j;
  j["schema"] = kSchemaVersion;
  j["degree"] = c.degree;
  j["level"] = c.level;
  j["scheme"] = c.scheme;
  j["two_step"] = c.two_step;
  j["quad_points"] = c.quad_points;
  json corners = json::array();
  for (const CornerConstraintSpec& s : c.corners)
    corners.push_back({{"id", corner_name(s.id)},
                       {"alpha1", s.alpha1},
                       {"alpha2", s.alpha2},
                       {"normal", vec3_json(s.normal)}});
  j["corners"] = std::move(corners);
  return j;
}

json frame_to_json(const CornerFrame& f) {
  return json{{"t", vec3_json(f.t)},      {"r", vec3_json(f.r)},
              {"s", vec3_json(f.s)},      {"n", vec3_json(f.n)},
              {"c", vec3_json(f.c)},      {"lambda", f.lambda},
              {"mu", f.mu},               {"rho", f.rho},
              {"sigma", f.sigma}};
}

json classification_to_json(const CornerClassification& c) {
  json j;
  j["kind"] = corner_kind_name(c.kind);
  j["antiparallel_residual"] = c.antiparallel_residual;
  j["coplanarity_residual"] = c.coplanarity_residual;
  j["quad_product"] = c.quad_product;
  j["quad_product_scaled"] = c.quad_product_scaled;
  if (c.frame) j["frame"] = frame_to_json(*c.frame);
  return j;
}

json spline_report_to_json(const SplineCornerReport& r) {
  json j;
  j["alpha1"] = r.alpha1;
  j["alpha2"] = r.alpha2;
  j["r_star"] = vec3_json(r.r_star);
  j["s_star"] = vec3_json(r.s_star);
  j["t_star"] = vec3_json(r.t_star);
  j["antiparallel_ok"] = r.antiparallel_ok;
  j["coplanar_ok"] = r.coplanar_ok;
  j["onesided_ok"] = r.onesided_ok;
  j["segment_residual"] = r.segment_residual;
  j["coplanarity_residual"] = r.coplanarity_residual;
  j["quad_product"] = r.quad_product;
  return j;
}

json probe_to_json(const ProbeSeries& p) {
  return json{{"parameters", p.parameters},
              {"values", p.values},
              {"fitted_rate", p.fitted_rate}};
}

json fit_report_to_json(const FitReport& r) {
  json j;
  j["schema"] = kSchemaVersion;
  j["l2_residual"] = r.l2_residual;
  j["max_error"] = r.max_error;
  j["constraint_residual"] = r.constraint_residual;
  json flags = json::array();
  for (const FitCornerFlags& f : r.corner_flags)
    flags.push_back({{"id", corner_name(f.id)},
                     {"antiparallel_ok", f.antiparallel_ok},
                     {"coplanar_ok", f.coplanar_ok},
                     {"onesided_ok", f.onesided_ok}});
  j["corner_flags"] = std::move(flags);
  return j;
}

json injectivity_to_json(const InjectivityReport& r) {
  json j;
  j["grid_density"] = r.grid_density;
  j["min_separation"] = r.min_separation;
  if (r.witness) {
    j["witness"] = {{"eta0", json::array({r.witness->eta0(0), r.witness->eta0(1)})},
                    {"eta1", json::array({r.witness->eta1(0), r.witness->eta1(1)})},
                    {"projected_distance", r.witness->projected_distance},
                    {"parameter_separation", r.witness->parameter_separation}};
  } else {
    j["witness"] = nullptr;
    j["note"] = "no witness found at resolution " + std::to_string(r.grid_density);
  }
  return j;
}

json watertightness_to_json(const WatertightnessReport& r) {
  return json{{"gaps", r.gaps}, {"max_gap", r.max_gap}, {"pass", r.pass}};
}

json repair_plan_to_json(const RepairPlan& p) {
  json out = json::array();
  for (const CornerCandidate& c : p.candidates) {
    json cj;
    cj["patch"] = c.patch;
    cj["corner"] = corner_name(c.corner);
    cj["classification"] = classification_to_json(c.classification);
    cj["adjacency_indices"] = c.adjacency_indices;
    cj["auto_repairable"] = auto_repairable(c.classification.kind);
    out.push_back(std::move(cj));
  }
  return json{{"candidates", out}};
}

std::string fmt_double(double x) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", x);
  return buf;
}

void write_field_csv(const std::vector<FieldSample>& field, const std::string& path) {
  std::ostringstream os;
  os << "u,v,x,y,z,nu_x,nu_y,nu_z,kappa1,kappa2,isophote\n";
  for (const FieldSample& f : field) {
    os << fmt_double(f.u) << ',' << fmt_double(f.v) << ',' << fmt_double(f.x(0)) << ','
       << fmt_double(f.x(1)) << ',' << fmt_double(f.x(2)) << ',' << fmt_double(f.nu(0))
       << ',' << fmt_double(f.nu(1)) << ',' << fmt_double(f.nu(2)) << ','
       << fmt_double(f.kappa1) << ',' << fmt_double(f.kappa2) << ','
       << fmt_double(f.isophote) << '\n';
  }
  write_text_file(path, os.str());
}

std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open file '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

void write_text_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write file '" + path + "'");
  out << content;
}

json parse_json_file(const std::string& path) {
  const std::string text = read_text_file(path);
  json j = json::parse(text, nullptr, false);
  if (j.is_discarded()) throw ParseError("file '" + path + "' is not valid JSON");
  return j;
}

TensorSurface load_surface(const std::string& path) {
  return surface_from_json(parse_json_file(path));
}

void save_surface(const TensorSurface& s, const std::string& path) {
  write_text_file(path, surface_to_json(s).dump(2) + "\n");
}

MultipatchModel load_model(const std::string& path) {
  return model_from_json(parse_json_file(path));
}

void save_model(const MultipatchModel& m, const std::string& path) {
  write_text_file(path, model_to_json(m).dump(2) + "\n");
}

}  // namespace rcsurf
