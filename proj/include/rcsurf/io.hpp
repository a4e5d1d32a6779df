#pragma once

#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "rcsurf/corner.hpp"
#include "rcsurf/diagnostics.hpp"
#include "rcsurf/fit.hpp"
#include "rcsurf/multipatch.hpp"
#include "rcsurf/surface.hpp"

namespace rcsurf {

inline constexpr int kSchemaVersion = 1;

nlohmann::json surface_to_json(const TensorSurface& s);
TensorSurface surface_from_json(const nlohmann::json& j);

nlohmann::json model_to_json(const MultipatchModel& m);
MultipatchModel model_from_json(const nlohmann::json& j);

TensorSurface load_surface(const std::string& path);
void save_surface(const TensorSurface& s, const std::string& path);
MultipatchModel load_model(const std::string& path);
void save_model(const MultipatchModel& m, const std::string& path);

/// Fit configuration: space parameters plus optional corner constraints.
struct FitConfig {
  int degree = 3;
  int level = 3;
  std::string scheme = "standard";  // "standard" | "rcc"
  bool two_step = true;
  int quad_points = 0;
  std::vector<CornerConstraintSpec> corners;
};

FitConfig fit_config_from_json(const nlohmann::json& j);
nlohmann::json fit_config_to_json(const FitConfig& c);
FitConfig load_fit_config(const std::string& path);

nlohmann::json frame_to_json(const CornerFrame& f);
nlohmann::json classification_to_json(const CornerClassification& c);
nlohmann::json spline_report_to_json(const SplineCornerReport& r);
nlohmann::json probe_to_json(const ProbeSeries& p);
nlohmann::json fit_report_to_json(const FitReport& r);
nlohmann::json injectivity_to_json(const InjectivityReport& r);
nlohmann::json watertightness_to_json(const WatertightnessReport& r);
nlohmann::json repair_plan_to_json(const RepairPlan& p);

/// Shortest decimal round-trip formatting; keeps CSV output byte-stable.
std::string fmt_double(double x);

void write_field_csv(const std::vector<FieldSample>& field, const std::string& path);

std::string read_text_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& content);
nlohmann::json parse_json_file(const std::string& path);

}  // namespace rcsurf
