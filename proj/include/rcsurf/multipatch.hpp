#pragma once

#include <optional>
#include <vector>

#include "rcsurf/corner.hpp"
#include "rcsurf/fit.hpp"
#include "rcsurf/surface.hpp"

namespace rcsurf {

/// Shared edge between two patches. The edge control polygons must agree
/// pointwise; `reversed` relates the parameter directions of the two sides.
struct Adjacency {
  int a = 0;
  PatchEdge edge_a = PatchEdge::U0;
  int b = 0;
  PatchEdge edge_b = PatchEdge::U0;
  bool reversed = false;
};

/// Watertight multipatch model: patches plus shared-edge records.
struct MultipatchModel {
  std::vector<TensorSurface> patches;
  std::vector<Adjacency> adjacency;
};

/// Control points of a patch edge, ordered along the edge parameter.
std::vector<Vec3> edge_control_points(const TensorSurface& s, PatchEdge e);

struct WatertightnessReport {
  std::vector<double> gaps;  // max control-point gap per adjacency record
  double max_gap = 0;
  bool pass = true;
};

/// Largest control-point gap per adjacency. Throws when the two sides of an
/// edge disagree in degree, knots, or control count.
WatertightnessReport watertightness_check(const MultipatchModel& m, double tol);

struct CornerCandidate {
  int patch = 0;
  Corner corner = Corner::U0V0;
  CornerClassification classification;
  std::vector<int> adjacency_indices;  // records whose edge runs through the corner
};

struct RepairPlan {
  std::vector<CornerCandidate> candidates;
};

/// Lists every patch corner whose first partials are antiparallel within
/// `antiparallel_tol`, with its classification at that gate and the
/// adjacency records touching the corner.
RepairPlan detect_rounded_corners(const MultipatchModel& m, double antiparallel_tol);

struct RepairConfig {
  double alpha1 = 0.5;
  double alpha2 = 0.5;
  std::optional<Vec3> normal_override;
  int quad_points = 0;
  double normal_sample_offset = 1e-3;  // parameter offset for the sampled default normal
};

/// Default prescribed normal for a candidate corner: the exact limit normal
/// when the corner already classifies Rounded, otherwise the normalized
/// average of nu sampled just inside the corner on the candidate and on the
/// corner-sharing adjacent patches.
Vec3 default_corner_normal(const MultipatchModel& m, const CornerCandidate& cand,
                           double offset = 1e-3);

/// RCC refit of the candidate patch against its own geometry, then copy of
/// the candidate's edge control points onto every adjacent patch so the
/// model stays watertight.
MultipatchModel repair_corner(const MultipatchModel& m, const CornerCandidate& cand,
                              const RepairConfig& cfg = {});

/// True for classifications the pipeline repairs automatically; opposite-
/// sided corners are only reported.
bool auto_repairable(CornerKind kind);

}  // namespace rcsurf
