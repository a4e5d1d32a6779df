#include "rcsurf/multipatch.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rcsurf/diagnostics.hpp"

namespace rcsurf {

std::vector<Vec3> edge_control_points(const TensorSurface& s, PatchEdge e) {
  std::vector<Vec3> out;
  switch (e) {
    case PatchEdge::U0:
      for (int k = 0; k < s.n2(); ++k) out.push_back(s.cp(0, k));
      break;
    case PatchEdge::U1:
      for (int k = 0; k < s.n2(); ++k) out.push_back(s.cp(s.n1() - 1, k));
      break;
    case PatchEdge::V0:
      for (int j = 0; j < s.n1(); ++j) out.push_back(s.cp(j, 0));
      break;
    case PatchEdge::V1:
      for (int j = 0; j < s.n1(); ++j) out.push_back(s.cp(j, s.n2() - 1));
      break;
  }
  return out;
}

namespace {

const KnotVector& edge_knots(const TensorSurface& s, PatchEdge e) {
  return (e == PatchEdge::U0 || e == PatchEdge::U1) ? s.kv() : s.ku();
}

void check_edge_compatibility(const MultipatchModel& m, const Adjacency& adj) {
  if (adj.a < 0 || adj.a >= static_cast<int>(m.patches.size()) || adj.b < 0 ||
      adj.b >= static_cast<int>(m.patches.size()))
    throw std::invalid_argument("adjacency: patch index out of range");
  const KnotVector& ka = edge_knots(m.patches[adj.a], adj.edge_a);
  KnotVector kb = edge_knots(m.patches[adj.b], adj.edge_b);
  if (adj.reversed) kb = kb.reversed();
  if (ka.degree() != kb.degree())
    throw std::invalid_argument("edge incompatibility: degrees differ across a shared edge");
  if (ka.num_basis() != kb.num_basis())
    throw std::invalid_argument(
        "edge incompatibility: control counts differ across a shared edge");
  const double span = std::max(std::abs(ka.end() - ka.start()), 1e-300);
  for (std::size_t i = 0; i < ka.knots().size(); ++i) {
    const double da = ka.knots()[i] - ka.start();
    const double db = kb.knots()[i] - kb.start();
    const double sb = std::max(std::abs(kb.end() - kb.start()), 1e-300);
    if (std::abs(da / span - db / sb) > 1e-12)
      throw std::invalid_argument("edge incompatibility: knots differ across a shared edge");
  }
}

}  // namespace

WatertightnessReport watertightness_check(const MultipatchModel& m, double tol) {
  WatertightnessReport rep;
  for (const Adjacency& adj : m.adjacency) {
    check_edge_compatibility(m, adj);
    std::vector<Vec3> ea = edge_control_points(m.patches[adj.a], adj.edge_a);
    std::vector<Vec3> eb = edge_control_points(m.patches[adj.b], adj.edge_b);
    if (adj.reversed) std::reverse(eb.begin(), eb.end());
    double gap = 0.0;
    for (std::size_t i = 0; i < ea.size(); ++i)
      gap = std::max(gap, (ea[i] - eb[i]).norm());
    rep.gaps.push_back(gap);
    rep.max_gap = std::max(rep.max_gap, gap);
  }
  rep.pass = rep.max_gap <= tol;
  return rep;
}

RepairPlan detect_rounded_corners(const MultipatchModel& m, double antiparallel_tol) {
  RepairPlan plan;
  CornerTolerances tol;
  tol.antiparallel_angle = antiparallel_tol;
  for (int pi = 0; pi < static_cast<int>(m.patches.size()); ++pi) {
    const TensorSurface& s = m.patches[pi];
    if (s.ku().degree() < 2 || s.kv().degree() < 2) continue;
    for (Corner c : {Corner::U0V0, Corner::U1V0, Corner::U0V1, Corner::U1V1}) {
      const CornerJet jet = corner_jet(s, c);
      const CornerClassification cls = classify_corner(jet, tol);
      if (cls.kind == CornerKind::Regular || cls.kind == CornerKind::NotAntiparallel)
        continue;
      CornerCandidate cand{pi, c, cls, {}};
      const auto [e1, e2] = corner_edges(c);
      for (int ai = 0; ai < static_cast<int>(m.adjacency.size()); ++ai) {
        const Adjacency& adj = m.adjacency[ai];
        if ((adj.a == pi && (adj.edge_a == e1 || adj.edge_a == e2)) ||
            (adj.b == pi && (adj.edge_b == e1 || adj.edge_b == e2)))
          cand.adjacency_indices.push_back(ai);
      }
      plan.candidates.push_back(std::move(cand));
    }
  }
  return plan;
}

bool auto_repairable(CornerKind kind) {
  return kind == CornerKind::Rounded || kind == CornerKind::Degenerate ||
         kind == CornerKind::DiscontinuousIndependent;
}

namespace {

Vec3 sample_normal_near_corner(const TensorSurface& s, Corner c, double offset) {
  const TensorSurface local = s.corner_local(c);
  const double u = local.ku().start() + offset * (local.ku().end() - local.ku().start());
  const double v = local.kv().start() + offset * (local.kv().end() - local.kv().start());
  return normal_vector(local, u, v);
}

// corner of patch `other` that coincides geometrically with the given corner
// point, if any
std::optional<Corner> matching_corner(const TensorSurface& other, const Vec3& point,
                                      double tol) {
  for (Corner c : {Corner::U0V0, Corner::U1V0, Corner::U0V1, Corner::U1V1}) {
    const CornerLayout L = corner_layout(other, c);
    if ((other.cp(L.p00[0], L.p00[1]) - point).norm() <= tol) return c;
  }
  return std::nullopt;
}

}  // namespace

Vec3 default_corner_normal(const MultipatchModel& m, const CornerCandidate& cand,
                           double offset) {
  const TensorSurface& s = m.patches[cand.patch];
  if (cand.classification.kind == CornerKind::Rounded && cand.classification.frame)
    return cand.classification.frame->n;

  const CornerLayout L = corner_layout(s, cand.corner);
  const Vec3 corner_point = s.cp(L.p00[0], L.p00[1]);
  const double match_tol = 1e-9 * std::max(s.net_diameter(), 1.0);

  Vec3 sum = sample_normal_near_corner(s, cand.corner, offset);
  const Vec3 reference = sum;
  for (int ai : cand.adjacency_indices) {
    const Adjacency& adj = m.adjacency[ai];
    const int other = (adj.a == cand.patch) ? adj.b : adj.a;
    if (other == cand.patch) continue;
    const auto oc = matching_corner(m.patches[other], corner_point, match_tol);
    if (!oc) continue;
    Vec3 nu = sample_normal_near_corner(m.patches[other], *oc, offset);
    if (nu.dot(reference) < 0.0) nu = -nu;  // align orientations before averaging
    sum += nu;
  }
  if (sum.norm() < 1e-12)
    throw std::runtime_error("default_corner_normal: sampled normals cancel");
  return sum.normalized();
}

MultipatchModel repair_corner(const MultipatchModel& m, const CornerCandidate& cand,
                              const RepairConfig& cfg) {
  if (cand.patch < 0 || cand.patch >= static_cast<int>(m.patches.size()))
    throw std::invalid_argument("repair_corner: patch index out of range");
  const TensorSurface original = m.patches[cand.patch];

  CornerConstraintSpec spec;
  spec.id = cand.corner;
  spec.alpha1 = cfg.alpha1;
  spec.alpha2 = cfg.alpha2;
  spec.normal = cfg.normal_override
                    ? *cfg.normal_override
                    : default_corner_normal(m, cand, cfg.normal_sample_offset);

  FitProblem problem{original.ku(),
                     original.kv(),
                     [&original](double u, double v) { return original.eval(u, v); },
                     {spec},
                     cfg.quad_points,
                     false};
  const FitReport fit = fit_surface(problem);

  MultipatchModel out = m;
  out.patches[cand.patch] = fit.surface;

  // restore watertightness: the refit moves control points of the candidate,
  // so its side of every shared edge is copied onto the neighbours
  for (const Adjacency& adj : out.adjacency) {
    if (adj.a != cand.patch && adj.b != cand.patch) continue;
    if (adj.a == cand.patch && adj.b == cand.patch) continue;
    check_edge_compatibility(out, adj);
    const bool cand_is_a = (adj.a == cand.patch);
    const int other = cand_is_a ? adj.b : adj.a;
    const PatchEdge ce = cand_is_a ? adj.edge_a : adj.edge_b;
    const PatchEdge oe = cand_is_a ? adj.edge_b : adj.edge_a;
    std::vector<Vec3> edge = edge_control_points(out.patches[cand.patch], ce);
    if (adj.reversed) std::reverse(edge.begin(), edge.end());
    TensorSurface& tgt = out.patches[other];
    for (int i = 0; i < static_cast<int>(edge.size()); ++i) {
      switch (oe) {
        case PatchEdge::U0: tgt.cp(0, i) = edge[i]; break;
        case PatchEdge::U1: tgt.cp(tgt.n1() - 1, i) = edge[i]; break;
        case PatchEdge::V0: tgt.cp(i, 0) = edge[i]; break;
        case PatchEdge::V1: tgt.cp(i, tgt.n2() - 1) = edge[i]; break;
      }
    }
  }
  return out;
}

}  // namespace rcsurf
