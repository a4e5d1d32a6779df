#pragma once

#include <Eigen/Dense>

#include <stdexcept>
#include <string>

namespace rcsurf {

using Vec3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;
using Mat2 = Eigen::Matrix2d;

/// Domain corner of a tensor-product patch. U0V0 is (u_min, v_min), etc.
enum class Corner { U0V0, U1V0, U0V1, U1V1 };

/// Boundary edge of a tensor-product patch. U0 is the curve u = u_min
/// (parametrized by v), V0 the curve v = v_min (parametrized by u).
enum class PatchEdge { U0, U1, V0, V1 };

constexpr bool corner_u_reversed(Corner c) {
  return c == Corner::U1V0 || c == Corner::U1V1;
}
constexpr bool corner_v_reversed(Corner c) {
  return c == Corner::U0V1 || c == Corner::U1V1;
}

std::string corner_name(Corner c);
Corner parse_corner(const std::string& name);

std::string edge_name(PatchEdge e);
PatchEdge parse_edge(const std::string& name);

/// The two corners incident to an edge / the two edges through a corner.
std::pair<Corner, Corner> edge_corners(PatchEdge e);
std::pair<PatchEdge, PatchEdge> corner_edges(Corner c);

/// Thrown when a surface normal is requested at a point where the
/// first partials are linearly dependent.
class DegeneratePointError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown by the JSON readers; carries the offending field in the message.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace rcsurf
