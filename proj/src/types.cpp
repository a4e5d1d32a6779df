#include "rcsurf/types.hpp"

namespace rcsurf {

std::string corner_name(Corner c) {
  switch (c) {
    case Corner::U0V0: return "u0v0";
    case Corner::U1V0: return "u1v0";
    case Corner::U0V1: return "u0v1";
    case Corner::U1V1: return "u1v1";
  }
  throw std::logic_error("corner_name: invalid corner");
}

Corner parse_corner(const std::string& name) {
  if (name == "u0v0") return Corner::U0V0;
  if (name == "u1v0") return Corner::U1V0;
  if (name == "u0v1") return Corner::U0V1;
  if (name == "u1v1") return Corner::U1V1;
  throw std::invalid_argument("unknown corner '" + name +
                              "' (expected u0v0|u1v0|u0v1|u1v1)");
}

std::string edge_name(PatchEdge e) {
  switch (e) {
    case PatchEdge::U0: return "u0";
    case PatchEdge::U1: return "u1";
    case PatchEdge::V0: return "v0";
    case PatchEdge::V1: return "v1";
  }
  throw std::logic_error("edge_name: invalid edge");
}

PatchEdge parse_edge(const std::string& name) {
  if (name == "u0") return PatchEdge::U0;
  if (name == "u1") return PatchEdge::U1;
  if (name == "v0") return PatchEdge::V0;
  if (name == "v1") return PatchEdge::V1;
  throw std::invalid_argument("unknown edge '" + name +
                              "' (expected u0|u1|v0|v1)");
}

std::pair<Corner, Corner> edge_corners(PatchEdge e) {
  switch (e) {
    case PatchEdge::U0: return {Corner::U0V0, Corner::U0V1};
    case PatchEdge::U1: return {Corner::U1V0, Corner::U1V1};
    case PatchEdge::V0: return {Corner::U0V0, Corner::U1V0};
    case PatchEdge::V1: return {Corner::U0V1, Corner::U1V1};
  }
  throw std::logic_error("edge_corners: invalid edge");
}

std::pair<PatchEdge, PatchEdge> corner_edges(Corner c) {
  switch (c) {
    case Corner::U0V0: return {PatchEdge::U0, PatchEdge::V0};
    case Corner::U1V0: return {PatchEdge::U1, PatchEdge::V0};
    case Corner::U0V1: return {PatchEdge::U0, PatchEdge::V1};
    case Corner::U1V1: return {PatchEdge::U1, PatchEdge::V1};
  }
  throw std::logic_error("corner_edges: invalid corner");
}

}  // namespace rcsurf
