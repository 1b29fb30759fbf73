// Small constrained Delaunay triangulator with Ruppert-style refinement.
// Input is a planar straight-line graph of closed constraint loops plus
// per-region seeds; output is a conforming triangulation with region tags.
#pragma once

#include <Eigen/Dense>
#include <array>
#include <vector>

namespace cablefem::cdt {

struct RegionSpec {
  Eigen::Vector2d seed = Eigen::Vector2d::Zero();
  int tag = 0;             // copied to every triangle of the region
  double max_area = 0.0;   // 0 disables the area criterion
  bool refine = false;     // allow Steiner insertion inside this region
};

struct Input {
  std::vector<Eigen::Vector2d> points;
  std::vector<std::array<int, 2>> segments;  // constrained edges
  std::vector<char> segment_splittable;      // parallel to segments; 1 = may split
  std::vector<RegionSpec> regions;
  double radius_edge_bound = 1.3;  // quality bound for refined regions
  int max_points = 2000000;
};

struct Output {
  std::vector<Eigen::Vector2d> points;            // input points first, Steiner after
  std::vector<std::array<int, 3>> triangles;      // ccw
  std::vector<int> triangle_tag;                  // region tag; untagged space removed
};

// Throws std::runtime_error on malformed input or when max_points is hit
// (the message carries the point count).
Output triangulate(const Input& input);

// Robust-enough orientation predicate: > 0 when (a,b,c) is counterclockwise.
double orient2d(const Eigen::Vector2d& a, const Eigen::Vector2d& b, const Eigen::Vector2d& c);

}  // namespace cablefem::cdt
