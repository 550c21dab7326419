#pragma once

#include "platonicon/cone.hpp"
#include "platonicon/config.hpp"

#include <array>
#include <string>
#include <vector>

namespace platonicon {

struct Mesh {
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;  // counter-clockwise seen from outside
  std::vector<int> tags;                      // patch id per triangle
  int resolution = 0;                         // radial samples per half edge
  int ridge_segments = 0;
};

inline constexpr int kMinResolution = 3;

// Patch-parametric tessellation. Points on solid edges, ridges and triple
// points are created once and shared, so the result is watertight by
// construction. Throws std::invalid_argument when resolution < 3.
Mesh build_mesh(const PlatonicSolid& solid, const Configuration& config, int resolution);

struct MeshTopology {
  int boundary_edges = 0;
  int nonmanifold_edges = 0;
  int orientation_conflicts = 0;
  int euler = 0;
  bool closed_manifold() const { return boundary_edges == 0 && nonmanifold_edges == 0 && orientation_conflicts == 0; }
};

MeshTopology analyze_topology(const Mesh& mesh);
double signed_volume(const Mesh& mesh);
double surface_area(const Mesh& mesh);

enum class MeshFormat { StlBinary, StlAscii, Obj };
MeshFormat parse_mesh_format(const std::string& name);  // stl, stl-ascii, obj

// Document bytes; scale multiplies every coordinate (1 = circumradius units).
std::string export_mesh(const Mesh& mesh, MeshFormat format, double scale = 1.0);
// Throws std::runtime_error naming the path when it cannot be written.
void write_file(const std::string& path, const std::string& bytes);
Mesh import_obj(const std::string& text);

struct MetricsReport {
  std::string solid;
  std::string class_id;
  int resolution = 0;
  double area = 0;
  double volume = 0;
  double solid_area = 0;
  double solid_volume = 0;
  double sphere_area = 0;
  double sphere_volume = 0;
  double volume_over_solid = 0;
  double volume_over_sphere = 0;
  double area_over_solid = 0;
  double area_over_sphere = 0;
  double area_to_volume = 0;
};

// Throws std::invalid_argument for meshes that are not closed manifolds.
MetricsReport metrics(const Mesh& mesh, const PlatonicSolid& solid, const std::string& class_id = "");
std::string metrics_json(const MetricsReport& m);
std::string metrics_csv_header();
std::string metrics_csv_row(const MetricsReport& m);

struct SurfaceCheck {
  double max_radius = 0;              // largest vertex norm
  double max_vertex_residual = 0;     // vertices off their cone
  double max_centroid_deviation = 0;  // triangle centroids off their cone
  double worst_deviation_ratio = 0;   // deviation / (2 * chord error bound)
  double convexity_violation = 0;     // largest vertex height above an analytic tangent plane
};

SurfaceCheck check_surface(const Mesh& mesh, const PlatonicSolid& solid, const Configuration& config);

}  // namespace platonicon
