#pragma once

#include <Eigen/Dense>

#include <array>
#include <string>
#include <string_view>
#include <vector>

namespace platonicon {

using Vec3 = Eigen::Vector3d;

enum class SolidKind { Tetrahedron, Cube, Octahedron, Dodecahedron, Icosahedron };

inline constexpr std::array<SolidKind, 5> kAllSolids = {
    SolidKind::Tetrahedron, SolidKind::Cube, SolidKind::Octahedron,
    SolidKind::Dodecahedron, SolidKind::Icosahedron};

std::string_view solid_name(SolidKind kind);
SolidKind solid_from_name(std::string_view name);  // throws std::invalid_argument listing valid names
SolidKind dual_of(SolidKind kind);

// Unit circumradius, centroid at the origin. Face cycles are counter-clockwise
// seen from outside and start at their lowest vertex id; faces are sorted
// lexicographically and edges are sorted (lo, hi) pairs.
struct PlatonicSolid {
  SolidKind kind;
  std::string name;
  std::vector<Vec3> vertices;
  std::vector<std::vector<int>> faces;
  std::vector<std::array<int, 2>> edges;
  std::vector<std::array<int, 2>> edge_faces;  // the two faces at each edge, ascending
  Vec3 centroid = Vec3::Zero();
  std::string dual_name;
  double dihedral = 0;
  double dual_dihedral = 0;

  int face_count() const { return static_cast<int>(faces.size()); }
  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int edge_count() const { return static_cast<int>(edges.size()); }
  int face_sides() const { return static_cast<int>(faces.front().size()); }

  // -1 when a and b are not adjacent.
  int edge_index(int a, int b) const { return edge_lookup_[a * vertex_count() + b]; }
  bool adjacent(int a, int b) const { return edge_index(a, b) >= 0; }
  const std::vector<int>& vertex_neighbors(int v) const { return neighbors_[v]; }
  const std::vector<int>& vertex_faces(int v) const { return vertex_faces_[v]; }

  Vec3 face_normal(int f) const;  // unit, outward
  double face_offset(int f) const { return face_normal(f).dot(vertices[faces[f][0]]); }
  Vec3 face_center(int f) const;
  // Position of vertex v within face f, or -1.
  int position_in_face(int f, int v) const;

  friend PlatonicSolid build_solid(SolidKind kind);

 private:
  std::vector<int> edge_lookup_;
  std::vector<std::vector<int>> neighbors_;
  std::vector<std::vector<int>> vertex_faces_;
};

PlatonicSolid build_solid(SolidKind kind);
PlatonicSolid build_solid(std::string_view name);

struct SymmetryOp {
  std::vector<int> vertex_perm;  // image of each vertex
  std::vector<int> face_perm;
  std::vector<int> edge_perm;
  bool proper = true;

  Eigen::Matrix3d matrix(const PlatonicSolid& solid) const;
};

struct SymmetryGroup {
  SolidKind solid;
  bool proper_only = false;
  std::vector<SymmetryOp> ops;  // sorted by vertex_perm, identity first

  std::size_t order() const { return ops.size(); }
};

SymmetryGroup symmetry_group(const PlatonicSolid& solid, bool proper_only);

// (g o h)(x) = g(h(x)).
SymmetryOp compose(const SymmetryOp& g, const SymmetryOp& h);

double dual_dihedral(const PlatonicSolid& solid);

// Cone half-angle alpha = dual_dihedral / 2.
inline double cone_half_angle(const PlatonicSolid& solid) { return 0.5 * solid.dual_dihedral; }

double solid_volume(const PlatonicSolid& solid);
double solid_surface_area(const PlatonicSolid& solid);

// JSON dump of the tables, stable key order.
std::string solid_to_json(const PlatonicSolid& solid);

}  // namespace platonicon
