#pragma once

#include "platonicon/config.hpp"
#include "platonicon/solid.hpp"

#include <array>
#include <memory>
#include <mutex>
#include <optional>
#include <vector>

namespace platonicon {

// Right circular cone with apex on a solid vertex and axis through the
// centroid. Azimuth 0 points along the edge to the lowest-id neighbour and
// (u1, u2, axis) is right-handed.
struct Cone {
  int apex_id = -1;
  Vec3 apex;
  Vec3 axis;  // unit, apex -> centroid
  double half_angle = 0;
  Vec3 u1, u2;

  Vec3 direction(double azimuth) const;
  Vec3 point(double azimuth, double r) const { return apex + r * direction(azimuth); }
  // Unit normal of the tangent plane along the generator, pointing away from the axis.
  Vec3 outward_normal(double azimuth) const;
  double azimuth_of(const Vec3& p) const;  // in [0, 2pi)
  // |p-a| cos(alpha) - (p-a).axis: negative inside the solid cone, zero on its surface.
  double residual(const Vec3& p) const;
};

Cone cone_for_vertex(const PlatonicSolid& solid, int vertex);

// Pentagon module meeting point of the three ridges: the line through the
// centroid common to the three bisector planes, cut by cone x above the face.
Vec3 pentagon_triple_point(const PlatonicSolid& solid, int face, int x, int y, int z);

// Crease of two equal cones of one module. It lies in the bisector plane of the
// two apices, which passes through the centroid. In the plane frame (e1, e2)
// the conic is A s^2 + B s t + C t^2 + D s + E t + F = 0.
class RidgeConic {
 public:
  int apex_a = -1;
  int apex_b = -1;
  int face = -1;
  Vec3 plane_normal;  // unit (b - a) / |b - a|
  Vec3 e1, e2;
  std::array<double, 6> coeffs{};
  Vec3 arc_start, arc_end;

  RidgeConic(const Cone& a, const Cone& b, int face, const Vec3& start, const Vec3& end);

  double length() const { return table().cum.back(); }
  // Normalised arc length u in [0, 1]; the endpoints are returned exactly.
  Vec3 point_at(double u) const;
  // segments + 1 points evenly spaced in arc length.
  std::vector<Vec3> sample(int segments) const;
  // Point at a given azimuth of cone a.
  Vec3 point_at_azimuth(double az) const;
  double conic_residual(const Vec3& p) const;
  Eigen::Vector2d plane_coords(const Vec3& p) const { return {p.dot(e1), p.dot(e2)}; }
  const Cone& cone_a() const { return a_; }
  const Cone& cone_b() const { return b_; }
  double azimuth_start() const { return az0_; }
  double azimuth_end() const { return az0_ + sweep_; }

 private:
  struct ArcTable {
    std::once_flag once;
    std::vector<double> az;   // adaptive samples of cone-a azimuth
    std::vector<double> cum;  // cumulative chord length
  };
  const ArcTable& table() const;

  Cone a_, b_;
  double az0_ = 0, sweep_ = 0;
  std::shared_ptr<ArcTable> table_;  // built on first use, shared by copies
};

// Triangle: arc from the third vertex to the apex-edge midpoint. Square: between
// the two non-apex vertices. Pentagon: needs the module's third apex and ends at
// the triple point. Throws std::invalid_argument on bad apex pairs.
RidgeConic ridge_conic(const PlatonicSolid& solid, const Cone& a, const Cone& b, int face,
                       std::optional<int> third_apex = std::nullopt);

// Exposed piece of one cone inside a module. The azimuth interval runs between
// the two face edges at the apex; each bounding generator follows a solid edge,
// either to the far vertex (full) or to the midpoint when both ends are apices.
struct PatchGeometry {
  int apex_id = -1;
  int cone_index = -1;
  double az_begin = 0, az_end = 0;  // az_end > az_begin
  int edge_begin = -1, edge_end = -1;
  int vertex_begin = -1, vertex_end = -1;  // far vertex of the bounding edge
  bool begin_full = true, end_full = true;
  Vec3 point_begin, point_end;  // far ends of the bounding generators
  std::vector<double> breakpoints;  // interior azimuths where the active ridge changes
  struct Piece {
    int ridge;
    bool reversed;
  };
  std::vector<Piece> boundary;  // ridges in order of increasing azimuth
};

struct Module {
  int face = -1;
  int orientation = -1;
  std::vector<int> apex_set;
  std::vector<Cone> cones;
  std::vector<RidgeConic> ridges;
  std::vector<PatchGeometry> patches;
  Vec3 face_normal;
  double face_offset = 0;
  std::optional<Vec3> triple_point;

  double radial_bound(int patch, double azimuth) const;
  Vec3 boundary_point(int patch, double azimuth) const;
  double patch_area(int patch) const;
};

Module build_module(const PlatonicSolid& solid, int face, int orientation);
std::vector<Module> build_modules(const PlatonicSolid& solid, const Configuration& config);

struct PointClass {
  enum Kind { Interior, OnPatch, OnRidge, OnFacePlane, Exterior };
  Kind kind = Exterior;
  int id = -1;  // apex vertex id for OnPatch, ridge index for OnRidge
};

const char* to_string(PointClass::Kind k);

// Total classification with a 1e-9 band. Ridge beats patch beats face plane.
PointClass classify_point(const Module& module, const Vec3& p, double tolerance = 1e-9);

}  // namespace platonicon
