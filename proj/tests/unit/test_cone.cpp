#include "platonicon/cone.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>
#include <set>

using namespace platonicon;

namespace {

double angle(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

// Second intersection of a generator of cone `a` with cone `b`, by grid scan and bisection.
std::optional<Vec3> generator_hit(const Cone& a, const Cone& b, double az) {
  const Vec3 d = a.direction(az);
  auto f = [&](double r) { return b.residual(a.apex + r * d); };
  double r0 = 1e-4, f0 = f(r0);
  for (int i = 1; i <= 4000; ++i) {
    const double r1 = 1e-4 + 2.0 * i / 4000, f1 = f(r1);
    if ((f0 < 0) != (f1 < 0)) {
      double lo = r0, hi = r1;
      for (int it = 0; it < 200; ++it) {
        const double mid = 0.5 * (lo + hi);
        ((f(mid) < 0) == (f0 < 0) ? lo : hi) = mid;
      }
      return a.apex + 0.5 * (lo + hi) * d;
    }
    r0 = r1;
    f0 = f1;
  }
  return std::nullopt;
}

Module module_with_apices(const PlatonicSolid& s, std::set<int> apices, std::optional<int> face = std::nullopt) {
  for (int f = 0; f < s.face_count(); ++f) {
    if (face && *face != f) continue;
    for (int o = 0; o < orientation_count(s.face_sides()); ++o) {
      const auto a = apex_set(s, f, o);
      if (std::set<int>(a.begin(), a.end()) == apices) return build_module(s, f, o);
    }
  }
  throw std::logic_error("no module with those apices");
}

}  // namespace

TEST(Cone, EdgesAreGeneratorsAtHalfDualDihedral) {
  for (auto k : kAllSolids) {
    const auto s = build_solid(k);
    const double alpha = cone_half_angle(s);
    for (int v = 0; v < s.vertex_count(); ++v) {
      const Cone c = cone_for_vertex(s, v);
      EXPECT_NEAR((c.axis + s.vertices[v]).norm(), 0, 1e-12);
      EXPECT_NEAR(c.half_angle, alpha, 1e-15);
      EXPECT_NEAR(c.u1.dot(c.axis), 0, 1e-12);
      EXPECT_NEAR(c.u1.cross(c.u2).dot(c.axis), 1, 1e-12);
      for (int w : s.vertex_neighbors(v)) {
        EXPECT_NEAR(angle(s.vertices[w] - s.vertices[v], c.axis), alpha, 1e-9);
        EXPECT_NEAR(c.residual(s.vertices[w]), 0, 1e-12);
        const Vec3 p = c.point(c.azimuth_of(s.vertices[w]), (s.vertices[w] - s.vertices[v]).norm());
        EXPECT_NEAR((p - s.vertices[w]).norm(), 0, 1e-12);
      }
      EXPECT_LT(c.residual(s.centroid), 0);
      EXPECT_GT(c.residual(2 * s.vertices[v]), 0);
    }
  }
}

TEST(Cone, SupportDistanceIsSinAlpha) {
  for (auto k : kAllSolids) {
    const auto s = build_solid(k);
    const Cone c = cone_for_vertex(s, 0);
    for (int i = 0; i < 64; ++i) {
      const double az = 2 * std::numbers::pi * i / 64;
      const Vec3 n = c.outward_normal(az);
      EXPECT_NEAR(n.norm(), 1, 1e-12);
      EXPECT_NEAR(n.dot(c.direction(az)), 0, 1e-12);
      EXPECT_NEAR(n.dot(c.apex), std::sin(c.half_angle), 1e-12);
      EXPECT_NEAR(std::fmod(c.azimuth_of(c.point(az, 0.7)) - az + 4 * std::numbers::pi, 2 * std::numbers::pi), 0, 1e-9);
    }
  }
}

TEST(Ridge, TetrahedronEllipse) {
  const auto s = build_solid(SolidKind::Tetrahedron);
  for (int third : {2, 3}) {
    std::set<int> face_set = {0, 1, third};
    int face = -1;
    for (int f = 0; f < 4; ++f)
      if (std::set<int>(s.faces[f].begin(), s.faces[f].end()) == face_set) face = f;
    const Module m = module_with_apices(s, {0, 1}, face);
    ASSERT_EQ(m.ridges.size(), 1u);
    const auto& r = m.ridges[0];
    // Coordinates scaled by sqrt(3): vertices at (+-1, +-1, +-1).
    auto conic = [](const Vec3& p) {
      const Vec3 q = p * std::sqrt(3.0);
      return std::make_pair(q.y() + q.z(), (q.x() + 1) * (q.x() + 1) + 4 * q.y() * q.y() - 4);
    };
    for (const auto& p : r.sample(400)) {
      const auto [plane, ell] = conic(p);
      EXPECT_NEAR(plane, 0, 1e-9);
      EXPECT_NEAR(ell, 0, 1e-9);
      EXPECT_NEAR(r.conic_residual(p), 0, 1e-9);
    }
    const std::set<std::pair<long, long>> ends = {
        {std::lround(1e6 * (r.arc_start - s.vertices[third]).norm()), std::lround(1e6 * (r.arc_end - 0.5 * (s.vertices[0] + s.vertices[1])).norm())},
        {std::lround(1e6 * (r.arc_end - s.vertices[third]).norm()), std::lround(1e6 * (r.arc_start - 0.5 * (s.vertices[0] + s.vertices[1])).norm())}};
    EXPECT_TRUE(ends.count({0, 0})) << "arc must run between the third vertex and the apex-edge midpoint";
    // Dense sampling of the two cone surfaces.
    int hits = 0;
    for (int i = 1; i < 2000; ++i) {
      const double az = r.azimuth_start() + (r.azimuth_end() - r.azimuth_start()) * i / 2000;
      const auto p = generator_hit(r.cone_a(), r.cone_b(), az);
      if (!p) continue;
      ++hits;
      const auto [plane, ell] = conic(*p);
      EXPECT_NEAR(plane, 0, 1e-9);
      EXPECT_NEAR(ell, 0, 1e-9);
      EXPECT_NEAR((r.point_at_azimuth(az) - *p).norm(), 0, 1e-9);
    }
    EXPECT_GT(hits, 1900);
  }
}

TEST(Ridge, OctahedronParabola) {
  const auto s = build_solid(SolidKind::Octahedron);
  // +x is vertex 0, +y vertex 2; faces with +z (4) and -z (5).
  for (int third : {4, 5}) {
    std::set<int> face_set = {0, 2, third};
    int face = -1;
    for (int f = 0; f < 8; ++f)
      if (std::set<int>(s.faces[f].begin(), s.faces[f].end()) == face_set) face = f;
    const Module m = module_with_apices(s, {0, 2}, face);
    const auto& r = m.ridges.at(0);
    for (const auto& p : r.sample(400)) {
      EXPECT_NEAR(p.x() - p.y(), 0, 1e-9);
      EXPECT_NEAR(p.z() * p.z() - (1 - 2 * p.x()), 0, 1e-9);
    }
    int hits = 0;
    for (int i = 1; i < 2000; ++i) {
      const double az = r.azimuth_start() + (r.azimuth_end() - r.azimuth_start()) * i / 2000;
      const auto p = generator_hit(r.cone_a(), r.cone_b(), az);
      if (!p) continue;
      ++hits;
      EXPECT_NEAR(p->x() - p->y(), 0, 1e-9);
      EXPECT_NEAR(p->z() * p->z() - (1 - 2 * p->x()), 0, 1e-9);
    }
    EXPECT_GT(hits, 1900);
  }
}

TEST(Ridge, AllModulesSampledAgainstBothCones) {
  for (auto k : kAllSolids) {
    const auto s = build_solid(k);
    for (int o = 0; o < orientation_count(s.face_sides()); ++o) {
      const Module m = build_module(s, 0, o);
      for (const auto& r : m.ridges) {
        EXPECT_GT(r.length(), 0);
        EXPECT_NEAR((r.point_at(0) - r.arc_start).norm(), 0, 0);
        EXPECT_NEAR((r.point_at(1) - r.arc_end).norm(), 0, 0);
        const auto pts = r.sample(2000);
        double poly = 0;
        for (std::size_t i = 1; i < pts.size(); ++i) poly += (pts[i] - pts[i - 1]).norm();
        EXPECT_NEAR(poly, r.length(), 1e-6 * r.length());
        EXPECT_LE(poly, r.length() + 1e-12);
        for (const auto& p : pts) {
          EXPECT_NEAR(r.cone_a().residual(p), 0, 1e-9);
          EXPECT_NEAR(r.cone_b().residual(p), 0, 1e-9);
          EXPECT_NEAR(r.plane_normal.dot(p), 0, 1e-9);
          EXPECT_GE(m.face_normal.dot(p) - m.face_offset, -1e-12);
          EXPECT_LE(p.norm(), 1 + 1e-12);
        }
      }
    }
  }
}

TEST(Ridge, PentagonRidgesConcurrent) {
  const auto s = build_solid(SolidKind::Dodecahedron);
  for (int f = 0; f < s.face_count(); ++f)
    for (int o = 0; o < 5; ++o) {
      const Module m = build_module(s, f, o);
      ASSERT_EQ(m.ridges.size(), 3u);
      ASSERT_TRUE(m.triple_point.has_value());
      const Vec3 t = *m.triple_point;
      for (const auto& c : m.cones) EXPECT_NEAR(c.residual(t), 0, 1e-9);
      EXPECT_GT(m.face_normal.dot(t), m.face_offset);
      for (const auto& r : m.ridges) {
        // The triple point is where each ridge's dense samples end.
        const auto pts = r.sample(2000);
        double best = 1e9;
        for (const auto& p : pts) best = std::min(best, (p - t).norm());
        EXPECT_LT(best, 1e-7);
      }
      const auto& a = m.apex_set;
      EXPECT_NEAR((pentagon_triple_point(s, f, a[0], a[1], a[2]) - t).norm(), 0, 1e-12);
    }
}

TEST(Ridge, BadApexPairsRejected) {
  const auto c = build_solid(SolidKind::Cube);
  const auto& f = c.faces[0];
  EXPECT_THROW(ridge_conic(c, cone_for_vertex(c, f[0]), cone_for_vertex(c, f[1]), 0), std::invalid_argument);
  const auto d = build_solid(SolidKind::Dodecahedron);
  const auto& p = d.faces[0];
  EXPECT_THROW(ridge_conic(d, cone_for_vertex(d, p[0]), cone_for_vertex(d, p[2]), 0), std::invalid_argument);
}

TEST(Module, PatchesTileTheAzimuthWedges) {
  for (auto k : kAllSolids) {
    const auto s = build_solid(k);
    const double alpha = cone_half_angle(s);
    for (int o = 0; o < orientation_count(s.face_sides()); ++o) {
      const Module m = build_module(s, 0, o);
      EXPECT_EQ(m.patches.size(), m.apex_set.size());
      for (std::size_t p = 0; p < m.patches.size(); ++p) {
        const auto& g = m.patches[p];
        EXPECT_LT(g.az_begin, g.az_end);
        EXPECT_EQ(g.apex_id, m.apex_set[g.cone_index]);
        const Cone& c = m.cones[g.cone_index];
        // Bounding generators run along the face edges.
        const Vec3 d0 = c.direction(g.az_begin), d1 = c.direction(g.az_end);
        EXPECT_NEAR(d0.cross((s.vertices[g.vertex_begin] - c.apex).normalized()).norm(), 0, 1e-9);
        EXPECT_NEAR(d1.cross((s.vertices[g.vertex_end] - c.apex).normalized()).norm(), 0, 1e-9);
        for (int i = 0; i <= 20; ++i) {
          const double az = g.az_begin + (g.az_end - g.az_begin) * i / 20;
          const Vec3 b = m.boundary_point(static_cast<int>(p), az);
          EXPECT_NEAR(c.residual(b), 0, 1e-9);
          EXPECT_NEAR((b - c.apex).norm(), m.radial_bound(static_cast<int>(p), az), 1e-12);
        }
        // Oracle: patch area from a fine midpoint rule in azimuth.
        double area = 0;
        const int n = 4000;
        for (int i = 0; i < n; ++i) {
          const double az = g.az_begin + (g.az_end - g.az_begin) * (i + 0.5) / n;
          const double R = m.radial_bound(static_cast<int>(p), az);
          area += std::sin(alpha) * R * R / 2 * (g.az_end - g.az_begin) / n;
        }
        EXPECT_NEAR(m.patch_area(static_cast<int>(p)), area, 1e-6 * area);
      }
    }
  }
}

TEST(Module, PointClassification) {
  const auto s = build_solid(SolidKind::Tetrahedron);
  const Module m = build_module(s, 0, 0);
  EXPECT_EQ(classify_point(m, s.centroid).kind, PointClass::Exterior);
  EXPECT_EQ(classify_point(m, m.cones[0].apex).kind, PointClass::OnPatch);
  EXPECT_EQ(classify_point(m, m.ridges[0].point_at(0.5)).kind, PointClass::OnRidge);
  EXPECT_EQ(classify_point(m, s.face_center(0)).kind, PointClass::OnFacePlane);
  EXPECT_EQ(classify_point(m, s.face_center(0) * 1.01).kind, PointClass::Interior);
  EXPECT_EQ(classify_point(m, Vec3(5, 5, 5)).kind, PointClass::Exterior);
  const auto& g = m.patches[0];
  const double az = 0.5 * (g.az_begin + g.az_end);
  const auto pc = classify_point(m, m.cones[g.cone_index].point(az, 0.5 * m.radial_bound(0, az)));
  EXPECT_EQ(pc.kind, PointClass::OnPatch);
  EXPECT_EQ(pc.id, g.apex_id);
  EXPECT_STREQ(to_string(PointClass::OnRidge), "on-ridge");
}
