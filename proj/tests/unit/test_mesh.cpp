#include "platonicon/mesh.hpp"

#include "platonicon/verify.hpp"

#include "json.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <cstring>
#include <numbers>
#include <sstream>

using namespace platonicon;

namespace {

// Every surface point has p . n = sin(alpha), so the divergence theorem gives
// volume = sin(alpha) * area / 3 with the area integrated analytically per patch.
double analytic_volume(const PlatonicSolid& s, const Configuration& c, double* area_out = nullptr) {
  double area = 0;
  for (const auto& m : build_modules(s, c))
    for (std::size_t p = 0; p < m.patches.size(); ++p) area += m.patch_area(static_cast<int>(p));
  if (area_out) *area_out = area;
  return std::sin(cone_half_angle(s)) * area / 3;
}

std::uint32_t read_u32(const std::string& b, std::size_t off) {
  std::uint32_t v;
  std::memcpy(&v, b.data() + off, 4);
  return v;
}

}  // namespace

TEST(Mesh, ClosedManifoldForEveryClass) {
  for (auto k : kAllSolids) {
    const auto s = build_solid(k);
    for (const auto& c : class_representatives(s, RuleSet::TangentAlternation))
      for (int res : {kMinResolution, 8}) {
        const Mesh m = build_mesh(s, c, res);
        const auto t = analyze_topology(m);
        EXPECT_TRUE(t.closed_manifold()) << s.name << " r" << res;
        EXPECT_EQ(t.boundary_edges, 0);
        EXPECT_EQ(t.nonmanifold_edges, 0);
        EXPECT_EQ(t.orientation_conflicts, 0);
        EXPECT_EQ(t.euler, 2);
        EXPECT_EQ(m.tags.size(), m.triangles.size());
        EXPECT_GT(signed_volume(m), 0);
      }
  }
}

TEST(Mesh, VolumeBetweenSolidAndSphereAndConverges) {
  for (auto k : kAllSolids) {
    const auto s = build_solid(k);
    for (const auto& c : class_representatives(s, RuleSet::TangentAlternation)) {
      double area = 0;
      const double exact = analytic_volume(s, c, &area);
      EXPECT_GT(exact, solid_volume(s));
      EXPECT_LT(exact, 4 * std::numbers::pi / 3);
      const Mesh m = build_mesh(s, c, 24);
      EXPECT_NEAR(signed_volume(m), exact, 1e-3 * exact) << s.name;
      EXPECT_NEAR(surface_area(m), area, 1e-3 * area) << s.name;
      EXPECT_LT(signed_volume(m), exact);  // inscribed facets
      EXPECT_GT(signed_volume(m), solid_volume(s));
    }
  }
}

TEST(Mesh, VerticesOnAnalyticSurface) {
  for (auto k : kAllSolids) {
    const auto s = build_solid(k);
    const auto c = class_representatives(s, RuleSet::TangentAlternation).front();
    const Mesh m = build_mesh(s, c, 8);
    const auto sc = check_surface(m, s, c);
    EXPECT_LE(sc.max_radius, 1 + 1e-12);
    EXPECT_LT(sc.max_vertex_residual, 1e-9);
    EXPECT_LT(sc.worst_deviation_ratio, 1.0);
    EXPECT_LT(sc.convexity_violation, 1e-9);
    // All solid vertices appear in the mesh.
    for (const auto& v : s.vertices) {
      double best = 1e9;
      for (const auto& p : m.vertices) best = std::min(best, (p - v).norm());
      EXPECT_LT(best, 1e-12);
    }
  }
}

TEST(Mesh, BinaryStlLayoutAndDeterminism) {
  const auto s = build_solid(SolidKind::Octahedron);
  const auto c = class_representatives(s, RuleSet::TangentAlternation).front();
  const Mesh m = build_mesh(s, c, 6);
  const std::string a = export_mesh(m, MeshFormat::StlBinary);
  EXPECT_EQ(a, export_mesh(build_mesh(s, c, 6), MeshFormat::StlBinary));
  ASSERT_EQ(a.size(), 84 + 50 * m.triangles.size());
  EXPECT_EQ(read_u32(a, 80), m.triangles.size());
  EXPECT_EQ(a.rfind("platonicon", 0), 0u);
  // Scaled export multiplies coordinates.
  const std::string b = export_mesh(m, MeshFormat::StlBinary, 25.0);
  float v1, v2;
  std::memcpy(&v1, a.data() + 84 + 12, 4);
  std::memcpy(&v2, b.data() + 84 + 12, 4);
  EXPECT_NEAR(v2, 25.0f * v1, 1e-4);
}

TEST(Mesh, AsciiStlAndObjRoundTrip) {
  const auto s = build_solid(SolidKind::Cube);
  const auto c = class_representatives(s, RuleSet::TangentAlternation).back();
  const Mesh m = build_mesh(s, c, 5);
  const std::string ascii = export_mesh(m, MeshFormat::StlAscii);
  EXPECT_EQ(ascii.rfind("solid", 0), 0u);
  EXPECT_NE(ascii.find("endsolid"), std::string::npos);
  std::size_t facets = 0;
  for (std::size_t pos = ascii.find("facet normal"); pos != std::string::npos; pos = ascii.find("facet normal", pos + 1)) ++facets;
  EXPECT_EQ(facets, m.triangles.size());
  const Mesh back = import_obj(export_mesh(m, MeshFormat::Obj));
  ASSERT_EQ(back.vertices.size(), m.vertices.size());
  ASSERT_EQ(back.triangles, m.triangles);
  for (std::size_t i = 0; i < m.vertices.size(); ++i) EXPECT_EQ(back.vertices[i], m.vertices[i]);
  EXPECT_DOUBLE_EQ(signed_volume(back), signed_volume(m));
  EXPECT_THROW(import_obj("v 0 0 0\nf 1 2 3\n"), std::invalid_argument);
}

TEST(Mesh, MetricsReferences) {
  const auto s = build_solid(SolidKind::Tetrahedron);
  const auto c = class_representatives(s, RuleSet::TangentAlternation).front();
  const auto r = metrics(build_mesh(s, c, 16), s, "0121");
  EXPECT_NEAR(r.solid_volume, 0.513200, 1e-5);
  EXPECT_NEAR(r.sphere_volume, 4 * std::numbers::pi / 3, 1e-12);
  EXPECT_NEAR(r.sphere_area, 4 * std::numbers::pi, 1e-12);
  EXPECT_NEAR(r.volume_over_solid, r.volume / r.solid_volume, 1e-12);
  EXPECT_NEAR(r.area_to_volume, r.area / r.volume, 1e-12);
  EXPECT_GT(r.volume_over_solid, 1);
  EXPECT_LT(r.volume_over_sphere, 1);
  const auto j = nlohmann::json::parse(metrics_json(r));
  EXPECT_EQ(j["class"], "0121");
  const std::string row = metrics_csv_row(r), head = metrics_csv_header();
  EXPECT_EQ(std::count(row.begin(), row.end(), ','), std::count(head.begin(), head.end(), ','));
  Mesh open = build_mesh(s, c, 4);
  open.triangles.pop_back();
  open.tags.pop_back();
  EXPECT_FALSE(analyze_topology(open).closed_manifold());
  EXPECT_THROW(metrics(open, s), std::invalid_argument);
}

TEST(Mesh, ArgumentErrors) {
  const auto s = build_solid(SolidKind::Tetrahedron);
  const Configuration c{SolidKind::Tetrahedron, parse_encoding("0121")};
  EXPECT_THROW(build_mesh(s, c, 2), std::invalid_argument);
  EXPECT_THROW(parse_mesh_format("ply"), std::invalid_argument);
  EXPECT_EQ(parse_mesh_format("stl"), MeshFormat::StlBinary);
  EXPECT_EQ(parse_mesh_format("obj"), MeshFormat::Obj);
  EXPECT_THROW(write_file("/nonexistent-dir/x.stl", "x"), std::runtime_error);
}
