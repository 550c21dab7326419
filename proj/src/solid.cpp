#include "platonicon/solid.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <stdexcept>

namespace platonicon {

namespace {

constexpr double kPhi = std::numbers::phi;

struct NameEntry {
  SolidKind kind;
  std::string_view name;
  SolidKind dual;
};

constexpr std::array<NameEntry, 5> kNames = {{
    {SolidKind::Tetrahedron, "tetrahedron", SolidKind::Tetrahedron},
    {SolidKind::Cube, "cube", SolidKind::Octahedron},
    {SolidKind::Octahedron, "octahedron", SolidKind::Cube},
    {SolidKind::Dodecahedron, "dodecahedron", SolidKind::Icosahedron},
    {SolidKind::Icosahedron, "icosahedron", SolidKind::Dodecahedron},
}};

const NameEntry& entry(SolidKind kind) {
  for (const auto& e : kNames)
    if (e.kind == kind) return e;
  throw std::logic_error("unhandled solid kind");
}

// Canonical vertex order. Sign pairs run (-,-), (-,+), (+,-), (+,+).
std::vector<Vec3> raw_vertices(SolidKind kind) {
  std::vector<Vec3> v;
  const double s3 = std::sqrt(3.0);
  const std::array<double, 2> sg = {-1.0, 1.0};
  switch (kind) {
    case SolidKind::Tetrahedron:
      v = {Vec3(1, 1, 1), Vec3(1, -1, -1), Vec3(-1, 1, -1), Vec3(-1, -1, 1)};
      for (auto& p : v) p /= s3;
      break;
    case SolidKind::Cube:
      for (double x : sg)
        for (double y : sg)
          for (double z : sg) v.emplace_back(Vec3(x, y, z) / s3);
      break;
    case SolidKind::Octahedron:
      v = {Vec3(1, 0, 0), Vec3(-1, 0, 0), Vec3(0, 1, 0),
           Vec3(0, -1, 0), Vec3(0, 0, 1), Vec3(0, 0, -1)};
      break;
    case SolidKind::Dodecahedron:
      for (double x : sg)
        for (double y : sg)
          for (double z : sg) v.emplace_back(Vec3(x, y, z) / s3);
      for (double a : sg)
        for (double b : sg) v.emplace_back(Vec3(0, a / kPhi, b * kPhi) / s3);
      for (double a : sg)
        for (double b : sg) v.emplace_back(Vec3(a / kPhi, b * kPhi, 0) / s3);
      for (double a : sg)
        for (double b : sg) v.emplace_back(Vec3(a * kPhi, 0, b / kPhi) / s3);
      break;
    case SolidKind::Icosahedron: {
      const double r = std::sqrt(1.0 + kPhi * kPhi);
      for (double a : sg)
        for (double b : sg) v.emplace_back(Vec3(0, a, b * kPhi) / r);
      for (double a : sg)
        for (double b : sg) v.emplace_back(Vec3(a, b * kPhi, 0) / r);
      for (double a : sg)
        for (double b : sg) v.emplace_back(Vec3(a * kPhi, 0, b) / r);
      break;
    }
  }
  return v;
}

// Faces as supporting planes through three vertices that carry a whole face.
std::vector<std::vector<int>> find_faces(const std::vector<Vec3>& v) {
  const int n = static_cast<int>(v.size());
  constexpr double eps = 1e-9;
  std::map<std::vector<int>, std::vector<int>> by_set;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j)
      for (int k = j + 1; k < n; ++k) {
        Vec3 nrm = (v[j] - v[i]).cross(v[k] - v[i]);
        if (nrm.norm() < eps) continue;
        nrm.normalize();
        if (nrm.dot(v[i]) < 0) nrm = -nrm;
        const double d = nrm.dot(v[i]);
        if (d < eps) continue;
        bool support = true;
        std::vector<int> on;
        for (int m = 0; m < n && support; ++m) {
          const double s = nrm.dot(v[m]) - d;
          if (s > eps) support = false;
          else if (s > -eps) on.push_back(m);
        }
        if (!support || by_set.count(on)) continue;

        Vec3 c = Vec3::Zero();
        for (int m : on) c += v[m];
        c /= static_cast<double>(on.size());
        const Vec3 u = (v[on[0]] - c).normalized();
        const Vec3 w = nrm.cross(u);
        std::vector<std::pair<double, int>> ang;
        for (int m : on) {
          const Vec3 r = v[m] - c;
          double a = std::atan2(r.dot(w), r.dot(u));
          if (a < -eps) a += 2 * std::numbers::pi;
          ang.emplace_back(a, m);
        }
        std::sort(ang.begin(), ang.end());
        std::vector<int> cyc;
        for (auto& [a, m] : ang) cyc.push_back(m);
        std::rotate(cyc.begin(), std::min_element(cyc.begin(), cyc.end()), cyc.end());
        by_set.emplace(on, cyc);
      }
  std::vector<std::vector<int>> faces;
  for (auto& [key, cyc] : by_set) faces.push_back(cyc);
  std::sort(faces.begin(), faces.end());
  return faces;
}

double angle_between(const Vec3& a, const Vec3& b) {
  return std::atan2(a.cross(b).norm(), a.dot(b));
}

}  // namespace

std::string_view solid_name(SolidKind kind) { return entry(kind).name; }

SolidKind solid_from_name(std::string_view name) {
  for (const auto& e : kNames)
    if (e.name == name) return e.kind;
  std::string valid;
  for (const auto& e : kNames) {
    if (!valid.empty()) valid += ", ";
    valid += e.name;
  }
  throw std::invalid_argument("unknown solid '" + std::string(name) + "'; valid names: " + valid);
}

SolidKind dual_of(SolidKind kind) { return entry(kind).dual; }

Vec3 PlatonicSolid::face_normal(int f) const {
  const auto& c = faces[f];
  return (vertices[c[1]] - vertices[c[0]]).cross(vertices[c[2]] - vertices[c[0]]).normalized();
}

Vec3 PlatonicSolid::face_center(int f) const {
  Vec3 c = Vec3::Zero();
  for (int v : faces[f]) c += vertices[v];
  return c / static_cast<double>(faces[f].size());
}

int PlatonicSolid::position_in_face(int f, int v) const {
  const auto& c = faces[f];
  auto it = std::find(c.begin(), c.end(), v);
  return it == c.end() ? -1 : static_cast<int>(it - c.begin());
}

PlatonicSolid build_solid(SolidKind kind) {
  PlatonicSolid s;
  s.kind = kind;
  s.name = std::string(solid_name(kind));
  s.dual_name = std::string(solid_name(dual_of(kind)));
  s.vertices = raw_vertices(kind);
  s.faces = find_faces(s.vertices);

  const int nv = s.vertex_count();
  s.edge_lookup_.assign(nv * nv, -1);
  std::map<std::array<int, 2>, std::vector<int>> edge_to_faces;
  for (int f = 0; f < s.face_count(); ++f) {
    const auto& c = s.faces[f];
    for (std::size_t i = 0; i < c.size(); ++i) {
      const int a = c[i], b = c[(i + 1) % c.size()];
      edge_to_faces[{std::min(a, b), std::max(a, b)}].push_back(f);
    }
  }
  for (auto& [e, fs] : edge_to_faces) {
    if (fs.size() != 2) throw std::logic_error("edge not shared by exactly two faces");
    std::sort(fs.begin(), fs.end());
    const int id = static_cast<int>(s.edges.size());
    s.edges.push_back(e);
    s.edge_faces.push_back({fs[0], fs[1]});
    s.edge_lookup_[e[0] * nv + e[1]] = id;
    s.edge_lookup_[e[1] * nv + e[0]] = id;
  }
  s.neighbors_.assign(nv, {});
  for (const auto& e : s.edges) {
    s.neighbors_[e[0]].push_back(e[1]);
    s.neighbors_[e[1]].push_back(e[0]);
  }
  for (auto& n : s.neighbors_) std::sort(n.begin(), n.end());
  s.vertex_faces_.assign(nv, {});
  for (int f = 0; f < s.face_count(); ++f)
    for (int v : s.faces[f]) s.vertex_faces_[v].push_back(f);

  const auto& e0 = s.edges.front();
  s.dual_dihedral = std::numbers::pi - angle_between(s.vertices[e0[0]], s.vertices[e0[1]]);
  const auto& f0 = s.edge_faces.front();
  s.dihedral = std::numbers::pi - angle_between(s.face_normal(f0[0]), s.face_normal(f0[1]));
  return s;
}

PlatonicSolid build_solid(std::string_view name) { return build_solid(solid_from_name(name)); }

Eigen::Matrix3d SymmetryOp::matrix(const PlatonicSolid& solid) const {
  // Three independent vertices fix the linear map.
  const int a = 0;
  const int b = solid.vertex_neighbors(0)[0];
  const Vec3 x0 = solid.vertices[a], x1 = solid.vertices[b];
  Eigen::Matrix3d X, Y;
  X << x0, x1, x0.cross(x1);
  const Vec3 y0 = solid.vertices[vertex_perm[a]], y1 = solid.vertices[vertex_perm[b]];
  Y << y0, y1, (proper ? 1.0 : -1.0) * y0.cross(y1);
  return Y * X.inverse();
}

SymmetryGroup symmetry_group(const PlatonicSolid& solid, bool proper_only) {
  SymmetryGroup g;
  g.solid = solid.kind;
  g.proper_only = proper_only;

  const int nv = solid.vertex_count();
  std::map<std::vector<int>, int> face_by_set;
  for (int f = 0; f < solid.face_count(); ++f) {
    auto key = solid.faces[f];
    std::sort(key.begin(), key.end());
    face_by_set[key] = f;
  }

  const Vec3 x0 = solid.vertices[0];
  const Vec3 x1 = solid.vertices[solid.vertex_neighbors(0)[0]];
  Eigen::Matrix3d X;
  X << x0, x1, x0.cross(x1);
  const Eigen::Matrix3d Xinv = X.inverse();

  for (int a = 0; a < nv; ++a)
    for (int b : solid.vertex_neighbors(a))
      for (int sign : {1, -1}) {
        if (proper_only && sign < 0) continue;
        const Vec3 y0 = solid.vertices[a], y1 = solid.vertices[b];
        Eigen::Matrix3d Y;
        Y << y0, y1, sign * y0.cross(y1);
        const Eigen::Matrix3d R = Y * Xinv;
        SymmetryOp op;
        op.proper = sign > 0;
        op.vertex_perm.assign(nv, -1);
        bool ok = true;
        for (int i = 0; i < nv && ok; ++i) {
          const Vec3 img = R * solid.vertices[i];
          for (int j = 0; j < nv; ++j)
            if ((img - solid.vertices[j]).norm() < 1e-9) {
              op.vertex_perm[i] = j;
              break;
            }
          ok = op.vertex_perm[i] >= 0;
        }
        if (!ok) throw std::logic_error("frame map is not a symmetry");
        for (int f = 0; f < solid.face_count(); ++f) {
          std::vector<int> key;
          for (int v : solid.faces[f]) key.push_back(op.vertex_perm[v]);
          std::sort(key.begin(), key.end());
          op.face_perm.push_back(face_by_set.at(key));
        }
        for (const auto& e : solid.edges)
          op.edge_perm.push_back(solid.edge_index(op.vertex_perm[e[0]], op.vertex_perm[e[1]]));
        g.ops.push_back(std::move(op));
      }
  std::sort(g.ops.begin(), g.ops.end(),
            [](const SymmetryOp& l, const SymmetryOp& r) { return l.vertex_perm < r.vertex_perm; });
  return g;
}

SymmetryOp compose(const SymmetryOp& g, const SymmetryOp& h) {
  SymmetryOp r;
  r.proper = g.proper == h.proper;
  auto chain = [](const std::vector<int>& outer, const std::vector<int>& inner) {
    std::vector<int> out(inner.size());
    for (std::size_t i = 0; i < inner.size(); ++i) out[i] = outer[inner[i]];
    return out;
  };
  r.vertex_perm = chain(g.vertex_perm, h.vertex_perm);
  r.face_perm = chain(g.face_perm, h.face_perm);
  r.edge_perm = chain(g.edge_perm, h.edge_perm);
  return r;
}

double dual_dihedral(const PlatonicSolid& solid) { return solid.dual_dihedral; }

double solid_volume(const PlatonicSolid& solid) {
  double vol = 0;
  for (int f = 0; f < solid.face_count(); ++f) {
    const auto& c = solid.faces[f];
    for (std::size_t i = 1; i + 1 < c.size(); ++i)
      vol += solid.vertices[c[0]].dot(solid.vertices[c[i]].cross(solid.vertices[c[i + 1]]));
  }
  return vol / 6.0;
}

double solid_surface_area(const PlatonicSolid& solid) {
  double area = 0;
  for (int f = 0; f < solid.face_count(); ++f) {
    const auto& c = solid.faces[f];
    for (std::size_t i = 1; i + 1 < c.size(); ++i)
      area += 0.5 * (solid.vertices[c[i]] - solid.vertices[c[0]])
                        .cross(solid.vertices[c[i + 1]] - solid.vertices[c[0]])
                        .norm();
  }
  return area;
}

std::string solid_to_json(const PlatonicSolid& solid) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["name"] = solid.name;
  j["dual"] = solid.dual_name;
  j["dihedral"] = solid.dihedral;
  j["dual_dihedral"] = solid.dual_dihedral;
  j["cone_half_angle_deg"] = cone_half_angle(solid) * 180.0 / std::numbers::pi;
  auto& verts = j["vertices"] = nlohmann::ordered_json::array();
  for (const auto& v : solid.vertices) verts.push_back({v.x(), v.y(), v.z()});
  j["faces"] = solid.faces;
  j["edges"] = solid.edges;
  j["edge_faces"] = solid.edge_faces;
  return j.dump(2);
}

}  // namespace platonicon
