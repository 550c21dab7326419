#include "platonicon/mesh.hpp"

#include "json.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <map>
#include <numbers>
#include <sstream>
#include <stdexcept>
#include <tuple>

namespace platonicon {

namespace {

using Key = std::tuple<int, int, long>;
enum KeyKind { kVertex, kEdgePoint, kRidgePoint, kTriple, kInterior };

class VertexPool {
 public:
  int get(const Key& k, const Vec3& p) {
    auto [it, inserted] = index_.emplace(k, static_cast<int>(points_.size()));
    if (inserted) points_.push_back(p);
    return it->second;
  }
  std::vector<Vec3> take() { return std::move(points_); }

 private:
  std::map<Key, int> index_;
  std::vector<Vec3> points_;
};

struct Anchor {
  Key key;
  Vec3 pos;
};

}  // namespace

Mesh build_mesh(const PlatonicSolid& solid, const Configuration& config, int resolution) {
  if (resolution < kMinResolution)
    throw std::invalid_argument("resolution " + std::to_string(resolution) + " below minimum " +
                                std::to_string(kMinResolution));
  const auto modules = build_modules(solid, config);
  const int K = resolution;
  const int S = 2 * K;  // ridge segments
  const double L = (solid.vertices[solid.edges[0][1]] - solid.vertices[solid.edges[0][0]]).norm();

  Mesh mesh;
  mesh.resolution = K;
  mesh.ridge_segments = S;
  VertexPool pool;

  auto edge_point = [&](int e, int i) -> Anchor {
    const auto& ed = solid.edges[e];
    if (i == 0) return {{kVertex, ed[0], 0}, solid.vertices[ed[0]]};
    if (i == 2 * K) return {{kVertex, ed[1], 0}, solid.vertices[ed[1]]};
    const double t = static_cast<double>(i) / (2 * K);
    return {{kEdgePoint, e, i}, (1 - t) * solid.vertices[ed[0]] + t * solid.vertices[ed[1]]};
  };
  // Index along edge e of the k-th step away from vertex a.
  auto edge_index_from = [&](int e, int a, int k) { return solid.edges[e][0] == a ? k : 2 * K - k; };

  // Identify a ridge endpoint with a face vertex, an edge midpoint or the triple point.
  auto endpoint_anchor = [&](const Module& m, const Vec3& p) -> Anchor {
    for (int v : solid.faces[m.face])
      if ((solid.vertices[v] - p).norm() < 1e-9) return {{kVertex, v, 0}, solid.vertices[v]};
    const auto& cyc = solid.faces[m.face];
    for (std::size_t i = 0; i < cyc.size(); ++i) {
      const int e = solid.edge_index(cyc[i], cyc[(i + 1) % cyc.size()]);
      const Anchor mid = edge_point(e, K);
      if ((mid.pos - p).norm() < 1e-9) return mid;
    }
    if (m.triple_point && (*m.triple_point - p).norm() < 1e-9) return {{kTriple, m.face, 0}, *m.triple_point};
    throw std::logic_error("ridge endpoint is not a known anchor");
  };

  int patch_id = 0;
  for (const auto& m : modules) {
    // Ridge samples, shared by both patches bordering the ridge.
    std::vector<std::vector<Anchor>> ridge_pts;
    for (std::size_t r = 0; r < m.ridges.size(); ++r) {
      const auto samples = m.ridges[r].sample(S);
      std::vector<Anchor> pts;
      pts.push_back(endpoint_anchor(m, m.ridges[r].arc_start));
      const int rid = m.face * 3 + static_cast<int>(r);
      for (int j = 1; j < S; ++j) pts.push_back({{kRidgePoint, rid, j}, samples[j]});
      pts.push_back(endpoint_anchor(m, m.ridges[r].arc_end));
      ridge_pts.push_back(std::move(pts));
    }

    for (std::size_t lp = 0; lp < m.patches.size(); ++lp, ++patch_id) {
      const auto& pg = m.patches[lp];
      const Cone& c = m.cones[pg.cone_index];
      const int a = pg.apex_id;

      std::vector<Anchor> rim;
      for (const auto& piece : pg.boundary) {
        auto pts = ridge_pts[piece.ridge];
        if (piece.reversed) std::reverse(pts.begin(), pts.end());
        if (!rim.empty()) pts.erase(pts.begin());
        rim.insert(rim.end(), pts.begin(), pts.end());
      }

      // Generator columns: apex first, rim point last.
      std::vector<std::vector<int>> cols;
      const Anchor apex{{kVertex, a, 0}, c.apex};
      for (std::size_t j = 0; j < rim.size(); ++j) {
        std::vector<int> col{pool.get(apex.key, apex.pos)};
        const bool first = j == 0, last = j + 1 == rim.size();
        if (first || last) {
          const int e = first ? pg.edge_begin : pg.edge_end;
          const bool full = first ? pg.begin_full : pg.end_full;
          const int n = full ? 2 * K : K;
          for (int k = 1; k <= n; ++k) {
            const Anchor ap = edge_point(e, edge_index_from(e, a, k));
            col.push_back(pool.get(ap.key, ap.pos));
          }
        } else {
          const Vec3 q = rim[j].pos;
          const int n = std::max(1, static_cast<int>(std::lround(2 * K * (q - c.apex).norm() / L)));
          for (int k = 1; k < n; ++k)
            col.push_back(pool.get({kInterior, patch_id, static_cast<long>(j) * 100000 + k},
                                   c.apex + (static_cast<double>(k) / n) * (q - c.apex)));
          col.push_back(pool.get(rim[j].key, q));
        }
        cols.push_back(std::move(col));
      }

      std::vector<std::array<int, 3>> tris;
      for (std::size_t j = 0; j + 1 < cols.size(); ++j) {
        const auto& A = cols[j];
        const auto& B = cols[j + 1];
        const int na = static_cast<int>(A.size()) - 1, nb = static_cast<int>(B.size()) - 1;
        tris.push_back({A[0], A[1], B[1]});
        int i = 1, l = 1;
        while (i < na || l < nb) {
          const bool adv_a = l >= nb || (i < na && static_cast<double>(i + 1) / na <= static_cast<double>(l + 1) / nb);
          if (adv_a) {
            tris.push_back({A[i], A[i + 1], B[l]});
            ++i;
          } else {
            tris.push_back({A[i], B[l + 1], B[l]});
            ++l;
          }
        }
      }
      mesh.triangles.insert(mesh.triangles.end(), tris.begin(), tris.end());
      mesh.tags.insert(mesh.tags.end(), tris.size(), patch_id);
    }
  }
  mesh.vertices = pool.take();

  // Orient each patch outward using its cone normal at a mid triangle.
  int pid = 0;
  std::size_t t = 0;
  for (const auto& m : modules)
    for (const auto& pg : m.patches) {
      const std::size_t begin = t;
      while (t < mesh.tags.size() && mesh.tags[t] == pid) ++t;
      const auto& tri = mesh.triangles[begin + (t - begin) / 2];
      const Vec3 p0 = mesh.vertices[tri[0]], p1 = mesh.vertices[tri[1]], p2 = mesh.vertices[tri[2]];
      const Vec3 nrm = (p1 - p0).cross(p2 - p0);
      const Cone& c = m.cones[pg.cone_index];
      const Vec3 ctr = (p0 + p1 + p2) / 3.0;
      if (nrm.dot(c.outward_normal(c.azimuth_of(ctr))) < 0)
        for (std::size_t k = begin; k < t; ++k) std::swap(mesh.triangles[k][1], mesh.triangles[k][2]);
      ++pid;
    }
  return mesh;
}

MeshTopology analyze_topology(const Mesh& mesh) {
  std::map<std::pair<int, int>, std::pair<int, int>> edges;  // undirected -> (count, orientation sum)
  for (const auto& t : mesh.triangles)
    for (int i = 0; i < 3; ++i) {
      const int a = t[i], b = t[(i + 1) % 3];
      auto& e = edges[{std::min(a, b), std::max(a, b)}];
      ++e.first;
      e.second += a < b ? 1 : -1;
    }
  MeshTopology topo;
  for (const auto& [k, v] : edges) {
    if (v.first == 1) ++topo.boundary_edges;
    else if (v.first > 2) ++topo.nonmanifold_edges;
    else if (v.second != 0) ++topo.orientation_conflicts;
  }
  std::vector<bool> used(mesh.vertices.size(), false);
  for (const auto& t : mesh.triangles)
    for (int v : t) used[v] = true;
  const long nv = std::count(used.begin(), used.end(), true);
  topo.euler = static_cast<int>(nv - static_cast<long>(edges.size()) + static_cast<long>(mesh.triangles.size()));
  return topo;
}

double signed_volume(const Mesh& mesh) {
  double v = 0;
  for (const auto& t : mesh.triangles)
    v += mesh.vertices[t[0]].dot(mesh.vertices[t[1]].cross(mesh.vertices[t[2]]));
  return v / 6.0;
}

double surface_area(const Mesh& mesh) {
  double a = 0;
  for (const auto& t : mesh.triangles)
    a += 0.5 * (mesh.vertices[t[1]] - mesh.vertices[t[0]]).cross(mesh.vertices[t[2]] - mesh.vertices[t[0]]).norm();
  return a;
}

MeshFormat parse_mesh_format(const std::string& name) {
  if (name == "stl" || name == "stl-binary") return MeshFormat::StlBinary;
  if (name == "stl-ascii") return MeshFormat::StlAscii;
  if (name == "obj") return MeshFormat::Obj;
  throw std::invalid_argument("unknown mesh format '" + name + "'; valid: stl, stl-ascii, obj");
}

namespace {

static_assert(std::endian::native == std::endian::little, "STL writer assumes a little-endian host");

template <typename T>
void put(std::string& out, T v) {
  char buf[sizeof(T)];
  std::memcpy(buf, &v, sizeof(T));
  out.append(buf, sizeof(T));
}

Vec3 facet_normal(const Mesh& m, const std::array<int, 3>& t) {
  const Vec3 n = (m.vertices[t[1]] - m.vertices[t[0]]).cross(m.vertices[t[2]] - m.vertices[t[0]]);
  const double len = n.norm();
  return len > 0 ? Vec3(n / len) : Vec3::Zero();
}

}  // namespace

std::string export_mesh(const Mesh& mesh, MeshFormat format, double scale) {
  std::string out;
  char buf[160];
  switch (format) {
    case MeshFormat::StlBinary: {
      std::string header = "platonicon binary STL";
      header.resize(80, '\0');
      out = header;
      put<std::uint32_t>(out, static_cast<std::uint32_t>(mesh.triangles.size()));
      for (const auto& t : mesh.triangles) {
        const Vec3 n = facet_normal(mesh, t);
        for (int i = 0; i < 3; ++i) put<float>(out, static_cast<float>(n[i]));
        for (int v : t)
          for (int i = 0; i < 3; ++i) put<float>(out, static_cast<float>(scale * mesh.vertices[v][i]));
        put<std::uint16_t>(out, 0);
      }
      break;
    }
    case MeshFormat::StlAscii: {
      out = "solid platonicon\n";
      for (const auto& t : mesh.triangles) {
        const Vec3 n = facet_normal(mesh, t);
        std::snprintf(buf, sizeof buf, "  facet normal %.9e %.9e %.9e\n    outer loop\n", n.x(), n.y(), n.z());
        out += buf;
        for (int v : t) {
          const Vec3 p = scale * mesh.vertices[v];
          std::snprintf(buf, sizeof buf, "      vertex %.9e %.9e %.9e\n", p.x(), p.y(), p.z());
          out += buf;
        }
        out += "    endloop\n  endfacet\n";
      }
      out += "endsolid platonicon\n";
      break;
    }
    case MeshFormat::Obj: {
      out = "# platonicon\n";
      for (const auto& v : mesh.vertices) {
        const Vec3 p = scale * v;
        std::snprintf(buf, sizeof buf, "v %.17g %.17g %.17g\n", p.x(), p.y(), p.z());
        out += buf;
      }
      for (const auto& t : mesh.triangles) {
        std::snprintf(buf, sizeof buf, "f %d %d %d\n", t[0] + 1, t[1] + 1, t[2] + 1);
        out += buf;
      }
      break;
    }
  }
  return out;
}

void write_file(const std::string& path, const std::string& bytes) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw std::runtime_error("cannot open '" + path + "' for writing");
  f.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  if (!f) throw std::runtime_error("failed writing '" + path + "'");
}

Mesh import_obj(const std::string& text) {
  Mesh m;
  std::istringstream in(text);
  std::string line;
  while (std::getline(in, line)) {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag == "v") {
      Vec3 p;
      if (!(ls >> p.x() >> p.y() >> p.z())) throw std::invalid_argument("malformed OBJ vertex: " + line);
      m.vertices.push_back(p);
    } else if (tag == "f") {
      std::array<int, 3> t{};
      for (auto& i : t) {
        std::string tok;
        if (!(ls >> tok)) throw std::invalid_argument("OBJ face needs three vertices: " + line);
        try {
          i = std::stoi(tok.substr(0, tok.find('/'))) - 1;
        } catch (const std::exception&) {
          throw std::invalid_argument("malformed OBJ face: " + line);
        }
        if (i < 0 || i >= static_cast<int>(m.vertices.size()))
          throw std::invalid_argument("OBJ face index out of range: " + line);
      }
      m.triangles.push_back(t);
      m.tags.push_back(-1);
    }
  }
  return m;
}

MetricsReport metrics(const Mesh& mesh, const PlatonicSolid& solid, const std::string& class_id) {
  if (!analyze_topology(mesh).closed_manifold()) throw std::invalid_argument("metrics need a closed manifold mesh");
  MetricsReport r;
  r.solid = solid.name;
  r.class_id = class_id;
  r.resolution = mesh.resolution;
  r.area = surface_area(mesh);
  r.volume = signed_volume(mesh);
  r.solid_area = solid_surface_area(solid);
  r.solid_volume = solid_volume(solid);
  r.sphere_area = 4 * std::numbers::pi;
  r.sphere_volume = 4 * std::numbers::pi / 3;
  r.volume_over_solid = r.volume / r.solid_volume;
  r.volume_over_sphere = r.volume / r.sphere_volume;
  r.area_over_solid = r.area / r.solid_area;
  r.area_over_sphere = r.area / r.sphere_area;
  r.area_to_volume = r.area / r.volume;
  return r;
}

std::string metrics_json(const MetricsReport& m) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["solid"] = m.solid;
  j["class"] = m.class_id;
  j["resolution"] = m.resolution;
  j["area"] = m.area;
  j["volume"] = m.volume;
  j["solid_area"] = m.solid_area;
  j["solid_volume"] = m.solid_volume;
  j["sphere_area"] = m.sphere_area;
  j["sphere_volume"] = m.sphere_volume;
  j["volume_over_solid"] = m.volume_over_solid;
  j["volume_over_sphere"] = m.volume_over_sphere;
  j["area_over_solid"] = m.area_over_solid;
  j["area_over_sphere"] = m.area_over_sphere;
  j["area_to_volume"] = m.area_to_volume;
  return j.dump(2) + "\n";
}

std::string metrics_csv_header() {
  return "solid,class,resolution,area,volume,solid_area,solid_volume,sphere_area,sphere_volume,"
         "volume_over_solid,volume_over_sphere,area_over_solid,area_over_sphere,area_to_volume\n";
}

std::string metrics_csv_row(const MetricsReport& m) {
  char buf[512];
  std::snprintf(buf, sizeof buf, "%s,%s,%d,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f,%.9f\n", m.solid.c_str(),
                m.class_id.c_str(), m.resolution, m.area, m.volume, m.solid_area, m.solid_volume, m.sphere_area,
                m.sphere_volume, m.volume_over_solid, m.volume_over_sphere, m.area_over_solid, m.area_over_sphere,
                m.area_to_volume);
  return buf;
}

SurfaceCheck check_surface(const Mesh& mesh, const PlatonicSolid& solid, const Configuration& config) {
  const auto modules = build_modules(solid, config);
  std::vector<const Cone*> cone_of;
  for (const auto& m : modules)
    for (const auto& pg : m.patches) cone_of.push_back(&m.cones[pg.cone_index]);

  SurfaceCheck sc;
  for (const auto& v : mesh.vertices) sc.max_radius = std::max(sc.max_radius, v.norm());
  for (std::size_t t = 0; t < mesh.triangles.size(); ++t) {
    const Cone& c = *cone_of[mesh.tags[t]];
    const double s = std::sin(c.half_angle);
    const auto& tri = mesh.triangles[t];
    double cmax = 0;
    for (int i = 0; i < 3; ++i) {
      const Vec3& p = mesh.vertices[tri[i]];
      sc.max_vertex_residual = std::max(sc.max_vertex_residual, std::abs(c.residual(p)) / s);
      cmax = std::max(cmax, (mesh.vertices[tri[(i + 1) % 3]] - p).norm());
    }
    const Vec3 ctr = (mesh.vertices[tri[0]] + mesh.vertices[tri[1]] + mesh.vertices[tri[2]]) / 3.0;
    const double dev = std::abs(c.residual(ctr)) / s;
    sc.max_centroid_deviation = std::max(sc.max_centroid_deviation, dev);
    const double rc = (ctr - c.apex).norm();
    const double kappa = 1.0 / (rc * std::tan(c.half_angle));
    const double bound = cmax * cmax * kappa / 8.0;
    if (bound > 0) sc.worst_deviation_ratio = std::max(sc.worst_deviation_ratio, dev / (2 * bound));
  }
  for (const auto& m : modules)
    for (const auto& pg : m.patches) {
      const Cone& c = m.cones[pg.cone_index];
      for (int i = 0; i <= 8; ++i) {
        const double az = pg.az_begin + (pg.az_end - pg.az_begin) * i / 8;
        const Vec3 n = c.outward_normal(az);
        for (const auto& v : mesh.vertices) sc.convexity_violation = std::max(sc.convexity_violation, n.dot(v - c.apex));
      }
    }
  return sc;
}

}  // namespace platonicon
