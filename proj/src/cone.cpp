#include "platonicon/cone.hpp"

#include "platonicon/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace platonicon {

namespace {

constexpr double kTwoPi = 2 * std::numbers::pi;

double wrap_pi(double a) {
  a = std::fmod(a, kTwoPi);
  if (a > std::numbers::pi) a -= kTwoPi;
  if (a <= -std::numbers::pi) a += kTwoPi;
  return a;
}

bool same_point(const Vec3& a, const Vec3& b) { return (a - b).norm() < 1e-9; }

double simpson(const std::function<double(double)>& f, double a, double b, double fa, double fm,
               double fb, double whole, double eps, int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  const double left = (m - a) / 6 * (fa + 4 * flm + fm);
  const double right = (b - m) / 6 * (fm + 4 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) <= 15 * eps)
    return left + right + (left + right - whole) / 15;
  return simpson(f, a, m, fa, flm, fm, left, eps / 2, depth - 1) +
         simpson(f, m, b, fm, frm, fb, right, eps / 2, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b, double eps) {
  const double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  return simpson(f, a, b, fa, fm, fb, (b - a) / 6 * (fa + 4 * fm + fb), eps, 40);
}

}  // namespace

Vec3 Cone::direction(double azimuth) const {
  return std::cos(half_angle) * axis +
         std::sin(half_angle) * (std::cos(azimuth) * u1 + std::sin(azimuth) * u2);
}

Vec3 Cone::outward_normal(double azimuth) const {
  const Vec3 rho = std::cos(azimuth) * u1 + std::sin(azimuth) * u2;
  return -std::sin(half_angle) * axis + std::cos(half_angle) * rho;
}

double Cone::azimuth_of(const Vec3& p) const {
  const Vec3 r = p - apex;
  double a = std::atan2(r.dot(u2), r.dot(u1));
  if (a < 0) a += kTwoPi;
  return a;
}

double Cone::residual(const Vec3& p) const {
  const Vec3 r = p - apex;
  return r.norm() * std::cos(half_angle) - r.dot(axis);
}

Cone cone_for_vertex(const PlatonicSolid& solid, int vertex) {
  if (vertex < 0 || vertex >= solid.vertex_count())
    throw std::out_of_range("vertex id " + std::to_string(vertex) + " out of range");
  Cone c;
  c.apex_id = vertex;
  c.apex = solid.vertices[vertex];
  c.axis = (solid.centroid - c.apex).normalized();
  c.half_angle = cone_half_angle(solid);
  const Vec3 e = solid.vertices[solid.vertex_neighbors(vertex).front()] - c.apex;
  c.u1 = (e - e.dot(c.axis) * c.axis).normalized();
  c.u2 = c.axis.cross(c.u1);
  return c;
}

Vec3 pentagon_triple_point(const PlatonicSolid& solid, int face, int x, int y, int z) {
  const Vec3 X = solid.vertices[x], Y = solid.vertices[y], Z = solid.vertices[z];
  Vec3 d = (Y - X).cross(Z - X).normalized();
  const Vec3 n = solid.face_normal(face);
  if (d.dot(n) < 0) d = -d;
  const double c2 = std::pow(std::cos(cone_half_angle(solid)), 2);
  const double k = X.dot(d);
  // (1 - t k)^2 = c^2 (t^2 - 2 t k + 1) for p = t d on cone x.
  const double qa = k * k - c2, qb = -2 * k * (1 - c2), qc = 1 - c2;
  const double disc = std::sqrt(std::max(0.0, qb * qb - 4 * qa * qc));
  const double offset = solid.face_offset(face);
  std::optional<Vec3> best;
  for (double t : {(-qb - disc) / (2 * qa), (-qb + disc) / (2 * qa)}) {
    const Vec3 p = t * d;
    if (t <= 0 || 1 - t * k < 0 || n.dot(p) <= offset) continue;
    if (!best || p.norm() < best->norm()) best = p;
  }
  if (!best) throw std::runtime_error("pentagon triple point not found");
  return *best;
}

RidgeConic::RidgeConic(const Cone& a, const Cone& b, int face_id, const Vec3& start, const Vec3& end)
    : apex_a(a.apex_id), apex_b(b.apex_id), face(face_id), arc_start(start), arc_end(end), a_(a), b_(b) {
  plane_normal = (b.apex - a.apex).normalized();
  e1 = (a.apex + b.apex).normalized();
  e2 = plane_normal.cross(e1);
  const double c2 = std::pow(std::cos(a.half_angle), 2);
  const double a1 = a.apex.dot(e1), a2 = a.apex.dot(e2);
  coeffs = {a1 * a1 - c2, 2 * a1 * a2, a2 * a2 - c2, -2 * a1 * (1 - c2), -2 * a2 * (1 - c2), 1 - c2};

  az0_ = a.azimuth_of(start);
  sweep_ = wrap_pi(a.azimuth_of(end) - az0_);

  table_ = std::make_shared<ArcTable>();
}

const RidgeConic::ArcTable& RidgeConic::table() const {
  std::call_once(table_->once, [this]() {
    // Adaptive subdivision in azimuth until every chord sagitta is below tolerance.
    std::vector<std::pair<double, Vec3>> pts;
    std::function<void(double, const Vec3&, double, const Vec3&, int)> refine =
        [&](double t0, const Vec3& p0, double t1, const Vec3& p1, int depth) {
          const double tm = 0.5 * (t0 + t1);
          const Vec3 pm = point_at_azimuth(az0_ + tm * sweep_);
          const Vec3 chord = p1 - p0;
          const double cl = chord.norm();
          const double sag = cl > 0 ? (pm - p0).cross(chord).norm() / cl : (pm - p0).norm();
          if (sag > tol::kRidgeChord && depth < 30) {
            refine(t0, p0, tm, pm, depth + 1);
            refine(tm, pm, t1, p1, depth + 1);
          } else {
            pts.emplace_back(t1, p1);
          }
        };
    constexpr int kSeed = 64;
    Vec3 prev = arc_start;
    pts.emplace_back(0.0, arc_start);
    for (int i = 0; i < kSeed; ++i) {
      const double t1 = static_cast<double>(i + 1) / kSeed;
      const Vec3 p1 = i + 1 == kSeed ? arc_end : point_at_azimuth(az0_ + t1 * sweep_);
      refine(static_cast<double>(i) / kSeed, prev, t1, p1, 0);
      prev = p1;
    }
    auto& t = *table_;
    t.az.reserve(pts.size());
    t.cum.reserve(pts.size());
    double acc = 0;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (i > 0) acc += (pts[i].second - pts[i - 1].second).norm();
      t.az.push_back(az0_ + pts[i].first * sweep_);
      t.cum.push_back(acc);
    }
  });
  return *table_;
}

Vec3 RidgeConic::point_at_azimuth(double az) const {
  const Vec3 d = a_.direction(az);
  const double den = (b_.apex - a_.apex).dot(d);
  const double r = (1.0 - a_.apex.dot(b_.apex)) / den;
  return a_.apex + r * d;
}

Vec3 RidgeConic::point_at(double u) const {
  if (u <= 0) return arc_start;
  if (u >= 1) return arc_end;
  const auto& t = table();
  const double target = u * t.cum.back();
  const auto it = std::upper_bound(t.cum.begin(), t.cum.end(), target);
  const std::size_t i = std::min(static_cast<std::size_t>(it - t.cum.begin()), t.cum.size() - 1);
  const double seg = t.cum[i] - t.cum[i - 1];
  const double w = seg > 0 ? (target - t.cum[i - 1]) / seg : 0.0;
  return point_at_azimuth(t.az[i - 1] + w * (t.az[i] - t.az[i - 1]));
}

std::vector<Vec3> RidgeConic::sample(int segments) const {
  std::vector<Vec3> out;
  out.reserve(segments + 1);
  for (int i = 0; i <= segments; ++i) out.push_back(point_at(static_cast<double>(i) / segments));
  return out;
}

double RidgeConic::conic_residual(const Vec3& p) const {
  const double s = p.dot(e1), t = p.dot(e2);
  const auto& c = coeffs;
  return c[0] * s * s + c[1] * s * t + c[2] * t * t + c[3] * s + c[4] * t + c[5];
}

RidgeConic ridge_conic(const PlatonicSolid& solid, const Cone& a, const Cone& b, int face,
                       std::optional<int> third_apex) {
  if (face < 0 || face >= solid.face_count()) throw std::invalid_argument("face id out of range");
  const auto& cyc = solid.faces[face];
  const int n = static_cast<int>(cyc.size());
  const int pa = solid.position_in_face(face, a.apex_id);
  const int pb = solid.position_in_face(face, b.apex_id);
  if (pa < 0 || pb < 0) throw std::invalid_argument("ridge apices must be vertices of the face");
  if (pa == pb) throw std::invalid_argument("ridge apices must be distinct");
  const bool adjacent = (pa + 1) % n == pb || (pb + 1) % n == pa;
  const Vec3& A = a.apex;
  const Vec3& B = b.apex;

  if (n == 3) {
    const int third = cyc[3 - pa - pb];
    return RidgeConic(a, b, face, solid.vertices[third], 0.5 * (A + B));
  }
  if (n == 4) {
    if (adjacent) throw std::invalid_argument("square ridge apices must be diagonal");
    return RidgeConic(a, b, face, solid.vertices[cyc[(pa + 1) % 4]], solid.vertices[cyc[(pa + 3) % 4]]);
  }
  if (!third_apex) throw std::invalid_argument("pentagon ridge needs the module's third apex");
  const int pc = solid.position_in_face(face, *third_apex);
  if (pc < 0 || pc == pa || pc == pb) throw std::invalid_argument("third apex must be another face vertex");
  // Exactly one apex is non-adjacent to the other two.
  auto adj = [&](int p, int q) { return (p + 1) % n == q || (q + 1) % n == p; };
  int x = -1;
  for (int p : {pa, pb, pc}) {
    int others_adj = 0;
    for (int q : {pa, pb, pc})
      if (q != p && adj(p, q)) ++others_adj;
    if (others_adj == 0) x = p;
  }
  if (x < 0) throw std::invalid_argument("pentagon apices do not form a valid apex set");
  const int y = (x + 2) % 5, z = (x + 3) % 5;
  const Vec3 t = pentagon_triple_point(solid, face, cyc[x], cyc[y], cyc[z]);
  if (adjacent) return RidgeConic(a, b, face, 0.5 * (A + B), t);
  // Non-adjacent pair: start at the face vertex lying between them.
  const int between = (pa + 1) % n == (pb + n - 1) % n ? (pa + 1) % n : (pb + 1) % n;
  return RidgeConic(a, b, face, solid.vertices[cyc[between]], t);
}

double Module::radial_bound(int patch, double azimuth) const {
  const auto& pg = patches[patch];
  const Cone& c = cones[pg.cone_index];
  const Vec3 d = c.direction(azimuth);
  double r = std::numeric_limits<double>::infinity();
  for (std::size_t k = 0; k < cones.size(); ++k) {
    if (static_cast<int>(k) == pg.cone_index) continue;
    const Vec3& b = cones[k].apex;
    const double den = (b - c.apex).dot(d);
    if (den <= 0) continue;
    r = std::min(r, (1.0 - c.apex.dot(b)) / den);
  }
  return r;
}

Vec3 Module::boundary_point(int patch, double azimuth) const {
  return cones[patches[patch].cone_index].point(azimuth, radial_bound(patch, azimuth));
}

double Module::patch_area(int patch) const {
  const auto& pg = patches[patch];
  const double s = std::sin(cones[pg.cone_index].half_angle);
  auto f = [&](double az) {
    const double r = radial_bound(patch, az);
    return 0.5 * s * r * r;
  };
  std::vector<double> cuts{pg.az_begin};
  cuts.insert(cuts.end(), pg.breakpoints.begin(), pg.breakpoints.end());
  cuts.push_back(pg.az_end);
  double area = 0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) area += integrate(f, cuts[i], cuts[i + 1], 1e-13);
  return area;
}

Module build_module(const PlatonicSolid& solid, int face, int orientation) {
  Module m;
  m.face = face;
  m.orientation = orientation;
  m.apex_set = apex_set(solid, face, orientation);
  m.face_normal = solid.face_normal(face);
  m.face_offset = solid.face_offset(face);
  for (int v : m.apex_set) m.cones.push_back(cone_for_vertex(solid, v));

  const int k = static_cast<int>(m.apex_set.size());
  for (int i = 0; i < k; ++i)
    for (int j = i + 1; j < k; ++j) {
      std::optional<int> third;
      if (k == 3) third = m.apex_set[3 - i - j];
      m.ridges.push_back(ridge_conic(solid, m.cones[i], m.cones[j], face, third));
    }
  if (k == 3) m.triple_point = m.ridges.front().arc_end;

  const auto& cyc = solid.faces[face];
  const int n = static_cast<int>(cyc.size());
  auto in_apex = [&](int v) { return std::find(m.apex_set.begin(), m.apex_set.end(), v) != m.apex_set.end(); };

  for (int i = 0; i < k; ++i) {
    const int a = m.apex_set[i];
    const Cone& cone = m.cones[i];
    const int pos = solid.position_in_face(face, a);
    const int prev = cyc[(pos + n - 1) % n], next = cyc[(pos + 1) % n];
    PatchGeometry pg;
    pg.apex_id = a;
    pg.cone_index = i;
    const Vec3 A = solid.vertices[a];
    const double az_prev = cone.azimuth_of(solid.vertices[prev]);
    const double sweep = wrap_pi(cone.azimuth_of(solid.vertices[next]) - az_prev);
    int vb = prev, ve = next;
    pg.az_begin = az_prev;
    if (sweep < 0) {
      std::swap(vb, ve);
      pg.az_begin = az_prev + sweep;
    }
    if (pg.az_begin < 0) pg.az_begin += kTwoPi;
    pg.az_end = pg.az_begin + std::abs(sweep);
    pg.vertex_begin = vb;
    pg.vertex_end = ve;
    pg.edge_begin = solid.edge_index(a, vb);
    pg.edge_end = solid.edge_index(a, ve);
    pg.begin_full = !in_apex(vb);
    pg.end_full = !in_apex(ve);
    pg.point_begin = pg.begin_full ? solid.vertices[vb] : 0.5 * (A + solid.vertices[vb]);
    pg.point_end = pg.end_full ? solid.vertices[ve] : 0.5 * (A + solid.vertices[ve]);

    // Chain ridges from the begin point to the end point.
    Vec3 cur = pg.point_begin;
    std::vector<bool> used(m.ridges.size(), false);
    while (!same_point(cur, pg.point_end)) {
      bool found = false;
      for (std::size_t r = 0; r < m.ridges.size() && !found; ++r) {
        const auto& rc = m.ridges[r];
        if (used[r] || (rc.apex_a != a && rc.apex_b != a)) continue;
        if (same_point(rc.arc_start, cur)) {
          pg.boundary.push_back({static_cast<int>(r), false});
          cur = rc.arc_end;
          found = true;
        } else if (same_point(rc.arc_end, cur)) {
          pg.boundary.push_back({static_cast<int>(r), true});
          cur = rc.arc_start;
          found = true;
        }
        if (found) used[r] = true;
      }
      if (!found) throw std::logic_error("patch boundary does not chain through ridges");
      if (!same_point(cur, pg.point_end)) {
        double az = cone.azimuth_of(cur);
        while (az < pg.az_begin) az += kTwoPi;
        pg.breakpoints.push_back(az);
      }
    }
    m.patches.push_back(std::move(pg));
  }
  return m;
}

std::vector<Module> build_modules(const PlatonicSolid& solid, const Configuration& config) {
  validate(solid, config);
  std::vector<Module> out;
  for (int f = 0; f < solid.face_count(); ++f) out.push_back(build_module(solid, f, config.orientation[f]));
  return out;
}

const char* to_string(PointClass::Kind k) {
  switch (k) {
    case PointClass::Interior: return "interior";
    case PointClass::OnPatch: return "on-patch";
    case PointClass::OnRidge: return "on-ridge";
    case PointClass::OnFacePlane: return "on-face-plane";
    case PointClass::Exterior: return "exterior";
  }
  return "?";
}

PointClass classify_point(const Module& m, const Vec3& p, double tolerance) {
  const double h = m.face_normal.dot(p) - m.face_offset;
  if (h < -tolerance) return {PointClass::Exterior, -1};
  std::vector<int> on;
  for (std::size_t i = 0; i < m.cones.size(); ++i) {
    const double r = m.cones[i].residual(p);
    if (r > tolerance) return {PointClass::Exterior, -1};
    if (r >= -tolerance) on.push_back(static_cast<int>(i));
  }
  for (std::size_t i = 0; i < on.size(); ++i)
    if ((p - m.cones[on[i]].apex).norm() <= tolerance) return {PointClass::OnPatch, m.cones[on[i]].apex_id};
  if (on.size() >= 2) {
    for (std::size_t r = 0; r < m.ridges.size(); ++r) {
      const auto& rc = m.ridges[r];
      const bool a_on = std::any_of(on.begin(), on.end(), [&](int i) { return m.cones[i].apex_id == rc.apex_a; });
      const bool b_on = std::any_of(on.begin(), on.end(), [&](int i) { return m.cones[i].apex_id == rc.apex_b; });
      if (a_on && b_on && std::abs(rc.plane_normal.dot(p)) <= tolerance) return {PointClass::OnRidge, static_cast<int>(r)};
    }
  }
  if (!on.empty()) {
    // Shared generators belong to the patch of the nearer apex.
    int best = on.front();
    for (int i : on)
      if ((p - m.cones[i].apex).norm() < (p - m.cones[best].apex).norm()) best = i;
    return {PointClass::OnPatch, m.cones[best].apex_id};
  }
  if (h <= tolerance) return {PointClass::OnFacePlane, -1};
  return {PointClass::Interior, -1};
}

}  // namespace platonicon
