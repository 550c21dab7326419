#include "platonicon/verify.hpp"

#include "platonicon/cone.hpp"
#include "platonicon/mesh.hpp"
#include "platonicon/roll.hpp"
#include "platonicon/tolerances.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <random>
#include <set>
#include <stdexcept>

namespace platonicon {

namespace {

class Tally {
 public:
  Tally(std::string suite, const PlatonicSolid& s) : suite_(std::move(suite)), solid_(s.name) {}

  CheckResult& check(const std::string& name, double tolerance = 0) {
    for (auto& r : results_)
      if (r.name == name) return r;
    results_.push_back({suite_, solid_, name, 0, 0, 0, tolerance});
    return results_.back();
  }
  void record(const std::string& name, bool ok, double err = 0, double tolerance = 0) {
    auto& r = check(name, tolerance);
    ++r.total;
    if (ok) ++r.passed;
    r.worst = std::max(r.worst, err);
  }
  void within(const std::string& name, double err, double tolerance) { record(name, err <= tolerance, err, tolerance); }
  std::vector<CheckResult> take() { return std::move(results_); }

 private:
  std::string suite_, solid_;
  std::vector<CheckResult> results_;
};

double angle(const Vec3& a, const Vec3& b) { return std::atan2(a.cross(b).norm(), a.dot(b)); }

// Points of every patch surface: grid in azimuth and radius up to the bound.
std::vector<Vec3> module_surface_samples(const Module& m, int naz, int nr) {
  std::vector<Vec3> out;
  for (std::size_t p = 0; p < m.patches.size(); ++p) {
    const auto& pg = m.patches[p];
    const Cone& c = m.cones[pg.cone_index];
    for (int i = 0; i <= naz; ++i) {
      const double az = pg.az_begin + (pg.az_end - pg.az_begin) * i / naz;
      const double R = m.radial_bound(static_cast<int>(p), az);
      for (int j = 0; j <= nr; ++j) out.push_back(c.point(az, R * j / nr));
    }
  }
  return out;
}

}  // namespace

std::vector<Configuration> class_representatives(const PlatonicSolid& solid, RuleSet rule) {
  std::vector<Configuration> out;
  for (const auto& c : enumerate_classes(solid, rule).classes) out.push_back({solid.kind, c.info.canonical});
  return out;
}

AgreementStats oracle_agreement(const PlatonicSolid& s, RuleSet rule) {
  AgreementStats st;
  st.solid = s.name;
  st.rule = std::string(rule_set_name(rule));
  for (const auto& cfg : enumerate_configs(s)) {
    ++st.configs;
    const SeamGraph g(s, cfg);
    const bool sd = is_developable(g, rule).developable;
    const auto modes = list_modes(RollingBody(s, cfg), false);
    const bool od = std::any_of(modes.begin(), modes.end(), [](const ModeReport& m) { return m.full; });
    st.seam_developable += sd;
    st.oracle_developable += od;
    bool agree = sd == od;
    st.developability_agree += agree;
    const auto sm = g.pairing_modes(rule);
    if (!sm.empty()) {
      ++st.modes_compared;
      bool same = sm.size() == modes.size();
      for (std::size_t i = 0; same && i < sm.size(); ++i) {
        std::multiset<Cycle> a, b;
        for (const auto& c : g.cycle_decomposition(sm[i])) a.insert(canonical_cycle(c));
        for (const auto& c : modes[i].cycles) b.insert(canonical_cycle(c.patches));
        same = a == b;
      }
      st.modes_agree += same;
      agree = agree && same;
    }
    if (!agree && st.disagreements.size() < 8) st.disagreements.push_back(encoding_string(cfg.orientation));
  }
  return st;
}

std::vector<CheckResult> verify_geometry(const PlatonicSolid& s, const VerifyOptions& opt) {
  Tally t("geometry", s);
  static const std::map<SolidKind, std::array<int, 3>> kCounts = {
      {SolidKind::Tetrahedron, {4, 6, 4}}, {SolidKind::Cube, {8, 12, 6}}, {SolidKind::Octahedron, {6, 12, 8}},
      {SolidKind::Dodecahedron, {20, 30, 12}}, {SolidKind::Icosahedron, {12, 30, 20}}};
  const auto& vef = kCounts.at(s.kind);
  t.record("vertex/edge/face counts", s.vertex_count() == vef[0] && s.edge_count() == vef[1] && s.face_count() == vef[2]);
  t.record("euler characteristic 2", s.vertex_count() - s.edge_count() + s.face_count() == 2);
  for (const auto& v : s.vertices) t.within("unit circumradius", std::abs(v.norm() - 1), tol::kCoord);
  const double side = (s.vertices[s.edges[0][0]] - s.vertices[s.edges[0][1]]).norm();
  for (int f = 0; f < s.face_count(); ++f) {
    const auto& c = s.faces[f];
    const int n = static_cast<int>(c.size());
    const Vec3 nrm = s.face_normal(f);
    for (int i = 0; i < n; ++i) {
      const Vec3 a = s.vertices[c[i]], b = s.vertices[c[(i + 1) % n]], d = s.vertices[c[(i + 2) % n]];
      t.within("faces planar", std::abs(nrm.dot(a) - s.face_offset(f)), tol::kCoord);
      t.within("faces regular (sides)", std::abs((b - a).norm() - side), tol::kCoord);
      t.within("faces regular (angles)", std::abs(angle(a - b, d - b) - std::numbers::pi * (n - 2) / n), tol::kCoord);
    }
    t.record("face cycles outward", nrm.dot(s.face_center(f)) > 0);
  }
  for (const auto& ef : s.edge_faces) t.record("edges shared by two faces", ef[0] != ef[1]);

  for (bool proper : {true, false}) {
    const auto g = symmetry_group(s, proper);
    const std::size_t expect = (s.kind == SolidKind::Tetrahedron ? 12 : s.kind == SolidKind::Cube || s.kind == SolidKind::Octahedron ? 24 : 60) * (proper ? 1 : 2);
    t.record("symmetry group order", g.order() == expect);
    std::set<std::vector<int>> perms;
    for (const auto& op : g.ops) perms.insert(op.vertex_perm);
    for (const auto& a : g.ops)
      for (const auto& b : g.ops) t.record("symmetry group closed", perms.count(compose(a, b).vertex_perm) > 0);
    for (const auto& op : g.ops) {
      const Eigen::Matrix3d M = op.matrix(s);
      double err = 0;
      for (int v = 0; v < s.vertex_count(); ++v) err = std::max(err, (M * s.vertices[v] - s.vertices[op.vertex_perm[v]]).norm());
      t.within("symmetry maps vertex set", err, tol::kCoord);
    }
  }
  t.record("dual involution", dual_of(dual_of(s.kind)) == s.kind);

  const double alpha = cone_half_angle(s);
  for (int v = 0; v < s.vertex_count(); ++v) {
    const Cone c = cone_for_vertex(s, v);
    for (int w : s.vertex_neighbors(v)) {
      t.within("cone law: edge-axis angle = dual dihedral / 2", std::abs(angle(s.vertices[w] - s.vertices[v], c.axis) - alpha), tol::kAngle);
    }
    for (int i = 0; i < 36; ++i) {
      const double az = 2 * std::numbers::pi * i / 36;
      t.within("constant support distance", std::abs(c.outward_normal(az).dot(c.apex) - std::sin(alpha)), tol::kAngle);
    }
  }
  for (const auto& e : s.edges) {
    const Cone a = cone_for_vertex(s, e[0]), b = cone_for_vertex(s, e[1]);
    const double za = a.azimuth_of(b.apex), zb = b.azimuth_of(a.apex);
    t.within("tangent planes coincide along edges", (a.outward_normal(za) - b.outward_normal(zb)).norm(), tol::kTangent);
  }

  const int k = orientation_count(s.face_sides());
  for (int f = 0; f < s.face_count(); ++f)
    for (int o = 0; o < k; ++o) {
      const Module m = build_module(s, f, o);
      for (const auto& r : m.ridges) {
        const auto pts = r.sample(200);
        for (std::size_t i = 0; i < pts.size(); ++i) {
          const double res = std::max(std::abs(r.cone_a().residual(pts[i])), std::abs(r.cone_b().residual(pts[i])));
          t.within("ridge on both cones", res, tol::kSurface);
          t.within("ridge in bisector plane", std::abs(r.plane_normal.dot(pts[i])), tol::kSurface);
          if (i > 0 && i + 1 < pts.size()) t.record("ridge above face", m.face_normal.dot(pts[i]) > m.face_offset + tol::kSurface);
        }
      }
      if (m.ridges.size() == 3) {
        double spread = 0;
        for (const auto& r : m.ridges) spread = std::max(spread, (r.arc_end - *m.triple_point).norm());
        const auto& r0 = m.ridges[0];
        const Vec3 tp = *m.triple_point;
        const double on = std::max({std::abs(m.cones[0].residual(tp)), std::abs(m.cones[1].residual(tp)), std::abs(m.cones[2].residual(tp))});
        t.within("pentagon ridges concurrent", std::max(spread, on + std::abs(r0.plane_normal.dot(tp))), tol::kTriplePoint);
      }
      for (const auto& p : module_surface_samples(m, 24, 12)) t.within("module inside circumsphere", std::max(0.0, p.norm() - 1), tol::kSurface);
      // Face polygon is the module's trace on its plane.
      const Vec3 ctr = s.face_center(f);
      for (int v : s.faces[f]) {
        for (double tt : {0.25, 0.5, 0.9, 0.999}) {
          const auto pc = classify_point(m, ctr + tt * (s.vertices[v] - ctr));
          t.record("face polygon inside module", pc.kind == PointClass::OnFacePlane);
        }
      }
      const auto& cyc = s.faces[f];
      for (std::size_t i = 0; i < cyc.size(); ++i) {
        const Vec3 mid = 0.5 * (s.vertices[cyc[i]] + s.vertices[cyc[(i + 1) % cyc.size()]]);
        const auto pc = classify_point(m, ctr + 1.01 * (mid - ctr));
        t.record("face plane outside polygon excluded", pc.kind == PointClass::Exterior);
      }
      t.record("centroid exterior to module", classify_point(m, s.centroid).kind == PointClass::Exterior);
    }

  const auto reps = class_representatives(s, opt.rule);
  if (!reps.empty()) {
    const auto modules = build_modules(s, reps.front());
    auto on_surface = [&](const Vec3& p) {
      bool on = false, inside = false;
      for (const auto& m : modules) {
        const auto k2 = classify_point(m, p).kind;
        on = on || k2 == PointClass::OnPatch || k2 == PointClass::OnRidge;
        inside = inside || k2 == PointClass::Interior;
      }
      return on && !inside;
    };
    for (const auto& v : s.vertices) t.record("circumscription: vertices on surface", on_surface(v));
    for (const auto& e : s.edges)
      for (int i = 0; i <= opt.edge_samples; ++i) {
        const double u = static_cast<double>(i) / opt.edge_samples;
        t.record("circumscription: edges on surface", on_surface((1 - u) * s.vertices[e[0]] + u * s.vertices[e[1]]));
      }
  }
  return t.take();
}

std::vector<CheckResult> verify_combinatorics(const PlatonicSolid& s, const VerifyOptions& opt) {
  Tally t("combinatorics", s);
  const ConfigSpace space(s, symmetry_group(s, false));
  const bool small = s.face_count() <= 8;
  std::vector<Configuration> configs;
  if (small) {
    for (const auto& c : enumerate_configs(s)) configs.push_back(c);
  } else {
    std::mt19937_64 rng(20240521);
    const ConfigRange range(s);
    std::uniform_int_distribution<std::uint64_t> pick(0, range.total() - 1);
    for (int i = 0; i < 400; ++i) configs.push_back({s.kind, range.at(pick(rng))});
  }
  static const std::map<SolidKind, int> kPatches = {{SolidKind::Tetrahedron, 8}, {SolidKind::Cube, 12}, {SolidKind::Octahedron, 16},
                                                     {SolidKind::Dodecahedron, 36}, {SolidKind::Icosahedron, 40}};
  std::map<Encoding, std::size_t> orbit_of;
  for (const auto& cfg : configs) {
    const SeamGraph g(s, cfg);
    t.record("patch count", g.patch_count() == kPatches.at(s.kind));
    std::size_t slots = 0;
    int four = 0;
    bool odd = false;
    for (const auto& es : g.edge_slots()) {
      slots += es.slots.size();
      const auto& ef = s.edge_faces[es.edge];
      const int a = es.count_from(ef[0]), b = es.count_from(ef[1]);
      t.record("each face contributes 1 or 2 slots", a >= 1 && a <= 2 && b >= 1 && b <= 2);
      if (s.kind == SolidKind::Cube) t.record("cube edges have one slot per side", a == 1 && b == 1);
      odd = odd || (es.slots.size() % 2 == 1);
      if (es.slots.size() == 4) ++four;
    }
    t.record("slot total = 2 x patches", slots == 2 * g.patches().size());
    const auto modes = g.pairing_modes(opt.rule);
    if (odd) t.record("odd-slot edge gives no modes", modes.empty());
    else if (opt.rule == RuleSet::TangentAlternation) t.record("mode count = 2^b", modes.size() == (1u << four));
    for (const auto& m : modes) {
      std::size_t total = 0;
      for (const auto& c : g.cycle_decomposition(m)) total += c.size();
      t.record("cycles partition patches", total == g.patches().size());
    }
    const bool dev = is_developable(g, opt.rule).developable;
    const auto info = space.class_info(cfg.orientation);
    t.record("orbit size divides group order", space.group().order() % info.orbit_size == 0);
    // Equivariance on a few images per configuration.
    for (std::size_t op = 0; op < space.group().order(); op += small ? 1 : 17) {
      const Configuration img{s.kind, space.apply(op, cfg.orientation)};
      t.record("developability constant on orbits", is_developable(s, img, opt.rule).developable == dev);
      t.record("canonical form orbit invariant", space.canonicalize(img.orientation, true) == info.canonical);
    }
    if (small) orbit_of[info.canonical] = info.orbit_size;
  }
  if (small) {
    std::size_t sum = 0;
    for (const auto& [k, v] : orbit_of) sum += v;
    t.record("orbit sizes partition all configurations", sum == configs.size());
    std::size_t raw = 0;
    for (const auto& cfg : configs) raw += is_developable(s, cfg, opt.rule).developable;
    const auto rep = enumerate_classes(s, opt.rule);
    t.record("enumeration orbit sum equals raw scan", rep.raw_count() == raw);
  }
  return t.take();
}

std::vector<CheckResult> verify_rolling(const PlatonicSolid& s, const VerifyOptions& opt) {
  Tally t("rolling", s);
  const double h = std::sin(cone_half_angle(s));
  for (const auto& cfg : class_representatives(s, opt.rule)) {
    const RollingBody body(s, cfg);
    const SeamGraph g(s, cfg);
    const auto trans = probe_transitions(body);
    for (int p = 0; p < body.patch_count(); ++p)
      for (int e = 0; e < 2; ++e) {
        const auto& tr = trans[p][e];
        const auto& ef = s.edge_faces[tr.edge];
        const int far = ef[0] == g.patches()[p].face ? ef[1] : ef[0];
        t.record("candidates = far-side slots", static_cast<int>(tr.next.size()) == g.edge_slots()[tr.edge].count_from(far));
      }
    const auto modes = list_modes(body);
    const auto seam_modes = g.pairing_modes(RuleSet::TangentAlternation);
    t.record("oracle and seam mode counts agree", modes.size() == seam_modes.size());
    for (std::size_t i = 0; i < std::min(modes.size(), seam_modes.size()); ++i) {
      std::multiset<Cycle> a, b;
      for (const auto& c : g.cycle_decomposition(seam_modes[i])) a.insert(canonical_cycle(c));
      for (const auto& c : modes[i].cycles) b.insert(canonical_cycle(c.patches));
      t.record("oracle cycles match seam cycles", a == b);
    }
    for (const auto& m : modes) {
      if (!m.full) continue;
      const auto& cyc = m.cycles.front();
      const ModeCycle* full = nullptr;
      for (const auto& c : m.cycles)
        if (c.injective && static_cast<int>(c.patches.size()) == body.patch_count()) full = &c;
      if (!full) continue;
      (void)cyc;
      t.within("footprint area = patch area", std::abs(full->footprint_area - full->visited_area) / full->visited_area, 0.005);
      std::map<int, BranchChoice> script;
      for (std::size_t i = 0; i < m.branch_edges.size(); ++i)
        script[m.branch_edges[i]] = ((m.switch_bits >> i) & 1u) ? BranchChoice::Switch : BranchChoice::Smooth;
      RollOptions ro;
      ro.start_patch = full->patches.front();
      ro.start_end = full->start_end;
      ro.stop_at_closure = false;
      ro.support_check = true;
      ro.samples_per_sweep = 16;
      const auto tr = simulate_roll(body, BranchPolicy::scripted(script), 3 * body.patch_count(), ro);
      double dev = 0;
      for (double z : tr.heights) dev = std::max(dev, std::abs(z - h) / h);
      t.within("constant centroid height", dev, tol::kPose);
      t.within("ground plane supports body", std::max(0.0, -tr.min_support), tol::kTangent);
      t.record("trace closes", tr.closed && tr.cycle_sweeps == body.patch_count());
      t.within("closure attitude", tr.attitude_error, tol::kPose);
      break;
    }
  }
  return t.take();
}

std::vector<CheckResult> verify_mesh(const PlatonicSolid& s, const VerifyOptions& opt) {
  Tally t("mesh", s);
  const double vs = solid_volume(s), vsphere = 4 * std::numbers::pi / 3;
  for (const auto& cfg : class_representatives(s, opt.rule)) {
    const Mesh m = build_mesh(s, cfg, opt.mesh_resolution);
    const auto topo = analyze_topology(m);
    t.record("closed manifold", topo.closed_manifold());
    t.record("euler characteristic 2", topo.euler == 2);
    const double v = signed_volume(m);
    t.record("solid < platonicon < circumsphere volume", vs < v && v < vsphere);
    const auto sc = check_surface(m, s, cfg);
    t.within("vertices inside circumsphere", std::max(0.0, sc.max_radius - 1), tol::kSurface);
    t.within("vertices on analytic patches", sc.max_vertex_residual, tol::kSurface);
    t.within("deviation within twice the chord bound", sc.worst_deviation_ratio, 1.0);
    t.record("binary STL deterministic", export_mesh(m, MeshFormat::StlBinary) == export_mesh(build_mesh(s, cfg, opt.mesh_resolution), MeshFormat::StlBinary));
    const double v2 = signed_volume(build_mesh(s, cfg, 2 * opt.mesh_resolution));
    const double v4 = signed_volume(build_mesh(s, cfg, 4 * opt.mesh_resolution));
    const double ratio = std::abs(v4 - v2) / std::max(std::abs(v2 - v), 1e-300);
    t.within("volume converges under refinement", ratio, 0.5);
    t.record("volume increases under refinement", v < v2 && v2 < v4);
  }
  return t.take();
}

std::vector<CheckResult> run_suite(const std::string& suite, const PlatonicSolid& solid, const VerifyOptions& opt) {
  std::vector<CheckResult> out;
  auto add = [&](std::vector<CheckResult> r) { out.insert(out.end(), r.begin(), r.end()); };
  const bool all = suite == "all";
  if (!all && suite != "geometry" && suite != "combinatorics" && suite != "rolling" && suite != "mesh")
    throw std::invalid_argument("unknown suite '" + suite + "'; valid: geometry, combinatorics, rolling, mesh, all");
  if (all || suite == "geometry") add(verify_geometry(solid, opt));
  if (all || suite == "combinatorics") add(verify_combinatorics(solid, opt));
  if (all || suite == "rolling") add(verify_rolling(solid, opt));
  if (all || suite == "mesh") add(verify_mesh(solid, opt));
  return out;
}

}  // namespace platonicon
