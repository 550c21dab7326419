#include "platonicon/roll.hpp"

#include "platonicon/tolerances.hpp"

#include "json.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <set>
#include <sstream>

namespace platonicon {

namespace {

const Vec3 kUp(0, 0, 1);

Eigen::Matrix3d body_frame(const Cone& c, double az) {
  const Vec3 d = c.direction(az), n = c.outward_normal(az);
  Eigen::Matrix3d B;
  B << d, n, d.cross(n);
  return B;
}

// Pose resting the generator at `az` on the ground, heading `psi`, apex at `p`.
Pose resting_pose(const Cone& c, double az, double psi, const Vec3& p) {
  const Vec3 u(std::cos(psi), std::sin(psi), 0);
  Eigen::Matrix3d W;
  W << u, -kUp, u.cross(-kUp);
  Pose pose;
  pose.rotation = Eigen::Quaterniond(W * body_frame(c, az).transpose()).normalized();
  pose.translation = p - pose.rotation * c.apex;
  return pose;
}

Eigen::Vector2d xy(const Vec3& v) { return {v.x(), v.y()}; }

double cross2(const Eigen::Vector2d& a, const Eigen::Vector2d& b) { return a.x() * b.y() - a.y() * b.x(); }

double polygon_area(const Eigen::Vector2d& apex, const std::vector<Eigen::Vector2d>& rim) {
  double a = 0;
  std::vector<Eigen::Vector2d> poly{apex};
  poly.insert(poly.end(), rim.begin(), rim.end());
  for (std::size_t i = 0; i < poly.size(); ++i) a += cross2(poly[i], poly[(i + 1) % poly.size()]);
  return 0.5 * std::abs(a);
}

struct Candidate {
  int patch;
  int end;
};

// Patches tangent to the ground along the contact line and lying across it.
std::vector<Candidate> find_candidates(const RollingBody& body, const Pose& pose, int from) {
  const Cone& cp = body.cone(from);
  const Vec3 P = pose.apply(cp.apex);
  const double exit_az = body.end_azimuth(from, 0);
  (void)exit_az;
  std::vector<Candidate> out;
  // Contact direction: the ground line through the pivot, taken from either end that is grounded.
  Vec3 u = Vec3::Zero();
  for (int e = 0; e < 2; ++e) {
    const Vec3 d = pose.rotation * cp.direction(body.end_azimuth(from, e));
    if (std::abs(d.z()) < tol::kTangent) u = d;
  }
  const Vec3 inside_from = pose.apply(body.interior_point(from)) - P;
  const double side_from = u.cross(inside_from).dot(kUp);
  for (int q = 0; q < body.patch_count(); ++q) {
    if (q == from) continue;
    const Cone& cq = body.cone(q);
    const Vec3 A = pose.apply(cq.apex);
    if (std::abs(A.z()) > tol::kTangent) continue;
    if ((A - P).cross(u).norm() > tol::kTangent) continue;
    for (int e = 0; e < 2; ++e) {
      const double az = body.end_azimuth(q, e);
      const Vec3 d = pose.rotation * cq.direction(az);
      if (std::abs(d.z()) > tol::kTangent || d.cross(u).norm() > tol::kTangent) continue;
      const Vec3 n = pose.rotation * cq.outward_normal(az);
      if ((n + kUp).norm() > tol::kTangent) continue;
      const double side = u.cross(pose.apply(body.interior_point(q)) - P).dot(kUp);
      if (side * side_from < 0 && std::abs(side) > tol::kTangent) out.push_back({q, e});
    }
  }
  return out;
}

}  // namespace

RollingBody::RollingBody(const PlatonicSolid& solid, const Configuration& config)
    : solid_(solid), config_(config), modules_(build_modules(solid, config)) {
  for (std::size_t m = 0; m < modules_.size(); ++m)
    for (std::size_t p = 0; p < modules_[m].patches.size(); ++p) {
      index_.push_back({static_cast<int>(m), static_cast<int>(p)});
      areas_.push_back(modules_[m].patch_area(static_cast<int>(p)));
    }
  constexpr int kAz = 16, kRad = 8;
  for (int p = 0; p < patch_count(); ++p) {
    const auto& g = geometry(p);
    for (int i = 0; i <= kAz; ++i) {
      const double az = g.az_begin + (g.az_end - g.az_begin) * i / kAz;
      const double R = radial_bound(p, az);
      for (int j = 1; j <= kRad; ++j) cloud_.push_back(cone(p).point(az, R * j / kRad));
    }
  }
}

double RollingBody::end_azimuth(int patch, int end) const {
  const auto& g = geometry(patch);
  return end == 0 ? g.az_begin : g.az_end;
}

int RollingBody::end_edge(int patch, int end) const {
  const auto& g = geometry(patch);
  return end == 0 ? g.edge_begin : g.edge_end;
}

Vec3 RollingBody::interior_point(int patch) const {
  const auto& g = geometry(patch);
  const double az = 0.5 * (g.az_begin + g.az_end);
  return cone(patch).point(az, 0.5 * radial_bound(patch, az));
}

RollTrace simulate_roll(const RollingBody& body, const BranchPolicy& policy, int max_events,
                        const RollOptions& opt) {
  RollTrace tr;
  tr.coverage.assign(body.patch_count(), 0);
  tr.min_support = std::numeric_limits<double>::infinity();
  if (max_events <= 0 || body.patch_count() == 0) return tr;

  int patch = opt.start_patch, entry = opt.start_end;
  Pose pose = resting_pose(body.cone(patch), body.end_azimuth(patch, entry), 0.0, Vec3::Zero());
  const Pose start_pose = pose;
  std::set<std::pair<int, int>> seen;
  const auto start_key = std::make_pair(patch, entry);
  int events = 0;

  while (true) {
    if (seen.count({patch, entry})) {
      tr.closed = std::make_pair(patch, entry) == start_key;
      if (opt.stop_at_closure || !tr.closed) break;
      seen.clear();
    }
    if (events >= max_events) {
      tr.incomplete = true;
      break;
    }
    if (tr.cycle_sweeps == 0 && !tr.sweeps.empty() && std::make_pair(patch, entry) == start_key) {
      tr.cycle_sweeps = static_cast<int>(tr.sweeps.size());
      const Eigen::Matrix3d M = (pose.rotation * start_pose.rotation.inverse()).toRotationMatrix();
      tr.attitude_error = (M * kUp - kUp).norm() + std::abs(pose.translation.z() - start_pose.translation.z());
      tr.cycle_heading_change = std::atan2(M(1, 0), M(0, 0));
    }
    seen.insert({patch, entry});
    tr.events.push_back({RollEvent::PatchEnter, patch, body.end_edge(patch, entry), 0, BranchChoice::Smooth});
    ++tr.coverage[patch];

    const Cone& c = body.cone(patch);
    const double az0 = body.end_azimuth(patch, entry);
    const double az1 = body.end_azimuth(patch, 1 - entry);
    const Vec3 P = pose.apply(c.apex);
    const Eigen::Quaterniond q0 = pose.rotation;
    const Vec3 t0 = pose.translation;
    const double s = std::sin(c.half_angle);

    Sweep sw;
    sw.patch = patch;
    sw.entry_end = entry;
    sw.apex = xy(P);
    const int n = std::max(2, opt.samples_per_sweep);
    for (int i = 0; i <= n; ++i) {
      const double dphi = (az1 - az0) * i / n;
      const Eigen::Quaterniond rz(Eigen::AngleAxisd(s * dphi, kUp));
      const Eigen::Quaterniond rw(Eigen::AngleAxisd(-dphi, c.axis));
      Pose cur;
      cur.rotation = (rz * q0 * rw).normalized();
      cur.translation = rz * (t0 - P) + P;
      tr.heights.push_back(cur.translation.z());
      tr.com_path.push_back(xy(cur.translation));
      const double az = az0 + dphi;
      sw.rim.push_back(xy(cur.apply(c.point(az, body.radial_bound(patch, az)))));
      if (opt.support_check)
        for (const auto& p : body.support_cloud()) tr.min_support = std::min(tr.min_support, cur.apply(p).z());
      if (i == n) pose = cur;
    }
    tr.sweeps.push_back(std::move(sw));
    ++events;

    const int exit_end = 1 - entry;
    const int edge = body.end_edge(patch, exit_end);
    auto cands = find_candidates(body, pose, patch);
    tr.events.push_back({RollEvent::EdgeCross, patch, edge, static_cast<int>(cands.size()), BranchChoice::Smooth});
    if (cands.empty()) {
      std::ostringstream os;
      os << "no supporting candidate leaving patch " << patch << " across edge " << edge << "; pose q=("
         << pose.rotation.w() << "," << pose.rotation.x() << "," << pose.rotation.y() << "," << pose.rotation.z()
         << ") t=(" << pose.translation.transpose() << ")";
      throw GeometryInconsistency(os.str());
    }
    Candidate next = cands.front();
    if (cands.size() > 1) {
      BranchChoice choice = BranchChoice::Smooth;
      if (policy.kind == BranchPolicy::Scripted) {
        auto it = policy.script.find(edge);
        if (it != policy.script.end()) choice = it->second;
        const int apex = body.cone(patch).apex_id;
        for (const auto& cd : cands) {
          const bool same = body.cone(cd.patch).apex_id == apex;
          if (same == (choice == BranchChoice::Smooth)) {
            next = cd;
            break;
          }
        }
      } else {
        choice = body.cone(next.patch).apex_id == body.cone(patch).apex_id ? BranchChoice::Smooth
                                                                           : BranchChoice::Switch;
      }
      tr.events.push_back({RollEvent::Branch, next.patch, edge, static_cast<int>(cands.size()), choice});
    }
    pose.rotation.normalize();
    patch = next.patch;
    entry = next.end;
  }
  if (opt.support_check && tr.sweeps.empty()) tr.min_support = 0;
  return tr;
}

RollTrace simulate_roll(const PlatonicSolid& solid, const Configuration& config, const BranchPolicy& policy,
                        int max_events, const RollOptions& options) {
  return simulate_roll(RollingBody(solid, config), policy, max_events, options);
}

std::vector<std::vector<Transition>> probe_transitions(const RollingBody& body) {
  std::vector<std::vector<Transition>> out(body.patch_count(), std::vector<Transition>(2));
  for (int p = 0; p < body.patch_count(); ++p)
    for (int e = 0; e < 2; ++e) {
      const Pose pose = resting_pose(body.cone(p), body.end_azimuth(p, e), 0.0, Vec3::Zero());
      Transition t;
      t.edge = body.end_edge(p, e);
      for (const auto& c : find_candidates(body, pose, p)) t.next.push_back({c.patch, c.end});
      out[p][e] = std::move(t);
    }
  return out;
}

Cycle canonical_cycle(const Cycle& c) {
  if (c.empty()) return c;
  Cycle best;
  for (int dir = 0; dir < 2; ++dir) {
    Cycle base = c;
    if (dir) std::reverse(base.begin(), base.end());
    for (std::size_t r = 0; r < base.size(); ++r) {
      Cycle rot(base.begin() + r, base.end());
      rot.insert(rot.end(), base.begin(), base.begin() + r);
      if (best.empty() || rot < best) best = rot;
    }
  }
  return best;
}

std::vector<ModeReport> list_modes(const RollingBody& body, bool with_footprints) {
  const auto trans = probe_transitions(body);
  const int np = body.patch_count();
  std::set<int> branch_set;
  for (int p = 0; p < np; ++p)
    for (int e = 0; e < 2; ++e) {
      if (trans[p][e].next.empty())
        throw GeometryInconsistency("no candidate leaving patch " + std::to_string(p) + " end " + std::to_string(e));
      if (trans[p][e].next.size() > 1) branch_set.insert(trans[p][e].edge);
    }
  const std::vector<int> branch(branch_set.begin(), branch_set.end());
  double total_area = 0;
  for (int p = 0; p < np; ++p) total_area += body.patch_area(p);

  std::vector<ModeReport> modes;
  for (std::uint32_t bits = 0; bits < (1u << branch.size()); ++bits) {
    ModeReport mr;
    mr.branch_edges = branch;
    mr.switch_bits = bits;
    std::map<int, BranchChoice> script;
    for (std::size_t i = 0; i < branch.size(); ++i)
      script[branch[i]] = ((bits >> i) & 1u) ? BranchChoice::Switch : BranchChoice::Smooth;

    // Deterministic successor of each (patch, exit end) state.
    auto successor = [&](int state) {
      const int p = state / 2, x = state % 2;
      const auto& t = trans[p][x];
      std::array<int, 2> pick = t.next.front();
      if (t.next.size() > 1) {
        const bool smooth = script[t.edge] == BranchChoice::Smooth;
        for (const auto& c : t.next)
          if ((body.cone(c[0]).apex_id == body.cone(p).apex_id) == smooth) {
            pick = c;
            break;
          }
      }
      return 2 * pick[0] + (1 - pick[1]);
    };
    std::set<Cycle> unique;
    std::vector<int> color(2 * np, 0);
    for (int s0 = 0; s0 < 2 * np; ++s0) {
      if (color[s0]) continue;
      std::vector<int> path;
      int s = s0;
      while (!color[s]) {
        color[s] = 1;
        path.push_back(s);
        s = successor(s);
      }
      if (color[s] == 1) {
        const auto it = std::find(path.begin(), path.end(), s);
        Cycle states(it, path.end());
        Cycle patches;
        for (int st : states) patches.push_back(st / 2);
        const Cycle key = canonical_cycle(patches);
        if (!unique.count(key)) {
          unique.insert(key);
          ModeCycle mc;
          mc.patches = patches;
          mc.start_end = 1 - states.front() % 2;
          std::set<int> distinct(patches.begin(), patches.end());
          mc.injective = distinct.size() == patches.size();
          mc.coverage = static_cast<double>(distinct.size()) / np;
          for (int p : distinct) mc.visited_area += body.patch_area(p);
          if (with_footprints) {
            RollOptions ro;
            ro.start_patch = patches.front();
            ro.start_end = mc.start_end;
            const auto tr = simulate_roll(body, BranchPolicy::scripted(script), static_cast<int>(patches.size()) + 1, ro);
            const auto fp = develop_footprint(tr);
            mc.footprint_length = fp.com_length;
            mc.footprint_area = fp.area;
          }
          mr.cycles.push_back(std::move(mc));
        }
      }
      for (int st : path) color[st] = 2;
    }
    std::sort(mr.cycles.begin(), mr.cycles.end(),
              [](const ModeCycle& a, const ModeCycle& b) { return canonical_cycle(a.patches) < canonical_cycle(b.patches); });
    for (const auto& c : mr.cycles) {
      mr.coverage = std::max(mr.coverage, c.coverage);
      if (c.injective && static_cast<int>(c.patches.size()) == np) mr.full = true;
    }
    (void)total_area;
    modes.push_back(std::move(mr));
  }
  return modes;
}

Footprint develop_footprint(const RollTrace& trace) {
  Footprint fp;
  if (trace.sweeps.empty()) return fp;
  if (!trace.closed) throw std::invalid_argument("footprint needs a closed trace");
  const std::size_t n = trace.cycle_sweeps > 0 ? static_cast<std::size_t>(trace.cycle_sweeps) : trace.sweeps.size();
  const std::size_t per = trace.heights.size() / trace.sweeps.size();
  for (std::size_t i = 0; i < n; ++i) {
    fp.sectors.push_back(trace.sweeps[i]);
    fp.area += polygon_area(trace.sweeps[i].apex, trace.sweeps[i].rim);
  }
  fp.com_path.assign(trace.com_path.begin(), trace.com_path.begin() + static_cast<std::ptrdiff_t>(n * per));
  for (std::size_t i = 1; i < fp.com_path.size(); ++i) fp.com_length += (fp.com_path[i] - fp.com_path[i - 1]).norm();
  return fp;
}

std::string trace_json(const RollingBody& body, const RollTrace& tr) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["solid"] = body.solid().name;
  j["configuration"] = encoding_string(body.config().orientation);
  j["closed"] = tr.closed;
  j["incomplete"] = tr.incomplete;
  j["cycle_sweeps"] = tr.cycle_sweeps;
  j["cycle_heading_change"] = tr.cycle_heading_change;
  j["attitude_error"] = tr.attitude_error;
  double hmin = 0, hmax = 0;
  if (!tr.heights.empty()) {
    hmin = *std::min_element(tr.heights.begin(), tr.heights.end());
    hmax = *std::max_element(tr.heights.begin(), tr.heights.end());
  }
  j["height_min"] = hmin;
  j["height_max"] = hmax;
  j["coverage"] = tr.coverage;
  auto& ev = j["events"] = nlohmann::ordered_json::array();
  for (const auto& e : tr.events) {
    nlohmann::ordered_json x;
    switch (e.type) {
      case RollEvent::PatchEnter: x["type"] = "patch_enter"; break;
      case RollEvent::EdgeCross: x["type"] = "edge_cross"; break;
      case RollEvent::Branch: x["type"] = "branch"; break;
    }
    x["patch"] = e.patch;
    x["edge"] = e.edge;
    if (e.type != RollEvent::PatchEnter) x["candidates"] = e.candidates;
    if (e.type == RollEvent::Branch) x["choice"] = e.choice == BranchChoice::Smooth ? "smooth" : "switch";
    ev.push_back(std::move(x));
  }
  return j.dump(2) + "\n";
}

std::string footprint_svg(const Footprint& fp) {
  double lo_x = 0, lo_y = 0, hi_x = 0, hi_y = 0;
  bool first = true;
  auto grow = [&](const Eigen::Vector2d& p) {
    if (first) {
      lo_x = hi_x = p.x();
      lo_y = hi_y = p.y();
      first = false;
    }
    lo_x = std::min(lo_x, p.x());
    hi_x = std::max(hi_x, p.x());
    lo_y = std::min(lo_y, p.y());
    hi_y = std::max(hi_y, p.y());
  };
  for (const auto& s : fp.sectors) {
    grow(s.apex);
    for (const auto& p : s.rim) grow(p);
  }
  const double pad = 0.1;
  char buf[256];
  std::ostringstream os;
  std::snprintf(buf, sizeof buf,
                "<svg xmlns=\"http://www.w3.org/2000/svg\" viewBox=\"%.6f %.6f %.6f %.6f\">\n", lo_x - pad, -hi_y - pad,
                hi_x - lo_x + 2 * pad, hi_y - lo_y + 2 * pad);
  os << buf;
  for (const auto& s : fp.sectors) {
    os << "  <polygon fill=\"#d8e4f0\" stroke=\"#336\" stroke-width=\"0.004\" points=\"";
    std::snprintf(buf, sizeof buf, "%.6f,%.6f", s.apex.x(), -s.apex.y());
    os << buf;
    for (const auto& p : s.rim) {
      std::snprintf(buf, sizeof buf, " %.6f,%.6f", p.x(), -p.y());
      os << buf;
    }
    os << "\"/>\n";
  }
  os << "  <polyline fill=\"none\" stroke=\"#c00\" stroke-width=\"0.006\" points=\"";
  for (std::size_t i = 0; i < fp.com_path.size(); ++i) {
    std::snprintf(buf, sizeof buf, "%s%.6f,%.6f", i ? " " : "", fp.com_path[i].x(), -fp.com_path[i].y());
    os << buf;
  }
  os << "\"/>\n</svg>\n";
  return os.str();
}

}  // namespace platonicon
