#pragma once

#include "platonicon/cone.hpp"
#include "platonicon/config.hpp"

#include <Eigen/Geometry>

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

namespace platonicon {

using Cycle = std::vector<int>;

// Rigid placement: world = rotation * body + translation. The ground is z = 0
// and the body rests on it from above.
struct Pose {
  Eigen::Quaterniond rotation = Eigen::Quaterniond::Identity();
  Vec3 translation = Vec3::Zero();

  Vec3 apply(const Vec3& p) const { return rotation * p + translation; }
};

class GeometryInconsistency : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// All patches of a configured Platonicon, indexed like SeamGraph patches
// (face order, then apex-set order). End 0 is the az_begin generator.
class RollingBody {
 public:
  RollingBody(const PlatonicSolid& solid, const Configuration& config);

  const PlatonicSolid& solid() const { return solid_; }
  const Configuration& config() const { return config_; }
  const std::vector<Module>& modules() const { return modules_; }
  int patch_count() const { return static_cast<int>(index_.size()); }
  const Module& module_of(int patch) const { return modules_[index_[patch][0]]; }
  const PatchGeometry& geometry(int patch) const { return module_of(patch).patches[index_[patch][1]]; }
  const Cone& cone(int patch) const { return module_of(patch).cones[geometry(patch).cone_index]; }
  double end_azimuth(int patch, int end) const;
  int end_edge(int patch, int end) const;
  double radial_bound(int patch, double az) const { return module_of(patch).radial_bound(index_[patch][1], az); }
  Vec3 interior_point(int patch) const;
  double patch_area(int patch) const { return areas_[patch]; }
  // Surface samples used for the supporting-plane check.
  const std::vector<Vec3>& support_cloud() const { return cloud_; }

 private:
  PlatonicSolid solid_;
  Configuration config_;
  std::vector<Module> modules_;
  std::vector<std::array<int, 2>> index_;
  std::vector<double> areas_;
  std::vector<Vec3> cloud_;
};

enum class BranchChoice { Smooth, Switch };

struct BranchPolicy {
  enum Kind { First, Scripted };
  Kind kind = First;
  std::map<int, BranchChoice> script;  // per solid edge; missing edges continue smoothly

  static BranchPolicy first() { return {}; }
  static BranchPolicy scripted(std::map<int, BranchChoice> s) { return {Scripted, std::move(s)}; }
};

struct RollEvent {
  enum Type { PatchEnter, EdgeCross, Branch };
  Type type;
  int patch = -1;
  int edge = -1;
  int candidates = 0;
  BranchChoice choice = BranchChoice::Smooth;
};

struct Sweep {
  int patch = -1;
  int entry_end = 0;
  Eigen::Vector2d apex;                 // ground position of the pivot
  std::vector<Eigen::Vector2d> rim;     // ground images of the boundary points
};

struct RollOptions {
  int start_patch = 0;
  int start_end = 0;
  int samples_per_sweep = 64;
  bool support_check = false;
  bool stop_at_closure = true;
};

struct RollTrace {
  std::vector<RollEvent> events;
  std::vector<Sweep> sweeps;
  std::vector<double> heights;           // centroid height at every sampled state
  std::vector<Eigen::Vector2d> com_path;
  bool closed = false;                   // returned to the starting (patch, entry) state
  bool incomplete = false;               // hit maxEvents before closing
  int cycle_sweeps = 0;                  // sweeps in one closed cycle
  double cycle_heading_change = 0;       // ground rotation accumulated per cycle
  double attitude_error = 0;             // deviation from a pure ground rotation at closure
  double min_support = 0;                // lowest sampled surface height (support check)
  std::vector<int> coverage;             // visits per patch
};

RollTrace simulate_roll(const RollingBody& body, const BranchPolicy& policy, int max_events,
                        const RollOptions& options = {});
RollTrace simulate_roll(const PlatonicSolid& solid, const Configuration& config, const BranchPolicy& policy,
                        int max_events, const RollOptions& options = {});

// Geometric candidates when the body rests on the end generator of a patch.
struct Transition {
  int edge = -1;
  std::vector<std::array<int, 2>> next;  // (patch, entry end)
};
std::vector<std::vector<Transition>> probe_transitions(const RollingBody& body);

struct ModeCycle {
  Cycle patches;
  int start_end = 0;  // entry end of patches.front()
  double coverage = 0;
  bool injective = true;  // no patch visited twice
  double footprint_length = 0;
  double footprint_area = 0;
  double visited_area = 0;
};

struct ModeReport {
  std::vector<int> branch_edges;
  std::uint32_t switch_bits = 0;
  std::vector<ModeCycle> cycles;  // distinct up to rotation and reversal
  bool full = false;              // one cycle develops every patch exactly once
  double coverage = 0;            // best cycle coverage
};

std::vector<ModeReport> list_modes(const RollingBody& body, bool with_footprints = true);

struct Footprint {
  std::vector<Sweep> sectors;
  std::vector<Eigen::Vector2d> com_path;
  double area = 0;
  double com_length = 0;
};

Footprint develop_footprint(const RollTrace& trace);

// Up to rotation and reversal.
Cycle canonical_cycle(const Cycle& c);

std::string trace_json(const RollingBody& body, const RollTrace& trace);
std::string footprint_svg(const Footprint& fp);

}  // namespace platonicon
