#pragma once

#include "platonicon/config.hpp"
#include "platonicon/solid.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace platonicon {

// One exposed cone piece: face plus apex. End 0 sits on the face edge towards
// the previous vertex of the face cycle, end 1 on the edge towards the next.
struct Patch {
  int id = -1;
  int face = -1;
  int apex = -1;
  std::array<int, 2> slot_edges{};
};

struct Slot {
  int patch = -1;
  int end = -1;    // which end of the patch lies on this edge
  int pivot = -1;  // apex vertex of the patch, an endpoint of the edge
  int face = -1;
};

struct EdgeSlots {
  int edge = -1;
  std::vector<Slot> slots;  // sorted by (face, pivot)
  int count_from(int face) const;
};

// Pairing semantics for slot ends.
//   tangent-alternation  perfect pairing per edge; 4-slot edges branch between
//                        both-smooth and both-switch; odd edges give no modes
//   smooth-only          as above with 4-slot edges fixed to smooth
//   free-branch          developable when the transition graph, with a free
//                        choice among all far-side slots, has a strongly
//                        connected part covering every patch
//   free-branch-acyclic  free-branch plus an acyclic ridge network
// The free-branch sets report the tangent-alternation pairings as their modes.
enum class RuleSet { TangentAlternation, SmoothOnly, FreeBranch, FreeBranchAcyclic };

inline constexpr std::array<RuleSet, 4> kAllRuleSets = {RuleSet::TangentAlternation, RuleSet::SmoothOnly,
                                                         RuleSet::FreeBranch, RuleSet::FreeBranchAcyclic};

std::string_view rule_set_name(RuleSet r);
RuleSet parse_rule_set(std::string_view name);  // throws std::invalid_argument listing valid names

struct PairingMode {
  std::vector<std::vector<std::array<int, 2>>> pairs;  // per edge, pairs of slot indices
  std::vector<int> branch_edges;                       // 4-slot edges, ascending
  std::uint32_t switch_bits = 0;                       // bit i set: branch_edges[i] switches
  bool switched(int edge) const;
};

using Cycle = std::vector<int>;

class SeamGraph {
 public:
  SeamGraph(const PlatonicSolid& solid, const Configuration& config);

  const PlatonicSolid& solid() const { return *solid_; }
  const Configuration& config() const { return config_; }
  const std::vector<Patch>& patches() const { return patches_; }
  const std::vector<EdgeSlots>& edge_slots() const { return slots_; }
  int patch_count() const { return static_cast<int>(patches_.size()); }

  std::vector<PairingMode> pairing_modes(RuleSet rule) const;
  // Cycles start at their lowest patch and leave it through end 1; ordered by first patch.
  std::vector<Cycle> cycle_decomposition(const PairingMode& mode) const;
  // Far-side candidates when leaving `patch` through `end`: (patch, entry end) pairs.
  std::vector<std::array<int, 2>> transition_candidates(int patch, int end) const;
  bool ridge_network_acyclic() const;

 private:
  const PlatonicSolid* solid_;
  Configuration config_;
  std::vector<Patch> patches_;
  std::vector<EdgeSlots> slots_;
};

std::vector<EdgeSlots> edge_slots(const PlatonicSolid& solid, const Configuration& config);
std::vector<PairingMode> pairing_modes(const PlatonicSolid& solid, const Configuration& config, RuleSet rule);
std::vector<Cycle> cycle_decomposition(const PlatonicSolid& solid, const Configuration& config,
                                       const PairingMode& mode);

struct Developability {
  bool developable = false;
  std::optional<PairingMode> witness;  // pairing rule sets
  Cycle witness_walk;                  // closed patch walk covering every patch
};

Developability is_developable(const SeamGraph& graph, RuleSet rule);
Developability is_developable(const PlatonicSolid& solid, const Configuration& config, RuleSet rule);

struct ModeSummary {
  std::uint32_t switch_bits = 0;
  int cycle_count = 0;
  bool full = false;
};

struct ClassRecord {
  ClassInfo info;
  std::vector<ModeSummary> modes;
  bool ridge_acyclic = false;
  Cycle witness_walk;
};

struct EnumerationOptions {
  std::uint64_t node_budget = 0;  // 0 = unbounded
  int workers = 1;
};

struct ClassReport {
  SolidKind solid;
  RuleSet rule;
  bool complete = true;
  std::uint64_t nodes = 0;
  std::vector<ClassRecord> classes;  // sorted by canonical encoding

  int chiral_count() const;
  int asymmetric_count() const;  // trivial proper stabilizer
  std::uint64_t raw_count() const;  // sum of orbit sizes
};

ClassReport enumerate_classes(const PlatonicSolid& solid, RuleSet rule, const EnumerationOptions& options = {});

std::string class_report_json(const ClassReport& report);
std::string class_report_table(const ClassReport& report);

}  // namespace platonicon
