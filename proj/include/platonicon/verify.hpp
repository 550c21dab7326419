#pragma once

#include "platonicon/seam.hpp"
#include "platonicon/solid.hpp"

#include <string>
#include <vector>

namespace platonicon {

struct CheckResult {
  std::string suite;
  std::string solid;
  std::string name;
  long passed = 0;
  long total = 0;
  double worst = 0;      // largest observed error, where meaningful
  double tolerance = 0;

  bool ok() const { return passed == total; }
};

struct VerifyOptions {
  RuleSet rule = RuleSet::TangentAlternation;
  int mesh_resolution = 8;
  int edge_samples = 100;
};

std::vector<CheckResult> verify_geometry(const PlatonicSolid& solid, const VerifyOptions& opt = {});
std::vector<CheckResult> verify_combinatorics(const PlatonicSolid& solid, const VerifyOptions& opt = {});
std::vector<CheckResult> verify_rolling(const PlatonicSolid& solid, const VerifyOptions& opt = {});
std::vector<CheckResult> verify_mesh(const PlatonicSolid& solid, const VerifyOptions& opt = {});

// suite: geometry, combinatorics, rolling, mesh or all.
std::vector<CheckResult> run_suite(const std::string& suite, const PlatonicSolid& solid, const VerifyOptions& opt = {});

// Exhaustive comparison of seam-path developability and cycle sets with the
// rolling oracle over every configuration of a solid.
struct AgreementStats {
  std::string solid;
  std::string rule;
  long configs = 0;
  long seam_developable = 0;
  long oracle_developable = 0;
  long developability_agree = 0;
  long modes_compared = 0;
  long modes_agree = 0;
  std::vector<std::string> disagreements;  // encodings, first few

  bool ok() const { return developability_agree == configs && modes_agree == modes_compared; }
};

AgreementStats oracle_agreement(const PlatonicSolid& solid, RuleSet rule = RuleSet::TangentAlternation);

// Canonical class representatives found under a rule set.
std::vector<Configuration> class_representatives(const PlatonicSolid& solid, RuleSet rule);

}  // namespace platonicon
