// platonicon: construction, enumeration, rolling, meshing and reporting.
//
// Exit codes: 0 ok, 1 failed check or geometry inconsistency, 2 usage error,
// 3 budget exceeded (partial artifacts are still written).

#include "platonicon/config.hpp"
#include "platonicon/cone.hpp"
#include "platonicon/mesh.hpp"
#include "platonicon/roll.hpp"
#include "platonicon/seam.hpp"
#include "platonicon/solid.hpp"
#include "platonicon/tolerances.hpp"
#include "platonicon/verify.hpp"

#include "CLI11.hpp"
#include "json.hpp"

#include <algorithm>
#include <cctype>
#include <chrono>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::ordered_json;
using namespace platonicon;

namespace {

constexpr int kOk = 0, kFailed = 1, kUsage = 2, kBudget = 3;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Request {
  std::string subcommand;
  std::string solid = "all";
  std::string config;
  std::string rule_set = "tangent-alternation";
  int resolution = 16;
  double scale_mm = 1.0;
  int workers = 1;
  long long budget = -1;  // -1: per-solid default
  std::string out = "platonicon-out";
  std::string suite = "all";
  std::string format = "stl";
  long long mode = -1;  // roll: switch bits; -1 follows the first candidate
  int cycles = 3;
  int max_events = 0;
};

std::uint64_t fnv1a(const std::string& bytes) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char c : bytes) h = (h ^ c) * 1099511628211ull;
  return h;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

class Run {
 public:
  explicit Run(Request r) : req_(std::move(r)) { fs::create_directories(req_.out); }

  const Request& req() const { return req_; }

  void artifact(const std::string& name, const std::string& bytes) {
    write_file((fs::path(req_.out) / name).string(), bytes);
    artifacts_.push_back({{"path", name}, {"bytes", bytes.size()}, {"fnv1a64", hex64(fnv1a(bytes))}});
  }
  void note(const std::string& key, ordered_json v) { notes_[key] = std::move(v); }

  void finish(int status) {
    ordered_json m;
    m["tool"] = "platonicon";
    m["version"] = PLATONICON_VERSION;
    m["subcommand"] = req_.subcommand;
    m["inputs"] = {{"solid", req_.solid},     {"config", req_.config},       {"rule_set", req_.rule_set},
                   {"resolution", req_.resolution}, {"scale_mm", req_.scale_mm}, {"workers", req_.workers},
                   {"budget", req_.budget},   {"suite", req_.suite},         {"format", req_.format},
                   {"mode", req_.mode},       {"cycles", req_.cycles},       {"max_events", req_.max_events}};
    m["tolerances"] = {{"coordinate", tol::kCoord},         {"angle", tol::kAngle},
                       {"surface", tol::kSurface},          {"tangent", tol::kTangent},
                       {"triple_point", tol::kTriplePoint}, {"pose", tol::kPose},
                       {"ridge_chord", tol::kRidgeChord}};
    m["rule_set"] = req_.rule_set;
    m["exit_status"] = status;
    m["results"] = notes_;
    m["artifacts"] = artifacts_;
    write_file((fs::path(req_.out) / "manifest.json").string(), m.dump(2) + "\n");
  }

 private:
  Request req_;
  ordered_json artifacts_ = ordered_json::array();
  ordered_json notes_ = ordered_json::object();
};

std::vector<PlatonicSolid> solids_for(const std::string& name) {
  std::vector<PlatonicSolid> out;
  if (name == "all") {
    for (auto k : kAllSolids) out.push_back(build_solid(k));
  } else {
    out.push_back(build_solid(name));
  }
  return out;
}

PlatonicSolid single_solid(const Request& r) {
  if (r.solid == "all") throw UsageError(r.subcommand + " needs a single --solid");
  return build_solid(r.solid);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read '" + path + "'");
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

bool all_digits(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](unsigned char c) { return std::isdigit(c); });
}

// --config: a descriptor file, an encoding with one digit per face, or a
// 1-based class number from the rule set's class table (default 1).
Configuration resolve_config(const PlatonicSolid& s, const Request& r, std::string& class_id) {
  if (!r.config.empty() && fs::is_regular_file(r.config)) {
    Configuration c = from_descriptor(read_text(r.config));
    if (c.solid != s.kind) throw UsageError("descriptor '" + r.config + "' is for another solid");
    class_id = encoding_string(c.orientation);
    return c;
  }
  if (all_digits(r.config) && static_cast<int>(r.config.size()) == s.face_count()) {
    Configuration c{s.kind, parse_encoding(r.config)};
    validate(s, c);
    class_id = r.config;
    return c;
  }
  std::string num = r.config;
  if (num.rfind("class:", 0) == 0) num = num.substr(6);
  if (num.empty()) num = "1";
  if (!all_digits(num)) throw UsageError("--config '" + r.config + "' is neither a file, an encoding nor a class number");
  const int idx = std::stoi(num);
  const auto reps = class_representatives(s, parse_rule_set(r.rule_set));
  if (idx < 1 || idx > static_cast<int>(reps.size()))
    throw UsageError("class " + num + " out of range: " + s.name + " has " + std::to_string(reps.size()) + " classes under " + r.rule_set);
  class_id = encoding_string(reps[idx - 1].orientation);
  return reps[idx - 1];
}

std::uint64_t budget_for(const PlatonicSolid& s, long long flag) {
  if (flag >= 0) return static_cast<std::uint64_t>(flag);
  if (s.kind == SolidKind::Dodecahedron) return 100'000'000ull;
  if (s.kind == SolidKind::Icosahedron) return 1'000'000'000ull;
  return 0;
}

int cmd_solids(Run& run) {
  ordered_json summary = ordered_json::array();
  std::printf("%-13s %3s %3s %3s  %-12s  %12s  %12s  %10s  %10s\n", "solid", "V", "E", "F", "dual", "dihedral",
              "cone half", "volume", "area");
  for (const auto& s : solids_for(run.req().solid)) {
    const double deg = 180.0 / 3.14159265358979323846;
    std::printf("%-13s %3d %3d %3d  %-12s  %11.6f°  %11.6f°  %10.6f  %10.6f\n", s.name.c_str(), s.vertex_count(),
                s.edge_count(), s.face_count(), s.dual_name.c_str(), s.dihedral * deg, cone_half_angle(s) * deg,
                solid_volume(s), solid_surface_area(s));
    run.artifact(s.name + ".json", solid_to_json(s));
    summary.push_back(s.name);
  }
  run.note("solids", summary);
  return kOk;
}

int cmd_enumerate(Run& run) {
  const RuleSet rule = parse_rule_set(run.req().rule_set);
  int status = kOk;
  ordered_json summary = ordered_json::object();
  for (const auto& s : solids_for(run.req().solid)) {
    EnumerationOptions opt;
    opt.node_budget = budget_for(s, run.req().budget);
    opt.workers = run.req().workers;
    const auto t0 = std::chrono::steady_clock::now();
    const ClassReport rep = enumerate_classes(s, rule, opt);
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::cout << class_report_table(rep);
    std::printf("  %.2f s\n", secs);
    run.artifact("classes-" + s.name + ".json", class_report_json(rep));
    summary[s.name] = {{"classes", rep.classes.size()},
                       {"chiral", rep.chiral_count()},
                       {"without_rotation_axis", rep.asymmetric_count()},
                       {"complete", rep.complete},
                       {"nodes", rep.nodes},
                       {"node_budget", opt.node_budget}};
    if (!rep.complete) {
      std::fprintf(stderr, "%s: node budget %llu exceeded; report is incomplete\n", s.name.c_str(),
                   static_cast<unsigned long long>(opt.node_budget));
      status = kBudget;
    }
  }
  run.note("enumeration", summary);
  return status;
}

int cmd_mesh(Run& run) {
  const auto& r = run.req();
  const PlatonicSolid s = single_solid(r);
  std::string id;
  const Configuration cfg = resolve_config(s, r, id);
  const MeshFormat fmt = parse_mesh_format(r.format);
  const Mesh m = build_mesh(s, cfg, r.resolution);
  const auto topo = analyze_topology(m);
  const std::string ext = fmt == MeshFormat::Obj ? ".obj" : ".stl";
  const std::string name = s.name + "-" + id + "-r" + std::to_string(r.resolution) + ext;
  run.artifact(name, export_mesh(m, fmt, r.scale_mm));
  std::printf("%s class %s: %zu vertices, %zu triangles, euler %d, %s -> %s\n", s.name.c_str(), id.c_str(),
              m.vertices.size(), m.triangles.size(), topo.euler, topo.closed_manifold() ? "closed manifold" : "NOT CLOSED",
              (fs::path(r.out) / name).string().c_str());
  run.note("mesh", {{"class", id}, {"vertices", m.vertices.size()}, {"triangles", m.triangles.size()},
                    {"euler", topo.euler}, {"closed_manifold", topo.closed_manifold()}});
  return topo.closed_manifold() && topo.euler == 2 ? kOk : kFailed;
}

int cmd_roll(Run& run) {
  const auto& r = run.req();
  const PlatonicSolid s = single_solid(r);
  std::string id;
  const Configuration cfg = resolve_config(s, r, id);
  const RollingBody body(s, cfg);
  BranchPolicy policy = BranchPolicy::first();
  RollOptions ro;
  ro.support_check = true;
  ro.samples_per_sweep = 32;
  if (r.mode >= 0) {
    const auto modes = list_modes(body, false);
    if (r.mode >= static_cast<long long>(modes.size()))
      throw UsageError("--mode " + std::to_string(r.mode) + " out of range: class has " + std::to_string(modes.size()) + " modes");
    const auto& m = modes[r.mode];
    std::map<int, BranchChoice> script;
    for (std::size_t i = 0; i < m.branch_edges.size(); ++i)
      script[m.branch_edges[i]] = ((m.switch_bits >> i) & 1u) ? BranchChoice::Switch : BranchChoice::Smooth;
    policy = BranchPolicy::scripted(script);
    const auto& best = *std::max_element(m.cycles.begin(), m.cycles.end(), [](const ModeCycle& a, const ModeCycle& b) {
      return a.patches.size() < b.patches.size();
    });
    ro.start_patch = best.patches.front();
    ro.start_end = best.start_end;
  }
  ro.stop_at_closure = r.cycles <= 1;
  const int max_events = r.max_events > 0 ? r.max_events : std::max(1, r.cycles) * body.patch_count();
  RollTrace tr;
  try {
    tr = simulate_roll(body, policy, max_events, ro);
  } catch (const GeometryInconsistency& e) {
    std::fprintf(stderr, "geometry inconsistency: %s\n", e.what());
    run.note("error", e.what());
    return kFailed;
  }
  run.artifact("roll-" + s.name + "-" + id + ".json", trace_json(body, tr));
  const double h = std::sin(cone_half_angle(s));
  double dev = 0;
  for (double z : tr.heights) dev = std::max(dev, std::abs(z - h) / h);
  int covered = 0;
  for (int c : tr.coverage) covered += c > 0;
  std::printf("%s class %s: %zu sweeps, %d/%d patches, cycle %d sweeps, height deviation %.2e, min support %.2e, %s\n",
              s.name.c_str(), id.c_str(), tr.sweeps.size(), covered, body.patch_count(), tr.cycle_sweeps, dev,
              tr.min_support, tr.closed ? "closed" : tr.incomplete ? "incomplete" : "open");
  ordered_json note = {{"class", id},         {"sweeps", tr.sweeps.size()},   {"patches_covered", covered},
                       {"cycle_sweeps", tr.cycle_sweeps}, {"height_deviation", dev}, {"closed", tr.closed},
                       {"incomplete", tr.incomplete}};
  if (tr.closed) {
    const Footprint fp = develop_footprint(tr);
    run.artifact("footprint-" + s.name + "-" + id + ".svg", footprint_svg(fp));
    note["footprint_area"] = fp.area;
    note["com_path_length"] = fp.com_length;
  }
  run.note("roll", note);
  if (tr.incomplete && !tr.closed) return kBudget;
  return dev <= tol::kPose ? kOk : kFailed;
}

int cmd_verify(Run& run) {
  VerifyOptions opt;
  opt.rule = parse_rule_set(run.req().rule_set);
  long passed = 0, total = 0, failed_checks = 0;
  ordered_json rows = ordered_json::array();
  for (const auto& s : solids_for(run.req().solid)) {
    for (const auto& c : run_suite(run.req().suite, s, opt)) {
      std::printf("%-4s %-13s %-13s %-48s %7ld/%-7ld worst %.2e\n", c.ok() ? "ok" : "FAIL", c.solid.c_str(),
                  c.suite.c_str(), c.name.c_str(), c.passed, c.total, c.worst);
      passed += c.passed;
      total += c.total;
      failed_checks += !c.ok();
      rows.push_back({{"solid", c.solid}, {"suite", c.suite}, {"check", c.name}, {"passed", c.passed},
                      {"total", c.total}, {"worst", c.worst}, {"tolerance", c.tolerance}});
    }
  }
  std::printf("%ld/%ld samples passed, %ld failing checks\n", passed, total, failed_checks);
  run.artifact("verify.json", rows.dump(2) + "\n");
  run.note("verify", {{"passed", passed}, {"total", total}, {"failing_checks", failed_checks}});
  return failed_checks == 0 ? kOk : kFailed;
}

int cmd_metrics(Run& run) {
  const auto& r = run.req();
  std::string csv = metrics_csv_header();
  ordered_json all = ordered_json::array();
  for (const auto& s : solids_for(r.solid)) {
    std::vector<std::pair<std::string, Configuration>> targets;
    if (r.config.empty()) {
      for (const auto& c : class_representatives(s, parse_rule_set(r.rule_set)))
        targets.emplace_back(encoding_string(c.orientation), c);
    } else {
      std::string id;
      Configuration c = resolve_config(s, r, id);
      targets.emplace_back(id, c);
    }
    for (const auto& [id, cfg] : targets) {
      const MetricsReport m = metrics(build_mesh(s, cfg, r.resolution), s, id);
      std::printf("%-13s %-21s area %.6f (solid %.6f, sphere %.6f)  volume %.6f (solid %.6f, sphere %.6f)\n",
                  s.name.c_str(), id.c_str(), m.area, m.solid_area, m.sphere_area, m.volume, m.solid_volume,
                  m.sphere_volume);
      csv += metrics_csv_row(m);
      all.push_back(ordered_json::parse(metrics_json(m)));
    }
  }
  run.artifact("metrics.csv", csv);
  run.artifact("metrics.json", all.dump(2) + "\n");
  run.note("metrics", {{"rows", all.size()}});
  return kOk;
}

// Counts for every rule set on every solid plus exhaustive oracle agreement.
int cmd_calibrate(Run& run) {
  int status = kOk;
  ordered_json j;
  j["schema_version"] = 1;
  j["target_counts"] = {{"tetrahedron", 2}, {"cube", 2}, {"octahedron", 5}, {"dodecahedron", 3}, {"icosahedron", 2}};
  j["target_octahedron_without_rotation_axis"] = 3;
  ordered_json counts = ordered_json::array();
  for (auto rule : kAllRuleSets) {
    for (const auto& s : solids_for(run.req().solid)) {
      EnumerationOptions opt;
      opt.node_budget = budget_for(s, run.req().budget);
      opt.workers = run.req().workers;
      const auto t0 = std::chrono::steady_clock::now();
      const ClassReport rep = enumerate_classes(s, rule, opt);
      const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      std::printf("%-20s %-13s classes %6zu  chiral %6d  no-axis %6d  %s  nodes %llu  %.1f s\n",
                  std::string(rule_set_name(rule)).c_str(), s.name.c_str(), rep.classes.size(), rep.chiral_count(),
                  rep.asymmetric_count(), rep.complete ? "complete  " : "INCOMPLETE", static_cast<unsigned long long>(rep.nodes), secs);
      std::fflush(stdout);
      ordered_json row = {{"rule_set", rule_set_name(rule)}, {"solid", s.name},
                          {"classes", rep.classes.size()},   {"chiral", rep.chiral_count()},
                          {"classes_counting_mirror_pairs_twice", rep.classes.size() + rep.chiral_count()},
                          {"without_rotation_axis", rep.asymmetric_count()},
                          {"complete", rep.complete},        {"nodes", rep.nodes},
                          {"node_budget", opt.node_budget}};
      if (rep.classes.size() <= 8) {
        auto& enc = row["encodings"] = ordered_json::array();
        for (const auto& c : rep.classes) enc.push_back(encoding_string(c.info.canonical));
      }
      counts.push_back(row);
      if (!rep.complete) status = kBudget;
    }
  }
  const std::size_t rows = counts.size();
  j["counts"] = std::move(counts);
  ordered_json agree = ordered_json::array();
  for (auto k : {SolidKind::Tetrahedron, SolidKind::Cube, SolidKind::Octahedron}) {
    const PlatonicSolid s = build_solid(k);
    if (run.req().solid != "all" && run.req().solid != s.name) continue;
    for (auto rule : kAllRuleSets) {
      const auto st = oracle_agreement(s, rule);
      std::printf("oracle vs %-20s %-11s configs %5ld  developable seam %5ld oracle %5ld  agree %5ld  modes agree %ld/%ld\n",
                  st.rule.c_str(), st.solid.c_str(), st.configs, st.seam_developable, st.oracle_developable,
                  st.developability_agree, st.modes_agree, st.modes_compared);
      std::fflush(stdout);
      agree.push_back({{"rule_set", st.rule},
                       {"solid", st.solid},
                       {"configs", st.configs},
                       {"seam_developable", st.seam_developable},
                       {"oracle_developable", st.oracle_developable},
                       {"developability_agree", st.developability_agree},
                       {"modes_compared", st.modes_compared},
                       {"modes_agree", st.modes_agree},
                       {"first_disagreements", st.disagreements}});
    }
  }
  j["oracle_agreement"] = std::move(agree);
  run.artifact("calibration.json", j.dump(2) + "\n");
  run.note("calibration", {{"rows", rows}});
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  Request req;
  CLI::App app{"Platonicon construction, enumeration, rolling and meshing"};
  app.set_version_flag("--version", PLATONICON_VERSION);
  app.require_subcommand(1);

  auto add_common = [&](CLI::App* sub, bool config) {
    sub->add_option("--solid", req.solid, "tetrahedron, cube, octahedron, dodecahedron, icosahedron or all");
    sub->add_option("--rule-set", req.rule_set, "tangent-alternation, smooth-only, free-branch, free-branch-acyclic");
    sub->add_option("--out", req.out, "output directory (manifest.json and artifacts)");
    if (config) sub->add_option("--config", req.config, "descriptor path, face encoding, or class number (default 1)");
  };

  auto* solids = app.add_subcommand("solids", "describe the solids and write their JSON tables");
  add_common(solids, false);

  auto* enumerate = app.add_subcommand("enumerate", "class table of developable configurations");
  add_common(enumerate, false);
  enumerate->add_option("--workers", req.workers, "search threads")->check(CLI::PositiveNumber);
  enumerate->add_option("--budget", req.budget, "node budget, 0 unbounded (default: dodecahedron 1e8, icosahedron 1e9)");

  auto* mesh = app.add_subcommand("mesh", "export a triangle mesh");
  add_common(mesh, true);
  mesh->add_option("--resolution", req.resolution, "generator columns per patch")->check(CLI::Range(kMinResolution, 4096));
  mesh->add_option("--scale-mm", req.scale_mm, "millimetres per circumradius unit")->check(CLI::PositiveNumber);
  mesh->add_option("--format", req.format, "stl, stl-ascii or obj");

  auto* roll = app.add_subcommand("roll", "simulate rolling; writes a trace and footprint SVG");
  add_common(roll, true);
  roll->add_option("--mode", req.mode, "mode index (switch bits over branch edges); default follows first candidate");
  roll->add_option("--cycles", req.cycles, "development cycles to roll")->check(CLI::PositiveNumber);
  roll->add_option("--max-events", req.max_events, "sweep budget (default cycles x patches)");

  auto* verify = app.add_subcommand("verify", "run invariant suites");
  add_common(verify, false);
  verify->add_option("--suite", req.suite, "geometry, combinatorics, rolling, mesh or all");

  auto* metrics_cmd = app.add_subcommand("metrics", "surface area and volume against solid and sphere");
  add_common(metrics_cmd, true);
  metrics_cmd->add_option("--resolution", req.resolution, "mesh resolution")->check(CLI::Range(kMinResolution, 4096));

  auto* calibrate = app.add_subcommand("calibrate", "counts per rule set and oracle agreement");
  add_common(calibrate, false);
  calibrate->add_option("--workers", req.workers, "search threads")->check(CLI::PositiveNumber);
  calibrate->add_option("--budget", req.budget, "node budget, 0 unbounded");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int rc = app.exit(e);
    return rc == 0 ? kOk : kUsage;
  }
  req.subcommand = app.get_subcommands().front()->get_name();

  try {
    if (req.solid != "all") solid_from_name(req.solid);
    parse_rule_set(req.rule_set);
    Run run(req);
    int status = kOk;
    if (req.subcommand == "solids") status = cmd_solids(run);
    else if (req.subcommand == "enumerate") status = cmd_enumerate(run);
    else if (req.subcommand == "mesh") status = cmd_mesh(run);
    else if (req.subcommand == "roll") status = cmd_roll(run);
    else if (req.subcommand == "verify") status = cmd_verify(run);
    else if (req.subcommand == "metrics") status = cmd_metrics(run);
    else if (req.subcommand == "calibrate") status = cmd_calibrate(run);
    run.finish(status);
    return status;
  } catch (const UsageError& e) {
    std::fprintf(stderr, "error: %s\n\n%s", e.what(), app.help().c_str());
    return kUsage;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "error: %s\n\n%s", e.what(), app.help().c_str());
    return kUsage;
  } catch (const std::out_of_range& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kUsage;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return kFailed;
  }
}
