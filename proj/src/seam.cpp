#include "platonicon/seam.hpp"

#include "json.hpp"

#include <algorithm>
#include <atomic>
#include <functional>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace platonicon {

namespace {

struct RuleName {
  RuleSet rule;
  std::string_view name;
};

constexpr std::array<RuleName, 4> kRuleNames = {{
    {RuleSet::TangentAlternation, "tangent-alternation"},
    {RuleSet::SmoothOnly, "smooth-only"},
    {RuleSet::FreeBranch, "free-branch"},
    {RuleSet::FreeBranchAcyclic, "free-branch-acyclic"},
}};

bool uses_pairings(RuleSet r) { return r == RuleSet::TangentAlternation || r == RuleSet::SmoothOnly; }

class Dsu {
 public:
  explicit Dsu(int n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  int find(int x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  // False when a and b were already connected.
  bool unite(int a, int b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent_[a] = b;
    return true;
  }

 private:
  std::vector<int> parent_;
};

// Ridge arcs of a module as node pairs: vertices, then edge midpoints, then
// per-face triple points.
std::vector<std::array<int, 2>> ridge_arcs(const PlatonicSolid& s, int face, int orientation) {
  const auto apex = apex_set(s, face, orientation);
  const auto& cyc = s.faces[face];
  const int n = static_cast<int>(cyc.size());
  const int nv = s.vertex_count(), ne = s.edge_count();
  auto mid = [&](int a, int b) { return nv + s.edge_index(a, b); };
  const int pos = s.position_in_face(face, apex[0]);
  if (n == 3) return {{cyc[(pos + 2) % 3], mid(apex[0], apex[1])}};
  if (n == 4) return {{cyc[(pos + 1) % 4], cyc[(pos + 3) % 4]}};
  const int t = nv + ne + face;
  return {{cyc[(pos + 1) % 5], t}, {cyc[(pos + 4) % 5], t}, {mid(apex[1], apex[2]), t}};
}

}  // namespace

std::string_view rule_set_name(RuleSet r) {
  for (const auto& e : kRuleNames)
    if (e.rule == r) return e.name;
  return "?";
}

RuleSet parse_rule_set(std::string_view name) {
  for (const auto& e : kRuleNames)
    if (e.name == name) return e.rule;
  std::string valid;
  for (const auto& e : kRuleNames) valid += (valid.empty() ? "" : ", ") + std::string(e.name);
  throw std::invalid_argument("unknown rule set '" + std::string(name) + "'; valid: " + valid);
}

int EdgeSlots::count_from(int face) const {
  return static_cast<int>(std::count_if(slots.begin(), slots.end(), [&](const Slot& s) { return s.face == face; }));
}

bool PairingMode::switched(int edge) const {
  for (std::size_t i = 0; i < branch_edges.size(); ++i)
    if (branch_edges[i] == edge) return (switch_bits >> i) & 1u;
  return false;
}

SeamGraph::SeamGraph(const PlatonicSolid& solid, const Configuration& config) : solid_(&solid), config_(config) {
  validate(solid, config);
  for (int f = 0; f < solid.face_count(); ++f) {
    const auto& cyc = solid.faces[f];
    const int n = static_cast<int>(cyc.size());
    for (int a : apex_set(solid, f, config.orientation[f])) {
      const int pos = solid.position_in_face(f, a);
      Patch p;
      p.id = static_cast<int>(patches_.size());
      p.face = f;
      p.apex = a;
      p.slot_edges = {solid.edge_index(a, cyc[(pos + n - 1) % n]), solid.edge_index(a, cyc[(pos + 1) % n])};
      patches_.push_back(p);
    }
  }
  slots_.resize(solid.edge_count());
  for (int e = 0; e < solid.edge_count(); ++e) slots_[e].edge = e;
  for (const auto& p : patches_)
    for (int end = 0; end < 2; ++end) slots_[p.slot_edges[end]].slots.push_back({p.id, end, p.apex, p.face});
  for (auto& es : slots_)
    std::sort(es.slots.begin(), es.slots.end(),
              [](const Slot& a, const Slot& b) { return std::tie(a.face, a.pivot) < std::tie(b.face, b.pivot); });
}

std::vector<PairingMode> SeamGraph::pairing_modes(RuleSet rule) const {
  (void)rule_set_name(rule);
  PairingMode base;
  base.pairs.resize(slots_.size());
  std::vector<int> branch;
  for (const auto& es : slots_) {
    const auto& s = es.slots;
    if (s.size() % 2 != 0) return {};
    if (s.size() == 2) {
      base.pairs[es.edge] = {{0, 1}};
    } else {
      branch.push_back(es.edge);
    }
  }
  base.branch_edges = branch;
  const std::uint32_t count = rule == RuleSet::SmoothOnly ? 1u : (1u << branch.size());
  std::vector<PairingMode> modes;
  for (std::uint32_t bits = 0; bits < count; ++bits) {
    PairingMode m = base;
    m.switch_bits = bits;
    for (std::size_t i = 0; i < branch.size(); ++i) {
      // Slots 0,1 come from the lower face and 2,3 from the higher, each sorted by pivot.
      const bool sw = (bits >> i) & 1u;
      m.pairs[branch[i]] = sw ? std::vector<std::array<int, 2>>{{0, 3}, {1, 2}}
                              : std::vector<std::array<int, 2>>{{0, 2}, {1, 3}};
    }
    modes.push_back(std::move(m));
  }
  return modes;
}

std::vector<Cycle> SeamGraph::cycle_decomposition(const PairingMode& mode) const {
  const int np = patch_count();
  std::vector<std::array<int, 2>> partner(2 * np, {-1, -1});
  for (const auto& es : slots_) {
    for (const auto& pr : mode.pairs.at(es.edge)) {
      const Slot& a = es.slots.at(pr[0]);
      const Slot& b = es.slots.at(pr[1]);
      partner[2 * a.patch + a.end] = {b.patch, b.end};
      partner[2 * b.patch + b.end] = {a.patch, a.end};
    }
  }
  std::vector<Cycle> cycles;
  std::vector<bool> seen(np, false);
  for (int start = 0; start < np; ++start) {
    if (seen[start]) continue;
    Cycle c;
    int p = start, exit_end = 1;
    while (true) {
      seen[p] = true;
      c.push_back(p);
      const auto next = partner[2 * p + exit_end];
      if (next[0] < 0) throw std::invalid_argument("pairing mode does not cover every slot");
      p = next[0];
      exit_end = 1 - next[1];
      if (p == start) break;
      if (seen[p]) throw std::logic_error("pairing walk is not a cycle");
    }
    cycles.push_back(std::move(c));
  }
  return cycles;
}

std::vector<std::array<int, 2>> SeamGraph::transition_candidates(int patch, int end) const {
  const Patch& p = patches_.at(patch);
  const int e = p.slot_edges[end];
  const auto& faces = solid_->edge_faces[e];
  const int far = faces[0] == p.face ? faces[1] : faces[0];
  std::vector<std::array<int, 2>> out;
  for (const auto& s : slots_[e].slots)
    if (s.face == far) out.push_back({s.patch, s.end});
  return out;
}

bool SeamGraph::ridge_network_acyclic() const {
  const auto& s = *solid_;
  Dsu dsu(s.vertex_count() + s.edge_count() + s.face_count());
  for (int f = 0; f < s.face_count(); ++f)
    for (const auto& arc : ridge_arcs(s, f, config_.orientation[f]))
      if (!dsu.unite(arc[0], arc[1])) return false;
  return true;
}

std::vector<EdgeSlots> edge_slots(const PlatonicSolid& solid, const Configuration& config) {
  return SeamGraph(solid, config).edge_slots();
}

std::vector<PairingMode> pairing_modes(const PlatonicSolid& solid, const Configuration& config, RuleSet rule) {
  return SeamGraph(solid, config).pairing_modes(rule);
}

std::vector<Cycle> cycle_decomposition(const PlatonicSolid& solid, const Configuration& config,
                                       const PairingMode& mode) {
  return SeamGraph(solid, config).cycle_decomposition(mode);
}

namespace {

// Closed walk covering every patch inside one strongly connected part of the
// free transition graph, or empty.
Cycle free_branch_walk(const SeamGraph& g) {
  const int np = g.patch_count();
  const int ns = 2 * np;
  std::vector<std::vector<int>> adj(ns);
  for (int p = 0; p < np; ++p)
    for (int end = 0; end < 2; ++end)
      for (const auto& c : g.transition_candidates(p, end)) adj[2 * p + end].push_back(2 * c[0] + (1 - c[1]));

  // Tarjan, iterative.
  std::vector<int> index(ns, -1), low(ns, 0), comp(ns, -1), stack;
  std::vector<bool> on_stack(ns, false);
  int counter = 0, ncomp = 0;
  for (int root = 0; root < ns; ++root) {
    if (index[root] >= 0) continue;
    std::vector<std::pair<int, std::size_t>> call{{root, 0}};
    index[root] = low[root] = counter++;
    stack.push_back(root);
    on_stack[root] = true;
    while (!call.empty()) {
      auto& [v, i] = call.back();
      if (i < adj[v].size()) {
        const int w = adj[v][i++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.emplace_back(w, 0);
        } else if (on_stack[w]) {
          low[v] = std::min(low[v], index[w]);
        }
      } else {
        const int done = v;
        call.pop_back();
        if (!call.empty()) low[call.back().first] = std::min(low[call.back().first], low[done]);
        if (low[done] == index[done]) {
          int w;
          do {
            w = stack.back();
            stack.pop_back();
            on_stack[w] = false;
            comp[w] = ncomp;
          } while (w != done);
          ++ncomp;
        }
      }
    }
  }
  for (int c = 0; c < ncomp; ++c) {
    std::vector<bool> covered(np, false);
    int size = 0;
    for (int s = 0; s < ns; ++s)
      if (comp[s] == c) {
        covered[s / 2] = true;
        ++size;
      }
    if (size < 2 || std::find(covered.begin(), covered.end(), false) != covered.end()) continue;
    // Stitch shortest paths between successive unseen patches, then return home.
    int start = -1;
    for (int s = 0; s < ns && start < 0; ++s)
      if (comp[s] == c) start = s;
    auto bfs_path = [&](int from, const std::function<bool(int)>& goal) {
      std::vector<int> prev(ns, -2);
      std::vector<int> q{from};
      prev[from] = -1;
      for (std::size_t h = 0; h < q.size(); ++h) {
        const int v = q[h];
        for (int w : adj[v]) {
          if (comp[w] != c || prev[w] != -2) continue;
          prev[w] = v;
          if (goal(w)) {
            std::vector<int> path;
            for (int x = w; x != from; x = prev[x]) path.push_back(x);
            std::reverse(path.begin(), path.end());
            return path;
          }
          q.push_back(w);
        }
      }
      return std::vector<int>{};
    };
    std::vector<bool> seen(np, false);
    Cycle walk{start / 2};
    seen[start / 2] = true;
    int cur = start;
    while (std::find(seen.begin(), seen.end(), false) != seen.end()) {
      auto path = bfs_path(cur, [&](int s) { return !seen[s / 2]; });
      for (int s : path) {
        walk.push_back(s / 2);
        seen[s / 2] = true;
      }
      cur = path.back();
    }
    if (cur != start) {
      auto path = bfs_path(cur, [&](int s) { return s == start; });
      for (std::size_t i = 0; i + 1 < path.size(); ++i) walk.push_back(path[i] / 2);
    }
    return walk;
  }
  return {};
}

}  // namespace

Developability is_developable(const SeamGraph& g, RuleSet rule) {
  Developability d;
  if (uses_pairings(rule)) {
    for (auto& mode : g.pairing_modes(rule)) {
      auto cycles = g.cycle_decomposition(mode);
      if (cycles.size() == 1) {
        d.developable = true;
        d.witness_walk = cycles.front();
        d.witness = std::move(mode);
        return d;
      }
    }
    return d;
  }
  if (rule == RuleSet::FreeBranchAcyclic && !g.ridge_network_acyclic()) return d;
  d.witness_walk = free_branch_walk(g);
  d.developable = !d.witness_walk.empty();
  return d;
}

Developability is_developable(const PlatonicSolid& solid, const Configuration& config, RuleSet rule) {
  return is_developable(SeamGraph(solid, config), rule);
}

int ClassReport::chiral_count() const {
  return static_cast<int>(std::count_if(classes.begin(), classes.end(), [](const ClassRecord& c) { return c.info.chiral; }));
}

int ClassReport::asymmetric_count() const {
  return static_cast<int>(
      std::count_if(classes.begin(), classes.end(), [](const ClassRecord& c) { return c.info.proper_stabilizer == 1; }));
}

std::uint64_t ClassReport::raw_count() const {
  std::uint64_t n = 0;
  for (const auto& c : classes) n += c.info.orbit_size;
  return n;
}

namespace {

class Searcher {
 public:
  Searcher(const PlatonicSolid& solid, RuleSet rule, const EnumerationOptions& opt)
      : solid_(solid), space_(solid, symmetry_group(solid, false)), rule_(rule), opt_(opt) {
    nf_ = solid.face_count();
    k_ = orientation_count(solid.face_sides());
    nodes_dsu_ = solid.vertex_count() + solid.edge_count() + solid.face_count();
    build_order();
    const auto& ops = space_.group().ops;
    inverse_face_.assign(ops.size(), std::vector<int>(nf_));
    for (std::size_t g = 0; g < ops.size(); ++g)
      for (int f = 0; f < nf_; ++f) inverse_face_[g][space_.face_image(g, f)] = f;
    for (int f = 0; f < nf_; ++f)
      for (int o = 0; o < k_; ++o) arcs_.push_back(ridge_arcs(solid, f, o));
    contrib_.assign(nf_ * k_ * solid.edge_count(), 0);
    for (int f = 0; f < nf_; ++f)
      for (int o = 0; o < k_; ++o) {
        const auto apex = apex_set(solid, f, o);
        auto in = [&](int v) { return std::find(apex.begin(), apex.end(), v) != apex.end(); };
        const auto& cyc = solid.faces[f];
        for (std::size_t i = 0; i < cyc.size(); ++i) {
          const int a = cyc[i], b = cyc[(i + 1) % cyc.size()];
          contrib_[(f * k_ + o) * solid.edge_count() + solid.edge_index(a, b)] = (in(a) && in(b)) ? 2 : 1;
        }
      }
  }

  ClassReport run() {
    ClassReport rep{solid_.kind, rule_, true, 0, {}};
    std::atomic<int> next_shard{0};
    std::mutex mu;
    auto worker = [&]() {
      while (true) {
        const int shard = next_shard.fetch_add(1);
        if (shard >= k_ || stop_.load()) break;
        std::vector<ClassRecord> found;
        Encoding enc(nf_, kUnknown);
        std::vector<Dsu> dsu_stack;
        dsu_stack.emplace_back(nodes_dsu_);
        descend(0, shard, enc, dsu_stack, found);
        std::lock_guard<std::mutex> lock(mu);
        for (auto& c : found) rep.classes.push_back(std::move(c));
      }
    };
    const int workers = std::max(1, opt_.workers);
    std::vector<std::thread> pool;
    for (int w = 1; w < workers; ++w) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    std::sort(rep.classes.begin(), rep.classes.end(),
              [](const ClassRecord& a, const ClassRecord& b) { return a.info.canonical < b.info.canonical; });
    rep.nodes = nodes_.load();
    rep.complete = !stop_.load();
    return rep;
  }

 private:
  static constexpr std::uint8_t kUnknown = 0xff;

  // Greedy spiral: next face has the most already-placed neighbours.
  void build_order() {
    std::vector<bool> placed(nf_, false);
    std::vector<std::vector<int>> nbr(nf_);
    for (const auto& ef : solid_.edge_faces) {
      nbr[ef[0]].push_back(ef[1]);
      nbr[ef[1]].push_back(ef[0]);
    }
    order_.push_back(0);
    placed[0] = true;
    while (static_cast<int>(order_.size()) < nf_) {
      int best = -1, best_score = -1;
      for (int f = 0; f < nf_; ++f) {
        if (placed[f]) continue;
        int score = 0;
        for (int g : nbr[f]) score += placed[g];
        if (score > best_score) {
          best = f;
          best_score = score;
        }
      }
      order_.push_back(best);
      placed[best] = true;
    }
    closing_.resize(nf_);
    std::vector<int> depth_of(nf_);
    for (int d = 0; d < nf_; ++d) depth_of[order_[d]] = d;
    for (int e = 0; e < solid_.edge_count(); ++e) {
      const auto& ef = solid_.edge_faces[e];
      closing_[std::max(depth_of[ef[0]], depth_of[ef[1]])].push_back(e);
    }
  }

  int contribution(int f, int o, int e) const { return contrib_[(f * k_ + o) * solid_.edge_count() + e]; }

  bool prefix_rejected(const Encoding& enc) const {
    const auto& ops = space_.group().ops;
    for (std::size_t g = 1; g < ops.size(); ++g) {
      for (int j = 0; j < nf_; ++j) {
        const int f = inverse_face_[g][j];
        if (enc[j] == kUnknown || enc[f] == kUnknown) break;
        const int img = space_.orientation_image(g, f, enc[f]);
        if (img < enc[j]) return true;
        if (img > enc[j]) break;
      }
    }
    return false;
  }

  void descend(int depth, int only, Encoding& enc, std::vector<Dsu>& dsu_stack, std::vector<ClassRecord>& out) {
    if (stop_.load(std::memory_order_relaxed)) return;
    if (depth == nf_) {
      leaf(enc, out);
      return;
    }
    const int f = order_[depth];
    for (int o = 0; o < k_; ++o) {
      if (only >= 0 && o != only) continue;
      const std::uint64_t n = nodes_.fetch_add(1, std::memory_order_relaxed) + 1;
      if (opt_.node_budget && n > opt_.node_budget) {
        stop_.store(true);
        return;
      }
      enc[f] = static_cast<std::uint8_t>(o);
      bool ok = true;
      if (uses_pairings(rule_)) {
        for (int e : closing_[depth]) {
          const auto& ef = solid_.edge_faces[e];
          if (contribution(ef[0], enc[ef[0]], e) != contribution(ef[1], enc[ef[1]], e)) {
            ok = false;
            break;
          }
        }
      }
      bool pushed = false;
      if (ok && rule_ == RuleSet::FreeBranchAcyclic) {
        dsu_stack.push_back(dsu_stack.back());
        pushed = true;
        for (const auto& arc : arcs_[f * k_ + o])
          if (!dsu_stack.back().unite(arc[0], arc[1])) {
            ok = false;
            break;
          }
      }
      if (ok && !prefix_rejected(enc)) descend(depth + 1, -1, enc, dsu_stack, out);
      if (pushed) dsu_stack.pop_back();
      enc[f] = kUnknown;
      if (stop_.load(std::memory_order_relaxed)) return;
    }
  }

  void leaf(const Encoding& enc, std::vector<ClassRecord>& out) {
    if (space_.canonicalize(enc, true) != enc) return;
    const Configuration cfg{solid_.kind, enc};
    const SeamGraph g(solid_, cfg);
    const auto dev = is_developable(g, rule_);
    if (!dev.developable) return;
    ClassRecord rec;
    rec.info = space_.class_info(enc);
    rec.ridge_acyclic = g.ridge_network_acyclic();
    rec.witness_walk = dev.witness_walk;
    for (const auto& m : g.pairing_modes(uses_pairings(rule_) ? rule_ : RuleSet::TangentAlternation)) {
      const auto cycles = g.cycle_decomposition(m);
      rec.modes.push_back({m.switch_bits, static_cast<int>(cycles.size()), cycles.size() == 1});
    }
    out.push_back(std::move(rec));
  }

  const PlatonicSolid& solid_;
  ConfigSpace space_;
  RuleSet rule_;
  EnumerationOptions opt_;
  int nf_ = 0, k_ = 0, nodes_dsu_ = 0;
  std::vector<int> order_;
  std::vector<std::vector<int>> closing_;
  std::vector<std::vector<int>> inverse_face_;
  std::vector<std::vector<std::array<int, 2>>> arcs_;
  std::vector<int> contrib_;
  std::atomic<std::uint64_t> nodes_{0};
  std::atomic<bool> stop_{false};
};

}  // namespace

ClassReport enumerate_classes(const PlatonicSolid& solid, RuleSet rule, const EnumerationOptions& options) {
  return Searcher(solid, rule, options).run();
}

std::string class_report_json(const ClassReport& r) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["solid"] = std::string(solid_name(r.solid));
  j["rule_set"] = std::string(rule_set_name(r.rule));
  j["complete"] = r.complete;
  j["nodes"] = r.nodes;
  j["class_count"] = r.classes.size();
  j["chiral_classes"] = r.chiral_count();
  j["classes_counting_mirror_pairs_twice"] = r.classes.size() + r.chiral_count();
  j["classes_without_rotation_axis"] = r.asymmetric_count();
  j["raw_developable_configs"] = r.raw_count();
  auto& arr = j["classes"] = nlohmann::ordered_json::array();
  for (const auto& c : r.classes) {
    nlohmann::ordered_json e;
    e["representative"] = nlohmann::ordered_json::parse(to_descriptor({r.solid, c.info.canonical}));
    e["encoding"] = encoding_string(c.info.canonical);
    e["orbit_size"] = c.info.orbit_size;
    e["chiral"] = c.info.chiral;
    e["proper_stabilizer_order"] = c.info.proper_stabilizer;
    e["full_stabilizer_order"] = c.info.full_stabilizer;
    e["ridge_network_acyclic"] = c.ridge_acyclic;
    e["mode_count"] = c.modes.size();
    auto& modes = e["modes"] = nlohmann::ordered_json::array();
    for (const auto& m : c.modes)
      modes.push_back({{"switch_bits", m.switch_bits}, {"cycles", m.cycle_count}, {"full_surface", m.full}});
    e["witness_walk"] = c.witness_walk;
    arr.push_back(std::move(e));
  }
  return j.dump(2) + "\n";
}

std::string class_report_table(const ClassReport& r) {
  std::ostringstream os;
  os << solid_name(r.solid) << "  rule-set " << rule_set_name(r.rule) << (r.complete ? "" : "  INCOMPLETE")
     << "  nodes " << r.nodes << "\n";
  os << "  #  encoding              orbit  chiral  rot-stab  modes  full  note\n";
  int i = 0;
  for (const auto& c : r.classes) {
    const int full = static_cast<int>(std::count_if(c.modes.begin(), c.modes.end(), [](const ModeSummary& m) { return m.full; }));
    char line[160];
    std::snprintf(line, sizeof line, "  %-2d %-21s %5zu  %-6s  %8d  %5zu  %4d  %s\n", ++i,
                  encoding_string(c.info.canonical).c_str(), c.info.orbit_size, c.info.chiral ? "yes" : "no",
                  c.info.proper_stabilizer, c.modes.size(), full,
                  c.info.proper_stabilizer > 1 ? "" : "no rotational symmetry axis");
    os << line;
  }
  os << "  classes " << r.classes.size() << " (mirror pairs counted twice: " << r.classes.size() + r.chiral_count()
     << "), without rotation axis " << r.asymmetric_count() << "\n";
  return os.str();
}

}  // namespace platonicon
