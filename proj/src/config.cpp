#include "platonicon/config.hpp"

#include "json.hpp"

#include <algorithm>
#include <stdexcept>

namespace platonicon {

int orientation_count(int sides) {
  switch (sides) {
    case 3: return 3;
    case 4: return 2;
    case 5: return 5;
    default: throw std::invalid_argument("unsupported face size " + std::to_string(sides));
  }
}

std::vector<int> apex_set(const std::vector<int>& face, int index) {
  const int n = static_cast<int>(face.size());
  const int k = orientation_count(n);
  if (index < 0 || index >= k)
    throw std::out_of_range("orientation index " + std::to_string(index) + " out of range; k = " +
                            std::to_string(k));
  switch (n) {
    case 3: return {face[index], face[(index + 1) % 3]};
    case 4: return {face[index], face[index + 2]};
    default: return {face[index], face[(index + 2) % 5], face[(index + 3) % 5]};
  }
}

std::vector<int> apex_set(const PlatonicSolid& solid, int face, int index) {
  return apex_set(solid.faces.at(face), index);
}

void validate(const PlatonicSolid& solid, const Configuration& config) {
  if (config.solid != solid.kind) throw std::invalid_argument("configuration belongs to another solid");
  if (static_cast<int>(config.orientation.size()) != solid.face_count())
    throw std::invalid_argument("configuration needs " + std::to_string(solid.face_count()) +
                                " orientation entries");
  const int k = orientation_count(solid.face_sides());
  for (auto o : config.orientation)
    if (o >= k) throw std::invalid_argument("orientation index out of range; k = " + std::to_string(k));
}

std::string to_descriptor(const Configuration& config) {
  nlohmann::ordered_json j;
  j["schema_version"] = 1;
  j["solid"] = std::string(solid_name(config.solid));
  auto& arr = j["orientation"] = nlohmann::ordered_json::array();
  for (auto o : config.orientation) arr.push_back(static_cast<int>(o));
  return j.dump() + "\n";
}

Configuration from_descriptor(const std::string& json_text) {
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(json_text);
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("malformed configuration descriptor: ") + e.what());
  }
  if (!j.contains("solid") || !j.contains("orientation"))
    throw std::invalid_argument("configuration descriptor needs 'solid' and 'orientation'");
  if (j.value("schema_version", 1) != 1) throw std::invalid_argument("unsupported schema_version");
  Configuration c{solid_from_name(j["solid"].get<std::string>()), {}};
  for (const auto& o : j["orientation"]) {
    const int v = o.get<int>();
    if (v < 0 || v > 4) throw std::invalid_argument("orientation index out of range");
    c.orientation.push_back(static_cast<std::uint8_t>(v));
  }
  validate(build_solid(c.solid), c);
  return c;
}

std::string encoding_string(const Encoding& e) {
  std::string s;
  for (auto o : e) s.push_back(static_cast<char>('0' + o));
  return s;
}

Encoding parse_encoding(const std::string& digits) {
  Encoding e;
  for (char ch : digits) {
    if (ch < '0' || ch > '4') throw std::invalid_argument("bad encoding digit in '" + digits + "'");
    e.push_back(static_cast<std::uint8_t>(ch - '0'));
  }
  return e;
}

ConfigRange::ConfigRange(const PlatonicSolid& solid) : ConfigRange(solid, 0, UINT64_MAX) {}

ConfigRange::ConfigRange(const PlatonicSolid& solid, std::uint64_t first, std::uint64_t last)
    : kind_(solid.kind) {
  for (int f = 0; f < solid.face_count(); ++f) {
    radix_.push_back(orientation_count(static_cast<int>(solid.faces[f].size())));
    total_ *= static_cast<std::uint64_t>(radix_.back());
  }
  first_ = std::min(first, total_);
  last_ = std::clamp(last, first_, total_);
}

Encoding ConfigRange::at(std::uint64_t index) const {
  Encoding e(radix_.size());
  for (int f = static_cast<int>(radix_.size()) - 1; f >= 0; --f) {
    e[f] = static_cast<std::uint8_t>(index % radix_[f]);
    index /= radix_[f];
  }
  return e;
}

std::uint64_t ConfigRange::index_of(const Encoding& e) const {
  std::uint64_t idx = 0;
  for (std::size_t f = 0; f < radix_.size(); ++f) idx = idx * radix_[f] + e[f];
  return idx;
}

ConfigRange::iterator::iterator(const ConfigRange* r, std::uint64_t index) : range_(r), index_(index) {
  current_.solid = r->kind_;
  if (index < r->last_) current_.orientation = r->at(index);
}

ConfigRange::iterator& ConfigRange::iterator::operator++() {
  ++index_;
  auto& e = current_.orientation;
  for (int f = static_cast<int>(e.size()) - 1; f >= 0; --f) {
    if (++e[f] < range_->radix_[f]) break;
    e[f] = 0;
  }
  return *this;
}

ConfigRange enumerate_configs(const PlatonicSolid& solid) { return ConfigRange(solid); }

ConfigSpace::ConfigSpace(const PlatonicSolid& solid, const SymmetryGroup& group)
    : solid_(solid), group_(group), nf_(solid.face_count()) {
  if (group.solid != solid.kind) throw std::invalid_argument("symmetry group belongs to another solid");
  for (int f = 0; f < nf_; ++f) radix_.push_back(orientation_count(static_cast<int>(solid.faces[f].size())));
  face_img_.resize(group.ops.size() * nf_);
  orient_img_.assign(group.ops.size() * nf_ * 5, -1);
  for (std::size_t g = 0; g < group.ops.size(); ++g) {
    const auto& op = group.ops[g];
    for (int f = 0; f < nf_; ++f) {
      const int h = op.face_perm[f];
      face_img_[g * nf_ + f] = h;
      for (int i = 0; i < radix_[f]; ++i) {
        auto img = apex_set(solid, f, i);
        for (auto& v : img) v = op.vertex_perm[v];
        std::sort(img.begin(), img.end());
        for (int j = 0; j < radix_[h]; ++j) {
          auto cand = apex_set(solid, h, j);
          std::sort(cand.begin(), cand.end());
          if (cand == img) {
            orient_img_[(g * nf_ + f) * 5 + i] = j;
            break;
          }
        }
        if (orient_img_[(g * nf_ + f) * 5 + i] < 0) throw std::logic_error("apex set image not found");
      }
    }
  }
}

Encoding ConfigSpace::apply(std::size_t op, const Encoding& c) const {
  Encoding out(c.size());
  for (int f = 0; f < nf_; ++f)
    out[face_image(op, f)] = static_cast<std::uint8_t>(orientation_image(op, f, c[f]));
  return out;
}

Encoding ConfigSpace::canonicalize(const Encoding& c, bool include_improper) const {
  if (include_improper && group_.proper_only)
    throw std::invalid_argument("improper canonicalization requested from a rotation-only group");
  Encoding best = c;
  for (std::size_t g = 0; g < group_.ops.size(); ++g) {
    if (!include_improper && !group_.ops[g].proper) continue;
    Encoding img = apply(g, c);
    if (img < best) best = std::move(img);
  }
  return best;
}

ClassInfo ConfigSpace::class_info(const Encoding& c) const {
  ClassInfo info;
  info.canonical = c;
  info.canonical_proper = c;
  for (std::size_t g = 0; g < group_.ops.size(); ++g) {
    Encoding img = apply(g, c);
    const bool proper = group_.ops[g].proper;
    if (img == c) {
      ++info.full_stabilizer;
      if (proper) ++info.proper_stabilizer;
    }
    if (img < info.canonical) info.canonical = img;
    if (proper && img < info.canonical_proper) info.canonical_proper = img;
  }
  info.orbit_size = group_.ops.size() / static_cast<std::size_t>(info.full_stabilizer);
  info.chiral = !group_.proper_only && info.full_stabilizer == info.proper_stabilizer;
  return info;
}

Encoding canonicalize(const Configuration& config, const SymmetryGroup& group, bool include_improper) {
  if (config.solid != group.solid) throw std::invalid_argument("symmetry group belongs to another solid");
  const PlatonicSolid solid = build_solid(config.solid);
  validate(solid, config);
  return ConfigSpace(solid, group).canonicalize(config.orientation, include_improper);
}

}  // namespace platonicon
