#pragma once

#include "platonicon/solid.hpp"

#include <cstdint>
#include <iterator>
#include <string>
#include <vector>

namespace platonicon {

// Orientation index per face, in canonical face order.
using Encoding = std::vector<std::uint8_t>;

// Orientation index semantics for a face cycle (f0, f1, ..., fk-1):
//   triangle  i in 0..2  apex edge {f_i, f_{i+1}}
//   square    i in 0..1  diagonal  {f_i, f_{i+2}}
//   pentagon  i in 0..4  {f_i, f_{i+2}, f_{i+3}}: f_i plus the opposite edge
// Apex sets are returned in exactly that order.
int orientation_count(int sides);
std::vector<int> apex_set(const std::vector<int>& face, int index);
std::vector<int> apex_set(const PlatonicSolid& solid, int face, int index);

struct Configuration {
  SolidKind solid;
  Encoding orientation;

  friend bool operator==(const Configuration&, const Configuration&) = default;
};

// Throws std::invalid_argument on wrong length or out-of-range indices.
void validate(const PlatonicSolid& solid, const Configuration& config);

std::string to_descriptor(const Configuration& config);
Configuration from_descriptor(const std::string& json_text);
std::string encoding_string(const Encoding& e);  // "0120..."
Encoding parse_encoding(const std::string& digits);

// Lexicographic stream over all configurations of a solid, first face most
// significant. A range [first, last) of linear indices can be streamed
// independently, which is how enumeration is sharded.
class ConfigRange {
 public:
  explicit ConfigRange(const PlatonicSolid& solid);
  ConfigRange(const PlatonicSolid& solid, std::uint64_t first, std::uint64_t last);

  std::uint64_t total() const { return total_; }
  std::uint64_t size() const { return last_ - first_; }
  Encoding at(std::uint64_t index) const;
  std::uint64_t index_of(const Encoding& e) const;

  class iterator {
   public:
    using iterator_category = std::input_iterator_tag;
    using value_type = Configuration;
    using difference_type = std::ptrdiff_t;
    using pointer = const Configuration*;
    using reference = const Configuration&;

    reference operator*() const { return current_; }
    pointer operator->() const { return &current_; }
    iterator& operator++();
    bool operator==(const iterator& o) const { return index_ == o.index_; }
    bool operator!=(const iterator& o) const { return index_ != o.index_; }

   private:
    friend class ConfigRange;
    iterator(const ConfigRange* r, std::uint64_t index);
    const ConfigRange* range_ = nullptr;
    std::uint64_t index_ = 0;
    Configuration current_;
  };

  iterator begin() const { return iterator(this, first_); }
  iterator end() const { return iterator(this, last_); }

 private:
  SolidKind kind_;
  std::vector<int> radix_;
  std::uint64_t total_ = 1;
  std::uint64_t first_ = 0;
  std::uint64_t last_ = 0;
};

ConfigRange enumerate_configs(const PlatonicSolid& solid);

struct ClassInfo {
  Encoding canonical;           // full-group minimum
  Encoding canonical_proper;    // rotation-group minimum
  std::size_t orbit_size = 0;   // under the full group
  int full_stabilizer = 0;
  int proper_stabilizer = 0;
  bool chiral = false;          // no improper op fixes the configuration
};

// Symmetry action on configurations: faces are permuted and orientation
// indices follow the apex set images.
class ConfigSpace {
 public:
  ConfigSpace(const PlatonicSolid& solid, const SymmetryGroup& group);

  const PlatonicSolid& solid() const { return solid_; }
  const SymmetryGroup& group() const { return group_; }
  int face_count() const { return solid_.face_count(); }
  int radix(int face) const { return radix_[face]; }

  int face_image(std::size_t op, int face) const { return face_img_[op * nf_ + face]; }
  int orientation_image(std::size_t op, int face, int index) const {
    return orient_img_[(op * nf_ + face) * 5 + index];
  }

  Encoding apply(std::size_t op, const Encoding& c) const;
  Encoding canonicalize(const Encoding& c, bool include_improper) const;
  ClassInfo class_info(const Encoding& c) const;

 private:
  PlatonicSolid solid_;
  SymmetryGroup group_;
  int nf_;
  std::vector<int> radix_;
  std::vector<int> face_img_;
  std::vector<int> orient_img_;
};

// Convenience form; throws std::invalid_argument when the group belongs to a
// different solid or lacks the requested improper operations.
Encoding canonicalize(const Configuration& config, const SymmetryGroup& group, bool include_improper);

}  // namespace platonicon
