#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "forge/base_group.hpp"

namespace forge {

/// A finite injective partial map N -> N, stored with its inverse.
class PartialInjection {
 public:
  PartialInjection() = default;

  /// Throws std::invalid_argument on a functionality or injectivity violation.
  static PartialInjection from_pairs(const std::vector<std::pair<Nat, Nat>>& pairs);

  /// Table file: lines "n n'", '#' starts a comment.
  static PartialInjection from_table_file(const std::string& path);

  bool in_domain(Nat n) const { return forward_.count(n) != 0; }
  bool in_range(Nat n) const { return inverse_.count(n) != 0; }

  std::optional<Nat> apply(Nat n) const;
  std::optional<Nat> apply_inverse(Nat n) const;

  /// Value copy with one more pair; throws if it would break the invariants.
  PartialInjection with_pair(Nat n, Nat image) const;

  /// In-place insertion for replay loops; same checks as with_pair.
  void insert_pair(Nat n, Nat image);

  PartialInjection inverted() const;

  bool superset_of(const PartialInjection& other) const;

  std::size_t size() const { return forward_.size(); }
  bool empty() const { return forward_.empty(); }

  const std::map<Nat, Nat>& forward() const { return forward_; }
  const std::map<Nat, Nat>& inverse() const { return inverse_; }

  friend bool operator==(const PartialInjection& a, const PartialInjection& b) {
    return a.forward_ == b.forward_;
  }
  friend bool operator!=(const PartialInjection& a, const PartialInjection& b) {
    return !(a == b);
  }

 private:
  std::map<Nat, Nat> forward_;
  std::map<Nat, Nat> inverse_;
};

}  // namespace forge
