#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace forge {

using Nat = std::uint64_t;

/// An element of the base group, as a power of the group's generator.
/// All supported groups are cyclic; the owning BaseGroup normalizes the
/// exponent (mod the group order for finite groups).
struct GroupElement {
  std::int64_t exponent = 0;

  friend bool operator==(const GroupElement& a, const GroupElement& b) {
    return a.exponent == b.exponent;
  }
  friend bool operator!=(const GroupElement& a, const GroupElement& b) {
    return !(a == b);
  }
};

/// Oracle for a countable cofinitary group of permutations of N.
///
/// Built-in instances:
///   trivial    only the identity
///   swap       <tau>,   tau(n) = n+1 for even n, n-1 for odd n   (order 2)
///   swap-tail  <gamma>, gamma fixes {0,1}, swaps 2k <-> 2k+1 for k >= 1
///   shift      <zeta>,  zeta = b^-1 (+1) b with b(2k)=k, b(2k+1)=-k-1
///
/// User groups load from a table file describing the generator on [0, M)
/// plus a declared tail pattern; an identity tail is rejected since it
/// would give the generator infinitely many fixed points. Cofinitariness
/// of table groups is window-checked at load, not proven.
class BaseGroup {
 public:
  static std::shared_ptr<const BaseGroup> builtin(std::string_view name);
  static std::shared_ptr<const BaseGroup> from_table_file(const std::string& path);
  /// Accepts a built-in name or "file:<path>".
  static std::shared_ptr<const BaseGroup> resolve(const std::string& spec);

  const std::string& name() const { return name_; }
  const std::string& generator_name() const { return gen_name_; }

  /// 0 means infinite order; 1 means the trivial group.
  std::int64_t order() const { return order_; }

  GroupElement identity() const { return GroupElement{0}; }
  bool is_identity(GroupElement g) const { return normalize(g.exponent) == 0; }
  GroupElement generator() const;
  GroupElement power(std::int64_t e) const { return GroupElement{normalize(e)}; }
  GroupElement multiply(GroupElement a, GroupElement b) const {
    return GroupElement{normalize(a.exponent + b.exponent)};
  }
  GroupElement invert(GroupElement a) const { return GroupElement{normalize(-a.exponent)}; }

  Nat eval(GroupElement g, Nat n) const;

  /// Complete fixed-point set of a non-identity element; throws on identity.
  std::vector<Nat> fix_set(GroupElement g) const;

  /// Token for word syntax and serialization: "tau", "zeta^-2", "1" for identity.
  std::string element_token(GroupElement g) const;
  std::optional<GroupElement> parse_token(std::string_view token) const;

  /// Deterministic enumeration: 1, a, a^-1, a^2, a^-2, ... (finite groups stop).
  std::optional<GroupElement> element_at(std::size_t index) const;

  /// Rank used for canonical letter ordering: g -> 2|e| + (e<0), e != 0.
  static std::uint64_t letter_rank(GroupElement g);

 private:
  enum class Kind { Trivial, Swap, SwapTail, Shift, Table };
  enum class Tail { Swap, SwapTail, Shift };

  BaseGroup() = default;

  std::int64_t normalize(std::int64_t e) const;
  Nat step(Nat n) const;          // generator applied once
  Nat step_inverse(Nat n) const;  // generator inverse applied once
  void validate_table();

  Kind kind_ = Kind::Trivial;
  std::string name_;
  std::string gen_name_;
  std::int64_t order_ = 1;  // 0 = infinite
  // Table groups only.
  std::vector<Nat> table_;
  std::vector<std::pair<Nat, Nat>> inverse_table_;  // sorted by first
  Tail tail_ = Tail::Swap;
};

/// A total injective oracle used as a hitting target: a built-in
/// permutation ("tau" | "gamma" | "zeta") or a finite table loaded from a
/// file with lines "n n'" (probing beyond the table yields nullopt).
class Permutation {
 public:
  static Permutation resolve(const std::string& spec);

  const std::string& spec() const { return spec_; }
  std::optional<Nat> eval(Nat n) const;

 private:
  std::string spec_;
  std::shared_ptr<const BaseGroup> group_;  // built-in carrier
  GroupElement element_{};
  std::vector<std::pair<Nat, Nat>> table_;  // sorted by first
};

}  // namespace forge
