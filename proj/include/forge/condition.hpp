#pragma once

#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "forge/bitstream.hpp"
#include "forge/coding.hpp"
#include "forge/partial_injection.hpp"
#include "forge/paths.hpp"
#include "forge/words.hpp"

namespace forge {

/// Shared context of a family of conditions. With coding disabled the
/// poset is the plain one (no parity machinery, coding parameters must be
/// empty); that mode exists for isolated testing and is never serialized.
struct ConditionContext {
  std::shared_ptr<const BaseGroup> group;
  std::shared_ptr<const BitStream> stream;
  bool coding = true;

  bool same_as(const ConditionContext& other) const;
};

/// A condition (s, F, m-bar): a finite injective partial map, a finite set
/// of non-group reduced words whose fixed points are frozen, and coding
/// parameters for a subset of F.
struct Condition {
  ConditionContext ctx;
  PartialInjection s;
  std::set<ReducedWord, WordLess> words;            // F
  std::map<ReducedWord, Nat, WordLess> coding;      // m-bar

  const BaseGroup& group() const { return *ctx.group; }
  const BitStream& stream() const { return *ctx.stream; }

  static Condition empty(ConditionContext ctx) { return Condition{std::move(ctx), {}, {}, {}}; }
};

struct ConditionViolation {
  enum class Kind {
    GroupWordInF,        // (A1) F must avoid base-group words
    CodedWordNotInF,     // (A2) dom(m-bar) must be contained in F
    CodingFailed,        // (A3) some coded word has no exact code length
    PathsIntersect,      // (A4) two coded words' path sets meet
    CodingDisabled,      // coding parameters present in the plain poset
  };
  Kind kind;
  ReducedWord word;
  ReducedWord other_word;  // PathsIntersect only
  Nat value = 0;           // PathsIntersect: a shared path value
  std::string detail;
};

/// Verifies (A1)-(A4) exhaustively; empty result means the condition is valid.
std::vector<ConditionViolation> check_condition(const Condition& p);

struct OrderViolation {
  enum class Kind {
    NotSupersetS,
    NotSupersetF,
    NotSupersetCoding,
    NewFixedPointUnwitnessed,
  };
  Kind kind;
  ReducedWord word;  // NewFixedPointUnwitnessed
  Nat point = 0;     // NewFixedPointUnwitnessed
  std::string detail;
};

std::string describe(const OrderViolation& v, const BaseGroup& group);
std::string describe(const ConditionViolation& v, const BaseGroup& group);

/// The extension order: q <= p iff the components of q extend those of p
/// and every fixed point of every w in F^p under s^q has a path meeting
/// the s^p-fixed points of some nonempty subword of w (group-word subwords
/// use the group's fixed-point oracle). Throws on mismatched contexts.
bool leq(const Condition& q, const Condition& p,
         std::vector<OrderViolation>* violations = nullptr);

/// N = #{(l, u, m) : l < |w|, u a nonempty subword of w, m in fix(u[s^p])}.
/// No extension of p may give w more than N fixed points beyond fix(w[s^p]).
/// Requires w in F^p.
Nat fixed_point_bound(const Condition& p, const ReducedWord& w);

/// JSON round-trip ({"group","z","s","F","m"}; byte-stable printing).
std::string to_json(const Condition& p);
Condition condition_from_json(const std::string& text);
/// As above but reusing already-resolved context objects when names match.
Condition condition_from_json(const std::string& text, const ConditionContext& hint);

}  // namespace forge
