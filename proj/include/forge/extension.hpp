#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "forge/condition.hpp"

namespace forge {

/// A path whose growth an extension must control: the forbidden-value
/// machinery adds the start to the excluded-image closure.
struct TrackedPath {
  ReducedWord word;
  Nat start = 0;
};

/// A coding constraint on the new image value n': g(n') must have the
/// given parity. Triggered when the extension point is the last value of a
/// coded word's path stopped before a critical X (domain mode) or critical
/// X^-1 (range mode), where w = g X w' with g the possible group letter
/// left of that occurrence.
struct ParityRequirement {
  GroupElement g;
  int bit = 0;
  ReducedWord word;     // the coded word that triggered the requirement
  Nat code_length = 0;  // current exact code length l; the bit is z(l)
};

struct ForbiddenValue {
  Nat value = 0;
  std::string rule;  // "fixed-point" | "closure"
  ReducedWord word;  // the F* member responsible
};

/// The finite exclusion data for choosing a new image value, with
/// provenance. Admissible values are cofinite even with the parity
/// requirement, since g is a permutation.
struct ExtensionConstraint {
  std::vector<Nat> forbidden;  // sorted, deduplicated
  std::optional<ParityRequirement> parity;
  std::vector<ForbiddenValue> provenance;

  bool admits(Nat value, const BaseGroup& group) const;
};

enum class ExtensionMode { Domain, Range };

/// The exclusion set of the extension lemmas, materialized: with F* the
/// subwords of cyclic permutations of F^p u extra and E = dom(s) u ran(s)
/// u {n} u ran(m-bar) u tracked starts, a value is forbidden when it lies
/// in fix(u[s]) for nonempty u in F*, or in g u^i [s][E] for u in F*,
/// g in F* n G (including the identity via the empty word), i in {-1,1};
/// partial values are skipped. Range mode is the mirror image (the new
/// pair is (n', n)). Preconditions: n not in dom(s^p) (domain mode) /
/// not in ran(s^p) (range mode).
ExtensionConstraint forbidden_set(const Condition& p, Nat n,
                                  std::span<const ReducedWord> extra,
                                  ExtensionMode mode,
                                  std::span<const TrackedPath> tracked = {});

/// Extends s^p by (n, n') with n' the minimal admissible value. The result
/// is a valid condition <= p. Throws std::invalid_argument if n is already
/// in the domain.
Condition domain_extend(const Condition& p, Nat n);
Condition domain_extend(const Condition& p, Nat n, std::span<const ReducedWord> extra,
                        std::span<const TrackedPath> tracked);

/// Mirror image: extends s^p by (n', n) for minimal admissible n'.
Condition range_extend(const Condition& p, Nat n);
Condition range_extend(const Condition& p, Nat n, std::span<const ReducedWord> extra,
                       std::span<const TrackedPath> tracked);

/// (s^p, F^p u {w}, m-bar^p). Rejects group words.
Condition add_word(const Condition& p, const ReducedWord& w);

/// Assigns w a fresh coding parameter: the minimal admissible n' with
/// n' = z(0) (mod 2) whose (w, s^p)-path terminates before the rightmost
/// X-letter of w, so that w[s^p] exactly codes z|1 with parameter n'.
/// Requires a non-group word not yet coded, and coding enabled.
Condition start_coding(const Condition& p, const ReducedWord& w);

/// Budget meter for composite operations; primitive extension ops cost 1.
struct OpBudget {
  Nat remaining = 0;
  bool unlimited = false;

  static OpBudget infinite() { return OpBudget{0, true}; }
  bool try_consume() {
    if (unlimited) return true;
    if (remaining == 0) return false;
    --remaining;
    return true;
  }
};

/// Extends until exact_code_length(w, s, m-bar(w)) >= goal, starting the
/// coding first if needed, by repeatedly extending the domain (path
/// stopped before an X) or range (before an X^-1) at the path's last
/// value. Stops early when the budget runs out.
Condition extend_coding(const Condition& p, const ReducedWord& w, Nat goal,
                        OpBudget* budget = nullptr, Nat* ops_applied = nullptr);

struct HitResult {
  Condition q;
  Nat n = 0;
  Nat value = 0;
};

/// Finds the least n >= k with n outside dom(s^p) and target(n) admissible
/// (parity constraints included), and extends s by (n, target(n)). Probes
/// at most probe_bound values of n and throws std::runtime_error when none
/// is admissible or the target is undefined or non-injective on the
/// probed window.
HitResult hit(const Condition& p, const Permutation& target, Nat k,
              Nat probe_bound = 10000);

struct DistinguishResult {
  Condition q;
  Nat witness = 0;     // n with w[s^q](n) defined and != g(n)
  Nat word_value = 0;  // w[s^q](n)
  Nat g_value = 0;     // g(n)
  Nat ops = 0;
  bool complete = true;  // false when the budget ran out mid-steering
};

/// Produces q <= p and n witnessing w[s^q] != g: steers a fresh n's path
/// to one step before the critical X-letter, then picks the final image
/// among admissible values different from g(n). Rejects group words.
DistinguishResult distinguish(const Condition& p, const ReducedWord& w, GroupElement g,
                              OpBudget* budget = nullptr);

}  // namespace forge
