#include "forge/extension.hpp"

#include <algorithm>
#include <cassert>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

namespace forge {
namespace {

std::size_t first_x_index(const ReducedWord& w) {
  const auto& letters = w.letters();
  for (std::size_t i = 0; i < letters.size(); ++i)
    if (letters[i].is_x()) return i;
  throw std::invalid_argument("word contains no X-letter");
}

std::size_t critical_x_index(const ReducedWord& w) {
  const auto& letters = w.letters();
  for (std::size_t i = letters.size(); i-- > 0;)
    if (letters[i].is_x()) return i;
  throw std::invalid_argument("word contains no X-letter");
}

/// X <-> X^-1 throughout: substituting s for X in the flipped data equals
/// substituting s^-1 in the original, so every range-mode question is a
/// domain-mode question about the flipped condition.
Condition flip(const Condition& p) {
  Condition out = Condition::empty(p.ctx);
  out.s = p.s.inverted();
  for (const ReducedWord& w : p.words) out.words.insert(flip_x(w));
  for (const auto& [w, m] : p.coding) out.coding.emplace(flip_x(w), m);
  return out;
}

std::vector<ReducedWord> flip(std::span<const ReducedWord> words) {
  std::vector<ReducedWord> out;
  out.reserve(words.size());
  for (const ReducedWord& w : words) out.push_back(flip_x(w));
  return out;
}

std::vector<TrackedPath> flip(std::span<const TrackedPath> tracked) {
  std::vector<TrackedPath> out;
  out.reserve(tracked.size());
  for (const TrackedPath& t : tracked) out.push_back({flip_x(t.word), t.start});
  return out;
}

std::vector<Nat> subword_fixed_points(const ReducedWord& u, const BaseGroup& group,
                                      const PartialInjection& s) {
  if (is_group_word(u)) return group.fix_set(u.letters().front().element);
  return fixed_points(u, group, s);
}

/// Shared exclusion data for choosing a new image value, in domain
/// orientation. The extension point n varies per query so that one oracle
/// serves a whole hitting probe.
class ExtensionOracle {
 public:
  ExtensionOracle(const Condition& p, std::span<const ReducedWord> extra,
                  std::span<const TrackedPath> tracked)
      : p_(p), group_(p.group()) {
    // F*: subwords of cyclic permutations of F u extra. The empty word is
    // always present; through it the closure covers E itself.
    std::set<ReducedWord, WordLess> closure;
    closure.insert(ReducedWord());
    auto absorb = [&](const ReducedWord& w) {
      for (const ReducedWord& rotation : cyclic_permutations(w, group_))
        for (const ReducedWord& u : subwords(rotation)) closure.insert(u);
    };
    for (const ReducedWord& w : p.words) absorb(w);
    for (const ReducedWord& w : extra) absorb(w);
    for (const ReducedWord& u : closure) {
      fstar_.push_back(u);
      fstar_inverses_.push_back(invert(u, group_));
      if (is_group_word(u)) {
        GroupElement g = u.empty() ? group_.identity() : u.letters().front().element;
        group_members_.push_back(g);
        group_member_inverses_.push_back(group_.invert(g));
      }
    }

    for (auto [n, image] : p.s.forward()) {
      base_.push_back(n);
      base_.push_back(image);
    }
    for (const auto& [w, m] : p.coding) base_.push_back(m);
    for (const TrackedPath& t : tracked) base_.push_back(t.start);
    std::sort(base_.begin(), base_.end());
    base_.erase(std::unique(base_.begin(), base_.end()), base_.end());

    if (p.ctx.coding) collect_parities();
  }

  const std::vector<ReducedWord>& fstar() const { return fstar_; }
  const std::vector<Nat>& base_points() const { return base_; }

  /// The parity requirement binding at extension point n, if any: the
  /// unique coded word whose path stops at n before a critical X.
  std::optional<ParityRequirement> parity_at(Nat n) const {
    auto it = parity_by_stop_.find(n);
    if (it == parity_by_stop_.end()) return std::nullopt;
    return it->second;
  }

  bool in_base(Nat value, std::optional<Nat> n) const {
    return (n && value == *n) ||
           std::binary_search(base_.begin(), base_.end(), value);
  }

  bool forbidden(Nat value, std::optional<Nat> n, ForbiddenValue* reason = nullptr) const {
    if (in_base(value, n)) {
      if (reason) *reason = {value, "closure", ReducedWord()};
      return true;
    }
    for (std::size_t i = 0; i < fstar_.size(); ++i) {
      const ReducedWord& u = fstar_[i];
      if (u.empty()) continue;
      bool fixed;
      if (is_group_word(u))
        fixed = group_.eval(u.letters().front().element, value) == value;
      else
        fixed = apply_word(u, group_, p_.s, value) == std::optional<Nat>(value);
      if (fixed) {
        if (reason) *reason = {value, "fixed-point", u};
        return true;
      }
    }
    // value in g u^i [s][E]  iff  u^{-i}[s](g^-1(value)) lands in E.
    for (std::size_t gi = 0; gi < group_members_.size(); ++gi) {
      for (std::size_t ui = 0; ui < fstar_.size(); ++ui) {
        Nat pulled = group_.eval(group_member_inverses_[gi], value);
        auto via_direct = apply_word(fstar_inverses_[ui], group_, p_.s, pulled);
        if (via_direct && in_base(*via_direct, n)) {
          if (reason) *reason = {value, "closure", fstar_[ui]};
          return true;
        }
        auto via_inverse = apply_word(fstar_[ui], group_, p_.s, pulled);
        if (via_inverse && in_base(*via_inverse, n)) {
          if (reason) *reason = {value, "closure", fstar_[ui]};
          return true;
        }
      }
    }
    return false;
  }

  bool admissible(Nat value, std::optional<Nat> n) const {
    if (forbidden(value, n)) return false;
    if (auto parity = n ? parity_at(*n) : std::nullopt)
      return static_cast<int>(group_.eval(parity->g, value) % 2) == parity->bit;
    return true;
  }

  /// Least admissible value, honoring an extra exclusion list and, when
  /// extra_parity is set (fresh coding parameters), value = bit (mod 2).
  Nat choose(std::optional<Nat> n, std::span<const Nat> extra_forbidden = {},
             std::optional<int> extra_parity = std::nullopt,
             const std::function<bool(Nat)>& accept = {}) const {
    // Everything forbidden lies among finitely many values; 2x slack for a
    // parity constraint plus the explicit exclusions bounds the scan.
    Nat bound = 2 * (upper_estimate(n) + static_cast<Nat>(extra_forbidden.size())) + 64;
    for (Nat value = 0; value <= bound; ++value) {
      if (extra_parity && static_cast<int>(value % 2) != *extra_parity) continue;
      if (std::find(extra_forbidden.begin(), extra_forbidden.end(), value) !=
          extra_forbidden.end())
        continue;
      if (in_base(value, n)) continue;  // fast path: dom, ran, parameters, n
      if (!admissible(value, n)) continue;
      if (accept && !accept(value)) continue;
      return value;
    }
    throw std::logic_error("no admissible value found within the scan bound");
  }

 private:
  void collect_parities() {
    for (const auto& [w, m] : p_.coding) {
      if (is_group_word(w)) continue;  // invalid condition; checked elsewhere
      Path path = mpath(w, group_, p_.s, m);
      if (!path.terminated()) continue;
      std::size_t stop = path.before_letter - 1;  // storage index of the blocked letter
      const Letter& blocked = w.letters()[stop];
      if (blocked.x_exponent <= 0) continue;
      bool critical = true;
      for (std::size_t i = stop + 1; i < w.length(); ++i)
        if (w.letters()[i].is_x()) critical = false;
      if (!critical) continue;
      GroupElement g = stop + 1 < w.length() ? w.letters()[stop + 1].element
                                             : group_.identity();
      auto length = exact_code_length(w, group_, p_.s, m, p_.stream());
      if (!length)
        throw std::invalid_argument("extension over a condition that does not code");
      ParityRequirement requirement{g, p_.stream().bit(*length), w, *length};
      auto [it, inserted] = parity_by_stop_.emplace(path.last_value(), requirement);
      if (!inserted)
        throw std::invalid_argument(
            "two coded paths stop at the same value; paths are not disjoint");
    }
  }

  Nat upper_estimate(std::optional<Nat> n) const {
    Nat top = n.value_or(0);
    if (!base_.empty()) top = std::max(top, base_.back());
    Nat closure_size = static_cast<Nat>(
        group_members_.size() * fstar_.size() * 2 * (base_.size() + 1));
    Nat fix_size = static_cast<Nat>(fstar_.size() * (2 * p_.s.size() + 4));
    return top + closure_size + fix_size + 16;
  }

  const Condition& p_;
  const BaseGroup& group_;
  std::vector<ReducedWord> fstar_;
  std::vector<ReducedWord> fstar_inverses_;
  std::vector<GroupElement> group_members_;
  std::vector<GroupElement> group_member_inverses_;
  std::vector<Nat> base_;  // E without the extension point: dom u ran u ran(m) u starts
  std::map<Nat, ParityRequirement> parity_by_stop_;
};

std::pair<Condition, Nat> domain_extend_core(const Condition& p, Nat n,
                                             std::span<const ReducedWord> extra,
                                             std::span<const TrackedPath> tracked,
                                             std::span<const Nat> extra_forbidden = {}) {
  if (p.s.in_domain(n))
    throw std::invalid_argument("domain_extend: " + std::to_string(n) +
                                " already in dom(s)");
  ExtensionOracle oracle(p, extra, tracked);
  Nat image = oracle.choose(n, extra_forbidden);
  Condition q = p;
  q.s = p.s.with_pair(n, image);
  return {std::move(q), image};
}

std::pair<Condition, Nat> range_extend_core(const Condition& p, Nat n,
                                            std::span<const ReducedWord> extra,
                                            std::span<const TrackedPath> tracked,
                                            std::span<const Nat> extra_forbidden = {}) {
  if (p.s.in_range(n))
    throw std::invalid_argument("range_extend: " + std::to_string(n) +
                                " already in ran(s)");
  Condition flipped = flip(p);
  std::vector<ReducedWord> flipped_extra = flip(extra);
  std::vector<TrackedPath> flipped_tracked = flip(tracked);
  ExtensionOracle oracle(flipped, flipped_extra, flipped_tracked);
  Nat preimage = oracle.choose(n, extra_forbidden);
  Condition q = p;
  q.s = p.s.with_pair(preimage, n);
  return {std::move(q), preimage};
}

}  // namespace

bool ExtensionConstraint::admits(Nat value, const BaseGroup& group) const {
  if (std::binary_search(forbidden.begin(), forbidden.end(), value)) return false;
  if (parity)
    return static_cast<int>(group.eval(parity->g, value) % 2) == parity->bit;
  return true;
}

ExtensionConstraint forbidden_set(const Condition& p, Nat n,
                                  std::span<const ReducedWord> extra,
                                  ExtensionMode mode,
                                  std::span<const TrackedPath> tracked) {
  const Condition* source = &p;
  Condition flipped;
  std::vector<ReducedWord> flipped_extra;
  std::vector<TrackedPath> flipped_tracked;
  if (mode == ExtensionMode::Range) {
    if (p.s.in_range(n))
      throw std::invalid_argument("forbidden_set: " + std::to_string(n) +
                                  " already in ran(s)");
    flipped = flip(p);
    flipped_extra = flip(extra);
    flipped_tracked = flip(tracked);
    source = &flipped;
    extra = flipped_extra;
    tracked = flipped_tracked;
  } else if (p.s.in_domain(n)) {
    throw std::invalid_argument("forbidden_set: " + std::to_string(n) +
                                " already in dom(s)");
  }

  const BaseGroup& group = source->group();
  ExtensionOracle oracle(*source, extra, tracked);

  ExtensionConstraint constraint;
  auto add = [&constraint](Nat value, const char* rule, const ReducedWord& word) {
    constraint.provenance.push_back({value, rule, word});
    constraint.forbidden.push_back(value);
  };

  for (const ReducedWord& u : oracle.fstar()) {
    if (u.empty()) continue;
    for (Nat m : subword_fixed_points(u, group, source->s)) add(m, "fixed-point", u);
  }

  std::vector<Nat> points(oracle.base_points());
  points.push_back(n);
  std::sort(points.begin(), points.end());
  points.erase(std::unique(points.begin(), points.end()), points.end());
  std::vector<GroupElement> multipliers;
  for (const ReducedWord& u : oracle.fstar())
    if (is_group_word(u))
      multipliers.push_back(u.empty() ? group.identity() : u.letters().front().element);
  for (const GroupElement& g : multipliers) {
    for (const ReducedWord& u : oracle.fstar()) {
      ReducedWord inverse = invert(u, group);
      for (int sign = 0; sign < 2; ++sign) {
        const ReducedWord& powered = sign == 0 ? u : inverse;
        for (Nat e : points) {
          auto image = apply_word(powered, group, source->s, e);
          if (image) add(group.eval(g, *image), "closure", u);
        }
      }
    }
  }

  std::sort(constraint.forbidden.begin(), constraint.forbidden.end());
  constraint.forbidden.erase(
      std::unique(constraint.forbidden.begin(), constraint.forbidden.end()),
      constraint.forbidden.end());
  constraint.parity = oracle.parity_at(n);
  return constraint;
}

Condition domain_extend(const Condition& p, Nat n) {
  return domain_extend_core(p, n, {}, {}).first;
}

Condition domain_extend(const Condition& p, Nat n, std::span<const ReducedWord> extra,
                        std::span<const TrackedPath> tracked) {
  return domain_extend_core(p, n, extra, tracked).first;
}

Condition range_extend(const Condition& p, Nat n) {
  return range_extend_core(p, n, {}, {}).first;
}

Condition range_extend(const Condition& p, Nat n, std::span<const ReducedWord> extra,
                       std::span<const TrackedPath> tracked) {
  return range_extend_core(p, n, extra, tracked).first;
}

Condition add_word(const Condition& p, const ReducedWord& w) {
  if (is_group_word(w))
    throw std::invalid_argument("add_word: base-group words cannot enter F");
  Condition q = p;
  q.words.insert(w);
  return q;
}

Condition start_coding(const Condition& p, const ReducedWord& w) {
  if (!p.ctx.coding)
    throw std::invalid_argument("start_coding: coding is disabled in this poset");
  if (is_group_word(w))
    throw std::invalid_argument("start_coding: base-group words cannot code");
  if (p.coding.count(w))
    throw std::invalid_argument("start_coding: word already has a coding parameter");

  const BaseGroup& group = p.group();
  std::vector<ReducedWord> extra{w};
  ExtensionOracle oracle(p, extra, {});
  std::size_t rightmost_x = first_x_index(w);
  Nat parameter = oracle.choose(
      std::nullopt, {}, p.stream().bit(0), [&](Nat candidate) {
        Path path = mpath(w, group, p.s, candidate);
        return path.terminated() && path.steps() == rightmost_x;
      });

  Condition q = p;
  q.words.insert(w);
  q.coding.emplace(w, parameter);
  return q;
}

Condition extend_coding(const Condition& p, const ReducedWord& w, Nat goal,
                        OpBudget* budget, Nat* ops_applied) {
  if (is_group_word(w))
    throw std::invalid_argument("extend_coding: base-group words cannot code");
  Nat ops = 0;
  Condition q = p;
  if (!q.coding.count(w)) {
    if (budget && !budget->try_consume()) {
      if (ops_applied) *ops_applied = ops;
      return q;
    }
    q = start_coding(q, w);
    ++ops;
  }

  const BaseGroup& group = q.group();
  Nat x_letters = 0;
  for (const Letter& l : w.letters())
    if (l.is_x()) ++x_letters;
  const Nat cap = (goal + 2) * (x_letters + 1) + 4;

  for (Nat round = 0; round <= cap; ++round) {
    Nat parameter = q.coding.at(w);
    auto length = exact_code_length(w, group, q.s, parameter, q.stream());
    if (!length)
      throw std::logic_error("extend_coding: coded word lost its exact code length");
    if (*length >= goal) break;
    if (budget && !budget->try_consume()) break;

    Path path = mpath(w, group, q.s, parameter);
    if (!path.terminated())
      throw std::logic_error("extend_coding: coded path became periodic");
    const Letter& blocked = w.letters()[path.before_letter - 1];
    if (blocked.x_exponent > 0)
      q = domain_extend(q, path.last_value());
    else
      q = range_extend(q, path.last_value());
    ++ops;
  }
  if (ops_applied) *ops_applied = ops;
  return q;
}

HitResult hit(const Condition& p, const Permutation& target, Nat k, Nat probe_bound) {
  ExtensionOracle oracle(p, {}, {});
  std::set<Nat> probed_values;
  for (Nat n = k; n < k + probe_bound; ++n) {
    auto value = target.eval(n);
    if (!value)
      throw std::runtime_error("hit: target '" + target.spec() +
                               "' undefined at " + std::to_string(n));
    if (!probed_values.insert(*value).second)
      throw std::runtime_error("hit: target '" + target.spec() +
                               "' is not injective on the probed window");
    if (p.s.in_domain(n)) continue;
    if (!oracle.admissible(*value, n)) continue;
    Condition q = p;
    q.s = p.s.with_pair(n, *value);
    return {std::move(q), n, *value};
  }
  throw std::runtime_error("hit: no admissible point in [" + std::to_string(k) + ", " +
                           std::to_string(k + probe_bound) + ") for target '" +
                           target.spec() + "'");
}

DistinguishResult distinguish(const Condition& p, const ReducedWord& w, GroupElement g,
                              OpBudget* budget) {
  if (is_group_word(w))
    throw std::invalid_argument("distinguish: the word must lie outside the base group");

  const BaseGroup& group = p.group();
  const std::size_t critical = critical_x_index(w);
  const Letter& critical_letter = w.letters()[critical];
  GroupElement leading = critical + 1 < w.length() ? w.letters()[critical + 1].element
                                                   : group.identity();

  // A fresh start whose path dies at or before the critical X-letter
  // within the first cycle; all but finitely many n qualify.
  Nat witness = 0;
  for (Nat n = 0;; ++n) {
    if (n > 4 * (p.s.size() + 2) * (w.length() + 2) + 64)
      throw std::logic_error("distinguish: no viable fresh start found");
    if (p.s.in_domain(n) || p.s.in_range(n)) continue;
    Path path = mpath(w, group, p.s, n);
    if (path.terminated() && path.steps() <= critical) {
      witness = n;
      break;
    }
  }

  DistinguishResult result;
  result.witness = witness;
  result.g_value = group.eval(g, witness);

  std::vector<ReducedWord> extra{w};
  std::vector<TrackedPath> tracked{{w, witness}};

  Condition q = p;
  for (std::size_t guard = 0;; ++guard) {
    if (guard > w.length() + 2)
      throw std::logic_error("distinguish: steering failed to reach the critical letter");
    Path path = mpath(w, group, q.s, witness);
    if (!path.terminated() || path.steps() > critical)
      throw std::logic_error("distinguish: steered path escaped the first cycle");
    std::size_t stop = path.before_letter - 1;
    Nat last = path.last_value();
    if (stop == critical) {
      if (budget && !budget->try_consume()) {
        result.complete = false;
        result.q = std::move(q);
        return result;
      }
      Nat avoid = group.eval(group.invert(leading), result.g_value);
      std::vector<Nat> extra_forbidden{avoid};
      Nat chosen;
      if (critical_letter.x_exponent > 0)
        std::tie(q, chosen) = domain_extend_core(q, last, extra, tracked, extra_forbidden);
      else
        std::tie(q, chosen) = range_extend_core(q, last, extra, tracked, extra_forbidden);
      ++result.ops;
      break;
    }
    if (budget && !budget->try_consume()) {
      result.complete = false;
      result.q = std::move(q);
      return result;
    }
    const Letter& blocked = w.letters()[stop];
    if (blocked.x_exponent > 0)
      q = domain_extend(q, last, extra, tracked);
    else
      q = range_extend(q, last, extra, tracked);
    ++result.ops;
  }

  auto value = apply_word(w, group, q.s, witness);
  if (!value || *value == result.g_value)
    throw std::logic_error("distinguish: postcondition failed");
  result.word_value = *value;
  result.complete = true;
  result.q = std::move(q);
  return result;
}

}  // namespace forge
