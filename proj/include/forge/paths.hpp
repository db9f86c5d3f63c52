#pragma once

#include <cstddef>
#include <optional>
#include <vector>

#include "forge/base_group.hpp"
#include "forge/partial_injection.hpp"
#include "forge/words.hpp"

namespace forge {

/// w[s](n): substitute s for X in w and evaluate at n. The empty word is
/// the identity. Undefined is a value, not an error.
std::optional<Nat> apply_word(const ReducedWord& w, const BaseGroup& group,
                              const PartialInjection& s, Nat n);

/// The evaluation path of m under (w, s): letters of w applied cyclically,
/// a_1 first, values recorded until an X-letter application is undefined
/// (Terminated) or a (next-letter, value) state repeats (Periodic).
struct Path {
  enum class Status { Terminated, Periodic };

  Nat start = 0;
  std::vector<Nat> values;  // values[0] == start; may repeat values, never states
  Status status = Status::Terminated;

  /// Terminated: 1-based position j of the letter a_j whose application
  /// was undefined, counted from the right of w.
  std::size_t before_letter = 0;

  /// Periodic: steps before the cycle and the cycle length, in steps.
  std::size_t preperiod = 0;
  std::size_t period = 0;

  std::size_t x_applications = 0;
  std::size_t x_inverse_applications = 0;

  Nat last_value() const { return values.back(); }
  std::size_t steps() const { return values.size() - 1; }
  bool terminated() const { return status == Status::Terminated; }
};

/// Throws std::invalid_argument on the empty word and std::runtime_error
/// if the path of a group word drifts without settling (infinite orbit);
/// for words containing an X-letter a status is always reached within
/// |w| * (|dom s| + |ran s| + 2) steps.
Path mpath(const ReducedWord& w, const BaseGroup& group, const PartialInjection& s, Nat m);

/// set(w, s, m): the distinct values of the path, sorted.
std::vector<Nat> path_value_set(const Path& path);

/// The complete set {m : w[s](m) = m}, sorted. Group words delegate to the
/// group's fixed-point oracle; the identity word is rejected. For words
/// with an X-letter the candidates are pulled back through the first
/// X-letter application: dom(s), ran(s), or g^-1[dom(s) u ran(s)].
std::vector<Nat> fixed_points(const ReducedWord& w, const BaseGroup& group,
                              const PartialInjection& s);

}  // namespace forge
