#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "forge/base_group.hpp"

namespace forge {

/// One letter of a word over (G \ {1}) u {X, X^-1}.
/// x_exponent is +1 or -1 for an X-letter and 0 for a base-group letter;
/// element is meaningful only for group letters and is never the identity
/// inside a ReducedWord.
struct Letter {
  int x_exponent = 0;
  GroupElement element{};

  static Letter x() { return Letter{+1, {}}; }
  static Letter x_inverse() { return Letter{-1, {}}; }
  static Letter group(GroupElement g) { return Letter{0, g}; }

  bool is_x() const { return x_exponent != 0; }
  bool is_group() const { return x_exponent == 0; }

  friend bool operator==(const Letter& a, const Letter& b) {
    return a.x_exponent == b.x_exponent &&
           (a.x_exponent != 0 || a.element == b.element);
  }
  friend bool operator!=(const Letter& a, const Letter& b) { return !(a == b); }

  /// X < X^-1 < group letters by (|e|, sign).
  std::uint64_t rank() const {
    if (x_exponent > 0) return 0;
    if (x_exponent < 0) return 1;
    return BaseGroup::letter_rank(element);
  }
};

/// A reduced word w = a_n ... a_1. Letters are stored in application
/// order: letters()[0] is a_1, the rightmost letter, applied first.
/// Invariants: no adjacent group letters, no adjacent X-letters with
/// opposite exponents, no identity group letters. The empty word is the
/// identity of G * F(X).
class ReducedWord {
 public:
  ReducedWord() = default;

  /// Free-product normal form of an arbitrary letter sequence (application
  /// order). Identity group letters are permitted in the input and vanish.
  static ReducedWord reduce(std::span<const Letter> letters, const BaseGroup& group);

  /// Trusted constructor for sequences known to be reduced (slices of
  /// reduced words). Checked with assertions in debug builds only.
  static ReducedWord from_reduced(std::vector<Letter> letters);

  const std::vector<Letter>& letters() const { return letters_; }
  std::size_t length() const { return letters_.size(); }
  bool empty() const { return letters_.empty(); }

  const Letter& letter_applied(std::size_t step_index) const {
    return letters_[step_index % letters_.size()];
  }

  /// Contiguous slice [first, first+count) in application order.
  ReducedWord slice(std::size_t first, std::size_t count) const;

  friend bool operator==(const ReducedWord& a, const ReducedWord& b) {
    return a.letters_ == b.letters_;
  }
  friend bool operator!=(const ReducedWord& a, const ReducedWord& b) { return !(a == b); }

 private:
  explicit ReducedWord(std::vector<Letter> letters) : letters_(std::move(letters)) {}
  std::vector<Letter> letters_;
};

/// Canonical order: by length, then lexicographic on display-order letter
/// ranks (leftmost letter first, X before X^-1 before group letters).
bool word_less(const ReducedWord& a, const ReducedWord& b);

struct WordLess {
  bool operator()(const ReducedWord& a, const ReducedWord& b) const {
    return word_less(a, b);
  }
};

bool is_group_word(const ReducedWord& w);

/// Letters reversed and inverted; reduce(w * invert(w)) is empty.
ReducedWord invert(const ReducedWord& w, const BaseGroup& group);

/// Concatenation u * v (u to the left of v: v applied first), reduced.
ReducedWord concat(const ReducedWord& u, const ReducedWord& v, const BaseGroup& group);

/// All reduced rotations of w, deduplicated; {empty} for the empty word.
std::vector<ReducedWord> cyclic_permutations(const ReducedWord& w, const BaseGroup& group);

/// All contiguous subwords including the empty word and w itself.
std::vector<ReducedWord> subwords(const ReducedWord& w);

/// X and X^-1 swapped in every letter. Substituting s for X in the result
/// equals substituting s^-1 in the original.
ReducedWord flip_x(const ReducedWord& w);

/// Word text syntax: whitespace-separated tokens, leftmost applied last.
/// Tokens are X, X^-1, generator names and name^k. The empty string is the
/// empty word. parse_word reduces its input; printing is canonical.
std::string to_string(const ReducedWord& w, const BaseGroup& group);
ReducedWord parse_word(std::string_view text, const BaseGroup& group);

}  // namespace forge
