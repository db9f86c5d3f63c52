#include "forge/enumeration.hpp"

#include <algorithm>
#include <functional>
#include <limits>

namespace forge {
namespace {

// Alphabet in rank order: X, X^-1, then generator powers by (|e|, sign).
std::vector<Letter> alphabet_prefix(const BaseGroup& group, std::uint64_t max_rank) {
  std::vector<Letter> letters;
  if (max_rank >= 0) letters.push_back(Letter::x());
  if (max_rank >= 1) letters.push_back(Letter::x_inverse());
  for (std::size_t index = 1;; ++index) {
    auto element = group.element_at(index);
    if (!element) break;
    if (BaseGroup::letter_rank(*element) > max_rank) break;
    letters.push_back(Letter::group(*element));
  }
  return letters;
}

bool adjacent_ok(const Letter& left, const Letter& right) {
  if (left.is_group() && right.is_group()) return false;
  if (left.is_x() && right.is_x() && left.x_exponent == -right.x_exponent) return false;
  return true;
}

// Emits reduced words of the given length over the alphabet in display-order
// lexicographic order; display[0] is the leftmost (last applied) letter.
void emit(const std::vector<Letter>& alphabet, std::vector<Letter>& display,
          std::size_t length, std::vector<ReducedWord>& out,
          const std::function<bool(const std::vector<Letter>&)>& keep) {
  if (display.size() == length) {
    if (!keep || keep(display)) {
      std::vector<Letter> storage(display.rbegin(), display.rend());
      out.push_back(ReducedWord::from_reduced(std::move(storage)));
    }
    return;
  }
  for (const Letter& next : alphabet) {
    if (!display.empty() && !adjacent_ok(display.back(), next)) continue;
    display.push_back(next);
    emit(alphabet, display, length, out, keep);
    display.pop_back();
  }
}

}  // namespace

WordEnumerator::WordEnumerator(std::shared_ptr<const BaseGroup> group, Nat max_length)
    : group_(std::move(group)), max_length_(max_length),
      finite_alphabet_(group_->order() != 0), stage_(0) {
  if (max_length_ == 0) exhausted_ = true;
}

void WordEnumerator::refill() {
  buffer_.clear();
  pos_ = 0;
  if (finite_alphabet_) {
    // One shot: all lengths over the full alphabet, (length, lex).
    std::vector<Letter> alphabet =
        alphabet_prefix(*group_, std::numeric_limits<std::uint64_t>::max());
    std::vector<Letter> display;
    for (std::size_t length = 1; length <= max_length_; ++length)
      emit(alphabet, display, length, buffer_, {});
    exhausted_after_buffer_ = true;
  } else {
    // Stage B: words whose largest letter rank is exactly B, (length, lex).
    std::vector<Letter> alphabet = alphabet_prefix(*group_, stage_);
    std::vector<Letter> display;
    auto keep = [this](const std::vector<Letter>& letters) {
      std::uint64_t top = 0;
      for (const Letter& l : letters) top = std::max(top, l.rank());
      return top == stage_;
    };
    for (std::size_t length = 1; length <= max_length_; ++length)
      emit(alphabet, display, length, buffer_,
           std::function<bool(const std::vector<Letter>&)>(keep));
    ++stage_;
  }
}

std::optional<ReducedWord> WordEnumerator::next() {
  for (;;) {
    if (exhausted_) return std::nullopt;
    while (pos_ >= buffer_.size()) {
      if (exhausted_after_buffer_) {
        exhausted_ = true;
        return std::nullopt;
      }
      refill();
    }
    ReducedWord w = buffer_[pos_++];
    if (!is_group_word(w)) return w;
  }
}

}  // namespace forge
