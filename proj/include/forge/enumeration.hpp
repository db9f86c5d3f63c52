#pragma once

#include <memory>
#include <optional>
#include <vector>

#include "forge/words.hpp"

namespace forge {

/// Deterministic enumeration of the reduced non-group words of length up
/// to max_length. Over a finite group the order is (length, lexicographic
/// on display-order letter ranks, X before X^-1 before generator powers).
/// Over an infinite group that order has no least infinite tail, so words
/// are staged by the largest letter rank they use and ordered
/// (stage, length, lex) instead, which is an omega-ordering of the same set.
class WordEnumerator {
 public:
  WordEnumerator(std::shared_ptr<const BaseGroup> group, Nat max_length);

  std::optional<ReducedWord> next();

 private:
  void refill();

  std::shared_ptr<const BaseGroup> group_;
  Nat max_length_;
  bool finite_alphabet_;
  std::uint64_t stage_;  // infinite alphabets: current max letter rank
  std::vector<ReducedWord> buffer_;
  std::size_t pos_ = 0;
  bool exhausted_ = false;
  bool exhausted_after_buffer_ = false;
};

}  // namespace forge
