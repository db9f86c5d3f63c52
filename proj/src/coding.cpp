#include "forge/coding.hpp"

#include <stdexcept>

namespace forge {

std::optional<Nat> exact_code_length(const ReducedWord& w, const BaseGroup& group,
                                     const PartialInjection& s, Nat m,
                                     const BitStream& z) {
  if (is_group_word(w))
    throw std::invalid_argument("exact_code_length requires a word outside the base group");
  if (static_cast<int>(m % 2) != z.bit(0)) return std::nullopt;
  Nat value = m;
  // w contains an X-letter, so w[s] has a finite domain: the iteration
  // either leaves it or, being injective, returns to the start.
  const Nat cap = s.size() + 2;
  for (Nat j = 1; j <= cap; ++j) {
    auto next = apply_word(w, group, s, value);
    if (!next) return j;
    value = *next;
    if (value == m) return std::nullopt;  // periodic, never undefined
    if (static_cast<int>(value % 2) != z.bit(j)) return std::nullopt;
  }
  throw std::logic_error("exact_code_length iteration exceeded its bound");
}

std::string decode_bits(const ReducedWord& w, const BaseGroup& group,
                        const PartialInjection& s, Nat m, Nat count) {
  std::string bits;
  bits.reserve(count);
  Nat value = m;
  for (Nat k = 0; k < count; ++k) {
    bits += static_cast<char>('0' + value % 2);
    if (k + 1 == count) break;
    auto next = apply_word(w, group, s, value);
    if (!next)
      throw std::runtime_error("iteration undefined at step " + std::to_string(k + 1) +
                               "; only " + std::to_string(k + 1) + " of " +
                               std::to_string(count) + " bits are readable");
    value = *next;
  }
  return bits;
}

}  // namespace forge
