#pragma once

#include <optional>
#include <string>

#include "forge/bitstream.hpp"
#include "forge/partial_injection.hpp"
#include "forge/paths.hpp"
#include "forge/words.hpp"

namespace forge {

/// Let d be the least j with w[s]^j(m) undefined. Returns d if d exists
/// and w[s]^k(m) = z(k) (mod 2) for every k < d; otherwise nullopt (the
/// iteration is periodic, or some parity disagrees). Note w[s]^0 is the
/// identity, so the parameter itself must match z(0) and the least
/// possible exact length is 1. Rejects group words.
std::optional<Nat> exact_code_length(const ReducedWord& w, const BaseGroup& group,
                                     const PartialInjection& s, Nat m,
                                     const BitStream& z);

/// The parity readout (w[s]^k(m) mod 2) for k < count, as a 0/1 string.
/// Needs no access to z. Throws std::runtime_error naming the failing step
/// if the iteration is undefined before count values are read.
std::string decode_bits(const ReducedWord& w, const BaseGroup& group,
                        const PartialInjection& s, Nat m, Nat count);

/// Re-checkable claim that w[s] exactly codes z restricted to `length`
/// with parameter `parameter`.
struct CodingCertificate {
  ReducedWord word;
  Nat parameter = 0;
  Nat length = 0;
  bool exact = true;
};

}  // namespace forge
