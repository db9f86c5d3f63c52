#include "forge/bitstream.hpp"

#include <bit>
#include <fstream>
#include <stdexcept>

namespace forge {
namespace {

int thue_morse_bit(Nat k) { return std::popcount(k) & 1; }

// Bit k of the concatenation of the binary numerals of 1, 2, 3, ...
int champernowne_bit(Nat k) {
  // Numerals of length L cover 2^(L-1) numbers; the first k they span is
  // C(L) = (L-1) * 2^L + 1 bits in total up to and including length L.
  Nat length = 1;
  Nat cumulative_before = 0;  // C(length - 1)
  for (;;) {
    Nat count = Nat{1} << (length - 1);
    Nat block = length * count;
    if (k < cumulative_before + block) break;
    cumulative_before += block;
    ++length;
  }
  Nat index = k - cumulative_before;
  Nat numeral = (Nat{1} << (length - 1)) + index / length;
  Nat bit_position = index % length;  // from the most significant bit
  return static_cast<int>((numeral >> (length - 1 - bit_position)) & 1);
}

}  // namespace

std::shared_ptr<const BitStream> BitStream::thue_morse() {
  return std::shared_ptr<const BitStream>(new BitStream(Kind::ThueMorse, "thue-morse"));
}

std::shared_ptr<const BitStream> BitStream::champernowne() {
  return std::shared_ptr<const BitStream>(new BitStream(Kind::Champernowne, "champernowne"));
}

std::shared_ptr<const BitStream> BitStream::from_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open bit-stream file: " + path);
  auto stream = std::shared_ptr<BitStream>(new BitStream(Kind::File, "file:" + path));
  char c;
  while (in.get(c)) {
    if (c == '0' || c == '1')
      stream->prefix_.push_back(static_cast<char>(c - '0'));
    else if (c != ' ' && c != '\t' && c != '\n' && c != '\r')
      throw std::runtime_error(path + ": bit-stream files hold ASCII 0/1 only");
  }
  std::string detail;
  if (!passes_nonperiodicity_check(*stream, &detail))
    throw std::runtime_error(path + ": non-periodicity heuristic failed: " + detail);
  return stream;
}

std::shared_ptr<const BitStream> BitStream::resolve(const std::string& spec) {
  if (spec == "thue-morse") return thue_morse();
  if (spec == "champernowne") return champernowne();
  if (spec.rfind("file:", 0) == 0) return from_file(spec.substr(5));
  throw std::invalid_argument("unknown bit stream: " + spec);
}

int BitStream::bit(Nat k) const {
  switch (kind_) {
    case Kind::ThueMorse: return thue_morse_bit(k);
    case Kind::Champernowne: return champernowne_bit(k);
    case Kind::File:
      if (k >= prefix_.size())
        throw std::runtime_error(name_ + ": bit " + std::to_string(k) +
                                 " beyond the stored prefix of length " +
                                 std::to_string(prefix_.size()));
      return prefix_[k];
  }
  return 0;
}

std::optional<Nat> BitStream::length() const {
  if (kind_ == Kind::File) return prefix_.size();
  return std::nullopt;
}

bool passes_nonperiodicity_check(const BitStream& z, std::string* detail) {
  constexpr Nat kWindow = 4096, kMaxOffset = 256, kMaxPeriod = 64;
  Nat window = kWindow;
  if (auto len = z.length()) window = std::min(window, *len);
  std::vector<char> prefix(window);
  for (Nat k = 0; k < window; ++k) prefix[k] = static_cast<char>(z.bit(k));

  for (Nat offset = 0; offset <= kMaxOffset; ++offset) {
    for (Nat period = 1; period <= kMaxPeriod; ++period) {
      bool periodic = true;
      // An empty comparison range cannot rule the period out; treat it as
      // periodic so that too-short streams fail.
      for (Nat k = offset; k + period < window; ++k) {
        if (prefix[k] != prefix[k + period]) {
          periodic = false;
          break;
        }
      }
      if (periodic) {
        if (detail)
          *detail = "period " + std::to_string(period) + " from offset " +
                    std::to_string(offset) + " within the first " +
                    std::to_string(window) + " bits";
        return false;
      }
    }
  }
  return true;
}

}  // namespace forge
