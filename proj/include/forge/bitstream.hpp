#pragma once

#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "forge/base_group.hpp"

namespace forge {

/// A bit stream z in 2^N. Built-ins are total; file-backed streams hold a
/// finite prefix (ASCII '0'/'1', whitespace ignored) and reject lookups
/// beyond it.
class BitStream {
 public:
  static std::shared_ptr<const BitStream> thue_morse();
  static std::shared_ptr<const BitStream> champernowne();
  /// Runs the non-periodicity heuristic and throws std::runtime_error on
  /// failure.
  static std::shared_ptr<const BitStream> from_file(const std::string& path);
  /// "thue-morse" | "champernowne" | "file:<path>".
  static std::shared_ptr<const BitStream> resolve(const std::string& spec);

  const std::string& name() const { return name_; }
  int bit(Nat k) const;
  std::optional<Nat> length() const;  // file streams only

 private:
  enum class Kind { ThueMorse, Champernowne, File };
  BitStream(Kind kind, std::string name) : kind_(kind), name_(std::move(name)) {}

  Kind kind_;
  std::string name_;
  std::vector<char> prefix_;  // file streams: 0/1 values
};

/// Heuristic: the prefix of length min(4096, available) admits no period
/// p <= 64 from any starting offset <= 256. Eventually periodic streams
/// fail; so do file streams too short to rule the periods out.
bool passes_nonperiodicity_check(const BitStream& z, std::string* detail = nullptr);

}  // namespace forge
