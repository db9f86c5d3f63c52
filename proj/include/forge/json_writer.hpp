#pragma once

#include <cstdint>
#include <ostream>
#include <string>
#include <string_view>

namespace forge {

/// Minimal streaming JSON writer with insertion-ordered keys and no
/// whitespace, so equal data always prints to equal bytes.
class JsonWriter {
 public:
  explicit JsonWriter(std::ostream& out) : out_(out) {}

  JsonWriter& begin_object();
  JsonWriter& end_object();
  JsonWriter& begin_array();
  JsonWriter& end_array();
  JsonWriter& key(std::string_view name);
  JsonWriter& value(std::string_view text);
  JsonWriter& value(std::uint64_t number);
  JsonWriter& value(std::int64_t number);
  JsonWriter& value(bool flag);

 private:
  void separate();
  void write_string(std::string_view text);

  std::ostream& out_;
  // Tracks whether a comma is needed at each nesting depth.
  std::string pending_;  // stack of flags: 0 = first element, 1 = need comma
  bool after_key_ = false;
};

}  // namespace forge
