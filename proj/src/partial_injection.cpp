#include "forge/partial_injection.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace forge {

PartialInjection PartialInjection::from_pairs(const std::vector<std::pair<Nat, Nat>>& pairs) {
  PartialInjection s;
  for (auto [n, image] : pairs) s = s.with_pair(n, image);
  return s;
}

PartialInjection PartialInjection::from_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open table file: " + path);
  std::vector<std::pair<Nat, Nat>> pairs;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    Nat n, image;
    if (fields >> n) {
      if (!(fields >> image))
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": expected 'n n-prime'");
      pairs.emplace_back(n, image);
    }
  }
  return from_pairs(pairs);
}

std::optional<Nat> PartialInjection::apply(Nat n) const {
  auto it = forward_.find(n);
  if (it == forward_.end()) return std::nullopt;
  return it->second;
}

std::optional<Nat> PartialInjection::apply_inverse(Nat n) const {
  auto it = inverse_.find(n);
  if (it == inverse_.end()) return std::nullopt;
  return it->second;
}

PartialInjection PartialInjection::with_pair(Nat n, Nat image) const {
  PartialInjection out = *this;
  out.insert_pair(n, image);
  return out;
}

void PartialInjection::insert_pair(Nat n, Nat image) {
  if (forward_.count(n))
    throw std::invalid_argument("partial injection already defined at " + std::to_string(n));
  if (inverse_.count(image))
    throw std::invalid_argument("value " + std::to_string(image) +
                                " already in the range; injectivity would fail");
  forward_.emplace(n, image);
  inverse_.emplace(image, n);
}

PartialInjection PartialInjection::inverted() const {
  PartialInjection out;
  out.forward_ = inverse_;
  out.inverse_ = forward_;
  return out;
}

bool PartialInjection::superset_of(const PartialInjection& other) const {
  for (auto [n, image] : other.forward_) {
    auto it = forward_.find(n);
    if (it == forward_.end() || it->second != image) return false;
  }
  return true;
}

}  // namespace forge
