#include "forge/paths.hpp"

#include <algorithm>
#include <map>
#include <stdexcept>

namespace forge {

std::optional<Nat> apply_word(const ReducedWord& w, const BaseGroup& group,
                              const PartialInjection& s, Nat n) {
  Nat value = n;
  for (const Letter& letter : w.letters()) {
    if (letter.x_exponent > 0) {
      auto next = s.apply(value);
      if (!next) return std::nullopt;
      value = *next;
    } else if (letter.x_exponent < 0) {
      auto next = s.apply_inverse(value);
      if (!next) return std::nullopt;
      value = *next;
    } else {
      value = group.eval(letter.element, value);
    }
  }
  return value;
}

Path mpath(const ReducedWord& w, const BaseGroup& group, const PartialInjection& s, Nat m) {
  if (w.empty()) throw std::invalid_argument("mpath of the empty word");
  const std::size_t n = w.length();

  Path path;
  path.start = m;
  path.values.push_back(m);

  // State before step k: (k mod n, current value). A repeat means the
  // remainder of the path replays the stretch between the two visits.
  std::map<std::pair<std::size_t, Nat>, std::size_t> seen;
  seen.emplace(std::make_pair(std::size_t{0}, m), 0);

  const std::size_t cap = n * (2 * s.size() + 2) + n + 4;
  Nat value = m;
  for (std::size_t k = 0;; ++k) {
    if (k > cap)
      throw std::runtime_error(
          "path did not terminate or cycle within the state bound "
          "(a group word with an unbounded orbit?)");
    const Letter& letter = w.letter_applied(k);
    if (letter.x_exponent > 0) {
      auto next = s.apply(value);
      if (!next) {
        path.status = Path::Status::Terminated;
        path.before_letter = (k % n) + 1;
        return path;
      }
      value = *next;
      ++path.x_applications;
    } else if (letter.x_exponent < 0) {
      auto next = s.apply_inverse(value);
      if (!next) {
        path.status = Path::Status::Terminated;
        path.before_letter = (k % n) + 1;
        return path;
      }
      value = *next;
      ++path.x_inverse_applications;
    } else {
      value = group.eval(letter.element, value);
    }
    auto state = std::make_pair((k + 1) % n, value);
    auto [it, inserted] = seen.emplace(state, k + 1);
    if (!inserted) {
      path.status = Path::Status::Periodic;
      path.preperiod = it->second;
      path.period = (k + 1) - it->second;
      return path;
    }
    path.values.push_back(value);
  }
}

std::vector<Nat> path_value_set(const Path& path) {
  std::vector<Nat> values = path.values;
  std::sort(values.begin(), values.end());
  values.erase(std::unique(values.begin(), values.end()), values.end());
  return values;
}

std::vector<Nat> fixed_points(const ReducedWord& w, const BaseGroup& group,
                              const PartialInjection& s) {
  if (w.empty())
    throw std::invalid_argument("fixed_points of the identity word is all of N");
  if (is_group_word(w)) {
    // A reduced group word is a single non-identity letter.
    return group.fix_set(w.letters().front().element);
  }

  // Any fixed point's path survives its first X-letter application, which
  // pins the value at that moment to dom(s) or ran(s); pull back through
  // the at most one leading group letter.
  std::vector<Nat> candidates;
  const Letter& first = w.letters().front();
  auto add_keys = [&candidates](const std::map<Nat, Nat>& m) {
    for (auto& [key, value] : m) candidates.push_back(key);
  };
  if (first.x_exponent > 0) {
    add_keys(s.forward());
  } else if (first.x_exponent < 0) {
    add_keys(s.inverse());
  } else {
    GroupElement inverse = group.invert(first.element);
    for (auto& [key, value] : s.forward()) candidates.push_back(group.eval(inverse, key));
    for (auto& [key, value] : s.inverse()) candidates.push_back(group.eval(inverse, key));
  }
  std::sort(candidates.begin(), candidates.end());
  candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());

  std::vector<Nat> result;
  for (Nat m : candidates)
    if (apply_word(w, group, s, m) == std::optional<Nat>(m)) result.push_back(m);
  return result;
}

}  // namespace forge
