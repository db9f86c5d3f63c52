#include "forge/words.hpp"

#include <algorithm>
#include <cassert>
#include <sstream>
#include <stdexcept>

namespace forge {

ReducedWord ReducedWord::reduce(std::span<const Letter> letters, const BaseGroup& group) {
  std::vector<Letter> stack;
  stack.reserve(letters.size());
  for (const Letter& next : letters) {
    if (next.is_group() && group.is_identity(next.element)) continue;
    if (stack.empty()) {
      stack.push_back(next);
      continue;
    }
    Letter& top = stack.back();
    if (next.is_x() && top.is_x() && next.x_exponent == -top.x_exponent) {
      stack.pop_back();
      continue;
    }
    if (next.is_group() && top.is_group()) {
      // top was applied first, so the merged letter is next * top.
      GroupElement merged = group.multiply(next.element, top.element);
      if (group.is_identity(merged)) {
        stack.pop_back();
      } else {
        top.element = merged;
      }
      continue;
    }
    stack.push_back(next);
  }
  return ReducedWord(std::move(stack));
}

ReducedWord ReducedWord::from_reduced(std::vector<Letter> letters) {
#ifndef NDEBUG
  for (std::size_t i = 0; i + 1 < letters.size(); ++i) {
    assert(!(letters[i].is_group() && letters[i + 1].is_group()));
    assert(!(letters[i].is_x() && letters[i + 1].is_x() &&
             letters[i].x_exponent == -letters[i + 1].x_exponent));
  }
#endif
  return ReducedWord(std::move(letters));
}

ReducedWord ReducedWord::slice(std::size_t first, std::size_t count) const {
  return ReducedWord(std::vector<Letter>(letters_.begin() + first,
                                         letters_.begin() + first + count));
}

bool word_less(const ReducedWord& a, const ReducedWord& b) {
  if (a.length() != b.length()) return a.length() < b.length();
  // Display order: leftmost letter is the last applied.
  const auto& la = a.letters();
  const auto& lb = b.letters();
  for (std::size_t i = la.size(); i-- > 0;) {
    std::uint64_t ra = la[i].rank(), rb = lb[i].rank();
    if (ra != rb) return ra < rb;
  }
  return false;
}

bool is_group_word(const ReducedWord& w) {
  for (const Letter& l : w.letters())
    if (l.is_x()) return false;
  return true;
}

ReducedWord invert(const ReducedWord& w, const BaseGroup& group) {
  std::vector<Letter> out;
  out.reserve(w.length());
  for (std::size_t i = w.length(); i-- > 0;) {
    const Letter& l = w.letters()[i];
    if (l.is_x())
      out.push_back(Letter{-l.x_exponent, {}});
    else
      out.push_back(Letter::group(group.invert(l.element)));
  }
  return ReducedWord::from_reduced(std::move(out));
}

ReducedWord concat(const ReducedWord& u, const ReducedWord& v, const BaseGroup& group) {
  std::vector<Letter> all(v.letters());
  all.insert(all.end(), u.letters().begin(), u.letters().end());
  return ReducedWord::reduce(all, group);
}

std::vector<ReducedWord> cyclic_permutations(const ReducedWord& w, const BaseGroup& group) {
  std::vector<ReducedWord> result;
  if (w.empty()) {
    result.push_back(w);
    return result;
  }
  const auto& letters = w.letters();
  for (std::size_t r = 0; r < letters.size(); ++r) {
    std::vector<Letter> rotated(letters.begin() + r, letters.end());
    rotated.insert(rotated.end(), letters.begin(), letters.begin() + r);
    result.push_back(ReducedWord::reduce(rotated, group));
  }
  std::sort(result.begin(), result.end(), word_less);
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

std::vector<ReducedWord> subwords(const ReducedWord& w) {
  std::vector<ReducedWord> result;
  result.push_back(ReducedWord());
  for (std::size_t first = 0; first < w.length(); ++first)
    for (std::size_t count = 1; first + count <= w.length(); ++count)
      result.push_back(w.slice(first, count));
  std::sort(result.begin(), result.end(), word_less);
  result.erase(std::unique(result.begin(), result.end()), result.end());
  return result;
}

ReducedWord flip_x(const ReducedWord& w) {
  std::vector<Letter> out(w.letters());
  for (Letter& l : out) l.x_exponent = -l.x_exponent;
  return ReducedWord::from_reduced(std::move(out));
}

std::string to_string(const ReducedWord& w, const BaseGroup& group) {
  std::string out;
  for (std::size_t i = w.length(); i-- > 0;) {
    const Letter& l = w.letters()[i];
    if (!out.empty()) out += ' ';
    if (l.x_exponent > 0)
      out += "X";
    else if (l.x_exponent < 0)
      out += "X^-1";
    else
      out += group.element_token(l.element);
  }
  return out;
}

ReducedWord parse_word(std::string_view text, const BaseGroup& group) {
  std::istringstream in{std::string(text)};
  std::vector<Letter> display;
  std::string token;
  while (in >> token) {
    if (token == "X") {
      display.push_back(Letter::x());
    } else if (token == "X^-1") {
      display.push_back(Letter::x_inverse());
    } else {
      auto element = group.parse_token(token);
      if (!element)
        throw std::invalid_argument("unknown letter '" + token + "' over group " +
                                    group.name());
      display.push_back(Letter::group(*element));
    }
  }
  // Tokens read left to right are a_n ... a_1; application order reverses.
  std::reverse(display.begin(), display.end());
  return ReducedWord::reduce(display, group);
}

}  // namespace forge
