#include "forge/base_group.hpp"

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace forge {
namespace {

// b(2k) = k, b(2k+1) = -k-1: the standard bijection N -> Z.
std::int64_t to_integers(Nat n) {
  if (n % 2 == 0) return static_cast<std::int64_t>(n / 2);
  return -static_cast<std::int64_t>((n + 1) / 2);
}

Nat from_integers(std::int64_t v) {
  if (v >= 0) return 2 * static_cast<Nat>(v);
  return 2 * static_cast<Nat>(-v) - 1;
}

Nat swap_step(Nat n) { return n ^ 1; }

Nat swap_tail_step(Nat n) {
  if (n < 2) return n;
  return ((n - 2) ^ 1) + 2;
}

Nat shift_step(Nat n, std::int64_t e) { return from_integers(to_integers(n) + e); }

}  // namespace

std::shared_ptr<const BaseGroup> BaseGroup::builtin(std::string_view name) {
  auto group = std::shared_ptr<BaseGroup>(new BaseGroup());
  group->name_ = std::string(name);
  if (name == "trivial") {
    group->kind_ = Kind::Trivial;
    group->order_ = 1;
  } else if (name == "swap") {
    group->kind_ = Kind::Swap;
    group->gen_name_ = "tau";
    group->order_ = 2;
  } else if (name == "swap-tail") {
    group->kind_ = Kind::SwapTail;
    group->gen_name_ = "gamma";
    group->order_ = 2;
  } else if (name == "shift") {
    group->kind_ = Kind::Shift;
    group->gen_name_ = "zeta";
    group->order_ = 0;
  } else {
    throw std::invalid_argument("unknown base group: " + std::string(name));
  }
  return group;
}

std::shared_ptr<const BaseGroup> BaseGroup::resolve(const std::string& spec) {
  if (spec.rfind("file:", 0) == 0) return from_table_file(spec.substr(5));
  return builtin(spec);
}

std::shared_ptr<const BaseGroup> BaseGroup::from_table_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open group file: " + path);

  auto group = std::shared_ptr<BaseGroup>(new BaseGroup());
  group->kind_ = Kind::Table;
  group->name_ = "file:" + path;
  group->gen_name_ = "g";
  group->order_ = 0;
  bool have_order = false, have_tail = false;

  std::vector<std::pair<Nat, Nat>> entries;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    auto hash = line.find('#');
    if (hash != std::string::npos) line.resize(hash);
    std::istringstream fields(line);
    std::string first;
    if (!(fields >> first)) continue;
    if (first == "name") {
      fields >> group->name_;
    } else if (first == "generator") {
      fields >> group->gen_name_;
    } else if (first == "order") {
      std::string value;
      fields >> value;
      if (value == "infinite") {
        group->order_ = 0;
      } else {
        group->order_ = std::strtoll(value.c_str(), nullptr, 10);
        if (group->order_ < 1)
          throw std::runtime_error(path + ": bad order '" + value + "'");
      }
      have_order = true;
    } else if (first == "tail") {
      std::string value;
      fields >> value;
      if (value == "swap") group->tail_ = Tail::Swap;
      else if (value == "swap-tail") group->tail_ = Tail::SwapTail;
      else if (value == "shift") group->tail_ = Tail::Shift;
      else if (value == "identity")
        throw std::runtime_error(path + ": an identity tail gives the generator "
                                        "infinitely many fixed points; not allowed");
      else
        throw std::runtime_error(path + ": unknown tail pattern '" + value + "'");
      have_tail = true;
    } else {
      char* end = nullptr;
      Nat n = std::strtoull(first.c_str(), &end, 10);
      Nat image = 0;
      if (*end != '\0' || !(fields >> image))
        throw std::runtime_error(path + ": line " + std::to_string(line_no) +
                                 ": expected 'n n-prime'");
      entries.emplace_back(n, image);
    }
  }
  if (!have_order) throw std::runtime_error(path + ": missing 'order'");
  if (!have_tail) throw std::runtime_error(path + ": missing 'tail'");

  group->table_.assign(entries.size(), 0);
  std::vector<bool> seen(entries.size(), false);
  for (auto [n, image] : entries) {
    if (n >= entries.size() || seen[n])
      throw std::runtime_error(path + ": table must define [0, M) exactly once each");
    seen[n] = true;
    group->table_[n] = image;
  }
  group->validate_table();
  return group;
}

void BaseGroup::validate_table() {
  const Nat m = table_.size();
  const Nat window = m + 64;
  // Bijectivity on the window, and consistency of the tail with the table.
  std::vector<std::pair<Nat, Nat>> images;
  for (Nat n = 0; n < window; ++n) images.emplace_back(step(n), n);
  std::sort(images.begin(), images.end());
  for (std::size_t i = 0; i + 1 < images.size(); ++i)
    if (images[i].first == images[i + 1].first)
      throw std::runtime_error(name_ + ": generator not injective on window (value " +
                               std::to_string(images[i].first) + " hit twice)");
  inverse_table_ = std::move(images);
  for (Nat n = 0; n < window; ++n) {
    if (step_inverse(step(n)) != n)
      throw std::runtime_error(name_ + ": tail pattern inconsistent with table near " +
                               std::to_string(n));
  }
  if (order_ > 0) {
    for (Nat n = 0; n < window; ++n) {
      Nat v = n;
      for (std::int64_t i = 0; i < order_; ++i) v = step(v);
      if (v != n)
        throw std::runtime_error(name_ + ": declared order " + std::to_string(order_) +
                                 " fails at " + std::to_string(n));
    }
  }
  // Cofinitary window report: a power with a suspiciously dense fixed set
  // on the window is a declared-contract violation.
  std::int64_t max_power = order_ > 0 ? order_ - 1 : 4;
  for (std::int64_t e = 1; e <= max_power; ++e) {
    Nat fixed = 0;
    for (Nat n = 0; n < window; ++n) {
      Nat v = n;
      for (std::int64_t i = 0; i < e; ++i) v = step(v);
      if (v == n) ++fixed;
    }
    if (fixed > m / 2 + 8)
      throw std::runtime_error(name_ + ": power " + std::to_string(e) +
                               " has " + std::to_string(fixed) +
                               " fixed points on the window; cofinitary contract violated");
  }
}

std::int64_t BaseGroup::normalize(std::int64_t e) const {
  if (order_ == 0) return e;
  std::int64_t r = e % order_;
  if (r < 0) r += order_;
  return r;
}

GroupElement BaseGroup::generator() const {
  if (kind_ == Kind::Trivial) throw std::invalid_argument("the trivial group has no generator");
  return GroupElement{1};
}

Nat BaseGroup::step(Nat n) const {
  switch (kind_) {
    case Kind::Trivial: return n;
    case Kind::Swap: return swap_step(n);
    case Kind::SwapTail: return swap_tail_step(n);
    case Kind::Shift: return shift_step(n, 1);
    case Kind::Table:
      if (n < table_.size()) return table_[n];
      switch (tail_) {
        case Tail::Swap: return swap_step(n);
        case Tail::SwapTail: return swap_tail_step(n);
        case Tail::Shift: return shift_step(n, 1);
      }
  }
  return n;
}

Nat BaseGroup::step_inverse(Nat n) const {
  switch (kind_) {
    case Kind::Trivial: return n;
    case Kind::Swap: return swap_step(n);
    case Kind::SwapTail: return swap_tail_step(n);
    case Kind::Shift: return shift_step(n, -1);
    case Kind::Table: {
      auto it = std::lower_bound(inverse_table_.begin(), inverse_table_.end(),
                                 std::make_pair(n, Nat{0}));
      if (it != inverse_table_.end() && it->first == n) return it->second;
      switch (tail_) {
        case Tail::Swap: return swap_step(n);
        case Tail::SwapTail: return swap_tail_step(n);
        case Tail::Shift: return shift_step(n, -1);
      }
    }
  }
  return n;
}

Nat BaseGroup::eval(GroupElement g, Nat n) const {
  std::int64_t e = normalize(g.exponent);
  switch (kind_) {
    case Kind::Trivial: return n;
    case Kind::Swap: return e == 0 ? n : swap_step(n);
    case Kind::SwapTail: return e == 0 ? n : swap_tail_step(n);
    case Kind::Shift: return shift_step(n, e);
    case Kind::Table: {
      Nat v = n;
      for (std::int64_t i = 0; i < e; ++i) v = step(v);
      for (std::int64_t i = 0; i > e; --i) v = step_inverse(v);
      return v;
    }
  }
  return n;
}

std::vector<Nat> BaseGroup::fix_set(GroupElement g) const {
  std::int64_t e = normalize(g.exponent);
  if (e == 0) throw std::invalid_argument("fix_set of the identity is all of N");
  switch (kind_) {
    case Kind::Trivial: break;  // unreachable: no non-identity elements
    case Kind::Swap: return {};
    case Kind::SwapTail: return {0, 1};
    case Kind::Shift: return {};
    case Kind::Table: {
      // Beyond the window every orbit follows the tail pattern, which is
      // fixed-point free for the powers that can occur; swap-like tails
      // move by 1 inside a pair, a shift tail by 2|e| at most before the
      // table region could interfere.
      Nat slack = tail_ == Tail::Shift ? 2 * static_cast<Nat>(e < 0 ? -e : e) + 4 : 4;
      Nat window = table_.size() + slack;
      std::vector<Nat> result;
      for (Nat n = 0; n < window; ++n)
        if (eval(g, n) == n) result.push_back(n);
      return result;
    }
  }
  return {};
}

std::string BaseGroup::element_token(GroupElement g) const {
  std::int64_t e = normalize(g.exponent);
  if (e == 0) return "1";
  if (e == 1) return gen_name_;
  return gen_name_ + "^" + std::to_string(e);
}

std::optional<GroupElement> BaseGroup::parse_token(std::string_view token) const {
  if (token == "1") return identity();
  if (gen_name_.empty()) return std::nullopt;
  if (token == gen_name_) return power(1);
  if (token.size() > gen_name_.size() + 1 &&
      token.compare(0, gen_name_.size(), gen_name_) == 0 &&
      token[gen_name_.size()] == '^') {
    std::string exp(token.substr(gen_name_.size() + 1));
    char* end = nullptr;
    std::int64_t e = std::strtoll(exp.c_str(), &end, 10);
    if (end != exp.c_str() && *end == '\0') return power(e);
  }
  return std::nullopt;
}

std::optional<GroupElement> BaseGroup::element_at(std::size_t index) const {
  if (index == 0) return identity();
  if (order_ == 1) return std::nullopt;
  if (order_ > 0 && index >= static_cast<std::size_t>(order_)) return std::nullopt;
  if (order_ > 0) return power(static_cast<std::int64_t>(index));
  // 1, a, a^-1, a^2, a^-2, ...
  std::int64_t magnitude = static_cast<std::int64_t>((index + 1) / 2);
  return power(index % 2 == 1 ? magnitude : -magnitude);
}

std::uint64_t BaseGroup::letter_rank(GroupElement g) {
  std::int64_t e = g.exponent;
  std::uint64_t magnitude = static_cast<std::uint64_t>(e < 0 ? -e : e);
  return 2 * magnitude + (e < 0 ? 1 : 0);
}

Permutation Permutation::resolve(const std::string& spec) {
  Permutation p;
  p.spec_ = spec;
  if (spec == "tau") {
    p.group_ = BaseGroup::builtin("swap");
    p.element_ = p.group_->generator();
  } else if (spec == "gamma") {
    p.group_ = BaseGroup::builtin("swap-tail");
    p.element_ = p.group_->generator();
  } else if (spec == "zeta") {
    p.group_ = BaseGroup::builtin("shift");
    p.element_ = p.group_->generator();
  } else if (spec.rfind("file:", 0) == 0) {
    std::string path = spec.substr(5);
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open permutation table: " + path);
    std::string line;
    while (std::getline(in, line)) {
      auto hash = line.find('#');
      if (hash != std::string::npos) line.resize(hash);
      std::istringstream fields(line);
      Nat n, image;
      if (fields >> n >> image) p.table_.emplace_back(n, image);
    }
    std::sort(p.table_.begin(), p.table_.end());
    for (std::size_t i = 0; i + 1 < p.table_.size(); ++i) {
      if (p.table_[i].first == p.table_[i + 1].first)
        throw std::runtime_error(path + ": duplicate entry for " +
                                 std::to_string(p.table_[i].first));
    }
    std::vector<Nat> values;
    values.reserve(p.table_.size());
    for (auto& [n, image] : p.table_) values.push_back(image);
    std::sort(values.begin(), values.end());
    if (std::adjacent_find(values.begin(), values.end()) != values.end())
      throw std::runtime_error(path + ": table is not injective");
  } else {
    throw std::invalid_argument("unknown permutation: " + spec);
  }
  return p;
}

std::optional<Nat> Permutation::eval(Nat n) const {
  if (group_) return group_->eval(element_, n);
  auto it = std::lower_bound(table_.begin(), table_.end(), std::make_pair(n, Nat{0}));
  if (it != table_.end() && it->first == n) return it->second;
  return std::nullopt;
}

}  // namespace forge
