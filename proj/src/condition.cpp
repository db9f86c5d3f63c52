#include "forge/condition.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "condition_io.hpp"
#include "forge/json_writer.hpp"

namespace forge {

bool ConditionContext::same_as(const ConditionContext& other) const {
  return group->name() == other.group->name() &&
         stream->name() == other.stream->name() && coding == other.coding;
}

std::vector<ConditionViolation> check_condition(const Condition& p) {
  std::vector<ConditionViolation> violations;
  const BaseGroup& group = p.group();

  for (const ReducedWord& w : p.words) {
    if (is_group_word(w))
      violations.push_back({ConditionViolation::Kind::GroupWordInF, w, {}, 0,
                            "F must lie outside the base group"});
  }

  if (!p.ctx.coding && !p.coding.empty()) {
    violations.push_back({ConditionViolation::Kind::CodingDisabled, {}, {}, 0,
                          "coding parameters present but coding is disabled"});
    return violations;
  }

  std::vector<std::pair<ReducedWord, std::vector<Nat>>> path_sets;
  for (const auto& [w, parameter] : p.coding) {
    if (!p.words.count(w)) {
      violations.push_back({ConditionViolation::Kind::CodedWordNotInF, w, {}, 0,
                            "coded word missing from F"});
      continue;
    }
    if (is_group_word(w)) continue;  // already reported via F
    auto length = exact_code_length(w, group, p.s, parameter, p.stream());
    if (!length) {
      violations.push_back({ConditionViolation::Kind::CodingFailed, w, {}, 0,
                            "no exact code length at parameter " + std::to_string(parameter)});
    }
    path_sets.emplace_back(w, path_value_set(mpath(w, group, p.s, parameter)));
  }

  for (std::size_t i = 0; i < path_sets.size(); ++i) {
    for (std::size_t j = i + 1; j < path_sets.size(); ++j) {
      std::vector<Nat> shared;
      std::set_intersection(path_sets[i].second.begin(), path_sets[i].second.end(),
                            path_sets[j].second.begin(), path_sets[j].second.end(),
                            std::back_inserter(shared));
      if (!shared.empty())
        violations.push_back({ConditionViolation::Kind::PathsIntersect,
                              path_sets[i].first, path_sets[j].first, shared.front(),
                              "coded paths share the value " + std::to_string(shared.front())});
    }
  }
  return violations;
}

namespace {

std::vector<Nat> subword_fixed_points(const ReducedWord& u, const BaseGroup& group,
                                      const PartialInjection& s) {
  if (is_group_word(u)) return group.fix_set(u.letters().front().element);
  return fixed_points(u, group, s);
}

}  // namespace

bool leq(const Condition& q, const Condition& p, std::vector<OrderViolation>* violations) {
  if (!q.ctx.same_as(p.ctx))
    throw std::invalid_argument("leq: conditions from different contexts");

  bool ok = true;
  auto report = [&](OrderViolation v) {
    ok = false;
    if (violations) violations->push_back(std::move(v));
  };

  if (!q.s.superset_of(p.s))
    report({OrderViolation::Kind::NotSupersetS, {}, 0, "s does not extend"});
  for (const ReducedWord& w : p.words)
    if (!q.words.count(w)) {
      report({OrderViolation::Kind::NotSupersetF, w, 0, "F does not extend"});
      break;
    }
  for (const auto& [w, parameter] : p.coding) {
    auto it = q.coding.find(w);
    if (it == q.coding.end() || it->second != parameter) {
      report({OrderViolation::Kind::NotSupersetCoding, w, 0,
              "coding parameters do not extend"});
      break;
    }
  }

  const BaseGroup& group = q.group();
  for (const ReducedWord& w : p.words) {
    if (is_group_word(w)) continue;  // invalid in F; reported by check_condition
    for (Nat m : fixed_points(w, group, q.s)) {
      std::vector<Nat> path_values = path_value_set(mpath(w, group, q.s, m));
      bool witnessed = false;
      for (const ReducedWord& u : subwords(w)) {
        if (u.empty()) continue;
        std::vector<Nat> fix = subword_fixed_points(u, group, p.s);
        witnessed = std::any_of(path_values.begin(), path_values.end(), [&](Nat v) {
          return std::binary_search(fix.begin(), fix.end(), v);
        });
        if (witnessed) break;
      }
      if (!witnessed)
        report({OrderViolation::Kind::NewFixedPointUnwitnessed, w, m,
                "fixed point " + std::to_string(m) +
                " has no path value in any subword's old fixed points"});
    }
  }
  return ok;
}

Nat fixed_point_bound(const Condition& p, const ReducedWord& w) {
  if (!p.words.count(w))
    throw std::invalid_argument("fixed_point_bound requires w in F^p");
  Nat per_position = 0;
  for (const ReducedWord& u : subwords(w)) {
    if (u.empty()) continue;
    per_position += subword_fixed_points(u, p.group(), p.s).size();
  }
  return static_cast<Nat>(w.length()) * per_position;
}

std::string describe(const OrderViolation& v, const BaseGroup& group) {
  switch (v.kind) {
    case OrderViolation::Kind::NotSupersetS: return "NotSuperset-s: " + v.detail;
    case OrderViolation::Kind::NotSupersetF: return "NotSuperset-F: " + v.detail;
    case OrderViolation::Kind::NotSupersetCoding: return "NotSuperset-m: " + v.detail;
    case OrderViolation::Kind::NewFixedPointUnwitnessed:
      return "NewFixedPointUnwitnessed(" + to_string(v.word, group) + ", " +
             std::to_string(v.point) + ")";
  }
  return v.detail;
}

std::string describe(const ConditionViolation& v, const BaseGroup& group) {
  switch (v.kind) {
    case ConditionViolation::Kind::GroupWordInF:
      return "A1: group word in F: '" + to_string(v.word, group) + "'";
    case ConditionViolation::Kind::CodedWordNotInF:
      return "A2: coded word not in F: '" + to_string(v.word, group) + "'";
    case ConditionViolation::Kind::CodingFailed:
      return "A3: '" + to_string(v.word, group) + "': " + v.detail;
    case ConditionViolation::Kind::PathsIntersect:
      return "A4: paths of '" + to_string(v.word, group) + "' and '" +
             to_string(v.other_word, group) + "' share " + std::to_string(v.value);
    case ConditionViolation::Kind::CodingDisabled:
      return v.detail;
  }
  return v.detail;
}

void write_condition(JsonWriter& json, const Condition& p) {
  json.begin_object();
  json.key("group").value(p.group().name());
  json.key("z").value(p.stream().name());
  json.key("s").begin_array();
  for (auto [n, image] : p.s.forward()) {
    json.begin_array().value(n).value(image).end_array();
  }
  json.end_array();
  json.key("F").begin_array();
  for (const ReducedWord& w : p.words) json.value(to_string(w, p.group()));
  json.end_array();
  json.key("m").begin_object();
  for (const auto& [w, parameter] : p.coding)
    json.key(to_string(w, p.group())).value(parameter);
  json.end_object();
  json.end_object();
}

std::string to_json(const Condition& p) {
  std::ostringstream out;
  JsonWriter json(out);
  write_condition(json, p);
  return out.str();
}

Condition condition_from_parsed(const nlohmann::json& node, const ConditionContext* hint) {
  ConditionContext ctx;
  std::string group_name = node.at("group").get<std::string>();
  std::string stream_name = node.at("z").get<std::string>();
  if (hint && hint->group->name() == group_name && hint->stream->name() == stream_name) {
    ctx = *hint;
  } else {
    ctx.group = BaseGroup::resolve(group_name);
    ctx.stream = BitStream::resolve(stream_name);
    ctx.coding = true;
  }

  Condition p = Condition::empty(ctx);
  std::vector<std::pair<Nat, Nat>> pairs;
  for (const auto& entry : node.at("s")) {
    if (!entry.is_array() || entry.size() != 2)
      throw std::runtime_error("condition: entries of \"s\" must be pairs");
    pairs.emplace_back(entry[0].get<Nat>(), entry[1].get<Nat>());
  }
  p.s = PartialInjection::from_pairs(pairs);
  for (const auto& text : node.at("F"))
    p.words.insert(parse_word(text.get<std::string>(), *ctx.group));
  for (const auto& [text, parameter] : node.at("m").items())
    p.coding.emplace(parse_word(text, *ctx.group), parameter.get<Nat>());
  return p;
}

Condition condition_from_json(const std::string& text, const ConditionContext& hint) {
  return condition_from_parsed(nlohmann::json::parse(text), &hint);
}

Condition condition_from_json(const std::string& text) {
  return condition_from_parsed(nlohmann::json::parse(text), nullptr);
}

}  // namespace forge
