#include <algorithm>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "condition_io.hpp"
#include "forge/runner.hpp"

namespace forge {

bool VerifyReport::all_pass() const {
  return std::all_of(checks.begin(), checks.end(),
                     [](const CheckResult& c) { return c.pass; });
}

std::size_t VerifyReport::failure_count() const {
  return static_cast<std::size_t>(
      std::count_if(checks.begin(), checks.end(),
                    [](const CheckResult& c) { return !c.pass; }));
}

namespace {

struct StepDiff {
  std::vector<std::pair<Nat, Nat>> added_pairs;
  std::vector<ReducedWord> added_words;
  std::vector<std::pair<ReducedWord, Nat>> added_coding;
  bool superset = true;
  std::string problem;
};

StepDiff diff_conditions(const Condition& prev, const Condition& cur) {
  StepDiff diff;
  for (auto [n, image] : prev.s.forward()) {
    auto now = cur.s.apply(n);
    if (!now || *now != image) {
      diff.superset = false;
      diff.problem = "s lost the pair (" + std::to_string(n) + ", " +
                     std::to_string(image) + ")";
      break;
    }
  }
  for (auto [n, image] : cur.s.forward())
    if (!prev.s.in_domain(n)) diff.added_pairs.emplace_back(n, image);
  for (const ReducedWord& w : prev.words)
    if (!cur.words.count(w) && diff.superset) {
      diff.superset = false;
      diff.problem = "F lost a word";
      break;
    }
  for (const ReducedWord& w : cur.words)
    if (!prev.words.count(w)) diff.added_words.push_back(w);
  for (const auto& [w, m] : prev.coding) {
    auto it = cur.coding.find(w);
    if (it == cur.coding.end() || it->second != m) {
      if (diff.superset) {
        diff.superset = false;
        diff.problem = "coding parameters lost or changed";
      }
      break;
    }
  }
  for (const auto& [w, m] : cur.coding)
    if (!prev.coding.count(w)) diff.added_coding.emplace_back(w, m);
  return diff;
}

std::vector<Nat> subword_fixed_points(const ReducedWord& u, const BaseGroup& group,
                                      const PartialInjection& s) {
  if (is_group_word(u)) return group.fix_set(u.letters().front().element);
  return fixed_points(u, group, s);
}

bool witnessed_by_subword(const ReducedWord& w, const BaseGroup& group,
                          const PartialInjection& s_new, const PartialInjection& s_old,
                          Nat fixed_point) {
  std::vector<Nat> path_values = path_value_set(mpath(w, group, s_new, fixed_point));
  for (const ReducedWord& u : subwords(w)) {
    if (u.empty()) continue;
    std::vector<Nat> fix = subword_fixed_points(u, group, s_old);
    for (Nat v : path_values)
      if (std::binary_search(fix.begin(), fix.end(), v)) return true;
  }
  return false;
}

std::string render_violations(const std::vector<ConditionViolation>& violations,
                              const BaseGroup& group) {
  std::string out;
  for (const auto& v : violations) {
    if (!out.empty()) out += "; ";
    out += describe(v, group);
  }
  return out;
}

}  // namespace

VerifyReport verify_transcript(const Transcript& t, const VerifyOptions& options) {
  VerifyReport report;
  auto add_check = [&report](std::string name, bool pass, std::string detail = "") {
    report.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  const ConditionContext& ctx = t.initial.ctx;
  const BaseGroup& group = *ctx.group;
  const bool materialized = !t.materialized_steps.empty();
  if (materialized && t.materialized_steps.size() != t.steps.size()) {
    add_check("structure", false, "step and condition counts differ");
    return report;
  }

  {
    auto violations = check_condition(t.initial);
    add_check("initial-valid", violations.empty(), render_violations(violations, group));
  }

  Condition current = t.initial;
  // word -> sorted fixed points under the running s; grows monotonically
  // along a sound chain, so only points routed through a step's new pairs
  // need a fresh look.
  std::map<ReducedWord, std::vector<Nat>, WordLess> fixmap;
  struct EntryData {
    Nat entry_count = 0;
    Nat bound = 0;
    std::size_t step = 0;
  };
  std::map<ReducedWord, EntryData, WordLess> entries;

  auto register_word = [&](const ReducedWord& w, const Condition& cond, std::size_t step) {
    if (fixmap.count(w)) return;
    std::vector<Nat> fix = fixed_points(w, group, cond.s);
    entries.emplace(w, EntryData{static_cast<Nat>(fix.size()),
                                 fixed_point_bound(cond, w), step});
    fixmap.emplace(w, std::move(fix));
  };
  for (const ReducedWord& w : t.initial.words) register_word(w, t.initial, 0);

  bool chain_sound = true;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const std::string label = "step-" + std::to_string(i);
    StepDiff diff;
    Condition previous_snapshot;  // materialized mode only
    bool rebase = false;

    if (materialized) {
      const Condition& claimed = t.materialized_steps[i];
      if (!claimed.ctx.same_as(ctx))
        add_check(label + "-context", false, "context changed along the chain");
      previous_snapshot = current;
      diff = diff_conditions(current, claimed);
      if (!diff.superset) {
        add_check(label + "-order", false, diff.problem);
        chain_sound = false;
        rebase = true;
      }
      current = claimed;
    } else {
      const StepDelta& delta = t.steps[i].delta;
      diff.added_pairs = delta.added_pairs;
      diff.added_words = delta.added_words;
      diff.added_coding = delta.added_coding;
      try {
        for (auto [n, image] : delta.added_pairs) current.s.insert_pair(n, image);
      } catch (const std::exception& error) {
        add_check(label + "-order", false, error.what());
        chain_sound = false;
        break;
      }
      for (const ReducedWord& w : delta.added_words) current.words.insert(w);
      for (const auto& [w, m] : delta.added_coding) current.coding.emplace(w, m);
    }

    {
      auto violations = check_condition(current);
      if (!violations.empty())
        add_check(label + "-valid", false, render_violations(violations, group));
    }

    if (rebase) {
      // The claimed condition is not an extension; restart the incremental
      // bookkeeping from it so later steps are still checked.
      for (auto& [w, fix] : fixmap) fix = fixed_points(w, group, current.s);
    } else {
      // New fixed points of tracked words must be witnessed against the
      // previous condition; any such point's first cycle crosses one of the
      // step's new pairs at an X-letter, so pull those back.
      std::map<ReducedWord, std::vector<Nat>, WordLess> fresh;
      for (auto& [w, fix] : fixmap) {
        for (auto [a, b] : diff.added_pairs) {
          for (std::size_t idx = 0; idx < w.length(); ++idx) {
            const Letter& letter = w.letters()[idx];
            if (!letter.is_x()) continue;
            Nat at_letter = letter.x_exponent > 0 ? a : b;
            ReducedWord prefix = w.slice(0, idx);
            auto m0 = apply_word(invert(prefix, group), group, current.s, at_letter);
            if (!m0) continue;
            if (std::binary_search(fix.begin(), fix.end(), *m0)) continue;
            if (apply_word(w, group, current.s, *m0) != std::optional<Nat>(*m0)) continue;
            auto& list = fresh[w];
            if (std::find(list.begin(), list.end(), *m0) == list.end())
              list.push_back(*m0);
          }
        }
      }
      if (!fresh.empty()) {
        PartialInjection previous_s;
        if (materialized) {
          previous_s = previous_snapshot.s;
        } else {
          std::vector<std::pair<Nat, Nat>> pairs;
          for (auto [n, image] : current.s.forward()) {
            bool added = std::any_of(diff.added_pairs.begin(), diff.added_pairs.end(),
                                     [n = n](auto p) { return p.first == n; });
            if (!added) pairs.emplace_back(n, image);
          }
          previous_s = PartialInjection::from_pairs(pairs);
        }
        for (auto& [w, points] : fresh) {
          for (Nat m : points) {
            if (!witnessed_by_subword(w, group, current.s, previous_s, m)) {
              add_check(label + "-order", false,
                        "NewFixedPointUnwitnessed(" + to_string(w, group) + ", " +
                            std::to_string(m) + ")");
              chain_sound = false;
            }
            auto& fix = fixmap[w];
            fix.insert(std::upper_bound(fix.begin(), fix.end(), m), m);
          }
        }
      }
    }

    for (const ReducedWord& w : diff.added_words) register_word(w, current, i + 1);
  }
  add_check("conditions-and-order",
            std::all_of(report.checks.begin(), report.checks.end(),
                        [](const CheckResult& c) { return c.pass; }),
            chain_sound ? "" : "see failing step checks");

  {
    bool same = current.s == t.final.s && current.words == t.final.words &&
                current.coding == t.final.coding;
    add_check("final-consistent", same,
              same ? "" : "final condition differs from the last step");
  }

  for (const auto& [w, entry] : entries) {
    Nat now = static_cast<Nat>(fixmap.at(w).size());
    bool ok = now <= entry.entry_count + entry.bound;
    add_check("fixed-point-bound(" + to_string(w, group) + ")", ok,
              "entered step " + std::to_string(entry.step) + " with " +
                  std::to_string(entry.entry_count) + ", bound " +
                  std::to_string(entry.bound) + ", now " + std::to_string(now));
  }

  {
    Nat coverage = 0;
    while (t.final.s.in_domain(coverage) && t.final.s.in_range(coverage)) ++coverage;
    add_check("coverage", coverage == t.coverage,
              "recomputed " + std::to_string(coverage) + ", recorded " +
                  std::to_string(t.coverage));
  }

  for (std::size_t i = 0; i < t.certificates.size(); ++i) {
    const CodingCertificate& certificate = t.certificates[i];
    const std::string label = "certificate-" + std::to_string(i);
    auto recorded = t.final.coding.find(certificate.word);
    if (recorded == t.final.coding.end() || recorded->second != certificate.parameter) {
      add_check(label, false, "parameter disagrees with the final condition");
      continue;
    }
    std::optional<Nat> length;
    try {
      length = exact_code_length(certificate.word, group, t.final.s,
                                 certificate.parameter, *ctx.stream);
    } catch (const std::exception& error) {
      add_check(label, false, error.what());
      continue;
    }
    bool length_ok = certificate.exact ? (length && *length == certificate.length)
                                       : (length && *length >= certificate.length);
    if (!length_ok) {
      add_check(label, false,
                "exact code length is " +
                    (length ? std::to_string(*length) : std::string("absent")) +
                    ", certificate claims " + std::to_string(certificate.length));
      continue;
    }
    std::string decoded = decode_bits(certificate.word, group, t.final.s,
                                      certificate.parameter, certificate.length);
    bool bits_ok = true;
    for (Nat k = 0; k < certificate.length; ++k)
      if (decoded[k] - '0' != ctx.stream->bit(k)) bits_ok = false;
    add_check(label, bits_ok, bits_ok ? "" : "decoded bits disagree with the stream");
  }

  for (std::size_t i = 0; i < t.hits.size(); ++i) {
    const HitWitness& witness = t.hits[i];
    const std::string label = "hit-" + std::to_string(i);
    auto stored = t.final.s.apply(witness.n);
    if (!stored || *stored != witness.value) {
      add_check(label, false, "final s disagrees with the witness");
      continue;
    }
    if (witness.n < witness.k) {
      add_check(label, false, "witness below its scheduled bound");
      continue;
    }
    try {
      Permutation target = Permutation::resolve(witness.target);
      auto expected = target.eval(witness.n);
      add_check(label, expected && *expected == witness.value,
                expected ? "" : "target undefined at the witness");
    } catch (const std::exception& error) {
      add_check(label, false, std::string("target unavailable: ") + error.what());
    }
  }

  for (std::size_t i = 0; i < t.distinguishes.size(); ++i) {
    const DistinguishWitness& witness = t.distinguishes[i];
    const std::string label = "distinguish-" + std::to_string(i);
    auto value = apply_word(witness.word, group, t.final.s, witness.n);
    Nat expected_g = group.eval(witness.g, witness.n);
    bool ok = value && *value == witness.word_value && expected_g == witness.g_value &&
              *value != expected_g;
    add_check(label, ok,
              ok ? "" : "witness does not separate the word from the group element");
  }

  // Order sanity across the chain: q <= p should hold for distant pairs,
  // not only consecutive ones. Exhaustive for short chains; stride plus
  // seeded-random samples against the final condition for long ones.
  {
    bool ok = true;
    std::string detail;
    if (t.steps.size() <= options.exhaustive_order_limit) {
      std::vector<Condition> chain;
      chain.push_back(t.initial);
      for (std::size_t i = 0; i < t.steps.size(); ++i)
        chain.push_back(t.condition_after(i + 1));
      for (std::size_t i = 0; i < chain.size() && ok; ++i) {
        for (std::size_t j = i; j < chain.size() && ok; ++j) {
          if (!leq(chain[j], chain[i])) {
            ok = false;
            detail = "leq(step " + std::to_string(j) + ", step " + std::to_string(i) +
                     ") fails";
          }
        }
      }
    } else {
      std::set<std::size_t> samples{0};
      std::size_t stride = std::max<std::size_t>(1, t.steps.size() / 16);
      for (std::size_t i = 0; i < t.steps.size(); i += stride) samples.insert(i);
      std::mt19937_64 rng(0x666f726765ULL);  // fixed seed: reports must reproduce
      std::uniform_int_distribution<std::size_t> pick(0, t.steps.size() - 1);
      for (std::size_t i = 0; i < options.sampled_pairs; ++i) samples.insert(pick(rng));

      Condition running = t.initial;
      std::size_t done = 0;
      for (std::size_t index : samples) {
        if (!ok) break;
        if (materialized) {
          running = t.condition_after(index);
        } else {
          while (done < index) {
            const StepDelta& delta = t.steps[done].delta;
            for (auto [n, image] : delta.added_pairs) running.s.insert_pair(n, image);
            for (const ReducedWord& w : delta.added_words) running.words.insert(w);
            for (const auto& [w, m] : delta.added_coding) running.coding.emplace(w, m);
            ++done;
          }
        }
        // leq(final, running), reusing the final fixed points computed above.
        for (const ReducedWord& w : running.words) {
          if (!ok) break;
          auto it = fixmap.find(w);
          std::vector<Nat> fix_final =
              it != fixmap.end() ? it->second : fixed_points(w, group, t.final.s);
          for (Nat m : fix_final) {
            if (apply_word(w, group, running.s, m) == std::optional<Nat>(m)) continue;
            if (!witnessed_by_subword(w, group, t.final.s, running.s, m)) {
              ok = false;
              detail = "leq(final, step " + std::to_string(index) + ") fails at " +
                       to_string(w, group) + ", fixed point " + std::to_string(m);
              break;
            }
          }
        }
      }
    }
    add_check("order-transitivity", ok, detail);
  }

  return report;
}

namespace {

Task parse_task(const nlohmann::json& node, const BaseGroup& group) {
  Task task{Task::Kind::Domain};
  std::string op = node.at("op").get<std::string>();
  if (op == "domain") {
    task.kind = Task::Kind::Domain;
    task.n = node.at("n").get<Nat>();
  } else if (op == "range") {
    task.kind = Task::Kind::Range;
    task.n = node.at("n").get<Nat>();
  } else if (op == "add-word") {
    task.kind = Task::Kind::AddWord;
    task.word = parse_word(node.at("word").get<std::string>(), group);
  } else if (op == "code") {
    task.kind = Task::Kind::Code;
    task.word = parse_word(node.at("word").get<std::string>(), group);
    task.code_goal = node.at("length").get<Nat>();
  } else if (op == "hit") {
    task.kind = Task::Kind::Hit;
    task.target = node.at("target").get<std::string>();
    task.k = node.at("k").get<Nat>();
  } else if (op == "distinguish") {
    task.kind = Task::Kind::Distinguish;
    task.word = parse_word(node.at("word").get<std::string>(), group);
    auto g = group.parse_token(node.at("g").get<std::string>());
    if (!g) throw std::runtime_error("transcript: unknown group element token");
    task.g = *g;
  } else {
    throw std::runtime_error("transcript: unknown task op '" + op + "'");
  }
  return task;
}

}  // namespace

Transcript transcript_from_json(const std::string& text) {
  nlohmann::json node = nlohmann::json::parse(text);
  if (node.at("format").get<std::string>() != "forge-transcript-v1")
    throw std::runtime_error("unrecognized transcript format");

  Transcript t;
  const auto& context = node.at("context");
  t.group_spec = context.at("group").get<std::string>();
  t.stream_spec = context.at("z").get<std::string>();
  t.config = context.at("config").get<std::string>();
  t.config_hash = context.at("config_hash").get<std::string>();

  ConditionContext ctx;
  ctx.group = BaseGroup::resolve(t.group_spec);
  ctx.stream = BitStream::resolve(t.stream_spec);
  ctx.coding = true;
  const BaseGroup& group = *ctx.group;

  t.initial = condition_from_parsed(node.at("initial"), &ctx);
  for (const auto& step_node : node.at("steps")) {
    Step step;
    step.task = parse_task(step_node.at("task"), group);
    step.ops = step_node.at("ops").get<Nat>();
    t.steps.push_back(std::move(step));
    t.materialized_steps.push_back(condition_from_parsed(step_node.at("condition"), &ctx));
  }
  t.final = condition_from_parsed(node.at("final"), &ctx);
  t.coverage = node.at("coverage").get<Nat>();
  t.ops_used = node.at("ops_used").get<Nat>();

  for (const auto& entry : node.at("certificates")) {
    CodingCertificate certificate;
    certificate.word = parse_word(entry.at("word").get<std::string>(), group);
    certificate.parameter = entry.at("parameter").get<Nat>();
    certificate.length = entry.at("length").get<Nat>();
    certificate.exact = entry.at("exact").get<bool>();
    t.certificates.push_back(std::move(certificate));
  }
  for (const auto& entry : node.at("hits")) {
    t.hits.push_back({entry.at("target").get<std::string>(), entry.at("k").get<Nat>(),
                      entry.at("n").get<Nat>(), entry.at("value").get<Nat>()});
  }
  for (const auto& entry : node.at("distinguishes")) {
    DistinguishWitness witness;
    witness.word = parse_word(entry.at("word").get<std::string>(), group);
    auto g = group.parse_token(entry.at("g").get<std::string>());
    if (!g) throw std::runtime_error("transcript: unknown group element token");
    witness.g = *g;
    witness.n = entry.at("n").get<Nat>();
    witness.word_value = entry.at("value").get<Nat>();
    witness.g_value = entry.at("g_value").get<Nat>();
    t.distinguishes.push_back(std::move(witness));
  }
  return t;
}

}  // namespace forge
