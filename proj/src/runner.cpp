#include "forge/runner.hpp"

#include <algorithm>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "condition_io.hpp"
#include "forge/enumeration.hpp"
#include "forge/json_writer.hpp"

namespace forge {
namespace {

std::string fnv1a_hex(std::string_view text) {
  std::uint64_t hash = 1469598103934665603ULL;
  for (unsigned char c : text) {
    hash ^= c;
    hash *= 1099511628211ULL;
  }
  char buffer[17];
  std::snprintf(buffer, sizeof buffer, "%016llx", static_cast<unsigned long long>(hash));
  return buffer;
}

std::string join(const std::vector<std::string>& items) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) {
    if (i) out += ',';
    out += items[i];
  }
  return out;
}

std::vector<std::pair<Nat, Nat>> added_pairs(const PartialInjection& before,
                                             const PartialInjection& after) {
  std::vector<std::pair<Nat, Nat>> added;
  for (auto [n, image] : after.forward())
    if (!before.in_domain(n)) added.emplace_back(n, image);
  return added;
}

std::string describe_task(const Task& task, const BaseGroup& group) {
  switch (task.kind) {
    case Task::Kind::Domain: return "domain(" + std::to_string(task.n) + ")";
    case Task::Kind::Range: return "range(" + std::to_string(task.n) + ")";
    case Task::Kind::AddWord: return "add-word(" + to_string(task.word, group) + ")";
    case Task::Kind::Code:
      return "code(" + to_string(task.word, group) + ", " +
             std::to_string(task.code_goal) + ")";
    case Task::Kind::Hit:
      return "hit(" + task.target + ", " + std::to_string(task.k) + ")";
    case Task::Kind::Distinguish:
      return "distinguish(" + to_string(task.word, group) + ", " +
             group.element_token(task.g) + ")";
  }
  return "?";
}

/// Diagonal enumeration of (word index, element index) pairs, covering all
/// of a possibly infinite grid in a fixed order.
class PairEnumerator {
 public:
  PairEnumerator(std::size_t word_count, const BaseGroup& group)
      : word_count_(word_count), group_(group) {}

  std::optional<std::pair<std::size_t, GroupElement>> next() {
    if (word_count_ == 0) return std::nullopt;
    for (;;) {
      if (diagonal_ > max_diagonal()) return std::nullopt;
      std::size_t word_index = position_;
      std::size_t element_index = diagonal_ - position_;
      advance();
      if (word_index >= word_count_) continue;
      auto element = group_.element_at(element_index);
      if (!element) continue;
      return std::make_pair(word_index, *element);
    }
  }

 private:
  void advance() {
    if (position_ == diagonal_) {
      ++diagonal_;
      position_ = 0;
    } else {
      ++position_;
    }
  }

  std::size_t max_diagonal() const {
    if (group_.order() == 0) return std::numeric_limits<std::size_t>::max();
    return word_count_ + static_cast<std::size_t>(group_.order());
  }

  std::size_t word_count_;
  const BaseGroup& group_;
  std::size_t diagonal_ = 0;
  std::size_t position_ = 0;
};

}  // namespace

std::string RunConfig::canonical() const {
  std::ostringstream out;
  out << "group=" << group_spec << ";z=" << stream_spec << ";words=" << join(explicit_words)
      << ";depth=" << word_depth << ";code-length=" << code_length
      << ";targets=" << join(targets) << ";hit-stride=" << hit_stride
      << ";hit-count=" << hit_count << ";budget=" << budget;
  return out.str();
}

Condition Transcript::condition_after(std::size_t count) const {
  if (!materialized_steps.empty()) {
    if (count == 0) return initial;
    return materialized_steps.at(count - 1);
  }
  Condition current = initial;
  for (std::size_t i = 0; i < count; ++i) {
    const StepDelta& delta = steps.at(i).delta;
    for (auto [n, image] : delta.added_pairs) current.s.insert_pair(n, image);
    for (const ReducedWord& w : delta.added_words) current.words.insert(w);
    for (const auto& [w, m] : delta.added_coding) current.coding.emplace(w, m);
  }
  return current;
}

Transcript run(const RunConfig& config) {
  ConditionContext ctx;
  ctx.group = BaseGroup::resolve(config.group_spec);
  ctx.stream = BitStream::resolve(config.stream_spec);
  ctx.coding = true;
  const BaseGroup& group = *ctx.group;

  std::vector<ReducedWord> words;
  auto push_word = [&words](const ReducedWord& w) {
    if (std::find(words.begin(), words.end(), w) == words.end()) words.push_back(w);
  };
  for (const std::string& text : config.explicit_words) {
    ReducedWord w = parse_word(text, group);
    if (is_group_word(w))
      throw std::invalid_argument("config: word '" + text + "' lies in the base group");
    push_word(w);
  }
  if (config.word_depth > 0) {
    WordEnumerator enumerator(ctx.group, config.word_depth);
    while (auto w = enumerator.next()) push_word(*w);
  }

  std::vector<Permutation> targets;
  for (const std::string& spec : config.targets) targets.push_back(Permutation::resolve(spec));

  Transcript t;
  t.group_spec = config.group_spec;
  t.stream_spec = config.stream_spec;
  t.config = config.canonical();
  t.config_hash = fnv1a_hex(t.config);
  t.initial = Condition::empty(ctx);

  Condition current = t.initial;
  OpBudget budget{config.budget, false};

  Nat domain_next = 0, range_next = 0;
  std::size_t add_index = 0, code_index = 0;
  Nat hit_index = 0;
  PairEnumerator pairs(words.size(), group);
  std::optional<std::pair<std::size_t, GroupElement>> pending_pair;
  bool pairs_done = false;

  auto record = [&t](Task task, StepDelta delta, Nat ops) {
    t.steps.push_back({std::move(task), std::move(delta), ops});
  };

  auto run_task = [&](const Task& task, auto&& body) {
    try {
      body();
    } catch (const std::logic_error&) {
      throw;
    } catch (const std::exception& error) {
      throw std::runtime_error("task " + describe_task(task, group) + ": " + error.what());
    }
  };

  while (budget.remaining > 0) {
    // Domain queue.
    {
      Task task{Task::Kind::Domain};
      task.n = domain_next++;
      if (!current.s.in_domain(task.n)) {
        run_task(task, [&] {
          Condition next = domain_extend(current, task.n);
          budget.remaining--;
          StepDelta delta;
          delta.added_pairs.emplace_back(task.n, *next.s.apply(task.n));
          current = std::move(next);
          record(task, std::move(delta), 1);
        });
      }
    }
    if (budget.remaining == 0) break;

    // Range queue.
    {
      Task task{Task::Kind::Range};
      task.n = range_next++;
      if (!current.s.in_range(task.n)) {
        run_task(task, [&] {
          Condition next = range_extend(current, task.n);
          budget.remaining--;
          StepDelta delta;
          delta.added_pairs.emplace_back(*next.s.apply_inverse(task.n), task.n);
          current = std::move(next);
          record(task, std::move(delta), 1);
        });
      }
    }
    if (budget.remaining == 0) break;

    // Add-word queue.
    if (add_index < words.size()) {
      Task task{Task::Kind::AddWord};
      task.word = words[add_index++];
      run_task(task, [&] {
        bool fresh = current.words.count(task.word) == 0;
        Condition next = add_word(current, task.word);
        budget.remaining--;
        StepDelta delta;
        if (fresh) delta.added_words.push_back(task.word);
        current = std::move(next);
        record(task, std::move(delta), 1);
      });
    }
    if (budget.remaining == 0) break;

    // Coding queue.
    if (code_index < words.size()) {
      Task task{Task::Kind::Code};
      task.word = words[code_index++];
      task.code_goal = config.code_length;
      run_task(task, [&] {
        Nat ops = 0;
        Condition next = extend_coding(current, task.word, task.code_goal, &budget, &ops);
        if (ops > 0) {
          StepDelta delta;
          delta.added_pairs = added_pairs(current.s, next.s);
          if (!current.words.count(task.word)) delta.added_words.push_back(task.word);
          if (!current.coding.count(task.word) && next.coding.count(task.word))
            delta.added_coding.emplace_back(task.word, next.coding.at(task.word));
          current = std::move(next);
          record(task, std::move(delta), ops);
        }
      });
    }
    if (budget.remaining == 0) break;

    // Hitting queue.
    if (!targets.empty() &&
        (config.hit_count == 0 || hit_index < config.hit_count * targets.size())) {
      Task task{Task::Kind::Hit};
      task.target = targets[hit_index % targets.size()].spec();
      task.k = config.hit_stride * (hit_index / targets.size());
      const Permutation& target = targets[hit_index % targets.size()];
      ++hit_index;
      run_task(task, [&] {
        HitResult result = hit(current, target, task.k);
        budget.remaining--;
        StepDelta delta;
        delta.added_pairs.emplace_back(result.n, result.value);
        current = std::move(result.q);
        record(task, std::move(delta), 1);
        t.hits.push_back({task.target, task.k, result.n, result.value});
      });
    }
    if (budget.remaining == 0) break;

    // Distinguish queue.
    if (!pairs_done) {
      if (!pending_pair) pending_pair = pairs.next();
      if (!pending_pair) {
        pairs_done = true;
      } else {
        Task task{Task::Kind::Distinguish};
        task.word = words[pending_pair->first];
        task.g = pending_pair->second;
        pending_pair.reset();
        run_task(task, [&] {
          DistinguishResult result = distinguish(current, task.word, task.g, &budget);
          if (result.ops > 0) {
            StepDelta delta;
            delta.added_pairs = added_pairs(current.s, result.q.s);
            current = std::move(result.q);
            record(task, std::move(delta), result.ops);
          }
          if (result.complete)
            t.distinguishes.push_back(
                {task.word, task.g, result.witness, result.word_value, result.g_value});
        });
      }
    }
  }

  t.final = current;
  t.ops_used = config.budget - budget.remaining;
  Nat coverage = 0;
  while (current.s.in_domain(coverage) && current.s.in_range(coverage)) ++coverage;
  t.coverage = coverage;
  for (const auto& [w, parameter] : current.coding) {
    auto length = exact_code_length(w, group, current.s, parameter, current.stream());
    if (!length) throw std::logic_error("run: coded word lost its exact code length");
    t.certificates.push_back({w, parameter, *length, true});
  }
  return t;
}

namespace {

void write_task(JsonWriter& json, const Task& task, const BaseGroup& group) {
  json.begin_object();
  switch (task.kind) {
    case Task::Kind::Domain:
      json.key("op").value("domain");
      json.key("n").value(task.n);
      break;
    case Task::Kind::Range:
      json.key("op").value("range");
      json.key("n").value(task.n);
      break;
    case Task::Kind::AddWord:
      json.key("op").value("add-word");
      json.key("word").value(to_string(task.word, group));
      break;
    case Task::Kind::Code:
      json.key("op").value("code");
      json.key("word").value(to_string(task.word, group));
      json.key("length").value(task.code_goal);
      break;
    case Task::Kind::Hit:
      json.key("op").value("hit");
      json.key("target").value(task.target);
      json.key("k").value(task.k);
      break;
    case Task::Kind::Distinguish:
      json.key("op").value("distinguish");
      json.key("word").value(to_string(task.word, group));
      json.key("g").value(group.element_token(task.g));
      break;
  }
  json.end_object();
}

}  // namespace

void write_json(const Transcript& t, std::ostream& out) {
  const BaseGroup& group = *t.initial.ctx.group;
  JsonWriter json(out);
  json.begin_object();
  json.key("format").value("forge-transcript-v1");
  json.key("context").begin_object();
  json.key("group").value(t.group_spec);
  json.key("z").value(t.stream_spec);
  json.key("config").value(t.config);
  json.key("config_hash").value(t.config_hash);
  json.end_object();
  json.key("initial");
  write_condition(json, t.initial);

  json.key("steps").begin_array();
  Condition current = t.initial;
  for (std::size_t i = 0; i < t.steps.size(); ++i) {
    const Step& step = t.steps[i];
    json.begin_object();
    json.key("task");
    write_task(json, step.task, group);
    json.key("ops").value(step.ops);
    if (!t.materialized_steps.empty()) {
      json.key("condition");
      write_condition(json, t.materialized_steps[i]);
    } else {
      for (auto [n, image] : step.delta.added_pairs) current.s.insert_pair(n, image);
      for (const ReducedWord& w : step.delta.added_words) current.words.insert(w);
      for (const auto& [w, m] : step.delta.added_coding) current.coding.emplace(w, m);
      json.key("condition");
      write_condition(json, current);
    }
    json.end_object();
  }
  json.end_array();

  json.key("final");
  write_condition(json, t.final);
  json.key("coverage").value(t.coverage);
  json.key("ops_used").value(t.ops_used);

  json.key("certificates").begin_array();
  for (const CodingCertificate& certificate : t.certificates) {
    json.begin_object();
    json.key("word").value(to_string(certificate.word, group));
    json.key("parameter").value(certificate.parameter);
    json.key("length").value(certificate.length);
    json.key("exact").value(certificate.exact);
    json.end_object();
  }
  json.end_array();

  json.key("hits").begin_array();
  for (const HitWitness& witness : t.hits) {
    json.begin_object();
    json.key("target").value(witness.target);
    json.key("k").value(witness.k);
    json.key("n").value(witness.n);
    json.key("value").value(witness.value);
    json.end_object();
  }
  json.end_array();

  json.key("distinguishes").begin_array();
  for (const DistinguishWitness& witness : t.distinguishes) {
    json.begin_object();
    json.key("word").value(to_string(witness.word, group));
    json.key("g").value(group.element_token(witness.g));
    json.key("n").value(witness.n);
    json.key("value").value(witness.word_value);
    json.key("g_value").value(witness.g_value);
    json.end_object();
  }
  json.end_array();
  json.end_object();
}

std::string to_json(const Transcript& t) {
  std::ostringstream out;
  write_json(t, out);
  return out.str();
}

}  // namespace forge
