#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "forge/condition.hpp"
#include "forge/extension.hpp"

namespace forge {

/// One scheduled unit of work; each kind maps to one extension operation.
struct Task {
  enum class Kind { Domain, Range, AddWord, Code, Hit, Distinguish };
  Kind kind;
  Nat n = 0;             // Domain, Range
  ReducedWord word;      // AddWord, Code, Distinguish
  Nat code_goal = 0;     // Code
  std::string target;    // Hit
  Nat k = 0;             // Hit
  GroupElement g{};      // Distinguish
};

struct RunConfig {
  std::string group_spec = "trivial";
  std::string stream_spec = "thue-morse";
  std::vector<std::string> explicit_words;
  Nat word_depth = 0;  // enumerate all reduced non-group words up to this length
  Nat code_length = 16;
  std::vector<std::string> targets;
  Nat hit_stride = 5;
  Nat hit_count = 0;  // 0 = unlimited
  Nat budget = 100;

  std::string canonical() const;  // stable one-line rendering, hashed into the transcript
};

/// What a step changed; full conditions are reconstructed by replay.
struct StepDelta {
  std::vector<std::pair<Nat, Nat>> added_pairs;
  std::vector<ReducedWord> added_words;
  std::vector<std::pair<ReducedWord, Nat>> added_coding;
};

struct Step {
  Task task;
  StepDelta delta;
  Nat ops = 0;
};

struct HitWitness {
  std::string target;
  Nat k = 0;
  Nat n = 0;
  Nat value = 0;
};

struct DistinguishWitness {
  ReducedWord word;
  GroupElement g{};
  Nat n = 0;
  Nat word_value = 0;
  Nat g_value = 0;
};

/// The full record of a run: a chain of conditions (as deltas off the
/// empty initial condition), the final condition, and the certificates
/// the chain earned. Serialization embeds the full condition after every
/// step with stable field order, so identical configs yield byte-identical
/// files.
struct Transcript {
  std::string group_spec;
  std::string stream_spec;
  std::string config;
  std::string config_hash;
  Condition initial;
  std::vector<Step> steps;
  Condition final;
  Nat coverage = 0;  // [0, coverage) contained in both dom(s) and ran(s)
  Nat ops_used = 0;
  std::vector<CodingCertificate> certificates;
  std::vector<HitWitness> hits;
  std::vector<DistinguishWitness> distinguishes;

  /// Present when parsed from JSON: the claimed condition after each step,
  /// kept verbatim so verification can catch tampering. Empty for
  /// run-produced transcripts, whose steps are reconstructed from deltas.
  std::vector<Condition> materialized_steps;

  /// Condition after `count` steps (0 = initial).
  Condition condition_after(std::size_t count) const;
};

/// Deterministic scheduler: round-robin over the task queues
/// domain, range, add-word, code, hit, distinguish, FIFO within each,
/// counting extension-operation applications against the budget.
/// Throws on an unresolvable config; operation errors propagate with the
/// offending task named.
Transcript run(const RunConfig& config);

std::string to_json(const Transcript& t);
void write_json(const Transcript& t, std::ostream& out);

struct CheckResult {
  std::string name;
  bool pass = true;
  std::string detail;
};

struct VerifyReport {
  std::vector<CheckResult> checks;
  bool all_pass() const;
  std::size_t failure_count() const;
};

struct VerifyOptions {
  /// Chains at most this long get the exhaustive pairwise order check;
  /// longer chains get stride plus seeded-random sampling.
  std::size_t exhaustive_order_limit = 60;
  std::size_t sampled_pairs = 200;
};

/// Re-validates every condition, every consecutive order relation, every
/// certificate and witness, the fixed-point bound of every word at its
/// entry stage, window bijectivity of the final condition, and order
/// transitivity across the chain (exhaustively for short chains, sampled
/// for long ones).
VerifyReport verify_transcript(const Transcript& t, const VerifyOptions& options = {});

/// Parses a serialized transcript. Structural damage that cannot even be
/// represented (bad JSON, unresolvable context) throws; anything
/// re-checkable is surfaced by verify_transcript instead.
Transcript transcript_from_json(const std::string& text);

}  // namespace forge
