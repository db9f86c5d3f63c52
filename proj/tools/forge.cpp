#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "forge/condition.hpp"
#include "forge/runner.hpp"

namespace {

// Exit codes: 0 success, 1 verification/order/operation failure,
// 2 usage, parse, or input-data error.
constexpr int kOk = 0;
constexpr int kFailure = 1;
constexpr int kUsage = 2;

std::vector<std::string> split_commas(const std::string& text) {
  std::vector<std::string> items;
  std::string item;
  std::istringstream in(text);
  while (std::getline(in, item, ','))
    if (!item.empty()) items.push_back(item);
  return items;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

int cmd_build(const forge::RunConfig& config, const std::string& out_path) {
  forge::Transcript transcript;
  try {
    transcript = forge::run(config);
  } catch (const std::exception& error) {
    std::cerr << "build failed: " << error.what() << "\n";
    return kFailure;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) {
    std::cerr << "cannot write " << out_path << "\n";
    return kFailure;
  }
  forge::write_json(transcript, out);
  out << "\n";
  std::cout << "final window: " << transcript.coverage << "\n"
            << "steps: " << transcript.steps.size() << ", ops used: " << transcript.ops_used
            << "\n"
            << "certificates: " << transcript.certificates.size()
            << ", hit witnesses: " << transcript.hits.size()
            << ", distinguish witnesses: " << transcript.distinguishes.size() << "\n"
            << "wrote " << out_path << "\n";
  return kOk;
}

int cmd_verify(const std::string& path) {
  forge::Transcript transcript;
  try {
    transcript = forge::transcript_from_json(read_file(path));
  } catch (const std::exception& error) {
    std::cerr << "cannot parse transcript: " << error.what() << "\n";
    return kUsage;
  }
  forge::VerifyReport report = forge::verify_transcript(transcript);
  for (const forge::CheckResult& check : report.checks) {
    std::cout << (check.pass ? "ok   " : "FAIL ") << check.name;
    if (!check.detail.empty()) std::cout << ": " << check.detail;
    std::cout << "\n";
  }
  std::cout << (report.all_pass() ? "all checks passed" : "verification failed") << " ("
            << report.checks.size() - report.failure_count() << "/" << report.checks.size()
            << ")\n";
  return report.all_pass() ? kOk : kFailure;
}

int cmd_decode(const std::string& table_path, const std::string& word_text,
               forge::Nat parameter, forge::Nat count, const std::string& group_spec) {
  std::shared_ptr<const forge::BaseGroup> group;
  forge::PartialInjection table;
  forge::ReducedWord word;
  try {
    group = forge::BaseGroup::resolve(group_spec);
    table = forge::PartialInjection::from_table_file(table_path);
    word = forge::parse_word(word_text, *group);
    if (forge::is_group_word(word) && !word.empty())
      throw std::invalid_argument("decoding needs a word that uses X");
  } catch (const std::exception& error) {
    std::cerr << "decode: " << error.what() << "\n";
    return kUsage;
  }
  try {
    std::cout << forge::decode_bits(word, *group, table, parameter, count) << "\n";
  } catch (const std::exception& error) {
    std::cerr << "decode: " << error.what() << "\n";
    return kFailure;
  }
  return kOk;
}

int cmd_leq(const std::string& q_path, const std::string& p_path) {
  forge::Condition q, p;
  try {
    q = forge::condition_from_json(read_file(q_path));
    p = forge::condition_from_json(read_file(p_path), q.ctx);
  } catch (const std::exception& error) {
    std::cerr << "leq: " << error.what() << "\n";
    return kUsage;
  }
  if (!q.ctx.same_as(p.ctx)) {
    std::cerr << "leq: conditions come from different contexts\n";
    return kUsage;
  }
  std::vector<forge::OrderViolation> violations;
  if (forge::leq(q, p, &violations)) {
    std::cout << "q <= p\n";
    return kOk;
  }
  for (const forge::OrderViolation& v : violations)
    std::cout << forge::describe(v, *q.ctx.group) << "\n";
  return kFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"forge: finite approximations of a generic cofinitary permutation "
               "that codes a bit stream into every new group element"};
  app.require_subcommand(1);

  forge::RunConfig config;
  std::string words_list, out_path = "transcript.json";
  auto* build = app.add_subcommand("build", "run the scheduler and write a transcript");
  build->add_option("--group", config.group_spec,
                    "base group: trivial|swap|swap-tail|shift|file:<path>");
  build->add_option("--z", config.stream_spec,
                    "bit stream: thue-morse|champernowne|file:<path>");
  build->add_option("--words", words_list, "comma-separated word list, e.g. 'X,tau X'");
  build->add_option("--word-depth", config.word_depth,
                    "also enumerate all non-group words up to this length");
  build->add_option("--code-length", config.code_length, "coding goal per word");
  build->add_option("--target", config.targets,
                    "hitting target (repeatable): tau|gamma|zeta|file:<path>");
  build->add_option("--hit-stride", config.hit_stride, "spacing of hitting bounds k");
  build->add_option("--hit-count", config.hit_count, "hits per target, 0 = unlimited");
  build->add_option("--budget", config.budget, "extension-operation budget");
  build->add_option("--out", out_path, "transcript output path");

  std::string verify_path;
  auto* verify = app.add_subcommand("verify", "re-check a transcript");
  verify->add_option("transcript", verify_path, "transcript file")->required();

  std::string table_path, word_text = "X", decode_group = "trivial";
  forge::Nat parameter = 0, count = 0;
  auto* decode = app.add_subcommand("decode", "parity readout from a permutation table");
  decode->add_option("--table", table_path, "table file with lines 'n n-prime'")->required();
  decode->add_option("--word", word_text, "word to iterate");
  decode->add_option("--param", parameter, "starting parameter m");
  decode->add_option("--count", count, "number of bits")->required();
  decode->add_option("--group", decode_group, "base group for word letters");

  std::string q_path, p_path;
  auto* leq = app.add_subcommand("leq", "check the extension order between two conditions");
  leq->add_option("q", q_path, "candidate stronger condition")->required();
  leq->add_option("p", p_path, "candidate weaker condition")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& error) {
    int code = app.exit(error);
    return code == 0 ? kOk : kUsage;
  }

  if (build->parsed()) {
    try {
      config.explicit_words = split_commas(words_list);
      // Resolve early so configuration problems exit as usage errors.
      forge::BaseGroup::resolve(config.group_spec);
      forge::BitStream::resolve(config.stream_spec);
    } catch (const std::exception& error) {
      std::cerr << "config: " << error.what() << "\n";
      return kUsage;
    }
    return cmd_build(config, out_path);
  }
  if (verify->parsed()) return cmd_verify(verify_path);
  if (decode->parsed())
    return cmd_decode(table_path, word_text, parameter, count, decode_group);
  if (leq->parsed()) return cmd_leq(q_path, p_path);
  return kUsage;
}
