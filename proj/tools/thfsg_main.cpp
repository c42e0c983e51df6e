#include <CLI11.hpp>
#include <cstdlib>
#include <iostream>

#include "thfsg/algebra.hpp"
#include "thfsg/parser.hpp"
#include "thfsg/text_io.hpp"

using namespace thfsg;

namespace {

// 0 success/accept, 1 reject/inconsistent, 2 validation diagnostics,
// 3 unreadable or malformed files, 4 search limit exceeded.
enum ExitCode {
  kOk = 0,
  kReject = 1,
  kInvalid = 2,
  kBadFile = 3,
  kLimit = 4,
};

SearchLimits limits_from_env() {
  SearchLimits limits;
  const char* env = std::getenv("THFSG_LIMITS");
  if (!env) return limits;
  std::string text = env;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(pos, comma - pos);
    std::size_t eq = item.find('=');
    if (eq != std::string::npos) {
      std::string key = item.substr(0, eq);
      unsigned long value = std::strtoul(item.c_str() + eq + 1, nullptr, 10);
      if (key == "chain") limits.max_chain = static_cast<std::uint32_t>(value);
      if (key == "nodes") limits.max_nodes = static_cast<std::uint32_t>(value);
      if (key == "parses")
        limits.max_parses = static_cast<std::uint32_t>(value);
    }
    pos = comma + 1;
  }
  return limits;
}

Grammar load_valid_grammar(const std::string& path) {
  Grammar g = parse_grammar_file(path);
  auto diags = validate(g);
  if (!diags.empty()) {
    for (const auto& d : diags) std::cerr << path << ": " << d << "\n";
    std::exit(kInvalid);
  }
  return g;
}

void add_limit_flags(CLI::App* cmd, SearchLimits& limits) {
  cmd->add_option("--max-chain", limits.max_chain,
                  "Same-span chain bound (0 = twice the category count)");
  cmd->add_option("--max-nodes", limits.max_nodes,
                  "Cap on c-structure nodes per parse tree");
  cmd->add_option("--max-parses", limits.max_parses,
                  "Number of parses to report");
}

int cmd_validate(const std::string& path) {
  Grammar g = parse_grammar_file(path);
  auto diags = validate(g);
  if (diags.empty()) {
    std::cout << "ok\n";
    return kOk;
  }
  for (const auto& d : diags) std::cerr << path << ": " << d << "\n";
  return kInvalid;
}

int cmd_parse(const std::string& path, const std::string& input,
              SearchLimits limits, bool dump_tree_flag, bool dump_fs_flag) {
  Grammar g = load_valid_grammar(path);
  std::vector<std::string> tokens = parse_tokens(input);
  for (const auto& t : tokens) {
    if (!g.terminals.count(t)) {
      std::cerr << "rejected: unknown terminal '" << t << "'\n";
      return kReject;
    }
  }
  ParseResult result = parse_all(g, tokens, limits);
  switch (result.status) {
    case ParseStatus::Accepted: {
      std::cerr << "accepted (" << result.parses.size() << " parse"
                << (result.parses.size() == 1 ? "" : "s") << ")\n";
      for (const auto& [cs, fs] : result.parses) {
        if (dump_tree_flag) std::cout << dump_tree(cs);
        if (dump_fs_flag) std::cout << dump_feature_structure(fs);
      }
      return kOk;
    }
    case ParseStatus::Rejected:
      std::cerr << "rejected";
      if (result.root_failure)
        std::cerr << ": " << to_string(result.root_failure->kind) << " at "
                  << result.root_failure->witness;
      std::cerr << "\n";
      return kReject;
    case ParseStatus::LimitExceeded:
      std::cerr << "limit exceeded before the search was exhausted\n";
      return kLimit;
  }
  return kReject;
}

int cmd_enumerate(const std::string& path, std::size_t max_len,
                  SearchLimits limits) {
  Grammar g = load_valid_grammar(path);
  EnumerateResult result = enumerate_language(g, max_len, limits);
  std::vector<std::vector<std::string>> strings(result.strings.begin(),
                                                result.strings.end());
  std::stable_sort(strings.begin(), strings.end(),
                   [](const auto& a, const auto& b) {
                     if (a.size() != b.size()) return a.size() < b.size();
                     return a < b;
                   });
  for (const auto& s : strings) std::cout << format_tokens(s) << "\n";
  if (result.truncated) {
    std::cerr << "limit exceeded; enumeration may be incomplete\n";
    return kLimit;
  }
  return kOk;
}

int cmd_normalize(const std::string& path, const std::string& out_path) {
  Grammar g = load_valid_grammar(path);
  std::string text = serialize_grammar(normalize(g));
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return kOk;
}

int cmd_describe(const std::string& path) {
  EquationSet eqs = parse_equations_file(path);
  DescribeResult r = describe(eqs);
  if (!r.ok()) {
    std::cerr << "inconsistent: " << to_string(r.failure->kind) << ": "
              << r.failure->witness << "\n";
    return kReject;
  }
  std::cout << dump_feature_structure(*r.fs);
  return kOk;
}

int cmd_combine(const std::string& op, const std::vector<std::string>& inputs,
                const std::string& out_path) {
  Grammar result;
  if (op == "star") {
    if (inputs.size() != 1) {
      std::cerr << "star takes exactly one grammar\n";
      return kInvalid;
    }
    result = grammar_star(load_valid_grammar(inputs[0]));
  } else {
    if (inputs.size() != 2) {
      std::cerr << op << " takes exactly two grammars\n";
      return kInvalid;
    }
    Grammar g1 = load_valid_grammar(inputs[0]);
    Grammar g2 = load_valid_grammar(inputs[1]);
    result = op == "union" ? grammar_union(g1, g2) : grammar_concat(g1, g2);
  }
  std::string text = serialize_grammar(result);
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return kOk;
}

int cmd_nft_apply(const std::string& machine_path, const std::string& input,
                  std::size_t max_out) {
  Transducer m = parse_transducer_file(machine_path);
  NftOutputs result = nft_outputs(m, parse_tokens(input), max_out);
  for (const auto& s : result.outputs) std::cout << format_tokens(s) << "\n";
  if (result.truncated) {
    std::cerr << "output length bound reached; set may be incomplete\n";
    return kLimit;
  }
  return kOk;
}

int cmd_nft_invert(const std::string& machine_path,
                   const std::string& out_path) {
  Transducer m = parse_transducer_file(machine_path);
  std::string text = serialize_transducer(nft_invert(m));
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return kOk;
}

int cmd_nft_image(const std::string& machine_path,
                  const std::string& grammar_path,
                  const std::string& out_path) {
  Transducer m = parse_transducer_file(machine_path);
  Grammar g = load_valid_grammar(grammar_path);
  if (!is_normal_form(g)) g = normalize(g);
  std::string text = serialize_grammar(nft_image_grammar(g, m));
  if (out_path.empty())
    std::cout << text;
  else
    write_file(out_path, text);
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Tree homomorphic feature structure grammar toolkit"};
  app.require_subcommand(1);

  std::string grammar_path, equations_path, machine_path, input, out_path, op;
  std::size_t max_len = 0, max_out = 64;
  bool dump_tree_flag = false, dump_fs_flag = false;
  SearchLimits limits = limits_from_env();

  auto* validate_cmd = app.add_subcommand("validate", "Check a grammar file");
  validate_cmd->add_option("grammar", grammar_path)->required();

  auto* parse_cmd = app.add_subcommand("parse", "Recognize a token string");
  parse_cmd->add_option("grammar", grammar_path)->required();
  parse_cmd->add_option("--input", input, "Token string")->required();
  parse_cmd->add_flag("--dump-tree", dump_tree_flag, "Print the c-structure");
  parse_cmd->add_flag("--dump-fs", dump_fs_flag,
                      "Print the generated feature structure");
  add_limit_flags(parse_cmd, limits);

  auto* enum_cmd =
      app.add_subcommand("enumerate", "List the language up to a length");
  enum_cmd->add_option("grammar", grammar_path)->required();
  enum_cmd->add_option("--max-len", max_len, "Maximum string length")
      ->required();
  add_limit_flags(enum_cmd, limits);

  auto* norm_cmd = app.add_subcommand("normalize", "Emit the normal form");
  norm_cmd->add_option("grammar", grammar_path)->required();
  norm_cmd->add_option("-o,--output", out_path);

  auto* desc_cmd =
      app.add_subcommand("describe", "Describe an equation file");
  desc_cmd->add_option("equations", equations_path)->required();

  std::vector<std::string> combine_inputs;
  auto* combine_cmd =
      app.add_subcommand("combine", "Union, concatenation or star");
  combine_cmd->add_option("--op", op)
      ->required()
      ->check(CLI::IsMember({"union", "concat", "star"}));
  combine_cmd->add_option("inputs", combine_inputs)->required();
  combine_cmd->add_option("-o,--output", out_path);

  auto* nft_cmd = app.add_subcommand("nft", "Transducer operations");
  nft_cmd->require_subcommand(1);
  auto* apply_cmd = nft_cmd->add_subcommand("apply", "Outputs for a string");
  apply_cmd->add_option("--machine", machine_path)->required();
  apply_cmd->add_option("--input", input)->required();
  apply_cmd->add_option("--max-out", max_out, "Output length bound");
  auto* invert_cmd = nft_cmd->add_subcommand("invert", "Invert a transducer");
  invert_cmd->add_option("--machine", machine_path)->required();
  invert_cmd->add_option("-o,--output", out_path);
  auto* image_cmd =
      nft_cmd->add_subcommand("image", "Image grammar of a language");
  image_cmd->add_option("--machine", machine_path)->required();
  image_cmd->add_option("--grammar", grammar_path)->required();
  image_cmd->add_option("-o,--output", out_path);

  CLI11_PARSE(app, argc, argv);

  try {
    if (validate_cmd->parsed()) return cmd_validate(grammar_path);
    if (parse_cmd->parsed())
      return cmd_parse(grammar_path, input, limits, dump_tree_flag,
                       dump_fs_flag);
    if (enum_cmd->parsed()) return cmd_enumerate(grammar_path, max_len, limits);
    if (norm_cmd->parsed()) return cmd_normalize(grammar_path, out_path);
    if (desc_cmd->parsed()) return cmd_describe(equations_path);
    if (combine_cmd->parsed()) return cmd_combine(op, combine_inputs, out_path);
    if (apply_cmd->parsed()) return cmd_nft_apply(machine_path, input, max_out);
    if (invert_cmd->parsed()) return cmd_nft_invert(machine_path, out_path);
    if (image_cmd->parsed())
      return cmd_nft_image(machine_path, grammar_path, out_path);
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kBadFile;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  }
  return kOk;
}
