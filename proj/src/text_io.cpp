#include "thfsg/text_io.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

namespace thfsg {

namespace {

bool strict_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '\'' ||
         c == '$';
}

// Categories generated by the grammar algebra carry reserved punctuation;
// the liberal class lets their spellings round-trip through files.
bool liberal_ident_char(char c) {
  return strict_ident_char(c) || c == '!' || c == '~' || c == '|' || c == '(' ||
         c == ')' || static_cast<unsigned char>(c) >= 0x80;
}

// Attribute, value and name symbols: the documented identifier class plus
// '!' so that freshened attributes written by the grammar algebra reload.
bool is_symbol_ident(const std::string& s) {
  return !s.empty() && std::all_of(s.begin(), s.end(), [](char c) {
           return strict_ident_char(c) || c == '!';
         });
}

struct Token {
  enum Kind { Ident, Quoted, Punct, End };
  Kind kind = End;
  std::string text;
  int col = 0;
};

class LineLexer {
 public:
  LineLexer(const std::string& line, int line_no)
      : line_(line), line_no_(line_no) {
    tokenize();
  }

  const Token& peek() const { return tokens_[pos_]; }
  Token next() { return tokens_[std::min(pos_++, tokens_.size() - 1)]; }
  bool at_end() const { return peek().kind == Token::End; }

  [[noreturn]] void fail(const std::string& message, int col = -1) const {
    throw ParseError(line_no_, col < 0 ? peek().col : col, message);
  }

  Token expect_punct(const std::string& text) {
    Token t = next();
    if (t.kind != Token::Punct || t.text != text)
      fail("expected '" + text + "'", t.col);
    return t;
  }

  std::string expect_ident(const char* what) {
    Token t = next();
    if (t.kind != Token::Ident) fail(std::string("expected ") + what, t.col);
    return t.text;
  }

  std::string expect_quoted(const char* what) {
    Token t = next();
    if (t.kind != Token::Quoted) fail(std::string("expected ") + what, t.col);
    return t.text;
  }

  int line_no() const { return line_no_; }

 private:
  void tokenize() {
    std::size_t i = 0;
    while (i < line_.size()) {
      char c = line_[i];
      if (c == ';') break;  // comment to end of line
      if (std::isspace(static_cast<unsigned char>(c))) {
        ++i;
        continue;
      }
      int col = static_cast<int>(i) + 1;
      if (c == '"') {
        std::size_t end = line_.find('"', i + 1);
        if (end == std::string::npos)
          throw ParseError(line_no_, col, "unterminated string");
        tokens_.push_back(
            {Token::Quoted, line_.substr(i + 1, end - i - 1), col});
        i = end + 1;
        continue;
      }
      if (liberal_ident_char(c)) {
        std::size_t end = i;
        while (end < line_.size() && liberal_ident_char(line_[end])) ++end;
        tokens_.push_back({Token::Ident, line_.substr(i, end - i), col});
        i = end;
        continue;
      }
      if (c == '-' && i + 1 < line_.size() && line_[i + 1] == '>') {
        tokens_.push_back({Token::Punct, "->", col});
        i += 2;
        continue;
      }
      if (c == '=' && i + 1 < line_.size() && line_[i + 1] == '>') {
        tokens_.push_back({Token::Punct, "=>", col});
        i += 2;
        continue;
      }
      if (c == '{' || c == '}' || c == ',' || c == '=' || c == '^' ||
          c == ':' || c == '#') {
        tokens_.push_back({Token::Punct, std::string(1, c), col});
        ++i;
        continue;
      }
      throw ParseError(line_no_, col, std::string("unexpected character '") +
                                          c + "'");
    }
    tokens_.push_back({Token::End, "", static_cast<int>(line_.size()) + 1});
  }

  const std::string& line_;
  int line_no_;
  std::vector<Token> tokens_;
  std::size_t pos_ = 0;
};

std::vector<std::pair<int, std::string>> split_lines(const std::string& text) {
  std::vector<std::pair<int, std::string>> lines;
  std::istringstream in(text);
  std::string line;
  int n = 0;
  while (std::getline(in, line)) lines.push_back({++n, line});
  return lines;
}

std::string check_strict(LineLexer& lex, std::string s, const char* what,
                         int col) {
  if (!is_symbol_ident(s))
    lex.fail(std::string(what) + " '" + s + "' contains reserved characters",
             col);
  return s;
}

// Parses "{ schema (, schema)* }" after the opening brace was consumed.
AnnotationSet parse_schemata(LineLexer& lex) {
  std::vector<Schema> schemata;
  if (lex.peek().kind == Token::Punct && lex.peek().text == "}") {
    lex.next();
    return make_annotation_set(std::move(schemata));
  }
  for (;;) {
    lex.expect_punct("^");
    Path path;
    while (lex.peek().kind == Token::Ident) {
      Token t = lex.next();
      path.push_back(check_strict(lex, t.text, "attribute", t.col));
    }
    lex.expect_punct("=");
    Token t = lex.next();
    if (t.kind == Token::Ident && t.text == "_") {
      schemata.push_back(ArrowSchema{std::move(path)});
    } else if (t.kind == Token::Punct && t.text == "#") {
      Token v = lex.next();
      if (v.kind != Token::Ident) lex.fail("expected a value symbol", v.col);
      if (path.empty())
        lex.fail("value schemata need at least one attribute", t.col);
      schemata.push_back(ValueSchema{
          std::move(path), check_strict(lex, v.text, "value", v.col)});
    } else {
      lex.fail("expected '_' or '#value'", t.col);
    }
    Token sep = lex.next();
    if (sep.kind == Token::Punct && sep.text == "}") break;
    if (!(sep.kind == Token::Punct && sep.text == ","))
      lex.fail("expected ',' or '}'", sep.col);
  }
  return make_annotation_set(std::move(schemata));
}

}  // namespace

Grammar parse_grammar(const std::string& text) {
  Grammar g;
  bool start_seen = false;
  for (const auto& [line_no, line] : split_lines(text)) {
    LineLexer lex(line, line_no);
    if (lex.at_end()) continue;
    Token head = lex.next();
    if (head.kind != Token::Ident)
      lex.fail("expected a rule or header line", head.col);

    if (lex.peek().kind == Token::Punct && lex.peek().text == "->") {
      lex.next();
      ProductionRule rule{head.text, {}};
      g.categories.insert(head.text);
      while (!lex.at_end()) {
        std::string cat = lex.expect_ident("a daughter category");
        lex.expect_punct(":");
        lex.expect_punct("{");
        AnnotationSet annotations = parse_schemata(lex);
        g.categories.insert(cat);
        rule.daughters.push_back(Daughter{cat, std::move(annotations)});
      }
      if (rule.daughters.empty())
        lex.fail("production needs at least one daughter");
      g.productions.push_back(std::move(rule));
      continue;
    }
    if (lex.peek().kind == Token::Punct && lex.peek().text == "=>") {
      lex.next();
      std::string terminal = lex.expect_quoted("a quoted terminal");
      lex.expect_punct("{");
      AnnotationSet annotations = parse_schemata(lex);
      if (!lex.at_end()) lex.fail("trailing input after lexicon rule");
      g.categories.insert(head.text);
      if (!terminal.empty()) g.terminals.insert(terminal);
      g.lexicon.push_back(
          LexiconRule{head.text, std::move(terminal), std::move(annotations)});
      continue;
    }

    if (head.text == "start") {
      if (start_seen) lex.fail("duplicate start line");
      start_seen = true;
      g.start = lex.expect_ident("the start category");
      g.categories.insert(g.start);
      if (!lex.at_end()) lex.fail("trailing input after start line");
      continue;
    }
    if (head.text == "category") {
      while (!lex.at_end())
        g.categories.insert(lex.expect_ident("a category"));
      continue;
    }
    if (head.text == "terminal") {
      while (!lex.at_end())
        g.terminals.insert(lex.expect_quoted("a quoted terminal"));
      continue;
    }
    lex.fail("expected 'start', 'category', 'terminal', '->' or '=>'",
             head.col);
  }
  if (!start_seen) throw ParseError(1, 1, "missing start line");
  return g;
}

std::string serialize_grammar(const Grammar& g) {
  std::ostringstream out;
  out << "start " << g.start << "\n";
  if (!g.categories.empty()) {
    out << "category";
    for (const auto& c : g.categories) out << " " << c;
    out << "\n";
  }
  if (!g.terminals.empty()) {
    out << "terminal";
    for (const auto& t : g.terminals) out << " \"" << t << "\"";
    out << "\n";
  }
  for (const auto& p : g.productions) {
    out << p.lhs << " ->";
    for (const auto& d : p.daughters)
      out << " " << d.category << ":" << render_annotations(d.annotations);
    out << "\n";
  }
  for (const auto& l : g.lexicon)
    out << l.lhs << " => \"" << l.terminal << "\" "
        << render_annotations(l.annotations) << "\n";
  return out.str();
}

EquationSet parse_equations(const std::string& text) {
  EquationSet eqs;
  for (const auto& [line_no, line] : split_lines(text)) {
    LineLexer lex(line, line_no);
    if (lex.at_end()) continue;
    Token name = lex.next();
    if (name.kind != Token::Ident) lex.fail("expected a name", name.col);
    check_strict(lex, name.text, "name", name.col);
    Path lhs_path;
    while (lex.peek().kind == Token::Ident) {
      Token t = lex.next();
      lhs_path.push_back(check_strict(lex, t.text, "attribute", t.col));
    }
    lex.expect_punct("=");
    if (lex.peek().kind == Token::Punct && lex.peek().text == "#") {
      Token hash = lex.next();
      Token v = lex.next();
      if (v.kind != Token::Ident) lex.fail("expected a value symbol", v.col);
      if (lhs_path.empty())
        lex.fail("value equations need at least one attribute", hash.col);
      eqs.push_back(ValueEquation{name.text, std::move(lhs_path),
                                  check_strict(lex, v.text, "value", v.col)});
    } else {
      Token rhs = lex.next();
      if (rhs.kind != Token::Ident) lex.fail("expected a name", rhs.col);
      check_strict(lex, rhs.text, "name", rhs.col);
      Path rhs_path;
      while (lex.peek().kind == Token::Ident) {
        Token t = lex.next();
        rhs_path.push_back(check_strict(lex, t.text, "attribute", t.col));
      }
      eqs.push_back(PathEquation{name.text, std::move(lhs_path), rhs.text,
                                 std::move(rhs_path)});
    }
    if (!lex.at_end()) lex.fail("trailing input after equation");
  }
  return eqs;
}

Transducer parse_transducer(const std::string& text) {
  Transducer m;
  bool initial_seen = false;
  auto symbol = [](LineLexer& lex) {
    Token t = lex.next();
    if (t.kind == Token::Quoted) return t.text;
    if (t.kind == Token::Ident) return t.text;
    lex.fail("expected a symbol", t.col);
  };
  for (const auto& [line_no, line] : split_lines(text)) {
    LineLexer lex(line, line_no);
    if (lex.at_end()) continue;
    std::string head = lex.expect_ident("a header or trans line");
    if (head == "states") {
      while (!lex.at_end()) m.states.insert(lex.expect_ident("a state"));
    } else if (head == "input") {
      while (!lex.at_end()) m.input_alphabet.insert(symbol(lex));
    } else if (head == "output") {
      while (!lex.at_end()) m.output_alphabet.insert(symbol(lex));
    } else if (head == "initial") {
      m.initial = lex.expect_ident("a state");
      initial_seen = true;
      if (!lex.at_end()) lex.fail("trailing input after initial line");
    } else if (head == "final") {
      while (!lex.at_end()) m.finals.insert(lex.expect_ident("a state"));
    } else if (head == "trans") {
      std::string from = lex.expect_ident("a state");
      std::string in = lex.expect_quoted("a quoted input symbol");
      lex.expect_punct("->");
      std::string to = lex.expect_ident("a state");
      std::string out = lex.expect_quoted("a quoted output string");
      if (!lex.at_end()) lex.fail("trailing input after trans line");
      std::vector<std::string> written;
      std::istringstream words(out);
      std::string w;
      while (words >> w) written.push_back(w);
      m.transitions[{from, in}].insert({to, written});
    } else {
      lex.fail("unknown line '" + head + "'");
    }
  }
  if (!initial_seen) throw ParseError(1, 1, "missing initial line");
  auto diags = validate_transducer(m);
  if (!diags.empty()) throw ParseError(1, 1, diags.front());
  return m;
}

std::string serialize_transducer(const Transducer& m) {
  std::ostringstream out;
  auto emit_symbols = [&](const std::set<std::string>& symbols) {
    for (const auto& s : symbols) {
      if (s.find(' ') != std::string::npos)
        out << " \"" << s << "\"";
      else
        out << " " << s;
    }
  };
  out << "states";
  for (const auto& q : m.states) out << " " << q;
  out << "\ninput";
  emit_symbols(m.input_alphabet);
  out << "\noutput";
  emit_symbols(m.output_alphabet);
  out << "\ninitial " << m.initial << "\nfinal";
  for (const auto& q : m.finals) out << " " << q;
  out << "\n";
  for (const auto& [key, targets] : m.transitions) {
    for (const auto& [to, written] : targets) {
      out << "trans " << key.first << " \"" << key.second << "\" -> " << to
          << " \"";
      for (std::size_t i = 0; i < written.size(); ++i) {
        if (i) out << " ";
        out << written[i];
      }
      out << "\"\n";
    }
  }
  return out.str();
}

std::vector<std::string> parse_tokens(const std::string& text) {
  std::vector<std::string> tokens;
  std::size_t i = 0;
  while (i < text.size()) {
    if (std::isspace(static_cast<unsigned char>(text[i]))) {
      ++i;
      continue;
    }
    if (text[i] == '\'') {
      std::size_t end = text.find('\'', i + 1);
      if (end == std::string::npos)
        throw ParseError(1, static_cast<int>(i) + 1, "unterminated quote");
      if (end == i + 1)
        throw ParseError(1, static_cast<int>(i) + 1, "empty token");
      tokens.push_back(text.substr(i + 1, end - i - 1));
      i = end + 1;
      continue;
    }
    std::size_t end = i;
    while (end < text.size() &&
           !std::isspace(static_cast<unsigned char>(text[end])))
      ++end;
    tokens.push_back(text.substr(i, end - i));
    i = end;
  }
  return tokens;
}

std::string format_tokens(const std::vector<std::string>& tokens) {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out += ' ';
    if (tokens[i].find(' ') != std::string::npos)
      out += "'" + tokens[i] + "'";
    else
      out += tokens[i];
  }
  return out;
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, 0, "cannot open '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError(0, 0, "cannot write '" + path + "'");
  out << content;
}

Grammar parse_grammar_file(const std::string& path) {
  return parse_grammar(read_file(path));
}

EquationSet parse_equations_file(const std::string& path) {
  return parse_equations(read_file(path));
}

Transducer parse_transducer_file(const std::string& path) {
  return parse_transducer(read_file(path));
}

}  // namespace thfsg
