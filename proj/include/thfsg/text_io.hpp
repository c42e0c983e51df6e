#ifndef THFSG_TEXT_IO_HPP
#define THFSG_TEXT_IO_HPP

#include <stdexcept>
#include <string>
#include <vector>

#include "thfsg/feature_structure.hpp"
#include "thfsg/grammar.hpp"
#include "thfsg/transducer.hpp"

namespace thfsg {

class ParseError : public std::runtime_error {
 public:
  ParseError(int line, int col, const std::string& message)
      : std::runtime_error(std::to_string(line) + ":" + std::to_string(col) +
                           ": " + message),
        line_(line),
        col_(col) {}

  int line() const { return line_; }
  int col() const { return col_; }

 private:
  int line_;
  int col_;
};

// Grammar files: ';' comments, 'start'/'category'/'terminal' header lines,
// 'K0 -> K1:{schemata} ...' productions, 'K => "t" {schemata}' lexicon
// entries, '""' for the empty string.
Grammar parse_grammar(const std::string& text);
Grammar parse_grammar_file(const std::string& path);
std::string serialize_grammar(const Grammar& g);

// Equation files: 'name p1 .. = name q1 ..' or 'name p1 .. = #value'.
EquationSet parse_equations(const std::string& text);
EquationSet parse_equations_file(const std::string& path);

// NFT files: states/input/output/initial/final headers and
// 'trans q "<in>" -> p "<out>"' lines.  The quoted input is one symbol;
// the quoted output is split on spaces into a symbol string.
Transducer parse_transducer(const std::string& text);
Transducer parse_transducer_file(const std::string& path);
std::string serialize_transducer(const Transducer& m);

// Command-line token strings: whitespace separated, single quotes group
// multiword terminals.
std::vector<std::string> parse_tokens(const std::string& text);
std::string format_tokens(const std::vector<std::string>& tokens);

std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& content);

}  // namespace thfsg

#endif
