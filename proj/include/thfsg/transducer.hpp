#ifndef THFSG_TRANSDUCER_HPP
#define THFSG_TRANSDUCER_HPP

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <utility>
#include <vector>

namespace thfsg {

// Nondeterministic finite transducer.  The empty string stands for epsilon
// on the input side of a transition key; output is a symbol sequence.
struct Transducer {
  std::set<std::string> states;
  std::set<std::string> input_alphabet;
  std::set<std::string> output_alphabet;
  // (state, input symbol or "") -> set of (state, output string)
  std::map<std::pair<std::string, std::string>,
           std::set<std::pair<std::string, std::vector<std::string>>>>
      transitions;
  std::string initial;
  std::set<std::string> finals;

  bool operator==(const Transducer&) const = default;
};

std::vector<std::string> validate_transducer(const Transducer& m);

struct NftOutputs {
  std::set<std::vector<std::string>> outputs;
  // Set when the output length bound cut candidates (in particular when an
  // epsilon-input writing cycle makes the output set infinite).
  bool truncated = false;
};

// All members of M(w) of length at most max_out, by closure over the
// extended transition.
NftOutputs nft_outputs(const Transducer& m, const std::vector<std::string>& input,
                       std::size_t max_out);

// Single-state machine writing h(a) for every a.  h must be total on the
// input alphabet.
Transducer nft_from_homomorphism(
    const std::map<std::string, std::vector<std::string>>& h,
    const std::set<std::string>& input_alphabet,
    const std::set<std::string>& output_alphabet);

// Echo machine for use as a regular-language filter: one transition per
// given (state, symbol, state), writing what it reads.
Transducer echo_fsm(const std::set<std::string>& states,
                    const std::set<std::string>& alphabet,
                    const std::string& initial,
                    const std::set<std::string>& finals,
                    const std::vector<std::tuple<std::string, std::string,
                                                 std::string>>& moves);

// Inverse transducer: each transition reading a and writing b1..bn becomes
// a fresh-state chain reading b1..bn and writing a on the last step.
Transducer nft_invert(const Transducer& m);

}  // namespace thfsg

#endif
