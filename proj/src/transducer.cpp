#include "thfsg/transducer.hpp"

#include <deque>
#include <tuple>

namespace thfsg {

std::vector<std::string> validate_transducer(const Transducer& m) {
  std::vector<std::string> out;
  if (!m.states.count(m.initial))
    out.push_back("initial state '" + m.initial + "' is not declared");
  for (const auto& q : m.finals)
    if (!m.states.count(q))
      out.push_back("final state '" + q + "' is not declared");
  for (const auto& [key, targets] : m.transitions) {
    const auto& [q, in] = key;
    if (!m.states.count(q))
      out.push_back("transition from undeclared state '" + q + "'");
    if (!in.empty() && !m.input_alphabet.count(in))
      out.push_back("transition on undeclared input symbol '" + in + "'");
    for (const auto& [p, written] : targets) {
      if (!m.states.count(p))
        out.push_back("transition to undeclared state '" + p + "'");
      for (const auto& s : written)
        if (!m.output_alphabet.count(s))
          out.push_back("transition writes undeclared output symbol '" + s +
                        "'");
    }
  }
  return out;
}

NftOutputs nft_outputs(const Transducer& m,
                       const std::vector<std::string>& input,
                       std::size_t max_out) {
  NftOutputs result;
  using Config = std::tuple<std::string, std::size_t, std::vector<std::string>>;
  std::set<Config> seen;
  std::deque<Config> queue;
  Config start{m.initial, 0, {}};
  seen.insert(start);
  queue.push_back(start);
  auto expand = [&](const std::string& state,
                    const std::vector<std::string>& out,
                    const std::string& symbol, std::size_t next_pos) {
    auto it = m.transitions.find({state, symbol});
    if (it == m.transitions.end()) return;
    for (const auto& [next_state, written] : it->second) {
      if (out.size() + written.size() > max_out) {
        result.truncated = true;
        continue;
      }
      std::vector<std::string> next_out = out;
      next_out.insert(next_out.end(), written.begin(), written.end());
      Config c{next_state, next_pos, std::move(next_out)};
      if (seen.insert(c).second) queue.push_back(c);
    }
  };
  while (!queue.empty()) {
    auto [state, pos, out] = queue.front();
    queue.pop_front();
    if (pos == input.size() && m.finals.count(state))
      result.outputs.insert(out);
    if (pos < input.size()) expand(state, out, input[pos], pos + 1);
    expand(state, out, "", pos);
  }
  return result;
}

Transducer nft_from_homomorphism(
    const std::map<std::string, std::vector<std::string>>& h,
    const std::set<std::string>& input_alphabet,
    const std::set<std::string>& output_alphabet) {
  Transducer m;
  m.states = {"q0"};
  m.initial = "q0";
  m.finals = {"q0"};
  m.input_alphabet = input_alphabet;
  m.output_alphabet = output_alphabet;
  for (const auto& a : input_alphabet) m.transitions[{"q0", a}].insert({"q0", h.at(a)});
  return m;
}

Transducer echo_fsm(
    const std::set<std::string>& states, const std::set<std::string>& alphabet,
    const std::string& initial, const std::set<std::string>& finals,
    const std::vector<std::tuple<std::string, std::string, std::string>>&
        moves) {
  Transducer m;
  m.states = states;
  m.input_alphabet = alphabet;
  m.output_alphabet = alphabet;
  m.initial = initial;
  m.finals = finals;
  for (const auto& [from, symbol, to] : moves)
    m.transitions[{from, symbol}].insert({to, {symbol}});
  return m;
}

Transducer nft_invert(const Transducer& m) {
  Transducer inv;
  inv.states = m.states;
  inv.input_alphabet = m.output_alphabet;
  inv.output_alphabet = m.input_alphabet;
  inv.initial = m.initial;
  inv.finals = m.finals;
  auto fresh_state = [&inv](const std::string& base) {
    for (int k = 1;; ++k) {
      std::string candidate = base + "!" + std::to_string(k);
      if (!inv.states.count(candidate)) {
        inv.states.insert(candidate);
        return candidate;
      }
    }
  };
  for (const auto& [key, targets] : m.transitions) {
    const auto& [q, in] = key;
    std::vector<std::string> writes = in.empty()
                                          ? std::vector<std::string>{}
                                          : std::vector<std::string>{in};
    for (const auto& [p, written] : targets) {
      if (written.empty()) {
        inv.transitions[{q, ""}].insert({p, writes});
        continue;
      }
      std::string at = q;
      for (std::size_t i = 0; i + 1 < written.size(); ++i) {
        std::string next = fresh_state(q);
        inv.transitions[{at, written[i]}].insert({next, {}});
        at = next;
      }
      inv.transitions[{at, written.back()}].insert({p, writes});
    }
  }
  return inv;
}

}  // namespace thfsg
