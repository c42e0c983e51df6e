#ifndef THFSG_PARSER_HPP
#define THFSG_PARSER_HPP

#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "thfsg/cstructure.hpp"
#include "thfsg/grammar.hpp"

namespace thfsg {

// Bounds for the derivation search.  Grammaticality quantifies over
// c-structures of unbounded size (empty yields and unary chains can grow
// without limit), so acceptance is complete only up to these bounds and a
// cut-off search is reported distinctly from rejection.
struct SearchLimits {
  std::uint32_t max_chain = 0;  // 0 = twice the category count
  std::uint32_t max_parses = 1;
  std::uint32_t max_nodes = 4096;  // per-tree node cap; also scales the
                                   // total-derivation safety cap

  std::uint32_t chain_bound(const Grammar& g) const;
};

enum class ParseStatus { Accepted, Rejected, LimitExceeded };

const char* to_string(ParseStatus status);

struct ParseResult {
  ParseStatus status = ParseStatus::Rejected;
  std::vector<std::pair<CStructure, FeatureStructure>> parses;
  // For a rejected start-spanning candidate: why its equations broke.
  std::optional<Inconsistency> root_failure;
  bool truncated = false;
};

// Up to max_parses consistent c-structures with their generated feature
// structures, ordered by node count then rule choices.
ParseResult parse_all(const Grammar& g, const std::vector<std::string>& tokens,
                      SearchLimits limits = {});

// parse_all with a single witness.
ParseResult recognize(const Grammar& g, const std::vector<std::string>& tokens,
                      SearchLimits limits = {});

struct EnumerateResult {
  std::set<std::vector<std::string>> strings;
  bool truncated = false;
};

// All strings of length at most max_len accepted under the same limits,
// by bottom-up closure over (category, yield) pairs with consistency
// checking.
EnumerateResult enumerate_language(const Grammar& g, std::size_t max_len,
                                   SearchLimits limits = {});

}  // namespace thfsg

#endif
