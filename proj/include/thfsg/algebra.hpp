#ifndef THFSG_ALGEBRA_HPP
#define THFSG_ALGEBRA_HPP

#include "thfsg/grammar.hpp"
#include "thfsg/transducer.hpp"

namespace thfsg {

// Union, concatenation and Kleene closure over grammars.  Category sets
// are made disjoint by prefixing the second grammar's categories when they
// intersect; the linking attributes of concat/star are freshened when an
// input grammar already uses them.  All take valid grammars and return
// valid ones.
Grammar grammar_union(const Grammar& g1, const Grammar& g2);
Grammar grammar_concat(const Grammar& g1, const Grammar& g2);
Grammar grammar_star(const Grammar& g);

// The grammar for the NFT-image of L(g).  Requires g in normal form with
// terminal set equal to the machine's input alphabet; throws
// std::invalid_argument otherwise.
Grammar nft_image_grammar(const Grammar& g, const Transducer& m);

}  // namespace thfsg

#endif
