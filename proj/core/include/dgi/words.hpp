#pragma once

// Cyclic word algebra: rotation equality, reversal, substitution through an
// edge mapping, and matching of word multisets.

#include <map>
#include <vector>

#include "dgi/model.hpp"

namespace dgi {

struct SignedEdge {
  EdgeId edge;
  int sign = 1;  // +1 keeps orientation, -1 flips it
  auto operator<=>(const SignedEdge&) const = default;
};

// Image of each edge letter under a relabeling, with orientation sign.
using EdgeMapping = std::map<EdgeId, SignedEdge>;

// True iff some rotation of a equals b letter for letter.
bool cyclic_equal(const Word& a, const Word& b);

// Reversed traversal: letters in reverse order with negated exponents.
Word reverse_word(const Word& w);

// Applies the mapping to every letter; exponents multiply with the mapping
// sign. Throws ContractError if a letter's edge is unmapped.
Word substitute(const Word& w, const EdgeMapping& m);

enum class MatchMode : std::uint8_t {
  Direct,    // pair words up to rotation
  Reversed,  // pair each word of `a` with the reversal of a word of `b`
};

// Is there a bijection between the two multisets pairing cyclically equal
// words (after reversing all of b, in Reversed mode)? Backtracking over the
// compatibility relation; multiset semantics, so duplicates must pair off.
bool words_match(const std::vector<Word>& a, const std::vector<Word>& b,
                 MatchMode mode);

}  // namespace dgi
