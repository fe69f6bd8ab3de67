#include "dgi/words.hpp"

#include <algorithm>

#include "dgi/errors.hpp"

namespace dgi {

bool cyclic_equal(const Word& a, const Word& b) {
  const std::size_t n = a.letters.size();
  if (n != b.letters.size()) return false;
  if (n == 0) return true;
  for (std::size_t r = 0; r < n; ++r) {
    bool match = true;
    for (std::size_t k = 0; k < n; ++k) {
      if (a.letters[(r + k) % n] != b.letters[k]) {
        match = false;
        break;
      }
    }
    if (match) return true;
  }
  return false;
}

Word reverse_word(const Word& w) {
  Word out;
  out.letters.reserve(w.letters.size());
  for (auto it = w.letters.rbegin(); it != w.letters.rend(); ++it) {
    out.letters.push_back({it->edge, -it->exponent});
  }
  return out;
}

Word substitute(const Word& w, const EdgeMapping& m) {
  Word out;
  out.letters.reserve(w.letters.size());
  for (const Letter& l : w.letters) {
    auto it = m.find(l.edge);
    if (it == m.end()) {
      throw ContractError("substitute: no mapping for edge '" + l.edge.value +
                          "'");
    }
    out.letters.push_back({it->second.edge, l.exponent * it->second.sign});
  }
  return out;
}

namespace {

bool match_rec(const std::vector<Word>& a, const std::vector<Word>& targets,
               std::vector<bool>& used, std::size_t i) {
  if (i == a.size()) return true;
  for (std::size_t j = 0; j < targets.size(); ++j) {
    if (used[j] || !cyclic_equal(a[i], targets[j])) continue;
    used[j] = true;
    if (match_rec(a, targets, used, i + 1)) return true;
    used[j] = false;
  }
  return false;
}

}  // namespace

bool words_match(const std::vector<Word>& a, const std::vector<Word>& b,
                 MatchMode mode) {
  if (a.size() != b.size()) return false;
  std::vector<Word> targets;
  targets.reserve(b.size());
  for (const Word& w : b) {
    targets.push_back(mode == MatchMode::Direct ? w : reverse_word(w));
  }
  std::vector<bool> used(targets.size(), false);
  return match_rec(a, targets, used, 0);
}

}  // namespace dgi
