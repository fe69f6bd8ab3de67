#include <algorithm>
#include <numeric>
#include <random>
#include <vector>

#include <doctest.h>

#include "dgi/errors.hpp"
#include "dgi/words.hpp"

using namespace dgi;

namespace {

EdgeId eid(int i) { return EdgeId{std::string(1, static_cast<char>('a' + i))}; }

Word make_word(std::initializer_list<std::pair<int, int>> ls) {
  Word w;
  for (const auto& [i, exp] : ls) w.letters.push_back(Letter{eid(i), exp});
  return w;
}

// Reference for cyclic_equal: try every rotation offset the obvious way.
bool rotated_equal(const Word& a, const Word& b) {
  if (a.letters.size() != b.letters.size()) return false;
  const std::size_t n = a.letters.size();
  if (n == 0) return true;
  for (std::size_t r = 0; r < n; ++r) {
    bool all = true;
    for (std::size_t k = 0; k < n && all; ++k) {
      all = a.letters[(r + k) % n] == b.letters[k];
    }
    if (all) return true;
  }
  return false;
}

// Reference for words_match: try every pairing of the two multisets via
// permutations, accepting a pair when the words agree up to rotation (and,
// in Reversed mode, when the reversal agrees instead).
bool naive_match(const std::vector<Word>& as, const std::vector<Word>& bs,
                 MatchMode mode) {
  if (as.size() != bs.size()) return false;
  std::vector<std::size_t> perm(bs.size());
  std::iota(perm.begin(), perm.end(), 0);
  do {
    bool all = true;
    for (std::size_t i = 0; i < as.size() && all; ++i) {
      const Word& b = bs[perm[i]];
      const Word probe = mode == MatchMode::Reversed ? reverse_word(as[i])
                                                     : as[i];
      all = rotated_equal(probe, b);
    }
    if (all) return true;
  } while (std::next_permutation(perm.begin(), perm.end()));
  return false;
}

Word random_word(std::mt19937& rng, int max_len, int alphabet) {
  std::uniform_int_distribution<int> len(1, max_len);
  std::uniform_int_distribution<int> letter(0, alphabet - 1);
  std::uniform_int_distribution<int> sign(0, 1);
  Word w;
  const int n = len(rng);
  for (int i = 0; i < n; ++i) {
    w.letters.push_back(Letter{eid(letter(rng)), sign(rng) ? 1 : -1});
  }
  return w;
}

Word rotate_by(const Word& w, std::size_t r) {
  Word out = w;
  std::rotate(out.letters.begin(),
              out.letters.begin() + static_cast<long>(r % w.letters.size()),
              out.letters.end());
  return out;
}

}  // namespace

TEST_CASE("cyclic_equal basics") {
  const Word w = make_word({{0, 1}, {1, 1}, {0, -1}, {1, -1}});
  CHECK(cyclic_equal(w, w));
  CHECK(cyclic_equal(w, rotate_by(w, 1)));
  CHECK(cyclic_equal(w, rotate_by(w, 3)));
  CHECK_FALSE(cyclic_equal(w, make_word({{0, 1}, {1, 1}, {0, -1}})));
  CHECK_FALSE(cyclic_equal(w, make_word({{0, 1}, {1, 1}, {0, 1}, {1, -1}})));
  // Same letters, different cyclic order.
  CHECK_FALSE(cyclic_equal(make_word({{0, 1}, {0, 1}, {1, 1}, {1, 1}}),
                           make_word({{0, 1}, {1, 1}, {0, 1}, {1, 1}})));
  CHECK(cyclic_equal(Word{}, Word{}));
  CHECK_FALSE(cyclic_equal(Word{}, make_word({{0, 1}})));
}

TEST_CASE("cyclic_equal agrees with the rotation oracle on random words") {
  std::mt19937 rng(20240517);
  for (int trial = 0; trial < 2000; ++trial) {
    const Word a = random_word(rng, 6, 2);
    // Half the trials compare against a genuine rotation, half against an
    // independent word, so both verdicts get exercised.
    Word b;
    if (trial % 2 == 0) {
      b = rotate_by(a, static_cast<std::size_t>(rng() % a.letters.size()));
    } else {
      b = random_word(rng, 6, 2);
    }
    CHECK(cyclic_equal(a, b) == rotated_equal(a, b));
  }
}

TEST_CASE("reverse_word reverses order and flips exponents") {
  const Word w = make_word({{0, 1}, {1, -1}, {2, 1}});
  const Word r = reverse_word(w);
  REQUIRE(r.letters.size() == 3);
  CHECK(r.letters[0] == Letter{eid(2), -1});
  CHECK(r.letters[1] == Letter{eid(1), 1});
  CHECK(r.letters[2] == Letter{eid(0), -1});
}

TEST_CASE("reverse_word is an involution and respects rotation") {
  std::mt19937 rng(98431);
  for (int trial = 0; trial < 500; ++trial) {
    const Word w = random_word(rng, 8, 3);
    CHECK(reverse_word(reverse_word(w)) == w);
    const Word rot = rotate_by(w, static_cast<std::size_t>(rng() % 7 + 1));
    CHECK(cyclic_equal(reverse_word(w), reverse_word(rot)));
  }
}

TEST_CASE("substitute renames, flips signs, and rejects unmapped edges") {
  const Word w = make_word({{0, 1}, {1, -1}});

  EdgeMapping rename;
  rename[eid(0)] = SignedEdge{eid(5), 1};
  rename[eid(1)] = SignedEdge{eid(6), 1};
  CHECK(substitute(w, rename) == make_word({{5, 1}, {6, -1}}));

  EdgeMapping flip;
  flip[eid(0)] = SignedEdge{eid(0), -1};
  flip[eid(1)] = SignedEdge{eid(1), 1};
  CHECK(substitute(w, flip) == make_word({{0, -1}, {1, -1}}));

  EdgeMapping partial;
  partial[eid(0)] = SignedEdge{eid(0), 1};
  CHECK_THROWS_AS((void)substitute(w, partial), ContractError);
}

TEST_CASE("substitute composes and inverts") {
  std::mt19937 rng(777);
  const int alphabet = 3;
  for (int trial = 0; trial < 300; ++trial) {
    const Word w = random_word(rng, 8, alphabet);

    // Random bijective relabeling with signs.
    std::vector<int> perm(alphabet);
    std::iota(perm.begin(), perm.end(), 0);
    std::shuffle(perm.begin(), perm.end(), rng);
    EdgeMapping fwd, inv;
    for (int i = 0; i < alphabet; ++i) {
      const int s = (rng() % 2) ? 1 : -1;
      fwd[eid(i)] = SignedEdge{eid(perm[i]), s};
      inv[eid(perm[i])] = SignedEdge{eid(i), s};
    }
    CHECK(substitute(substitute(w, fwd), inv) == w);
  }
}

TEST_CASE("words_match pairs multisets up to rotation") {
  const Word ab = make_word({{0, 1}, {1, 1}});
  const Word ba = make_word({{1, 1}, {0, 1}});
  const Word aa = make_word({{0, 1}, {0, 1}});

  CHECK(words_match({ab, ba}, {ba, ab}, MatchMode::Direct));
  CHECK(words_match({ab, aa}, {aa, ba}, MatchMode::Direct));
  CHECK_FALSE(words_match({ab, ab}, {ab, aa}, MatchMode::Direct));
  CHECK_FALSE(words_match({ab}, {ab, ab}, MatchMode::Direct));

  // Duplicates must be consumed one-for-one, not satisfied by a single
  // matching partner.
  CHECK(words_match({aa, aa}, {aa, aa}, MatchMode::Direct));
  CHECK_FALSE(words_match({aa, aa}, {aa, ab}, MatchMode::Direct));
}

TEST_CASE("words_match reversed mode matches reversals only") {
  const Word w = make_word({{0, 1}, {1, 1}, {0, -1}});
  const Word r = reverse_word(w);
  CHECK(words_match({w}, {r}, MatchMode::Reversed));
  CHECK_FALSE(words_match({w}, {r}, MatchMode::Direct));
  CHECK(words_match({w}, {w}, MatchMode::Direct));
  // Palindromic-under-reversal words match in both modes.
  const Word p = make_word({{0, 1}, {0, -1}});
  CHECK(cyclic_equal(reverse_word(p), p));
  CHECK(words_match({p}, {p}, MatchMode::Reversed));
}

TEST_CASE("words_match agrees with the permutation oracle on random multisets") {
  std::mt19937 rng(555001);
  for (int trial = 0; trial < 400; ++trial) {
    std::uniform_int_distribution<int> count(1, 4);
    const int n = count(rng);
    std::vector<Word> as, bs;
    for (int i = 0; i < n; ++i) as.push_back(random_word(rng, 4, 2));
    if (trial % 2 == 0) {
      // Scramble a genuine match: permute, rotate, maybe reverse everything.
      bs = as;
      std::shuffle(bs.begin(), bs.end(), rng);
      for (Word& w : bs) {
        w = rotate_by(w, static_cast<std::size_t>(rng() % w.letters.size()));
      }
      const bool reversed = rng() % 2 == 0;
      if (reversed) {
        for (Word& w : bs) w = reverse_word(w);
      }
      const MatchMode mode = reversed ? MatchMode::Reversed
                                      : MatchMode::Direct;
      CHECK(words_match(as, bs, mode));
      CHECK(naive_match(as, bs, mode));
    } else {
      for (int i = 0; i < n; ++i) bs.push_back(random_word(rng, 4, 2));
      for (MatchMode mode : {MatchMode::Direct, MatchMode::Reversed}) {
        CHECK(words_match(as, bs, mode) == naive_match(as, bs, mode));
      }
    }
  }
}
