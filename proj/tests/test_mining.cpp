#include <algorithm>
#include <cstddef>
#include <map>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "doctest.h"
#include "refcover/common.hpp"
#include "refcover/mining.hpp"
#include "refcover/rng.hpp"
#include "refcover/text.hpp"

TEST_SUITE_BEGIN("mining");

using refcover::NGramMultiset;
using refcover::Rng;
using refcover::ScoredSystem;
using refcover::Tokens;
using refcover::VotedNgram;

namespace {

Tokens tok(const std::string& s) { return refcover::split_tokens(s); }

std::string key(const std::string& s) {
  Tokens t = tok(s);
  return NGramMultiset::key_of(t, 0, static_cast<int>(t.size()));
}

bool contains_subseq(const Tokens& big, const Tokens& small) {
  if (small.empty() || small.size() > big.size()) return false;
  for (std::size_t start = 0; start + small.size() <= big.size(); ++start) {
    bool hit = true;
    for (std::size_t k = 0; k < small.size(); ++k)
      if (big[start + k] != small[k]) {
        hit = false;
        break;
      }
    if (hit) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("top half selection") {
  auto top = refcover::select_top_half(
      {{"sysA", 1.0}, {"sysB", 2.0}, {"sysC", 3.0}});
  CHECK(top == std::vector<std::string>{"sysC", "sysB"});

  // ties go to the lexicographically smaller name
  top = refcover::select_top_half(
      {{"d", 2.0}, {"b", 2.0}, {"c", 1.0}, {"a", 2.0}});
  CHECK(top == std::vector<std::string>{"a", "b"});

  CHECK(refcover::select_top_half({{"only", 0.0}}) ==
        std::vector<std::string>{"only"});
  // odd count keeps the extra system: ceil(5/2) = 3
  top = refcover::select_top_half(
      {{"a", 5}, {"b", 4}, {"c", 3}, {"d", 2}, {"e", 1}});
  CHECK(top == std::vector<std::string>{"a", "b", "c"});
  CHECK_THROWS_AS(refcover::select_top_half({}), refcover::data_error);
}

TEST_CASE("unrewarded n-gram voting") {
  std::vector<Tokens> refs = {tok("the cat sat on the mat")};
  std::vector<Tokens> voters = {
      tok("red dog red dog the cat"),   // repetition counts once
      tok("red dog x the cat"),
      tok("y red dog blue cow"),
      tok("nothing here blue cow"),
  };

  auto got = refcover::find_unrewarded_ngrams(refs, voters, {2}, 0.75);
  // min votes = ceil(0.75 * 4) = 3; "red dog" has 3 votes, "blue cow" 2,
  // "the cat" has 3 but appears in the reference
  bool found_red_dog = false;
  for (const auto& g : got) {
    CHECK(g.order == 2);
    CHECK(g.votes >= 3);
    if (g.key == key("red dog")) {
      found_red_dog = true;
      CHECK(g.votes == 3);
      CHECK(g.fraction == doctest::Approx(0.75));
    }
    CHECK(g.key != key("blue cow"));
    CHECK(g.key != key("the cat"));
  }
  CHECK(found_red_dog);

  // exact multiples of the threshold must not round up (0.75 * 4 == 3), and
  // fractional ones must (0.75 * 5 -> 4)
  std::vector<Tokens> five = voters;
  five.push_back(tok("red dog again"));
  got = refcover::find_unrewarded_ngrams(refs, five, {2}, 0.75);
  for (const auto& g : got) CHECK(g.votes >= 4);
  bool red_dog_at_four = false;
  for (const auto& g : got)
    if (g.key == key("red dog")) red_dog_at_four = true;
  CHECK(red_dog_at_four);  // the fifth voter lifts it to 4 votes

  // only the requested orders are scanned
  got = refcover::find_unrewarded_ngrams(refs, voters, {3}, 0.5);
  for (const auto& g : got) CHECK(g.order == 3);

  // results are sorted by (order, key)
  got = refcover::find_unrewarded_ngrams(refs, voters, {1, 2}, 0.5);
  for (std::size_t i = 1; i < got.size(); ++i) {
    if (got[i - 1].order != got[i].order)
      CHECK(got[i - 1].order < got[i].order);
    else
      CHECK(got[i - 1].key < got[i].key);
  }

  CHECK_THROWS_AS(refcover::find_unrewarded_ngrams(refs, {}, {2}, 0.75),
                  refcover::data_error);
  CHECK_THROWS_AS(refcover::find_unrewarded_ngrams(refs, voters, {}, 0.75),
                  refcover::usage_error);
  CHECK_THROWS_AS(refcover::find_unrewarded_ngrams(refs, voters, {0}, 0.75),
                  refcover::usage_error);
  CHECK_THROWS_AS(refcover::find_unrewarded_ngrams(refs, voters, {2}, 0.0),
                  refcover::usage_error);
  CHECK_THROWS_AS(refcover::find_unrewarded_ngrams(refs, voters, {2}, 1.1),
                  refcover::usage_error);
}

TEST_CASE("maximality filter") {
  auto gram = [](const std::string& text) {
    Tokens t = tok(text);
    return VotedNgram{key(text), static_cast<int>(t.size()), 3, 0.75};
  };

  auto kept = refcover::filter_subsequences(
      {gram("a b"), gram("a b c"), gram("a b c d"), gram("x y")});
  REQUIRE(kept.size() == 2);
  CHECK(kept[0].key == key("a b c d"));
  CHECK(kept[1].key == key("x y"));

  // same-length candidates never subsume each other
  kept = refcover::filter_subsequences({gram("a b"), gram("b a")});
  CHECK(kept.size() == 2);

  // infix containment counts, not just prefixes
  kept = refcover::filter_subsequences({gram("b c"), gram("a b c d")});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0].key == key("a b c d"));

  CHECK(refcover::filter_subsequences({}).empty());
}

TEST_CASE("constraint building and JSONL shape") {
  std::vector<std::vector<Tokens>> refs = {
      {tok("the cat sat")},
      {tok("it rained hard")},
  };
  std::map<std::string, std::vector<Tokens>> systems;
  for (const std::string name : {"s1", "s2", "s3", "s4"}) {
    systems[name] = {tok("purple cow the cat"), tok("it rained hard")};
  }
  std::vector<std::string> voters = {"s1", "s2", "s3", "s4"};

  auto set = refcover::build_constraints(refs, systems, voters, {2, 3},
                                         0.75, 2);
  REQUIRE(set.records.size() == 2);
  CHECK(set.voters == voters);
  CHECK(set.threshold == 0.75);

  // bigrams "purple cow" and "cow the" are swallowed by the trigrams
  CHECK(set.records[0].segment == 0);
  CHECK(set.records[0].constraints ==
        std::vector<std::string>{"cow the cat", "purple cow the"});
  REQUIRE(set.records[0].votes.size() == 2);
  CHECK(set.records[0].votes[0] == doctest::Approx(1.0));

  // segment 1: every voter equals the reference, nothing unrewarded
  CHECK(set.records[1].constraints.empty());

  std::string jsonl = refcover::constraints_to_jsonl(set);
  std::istringstream lines(jsonl);
  std::string line;
  std::size_t n = 0;
  while (std::getline(lines, line)) {
    auto j = nlohmann::json::parse(line);
    CHECK(j["segment"] == n);
    CHECK(j["constraints"].is_array());
    CHECK(j["votes"].size() == j["constraints"].size());
    ++n;
  }
  CHECK(n == 2);

  CHECK_THROWS_WITH_AS(
      refcover::build_constraints(refs, systems, {"ghost"}, {2}, 0.75, 1),
      "voting system 'ghost' has no outputs", refcover::data_error);
  auto bad = systems;
  bad["s1"].pop_back();
  CHECK_THROWS_WITH_AS(
      refcover::build_constraints(refs, bad, voters, {2}, 0.75, 1),
      "system 's1' has 1 segments, refs 2", refcover::data_error);
}

TEST_CASE("constraints verified by an independent scan") {
  // random instances re-checked with direct window scans instead of the
  // n-gram index
  Rng rng(9119);
  const std::vector<std::string> vocab = {"a", "b", "c", "d", "e", "f"};
  auto sentence = [&](std::size_t len) {
    Tokens t;
    for (std::size_t i = 0; i < len; ++i)
      t.push_back(vocab[rng.below(vocab.size())]);
    return t;
  };

  for (int iter = 0; iter < 50; ++iter) {
    std::vector<Tokens> refs = {sentence(8 + rng.below(5)),
                                sentence(8 + rng.below(5))};
    std::vector<Tokens> voters;
    for (int v = 0; v < 4; ++v) voters.push_back(sentence(8 + rng.below(5)));
    const std::vector<int> orders = {2, 3};
    const double threshold = 0.75;
    const long min_votes = 3;  // ceil(0.75 * 4)

    auto kept = refcover::filter_subsequences(
        refcover::find_unrewarded_ngrams(refs, voters, orders, threshold));

    std::vector<Tokens> kept_toks;
    for (const auto& g : kept)
      kept_toks.push_back(NGramMultiset::tokens_of(g.key));

    for (std::size_t i = 0; i < kept.size(); ++i) {
      // never rewarded: no reference contains the constraint
      for (const auto& r : refs) CHECK_FALSE(contains_subseq(r, kept_toks[i]));
      // voted for: enough voters contain it verbatim
      long votes = 0;
      for (const auto& v : voters)
        if (contains_subseq(v, kept_toks[i])) ++votes;
      CHECK(votes >= min_votes);
      CHECK(votes == kept[i].votes);
      // maximal: not inside any other kept constraint
      for (std::size_t j = 0; j < kept.size(); ++j)
        if (i != j) CHECK_FALSE(contains_subseq(kept_toks[j], kept_toks[i]));
    }

    // complete: every qualifying window is represented by some constraint
    for (int order : orders) {
      std::set<std::string> seen;
      for (const auto& v : voters) {
        if (v.size() < static_cast<std::size_t>(order)) continue;
        for (std::size_t s = 0; s + order <= v.size(); ++s) {
          Tokens w(v.begin() + s, v.begin() + s + order);
          std::string k = NGramMultiset::key_of(w, 0, order);
          if (!seen.insert(k).second) continue;
          long votes = 0;
          for (const auto& vv : voters)
            if (contains_subseq(vv, w)) ++votes;
          bool in_ref = false;
          for (const auto& r : refs)
            if (contains_subseq(r, w)) in_ref = true;
          if (votes < min_votes || in_ref) continue;
          bool covered = false;
          for (const auto& kt : kept_toks)
            if (contains_subseq(kt, w)) covered = true;
          CHECK(covered);
        }
      }
    }
  }
}

TEST_CASE("split protocol") {
  std::vector<std::string> names;
  for (int i = 0; i < 14; ++i)
    names.push_back("sys" + std::string(1, static_cast<char>('a' + i)));

  auto splits = refcover::split_protocol(names, 5, 2019);
  REQUIRE(splits.size() == 5);
  for (const auto& sp : splits) {
    CHECK(sp.mining.size() == 7);
    CHECK(sp.evaluation.size() == 7);
    CHECK(std::is_sorted(sp.mining.begin(), sp.mining.end()));
    CHECK(std::is_sorted(sp.evaluation.begin(), sp.evaluation.end()));
    // exact partition of the input
    std::vector<std::string> all = sp.mining;
    all.insert(all.end(), sp.evaluation.begin(), sp.evaluation.end());
    std::sort(all.begin(), all.end());
    std::vector<std::string> want = names;
    std::sort(want.begin(), want.end());
    CHECK(all == want);
  }

  // repeats differ from each other but reruns are identical
  auto again = refcover::split_protocol(names, 5, 2019);
  for (std::size_t r = 0; r < 5; ++r) {
    CHECK(splits[r].mining == again[r].mining);
    CHECK(splits[r].evaluation == again[r].evaluation);
  }
  bool any_difference = false;
  for (std::size_t r = 1; r < 5; ++r)
    if (splits[r].mining != splits[0].mining) any_difference = true;
  CHECK(any_difference);

  // repeat r of seed s equals repeat 0 of seed s + r
  auto shifted = refcover::split_protocol(names, 1, 2019 + 3);
  CHECK(shifted[0].mining == splits[3].mining);
  CHECK(shifted[0].evaluation == splits[3].evaluation);

  // input order and duplicates do not matter
  std::vector<std::string> shuffled = {"b", "a", "c", "a", "b"};
  auto from_dups = refcover::split_protocol(shuffled, 2, 7);
  CHECK(from_dups[0].mining.size() == 2);  // ceil(3/2) after dedup
  CHECK(from_dups[0].evaluation.size() == 1);

  // odd split: 5 systems -> 3 mining, 2 evaluation
  auto odd = refcover::split_protocol(
      {"s1", "s2", "s3", "s4", "s5"}, 1, 11);
  CHECK(odd[0].mining.size() == 3);
  CHECK(odd[0].evaluation.size() == 2);

  CHECK_THROWS_AS(refcover::split_protocol({"one"}, 1, 0),
                  refcover::data_error);
  CHECK_THROWS_AS(refcover::split_protocol(names, 0, 0),
                  refcover::usage_error);
}

TEST_SUITE_END();
