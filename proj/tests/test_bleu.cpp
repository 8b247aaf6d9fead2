#include <doctest.h>

#include <cmath>
#include <fstream>

#include <nlohmann/json.hpp>

#include "refcover/bleu.hpp"
#include "refcover/common.hpp"
#include "refcover/io.hpp"
#include "refcover/rng.hpp"
#include "refcover/text.hpp"

using namespace refcover;
using nlohmann::json;

namespace {

const std::string kData = REFCOVER_TEST_DATA;

std::vector<Tokens> tokenize_file(const std::string& name) {
  std::vector<Tokens> out;
  for (const auto& line : read_lines(kData + "/" + name))
    out.push_back(tokenize_v13a(line));
  return out;
}

json load_expected() {
  std::ifstream in(kData + "/bleu_expected.json");
  REQUIRE(in);
  return json::parse(in);
}

}  // namespace

TEST_SUITE_BEGIN("bleu");

TEST_CASE("brevity penalty") {
  CHECK(brevity_penalty(10, 5) == 1.0);
  CHECK(brevity_penalty(10, 10) == 1.0);
  CHECK(brevity_penalty(5, 10) == doctest::Approx(std::exp(-1.0)));
  CHECK_THROWS_AS(brevity_penalty(0, 10), data_error);
}

TEST_CASE("effective reference length") {
  CHECK(effective_ref_length(10, {8, 11, 14}) == 11);
  // tie between 9 and 11 at distance 1: shorter wins
  CHECK(effective_ref_length(10, {9, 11}) == 9);
  CHECK(effective_ref_length(10, {11, 9}) == 9);
  CHECK(effective_ref_length(10, {8, 11, 14}, RefLengthPolicy::shortest) ==
        8);
  CHECK_THROWS_AS(effective_ref_length(10, {}), data_error);
}

TEST_CASE("clipping propagates into corpus precisions") {
  std::vector<Tokens> hyp = {{"the", "the", "the", "the"}};
  std::vector<std::vector<Tokens>> one_ref = {{{"the", "cat", "sat"}}};
  BleuScore s = corpus_bleu(hyp, one_ref);
  CHECK(s.precisions[0] == doctest::Approx(0.25));
  CHECK(s.precisions[1] == 0.0);
  CHECK(s.score == 0.0);  // unsmoothed zero precision zeroes the product

  std::vector<std::vector<Tokens>> two_refs = {
      {{"the", "cat", "sat"}, {"the", "the", "cat"}}};
  BleuScore s2 = corpus_bleu(hyp, two_refs);
  CHECK(s2.precisions[0] == doctest::Approx(0.5));
  CHECK(s2.precisions[1] == doctest::Approx(1.0 / 3.0));
}

TEST_CASE("identical hypothesis and reference gives BLEU 1") {
  Tokens seg = tokenize_v13a("a perfectly normal sentence of eight words");
  BleuScore s = corpus_bleu({seg}, {{seg}});
  CHECK(s.score == doctest::Approx(1.0));
  CHECK(s.bp == 1.0);
}

TEST_CASE("corpus accumulation differs from averaging") {
  // one long perfect segment and one short bad one: statistics pool before
  // division, so the result is not the mean of per-segment scores
  Tokens good = {"a", "b", "c", "d", "e", "f", "g", "h"};
  Tokens bad_hyp = {"x", "y"};
  Tokens bad_ref = {"p", "q"};
  BleuScore s = corpus_bleu({good, bad_hyp}, {{good}, {bad_ref}});
  CHECK(s.match[0] == 8);
  CHECK(s.total[0] == 10);
  CHECK(s.match[3] == 5);
  CHECK(s.total[3] == 5);
  CHECK(s.score > 0.0);
}

TEST_CASE("weights validate") {
  Tokens seg = {"a", "b", "c", "d", "e"};
  BleuConfig bad;
  bad.weights = {0.5, 0.5, 0.5, 0.5};
  CHECK_THROWS_AS(corpus_bleu({seg}, {{seg}}, bad), usage_error);
  BleuConfig good;
  good.weights = {0.25, 0.25, 0.25, 0.25};
  CHECK(corpus_bleu({seg}, {{seg}}, good).score == doctest::Approx(1.0));
}

TEST_CASE("input shape errors") {
  Tokens seg = {"a"};
  CHECK_THROWS_AS(corpus_bleu({}, {}), data_error);
  CHECK_THROWS_AS(corpus_bleu({seg}, {}), data_error);
  CHECK_THROWS_AS(corpus_bleu({seg}, {{}}), data_error);
  CHECK_THROWS_AS(sentence_bleu(seg, {}), data_error);
}

TEST_CASE("sentence smoothing halves at each zero order") {
  // hyp/ref share unigrams only; denominators 4,3,2,1
  Tokens hyp = {"a", "b", "c", "d"};
  Tokens ref = {"a", "c", "b", "d"};
  BleuScore s = sentence_bleu(hyp, {ref});
  CHECK(s.precisions[0] == doctest::Approx(1.0));
  CHECK(s.precisions[1] == doctest::Approx(1.0 / (2.0 * 3.0)));
  CHECK(s.precisions[2] == doctest::Approx(1.0 / (4.0 * 2.0)));
  CHECK(s.precisions[3] == doctest::Approx(1.0 / (8.0 * 1.0)));
  double expected = std::exp((std::log(s.precisions[0]) +
                              std::log(s.precisions[1]) +
                              std::log(s.precisions[2]) +
                              std::log(s.precisions[3])) /
                             4.0);
  CHECK(s.score == doctest::Approx(expected));
}

TEST_CASE("short hypotheses drop empty orders") {
  Tokens hyp = {"a", "b"};
  Tokens ref = {"a", "b"};
  BleuScore s = sentence_bleu(hyp, {ref});
  // only orders 1..2 exist; both perfect
  CHECK(s.score == doctest::Approx(1.0));

  BleuScore one = sentence_bleu({"a"}, {Tokens{"a"}});
  CHECK(one.score == doctest::Approx(1.0));
}

TEST_CASE("empty hypothesis is flagged, not fatal") {
  BleuScore s = sentence_bleu({}, {Tokens{"a", "b"}});
  CHECK(s.score == 0.0);
  CHECK(s.empty_hypothesis);
}

TEST_CASE("corpus BLEU matches the frozen reference pipeline") {
  std::vector<Tokens> hyp = tokenize_file("fixture_hyp.raw");
  std::vector<Tokens> ref_a = tokenize_file("fixture_ref_a.raw");
  std::vector<Tokens> ref_b = tokenize_file("fixture_ref_b.raw");
  json expected = load_expected();

  std::vector<std::vector<Tokens>> one, two;
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    one.push_back({ref_a[i]});
    two.push_back({ref_a[i], ref_b[i]});
  }

  const json& e1 = expected["corpus_single_ref"];
  BleuScore s1 = corpus_bleu(hyp, one);
  CHECK(s1.score_x100() ==
        doctest::Approx(e1["score"].get<double>()).epsilon(1e-9));
  CHECK(s1.bp == doctest::Approx(e1["bp"].get<double>()).epsilon(1e-12));
  CHECK(s1.hyp_len == e1["sys_len"].get<long>());
  CHECK(s1.ref_len == e1["ref_len"].get<long>());
  for (int n = 0; n < 4; ++n) {
    CHECK(s1.match[n] == e1["match"][n].get<long>());
    CHECK(s1.total[n] == e1["total"][n].get<long>());
    CHECK(s1.precisions[n] * 100.0 ==
          doctest::Approx(e1["precisions"][n].get<double>()).epsilon(1e-9));
  }

  const json& e2 = expected["corpus_two_refs"];
  BleuScore s2 = corpus_bleu(hyp, two);
  CHECK(s2.score_x100() ==
        doctest::Approx(e2["score"].get<double>()).epsilon(1e-9));
  CHECK(s2.ref_len == e2["ref_len"].get<long>());
}

TEST_CASE("sentence BLEU matches the frozen reference pipeline") {
  std::vector<Tokens> hyp = tokenize_file("fixture_hyp.raw");
  std::vector<Tokens> ref_a = tokenize_file("fixture_ref_a.raw");
  std::vector<Tokens> ref_b = tokenize_file("fixture_ref_b.raw");
  json expected = load_expected();
  const json& one = expected["sentence_single_ref"];
  const json& two = expected["sentence_two_refs"];
  REQUIRE(one.size() == hyp.size());
  for (std::size_t i = 0; i < hyp.size(); ++i) {
    CAPTURE(i);
    BleuScore s1 = sentence_bleu(hyp[i], {ref_a[i]});
    CHECK(s1.score_x100() ==
          doctest::Approx(one[i].get<double>()).epsilon(1e-9));
    BleuScore s2 = sentence_bleu(hyp[i], {ref_a[i], ref_b[i]});
    CHECK(s2.score_x100() ==
          doctest::Approx(two[i].get<double>()).epsilon(1e-9));
  }
}

TEST_CASE("adding references never lowers corpus BLEU") {
  // quick version of the acceptance property on a small synthetic corpus
  Rng rng(99);
  std::vector<std::string> vocab = {"the", "a",    "cat", "dog", "sat",
                                    "ran", "fast", "home", "by",  "now"};
  auto sentence = [&](std::size_t len) {
    Tokens t;
    for (std::size_t i = 0; i < len; ++i)
      t.push_back(vocab[rng.below(vocab.size())]);
    return t;
  };
  std::vector<Tokens> hyps;
  std::vector<std::vector<Tokens>> refs(200);
  for (std::size_t s = 0; s < 200; ++s) {
    hyps.push_back(sentence(5 + rng.below(10)));
    // equal lengths within a segment keep the closest-length choice stable,
    // so clipping is the only moving part and monotonicity is guaranteed
    std::size_t ref_len = 5 + rng.below(10);
    for (int r = 0; r < 3; ++r) refs[s].push_back(sentence(ref_len));
  }
  double prev = -1.0;
  for (std::size_t k = 1; k <= 3; ++k) {
    std::vector<std::vector<Tokens>> subset(200);
    for (std::size_t s = 0; s < 200; ++s)
      subset[s].assign(refs[s].begin(), refs[s].begin() + k);
    double score = corpus_bleu(hyps, subset).score;
    CHECK(score >= prev);
    prev = score;
  }
}

TEST_SUITE_END();
