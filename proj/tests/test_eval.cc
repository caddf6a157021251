// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasm/eval.hpp"

#include <gtest/gtest.h>

#include "rasm/rng.hpp"
#include "rasm/sim.hpp"
#include "testutil.hpp"

namespace rasm {
namespace {

std::u32string random_text(CounterRng& rng, std::size_t max_len) {
  const std::u32string& pool = basic_arabic_letters();
  std::u32string out;
  const std::size_t len = rng.next_below(max_len + 1);
  for (std::size_t i = 0; i < len; ++i)
    out.push_back(pool[rng.next_below(pool.size())]);
  return out;
}

TEST(Levenshtein, IdenticalSequencesHaveZeroDistance) {
  EXPECT_EQ(levenshtein(std::u32string(U"جمال"), std::u32string(U"جمال")), 0u);
  EXPECT_EQ(levenshtein(std::u32string(), std::u32string()), 0u);
}

TEST(Levenshtein, SpaceSplitCostsOneInsertion) {
  EXPECT_EQ(levenshtein(std::u32string(U"جمال"), std::u32string(U"جما ل")), 1u);
}

TEST(Levenshtein, MatchesRecursiveOracle) {
  CounterRng rng(1000, 0);
  for (int trial = 0; trial < 1000; ++trial) {
    const std::u32string a = random_text(rng, 10);
    const std::u32string b = random_text(rng, 10);
    EXPECT_EQ(levenshtein(a, b), testutil::recursive_levenshtein(a, b));
  }
}

TEST(Levenshtein, MetricProperties) {
  CounterRng rng(1001, 0);
  for (int trial = 0; trial < 300; ++trial) {
    const std::u32string a = random_text(rng, 8);
    const std::u32string b = random_text(rng, 8);
    const std::u32string c = random_text(rng, 8);
    const std::size_t ab = levenshtein(a, b);
    const std::size_t ba = levenshtein(b, a);
    const std::size_t ac = levenshtein(a, c);
    const std::size_t cb = levenshtein(c, b);
    EXPECT_EQ(ab, ba);
    EXPECT_EQ(levenshtein(a, a), 0u);
    EXPECT_LE(ab, ac + cb);
  }
}

TEST(Cer, BasicRates) {
  EXPECT_DOUBLE_EQ(cer(U"جمال", U"جمال"), 0.0);
  EXPECT_DOUBLE_EQ(cer(U"اب", U"اج"), 0.5);
  EXPECT_DOUBLE_EQ(cer(U"جمال", U""), 1.0);
}

TEST(Cer, CanExceedOne) {
  EXPECT_DOUBLE_EQ(cer(U"ا", U"ابج"), 2.0);
}

TEST(Cer, EmptyReferenceRejected) {
  EXPECT_THROW(cer(U"", U"اب"), ContractError);
}

TEST(Cer, DiacriticStripFlag) {
  const std::u32string ref = {U'ج', 0x064E, U'م', U'ا', U'ل'};
  EXPECT_GT(cer(ref, U"جمال"), 0.0);
  EvalConfig cfg;
  cfg.strip_diacritics = true;
  EXPECT_DOUBLE_EQ(cer(ref, U"جمال", cfg), 0.0);
}

TEST(Cer, WhitespaceCollapseFlag) {
  EXPECT_GT(cer(U"جمال  ليل", U"جمال ليل"), 0.0);
  EvalConfig cfg;
  cfg.collapse_whitespace = true;
  EXPECT_DOUBLE_EQ(cer(U"جمال  ليل", U" جمال ليل ", cfg), 0.0);
}

TEST(Wer, CountsWholeWordEdits) {
  EXPECT_DOUBLE_EQ(wer(U"جمال الليل ساحر", U"جمال الليل ساحر"), 0.0);
  EXPECT_DOUBLE_EQ(wer(U"جمال الليل ساحر", U"حمال الليل ساحر"), 1.0 / 3.0);
  EXPECT_DOUBLE_EQ(wer(U"جمال الليل", U""), 1.0);
  EXPECT_THROW(wer(U"   ", U"اب"), ContractError);
}

TEST(EvaluateCorpus, AllIdenticalPairsScoreZero) {
  const std::vector<std::pair<std::u32string, std::u32string>> pairs = {
      {U"جمال", U"جمال"}, {U"ليل ساحر", U"ليل ساحر"}};
  const EvalReport report = evaluate_corpus(pairs);
  EXPECT_DOUBLE_EQ(report.corpus_cer, 0.0);
  EXPECT_DOUBLE_EQ(report.corpus_wer, 0.0);
}

TEST(EvaluateCorpus, AggregatesByTotalLength) {
  // Distances 1 and 3 over reference lengths 10 and 10 -> 4/20.
  const std::u32string ref1 = U"ابجدهوزحطي";
  std::u32string hyp1 = ref1;
  hyp1[0] = U'ل';
  const std::u32string ref2 = U"ابجدهوزحطي";
  std::u32string hyp2 = ref2;
  hyp2[1] = U'ل';
  hyp2[2] = U'ل';
  hyp2[3] = U'ل';
  const EvalReport report = evaluate_corpus({{ref1, hyp1}, {ref2, hyp2}});
  EXPECT_DOUBLE_EQ(report.corpus_cer, 0.2);
}

TEST(EvaluateCorpus, SinglePairEqualsLineRate) {
  const EvalReport report = evaluate_corpus({{U"اب", U"اج"}});
  EXPECT_DOUBLE_EQ(report.corpus_cer, cer(U"اب", U"اج"));
}

TEST(EvaluateCorpus, LengthWeightedNotMeanOfLineRates) {
  // Line rates are 0.5 and 0.0; their mean is 0.25 but the corpus rate is
  // total distance / total length = 1/10.
  const EvalReport report =
      evaluate_corpus({{U"اب", U"اج"}, {U"ابجدهوزح", U"ابجدهوزح"}});
  EXPECT_DOUBLE_EQ(report.corpus_cer, 0.1);
}

TEST(EvaluateCorpus, EmptyReferenceLineExcludedAndFlagged) {
  const EvalReport report =
      evaluate_corpus({{U"", U"اب"}, {U"اب", U"اب"}});
  EXPECT_EQ(report.excluded_lines, 1u);
  ASSERT_EQ(report.lines.size(), 2u);
  EXPECT_TRUE(report.lines[0].excluded);
  EXPECT_FALSE(report.lines[1].excluded);
  EXPECT_DOUBLE_EQ(report.corpus_cer, 0.0);
}

TEST(EvaluateCorpus, EmptyListRejected) {
  EXPECT_THROW(evaluate_corpus({}), ContractError);
}

TEST(EvaluateCorpus, TsvHasHeaderAndOneRowPerLine) {
  const EvalReport report =
      evaluate_corpus({{U"اب", U"اج"}, {U"", U"x"}, {U"اب", U"اب"}});
  const std::string tsv = format_report_tsv(report);
  std::size_t newlines = 0;
  for (char c : tsv)
    if (c == '\n') ++newlines;
  EXPECT_EQ(newlines, 4u);  // header + three rows
  EXPECT_EQ(tsv.rfind("line\t", 0), 0u);
}

}  // namespace
}  // namespace rasm
