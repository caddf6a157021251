// Copyright 2026 The Rasm Authors
// SPDX-License-Identifier: Apache-2.0

#include "rasm/decode.hpp"

#include <gtest/gtest.h>

#include <cmath>

#include "rasm/lexicon.hpp"
#include "rasm/rng.hpp"
#include "rasm/sim.hpp"
#include "testutil.hpp"

namespace rasm {
namespace {

// Word chars, one space, EOS. Sorted so index order equals code-point order.
Alphabet small_alphabet(std::u32string word_chars) {
  std::sort(word_chars.begin(), word_chars.end());
  return Alphabet(word_chars, U" ", Alphabet::kDefaultEos);
}

// One-hot emissions spelling `text` followed by EOS.
EmissionMatrix one_hot(const std::u32string& text, const Alphabet& a) {
  std::vector<std::vector<double>> rows;
  for (char32_t cp : text) {
    std::vector<double> row(a.size(), 0.0);
    row[*a.index_of(cp)] = 1.0;
    rows.push_back(std::move(row));
  }
  std::vector<double> eos_row(a.size(), 0.0);
  eos_row[a.eos_index()] = 1.0;
  rows.push_back(std::move(eos_row));
  return EmissionMatrix::from_probs(rows);
}

TEST(GreedyDecode, OneHotRecoversTextWithScoreZero) {
  const Alphabet a = small_alphabet(U"اجلم");
  const DecodeResult r = greedy_decode(one_hot(U"جمال", a), a);
  EXPECT_EQ(r.text, U"جمال");
  EXPECT_DOUBLE_EQ(r.score, 0.0);
}

TEST(GreedyDecode, TieGoesToLowestIndex) {
  const Alphabet a = small_alphabet(U"ابجدل");  // 5 word chars + space + EOS
  std::vector<double> row(a.size(), 0.0);
  row[2] = 0.5;
  row[5] = 0.5;
  const EmissionMatrix m = EmissionMatrix::from_probs({row});
  const DecodeResult r = greedy_decode(m, a);
  ASSERT_EQ(r.steps.size(), 1u);
  EXPECT_EQ(r.steps[0], 2u);
}

TEST(GreedyDecode, MatchesRowArgmaxOracle) {
  const Alphabet a = small_alphabet(U"ابجدهو");
  CounterRng rng(100, 0);
  for (int trial = 0; trial < 20; ++trial) {
    const EmissionMatrix m =
        testutil::random_emissions(rng, 3 + trial % 6, static_cast<std::uint32_t>(a.size()));
    const DecodeResult r = greedy_decode(m, a);
    std::u32string expect_text;
    double expect_score = 0.0;
    for (std::uint32_t t = 0; t < m.timesteps(); ++t) {
      std::uint32_t best = 0;
      for (std::uint32_t v = 1; v < m.symbols(); ++v)
        if (m.log_prob(t, v) > m.log_prob(t, best)) best = v;
      expect_score += m.log_prob(t, best);
      if (a.is_eos(best)) break;
      expect_text.push_back(a.symbol(best));
    }
    EXPECT_EQ(r.text, expect_text);
    EXPECT_DOUBLE_EQ(r.score, expect_score);
  }
}

TEST(GreedyDecode, StopsAtEos) {
  const Alphabet a = small_alphabet(U"اب");
  std::vector<std::vector<double>> rows = {
      {0.9, 0.05, 0.03, 0.02},
      {0.01, 0.01, 0.01, 0.97},  // EOS
      {0.9, 0.05, 0.03, 0.02},
  };
  const DecodeResult r = greedy_decode(EmissionMatrix::from_probs(rows), a);
  EXPECT_EQ(r.text, U"ا");
  EXPECT_EQ(r.steps.size(), 2u);  // letter + EOS
}

TEST(GreedyDecode, RejectsMismatchedAlphabet) {
  const Alphabet a = small_alphabet(U"اب");
  const EmissionMatrix m = EmissionMatrix::from_probs({{0.5, 0.5}});
  EXPECT_THROW(greedy_decode(m, a), DimensionError);
}

TEST(BeamSearch, WidthOneEqualsGreedy) {
  const Alphabet a = small_alphabet(U"ابجدلمه");
  CounterRng rng(200, 0);
  DecodeConfig cfg;
  cfg.beam_width = 1;
  cfg.dbs_groups = 1;
  for (int trial = 0; trial < 1000; ++trial) {
    const EmissionMatrix m = testutil::random_emissions(
        rng, 2 + trial % 8, static_cast<std::uint32_t>(a.size()));
    const DecodeResult greedy = greedy_decode(m, a);
    const std::vector<DecodeResult> beam = beam_search(m, a, cfg);
    ASSERT_EQ(beam.size(), 1u);
    EXPECT_EQ(beam[0].steps, greedy.steps);
    EXPECT_EQ(beam[0].text, greedy.text);
    EXPECT_DOUBLE_EQ(beam[0].score, greedy.score);
  }
}

TEST(BeamSearch, MatchesExhaustiveEnumerationWhenWide) {
  const Alphabet a = small_alphabet(U"ابجده");
  CounterRng rng(300, 0);
  DecodeConfig cfg;
  cfg.dbs_groups = 1;
  for (int trial = 0; trial < 40; ++trial) {
    const std::uint32_t t = 2 + trial % 3;
    const EmissionMatrix m =
        testutil::random_emissions(rng, t, static_cast<std::uint32_t>(a.size()));
    std::uint32_t width = 1;
    for (std::uint32_t i = 0; i < t; ++i) width *= static_cast<std::uint32_t>(a.size());
    cfg.beam_width = width;
    const auto best = beam_search(m, a, cfg).front();
    const auto oracle = testutil::exhaustive_best(m, a);
    EXPECT_EQ(best.steps, oracle.steps);
    EXPECT_DOUBLE_EQ(best.score, oracle.score);
  }
}

TEST(BeamSearch, OneHotForcesSingleString) {
  const Alphabet a = small_alphabet(U"اجلم");
  const EmissionMatrix m = one_hot(U"جمل", a);
  for (std::uint32_t bw : {1u, 2u, 8u, 64u}) {
    DecodeConfig cfg;
    cfg.beam_width = bw;
    cfg.dbs_groups = 1;
    const auto best = beam_search(m, a, cfg).front();
    EXPECT_EQ(best.text, U"جمل");
    EXPECT_DOUBLE_EQ(best.score, 0.0);
  }
}

TEST(BeamSearch, RejectsZeroWidth) {
  const Alphabet a = small_alphabet(U"اب");
  DecodeConfig cfg;
  cfg.beam_width = 0;
  EXPECT_THROW(beam_search(one_hot(U"ا", a), a, cfg), ConfigError);
}

TEST(BeamSearch, TopScoreNonDecreasingInWidth) {
  const Alphabet a = small_alphabet(U"ابجدلم");
  CounterRng rng(400, 0);
  for (int trial = 0; trial < 60; ++trial) {
    // Mix in EOS-heavy rows so early stopping competes with long paths.
    const std::uint32_t t = 2 + trial % 5;
    std::vector<std::vector<double>> rows;
    for (std::uint32_t i = 0; i < t; ++i) {
      std::vector<double> row(a.size());
      double sum = 0.0;
      for (double& p : row) sum += (p = rng.next_double() + 1e-9);
      if (rng.next_bool(0.3)) {
        row[a.eos_index()] += sum;  // strong EOS pull
        sum *= 2.0;
      }
      for (double& p : row) p /= sum;
      rows.push_back(std::move(row));
    }
    const EmissionMatrix m = EmissionMatrix::from_probs(rows);
    double prev = -std::numeric_limits<double>::infinity();
    for (std::uint32_t bw : {1u, 2u, 4u, 8u, 16u, 32u, 64u}) {
      DecodeConfig cfg;
      cfg.beam_width = bw;
      cfg.dbs_groups = 1;
      const double top = beam_search(m, a, cfg).front().score;
      EXPECT_GE(top, prev - 1e-12) << "bw=" << bw;
      prev = std::max(prev, top);
    }
  }
}

TEST(BeamSearch, DeterministicAndScoreRecomputable) {
  const Alphabet a = small_alphabet(U"ابجدل");
  CounterRng rng(500, 0);
  DecodeConfig cfg;
  cfg.beam_width = 8;
  cfg.dbs_groups = 1;
  for (int trial = 0; trial < 20; ++trial) {
    const EmissionMatrix m =
        testutil::random_emissions(rng, 6, static_cast<std::uint32_t>(a.size()));
    const auto first = beam_search(m, a, cfg);
    const auto second = beam_search(m, a, cfg);
    ASSERT_EQ(first.size(), second.size());
    for (std::size_t i = 0; i < first.size(); ++i) {
      EXPECT_EQ(first[i].steps, second[i].steps);
      EXPECT_EQ(first[i].score, second[i].score);
      // Score equals an independent recomputation over the chosen steps.
      double recomputed = 0.0;
      for (std::size_t s = 0; s < first[i].steps.size(); ++s)
        recomputed += m.log_prob(static_cast<std::uint32_t>(s), first[i].steps[s]);
      EXPECT_DOUBLE_EQ(first[i].score, recomputed);
    }
  }
}

TEST(DiverseBeamSearch, SingleGroupEqualsBeamSearch) {
  const Alphabet a = small_alphabet(U"ابجدل");
  CounterRng rng(600, 0);
  DecodeConfig cfg;
  cfg.beam_width = 6;
  cfg.dbs_groups = 1;
  cfg.dbs_penalty = 0.7;
  for (int trial = 0; trial < 25; ++trial) {
    const EmissionMatrix m =
        testutil::random_emissions(rng, 5, static_cast<std::uint32_t>(a.size()));
    const auto bs = beam_search(m, a, cfg);
    const auto dbs = diverse_beam_search(m, a, cfg);
    ASSERT_EQ(bs.size(), dbs.size());
    for (std::size_t i = 0; i < bs.size(); ++i) {
      EXPECT_EQ(bs[i].steps, dbs[i].steps);
      EXPECT_DOUBLE_EQ(bs[i].score, dbs[i].score);
    }
  }
}

TEST(DiverseBeamSearch, ZeroPenaltyGroupsDecodeIndependently) {
  // With no penalty each group is a plain beam search of the group width, so
  // the best group result equals beam_search at that width.
  const Alphabet a = small_alphabet(U"ابجدل");
  CounterRng rng(610, 0);
  DecodeConfig dbs_cfg;
  dbs_cfg.beam_width = 8;
  dbs_cfg.dbs_groups = 2;
  dbs_cfg.dbs_penalty = 0.0;
  DecodeConfig bs_cfg;
  bs_cfg.beam_width = 4;  // the group width
  bs_cfg.dbs_groups = 1;
  for (int trial = 0; trial < 25; ++trial) {
    const EmissionMatrix m =
        testutil::random_emissions(rng, 5, static_cast<std::uint32_t>(a.size()));
    const auto dbs = diverse_beam_search(m, a, dbs_cfg);
    const auto bs = beam_search(m, a, bs_cfg);
    EXPECT_EQ(dbs.front().steps, bs.front().steps);
    EXPECT_DOUBLE_EQ(dbs.front().score, bs.front().score);
  }
}

TEST(DiverseBeamSearch, LargePenaltyForcesDisjointFirstSymbols) {
  const Alphabet a = small_alphabet(U"اب");
  // Two near-tied symbols at each step.
  std::vector<std::vector<double>> rows = {
      {0.49, 0.47, 0.02, 0.02},
      {0.49, 0.47, 0.02, 0.02},
  };
  const EmissionMatrix m = EmissionMatrix::from_probs(rows);
  DecodeConfig cfg;
  cfg.beam_width = 2;
  cfg.dbs_groups = 2;
  cfg.dbs_penalty = 100.0;
  const auto results = diverse_beam_search(m, a, cfg);
  ASSERT_EQ(results.size(), 2u);
  EXPECT_NE(results[0].steps[0], results[1].steps[0]);
}

TEST(DiverseBeamSearch, OneHotForcesAllGroupsToSameString) {
  const Alphabet a = small_alphabet(U"اجلم");
  const EmissionMatrix m = one_hot(U"جمل", a);
  DecodeConfig cfg;
  cfg.beam_width = 4;
  cfg.dbs_groups = 4;
  cfg.dbs_penalty = 5.0;
  const auto results = diverse_beam_search(m, a, cfg);
  ASSERT_EQ(results.size(), 4u);
  for (const auto& r : results) EXPECT_EQ(r.text, U"جمل");
}

TEST(DiverseBeamSearch, RejectsIndivisibleGroups) {
  const Alphabet a = small_alphabet(U"اب");
  DecodeConfig cfg;
  cfg.beam_width = 4;
  cfg.dbs_groups = 3;
  EXPECT_THROW(diverse_beam_search(one_hot(U"ا", a), a, cfg), ConfigError);
}

// --- word beam search ---

struct WbsFixture {
  Alphabet alphabet = small_alphabet(U"ابجحلمنو");
  Lexicon lexicon;
  WbsFixture() { lexicon = build_lexicon(utf8_encode(U"لان لام لحم لحن جمال و")); }
};

TEST(WordBeamSearch, LexiconWordPassesUnchanged) {
  WbsFixture fx;
  const PrefixTree tree(fx.lexicon);
  DecodeConfig cfg;
  cfg.beam_width = 8;
  const DecodeResult r =
      word_beam_search(one_hot(U"جمال", fx.alphabet), fx.alphabet, tree, cfg);
  EXPECT_EQ(r.text, U"جمال");
  EXPECT_FALSE(r.unconstrained);
  EXPECT_DOUBLE_EQ(r.score, 0.0);
}

TEST(WordBeamSearch, SecondSymbolForcedIntoTreeChildren) {
  WbsFixture fx;
  const PrefixTree tree(fx.lexicon);
  const Alphabet& a = fx.alphabet;
  // Row 0 prefers lam; row 1 prefers meem, but only alef/hah continue a word
  // from the lam node, so the mass on meem is pruned and alef (likelier than
  // hah) wins. Rows 2..3 finish the word لان.
  auto row = [&](std::initializer_list<std::pair<char32_t, double>> entries) {
    std::vector<double> r(a.size(), 0.0);
    double rest = 1.0;
    for (const auto& [cp, p] : entries) {
      r[*a.index_of(cp)] = p;
      rest -= p;
    }
    // spread remainder on EOS to keep rows normalized
    r[a.eos_index()] += rest;
    return r;
  };
  std::vector<std::vector<double>> rows = {
      row({{U'ل', 0.9}, {U'ا', 0.05}}),
      row({{U'م', 0.5}, {U'ا', 0.3}, {U'ح', 0.2}}),
      row({{U'ن', 0.8}, {U'ا', 0.1}}),
  };
  std::vector<double> eos_row(a.size(), 0.0);
  eos_row[a.eos_index()] = 1.0;
  rows.push_back(eos_row);
  DecodeConfig cfg;
  cfg.beam_width = 4;
  const DecodeResult r = word_beam_search(EmissionMatrix::from_probs(rows), a, tree, cfg);
  ASSERT_GE(r.text.size(), 2u);
  EXPECT_EQ(r.text[1], U'ا');
  EXPECT_EQ(r.text, U"لان");
  EXPECT_FALSE(r.unconstrained);
}

TEST(WordBeamSearch, RecoversSpuriousSpaceSplit) {
  // Emissions lean toward "جما ل" but the lexicon only closes جمال, so the
  // space mid-word is pruned and the dictionary reading survives.
  WbsFixture fx;
  const PrefixTree tree(fx.lexicon);
  const Alphabet& a = fx.alphabet;
  std::vector<std::vector<double>> rows;
  auto push_row = [&](char32_t cp, double p, char32_t alt, double q) {
    std::vector<double> r(a.size(), 0.0);
    r[*a.index_of(cp)] = p;
    if (alt) r[*a.index_of(alt)] = q;
    double sum = 0.0;
    for (double x : r) sum += x;
    r[a.eos_index()] += 1.0 - sum;
    rows.push_back(std::move(r));
  };
  push_row(U'ج', 0.95, 0, 0.0);
  push_row(U'م', 0.95, 0, 0.0);
  push_row(U'ا', 0.95, 0, 0.0);
  push_row(U' ', 0.6, U'ل', 0.4);  // spurious space beats lam
  std::vector<double> eos_row(a.size(), 0.0);
  eos_row[a.eos_index()] = 1.0;
  rows.push_back(eos_row);
  const EmissionMatrix m = EmissionMatrix::from_probs(rows);

  const DecodeResult greedy = greedy_decode(m, a);
  EXPECT_EQ(greedy.text, U"جما ");  // the raw model splits the word

  DecodeConfig cfg;
  cfg.beam_width = 8;
  const DecodeResult wbs = word_beam_search(m, a, tree, cfg);
  EXPECT_EQ(wbs.text, U"جمال");
  EXPECT_FALSE(wbs.unconstrained);
}

TEST(WordBeamSearch, DiacriticsAdvanceTextButNotCursor) {
  WbsFixture fx;
  Alphabet a(U"ابجحلمنوَ", U" ", Alphabet::kDefaultEos);  // adds fatha
  const PrefixTree tree(fx.lexicon);
  const std::u32string diacritized = {U'ج', 0x064E, U'م', U'ا', U'ل'};
  DecodeConfig cfg;
  cfg.beam_width = 8;
  const DecodeResult r = word_beam_search(one_hot(diacritized, a), a, tree, cfg);
  EXPECT_EQ(r.text, diacritized);
  EXPECT_FALSE(r.unconstrained);
  EXPECT_EQ(normalize_token(r.text, fx.lexicon.normalize_config()), U"جمال");
}

TEST(WordBeamSearch, MidWordTerminationFallsBackUnconstrained) {
  const Lexicon lex = build_lexicon(utf8_encode(U"ابج"));
  const PrefixTree tree(lex);
  const Alphabet a = small_alphabet(U"ابج");
  // Two timesteps only: every surviving beam is mid-word at T.
  std::vector<std::vector<double>> rows = {
      {0.97, 0.01, 0.01, 0.005, 0.005},
      {0.01, 0.97, 0.01, 0.005, 0.005},
  };
  DecodeConfig cfg;
  cfg.beam_width = 1;
  const DecodeResult r =
      word_beam_search(EmissionMatrix::from_probs(rows), a, tree, cfg);
  EXPECT_TRUE(r.unconstrained);
  EXPECT_EQ(r.text, U"اب");
}

TEST(WordBeamSearch, LexiconClosureOnNoisyBatch) {
  const testutil::SyntheticCorpus corpus = testutil::make_corpus(777, 120, 80);
  const Lexicon lex = build_lexicon(corpus.text);
  const PrefixTree tree(lex);
  const Alphabet a = Alphabet::covering(utf8_decode(corpus.text));
  NoiseConfig noise;  // defaults: dotting confusions + space splits
  DecodeConfig cfg;
  cfg.beam_width = 8;
  int unconstrained = 0;
  for (std::size_t i = 0; i < 50; ++i) {
    noise.seed = 9000 + i;
    const std::u32string& line = corpus.sentences[i % corpus.sentences.size()];
    const EmissionMatrix m = synth_emissions(line, a, noise);
    const DecodeResult r = word_beam_search(m, a, tree, cfg);
    if (r.unconstrained) {
      ++unconstrained;
      continue;
    }
    for (const std::u32string& run : word_tokens(r.text)) {
      const std::u32string norm = normalize_token(run, lex.normalize_config());
      EXPECT_TRUE(norm.empty() || lex.contains(norm))
          << "non-lexicon run " << utf8_encode(run);
    }
  }
  EXPECT_EQ(unconstrained, 0);
}

TEST(WordBeamSearch, MaxStepsCapsConsumption) {
  WbsFixture fx;
  const PrefixTree tree(fx.lexicon);
  DecodeConfig cfg;
  cfg.beam_width = 4;
  cfg.max_steps = 2;
  // جمال one-hot, but only two rows may be consumed; جم is mid-word and not
  // a word end, so the decoder falls back and flags the result.
  const DecodeResult r =
      word_beam_search(one_hot(U"جمال", fx.alphabet), fx.alphabet, tree, cfg);
  EXPECT_LE(r.steps.size(), 2u);
}

}  // namespace
}  // namespace rasm
