#include <gtest/gtest.h>

#include <algorithm>
#include <random>
#include <sstream>

#include "hyperroles/error.hpp"
#include "hyperroles/lexicon.hpp"

using namespace hyperroles;

namespace {

const std::vector<std::string> kPad{"valence", "arousal", "dominance"};

Lexicon tiny_pad() {
  Lexicon lex("tiny", LexiconFamily::kPad, kPad);
  lex.add("trust", {0.9, 0.3, 0.6});
  lex.add("Anger", {0.1, 0.8, 0.5});
  lex.add("calm", {0.7, 0.1, 0.4});
  return lex;
}

Lexicon tiny_moral() {
  Lexicon lex("mfd", LexiconFamily::kMoral, {"care", "fairness", "loyalty", "authority", "sanctity"});
  lex.add("help", {1, 0.5, 0, 0, 0});
  lex.add("cheat", {-0.5, -1, 0, 0, 0});
  return lex;
}

}  // namespace

TEST(Tokenize, Examples) {
  EXPECT_EQ(tokenize("I TRUST you!"), (std::vector<std::string>{"i", "trust", "you"}));
  EXPECT_TRUE(tokenize("").empty());
  EXPECT_EQ(tokenize("don't-stop"), (std::vector<std::string>{"don", "t", "stop"}));
  EXPECT_EQ(tokenize("caf\xc3\xa9 ok"), (std::vector<std::string>{"caf\xc3\xa9", "ok"}));
}

TEST(ScoreText, Examples) {
  const auto lex = tiny_pad();
  EXPECT_EQ(score_text("nothing to see", lex), (std::vector<double>{0, 0, 0}));
  EXPECT_EQ(score_text("TRUST", lex), (std::vector<double>{0.9, 0.3, 0.6}));
  const auto two = score_text("trust anger", lex);
  EXPECT_DOUBLE_EQ(two[0], 0.9 + 0.1);
  EXPECT_DOUBLE_EQ(two[1], 0.3 + 0.8);
  EXPECT_DOUBLE_EQ(two[2], 0.6 + 0.5);
  const auto per_token = score_text("trust x y z", lex, TextScoring::kPerTokenMean);
  EXPECT_DOUBLE_EQ(per_token[0], 0.9 / 4);
}

TEST(ScoreText, MoralAveragesMatches) {
  const auto lex = tiny_moral();
  const auto s = score_text("help help cheat and more", lex);
  EXPECT_DOUBLE_EQ(s[0], (1 + 1 - 0.5) / 3);
  EXPECT_DOUBLE_EQ(s[1], (0.5 + 0.5 - 1) / 3);
  for (double x : s) {
    EXPECT_GE(x, -1);
    EXPECT_LE(x, 1);
  }
}

TEST(Lexicon, DimensionCountValidated) {
  EXPECT_THROW(Lexicon("bad", LexiconFamily::kEmotion, kPad), Error);
  std::istringstream wrong("term\ta\tb\nfoo\t1\t2\n");
  EXPECT_THROW(Lexicon::read_tsv(wrong, LexiconFamily::kPad, "x"), Error);
  std::istringstream good("term\tvalence\tarousal\tdominance\r\nHappy\t0.9\t0.5\t0.6\r\n");
  const auto lex = Lexicon::read_tsv(good, LexiconFamily::kPad, "x");
  ASSERT_NE(lex.lookup("happy"), nullptr);
  EXPECT_EQ(*lex.lookup("happy"), (std::vector<double>{0.9, 0.5, 0.6}));
  std::istringstream bad("term\tvalence\tarousal\tdominance\nsad\t0.1\tx\t0.2\n");
  try {
    Lexicon::read_tsv(bad, LexiconFamily::kPad, "x");
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kInputError);
    EXPECT_NE(std::string(e.what()).find("line 2"), std::string::npos);
  }
}

TEST(Profiles, ZeroTextsMapToZero) {
  const auto lex = tiny_pad();
  const std::vector<SubjectTexts> subjects{{"a", {"trust calm"}}, {"b", {"anger"}}, {"silent", {"meh", "ok"}}};
  const auto p = population_profiles(subjects, lex);
  ASSERT_EQ(p.size(), 3u);
  EXPECT_EQ(p[2].values, (std::vector<double>{0, 0, 0}));
  for (const auto& prof : p) {
    for (double x : prof.values) {
      EXPECT_GE(x, 0.0);
      EXPECT_LE(x, 1.0);
    }
  }
  EXPECT_EQ(p[0].values[0], 1.0);  // largest valence
}

TEST(Profiles, EmptyCorpus) {
  const auto lex = tiny_pad();
  try {
    mean_text_scores(std::vector<std::string>{}, lex);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::kEmptyInput);
  }
}

TEST(Profiles, MeanProfile) {
  const std::vector<Profile> members{{"u1", LexiconFamily::kPad, kPad, {0.2, 0.4, 0.6}},
                                     {"u2", LexiconFamily::kPad, kPad, {0.4, 0.0, 0.2}}};
  const auto m = mean_profile("Hero", members);
  EXPECT_EQ(m.subject, "Hero");
  EXPECT_DOUBLE_EQ(m.values[0], 0.3);
  EXPECT_DOUBLE_EQ(m.values[1], 0.2);
  EXPECT_DOUBLE_EQ(m.values[2], 0.4);
}

TEST(LexiconProperty, AdditiveAndPermutationInvariant) {
  const auto lex = tiny_pad();
  const std::vector<std::string> words{"trust", "anger", "calm", "noise", "TRUST"};
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 500; ++trial) {
    std::string a, b;
    for (int i = 0; i < 5; ++i) a += words[rng() % words.size()] + " ";
    for (int i = 0; i < 5; ++i) b += words[rng() % words.size()] + " ";
    const auto sa = score_text(a, lex), sb = score_text(b, lex), sab = score_text(a + " " + b, lex);
    for (std::size_t d = 0; d < 3; ++d) ASSERT_NEAR(sab[d], sa[d] + sb[d], 1e-12);

    std::vector<std::string> texts{a, b, a + b, "calm"};
    auto shuffled = texts;
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    const auto m1 = mean_text_scores(texts, lex), m2 = mean_text_scores(shuffled, lex);
    for (std::size_t d = 0; d < 3; ++d) ASSERT_NEAR(m1[d], m2[d], 1e-12);
  }
}
