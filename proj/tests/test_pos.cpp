#include <gtest/gtest.h>

#include "profiler/error.hpp"
#include "profiler/normalizer.hpp"
#include "profiler/pos.hpp"

using namespace profiler;
using namespace profiler::pos;

namespace {

std::string joined(const PosStream& s) {
  std::string out;
  for (const auto& t : s) out += (out.empty() ? "" : " ") + t;
  return out;
}

}  // namespace

TEST(ReduceTag, FirstLevelCategory) {
  EXPECT_EQ(reduce_tag("NCFS000"), "N");
  EXPECT_EQ(reduce_tag("VMIP3S0"), "V");
  EXPECT_EQ(reduce_tag("aq0cs0"), "A");
  EXPECT_EQ(reduce_tag("REF@USERNAME"), "REF@USERNAME");
  EXPECT_EQ(reduce_tag("REF#LINK"), "REF#LINK");
  EXPECT_EQ(reduce_tag("$,"), "F");
  EXPECT_THROW(reduce_tag(""), DataError);
}

TEST(ReduceTag, Idempotent) {
  for (const char* t : {"NCFS000", "VMIP3S0", "Fp", "Z", "REF#HASHTAG", "dt", ".", "12"})
    EXPECT_EQ(reduce_tag(reduce_tag(t)), reduce_tag(t));
}

TEST(Relabel, WorkedTweetStream) {
  // Tagger output over the normalized tweet; the quote marks are not tokens.
  const std::vector<TaggedToken> tokens = {
      {"I", "PP1CSN00"}, {"was", "VSIS3S0"}, {"just", "RG"}, {"watching", "VMG0000"},
      {"update", "NCMS000"}, {"10.", "Z"}, {"@us", "NP00000"}, {"htt", "NCMS000"}};
  EXPECT_EQ(joined(relabel(tokens)), "P V R V N Z REF@USERNAME REF#LINK");
}

TEST(Relabel, CasesAndLengthPreservation) {
  EXPECT_TRUE(relabel({}).empty());
  EXPECT_EQ(joined(relabel({{"#tbt", ""}, {"great", "AQ0CS0"}})), "REF#HASHTAG A");
  EXPECT_EQ(joined(relabel({{"#", "Fz"}, {"#!", "Fz"}})), "F F");
  EXPECT_THROW(relabel({{"word", ""}}), DataError);
  const std::vector<TaggedToken> toks = {{"a", "DA0"}, {"@us", "x"}, {"b", "NC"}, {"#x1", "NC"}};
  const auto out = relabel(toks);
  ASSERT_EQ(out.size(), toks.size());
  for (size_t i = 0; i < toks.size(); ++i) {
    const bool special = toks[i].surface == "@us" || toks[i].surface == "#x1";
    EXPECT_EQ(is_ref_tag(out[i]), special);
  }
}

TEST(TaggedFile, Parsing) {
  auto one = parse_tagged("I\tPRP\nrun\tVBP\n", "t");
  ASSERT_EQ(one.size(), 1u);
  EXPECT_EQ(one[0].size(), 2u);
  auto two = parse_tagged("I\tPRP\n\nrun\tVBP\n\n", "t");
  ASSERT_EQ(two.size(), 2u);
  EXPECT_EQ(two[1][0].surface, "run");
  try {
    parse_tagged("I\tPRP\nabc\n", "file.pos");
    FAIL();
  } catch (const DataError& e) {
    EXPECT_NE(std::string(e.what()).find("file.pos:2"), std::string::npos);
  }
  EXPECT_THROW(parse_tagged("a\tb\tc\n", "t"), DataError);
}

TEST(TaggedFile, FormatRoundTrip) {
  const std::vector<std::vector<TaggedToken>> docs = {{{"a", "DA"}, {"b", "NC"}}, {}, {{"c", "Z"}}};
  const auto back = parse_tagged(format_tagged(docs), "t");
  EXPECT_EQ(back, docs);
}

TEST(Fallback, Rules) {
  const Lexicon lex = {{"i", "P"}, {"run", "V"}};
  auto tags = [&](std::vector<std::string> toks) {
    std::string out;
    for (const auto& t : fallback_tag(toks, lex)) out += t.fine_tag;
    return out;
  };
  EXPECT_EQ(tags({"I", "run"}), "PV");
  EXPECT_EQ(tags({"123"}), "Z");
  EXPECT_EQ(tags({"10.5"}), "Z");
  EXPECT_EQ(tags({"flurble"}), "N");
  EXPECT_EQ(tags({"!!"}), "F");
  EXPECT_EQ(tags({"¿"}), "F");
  EXPECT_TRUE(fallback_tag({}, lex).empty());
}

TEST(Tokenize, PeelsPunctuationKeepsMarkers) {
  EXPECT_EQ(tokenize("Hola, @us! (htt) #tbt... ¿qué?"),
            (std::vector<std::string>{"Hola", ",", "@us", "!", "(", "htt", ")", "#tbt", "...",
                                      "¿", "qué", "?"}));
  EXPECT_EQ(tokenize("!!! ^_^"), (std::vector<std::string>{"!!!", "^_^"}));
  EXPECT_TRUE(tokenize("   ").empty());
}

TEST(Tokenize, ThenRelabelNormalizedText) {
  const auto n = normalizer::normalize("Mira @Ana http://x.co #viernes",
                                       normalizer::default_rules(Language::kEs));
  const auto stream = relabel(fallback_tag(tokenize(n.text), {{"mira", "V"}}));
  EXPECT_EQ(joined(stream), "V REF@USERNAME REF#LINK REF#HASHTAG");
}
