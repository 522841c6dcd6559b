#include <doctest.h>

#include <algorithm>
#include <map>

#include "groundnav/error.hpp"
#include "groundnav/lexicon.hpp"
#include "groundnav/parser.hpp"
#include "support.hpp"

using namespace groundnav;
using namespace testing;

namespace {

const AreaMap& office() {
  static const AreaMap map = load_map_file(kOfficeMapPath);
  return map;
}

const Lexicon& lexicon() {
  static const Lexicon lex = Lexicon::build(office(), {}, 0.5);
  return lex;
}

std::vector<std::string> texts(const std::vector<Token>& tokens) {
  std::vector<std::string> out;
  for (const auto& t : tokens) out.push_back(t.text);
  return out;
}

std::vector<std::string> raws(const std::vector<Modifier>& chain) {
  std::vector<std::string> out;
  for (const auto& m : chain) out.push_back(m.raw);
  return out;
}

}  // namespace

TEST_CASE("tokenize") {
  CHECK(texts(lexicon().tokenize("Go to Room 124.")) ==
        std::vector<std::string>{"go", "to", "room", "124"});
  CHECK(texts(lexicon().tokenize("the North-East exit")) ==
        std::vector<std::string>{"the", "north", "east", "exit"});
  CHECK(lexicon().tokenize("").empty());
  const auto gg = lexicon().tokenize("golden gate meeting room");
  CHECK(gg.size() == 4);
  for (const auto& t : gg) CHECK(t.vocab_index != Lexicon::kOov);
  CHECK(lexicon().tokenize("zeppelin").front().vocab_index == Lexicon::kOov);
}

TEST_CASE("tokenize is idempotent") {
  for (const char* s : {"Go to Room 124.", "the North-East exit", "  near, the   printer!"}) {
    const auto once = lexicon().tokenize(s);
    std::string joined;
    for (const auto& t : once) joined += t.text + " ";
    CHECK(lexicon().tokenize(joined) == once);
  }
}

TEST_CASE("match embeddings decide word identity") {
  const auto tokens = lexicon().tokenize("room room exit");
  const auto m = lexicon().embed_match(tokens);
  CHECK(m.row(0) == m.row(1));
  CHECK(m.row(0).dot(m.row(1)) == doctest::Approx(1.0));
  CHECK(std::abs(m.row(0).dot(m.row(2))) < 0.5);
  CHECK(lexicon().max_cross_similarity() < 0.5);
  for (Eigen::Index r = 0; r < lexicon().match_embeddings().rows(); ++r) {
    CHECK(lexicon().match_embeddings().row(r).norm() == doctest::Approx(1.0));
  }
}

TEST_CASE("lexicon serializes") {
  const Lexicon back = Lexicon::from_json(lexicon().to_json());
  CHECK(back.vocabulary() == lexicon().vocabulary());
  CHECK(back.match_embeddings().isApprox(lexicon().match_embeddings()));
}

TEST_CASE("extract_destination") {
  const LexiconConfig cfg;
  CHECK(extract_destination("go to the meeting room near the north exit", cfg) ==
        "the meeting room near the north exit");
  CHECK(extract_destination("navigate to room 124", cfg) == "room 124");
  CHECK(extract_destination("Go to the area 305", cfg) == "the area 305");
  CHECK(extract_destination("bring the mail to the kitchen", cfg) == "the kitchen");
  CHECK(extract_destination("the kitchen", cfg) == "the kitchen");
  CHECK_THROWS_AS(extract_destination("go to", cfg), ParseError);
  CHECK_THROWS_AS(extract_destination("", cfg), ParseError);
}

TEST_CASE("parse_modifier_chain") {
  CHECK(raws(parse_modifier_chain("the meeting room near the north exit", lexicon())) ==
        std::vector<std::string>{"the north exit", "near", "the meeting room"});
  CHECK(raws(parse_modifier_chain("the printer to the west of the golden gate meeting room",
                                  lexicon())) ==
        std::vector<std::string>{"the golden gate meeting room", "of", "the west", "to",
                                 "the printer"});
  CHECK(raws(parse_modifier_chain("room 124", lexicon())) == std::vector<std::string>{"room 124"});
  CHECK(raws(parse_modifier_chain("the kitchen close to the lounge", lexicon())) ==
        std::vector<std::string>{"the lounge", "close to", "the kitchen"});
  CHECK_THROWS_AS(parse_modifier_chain("", lexicon()), ParseError);
  CHECK_THROWS_AS(parse_modifier_chain("the area between yosemite and hardware", lexicon()),
                  ParseError);
  CHECK_THROWS_AS(parse_modifier_chain("near the exit", lexicon()), ParseError);
  CHECK_THROWS_AS(parse_modifier_chain("a b c d e f g h i", lexicon(), 8), ParseError);
}

TEST_CASE("chains alternate and preserve the token multiset") {
  const char* phrases[] = {
      "the meeting room near the north exit",
      "the printer to the west of the golden gate meeting room",
      "room 124",
      "the phone room besides the kitchen",
      "the north west working area near the printer to the south of exit 125",
  };
  for (const char* p : phrases) {
    const auto chain = parse_modifier_chain(p, lexicon());
    CHECK(chain.size() % 2 == 1);
    for (std::size_t i = 0; i < chain.size(); ++i) CHECK(chain[i].preposition == (i % 2 == 1));
    std::map<std::string, int> want, got;
    for (const auto& t : lexicon().tokenize(p)) ++want[t.text];
    for (const auto& m : chain) {
      for (const auto& t : m.tokens) ++got[t.text];
    }
    CHECK(want == got);
  }
}
