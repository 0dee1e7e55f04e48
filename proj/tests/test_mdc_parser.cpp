#include <string>
#include <vector>

#include "doctest.h"
#include "hieroclf/mdc.hpp"
#include "hieroclf/rng.hpp"
#include "support/cfg_sampler.hpp"

using namespace hieroclf;
using mdc::FlatSign;

namespace {

std::vector<FlatSign> parse_flat(const std::string& text) {
  return mdc::flatten(mdc::parse(text));
}

}  // namespace

TEST_CASE("annotated wordform with two trailing classifiers") {
  auto flat = parse_flat("U33-Z4-D21-Z1-D21-Z1-~D56~-~D54~");
  std::vector<FlatSign> expected = {{"U33", false}, {"Z4", false},
                                    {"D21", false}, {"Z1", false},
                                    {"D21", false}, {"Z1", false},
                                    {"D56", true},  {"D54", true}};
  CHECK(flat == expected);
}

TEST_CASE("minimal token is one unmarked sign") {
  auto token = mdc::parse("A1");
  auto flat = mdc::flatten(token);
  REQUIRE(flat.size() == 1);
  CHECK(flat[0].code == "A1");
  CHECK_FALSE(flat[0].is_classifier);
  REQUIRE(token.root.children.size() == 1);
  CHECK_FALSE(token.root.children[0].sign.suffix.has_value());
}

TEST_CASE("unbalanced tilde is rejected with offset and expectations") {
  try {
    mdc::parse("~D56");
    FAIL("expected ParseError");
  } catch (const mdc::ParseError& e) {
    CHECK(e.offset() == 4);
    CHECK(e.expected().count("'~'") == 1);
  }
}

TEST_CASE("suffixes attach to the sign and are dropped by flatten") {
  auto flat = parse_flat("G17{{1,2,3}}#2");
  std::vector<FlatSign> expected = {{"G17", false}};
  CHECK(flat == expected);
}

TEST_CASE("delimiters never produce signs") {
  auto flat = parse_flat("A1:A1*A1");
  REQUIRE(flat.size() == 3);
  for (const auto& s : flat) CHECK(s.code == "A1");
}

TEST_CASE("special codes are parsed but dropped by flatten") {
  CHECK(parse_flat("#b-A1-#e") == std::vector<FlatSign>{{"A1", false}});
  CHECK(parse_flat(".").empty());
  CHECK(parse_flat("[&-A1-&]") == std::vector<FlatSign>{{"A1", false}});
  CHECK(parse_flat("#b-..#e").empty());
}

TEST_CASE("tilde scope over a sequence marks every sign inside") {
  auto flat = parse_flat("~A1-B1~");
  std::vector<FlatSign> expected = {{"A1", true}, {"B1", true}};
  CHECK(flat == expected);
}

TEST_CASE("grouping parentheses are transparent to flatten") {
  auto flat = parse_flat("(A1-B1):C1");
  std::vector<FlatSign> expected = {{"A1", false}, {"B1", false}, {"C1", false}};
  CHECK(flat == expected);
}

TEST_CASE("parens and braces can also act as plain delimiters") {
  // No grouping reading exists for these; the delimiter reading must win.
  CHECK(parse_flat("A1(B1") ==
        std::vector<FlatSign>{{"A1", false}, {"B1", false}});
  CHECK(parse_flat("A1)B1") ==
        std::vector<FlatSign>{{"A1", false}, {"B1", false}});
  // "{{1,2,3}}" after a delimiter cannot be a ligature; it re-lexes as
  // brace delimiters around numeric sign codes.
  CHECK(parse_flat("A1-{{1,2,3}}-B1") ==
        std::vector<FlatSign>{{"A1", false},
                              {"1", false},
                              {"2", false},
                              {"3", false},
                              {"B1", false}});
}

TEST_CASE("serialise reproduces the input exactly for canonical strings") {
  for (const char* text :
       {"A1-B1", "~D54~", "G17{{1,2,3}}#2", "G17#2{{1,2,3}}", "(A1-B1):C1",
        "~A1-B1~", "U33-Z4-D21-Z1-D21-Z1-~D56~-~D54~", "A1-_GROUPING_-B1",
        "~A1~#4"}) {
    CAPTURE(text);
    CHECK(mdc::serialise(mdc::parse(text)) == text);
  }
}

TEST_CASE("whitespace separates atoms and is normalised on serialise") {
  auto flat = parse_flat("U33 Z4 ~D56~");
  std::vector<FlatSign> expected = {{"U33", false}, {"Z4", false},
                                    {"D56", true}};
  CHECK(flat == expected);
  CHECK(mdc::serialise(mdc::parse("U33  Z4   ~D56~")) == "U33 Z4 ~D56~");
  CHECK(mdc::serialise(mdc::parse(" A1 - B1 ")) == "A1-B1");
}

TEST_CASE("malformed inputs raise ParseError") {
  for (const char* text : {"", "  ", "~D56", "D56~", "~~", "(A1", "A1)", "-A1",
                           "A1-", "A1;B1", "A1..B1", "A1 B1~", "{{1,2,3}}",
                           "#1", "A1B2C3D4!", "~A1-~", "A1&]B1", "G17{{1,2}}"}) {
    CAPTURE(text);
    CHECK_THROWS_AS(mdc::parse(text), mdc::ParseError);
  }
}

TEST_CASE("error reports the first failure offset") {
  try {
    mdc::parse("A1-B1-;C1");
    FAIL("expected ParseError");
  } catch (const mdc::ParseError& e) {
    CHECK(e.offset() == 6);
  }
}

TEST_CASE("canonical sampled wordforms parse to their ground truth") {
  Rng rng(20240601);
  testsupport::SampleOptions opts;
  opts.canonical = true;
  opts.ws_probability = 0.2;
  testsupport::CfgSampler sampler(rng, opts);
  for (int i = 0; i < 400; ++i) {
    auto sample = sampler.token();
    CAPTURE(sample.text);
    auto token = mdc::parse(sample.text);
    auto flat = mdc::flatten(token);
    CHECK(flat == sample.truth);  // includes sign-count conservation
    // Round trip: serialise then reparse, flatten unchanged.
    CHECK(mdc::flatten(mdc::parse(mdc::serialise(token))) == sample.truth);
  }
}

TEST_CASE("full-grammar samples parse and round-trip through serialise") {
  Rng rng(914);
  testsupport::SampleOptions opts;
  opts.canonical = false;
  testsupport::CfgSampler sampler(rng, opts);
  for (int i = 0; i < 400; ++i) {
    auto sample = sampler.token();
    CAPTURE(sample.text);
    auto token = mdc::parse(sample.text);
    auto again = mdc::parse(mdc::serialise(token));
    CHECK(mdc::flatten(again) == mdc::flatten(token));
  }
}

TEST_CASE("classifier flags survive nested grouping inside a tilde scope") {
  auto flat = parse_flat("~(A1-B1):C1~");
  REQUIRE(flat.size() == 3);
  for (const auto& s : flat) CHECK(s.is_classifier);
}
