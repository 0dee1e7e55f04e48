#include <filesystem>
#include <fstream>
#include <set>
#include <string>

#include "doctest.h"
#include "hieroclf/corpus.hpp"
#include "hieroclf/errors.hpp"

using namespace hieroclf;
namespace fs = std::filesystem;

namespace {

fs::path write_temp(const std::string& name, const std::string& content) {
  fs::path path = fs::temp_directory_path() / name;
  std::ofstream out(path);
  out << content;
  return path;
}

Corpus corpus_of(std::initializer_list<const char*> lines) {
  Corpus c;
  for (const char* line : lines) c.points.push_back(make_data_point(line));
  return c;
}

}  // namespace

TEST_CASE("load_corpus reads one data point per line") {
  auto path = write_temp("hieroclf_corpus_basic.txt",
                         "~D54~\n"
                         "\n"
                         "U33-Z4-D21-Z1-D21-Z1-~D56~-~D54~\n");
  Corpus c = load_corpus(path);
  REQUIRE(c.size() == 2);
  CHECK(c.points[0].signs == std::vector<std::string>{"D54"});
  CHECK(c.points[0].labels == std::vector<int>{1});
  CHECK(c.points[1].signs.size() == 8);
  CHECK(c.points[1].labels ==
        std::vector<int>{0, 0, 0, 0, 0, 0, 1, 1});
}

TEST_CASE("load_corpus accepts an id column and keeps it") {
  auto path = write_temp("hieroclf_corpus_ids.txt", "w17\tA1-~B1~\n");
  Corpus c = load_corpus(path);
  REQUIRE(c.size() == 1);
  CHECK(c.points[0].id == "w17");
  CHECK(c.points[0].raw == "A1-~B1~");
}

TEST_CASE("load_corpus reports the failing line") {
  auto path = write_temp("hieroclf_corpus_bad.txt", "A1\n~A1\n");
  try {
    load_corpus(path);
    FAIL("expected FormatError");
  } catch (const FormatError& e) {
    CHECK(e.line() == 2);
  }
  CHECK_THROWS_AS(load_corpus("/nonexistent/corpus.txt"), IoError);
}

TEST_CASE("dedup_types keys on signs and labels jointly") {
  Corpus c = corpus_of({"A1", "A1", "~A1~"});
  Corpus d = dedup_types(c);
  REQUIRE(d.size() == 2);
  CHECK(d.points[0].labels == std::vector<int>{0});
  CHECK(d.points[1].labels == std::vector<int>{1});

  // Same flattened content through different delimiters is one type.
  Corpus e = dedup_types(corpus_of({"A1-B1", "A1*B1"}));
  CHECK(e.size() == 1);

  // Idempotence.
  CHECK(dedup_types(d).size() == d.size());
}

TEST_CASE("split sizes use floor allocation with remainder to train") {
  Corpus c;
  for (int i = 0; i < 10; ++i) {
    c.points.push_back(make_data_point("A" + std::to_string(i)));
  }
  auto parts = split(c, SplitSpec{123, {0.8, 0.1, 0.1}});
  CHECK(parts[0].size() == 8);
  CHECK(parts[1].size() == 1);
  CHECK(parts[2].size() == 1);
}

TEST_CASE("split is a deterministic disjoint partition") {
  Corpus c;
  for (int i = 0; i < 97; ++i) {
    c.points.push_back(make_data_point("A" + std::to_string(i) + "-B2"));
  }
  SplitSpec spec{42, {0.6, 0.2, 0.2}};
  auto first = split(c, spec);
  auto second = split(c, spec);
  std::set<std::string> seen;
  std::size_t total = 0;
  for (int part = 0; part < 3; ++part) {
    REQUIRE(first[part].size() == second[part].size());
    for (std::size_t i = 0; i < first[part].size(); ++i) {
      CHECK(first[part].points[i].raw == second[part].points[i].raw);
      seen.insert(first[part].points[i].raw);
      ++total;
    }
  }
  CHECK(total == c.size());
  CHECK(seen.size() == c.size());

  auto other = split(c, SplitSpec{43, {0.6, 0.2, 0.2}});
  bool same_order = true;
  for (std::size_t i = 0; i < other[0].size() && same_order; ++i) {
    same_order = other[0].points[i].raw == first[0].points[i].raw;
  }
  CHECK_FALSE(same_order);
}

TEST_CASE("split rejects bad ratios") {
  Corpus c = corpus_of({"A1"});
  CHECK_THROWS_AS(split(c, SplitSpec{0, {0.8, 0.2, 0.0}}),
                  std::invalid_argument);
  CHECK_THROWS_AS(split(c, SplitSpec{0, {0.8, 0.3, 0.1}}),
                  std::invalid_argument);
}

TEST_CASE("clf_histogram counts points by classifier count") {
  Corpus c = corpus_of({"A1", "~A1~", "~A1~-~B1~"});
  auto hist = clf_histogram(c);
  REQUIRE(hist.size() == 3);
  CHECK(hist[0] == 1);
  CHECK(hist[1] == 1);
  CHECK(hist[2] == 1);

  CHECK(clf_histogram(Corpus{}).empty());

  long points = 0, clfs = 0;
  for (auto [k, freq] : hist) {
    points += freq;
    clfs += k * freq;
  }
  CHECK(points == 3);
  CHECK(clfs == 3);
}

TEST_CASE("the three output styles render the reference wordform") {
  DataPoint p = make_data_point("U33-Z4-D21-Z1-D21-Z1-~D56~-~D54~");
  CHECK(format_output(p, OutputStyle::tilde_pair) ==
        "U33 Z4 D21 Z1 D21 Z1 ~D56~ ~D54~");
  CHECK(format_output(p, OutputStyle::tilde_suffix) ==
        "U33 Z4 D21 Z1 D21 Z1 D56~ D54~");
  CHECK(format_output(p, OutputStyle::binary) == "0 0 0 0 0 0 1 1");
}

TEST_CASE("a point without classifiers renders as the plain sign sequence") {
  DataPoint p = make_data_point("A1-B1");
  CHECK(format_output(p, OutputStyle::tilde_pair) == "A1 B1");
  CHECK(format_output(p, OutputStyle::tilde_suffix) == "A1 B1");
}

TEST_CASE("binary output field count equals sign count") {
  for (const char* raw : {"A1", "A1-~B1~-C1", "U33-Z4-D21-Z1-D21-Z1"}) {
    DataPoint p = make_data_point(raw);
    std::string out = format_output(p, OutputStyle::binary);
    std::size_t fields = out.empty() ? 0 : 1;
    for (char c : out) {
      if (c == ' ') ++fields;
    }
    CHECK(fields == p.signs.size());
  }
}

TEST_CASE("tilde outputs round-trip through their readers") {
  DataPoint p = make_data_point("U33-Z4-~D56~-~D54~");
  for (auto style : {OutputStyle::tilde_pair, OutputStyle::tilde_suffix}) {
    DataPoint back = parse_output(style, format_output(p, style));
    CHECK(back.signs == p.signs);
    CHECK(back.labels == p.labels);
  }
  // tilde_pair output is itself a valid transcription.
  DataPoint reparsed =
      make_data_point(format_output(p, OutputStyle::tilde_pair));
  CHECK(reparsed.signs == p.signs);
  CHECK(reparsed.labels == p.labels);
}

TEST_CASE("save_corpus round-trips through load_corpus") {
  Corpus c = corpus_of({"A1-~B1~", "~D54~"});
  c.points[0].id = "w1";
  fs::path path = fs::temp_directory_path() / "hieroclf_corpus_save.txt";
  save_corpus(c, path);
  Corpus back = load_corpus(path);
  REQUIRE(back.size() == 2);
  CHECK(back.points[0].id == "w1");
  CHECK(back.points[0].raw == "A1-~B1~");
  CHECK(back.points[1].labels == std::vector<int>{1});
}
