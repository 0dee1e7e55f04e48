#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <string>

#include "doctest.h"
#include "hieroclf/corpus.hpp"
#include "hieroclf/rng.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;

namespace {

const char* cli_path() { return HIEROCLF_CLI_PATH; }

struct CommandResult {
  int exit_code = -1;
  std::string output;
};

CommandResult run(const std::string& args) {
  fs::path capture = fs::temp_directory_path() / "hieroclf_cli_capture.txt";
  std::string command =
      std::string(cli_path()) + " " + args + " > " + capture.string() + " 2>&1";
  int status = std::system(command.c_str());
  CommandResult result;
  result.exit_code = WEXITSTATUS(status);
  std::ifstream in(capture);
  result.output.assign((std::istreambuf_iterator<char>(in)), {});
  return result;
}

fs::path workspace() {
  fs::path dir = fs::temp_directory_path() / "hieroclf_cli_ws";
  fs::create_directories(dir);
  return dir;
}

void write_membership_corpus(const fs::path& path, std::size_t types,
                             std::uint64_t seed) {
  hieroclf::Rng rng(seed);
  std::vector<std::string> codes;
  std::set<std::string> marked;
  for (int i = 0; i < 12; ++i) codes.push_back("S" + std::to_string(i));
  for (int i = 0; i < 4; ++i) marked.insert("S" + std::to_string(i));
  hieroclf::Corpus corpus =
      testsupport::membership_corpus(rng, types, codes, marked, 2, 5, true);
  for (auto& p : corpus.points) {
    std::string raw;
    for (std::size_t i = 0; i < p.signs.size(); ++i) {
      if (i) raw += '-';
      raw += p.labels[i] ? "~" + p.signs[i] + "~" : p.signs[i];
    }
    p.raw = raw;
  }
  save_corpus(corpus, path);
}

}  // namespace

TEST_CASE("cli: parse prints sign/flag pairs and fails on bad input") {
  auto ok = run("parse \"~D54~\"");
  CHECK(ok.exit_code == 0);
  CHECK(ok.output == "D54 1\n");

  auto fig = run("parse \"U33-Z4-D21-Z1-D21-Z1-~D56~-~D54~\"");
  CHECK(fig.exit_code == 0);
  CHECK(fig.output.find("U33 0") != std::string::npos);
  CHECK(fig.output.find("D56 1") != std::string::npos);
  CHECK(fig.output.find("D54 1") != std::string::npos);

  auto bad = run("parse \"~D56\"");
  CHECK(bad.exit_code == 2);
  CHECK(bad.output.find("byte 4") != std::string::npos);

  auto usage = run("frobnicate");
  CHECK(usage.exit_code == 1);
}

TEST_CASE("cli: split then baseline and prediction round trip") {
  fs::path ws = workspace();
  fs::path corpus = ws / "corpus.txt";
  write_membership_corpus(corpus, 300, 61);

  auto split = run("split --corpus " + corpus.string() + " --out-dir " +
                   (ws / "split").string() + " --seed 5");
  CHECK(split.exit_code == 0);
  CHECK(split.output.find("train.txt = 240") != std::string::npos);
  CHECK(split.output.find("dev.txt = 30") != std::string::npos);

  auto base = run("baseline --train " + (ws / "split/train.txt").string() +
                  " --dev " + (ws / "split/dev.txt").string() + " --test " +
                  (ws / "split/test.txt").string() + " --rule clf_majority");
  CHECK(base.exit_code == 0);
  CHECK(base.output.find("CLF majority\t0.00\t0.00") != std::string::npos);

  auto top = run("baseline --train " + (ws / "split/train.txt").string() +
                 " --dev " + (ws / "split/dev.txt").string() +
                 " --rule top_n --candidates 5");
  CHECK(top.exit_code == 0);
  CHECK(top.output.find("Top-5 CLF") != std::string::npos);

  auto pred = run("predict --rule clf_majority --fit " +
                  (ws / "split/train.txt").string() + " --text S0-S7");
  CHECK(pred.exit_code == 0);
  CHECK(pred.output == "S0 1\nS7 0\n");

  auto stats = run("stats --corpus " + corpus.string());
  CHECK(stats.exit_code == 0);
  CHECK(stats.output.find("types = 300") != std::string::npos);
  CHECK(stats.output.find("clf_histogram:") != std::string::npos);
}

TEST_CASE("cli: a predictor with nothing marked labels every sign 0") {
  fs::path ws = workspace();
  fs::path corpus = ws / "mixed.txt";
  std::ofstream out(corpus);
  // Every sign occurs both as classifier and not, so clf_only marks none.
  out << "~A1~-B1\nA1-~B1~\n";
  out.close();
  auto pred =
      run("predict --rule clf_only --fit " + corpus.string() + " --text A1");
  CHECK(pred.exit_code == 0);
  CHECK(pred.output == "A1 0\n");
}

TEST_CASE("cli: train, eval and predict with a checkpoint") {
  fs::path ws = workspace();
  fs::path corpus = ws / "train_corpus.txt";
  write_membership_corpus(corpus, 240, 62);
  run("split --corpus " + corpus.string() + " --out-dir " +
      (ws / "tsplit").string() + " --seed 1");

  fs::path ckpt = ws / "model.ckpt";
  auto train = run("train --train " + (ws / "tsplit/train.txt").string() +
                   " --dev " + (ws / "tsplit/dev.txt").string() +
                   " --hidden 24 --embedding 12 --batch 4 --lr 1.0"
                   " --patience 5 --max-epochs 25 --seed 11 --out " +
                   ckpt.string());
  CHECK(train.exit_code == 0);
  CHECK(fs::exists(ckpt));
  CHECK(fs::exists(ws / "model.ckpt.vocab"));
  CHECK(fs::exists(ws / "model.ckpt.history"));

  auto eval = run("eval --checkpoint " + ckpt.string() + " --corpus " +
                  (ws / "tsplit/dev.txt").string() + " --label \"LSTM (sign)\"");
  CHECK(eval.exit_code == 0);
  CHECK(eval.output.find("mean_errors_per_point") != std::string::npos);
  CHECK(eval.output.find("LSTM (sign)") != std::string::npos);

  auto pred = run("predict --checkpoint " + ckpt.string() +
                  " --text S0-S7-S1 --format tilde_pair");
  CHECK(pred.exit_code == 0);
  // tilde_pair output is valid transcription; it parses back.
  auto reparse = run("parse \"" + pred.output.substr(0, pred.output.size() - 1) +
                     "\"");
  CHECK(reparse.exit_code == 0);

  auto missing = run("eval --checkpoint /nonexistent.ckpt --corpus " +
                     (ws / "tsplit/dev.txt").string());
  CHECK(missing.exit_code == 2);
}
