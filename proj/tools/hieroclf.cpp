// Command-line front end: parse/stats/split/baseline/train/eval/predict.
// Exit codes: 0 success, 1 usage error, 2 data or parse error, 3 numeric
// failure.

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "hieroclf/baselines.hpp"
#include "hieroclf/corpus.hpp"
#include "hieroclf/errors.hpp"
#include "hieroclf/metric.hpp"
#include "hieroclf/nn/checkpoint.hpp"
#include "hieroclf/nn/train.hpp"
#include "hieroclf/vocab.hpp"

namespace fs = std::filesystem;
using namespace hieroclf;

namespace {

using ConfigEcho = std::vector<std::pair<std::string, std::string>>;

void print_config(const ConfigEcho& echo) {
  for (const auto& [key, value] : echo) {
    std::cout << "# " << key << " = " << value << '\n';
  }
}

Corpus load_input_corpus(const fs::path& path, bool dedup) {
  Corpus corpus = load_corpus(path);
  return dedup ? dedup_types(corpus) : corpus;
}

std::vector<std::string> read_lines(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open input file: " + path.string());
  std::vector<std::string> lines;
  std::string line;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    lines.push_back(line);
  }
  return lines;
}

nn::DecodeMode decode_mode_from_name(const std::string& name) {
  if (name == "free") return nn::DecodeMode::free;
  if (name == "constrained") return nn::DecodeMode::constrained;
  throw std::invalid_argument("unknown decode mode: " + name);
}

OovPolicy oov_from_name(const std::string& name) {
  if (name == "unk") return OovPolicy::map_to_unk;
  if (name == "sos") return OovPolicy::map_to_sos;
  throw std::invalid_argument("unknown oov policy: " + name);
}

// ---------------------------------------------------------------- parse ----

struct ParseArgs {
  std::string text;
  std::string file;
  bool tree = false;
};

int cmd_parse(const ParseArgs& args) {
  if (args.file.empty() && args.text.empty()) {
    throw std::invalid_argument("parse needs a wordform or --file");
  }
  std::vector<std::string> lines;
  if (!args.file.empty()) {
    lines = read_lines(args.file);
  } else {
    lines.push_back(args.text);
  }
  bool all_ok = true;
  std::size_t line_no = 0;
  for (const std::string& line : lines) {
    ++line_no;
    if (line.empty()) continue;
    try {
      mdc::ParsedToken token = mdc::parse(line);
      if (args.tree) {
        std::cout << mdc::dump_tree(token);
      } else {
        for (const auto& sign : mdc::flatten(token)) {
          std::cout << sign.code << ' ' << (sign.is_classifier ? 1 : 0) << '\n';
        }
      }
    } catch (const mdc::ParseError& e) {
      all_ok = false;
      std::cerr << "line " << line_no << ": " << e.what() << '\n';
    }
  }
  return all_ok ? 0 : 2;
}

// ---------------------------------------------------------------- stats ----

struct StatsArgs {
  std::string corpus;
  bool dedup = false;
};

int cmd_stats(const StatsArgs& args) {
  Corpus raw = load_corpus(args.corpus);
  Corpus types = dedup_types(raw);
  const Corpus& active = args.dedup ? types : raw;

  ConfigEcho echo = {{"command", "stats"},
                     {"corpus", args.corpus},
                     {"dedup", args.dedup ? "true" : "false"}};
  print_config(echo);

  std::set<std::string> signs;
  long sign_total = 0;
  long clf_total = 0;
  for (const DataPoint& p : active.points) {
    for (const auto& s : p.signs) signs.insert(s);
    sign_total += static_cast<long>(p.signs.size());
    clf_total += p.classifier_count();
  }
  std::cout << "tokens = " << raw.size() << '\n';
  std::cout << "types = " << types.size() << '\n';
  std::cout << "points = " << active.size() << '\n';
  std::cout << "signs_total = " << sign_total << '\n';
  std::cout << "classifiers_total = " << clf_total << '\n';
  std::cout << "sign_vocabulary = " << signs.size() << '\n';
  std::cout << "clf_histogram:\n";
  for (const auto& [count, freq] : clf_histogram(active)) {
    std::cout << count << '\t' << freq << '\n';
  }
  return 0;
}

// ---------------------------------------------------------------- split ----

struct SplitArgs {
  std::string corpus;
  std::string out_dir;
  std::uint64_t seed = 0;
  std::vector<double> ratios = {0.8, 0.1, 0.1};
  bool dedup = true;
};

int cmd_split(const SplitArgs& args) {
  if (args.ratios.size() != 3) {
    throw std::invalid_argument("--ratios needs exactly three values");
  }
  Corpus corpus = load_input_corpus(args.corpus, args.dedup);
  SplitSpec spec{args.seed, {args.ratios[0], args.ratios[1], args.ratios[2]}};
  auto parts = split(corpus, spec);

  fs::create_directories(args.out_dir);
  const char* names[3] = {"train.txt", "dev.txt", "test.txt"};
  ConfigEcho echo = {{"command", "split"},
                     {"corpus", args.corpus},
                     {"seed", std::to_string(args.seed)},
                     {"dedup", args.dedup ? "true" : "false"}};
  print_config(echo);
  for (int i = 0; i < 3; ++i) {
    fs::path path = fs::path(args.out_dir) / names[i];
    save_corpus(parts[i], path);
    std::cout << names[i] << " = " << parts[i].size() << '\n';
  }
  return 0;
}

// ------------------------------------------------------------- baseline ----

struct BaselineArgs {
  std::string train_path, dev_path, test_path, ood_path;
  std::string rule = "clf_majority";
  std::vector<int> candidates;
  bool dedup = true;
  std::string export_path;
};

EvalReport eval_baseline(const BaselinePredictor& predictor,
                         const Corpus& corpus) {
  std::vector<std::vector<int>> predictions;
  predictions.reserve(corpus.size());
  for (const DataPoint& p : corpus.points) {
    predictions.push_back(predict(predictor, p.signs));
  }
  return score(corpus, predictions);
}

int cmd_baseline(const BaselineArgs& args) {
  Corpus train_corpus = load_input_corpus(args.train_path, args.dedup);
  Corpus dev_corpus = load_input_corpus(args.dev_path, args.dedup);
  SignFrequencyTable table = fit(train_corpus);

  BaselinePredictor predictor;
  std::string label;
  if (args.rule == "top_n") {
    std::span<const int> candidates = args.candidates.empty()
                                          ? default_top_n_candidates()
                                          : std::span<const int>(args.candidates);
    int n = select_top_n(table, dev_corpus, candidates);
    predictor = top_n(table, n);
    label = "Top-" + std::to_string(n) + " CLF";
  } else if (args.rule == "clf_only") {
    predictor = clf_only(table);
    label = "CLF only";
  } else if (args.rule == "clf_majority") {
    predictor = clf_majority(table);
    label = "CLF majority";
  } else {
    throw std::invalid_argument("unknown rule: " + args.rule);
  }

  ConfigEcho echo = {{"command", "baseline"},
                     {"rule", args.rule},
                     {"train", args.train_path},
                     {"dev", args.dev_path},
                     {"test", args.test_path},
                     {"ood", args.ood_path.empty() ? "-" : args.ood_path},
                     {"dedup", args.dedup ? "true" : "false"},
                     {"marked_signs", std::to_string(predictor.marked.size())}};
  print_config(echo);

  if (!args.export_path.empty()) {
    std::ofstream out(args.export_path);
    if (!out) throw IoError("cannot write table: " + args.export_path);
    out << export_table(table);
  }

  std::vector<EvalReport> reports;
  std::string header = "model\tdev";
  reports.push_back(eval_baseline(predictor, dev_corpus));
  if (!args.test_path.empty()) {
    reports.push_back(
        eval_baseline(predictor, load_input_corpus(args.test_path, args.dedup)));
    header += "\ttest";
  }
  if (!args.ood_path.empty()) {
    reports.push_back(
        eval_baseline(predictor, load_input_corpus(args.ood_path, args.dedup)));
    header += "\tnarratives";
  }
  std::cout << header << '\n' << report_table_row(label, reports) << '\n';
  return 0;
}

// ---------------------------------------------------------------- train ----

struct TrainArgs {
  std::string train_path, dev_path;
  std::string kind = "sign";
  int layers = 1;
  int hidden = 64;
  int embedding = 32;
  bool paper_scale = false;
  nn::TrainConfig tcfg;
  std::string oov = "unk";
  std::string dev_mode = "free";
  bool dedup = true;
  bool grid = false;
  std::string out = "model.ckpt";
  std::string vocab_path, history_path;
};

int cmd_train(const TrainArgs& args) {
  Corpus train_corpus = load_input_corpus(args.train_path, args.dedup);
  Corpus dev_corpus = load_input_corpus(args.dev_path, args.dedup);

  nn::ModelConfig mcfg;
  mcfg.kind = vocab_kind_from_name(args.kind);
  mcfg.layers = args.paper_scale ? 3 : args.layers;
  mcfg.hidden = args.paper_scale ? 512 : args.hidden;
  mcfg.embedding_dim = args.embedding;

  nn::TrainConfig tcfg = args.tcfg;
  tcfg.oov = oov_from_name(args.oov);
  tcfg.dev_decode = decode_mode_from_name(args.dev_mode);

  if (args.grid) {
    tcfg = nn::grid_search(train_corpus, dev_corpus, mcfg, tcfg);
    std::cout << "# grid_selected_batch_size = " << tcfg.batch_size << '\n';
    std::cout << "# grid_selected_learning_rate = " << tcfg.learning_rate
              << '\n';
  }

  nn::TrainResult result = nn::train(train_corpus, dev_corpus, mcfg, tcfg);

  fs::path ckpt = args.out;
  fs::path vocab_path = args.vocab_path.empty() ? fs::path(args.out + ".vocab")
                                                : fs::path(args.vocab_path);
  fs::path history_path = args.history_path.empty()
                              ? fs::path(args.out + ".history")
                              : fs::path(args.history_path);
  nn::save_checkpoint(ckpt, result.config, result.params);
  save_vocab(result.vocab, vocab_path);
  std::string history = nn::history_text(result, tcfg);
  {
    std::ofstream out(history_path);
    if (!out) throw IoError("cannot write history: " + history_path.string());
    out << history;
  }

  ConfigEcho echo = {{"command", "train"},
                     {"train", args.train_path},
                     {"dev", args.dev_path},
                     {"checkpoint", ckpt.string()},
                     {"vocab", vocab_path.string()},
                     {"history", history_path.string()}};
  print_config(echo);
  std::cout << history;
  std::cout << "best_epoch = " << result.best_epoch << '\n';
  std::cout << "best_dev_error = " << result.best_dev_error << '\n';
  return 0;
}

// ----------------------------------------------------------------- eval ----

struct EvalArgs {
  std::string checkpoint;
  std::string vocab_path;
  std::vector<std::string> corpora;
  std::string mode = "free";
  std::string oov = "unk";
  std::string label = "LSTM";
  bool dedup = false;
};

int cmd_eval(const EvalArgs& args) {
  auto [cfg, params] = nn::load_checkpoint(args.checkpoint);
  fs::path vocab_path = args.vocab_path.empty()
                            ? fs::path(args.checkpoint + ".vocab")
                            : fs::path(args.vocab_path);
  Vocabulary vocab = load_vocab(vocab_path);
  if (vocab.size() != cfg.vocab_size || vocab.kind() != cfg.kind) {
    throw FormatError(0, "vocabulary does not match the checkpoint");
  }

  ConfigEcho echo = {{"command", "eval"},
                     {"checkpoint", args.checkpoint},
                     {"vocab", vocab_path.string()},
                     {"mode", args.mode},
                     {"oov", args.oov}};
  print_config(echo);

  nn::DecodeMode mode = decode_mode_from_name(args.mode);
  OovPolicy oov = oov_from_name(args.oov);
  std::vector<EvalReport> reports;
  for (const std::string& path : args.corpora) {
    Corpus corpus = load_input_corpus(path, args.dedup);
    std::vector<std::vector<int>> predictions;
    predictions.reserve(corpus.size());
    for (const DataPoint& p : corpus.points) {
      auto ids = encode(vocab, p.signs, oov);
      predictions.push_back(
          nn::predict(params, cfg, ids, p.signs.size(), mode));
    }
    EvalReport report = score(corpus, predictions);
    std::cout << "corpus = " << path << '\n' << report_key_values(report);
    reports.push_back(std::move(report));
  }
  std::cout << report_table_row(args.label, reports) << '\n';
  return 0;
}

// -------------------------------------------------------------- predict ----

struct PredictArgs {
  std::string checkpoint;
  std::string vocab_path;
  std::string fit_path;  // baseline alternative to a checkpoint
  std::string rule;
  int top = 50;
  std::string input_path;
  std::string text;
  std::string format = "pairs";
  std::string mode = "free";
  std::string oov = "unk";
};

int cmd_predict(const PredictArgs& args) {
  std::vector<std::string> lines;
  if (!args.input_path.empty()) {
    lines = read_lines(args.input_path);
  } else {
    lines.push_back(args.text);
  }

  std::optional<std::pair<nn::ModelConfig, nn::Params<float>>> model;
  std::optional<Vocabulary> vocab;
  std::optional<BaselinePredictor> baseline;
  if (!args.rule.empty()) {
    if (args.fit_path.empty()) {
      throw std::invalid_argument("--rule needs --fit <train corpus>");
    }
    SignFrequencyTable table = fit(dedup_types(load_corpus(args.fit_path)));
    if (args.rule == "top_n") {
      baseline = top_n(table, args.top);
    } else if (args.rule == "clf_only") {
      baseline = clf_only(table);
    } else if (args.rule == "clf_majority") {
      baseline = clf_majority(table);
    } else {
      throw std::invalid_argument("unknown rule: " + args.rule);
    }
  } else {
    model = nn::load_checkpoint(args.checkpoint);
    fs::path vocab_path = args.vocab_path.empty()
                              ? fs::path(args.checkpoint + ".vocab")
                              : fs::path(args.vocab_path);
    vocab = load_vocab(vocab_path);
  }

  nn::DecodeMode mode = decode_mode_from_name(args.mode);
  OovPolicy oov = oov_from_name(args.oov);

  std::size_t line_no = 0;
  for (const std::string& line : lines) {
    ++line_no;
    if (line.empty()) continue;
    DataPoint point;
    try {
      point = make_data_point(line);
    } catch (const mdc::ParseError& e) {
      throw FormatError(line_no, e.what());
    }
    std::vector<int> labels;
    if (baseline) {
      labels = predict(*baseline, point.signs);
    } else {
      auto ids = encode(*vocab, point.signs, oov);
      labels = nn::predict(model->second, model->first, ids,
                           point.signs.size(), mode);
    }
    DataPoint out{point.id, point.raw, point.signs, labels};
    if (args.format == "pairs") {
      for (std::size_t i = 0; i < out.signs.size(); ++i) {
        std::cout << out.signs[i] << ' ' << out.labels[i] << '\n';
      }
    } else {
      std::cout << format_output(out, output_style_from_name(args.format))
                << '\n';
    }
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classifier-sign identification for MdC transcriptions"};
  app.require_subcommand(1);
  app.set_config("--config", "", "Key=value configuration file");

  ParseArgs parse_args;
  auto* parse_cmd =
      app.add_subcommand("parse", "Parse wordforms and list signs with flags");
  parse_cmd->add_option("text", parse_args.text, "One MdC wordform");
  parse_cmd->add_option("--file", parse_args.file, "File with one wordform per line");
  parse_cmd->add_flag("--tree", parse_args.tree, "Print the parse tree");

  StatsArgs stats_args;
  auto* stats_cmd = app.add_subcommand("stats", "Corpus statistics");
  stats_cmd->add_option("--corpus", stats_args.corpus, "Corpus file")->required();
  stats_cmd->add_flag("--dedup", stats_args.dedup,
                      "Compute statistics over types instead of tokens");

  SplitArgs split_args;
  auto* split_cmd =
      app.add_subcommand("split", "Deduplicate and split train/dev/test");
  split_cmd->add_option("--corpus", split_args.corpus, "Corpus file")->required();
  split_cmd->add_option("--out-dir", split_args.out_dir, "Output directory")
      ->required();
  split_cmd->add_option("--seed", split_args.seed, "Shuffle seed");
  split_cmd->add_option("--ratios", split_args.ratios,
                        "Train, dev, test fractions");
  split_cmd->add_flag("!--no-dedup", split_args.dedup,
                      "Split raw tokens instead of types");

  BaselineArgs baseline_args;
  auto* baseline_cmd =
      app.add_subcommand("baseline", "Fit and score a frequency baseline");
  baseline_cmd->add_option("--train", baseline_args.train_path)->required();
  baseline_cmd->add_option("--dev", baseline_args.dev_path)->required();
  baseline_cmd->add_option("--test", baseline_args.test_path);
  baseline_cmd->add_option("--ood", baseline_args.ood_path,
                           "Out-of-domain corpus");
  baseline_cmd
      ->add_option("--rule", baseline_args.rule,
                   "top_n, clf_only or clf_majority")
      ->required();
  baseline_cmd->add_option("--candidates", baseline_args.candidates,
                           "Candidate values of n for top_n");
  baseline_cmd->add_flag("!--no-dedup", baseline_args.dedup,
                         "Fit on raw tokens instead of types");
  baseline_cmd->add_option("--export-table", baseline_args.export_path,
                           "Write the sign frequency table");

  TrainArgs train_args;
  auto* train_cmd = app.add_subcommand("train", "Train a sequence labeller");
  train_cmd->add_option("--train", train_args.train_path)->required();
  train_cmd->add_option("--dev", train_args.dev_path)->required();
  train_cmd->add_option("--kind", train_args.kind, "sign or char");
  train_cmd->add_option("--layers", train_args.layers);
  train_cmd->add_option("--hidden", train_args.hidden);
  train_cmd->add_option("--embedding", train_args.embedding);
  train_cmd->add_flag("--paper-scale", train_args.paper_scale,
                      "3 layers, hidden 512");
  train_cmd->add_option("--batch", train_args.tcfg.batch_size);
  train_cmd->add_option("--lr", train_args.tcfg.learning_rate);
  train_cmd->add_option("--patience", train_args.tcfg.patience);
  train_cmd->add_option("--max-epochs", train_args.tcfg.max_epochs);
  train_cmd->add_option("--seed", train_args.tcfg.seed);
  train_cmd->add_option("--clip-norm", train_args.tcfg.clip_norm);
  train_cmd->add_option("--oov", train_args.oov, "unk or sos");
  train_cmd->add_option("--dev-mode", train_args.dev_mode,
                        "free or constrained dev decoding");
  train_cmd->add_flag("--grid", train_args.grid,
                      "Grid-search batch size and learning rate first");
  train_cmd->add_option("--grid-batches", train_args.tcfg.grid_batch_sizes);
  train_cmd->add_option("--grid-lrs", train_args.tcfg.grid_learning_rates);
  train_cmd->add_flag("!--no-dedup", train_args.dedup,
                      "Train on raw tokens instead of types");
  train_cmd->add_option("--out", train_args.out, "Checkpoint path");
  train_cmd->add_option("--vocab", train_args.vocab_path,
                        "Vocabulary path (default <out>.vocab)");
  train_cmd->add_option("--history", train_args.history_path,
                        "History path (default <out>.history)");

  EvalArgs eval_args;
  auto* eval_cmd = app.add_subcommand("eval", "Score a checkpoint on corpora");
  eval_cmd->add_option("--checkpoint", eval_args.checkpoint)->required();
  eval_cmd->add_option("--vocab", eval_args.vocab_path);
  eval_cmd->add_option("--corpus", eval_args.corpora, "May be repeated")
      ->required();
  eval_cmd->add_option("--mode", eval_args.mode, "free or constrained");
  eval_cmd->add_option("--oov", eval_args.oov, "unk or sos");
  eval_cmd->add_option("--label", eval_args.label, "Row label for the table");
  eval_cmd->add_flag("--dedup", eval_args.dedup,
                     "Deduplicate corpora before scoring");

  PredictArgs predict_args;
  auto* predict_cmd =
      app.add_subcommand("predict", "Label unannotated wordforms");
  predict_cmd->add_option("--checkpoint", predict_args.checkpoint);
  predict_cmd->add_option("--vocab", predict_args.vocab_path);
  predict_cmd->add_option("--rule", predict_args.rule,
                          "Baseline rule instead of a checkpoint");
  predict_cmd->add_option("--fit", predict_args.fit_path,
                          "Training corpus for --rule");
  predict_cmd->add_option("--top-n", predict_args.top, "n for --rule top_n");
  predict_cmd->add_option("--input", predict_args.input_path,
                          "File with one wordform per line");
  predict_cmd->add_option("--text", predict_args.text, "One wordform");
  predict_cmd->add_option("--format", predict_args.format,
                          "pairs, binary, tilde_pair or tilde_suffix");
  predict_cmd->add_option("--mode", predict_args.mode, "free or constrained");
  predict_cmd->add_option("--oov", predict_args.oov, "unk or sos");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 1;
  }

  try {
    if (app.got_subcommand(parse_cmd)) return cmd_parse(parse_args);
    if (app.got_subcommand(stats_cmd)) return cmd_stats(stats_args);
    if (app.got_subcommand(split_cmd)) return cmd_split(split_args);
    if (app.got_subcommand(baseline_cmd)) return cmd_baseline(baseline_args);
    if (app.got_subcommand(train_cmd)) return cmd_train(train_args);
    if (app.got_subcommand(eval_cmd)) return cmd_eval(eval_args);
    if (app.got_subcommand(predict_cmd)) return cmd_predict(predict_args);
  } catch (const NonFiniteError& e) {
    std::cerr << "numeric failure: " << e.what() << '\n';
    return 3;
  } catch (const mdc::ParseError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const FormatError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const IoError& e) {
    std::cerr << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << e.what() << '\n';
    return 2;
  }
  return 0;
}
