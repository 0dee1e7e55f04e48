#include "hieroclf/corpus.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <unordered_set>

#include "hieroclf/errors.hpp"
#include "hieroclf/rng.hpp"

namespace hieroclf {

int DataPoint::classifier_count() const {
  return std::accumulate(labels.begin(), labels.end(), 0);
}

DataPoint make_data_point(std::string raw) {
  DataPoint point;
  point.raw = std::move(raw);
  for (const auto& sign : mdc::flatten(mdc::parse(point.raw))) {
    point.signs.push_back(sign.code);
    point.labels.push_back(sign.is_classifier ? 1 : 0);
  }
  return point;
}

Corpus load_corpus(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open corpus file: " + path.string());

  Corpus corpus;
  corpus.name = path.filename().string();
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::string id;
    std::string body = line;
    if (auto tab = line.find('\t'); tab != std::string::npos) {
      id = line.substr(0, tab);
      body = line.substr(tab + 1);
    }
    try {
      DataPoint point = make_data_point(body);
      point.id = id;
      corpus.points.push_back(std::move(point));
    } catch (const mdc::ParseError& e) {
      throw FormatError(line_no, e.what());
    }
  }
  return corpus;
}

void save_corpus(const Corpus& corpus, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write corpus file: " + path.string());
  for (const DataPoint& p : corpus.points) {
    if (!p.id.empty()) out << p.id << '\t';
    out << p.raw << '\n';
  }
}

namespace {

std::string type_key(const DataPoint& p) {
  std::string key;
  for (const auto& s : p.signs) {
    key += s;
    key += '\x1f';
  }
  key += '|';
  for (int l : p.labels) key += static_cast<char>('0' + l);
  return key;
}

}  // namespace

Corpus dedup_types(const Corpus& corpus) {
  Corpus out;
  out.name = corpus.name;
  std::unordered_set<std::string> seen;
  for (const DataPoint& p : corpus.points) {
    if (seen.insert(type_key(p)).second) out.points.push_back(p);
  }
  return out;
}

std::array<Corpus, 3> split(const Corpus& corpus, const SplitSpec& spec) {
  double sum = spec.ratios[0] + spec.ratios[1] + spec.ratios[2];
  if (spec.ratios[0] <= 0 || spec.ratios[1] <= 0 || spec.ratios[2] <= 0 ||
      std::abs(sum - 1.0) > 1e-9) {
    throw std::invalid_argument("split ratios must be positive and sum to 1");
  }

  std::vector<std::size_t> order(corpus.size());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(spec.seed);
  rng.shuffle(order);

  const std::size_t n = corpus.size();
  const auto n_dev = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * spec.ratios[1]));
  const auto n_test = static_cast<std::size_t>(
      std::floor(static_cast<double>(n) * spec.ratios[2]));
  const std::size_t n_train = n - n_dev - n_test;

  std::array<Corpus, 3> parts;
  parts[0].name = corpus.name + ".train";
  parts[1].name = corpus.name + ".dev";
  parts[2].name = corpus.name + ".test";
  for (std::size_t i = 0; i < n; ++i) {
    const DataPoint& p = corpus.points[order[i]];
    if (i < n_train) {
      parts[0].points.push_back(p);
    } else if (i < n_train + n_dev) {
      parts[1].points.push_back(p);
    } else {
      parts[2].points.push_back(p);
    }
  }
  return parts;
}

std::map<int, long> clf_histogram(const Corpus& corpus) {
  std::map<int, long> hist;
  for (const DataPoint& p : corpus.points) ++hist[p.classifier_count()];
  return hist;
}

std::string format_output(const DataPoint& point, OutputStyle style) {
  std::string out;
  for (std::size_t i = 0; i < point.signs.size(); ++i) {
    if (i > 0) out += ' ';
    switch (style) {
      case OutputStyle::tilde_pair:
        if (point.labels[i]) {
          out += '~' + point.signs[i] + '~';
        } else {
          out += point.signs[i];
        }
        break;
      case OutputStyle::tilde_suffix:
        out += point.signs[i];
        if (point.labels[i]) out += '~';
        break;
      case OutputStyle::binary:
        out += point.labels[i] ? '1' : '0';
        break;
    }
  }
  return out;
}

DataPoint parse_output(OutputStyle style, std::string_view text) {
  if (style == OutputStyle::binary) {
    throw FormatError(0, "binary output carries no sign codes to recover");
  }
  DataPoint point;
  point.raw = std::string(text);
  std::istringstream in(point.raw);
  std::string field;
  while (in >> field) {
    bool clf = false;
    if (style == OutputStyle::tilde_pair) {
      if (field.size() > 2 && field.front() == '~' && field.back() == '~') {
        clf = true;
        field = field.substr(1, field.size() - 2);
      }
    } else {
      if (field.size() > 1 && field.back() == '~') {
        clf = true;
        field.pop_back();
      }
    }
    if (field.empty() || field.find('~') != std::string::npos) {
      throw FormatError(0, "malformed sign field: " + field);
    }
    point.signs.push_back(field);
    point.labels.push_back(clf ? 1 : 0);
  }
  return point;
}

OutputStyle output_style_from_name(std::string_view name) {
  if (name == "tilde_pair") return OutputStyle::tilde_pair;
  if (name == "tilde_suffix") return OutputStyle::tilde_suffix;
  if (name == "binary") return OutputStyle::binary;
  throw std::invalid_argument("unknown output style: " + std::string(name));
}

}  // namespace hieroclf
