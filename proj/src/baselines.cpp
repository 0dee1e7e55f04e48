#include "hieroclf/baselines.hpp"

#include <algorithm>
#include <sstream>
#include <stdexcept>

#include "hieroclf/metric.hpp"

namespace hieroclf {

SignFrequencyTable fit(const Corpus& train) {
  if (train.points.empty()) {
    throw std::invalid_argument("cannot fit sign frequencies on an empty corpus");
  }
  SignFrequencyTable table;
  for (const DataPoint& p : train.points) {
    for (std::size_t i = 0; i < p.signs.size(); ++i) {
      SignFrequency& f = table[p.signs[i]];
      if (p.labels[i]) {
        ++f.clf;
      } else {
        ++f.non_clf;
      }
    }
  }
  return table;
}

BaselinePredictor top_n(const SignFrequencyTable& table, int n) {
  if (n < 1) throw std::invalid_argument("top_n requires n >= 1");
  std::vector<std::pair<std::string, long>> ranked;
  for (const auto& [sign, freq] : table) {
    if (freq.clf > 0) ranked.emplace_back(sign, freq.clf);
  }
  std::stable_sort(ranked.begin(), ranked.end(),
                   [](const auto& a, const auto& b) {
                     if (a.second != b.second) return a.second > b.second;
                     return a.first < b.first;
                   });
  BaselinePredictor p{"top_" + std::to_string(n), {}};
  for (std::size_t i = 0; i < ranked.size() && i < static_cast<std::size_t>(n);
       ++i) {
    p.marked.insert(ranked[i].first);
  }
  return p;
}

BaselinePredictor clf_only(const SignFrequencyTable& table) {
  BaselinePredictor p{"clf_only", {}};
  for (const auto& [sign, freq] : table) {
    if (freq.clf > 0 && freq.non_clf == 0) p.marked.insert(sign);
  }
  return p;
}

BaselinePredictor clf_majority(const SignFrequencyTable& table) {
  BaselinePredictor p{"clf_majority", {}};
  for (const auto& [sign, freq] : table) {
    if (freq.clf > freq.non_clf) p.marked.insert(sign);
  }
  return p;
}

int select_top_n(const SignFrequencyTable& table, const Corpus& dev,
                 std::span<const int> candidates) {
  if (candidates.empty()) {
    throw std::invalid_argument("select_top_n needs at least one candidate");
  }
  int best_n = 0;
  double best_error = 0.0;
  bool first = true;
  for (int n : candidates) {
    BaselinePredictor predictor = top_n(table, n);
    std::vector<std::vector<int>> predictions;
    predictions.reserve(dev.size());
    for (const DataPoint& p : dev.points) {
      predictions.push_back(predict(predictor, p.signs));
    }
    double error = score(dev, predictions).mean_errors_per_point;
    if (first || error < best_error ||
        (error == best_error && n < best_n)) {
      best_n = n;
      best_error = error;
      first = false;
    }
  }
  return best_n;
}

std::span<const int> default_top_n_candidates() {
  static constexpr int kCandidates[] = {5, 10, 20, 30, 50, 100};
  return kCandidates;
}

std::vector<int> predict(const BaselinePredictor& predictor,
                         std::span<const std::string> signs) {
  std::vector<int> labels;
  labels.reserve(signs.size());
  for (const std::string& s : signs) {
    labels.push_back(predictor.marked.count(s) ? 1 : 0);
  }
  return labels;
}

std::string export_table(const SignFrequencyTable& table) {
  std::ostringstream out;
  out << "sign\tclf_count\tnon_clf_count\n";
  for (const auto& [sign, freq] : table) {
    out << sign << '\t' << freq.clf << '\t' << freq.non_clf << '\n';
  }
  return out.str();
}

}  // namespace hieroclf
