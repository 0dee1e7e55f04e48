#pragma once

#include <map>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "hieroclf/corpus.hpp"

namespace hieroclf {

/// Exact per-sign occurrence tallies over a fitting corpus, split by
/// classifier vs. non-classifier function.
struct SignFrequency {
  long clf = 0;
  long non_clf = 0;
};

using SignFrequencyTable = std::map<std::string, SignFrequency>;

/// Context-free predictor: a sign is labelled 1 iff its code is marked.
struct BaselinePredictor {
  std::string rule;
  std::set<std::string> marked;
};

/// Tally every sign occurrence in the corpus.
SignFrequencyTable fit(const Corpus& train);

/// The n signs with the highest classifier counts (ties broken by sign code);
/// signs never seen as classifiers are not eligible.
BaselinePredictor top_n(const SignFrequencyTable& table, int n);

/// Signs that only ever appear as classifiers.
BaselinePredictor clf_only(const SignFrequencyTable& table);

/// Signs that appear strictly more often as classifiers than not.
BaselinePredictor clf_majority(const SignFrequencyTable& table);

/// The candidate n with the lowest mean sign error on dev; ties go to the
/// smaller n. Candidates must be non-empty.
int select_top_n(const SignFrequencyTable& table, const Corpus& dev,
                 std::span<const int> candidates);

/// Default candidate set for select_top_n.
std::span<const int> default_top_n_candidates();

std::vector<int> predict(const BaselinePredictor& predictor,
                         std::span<const std::string> signs);

/// Tab-separated export: sign, clf count, non-clf count.
std::string export_table(const SignFrequencyTable& table);

}  // namespace hieroclf
