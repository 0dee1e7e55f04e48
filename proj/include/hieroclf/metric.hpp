#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "hieroclf/corpus.hpp"

namespace hieroclf {

/// Sign-error report: mean number of mistakenly classified signs per data
/// point, plus the per-point breakdown.
struct EvalReport {
  double mean_errors_per_point = 0.0;
  long total_points = 0;
  long total_sign_errors = 0;
  std::vector<int> per_point_errors;
};

/// Coerce raw decoder text into a 0/1 vector of exactly n_signs labels:
/// split on whitespace, truncate when too long, pad with zeros when too
/// short, and map every field that is not "1" to 0.
std::vector<int> postprocess(std::string_view decoded, std::size_t n_signs);

/// Hamming distance per point against the gold labels, averaged over the
/// corpus. Predictions must already have gold sign length (LengthError).
EvalReport score(const Corpus& gold,
                 const std::vector<std::vector<int>>& predictions);

/// Machine-readable key=value block.
std::string report_key_values(const EvalReport& report);

/// One row of the results table: label, then one error column per report.
std::string report_table_row(std::string_view label,
                             const std::vector<EvalReport>& reports);

}  // namespace hieroclf
