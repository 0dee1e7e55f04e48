#include "hieroclf/metric.hpp"

#include <iomanip>
#include <sstream>

#include "hieroclf/errors.hpp"

namespace hieroclf {

std::vector<int> postprocess(std::string_view decoded, std::size_t n_signs) {
  std::vector<int> labels;
  labels.reserve(n_signs);
  std::istringstream in{std::string(decoded)};
  std::string field;
  while (labels.size() < n_signs && in >> field) {
    labels.push_back(field == "1" ? 1 : 0);
  }
  while (labels.size() < n_signs) labels.push_back(0);
  return labels;
}

EvalReport score(const Corpus& gold,
                 const std::vector<std::vector<int>>& predictions) {
  if (predictions.size() != gold.size()) {
    throw LengthError("prediction count " + std::to_string(predictions.size()) +
                      " != corpus size " + std::to_string(gold.size()));
  }
  EvalReport report;
  report.total_points = static_cast<long>(gold.size());
  for (std::size_t i = 0; i < gold.size(); ++i) {
    const auto& want = gold.points[i].labels;
    const auto& got = predictions[i];
    if (got.size() != want.size()) {
      throw LengthError("prediction " + std::to_string(i) + " has length " +
                        std::to_string(got.size()) + ", expected " +
                        std::to_string(want.size()));
    }
    int errors = 0;
    for (std::size_t j = 0; j < want.size(); ++j) {
      if ((got[j] != 0) != (want[j] != 0)) ++errors;
    }
    report.per_point_errors.push_back(errors);
    report.total_sign_errors += errors;
  }
  report.mean_errors_per_point =
      report.total_points == 0
          ? 0.0
          : static_cast<double>(report.total_sign_errors) /
                static_cast<double>(report.total_points);
  return report;
}

std::string report_key_values(const EvalReport& report) {
  std::ostringstream out;
  out << "mean_errors_per_point = " << std::setprecision(10)
      << report.mean_errors_per_point << '\n'
      << "total_points = " << report.total_points << '\n'
      << "total_sign_errors = " << report.total_sign_errors << '\n';
  return out.str();
}

std::string report_table_row(std::string_view label,
                             const std::vector<EvalReport>& reports) {
  std::ostringstream out;
  out << label;
  out << std::fixed << std::setprecision(2);
  for (const EvalReport& r : reports) out << '\t' << r.mean_errors_per_point;
  return out.str();
}

}  // namespace hieroclf
