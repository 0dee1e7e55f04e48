#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "hieroclf/mdc.hpp"

namespace hieroclf {

/// One wordform: the annotated source string, its sign codes and the aligned
/// 0/1 classifier labels.
struct DataPoint {
  std::string id;  // optional corpus-file id column
  std::string raw;
  std::vector<std::string> signs;
  std::vector<int> labels;

  int classifier_count() const;
};

struct Corpus {
  std::string name;
  std::vector<DataPoint> points;

  std::size_t size() const { return points.size(); }
};

/// Deterministic split request; ratios must be positive and sum to 1.
struct SplitSpec {
  std::uint64_t seed = 0;
  std::array<double, 3> ratios = {0.8, 0.1, 0.1};  // train, dev, test
};

/// Parse one annotated wordform into a data point (labels via flatten).
DataPoint make_data_point(std::string raw);

/// Load a corpus file: UTF-8, one record per line, either "<mdc>" or
/// "<id>\t<mdc>"; blank lines ignored. Throws IoError / FormatError.
Corpus load_corpus(const std::filesystem::path& path);

/// Write one record per line ("<id>\t<raw>" when an id is present).
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

/// Keep the first occurrence of each distinct (signs, labels) pair.
Corpus dedup_types(const Corpus& corpus);

/// Shuffle with the spec's seed and partition into train/dev/test. Dev and
/// test get floor(n * ratio) points each, the remainder goes to train.
std::array<Corpus, 3> split(const Corpus& corpus, const SplitSpec& spec);

/// count of classifiers per point -> number of points with that count.
std::map<int, long> clf_histogram(const Corpus& corpus);

enum class OutputStyle { tilde_pair, tilde_suffix, binary };

/// Render a data point in one of the three reference output styles.
std::string format_output(const DataPoint& point, OutputStyle style);

/// Inverse of format_output for the tilde styles (binary has no sign
/// information to recover). Throws FormatError on malformed input.
DataPoint parse_output(OutputStyle style, std::string_view text);

OutputStyle output_style_from_name(std::string_view name);

}  // namespace hieroclf
