#pragma once

#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "hieroclf/corpus.hpp"

namespace hieroclf {

enum class VocabKind { sign, character };

VocabKind vocab_kind_from_name(std::string_view name);
std::string_view vocab_kind_name(VocabKind kind);

/// Token <-> id map with fixed reserved ids. Char-level tokens are single
/// characters (sign-code characters plus ' ' as the sign separator);
/// sign-level tokens are whole sign codes. Immutable once built.
class Vocabulary {
 public:
  static constexpr int kPad = 0;
  static constexpr int kSos = 1;
  static constexpr int kEos = 2;
  static constexpr int kUnk = 3;
  static constexpr int kReserved = 4;

  explicit Vocabulary(VocabKind kind);

  VocabKind kind() const { return kind_; }
  int size() const { return static_cast<int>(id_to_token_.size()); }

  /// Id for a token, or -1 when absent.
  int find(std::string_view token) const;
  const std::string& token(int id) const;  // throws RangeError

  /// Appends a token if new; returns its id either way.
  int add(std::string_view token);

 private:
  VocabKind kind_;
  std::vector<std::string> id_to_token_;
  std::unordered_map<std::string, int> token_to_id_;
};

enum class OovPolicy {
  map_to_unk,  // default
  map_to_sos,  // reproduces the original setup's out-of-vocabulary handling
};

/// Every token observed in train, in first-occurrence order, after the
/// reserved ids. Throws std::invalid_argument on an empty corpus.
Vocabulary build_vocab(const Corpus& train, VocabKind kind);

/// SOS ... EOS wrapped encoding of a sign sequence.
std::vector<int> encode(const Vocabulary& vocab,
                        std::span<const std::string> signs,
                        OovPolicy oov = OovPolicy::map_to_unk);

/// Token strings for ids; reserved ids render as their sentinel strings.
/// Throws RangeError on an out-of-range id.
std::vector<std::string> decode(const Vocabulary& vocab,
                                std::span<const int> ids);

/// Versioned text format: header "hieroclf-vocab v1 <kind> <size>", then one
/// token per line in id order.
std::string serialise_vocab(const Vocabulary& vocab);
void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path);
Vocabulary load_vocab(const std::filesystem::path& path);

}  // namespace hieroclf
