#pragma once

#include <array>
#include <optional>
#include <set>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hieroclf::mdc {

/// Ligature position and/or damage annotation attached to a sign.
/// At least one of the two parts is present; `damage_first` records the
/// order they appeared in so serialisation can reproduce it.
struct Suffix {
  std::optional<std::array<long, 3>> ligature;
  std::optional<long> damage;
  bool damage_first = false;

  std::string text() const;

  friend bool operator==(const Suffix&, const Suffix&) = default;
};

/// One sign occurrence. `tilde_marked` is true when the sign itself was
/// written as ~code~.
struct ParsedSign {
  std::string code;
  std::optional<Suffix> suffix;
  bool tilde_marked = false;

  friend bool operator==(const ParsedSign&, const ParsedSign&) = default;
};

struct Delimiter {
  std::string kind;

  friend bool operator==(const Delimiter&, const Delimiter&) = default;
};

/// Parse-tree node. A sequence node owns its children in document order;
/// two adjacent non-delimiter children were separated by whitespace in the
/// source.
struct Node {
  enum class Kind { sign, delimiter, sequence };
  enum class Wrap { none, parens, tilde };

  Kind kind = Kind::sequence;
  ParsedSign sign;       // kind == sign
  Delimiter delimiter;   // kind == delimiter
  Wrap wrap = Wrap::none;  // kind == sequence
  std::vector<Node> children;

  static Node make_sign(ParsedSign s);
  static Node make_delimiter(std::string kind);
  static Node make_sequence(Wrap wrap);
};

/// Parse tree of one wordform; root is an unwrapped sequence.
struct ParsedToken {
  Node root;
};

/// One entry of the flattened sign sequence.
struct FlatSign {
  std::string code;
  bool is_classifier = false;

  friend bool operator==(const FlatSign&, const FlatSign&) = default;
};

/// First grammar violation in the input: byte offset plus the set of symbols
/// that could have continued the parse there.
class ParseError : public std::runtime_error {
 public:
  ParseError(std::size_t offset, std::set<std::string> expected);

  std::size_t offset() const { return offset_; }
  const std::set<std::string>& expected() const { return expected_; }

 private:
  std::size_t offset_;
  std::set<std::string> expected_;
};

/// Non-hieroglyph code literals (damage/editorial markers) that flatten drops.
bool is_special_code(std::string_view code);

/// Parse one MdC wordform. Whitespace between tokens acts as a separator and
/// is otherwise ignored. Throws ParseError on the first violation.
ParsedToken parse(std::string_view text);

/// Signs in document order; delimiters, grouping, suffixes and special codes
/// are dropped. A sign is a classifier when tilde-marked or inside any
/// tilde-scoped sequence.
std::vector<FlatSign> flatten(const ParsedToken& token);

/// Canonical text of the tree: original codes, suffixes, tildes and
/// delimiters; whitespace-separated neighbours are joined with one space.
std::string serialise(const ParsedToken& token);

/// Indented listing of the tree, for the CLI.
std::string dump_tree(const ParsedToken& token);

}  // namespace hieroclf::mdc
