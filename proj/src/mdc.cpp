#include "hieroclf/mdc.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace hieroclf::mdc {

namespace {

// Ordered so that overlapping literals are tried longest first
// (backslash runs, _GROUPING_ before _).
constexpr std::array<std::string_view, 15> kDelimiters = {
    "_GROUPING_", "\\\\\\\\", "\\\\", "\\", "-", ":", "^",
    "(",          ")",        "&",    "{",  "}", ",", "*", "_"};

// Code literals that are not hieroglyphs. "#b-..#e" is tried before its
// prefixes "#b"/"#e".
constexpr std::array<std::string_view, 6> kSpecialCodes = {
    "#b-..#e", "#b", "#e", "[&", "&]", "."};

constexpr int kMaxDepth = 2000;

bool is_ascii_alpha(char c) {
  return (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z');
}

bool is_ascii_digit(char c) { return c >= '0' && c <= '9'; }

bool is_ws(char c) {
  return c == ' ' || c == '\t' || c == '\r' || c == '\n';
}

// /[a-zA-Z]+[0-9]*[a-zA-Z]*/, maximal munch. Returns matched length or 0.
std::size_t match_alpha_code(std::string_view t, std::size_t pos) {
  std::size_t p = pos;
  while (p < t.size() && is_ascii_alpha(t[p])) ++p;
  if (p == pos) return 0;
  while (p < t.size() && is_ascii_digit(t[p])) ++p;
  while (p < t.size() && is_ascii_alpha(t[p])) ++p;
  return p - pos;
}

std::size_t match_digits(std::string_view t, std::size_t pos) {
  std::size_t p = pos;
  while (p < t.size() && is_ascii_digit(t[p])) ++p;
  return p - pos;
}

// Digit run short enough to read into a long.
std::optional<std::pair<long, std::size_t>> read_number(std::string_view t,
                                                        std::size_t pos) {
  std::size_t len = match_digits(t, pos);
  if (len == 0 || len > 9) return std::nullopt;
  long value = 0;
  for (std::size_t i = 0; i < len; ++i) value = value * 10 + (t[pos + i] - '0');
  return std::make_pair(value, len);
}

// /\{\{\d+,\d+,\d+\}\}/
std::optional<std::pair<std::array<long, 3>, std::size_t>> match_ligature(
    std::string_view t, std::size_t pos) {
  std::size_t p = pos;
  if (t.substr(p, 2) != "{{") return std::nullopt;
  p += 2;
  std::array<long, 3> values{};
  for (int i = 0; i < 3; ++i) {
    auto num = read_number(t, p);
    if (!num) return std::nullopt;
    values[i] = num->first;
    p += num->second;
    if (i < 2) {
      if (p >= t.size() || t[p] != ',') return std::nullopt;
      ++p;
    }
  }
  if (t.substr(p, 2) != "}}") return std::nullopt;
  return std::make_pair(values, p + 2 - pos);
}

// /#\d+/
std::optional<std::pair<long, std::size_t>> match_damage(std::string_view t,
                                                         std::size_t pos) {
  if (pos >= t.size() || t[pos] != '#') return std::nullopt;
  auto num = read_number(t, pos + 1);
  if (!num) return std::nullopt;
  return std::make_pair(num->first, num->second + 1);
}

// Backtracking recogniser for the wordform grammar. The grammar is ambiguous
// ("(", ")", "{", "}" double as delimiters; "~" wraps signs and sequences;
// "{{a,b,c}}" can read as a ligature or as delimiter/code runs), so every
// choice point enumerates its alternatives in a fixed order and yields to a
// continuation; the first complete parse wins. Inputs are short wordforms,
// so the worst-case backtracking cost is irrelevant.
class Parser {
 public:
  explicit Parser(std::string_view text) : text_(text) {}

  Node run() {
    Node root = Node::make_sequence(Node::Wrap::none);
    std::size_t start = skip_ws(0);
    auto done = [&](std::size_t pos) {
      std::size_t p = skip_ws(pos);
      if (p == text_.size()) return true;
      fail(p, "end of input");
      return false;
    };
    if (!atom_into(start, root.children, done)) {
      throw ParseError(furthest_, expected_);
    }
    return root;
  }

 private:
  using Cont = std::function<bool(std::size_t)>;
  using NodeCont = std::function<bool(std::size_t, const Node&)>;

  std::string_view text_;
  std::size_t furthest_ = 0;
  std::set<std::string> expected_;
  int depth_ = 0;

  void fail(std::size_t pos, std::string what) {
    if (pos > furthest_) {
      furthest_ = pos;
      expected_.clear();
    }
    if (pos == furthest_) expected_.insert(std::move(what));
  }

  std::size_t skip_ws(std::size_t pos) const {
    while (pos < text_.size() && is_ws(text_[pos])) ++pos;
    return pos;
  }

  struct DepthGuard {
    Parser& parser;
    explicit DepthGuard(Parser& p, std::size_t pos) : parser(p) {
      if (++parser.depth_ > kMaxDepth) {
        --parser.depth_;
        throw ParseError(pos, {"shallower nesting"});
      }
    }
    ~DepthGuard() { --parser.depth_; }
  };

  // Enumerate code lexemes at pos, longest first where literals overlap.
  bool each_code(std::size_t pos,
                 const std::function<bool(std::string_view)>& f) {
    if (pos >= text_.size()) return false;
    const char c = text_[pos];
    if (is_ascii_alpha(c)) {
      std::size_t len = match_alpha_code(text_, pos);
      return f(text_.substr(pos, len));
    }
    if (is_ascii_digit(c)) {
      std::size_t len = match_digits(text_, pos);
      return f(text_.substr(pos, len));
    }
    for (std::string_view lit : kSpecialCodes) {
      if (text_.substr(pos).starts_with(lit) && f(lit)) return true;
    }
    return false;
  }

  // code suffix? alternatives: lig+damage, damage+lig, lig, damage, none.
  bool sign_with_suffix(std::size_t pos, ParsedSign base, const NodeCont& k) {
    if (auto lig = match_ligature(text_, pos)) {
      if (auto dam = match_damage(text_, pos + lig->second)) {
        ParsedSign s = base;
        s.suffix = Suffix{lig->first, dam->first, false};
        if (k(pos + lig->second + dam->second, Node::make_sign(std::move(s))))
          return true;
      }
      ParsedSign s = base;
      s.suffix = Suffix{lig->first, std::nullopt, false};
      if (k(pos + lig->second, Node::make_sign(std::move(s)))) return true;
    }
    if (auto dam = match_damage(text_, pos)) {
      if (auto lig = match_ligature(text_, pos + dam->second)) {
        ParsedSign s = base;
        s.suffix = Suffix{lig->first, dam->first, true};
        if (k(pos + dam->second + lig->second, Node::make_sign(std::move(s))))
          return true;
      }
      ParsedSign s = base;
      s.suffix = Suffix{std::nullopt, dam->first, true};
      if (k(pos + dam->second, Node::make_sign(std::move(s)))) return true;
    }
    return k(pos, Node::make_sign(std::move(base)));
  }

  // One grammar atom: "(" sequence ")" | "~" code "~" suffix?
  // | "~" sequence "~" | code suffix?
  bool atom(std::size_t pos, const NodeCont& k) {
    DepthGuard guard(*this, pos);
    if (pos >= text_.size()) {
      fail(pos, "sign");
      return false;
    }
    const char c = text_[pos];

    if (c == '(') {
      Node seq = Node::make_sequence(Node::Wrap::parens);
      std::size_t inner = skip_ws(pos + 1);
      return atom_into(inner, seq.children, [&](std::size_t p) {
        std::size_t q = skip_ws(p);
        if (q < text_.size() && text_[q] == ')') return k(q + 1, seq);
        fail(q, "')'");
        return false;
      });
    }

    if (c == '~') {
      std::size_t inner = skip_ws(pos + 1);
      // Single tilde-marked sign first: only this form admits a suffix.
      bool ok = each_code(inner, [&](std::string_view code) {
        std::size_t after = skip_ws(inner + code.size());
        if (after < text_.size() && text_[after] == '~') {
          return sign_with_suffix(after + 1,
                                  ParsedSign{std::string(code), {}, true}, k);
        }
        fail(after, "'~'");
        return false;
      });
      if (ok) return true;
      Node seq = Node::make_sequence(Node::Wrap::tilde);
      return atom_into(inner, seq.children, [&](std::size_t p) {
        std::size_t q = skip_ws(p);
        if (q < text_.size() && text_[q] == '~') return k(q + 1, seq);
        fail(q, "'~'");
        return false;
      });
    }

    bool lexed = each_code(pos, [&](std::string_view code) {
      return sign_with_suffix(pos + code.size(),
                              ParsedSign{std::string(code), {}, false}, k);
    });
    if (!lexed) fail(pos, "sign");
    return lexed;
  }

  // atom, then the rest of the enclosing item list.
  bool atom_into(std::size_t pos, std::vector<Node>& items, const Cont& k) {
    return atom(pos, [&](std::size_t p, const Node& node) {
      items.push_back(node);
      if (rest_of_list(p, items, k)) return true;
      items.pop_back();
      return false;
    });
  }

  // After an atom: stop, or a delimiter run, or (when whitespace separated)
  // directly another atom.
  bool rest_of_list(std::size_t pos, std::vector<Node>& items, const Cont& k) {
    if (k(pos)) return true;
    std::size_t p = skip_ws(pos);
    if (delim_run(p, items, k)) return true;
    if (p != pos && atom_into(p, items, k)) return true;
    return false;
  }

  // One or more delimiters, then an atom continuing the list.
  bool delim_run(std::size_t pos, std::vector<Node>& items, const Cont& k) {
    DepthGuard guard(*this, pos);
    bool lexed = false;
    for (std::string_view d : kDelimiters) {
      if (!text_.substr(pos).starts_with(d)) continue;
      lexed = true;
      items.push_back(Node::make_delimiter(std::string(d)));
      std::size_t p = skip_ws(pos + d.size());
      if (atom_into(p, items, k)) return true;
      if (delim_run(p, items, k)) return true;
      items.pop_back();
    }
    if (!lexed) fail(pos, "delimiter");
    return false;
  }
};

void flatten_into(const Node& node, bool in_tilde_scope,
                  std::vector<FlatSign>& out) {
  switch (node.kind) {
    case Node::Kind::sign:
      if (!is_special_code(node.sign.code)) {
        out.push_back(
            {node.sign.code, in_tilde_scope || node.sign.tilde_marked});
      }
      break;
    case Node::Kind::delimiter:
      break;
    case Node::Kind::sequence: {
      bool scoped = in_tilde_scope || node.wrap == Node::Wrap::tilde;
      for (const Node& child : node.children) {
        flatten_into(child, scoped, out);
      }
      break;
    }
  }
}

void serialise_into(const Node& node, std::string& out) {
  switch (node.kind) {
    case Node::Kind::sign:
      if (node.sign.tilde_marked) {
        out += '~';
        out += node.sign.code;
        out += '~';
      } else {
        out += node.sign.code;
      }
      if (node.sign.suffix) out += node.sign.suffix->text();
      break;
    case Node::Kind::delimiter:
      out += node.delimiter.kind;
      break;
    case Node::Kind::sequence: {
      if (node.wrap == Node::Wrap::parens) out += '(';
      if (node.wrap == Node::Wrap::tilde) out += '~';
      const Node* prev = nullptr;
      for (const Node& child : node.children) {
        if (prev && prev->kind != Node::Kind::delimiter &&
            child.kind != Node::Kind::delimiter) {
          out += ' ';  // whitespace-separated neighbours
        }
        serialise_into(child, out);
        prev = &child;
      }
      if (node.wrap == Node::Wrap::parens) out += ')';
      if (node.wrap == Node::Wrap::tilde) out += '~';
      break;
    }
  }
}

void dump_into(const Node& node, int indent, std::string& out) {
  out.append(static_cast<std::size_t>(indent) * 2, ' ');
  switch (node.kind) {
    case Node::Kind::sign:
      out += node.sign.tilde_marked ? "sign ~" + node.sign.code + "~"
                                    : "sign " + node.sign.code;
      if (node.sign.suffix) out += " suffix " + node.sign.suffix->text();
      out += '\n';
      break;
    case Node::Kind::delimiter:
      out += "delimiter \"" + node.delimiter.kind + "\"\n";
      break;
    case Node::Kind::sequence:
      out += "sequence";
      if (node.wrap == Node::Wrap::parens) out += " (grouped)";
      if (node.wrap == Node::Wrap::tilde) out += " (tilde scope)";
      out += '\n';
      for (const Node& child : node.children) {
        dump_into(child, indent + 1, out);
      }
      break;
  }
}

}  // namespace

std::string Suffix::text() const {
  std::string lig;
  if (ligature) {
    lig = "{{" + std::to_string((*ligature)[0]) + "," +
          std::to_string((*ligature)[1]) + "," +
          std::to_string((*ligature)[2]) + "}}";
  }
  std::string dam = damage ? "#" + std::to_string(*damage) : "";
  return damage_first ? dam + lig : lig + dam;
}

Node Node::make_sign(ParsedSign s) {
  Node n;
  n.kind = Kind::sign;
  n.sign = std::move(s);
  return n;
}

Node Node::make_delimiter(std::string kind) {
  Node n;
  n.kind = Kind::delimiter;
  n.delimiter = Delimiter{std::move(kind)};
  return n;
}

Node Node::make_sequence(Wrap wrap) {
  Node n;
  n.kind = Kind::sequence;
  n.wrap = wrap;
  return n;
}

namespace {

std::string describe(std::size_t offset, const std::set<std::string>& expected) {
  std::ostringstream msg;
  msg << "parse error at byte " << offset << ": expected ";
  bool first = true;
  for (const std::string& e : expected) {
    if (!first) msg << " or ";
    msg << e;
    first = false;
  }
  if (expected.empty()) msg << "valid input";
  return msg.str();
}

}  // namespace

ParseError::ParseError(std::size_t offset, std::set<std::string> expected)
    : std::runtime_error(describe(offset, expected)),
      offset_(offset),
      expected_(std::move(expected)) {}

bool is_special_code(std::string_view code) {
  return std::find(kSpecialCodes.begin(), kSpecialCodes.end(), code) !=
         kSpecialCodes.end();
}

ParsedToken parse(std::string_view text) {
  Parser parser(text);
  return ParsedToken{parser.run()};
}

std::vector<FlatSign> flatten(const ParsedToken& token) {
  std::vector<FlatSign> out;
  flatten_into(token.root, false, out);
  return out;
}

std::string serialise(const ParsedToken& token) {
  std::string out;
  serialise_into(token.root, out);
  return out;
}

std::string dump_tree(const ParsedToken& token) {
  std::string out;
  dump_into(token.root, 0, out);
  return out;
}

}  // namespace hieroclf::mdc
