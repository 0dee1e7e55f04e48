#include "hieroclf/vocab.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include "hieroclf/errors.hpp"

namespace hieroclf {

namespace {

constexpr std::string_view kSentinels[Vocabulary::kReserved] = {
    "<pad>", "<sos>", "<eos>", "<unk>"};

}  // namespace

VocabKind vocab_kind_from_name(std::string_view name) {
  if (name == "sign") return VocabKind::sign;
  if (name == "char") return VocabKind::character;
  throw std::invalid_argument("unknown vocabulary kind: " + std::string(name));
}

std::string_view vocab_kind_name(VocabKind kind) {
  return kind == VocabKind::sign ? "sign" : "char";
}

Vocabulary::Vocabulary(VocabKind kind) : kind_(kind) {
  for (std::string_view s : kSentinels) add(s);
}

int Vocabulary::find(std::string_view token) const {
  auto it = token_to_id_.find(std::string(token));
  return it == token_to_id_.end() ? -1 : it->second;
}

const std::string& Vocabulary::token(int id) const {
  if (id < 0 || id >= size()) {
    throw RangeError("token id " + std::to_string(id) +
                     " outside vocabulary of size " + std::to_string(size()));
  }
  return id_to_token_[static_cast<std::size_t>(id)];
}

int Vocabulary::add(std::string_view token) {
  if (int id = find(token); id >= 0) return id;
  int id = size();
  id_to_token_.emplace_back(token);
  token_to_id_.emplace(token, id);
  return id;
}

Vocabulary build_vocab(const Corpus& train, VocabKind kind) {
  if (train.points.empty()) {
    throw std::invalid_argument("cannot build a vocabulary from an empty corpus");
  }
  Vocabulary vocab(kind);
  for (const DataPoint& p : train.points) {
    for (std::size_t i = 0; i < p.signs.size(); ++i) {
      if (kind == VocabKind::sign) {
        vocab.add(p.signs[i]);
      } else {
        if (i > 0) vocab.add(" ");
        for (char c : p.signs[i]) vocab.add(std::string_view(&c, 1));
      }
    }
  }
  return vocab;
}

std::vector<int> encode(const Vocabulary& vocab,
                        std::span<const std::string> signs, OovPolicy oov) {
  const int fallback =
      oov == OovPolicy::map_to_sos ? Vocabulary::kSos : Vocabulary::kUnk;
  auto lookup = [&](std::string_view token) {
    int id = vocab.find(token);
    return id >= 0 ? id : fallback;
  };

  std::vector<int> ids;
  ids.push_back(Vocabulary::kSos);
  for (std::size_t i = 0; i < signs.size(); ++i) {
    if (vocab.kind() == VocabKind::sign) {
      ids.push_back(lookup(signs[i]));
    } else {
      if (i > 0) ids.push_back(lookup(" "));
      for (char c : signs[i]) ids.push_back(lookup(std::string_view(&c, 1)));
    }
  }
  ids.push_back(Vocabulary::kEos);
  return ids;
}

std::vector<std::string> decode(const Vocabulary& vocab,
                                std::span<const int> ids) {
  std::vector<std::string> tokens;
  tokens.reserve(ids.size());
  for (int id : ids) tokens.push_back(vocab.token(id));
  return tokens;
}

std::string serialise_vocab(const Vocabulary& vocab) {
  std::ostringstream out;
  out << "hieroclf-vocab v1 " << vocab_kind_name(vocab.kind()) << ' '
      << vocab.size() << '\n';
  for (int id = 0; id < vocab.size(); ++id) out << vocab.token(id) << '\n';
  return out.str();
}

void save_vocab(const Vocabulary& vocab, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write vocabulary file: " + path.string());
  out << serialise_vocab(vocab);
}

Vocabulary load_vocab(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open vocabulary file: " + path.string());
  std::string header;
  if (!std::getline(in, header)) {
    throw FormatError(1, "missing vocabulary header");
  }
  std::istringstream hs(header);
  std::string magic, version, kind_name;
  int size = 0;
  if (!(hs >> magic >> version >> kind_name >> size) ||
      magic != "hieroclf-vocab" || version != "v1") {
    throw FormatError(1, "bad vocabulary header: " + header);
  }
  Vocabulary vocab(vocab_kind_from_name(kind_name));
  std::string line;
  int id = 0;
  while (id < size && std::getline(in, line)) {
    if (id < Vocabulary::kReserved) {
      if (line != kSentinels[id]) {
        throw FormatError(static_cast<std::size_t>(id) + 2,
                          "reserved token mismatch: " + line);
      }
    } else {
      vocab.add(line);
    }
    ++id;
  }
  if (id != size || vocab.size() != size) {
    throw FormatError(static_cast<std::size_t>(id) + 2,
                      "vocabulary truncated or has duplicate tokens");
  }
  return vocab;
}

}  // namespace hieroclf
