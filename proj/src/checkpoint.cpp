#include "hieroclf/nn/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "hieroclf/errors.hpp"

static_assert(std::endian::native == std::endian::little,
              "checkpoint format assumes a little-endian host");

namespace hieroclf::nn {

namespace {

constexpr char kMagic[8] = {'H', 'C', 'L', 'F', 'C', 'K', 'P', 'T'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& out, std::uint32_t value) {
  out.write(reinterpret_cast<const char*>(&value), sizeof(value));
}

std::uint32_t read_u32(std::istream& in, const char* what) {
  std::uint32_t value = 0;
  if (!in.read(reinterpret_cast<char*>(&value), sizeof(value))) {
    throw IoError(std::string("checkpoint truncated while reading ") + what);
  }
  return value;
}

}  // namespace

void save_checkpoint(const std::filesystem::path& path, const ModelConfig& cfg,
                     const Params<float>& params) {
  validate_shapes(params, cfg);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write checkpoint: " + path.string());

  out.write(kMagic, sizeof(kMagic));
  write_u32(out, kVersion);
  write_u32(out, cfg.kind == VocabKind::sign ? 0 : 1);
  write_u32(out, static_cast<std::uint32_t>(cfg.layers));
  write_u32(out, static_cast<std::uint32_t>(cfg.hidden));
  write_u32(out, static_cast<std::uint32_t>(cfg.embedding_dim));
  write_u32(out, static_cast<std::uint32_t>(cfg.vocab_size));
  write_u32(out, kOutputVocabSize);

  std::uint32_t tensors = 0;
  params.for_each_tensor(
      [&](std::string_view, const Matrix<float>&) { ++tensors; });
  write_u32(out, tensors);

  params.for_each_tensor([&](std::string_view, const Matrix<float>& m) {
    write_u32(out, static_cast<std::uint32_t>(m.rows()));
    write_u32(out, static_cast<std::uint32_t>(m.cols()));
    out.write(reinterpret_cast<const char*>(m.data()),
              static_cast<std::streamsize>(sizeof(float)) * m.size());
  });
  if (!out) throw IoError("failed writing checkpoint: " + path.string());
}

std::pair<ModelConfig, Params<float>> load_checkpoint(
    const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());

  char magic[8];
  if (!in.read(magic, sizeof(magic)) ||
      std::memcmp(magic, kMagic, sizeof(kMagic)) != 0) {
    throw IoError("not a checkpoint file: " + path.string());
  }
  if (read_u32(in, "version") != kVersion) {
    throw IoError("unsupported checkpoint version");
  }

  ModelConfig cfg;
  cfg.kind = read_u32(in, "kind") == 0 ? VocabKind::sign : VocabKind::character;
  cfg.layers = static_cast<int>(read_u32(in, "layers"));
  cfg.hidden = static_cast<int>(read_u32(in, "hidden"));
  cfg.embedding_dim = static_cast<int>(read_u32(in, "embedding_dim"));
  cfg.vocab_size = static_cast<int>(read_u32(in, "vocab_size"));
  if (read_u32(in, "output_vocab") != kOutputVocabSize) {
    throw IoError("unexpected output vocabulary size");
  }

  Params<float> params = zero_params<float>(cfg);
  std::uint32_t expected = 0;
  params.for_each_tensor(
      [&](std::string_view, const Matrix<float>&) { ++expected; });
  if (read_u32(in, "tensor count") != expected) {
    throw IoError("checkpoint tensor count disagrees with configuration");
  }

  params.for_each_tensor([&](std::string_view name, Matrix<float>& m) {
    auto rows = read_u32(in, "tensor rows");
    auto cols = read_u32(in, "tensor cols");
    if (rows != static_cast<std::uint32_t>(m.rows()) ||
        cols != static_cast<std::uint32_t>(m.cols())) {
      throw IoError("tensor " + std::string(name) + " has unexpected shape");
    }
    if (!in.read(reinterpret_cast<char*>(m.data()),
                 static_cast<std::streamsize>(sizeof(float)) * m.size())) {
      throw IoError("checkpoint truncated in tensor " + std::string(name));
    }
  });
  return {cfg, std::move(params)};
}

}  // namespace hieroclf::nn
