#pragma once

#include <filesystem>
#include <utility>

#include "hieroclf/nn/seq2seq.hpp"

namespace hieroclf::nn {

/// Versioned binary model file: "HCLFCKPT", format version, the model
/// configuration, then every tensor in declared order as little-endian
/// 32-bit floats (column-major), each preceded by its dimensions.
void save_checkpoint(const std::filesystem::path& path, const ModelConfig& cfg,
                     const Params<float>& params);

std::pair<ModelConfig, Params<float>> load_checkpoint(
    const std::filesystem::path& path);

}  // namespace hieroclf::nn
