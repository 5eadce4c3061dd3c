#pragma once

#include <filesystem>

#include "kbc/model.hpp"

namespace kbc {

// Checkpoint layout, little-endian:
//   "KBCK", u32 version (1), u8 variant, u8 bytes per entry (4 or 8), u16 reserved,
//   u32 N, u32 P, u32 R, u32 factor count, then each factor row-major.

void save_checkpoint(const ModelParams& model, const std::filesystem::path& path);

/// Reads either precision, converting to Real.
ModelParams load_checkpoint(const std::filesystem::path& path);

}  // namespace kbc
