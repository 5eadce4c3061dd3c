#pragma once

#include <filesystem>
#include <string>

#include "kbc/serialization.hpp"

namespace kbc::cli {

/// Reads a JSON document, or a TOML one when the extension is .toml.
Json read_config_file(const std::filesystem::path& path);

/// Writes via a temporary file and a rename, so readers never see partial output.
void write_text_atomic(const std::filesystem::path& path, const std::string& text);
void write_json(const std::filesystem::path& path, const Json& j);

std::string read_text(const std::filesystem::path& path);

}  // namespace kbc::cli
