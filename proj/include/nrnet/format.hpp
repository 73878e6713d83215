#pragma once

#include <filesystem>
#include <string>
#include <string_view>

namespace nrnet {

/// 17 significant digits, round-trips through strtod. Non-finite values print
/// as "nan", "inf" and "-inf".
std::string format_double(double value);

/// Writes `text` to `path`, creating parent directories. Throws IoError.
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace nrnet
