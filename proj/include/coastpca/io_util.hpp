#ifndef COASTPCA_IO_UTIL_HPP
#define COASTPCA_IO_UTIL_HPP

#include <filesystem>
#include <string>
#include <string_view>

namespace coastpca {

/// Serializes a double with 17 significant digits (lossless round-trip).
std::string format_double(double v);

/// Writes content to a temporary file beside `path` and renames it into
/// place, so a failed run never leaves a partial output file.
void atomic_write_file(const std::filesystem::path& path,
                       std::string_view content);

/// Reads a whole file; throws parse_error when it cannot be opened.
std::string read_file(const std::filesystem::path& path);

}  // namespace coastpca

#endif
