#pragma once

#include <string>
#include <vector>

namespace refcover {

// Whole file as bytes; throws data_error if unreadable.
std::string read_file(const std::string& path);

// Lines split on '\n'; a trailing '\r' per line is stripped; a final
// newline does not produce an empty last line.
std::vector<std::string> read_lines(const std::string& path);

// Writes to a temp file in the same directory, then renames over the
// destination, so readers never observe a half-written file.
void write_file_atomic(const std::string& path, const std::string& content);

// Tab-separated rows; every row must have at least min_cols columns.
std::vector<std::vector<std::string>> read_tsv(const std::string& path,
                                               std::size_t min_cols);

}  // namespace refcover
