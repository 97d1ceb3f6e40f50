#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "ocx/matrix.hpp"

namespace ocx {

// Comma-separated doubles, one sample per row. `skip_header` drops one line.
Matrix read_csv_matrix(const std::filesystem::path& path, bool skip_header = false);

// Parses one CSV line into doubles. Throws IoError on malformed fields.
std::vector<double> parse_csv_line(const std::string& line, std::size_t line_no);

}  // namespace ocx
