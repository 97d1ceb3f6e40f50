#include "ocx/csv.hpp"

#include <cctype>
#include <charconv>
#include <sstream>

#include "ocx/errors.hpp"
#include "ocx/heatmap.hpp"
#include "ocx/util.hpp"

namespace ocx {

std::vector<double> parse_csv_line(const std::string& line, std::size_t line_no) {
  std::vector<double> values;
  std::size_t begin = 0;
  while (begin <= line.size()) {
    std::size_t end = line.find(',', begin);
    if (end == std::string::npos) end = line.size();
    std::size_t lo = begin, hi = end;
    while (lo < hi && std::isspace(static_cast<unsigned char>(line[lo]))) ++lo;
    while (hi > lo && std::isspace(static_cast<unsigned char>(line[hi - 1]))) --hi;
    double value = 0.0;
    const auto res = std::from_chars(line.data() + lo, line.data() + hi, value);
    if (res.ec != std::errc() || res.ptr != line.data() + hi || lo == hi) {
      throw IoError("CSV line " + std::to_string(line_no) + ": bad number '" +
                    line.substr(begin, end - begin) + "'");
    }
    values.push_back(value);
    begin = end + 1;
    if (end == line.size()) break;
  }
  return values;
}

Matrix read_csv_matrix(const std::filesystem::path& path, bool skip_header) {
  std::istringstream in(read_file(path));
  Matrix out;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1 && skip_header) continue;
    if (line.empty()) continue;
    try {
      out.push_row(parse_csv_line(line, line_no));
    } catch (const ShapeError&) {
      throw IoError("CSV line " + std::to_string(line_no) + ": ragged row in " +
                    path.string());
    }
  }
  if (out.empty()) throw IoError("CSV has no data rows: " + path.string());
  return out;
}

void write_heatmap_csv(const Heatmap& map, const std::filesystem::path& path) {
  std::string out;
  for (std::size_t i = 0; i < map.r.size(); ++i) {
    out += std::to_string(i);
    out += ',';
    out += format_double(map.r[i]);
    out += '\n';
  }
  write_file_atomic(path, out);
}

Heatmap read_heatmap_csv(const std::filesystem::path& path) {
  std::istringstream in(read_file(path));
  std::string line;
  std::size_t line_no = 0;
  std::vector<std::pair<std::size_t, double>> entries;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto values = parse_csv_line(line, line_no);
    if (values.size() != 2) {
      throw IoError("heatmap CSV expects rows 'index,relevance': " + path.string());
    }
    entries.emplace_back(static_cast<std::size_t>(values[0]), values[1]);
  }
  Heatmap map;
  map.r.assign(entries.size(), 0.0);
  std::vector<bool> filled(entries.size(), false);
  for (const auto& [index, value] : entries) {
    if (index >= map.r.size() || filled[index]) {
      throw IoError("heatmap CSV indices must cover 0..d-1 exactly once: " +
                    path.string());
    }
    map.r[index] = value;
    filled[index] = true;
    map.total += value;
  }
  return map;
}

}  // namespace ocx
