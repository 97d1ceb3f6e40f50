#pragma once

#include <cstddef>
#include <filesystem>
#include <functional>
#include <string>
#include <string_view>

namespace ocx {

// Shortest decimal representation that parses back to the same double.
std::string format_double(double value);

std::string read_file(const std::filesystem::path& path);

// Writes to a sibling temp file and renames it into place.
void write_file_atomic(const std::filesystem::path& path, std::string_view contents);

// Worker count: hardware concurrency capped by the OCX_THREADS variable.
unsigned thread_budget();

// Runs body(begin, end) over contiguous chunks of [0, count). With one
// thread (or small counts) everything stays on the calling thread.
void parallel_for(std::size_t count, unsigned threads,
                  const std::function<void(std::size_t, std::size_t)>& body);

}  // namespace ocx
