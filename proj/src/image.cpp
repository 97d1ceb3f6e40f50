#include "ocx/image.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <limits>
#include <string>

#include "ocx/errors.hpp"
#include "ocx/util.hpp"

namespace ocx {

namespace {

// Reads the next PNM header token, skipping whitespace and # comments.
std::string next_token(const std::string& data, std::size_t& pos) {
  while (pos < data.size()) {
    const char c = data[pos];
    if (c == '#') {
      while (pos < data.size() && data[pos] != '\n') ++pos;
    } else if (std::isspace(static_cast<unsigned char>(c))) {
      ++pos;
    } else {
      break;
    }
  }
  const std::size_t start = pos;
  while (pos < data.size() && !std::isspace(static_cast<unsigned char>(data[pos]))) ++pos;
  if (start == pos) throw IoError("truncated PNM header");
  return data.substr(start, pos - start);
}

std::size_t parse_size(const std::string& token) {
  std::size_t value = 0;
  for (char c : token) {
    if (c < '0' || c > '9') throw IoError("bad PNM header token: " + token);
    value = value * 10 + static_cast<std::size_t>(c - '0');
  }
  return value;
}

}  // namespace

Image read_pnm(const std::filesystem::path& path) {
  const std::string data = read_file(path);
  std::size_t pos = 0;
  const std::string magic = next_token(data, pos);
  std::size_t channels;
  if (magic == "P5") {
    channels = 1;
  } else if (magic == "P6") {
    channels = 3;
  } else {
    throw IoError("unsupported image format (want binary P5 or P6): " + path.string());
  }
  const std::size_t width = parse_size(next_token(data, pos));
  const std::size_t height = parse_size(next_token(data, pos));
  const std::size_t maxval = parse_size(next_token(data, pos));
  if (width == 0 || height == 0) throw IoError("empty image: " + path.string());
  if (maxval == 0 || maxval > 255) {
    throw IoError("only 8-bit images are supported: " + path.string());
  }
  ++pos;  // single whitespace byte after maxval

  const std::size_t count = height * width * channels;
  if (data.size() < pos + count) throw IoError("truncated pixel data: " + path.string());

  Image image(height, width, channels);
  for (std::size_t i = 0; i < count; ++i) {
    image.pixels[i] = static_cast<double>(static_cast<unsigned char>(data[pos + i]));
  }
  return image;
}

void write_pgm(const Image& image, const std::filesystem::path& path) {
  if (image.channels != 1) throw ShapeError("PGM output is single-channel");
  std::string out = "P5\n" + std::to_string(image.width) + " " +
                    std::to_string(image.height) + "\n255\n";
  out.reserve(out.size() + image.size());
  for (double v : image.pixels) {
    const double clamped = std::min(255.0, std::max(0.0, v));
    out.push_back(static_cast<char>(static_cast<unsigned char>(std::llround(clamped))));
  }
  write_file_atomic(path, out);
}

Image render_relevance(const Heatmap& map, std::size_t height, std::size_t width,
                       std::size_t channels) {
  if (map.r.size() != height * width * channels) {
    throw ShapeError("heatmap length does not match the requested shape");
  }
  Image out(height, width, 1);
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  for (std::size_t y = 0; y < height; ++y) {
    for (std::size_t x = 0; x < width; ++x) {
      double v = 0.0;
      for (std::size_t c = 0; c < channels; ++c) {
        v += map.r[(y * width + x) * channels + c];
      }
      out.at(y, x, 0) = v;
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  const double span = hi - lo;
  for (double& v : out.pixels) {
    v = span > 0.0 ? std::floor((v - lo) / span * 255.0 + 0.5) : 0.0;
  }
  return out;
}

}  // namespace ocx
