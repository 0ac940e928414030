// Copyright 2026 The ringret Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "ringret/pgm.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>

#include "ringret/errors.hpp"
#include "ringret/manifest.hpp"

namespace ringret {
namespace {

FormatError malformed(const std::string& what) {
  return FormatError(FormatError::Kind::kMalformed, "PGM: " + what);
}

// Reads one whitespace-delimited header integer, skipping `#` comments.
int read_header_int(std::string_view bytes, std::size_t& pos) {
  while (pos < bytes.size()) {
    if (std::isspace(static_cast<unsigned char>(bytes[pos]))) {
      ++pos;
    } else if (bytes[pos] == '#') {
      while (pos < bytes.size() && bytes[pos] != '\n') ++pos;
    } else {
      break;
    }
  }
  long value = 0;
  const std::size_t start = pos;
  while (pos < bytes.size() &&
         std::isdigit(static_cast<unsigned char>(bytes[pos]))) {
    value = value * 10 + (bytes[pos] - '0');
    if (value > 1'000'000) throw malformed("header value too large");
    ++pos;
  }
  if (pos == start) throw malformed("expected a header integer");
  return static_cast<int>(value);
}

}  // namespace

std::uint8_t quantize_coverage(double coverage) {
  const double clamped = std::clamp(coverage, 0.0, 1.0);
  return static_cast<std::uint8_t>(std::lround(255.0 * clamped));
}

std::string encode_pgm(const SilhouetteImage& image) {
  std::string out = "P5\n" + std::to_string(image.width()) + " " +
                    std::to_string(image.height()) + "\n255\n";
  out.reserve(out.size() +
              static_cast<std::size_t>(image.width()) * image.height());
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      out.push_back(static_cast<char>(quantize_coverage(image.coverage(y, x))));
    }
  }
  return out;
}

SilhouetteImage decode_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || bytes[1] != '5') {
    throw FormatError(FormatError::Kind::kBadMagic, "PGM: expected P5 magic");
  }
  std::size_t pos = 2;
  const int width = read_header_int(bytes, pos);
  const int height = read_header_int(bytes, pos);
  const int maxval = read_header_int(bytes, pos);
  if (width <= 0 || height <= 0) throw malformed("non-positive dimensions");
  if (maxval <= 0 || maxval > 255) throw malformed("maxval must be 1..255");
  if (pos >= bytes.size() ||
      !std::isspace(static_cast<unsigned char>(bytes[pos]))) {
    throw malformed("missing whitespace after header");
  }
  ++pos;
  const std::size_t needed = static_cast<std::size_t>(width) * height;
  if (bytes.size() - pos < needed) {
    throw FormatError(FormatError::Kind::kTruncated, "PGM: truncated raster");
  }
  SilhouetteImage image(width, height);
  for (int y = 0; y < height; ++y) {
    for (int x = 0; x < width; ++x) {
      const auto byte = static_cast<unsigned char>(
          bytes[pos + static_cast<std::size_t>(y) * width + x]);
      image.coverage(y, x) = static_cast<double>(byte) / maxval;
    }
  }
  return image;
}

void write_pgm(const SilhouetteImage& image, const std::filesystem::path& path) {
  write_text_file(path, encode_pgm(image));
}

SilhouetteImage read_pgm(const std::filesystem::path& path) {
  return decode_pgm(read_text_file(path));
}

}  // namespace ringret
