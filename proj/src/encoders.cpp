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

#include "ringret/encoders.hpp"

#include <cmath>
#include <unordered_set>

#include "ringret/errors.hpp"

namespace ringret {

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> ids, Storage values)
    : ids_(std::move(ids)), values_(std::move(values)) {
  if (static_cast<Eigen::Index>(ids_.size()) != values_.rows()) {
    throw ShapeError("EmbeddingMatrix: " + std::to_string(ids_.size()) +
                     " ids for " + std::to_string(values_.rows()) + " rows");
  }
  std::unordered_set<std::string> seen;
  for (const auto& id : ids_) {
    if (!seen.insert(id).second) {
      throw FormatError(FormatError::Kind::kDuplicateId,
                        "EmbeddingMatrix: duplicate id '" + id + "'");
    }
  }
  if (!values_.allFinite()) {
    throw NumericError("EmbeddingMatrix: non-finite value");
  }
}

EmbeddingMatrix::EmbeddingMatrix(std::vector<std::string> ids,
                                 const Eigen::MatrixXd& values)
    : EmbeddingMatrix(std::move(ids), Storage(values.cast<float>())) {}

Eigen::Index EmbeddingMatrix::find(std::string_view id) const {
  for (std::size_t i = 0; i < ids_.size(); ++i) {
    if (ids_[i] == id) return static_cast<Eigen::Index>(i);
  }
  return -1;
}

Eigen::VectorXd toy_image_encode(const SilhouetteImage& image, int grid) {
  if (grid <= 0) throw InvalidArgument("toy_image_encode: grid must be >= 1");
  const int bw = (image.width() + grid - 1) / grid;
  const int bh = (image.height() + grid - 1) / grid;
  Eigen::VectorXd out = Eigen::VectorXd::Zero(grid * grid);
  if (bw == 0 || bh == 0) return out;
  const double inv_area = 1.0 / (static_cast<double>(bw) * bh);
  for (int gy = 0; gy < grid; ++gy) {
    for (int gx = 0; gx < grid; ++gx) {
      double sum = 0;
      for (int y = gy * bh; y < std::min((gy + 1) * bh, image.height()); ++y) {
        for (int x = gx * bw; x < std::min((gx + 1) * bw, image.width()); ++x) {
          sum += image.coverage(y, x);
        }
      }
      out[gy * grid + gx] = sum * inv_area;
    }
  }
  const double norm = out.norm();
  if (norm > 0) out /= norm;
  return out;
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ULL;
  for (const char c : bytes) {
    h ^= static_cast<unsigned char>(c);
    h *= 1099511628211ULL;
  }
  return h;
}

Eigen::VectorXd toy_text_encode(std::string_view text, int dim) {
  if (dim < 2) throw InvalidArgument("toy_text_encode: dim must be >= 2");
  Eigen::VectorXd out = Eigen::VectorXd::Zero(dim);
  std::string token;
  auto flush = [&] {
    if (token.empty()) return;
    const std::uint64_t h = fnv1a64(token);
    const auto bucket = static_cast<Eigen::Index>(h % static_cast<std::uint64_t>(dim));
    out[bucket] += (h >> 63) == 0 ? 1.0 : -1.0;
    token.clear();
  };
  for (const char raw : text) {
    char c = raw;
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
    if ((c >= 'a' && c <= 'z') || (c >= '0' && c <= '9')) {
      token.push_back(c);
    } else {
      flush();
    }
  }
  flush();
  const double norm = out.norm();
  if (norm > 0) out /= norm;
  return out;
}

Eigen::MatrixXd encode_model_views(const std::vector<SilhouetteImage>& images,
                                   int grid) {
  if (images.empty()) throw InvalidArgument("encode_model_views: no images");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(images.size()), grid * grid);
  for (std::size_t i = 0; i < images.size(); ++i) {
    if (images[i].width() != images.front().width() ||
        images[i].height() != images.front().height()) {
      throw ShapeError("encode_model_views: inconsistent image sizes");
    }
    out.row(static_cast<Eigen::Index>(i)) =
        toy_image_encode(images[i], grid).transpose();
  }
  return out;
}

}  // namespace ringret
