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

#ifndef RINGRET_ENCODERS_HPP_
#define RINGRET_ENCODERS_HPP_

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Core>

#include "ringret/ringview.hpp"

namespace ringret {

// N x D feature rows keyed by unique string IDs. Values are stored in 32 bits;
// callers compute in 64 bits via `row()`/`as_double()`.
class EmbeddingMatrix {
 public:
  using Storage =
      Eigen::Matrix<float, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

  EmbeddingMatrix() = default;
  // Throws FormatError(kDuplicateId) on repeated IDs, ShapeError on a
  // row/ID count mismatch, NumericError on non-finite values.
  EmbeddingMatrix(std::vector<std::string> ids, Storage values);
  EmbeddingMatrix(std::vector<std::string> ids, const Eigen::MatrixXd& values);

  const std::vector<std::string>& ids() const { return ids_; }
  const Storage& values() const { return values_; }
  Eigen::Index rows() const { return values_.rows(); }
  Eigen::Index dim() const { return values_.cols(); }

  Eigen::VectorXd row(Eigen::Index i) const {
    return values_.row(i).transpose().cast<double>();
  }
  Eigen::MatrixXd as_double() const { return values_.cast<double>(); }

  // Row index of `id`, or -1.
  Eigen::Index find(std::string_view id) const;

 private:
  std::vector<std::string> ids_;
  Storage values_;
};

// Block-mean pooling of a silhouette onto a g x g grid (row-major), then L2
// normalization. Images whose sides are not multiples of g are zero padded.
// An all-zero image yields the zero vector.
Eigen::VectorXd toy_image_encode(const SilhouetteImage& image, int grid);

// 64-bit FNV-1a.
std::uint64_t fnv1a64(std::string_view bytes);

// Signed feature hashing of lowercase alphanumeric tokens into `dim` buckets,
// then L2 normalization. Text without tokens yields the zero vector.
Eigen::VectorXd toy_text_encode(std::string_view text, int dim);

// One row per image, same order as the input.
Eigen::MatrixXd encode_model_views(const std::vector<SilhouetteImage>& images,
                                   int grid);

// EMB1: "EMB1", u32 N, u32 D, N*D float32 row-major, all little-endian.
// IDs live in the sidecar `<path>.ids`, one per line in row order.
void export_embeddings(const EmbeddingMatrix& matrix,
                       const std::filesystem::path& path);
EmbeddingMatrix import_embeddings(const std::filesystem::path& path);

std::string encode_emb1(const EmbeddingMatrix::Storage& values);
EmbeddingMatrix::Storage decode_emb1(std::string_view bytes);

std::filesystem::path ids_sidecar(const std::filesystem::path& path);

}  // namespace ringret

#endif  // RINGRET_ENCODERS_HPP_
