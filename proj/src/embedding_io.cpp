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

#include <vector>

#include "ringret/byte_io.hpp"
#include "ringret/encoders.hpp"
#include "ringret/errors.hpp"
#include "ringret/manifest.hpp"

namespace ringret {

std::filesystem::path ids_sidecar(const std::filesystem::path& path) {
  return std::filesystem::path(path.string() + ".ids");
}

std::string encode_emb1(const EmbeddingMatrix::Storage& values) {
  std::string out = "EMB1";
  bytes::append_le(out, static_cast<std::uint32_t>(values.rows()));
  bytes::append_le(out, static_cast<std::uint32_t>(values.cols()));
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      bytes::append_le(out, values(i, j));
    }
  }
  return out;
}

EmbeddingMatrix::Storage decode_emb1(std::string_view data) {
  if (data.size() < 4 || data.substr(0, 4) != "EMB1") {
    throw FormatError(FormatError::Kind::kBadMagic, "EMB1: bad magic");
  }
  bytes::Reader reader(data.substr(4), "EMB1");
  const auto n = reader.read_le<std::uint32_t>();
  const auto d = reader.read_le<std::uint32_t>();
  const std::uint64_t payload = std::uint64_t{n} * d * sizeof(float);
  if (reader.remaining() < payload) {
    throw FormatError(FormatError::Kind::kTruncated,
                      "EMB1: header claims " + std::to_string(n) + "x" +
                          std::to_string(d) + " values but payload has " +
                          std::to_string(reader.remaining()) + " bytes");
  }
  if (reader.remaining() > payload) {
    throw FormatError(FormatError::Kind::kMalformed,
                      "EMB1: trailing bytes after payload");
  }
  EmbeddingMatrix::Storage values(n, d);
  for (std::uint32_t i = 0; i < n; ++i) {
    for (std::uint32_t j = 0; j < d; ++j) values(i, j) = reader.read_le<float>();
  }
  return values;
}

void export_embeddings(const EmbeddingMatrix& matrix,
                       const std::filesystem::path& path) {
  write_text_file(path, encode_emb1(matrix.values()));
  std::string ids;
  for (const auto& id : matrix.ids()) {
    if (id.find_first_of("\n\r") != std::string::npos) {
      throw InvalidArgument("embedding id contains a newline");
    }
    ids += id + '\n';
  }
  write_text_file(ids_sidecar(path), ids);
}

EmbeddingMatrix import_embeddings(const std::filesystem::path& path) {
  auto values = decode_emb1(read_text_file(path));
  const std::string text = read_text_file(ids_sidecar(path));
  std::vector<std::string> ids;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    if (nl == std::string::npos) {
      ids.push_back(text.substr(pos));
      break;
    }
    ids.push_back(text.substr(pos, nl - pos));
    pos = nl + 1;
  }
  if (static_cast<Eigen::Index>(ids.size()) < values.rows()) {
    throw FormatError(FormatError::Kind::kTruncated,
                      "EMB1: id sidecar has " + std::to_string(ids.size()) +
                          " lines for " + std::to_string(values.rows()) +
                          " rows");
  }
  if (static_cast<Eigen::Index>(ids.size()) > values.rows()) {
    throw FormatError(FormatError::Kind::kMalformed,
                      "EMB1: id sidecar has extra lines");
  }
  return EmbeddingMatrix(std::move(ids), std::move(values));
}

}  // namespace ringret
