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

#include "ringret/checkpoint.hpp"

#include "ringret/byte_io.hpp"
#include "ringret/errors.hpp"
#include "ringret/manifest.hpp"

namespace ringret {

std::string encode_checkpoint(const AggregatorParams& params) {
  const AggregatorConfig& c = params.config;
  std::string out = "AGGP";
  bytes::append_le(out, kCheckpointVersion);
  for (int v : {c.input_dim, c.text_dim, c.model_dim, c.heads, c.layers,
                c.joint_dim, c.tokens, c.rings}) {
    bytes::append_le(out, static_cast<std::uint32_t>(v));
  }
  bytes::append_le(out, c.dropout);
  bytes::append_le(out, static_cast<std::uint32_t>(c.mode));
  for (const auto& t : params.tensors()) {
    for (Eigen::Index i = 0; i < t.size; ++i) bytes::append_le(out, t.data[i]);
  }
  return out;
}

AggregatorParams decode_checkpoint(std::string_view data) {
  if (data.size() < 4 || data.substr(0, 4) != "AGGP") {
    throw FormatError(FormatError::Kind::kBadMagic, "AGGP: bad magic");
  }
  bytes::Reader reader(data.substr(4), "AGGP");
  const auto version = reader.read_le<std::uint32_t>();
  if (version != kCheckpointVersion) {
    throw FormatError(FormatError::Kind::kMalformed,
                      "AGGP: unsupported version " + std::to_string(version));
  }
  AggregatorConfig c;
  for (int* field : {&c.input_dim, &c.text_dim, &c.model_dim, &c.heads,
                     &c.layers, &c.joint_dim, &c.tokens, &c.rings}) {
    *field = static_cast<int>(reader.read_le<std::uint32_t>());
  }
  c.dropout = reader.read_le<double>();
  const auto mode = reader.read_le<std::uint32_t>();
  if (mode > 2) {
    throw FormatError(FormatError::Kind::kMalformed,
                      "AGGP: unknown mode " + std::to_string(mode));
  }
  c.mode = static_cast<AggregatorMode>(mode);
  try {
    c.validate();
  } catch (const InvalidArgument& e) {
    throw FormatError(FormatError::Kind::kMalformed,
                      std::string("AGGP: bad config record: ") + e.what());
  }
  AggregatorParams params = init_params(c, 0).zeros_like();
  for (auto& t : params.tensors()) {
    for (Eigen::Index i = 0; i < t.size; ++i) t.data[i] = reader.read_le<double>();
  }
  if (reader.remaining() != 0) {
    throw FormatError(FormatError::Kind::kMalformed,
                      "AGGP: " + std::to_string(reader.remaining()) +
                          " trailing bytes");
  }
  return params;
}

void save_checkpoint(const AggregatorParams& params,
                     const std::filesystem::path& path) {
  write_text_file(path, encode_checkpoint(params));
}

AggregatorParams load_checkpoint(const std::filesystem::path& path) {
  return decode_checkpoint(read_text_file(path));
}

}  // namespace ringret
