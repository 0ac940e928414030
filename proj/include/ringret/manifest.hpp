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

#ifndef RINGRET_MANIFEST_HPP_
#define RINGRET_MANIFEST_HPP_

#include <filesystem>
#include <map>
#include <set>
#include <string>
#include <string_view>
#include <vector>

namespace ringret {

struct ModelEntry {
  std::string id;
  std::string mesh_path;  // relative to the manifest file
  bool operator==(const ModelEntry&) const = default;
};

struct QueryEntry {
  std::string id;
  std::string text;
  bool operator==(const QueryEntry&) const = default;
};

struct RelevancePair {
  std::string query_id;
  std::string model_id;
  auto operator<=>(const RelevancePair&) const = default;
};

using RelevanceMap = std::map<std::string, std::set<std::string>>;

// Models, text queries and the query->model relevance relation.
//
// On disk: UTF-8 TSV with three sections introduced by `#MODELS`,
// `#QUERIES` and `#RELEVANCE`, one tab-separated record per line.
struct DatasetManifest {
  std::vector<ModelEntry> models;
  std::vector<QueryEntry> queries;
  std::vector<RelevancePair> relevance;

  // Throws ParseError/InvalidArgument on malformed or dangling IDs.
  void validate() const;

  RelevanceMap relevance_map() const;
  std::vector<std::string> model_ids() const;
  std::vector<std::string> query_ids() const;
};

// True iff `id` matches [A-Za-z0-9_.-]+.
bool is_valid_id(std::string_view id);

DatasetManifest parse_manifest(std::string_view text);
std::string to_manifest_text(const DatasetManifest& manifest);
DatasetManifest read_manifest(const std::filesystem::path& path);
void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path);

// A file holding only a `#RELEVANCE` section (augmented pairs).
std::vector<RelevancePair> parse_relevance_file(std::string_view text);
std::string to_relevance_text(const std::vector<RelevancePair>& pairs);

RelevanceMap to_relevance_map(const std::vector<RelevancePair>& pairs);

std::string read_text_file(const std::filesystem::path& path);
void write_text_file(const std::filesystem::path& path, std::string_view text);

}  // namespace ringret

#endif  // RINGRET_MANIFEST_HPP_
