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

#include "ringret/manifest.hpp"

#include <fstream>
#include <sstream>

#include "ringret/errors.hpp"

namespace ringret {
namespace {

enum class Section { kNone, kModels, kQueries, kRelevance };

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const auto tab = line.find('\t', start);
    out.push_back(line.substr(start, tab == std::string_view::npos
                                         ? std::string_view::npos
                                         : tab - start));
    if (tab == std::string_view::npos) break;
    start = tab + 1;
  }
  return out;
}

void check_id(std::string_view id, std::size_t line) {
  if (!is_valid_id(id)) {
    throw ParseError("invalid id '" + std::string(id) + "'", line);
  }
}

// Calls `fn(section, fields, line_no)` for every record line.
template <typename Fn>
void for_each_record(std::string_view text, Fn&& fn) {
  Section section = Section::kNone;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    const auto nl = text.find('\n', pos);
    auto line = text.substr(pos, nl == std::string_view::npos
                                     ? std::string_view::npos
                                     : nl - pos);
    pos = nl == std::string_view::npos ? text.size() : nl + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.empty()) continue;
    if (line == "#MODELS") {
      section = Section::kModels;
    } else if (line == "#QUERIES") {
      section = Section::kQueries;
    } else if (line == "#RELEVANCE") {
      section = Section::kRelevance;
    } else if (line.front() == '#') {
      throw ParseError("unknown section '" + std::string(line) + "'", line_no);
    } else if (section == Section::kNone) {
      throw ParseError("record before any section header", line_no);
    } else {
      fn(section, split_tabs(line), line_no);
    }
  }
}

void check_text_field(std::string_view s, const char* what) {
  if (s.find_first_of("\t\n\r") != std::string_view::npos) {
    throw InvalidArgument(std::string(what) +
                          " must not contain tabs or newlines");
  }
}

}  // namespace

bool is_valid_id(std::string_view id) {
  if (id.empty()) return false;
  for (const char c : id) {
    const bool ok = (c >= 'A' && c <= 'Z') || (c >= 'a' && c <= 'z') ||
                    (c >= '0' && c <= '9') || c == '_' || c == '.' || c == '-';
    if (!ok) return false;
  }
  return true;
}

void DatasetManifest::validate() const {
  std::set<std::string> model_set;
  for (const auto& m : models) {
    if (!is_valid_id(m.id)) throw InvalidArgument("invalid model id " + m.id);
    if (!model_set.insert(m.id).second) {
      throw InvalidArgument("duplicate model id " + m.id);
    }
    check_text_field(m.mesh_path, "mesh path");
  }
  std::set<std::string> query_set;
  for (const auto& q : queries) {
    if (!is_valid_id(q.id)) throw InvalidArgument("invalid query id " + q.id);
    if (!query_set.insert(q.id).second) {
      throw InvalidArgument("duplicate query id " + q.id);
    }
    check_text_field(q.text, "query text");
  }
  for (const auto& r : relevance) {
    if (!query_set.count(r.query_id)) {
      throw InvalidArgument("relevance references unknown query " + r.query_id);
    }
    if (!model_set.count(r.model_id)) {
      throw InvalidArgument("relevance references unknown model " + r.model_id);
    }
  }
}

RelevanceMap DatasetManifest::relevance_map() const {
  return to_relevance_map(relevance);
}

std::vector<std::string> DatasetManifest::model_ids() const {
  std::vector<std::string> ids;
  ids.reserve(models.size());
  for (const auto& m : models) ids.push_back(m.id);
  return ids;
}

std::vector<std::string> DatasetManifest::query_ids() const {
  std::vector<std::string> ids;
  ids.reserve(queries.size());
  for (const auto& q : queries) ids.push_back(q.id);
  return ids;
}

RelevanceMap to_relevance_map(const std::vector<RelevancePair>& pairs) {
  RelevanceMap map;
  for (const auto& p : pairs) map[p.query_id].insert(p.model_id);
  return map;
}

DatasetManifest parse_manifest(std::string_view text) {
  DatasetManifest m;
  for_each_record(text, [&](Section section,
                            const std::vector<std::string_view>& fields,
                            std::size_t line) {
    if (fields.size() != 2) {
      throw ParseError("expected 2 tab-separated columns, got " +
                           std::to_string(fields.size()),
                       line);
    }
    check_id(fields[0], line);
    switch (section) {
      case Section::kModels:
        m.models.push_back({std::string(fields[0]), std::string(fields[1])});
        break;
      case Section::kQueries:
        m.queries.push_back({std::string(fields[0]), std::string(fields[1])});
        break;
      case Section::kRelevance:
        check_id(fields[1], line);
        m.relevance.push_back({std::string(fields[0]), std::string(fields[1])});
        break;
      case Section::kNone:
        break;
    }
  });
  m.validate();
  return m;
}

std::string to_manifest_text(const DatasetManifest& manifest) {
  manifest.validate();
  std::string out = "#MODELS\n";
  for (const auto& m : manifest.models) out += m.id + '\t' + m.mesh_path + '\n';
  out += "#QUERIES\n";
  for (const auto& q : manifest.queries) out += q.id + '\t' + q.text + '\n';
  out += to_relevance_text(manifest.relevance);
  return out;
}

DatasetManifest read_manifest(const std::filesystem::path& path) {
  try {
    return parse_manifest(read_text_file(path));
  } catch (const ParseError& e) {
    throw e.in_file(path.string());
  }
}

void write_manifest(const DatasetManifest& manifest,
                    const std::filesystem::path& path) {
  write_text_file(path, to_manifest_text(manifest));
}

std::vector<RelevancePair> parse_relevance_file(std::string_view text) {
  std::vector<RelevancePair> pairs;
  for_each_record(text, [&](Section section,
                            const std::vector<std::string_view>& fields,
                            std::size_t line) {
    if (section != Section::kRelevance) {
      throw ParseError("only a #RELEVANCE section is allowed here", line);
    }
    if (fields.size() != 2) {
      throw ParseError("expected query_id<TAB>model_id", line);
    }
    check_id(fields[0], line);
    check_id(fields[1], line);
    pairs.push_back({std::string(fields[0]), std::string(fields[1])});
  });
  return pairs;
}

std::string to_relevance_text(const std::vector<RelevancePair>& pairs) {
  std::string out = "#RELEVANCE\n";
  for (const auto& r : pairs) out += r.query_id + '\t' + r.model_id + '\n';
  return out;
}

std::string read_text_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void write_text_file(const std::filesystem::path& path, std::string_view text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InvalidArgument("cannot write " + path.string());
  out.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!out) throw InvalidArgument("write failed: " + path.string());
}

}  // namespace ringret
