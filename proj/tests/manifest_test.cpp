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

#include <filesystem>
#include <string>

#include <gtest/gtest.h>

#include "ringret/errors.hpp"

namespace ringret {
namespace {

constexpr char kManifest[] =
    "#MODELS\n"
    "m1\tmodels/m1.obj\n"
    "m2\tmodels/m2.obj\n"
    "#QUERIES\n"
    "q1\ta small orange cat\n"
    "\n"
    "q2\tthe tiger, hunting\n"
    "#RELEVANCE\n"
    "q1\tm1\n"
    "q1\tm2\n"
    "q2\tm2\n";

TEST(ManifestTest, Parses) {
  const DatasetManifest m = parse_manifest(kManifest);
  ASSERT_EQ(m.models.size(), 2u);
  EXPECT_EQ(m.models[1], (ModelEntry{"m2", "models/m2.obj"}));
  EXPECT_EQ(m.queries[1].text, "the tiger, hunting");
  const RelevanceMap rel = m.relevance_map();
  EXPECT_EQ(rel.at("q1"), (std::set<std::string>{"m1", "m2"}));
  EXPECT_EQ(m.model_ids(), (std::vector<std::string>{"m1", "m2"}));
  EXPECT_EQ(m.query_ids(), (std::vector<std::string>{"q1", "q2"}));
}

TEST(ManifestTest, RoundTrip) {
  const DatasetManifest m = parse_manifest(kManifest);
  const std::string text = to_manifest_text(m);
  const DatasetManifest back = parse_manifest(text);
  EXPECT_EQ(back.models, m.models);
  EXPECT_EQ(back.queries, m.queries);
  EXPECT_EQ(back.relevance, m.relevance);
  EXPECT_EQ(to_manifest_text(back), text);
}

TEST(ManifestTest, AcceptsCrlf) {
  const DatasetManifest m = parse_manifest("#MODELS\r\nm1\ta.obj\r\n#QUERIES\r\n");
  EXPECT_EQ(m.models[0].mesh_path, "a.obj");
}

TEST(ManifestTest, ParseErrorsCarryLine) {
  try {
    parse_manifest("#MODELS\nm1\ta.obj\nm 2\tb.obj\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 3u);
  }
  try {
    parse_manifest("#MODELS\nm1\n");
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.line(), 2u);
  }
  EXPECT_THROW(parse_manifest("m1\ta.obj\n"), ParseError);
  EXPECT_THROW(parse_manifest("#OTHER\n"), ParseError);
}

TEST(ManifestTest, DanglingAndDuplicateIds) {
  EXPECT_THROW(parse_manifest("#MODELS\nm1\ta\n#QUERIES\nq1\tx\n#RELEVANCE\nq1\tm9\n"),
               InvalidArgument);
  EXPECT_THROW(parse_manifest("#MODELS\nm1\ta\n#QUERIES\nq1\tx\n#RELEVANCE\nq7\tm1\n"),
               InvalidArgument);
  EXPECT_THROW(parse_manifest("#MODELS\nm1\ta\nm1\tb\n"), InvalidArgument);
}

TEST(ManifestTest, IdAlphabet) {
  EXPECT_TRUE(is_valid_id("f00_box-v1.2"));
  EXPECT_FALSE(is_valid_id(""));
  EXPECT_FALSE(is_valid_id("a b"));
  EXPECT_FALSE(is_valid_id("caf\xc3\xa9"));
}

TEST(ManifestTest, FileErrorsNameThePath) {
  const auto path = std::filesystem::path(testing::TempDir()) / "bad_manifest.tsv";
  write_text_file(path, "#MODELS\nm1\ta.obj\n#QUERIES\nq1\n");
  try {
    read_manifest(path);
    FAIL();
  } catch (const ParseError& e) {
    EXPECT_EQ(e.file(), path.string());
    EXPECT_EQ(e.line(), 4u);
    EXPECT_EQ(std::string(e.what()).rfind(path.string() + ":4: ", 0), 0u);
  }
}

TEST(RelevanceFileTest, RoundTripAndErrors) {
  const std::vector<RelevancePair> pairs = {{"q1", "m1"}, {"q2", "m1"}};
  const std::string text = to_relevance_text(pairs);
  EXPECT_EQ(text, "#RELEVANCE\nq1\tm1\nq2\tm1\n");
  EXPECT_EQ(parse_relevance_file(text), pairs);
  EXPECT_THROW(parse_relevance_file("#MODELS\nm1\ta\n"), ParseError);
  EXPECT_THROW(parse_relevance_file("#RELEVANCE\nq1\n"), ParseError);
}

}  // namespace
}  // namespace ringret
