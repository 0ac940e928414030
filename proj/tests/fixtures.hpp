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

// Random inputs shared by the unit tests and the acceptance runner.

#ifndef RINGRET_TESTS_FIXTURES_HPP_
#define RINGRET_TESTS_FIXTURES_HPP_

#include <set>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "ringret/random.hpp"
#include "ringret/retrieval.hpp"

namespace ringret::testing_util {

struct RankingInstance {
  Ranking ranking;
  std::vector<std::string> ids;  // ranked order
  std::set<std::string> relevant;
};

// A gallery of 2..max_n models with 1..min(max_m, n - 1) relevant ones,
// ranked by random scores on a coarse grid so ties occur.
inline RankingInstance random_ranking_instance(Rng& rng, int max_n = 50, int max_m = 8) {
  const int n = 2 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(max_n - 1)));
  const int m_hi = std::min(max_m, n - 1);
  const int m = 1 + static_cast<int>(uniform_index(rng, static_cast<std::uint64_t>(m_hi)));
  std::vector<std::string> models;
  for (int i = 0; i < n; ++i) models.push_back("m" + std::to_string(i));
  Eigen::VectorXd scores(n);
  for (int i = 0; i < n; ++i) scores[i] = static_cast<double>(uniform_index(rng, 20)) / 20.0;
  RankingInstance inst;
  inst.ranking = rank_scores("q", models, scores);
  for (const auto& item : inst.ranking.items) inst.ids.push_back(item.model_id);
  std::vector<std::string> pool = models;
  shuffle(pool.begin(), pool.end(), rng);
  inst.relevant.insert(pool.begin(), pool.begin() + m);
  return inst;
}

inline Eigen::MatrixXd random_matrix(Rng& rng, Eigen::Index rows, Eigen::Index cols) {
  Eigen::MatrixXd x(rows, cols);
  for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = standard_normal(rng);
  return x;
}

}  // namespace ringret::testing_util

#endif  // RINGRET_TESTS_FIXTURES_HPP_
