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

// Independent reference implementations used as test oracles. They share no
// code with the library beyond plain data types.

#ifndef RINGRET_TESTS_ORACLES_HPP_
#define RINGRET_TESTS_ORACLES_HPP_

#include <cmath>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace ringret::oracle {

// ---- retrieval metrics by set counting over the ranked id list.

struct Metrics {
  double nn, p10, ndcg, ap, ft, st, fr;
};

inline int count_in_prefix(const std::vector<std::string>& ranked,
                           const std::set<std::string>& relevant, std::size_t k) {
  std::set<std::string> prefix(ranked.begin(),
                               ranked.begin() + static_cast<std::ptrdiff_t>(std::min(k, ranked.size())));
  int n = 0;
  for (const auto& id : relevant) n += static_cast<int>(prefix.count(id));
  return n;
}

inline Metrics metrics(const std::vector<std::string>& ranked,
                       const std::set<std::string>& relevant, int cutoff = 10) {
  const int m = static_cast<int>(relevant.size());
  const int n = static_cast<int>(ranked.size());
  Metrics out{};
  out.nn = relevant.count(ranked[0]) ? 1.0 : 0.0;
  out.p10 = static_cast<double>(count_in_prefix(ranked, relevant, 10)) / 10;
  double dcg = 0, ideal = 0, ap = 0;
  int hits = 0;
  for (int i = 1; i <= n; ++i) {
    if (relevant.count(ranked[static_cast<std::size_t>(i - 1)])) {
      dcg += 1.0 / std::log2(static_cast<double>(i) + 1.0);
      ++hits;
      ap += static_cast<double>(hits) / static_cast<double>(i);
    }
  }
  for (int i = 1; i <= m; ++i) ideal += 1.0 / std::log2(static_cast<double>(i) + 1.0);
  out.ndcg = dcg / ideal;
  out.ap = ap / m;
  out.ft = static_cast<double>(count_in_prefix(ranked, relevant, static_cast<std::size_t>(m))) / m;
  out.st = static_cast<double>(count_in_prefix(ranked, relevant, 2 * static_cast<std::size_t>(m))) / m;
  const int top = std::min(cutoff, n);
  const int nonrel_top = top - count_in_prefix(ranked, relevant, static_cast<std::size_t>(top));
  out.fr = static_cast<double>(nonrel_top) / (n - m);
  return out;
}

// ---- minimum enclosing sphere by enumerating support sets of size 1..4.

struct Ball {
  Eigen::Vector3d center;
  double radius;
};

inline std::optional<Ball> ball_through(const std::vector<Eigen::Vector3d>& s) {
  if (s.size() == 1) return Ball{s[0], 0};
  if (s.size() == 2) return Ball{(s[0] + s[1]) / 2, (s[0] - s[1]).norm() / 2};
  if (s.size() == 3) {
    const Eigen::Vector3d a = s[1] - s[0], b = s[2] - s[0];
    const Eigen::Vector3d axb = a.cross(b);
    const double d = 2 * axb.squaredNorm();
    if (d < 1e-18) return std::nullopt;
    const Eigen::Vector3d off =
        (b.squaredNorm() * axb.cross(a) + a.squaredNorm() * b.cross(axb)) / d;
    return Ball{s[0] + off, off.norm()};
  }
  Eigen::Matrix3d a;
  Eigen::Vector3d rhs;
  for (int i = 0; i < 3; ++i) {
    const Eigen::Vector3d e = s[static_cast<std::size_t>(i + 1)] - s[0];
    a.row(i) = 2 * e.transpose();
    rhs[i] = e.squaredNorm();
  }
  Eigen::FullPivLU<Eigen::Matrix3d> lu(a);
  if (!lu.isInvertible() || std::abs(a.determinant()) < 1e-12) return std::nullopt;
  const Eigen::Vector3d off = lu.solve(rhs);
  return Ball{s[0] + off, off.norm()};
}

inline Ball min_enclosing_ball(const std::vector<Eigen::Vector3d>& pts) {
  const std::size_t n = pts.size();
  std::optional<Ball> best;
  std::vector<Eigen::Vector3d> support;
  const auto consider = [&] {
    const auto b = ball_through(support);
    if (!b) return;
    for (const auto& p : pts) {
      if ((p - b->center).norm() > b->radius * (1 + 1e-10) + 1e-12) return;
    }
    if (!best || b->radius < best->radius) best = b;
  };
  for (std::size_t i = 0; i < n; ++i) {
    support = {pts[i]};
    consider();
    for (std::size_t j = i + 1; j < n; ++j) {
      support = {pts[i], pts[j]};
      consider();
      for (std::size_t k = j + 1; k < n; ++k) {
        support = {pts[i], pts[j], pts[k]};
        consider();
        for (std::size_t l = k + 1; l < n; ++l) {
          support = {pts[i], pts[j], pts[k], pts[l]};
          consider();
        }
      }
    }
  }
  return *best;
}

// ---- 64-bit FNV-1a written out byte by byte.

inline std::uint64_t fnv1a(std::string_view s) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : s) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

// ---- central finite differences over a flat parameter array.

// Relative error with a floor so entries near zero are judged absolutely.
inline double relative_error(double analytic, double numeric, double floor = 1e-6) {
  return std::abs(analytic - numeric) /
         std::max({std::abs(analytic), std::abs(numeric), floor});
}

// d f / d x_i for every i by (f(x + eps e_i) - f(x - eps e_i)) / (2 eps).
inline std::vector<double> central_differences(double* x, std::size_t n,
                                               const std::function<double()>& f,
                                               double eps = 1e-5) {
  std::vector<double> g(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double saved = x[i];
    x[i] = saved + eps;
    const double up = f();
    x[i] = saved - eps;
    const double down = f();
    x[i] = saved;
    g[i] = (up - down) / (2 * eps);
  }
  return g;
}

}  // namespace ringret::oracle

#endif  // RINGRET_TESTS_ORACLES_HPP_
