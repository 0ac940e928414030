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

#ifndef RINGRET_BOUNDING_SPHERE_HPP_
#define RINGRET_BOUNDING_SPHERE_HPP_

#include <algorithm>
#include <array>
#include <list>
#include <vector>

#include <Eigen/Core>
#include <Eigen/QR>

#include "ringret/errors.hpp"
#include "ringret/mesh.hpp"

namespace ringret {

template <typename Scalar>
struct SphereT {
  Vec3T<Scalar> center = Vec3T<Scalar>::Zero();
  Scalar radius = 0;

  bool contains(const Vec3T<Scalar>& p, Scalar tol) const {
    return (p - center).norm() <= radius + tol;
  }
};
using Sphere = SphereT<double>;

namespace internal {

// Smallest sphere whose boundary passes through every support point, with the
// center constrained to their affine hull.
template <typename Scalar>
SphereT<Scalar> circumsphere(const std::vector<Vec3T<Scalar>>& support) {
  SphereT<Scalar> s;
  if (support.empty()) {
    s.radius = -1;
    return s;
  }
  const Vec3T<Scalar>& p0 = support.front();
  const int k = static_cast<int>(support.size()) - 1;
  if (k == 0) {
    s.center = p0;
    return s;
  }
  Eigen::Matrix<Scalar, 3, Eigen::Dynamic> a(3, k);
  for (int j = 0; j < k; ++j) a.col(j) = support[j + 1] - p0;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic> gram =
      a.transpose() * a;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rhs = gram.diagonal() / 2;
  const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> lambda =
      gram.completeOrthogonalDecomposition().solve(rhs);
  const Vec3T<Scalar> offset = a * lambda;
  s.center = p0 + offset;
  s.radius = offset.norm();
  for (int j = 0; j < k; ++j) {
    s.radius = std::max(s.radius, (support[j + 1] - s.center).norm());
  }
  return s;
}

// Welzl's recursion with move-to-front over a linked list of point indices.
template <typename Scalar>
class MoveToFrontBall {
 public:
  explicit MoveToFrontBall(const Eigen::Matrix<Scalar, 3, Eigen::Dynamic>& p)
      : points_(p) {
    for (Eigen::Index i = 0; i < p.cols(); ++i) list_.push_back(i);
  }

  SphereT<Scalar> solve() {
    support_.clear();
    ball_ = circumsphere(support_);
    recurse(list_.end());
    return ball_;
  }

 private:
  static constexpr Scalar kTol = Scalar(1e-12);

  bool outside(const Vec3T<Scalar>& p) const {
    if (ball_.radius < 0) return true;
    return (p - ball_.center).norm() > ball_.radius * (1 + kTol) + kTol;
  }

  void recurse(typename std::list<Eigen::Index>::iterator end) {
    ball_ = circumsphere(support_);
    if (support_.size() == 4) return;
    for (auto it = list_.begin(); it != end;) {
      auto next = std::next(it);
      const Vec3T<Scalar> p = points_.col(*it);
      if (outside(p)) {
        support_.push_back(p);
        recurse(it);
        support_.pop_back();
        if (it != list_.begin()) list_.splice(list_.begin(), list_, it);
      }
      it = next;
    }
  }

  const Eigen::Matrix<Scalar, 3, Eigen::Dynamic>& points_;
  std::list<Eigen::Index> list_;
  std::vector<Vec3T<Scalar>> support_;
  SphereT<Scalar> ball_;
};

}  // namespace internal

// Exact minimum enclosing sphere of a point set (columns of `points`).
template <typename Scalar>
SphereT<Scalar> bounding_sphere(
    const Eigen::Matrix<Scalar, 3, Eigen::Dynamic>& points) {
  if (points.cols() == 0) {
    throw InvalidArgument("bounding_sphere: empty point set");
  }
  internal::MoveToFrontBall<Scalar> solver(points);
  return solver.solve();
}

}  // namespace ringret

#endif  // RINGRET_BOUNDING_SPHERE_HPP_
