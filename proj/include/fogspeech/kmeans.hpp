// Copyright 2026 The FogSpeech Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Lloyd's k-means over the rows of a dense matrix, minimizing
//
//   J = sum_k sum_{i in c_k} || x_i - m_k ||^2
//
// Initial centroids are distinct data points drawn uniformly without
// replacement; the best of several seeded restarts is kept. Everything is
// deterministic in (data, k, seed, restarts, max_iter, tol).

#pragma once

#include <algorithm>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <string>
#include <type_traits>
#include <vector>

#include <Eigen/Core>

#include "fogspeech/error.hpp"

namespace fogspeech::kmeans {

using Eigen::Index;

/// One point per row.
template <typename Scalar>
using PointMatrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

using Assignment = std::vector<int>;

template <typename Scalar>
struct Dataset {
  PointMatrix<Scalar> points;
  std::vector<std::string> ids;  // parallel to rows

  Index size() const { return points.rows(); }
  Index dim() const { return points.cols(); }
};

template <typename Scalar>
struct ClusterModel {
  int k = 0;
  PointMatrix<Scalar> centroids;
  Assignment assignment;
  Scalar objective_j = Scalar(0);
  int iterations = 0;
  std::uint64_t seed = 0;
};

struct FitOptions {
  int k = 2;
  std::uint64_t seed = 42;
  int restarts = 10;
  int max_iter = 300;
  double tol = 1e-9;  // on the largest centroid displacement
};

/// Called with (restart, iteration, J) after every assignment step of every
/// run, including the final re-assignment.
using FitObserver = std::function<void(int, int, double)>;

/// SplitMix64: tiny, portable and fully specified, so seeded runs reproduce
/// across standard libraries (unlike std::uniform_int_distribution).
class SplitMix64 {
 public:
  explicit SplitMix64(std::uint64_t seed) : state_(seed) {}

  std::uint64_t next() {
    std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return z ^ (z >> 31);
  }

  /// Uniform integer in [0, bound) by rejection.
  std::uint64_t below(std::uint64_t bound) {
    const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() -
                                std::numeric_limits<std::uint64_t>::max() % bound;
    std::uint64_t draw;
    do {
      draw = next();
    } while (draw >= limit);
    return draw % bound;
  }

 private:
  std::uint64_t state_;
};

/// Seeds for each restart, derived before any run starts.
inline std::vector<std::uint64_t> restart_seeds(std::uint64_t seed, int restarts) {
  SplitMix64 rng(seed);
  std::vector<std::uint64_t> seeds(static_cast<std::size_t>(std::max(restarts, 0)));
  for (auto& s : seeds) s = rng.next();
  return seeds;
}

/// Row indices of the first occurrence of every distinct point, ascending.
template <typename Derived>
std::vector<Index> distinct_rows(const Eigen::MatrixBase<Derived>& points) {
  std::vector<Index> order(static_cast<std::size_t>(points.rows()));
  std::iota(order.begin(), order.end(), Index{0});
  const auto row_less = [&](Index a, Index b) {
    for (Index d = 0; d < points.cols(); ++d) {
      if (points(a, d) != points(b, d)) return points(a, d) < points(b, d);
    }
    return a < b;
  };
  std::sort(order.begin(), order.end(), row_less);
  std::vector<Index> firsts;
  for (std::size_t i = 0; i < order.size(); ++i) {
    if (i == 0 || points.row(order[i]) != points.row(order[i - 1])) firsts.push_back(order[i]);
  }
  std::sort(firsts.begin(), firsts.end());
  return firsts;
}

/// k distinct data points sampled uniformly without replacement.
template <typename Derived>
PointMatrix<typename Derived::Scalar> init_centroids(const Eigen::MatrixBase<Derived>& points,
                                                     int k, std::uint64_t seed) {
  if (k < 1) throw Error(ErrorCode::kInvalidArgument, "k must be at least 1");
  std::vector<Index> pool = distinct_rows(points);
  if (static_cast<std::size_t>(k) > pool.size()) {
    throw Error(ErrorCode::kTooManyClusters, "k = " + std::to_string(k) + " exceeds the " +
                                                 std::to_string(pool.size()) + " distinct points");
  }
  SplitMix64 rng(seed);
  PointMatrix<typename Derived::Scalar> centroids(k, points.cols());
  for (int j = 0; j < k; ++j) {
    // Partial Fisher-Yates over the distinct rows.
    const auto pick = j + static_cast<std::size_t>(rng.below(pool.size() - j));
    std::swap(pool[static_cast<std::size_t>(j)], pool[pick]);
    centroids.row(j) = points.row(pool[static_cast<std::size_t>(j)]);
  }
  return centroids;
}

/// Nearest centroid for each point; ties go to the lowest centroid index.
template <typename DerivedP, typename DerivedC>
Assignment assign_step(const Eigen::MatrixBase<DerivedP>& points,
                       const Eigen::MatrixBase<DerivedC>& centroids) {
  Assignment out(static_cast<std::size_t>(points.rows()), 0);
  for (Index i = 0; i < points.rows(); ++i) {
    auto best = (points.row(i) - centroids.row(0)).squaredNorm();
    for (Index j = 1; j < centroids.rows(); ++j) {
      const auto d = (points.row(i) - centroids.row(j)).squaredNorm();
      if (d < best) {
        best = d;
        out[static_cast<std::size_t>(i)] = static_cast<int>(j);
      }
    }
  }
  return out;
}

/// Cluster means. A cluster left empty is re-seeded at the point farthest
/// from its nearest already-placed centroid (lowest index on ties).
template <typename Derived>
PointMatrix<typename Derived::Scalar> update_step(const Eigen::MatrixBase<Derived>& points,
                                                  const Assignment& assignment, int k) {
  using Scalar = typename Derived::Scalar;
  PointMatrix<Scalar> centroids = PointMatrix<Scalar>::Zero(k, points.cols());
  std::vector<Index> counts(static_cast<std::size_t>(k), 0);
  for (Index i = 0; i < points.rows(); ++i) {
    const int c = assignment[static_cast<std::size_t>(i)];
    centroids.row(c) += points.row(i);
    ++counts[static_cast<std::size_t>(c)];
  }
  std::vector<bool> placed(static_cast<std::size_t>(k), false);
  for (int c = 0; c < k; ++c) {
    if (counts[static_cast<std::size_t>(c)] > 0) {
      centroids.row(c) /= static_cast<Scalar>(counts[static_cast<std::size_t>(c)]);
      placed[static_cast<std::size_t>(c)] = true;
    }
  }
  for (int c = 0; c < k; ++c) {
    if (placed[static_cast<std::size_t>(c)]) continue;
    Index farthest = 0;
    Scalar farthest_d = Scalar(-1);
    for (Index i = 0; i < points.rows(); ++i) {
      Scalar nearest = std::numeric_limits<Scalar>::infinity();
      for (int j = 0; j < k; ++j) {
        if (placed[static_cast<std::size_t>(j)]) {
          nearest = std::min(nearest, (points.row(i) - centroids.row(j)).squaredNorm());
        }
      }
      if (nearest > farthest_d) {
        farthest_d = nearest;
        farthest = i;
      }
    }
    centroids.row(c) = points.row(farthest);
    placed[static_cast<std::size_t>(c)] = true;
  }
  return centroids;
}

template <typename DerivedP, typename DerivedC>
typename DerivedP::Scalar objective(const Eigen::MatrixBase<DerivedP>& points,
                                    const Eigen::MatrixBase<DerivedC>& centroids,
                                    const Assignment& assignment) {
  typename DerivedP::Scalar j(0);
  for (Index i = 0; i < points.rows(); ++i) {
    j += (points.row(i) - centroids.row(assignment[static_cast<std::size_t>(i)])).squaredNorm();
  }
  return j;
}

/// Recomputes J for a fitted model from scratch.
template <typename Scalar>
Scalar objective(const Dataset<Scalar>& data, const ClusterModel<Scalar>& model) {
  return objective(data.points, model.centroids, model.assignment);
}

/// One Lloyd run from given starting centroids.
template <typename Derived>
ClusterModel<typename Derived::Scalar> run_from(const Eigen::MatrixBase<Derived>& points,
                                                PointMatrix<typename Derived::Scalar> centroids,
                                                int max_iter, double tol,
                                                const std::function<void(int, double)>& on_step = {}) {
  using Scalar = typename Derived::Scalar;
  const int k = static_cast<int>(centroids.rows());
  ClusterModel<Scalar> model;
  model.k = k;
  int iter = 0;
  while (iter < max_iter) {
    const Assignment assignment = assign_step(points, centroids);
    if (on_step) on_step(iter, static_cast<double>(objective(points, centroids, assignment)));
    PointMatrix<Scalar> next = update_step(points, assignment, k);
    const Scalar shift = (next - centroids).rowwise().norm().maxCoeff();
    centroids = std::move(next);
    ++iter;
    if (shift < tol) break;
  }
  model.assignment = assign_step(points, centroids);
  model.objective_j = objective(points, centroids, model.assignment);
  if (on_step) on_step(iter, static_cast<double>(model.objective_j));
  model.centroids = std::move(centroids);
  model.iterations = iter;
  return model;
}

/// Best-of-restarts fit. Ties in J keep the earliest restart.
template <typename Derived>
ClusterModel<typename Derived::Scalar> fit(const Eigen::MatrixBase<Derived>& points,
                                           const FitOptions& options,
                                           const FitObserver& observer = {}) {
  static_assert(std::is_floating_point_v<typename Derived::Scalar>);
  if (options.restarts < 1) throw Error(ErrorCode::kInvalidArgument, "restarts must be >= 1");
  if (options.max_iter < 1) throw Error(ErrorCode::kInvalidArgument, "max_iter must be >= 1");
  if (points.rows() == 0) throw Error(ErrorCode::kTooManyClusters, "no points to cluster");

  const auto seeds = restart_seeds(options.seed, options.restarts);
  ClusterModel<typename Derived::Scalar> best;
  bool have_best = false;
  for (int r = 0; r < options.restarts; ++r) {
    auto on_step = [&](int iter, double j) {
      if (observer) observer(r, iter, j);
    };
    auto model = run_from(points, init_centroids(points, options.k, seeds[static_cast<std::size_t>(r)]),
                          options.max_iter, options.tol, on_step);
    if (!have_best || model.objective_j < best.objective_j) {
      best = std::move(model);
      have_best = true;
    }
  }
  best.seed = options.seed;
  return best;
}

template <typename Scalar>
ClusterModel<Scalar> fit(const Dataset<Scalar>& data, const FitOptions& options,
                         const FitObserver& observer = {}) {
  return fit(data.points, options, observer);
}

}  // namespace fogspeech::kmeans
