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

#include <doctest.h>

#include <algorithm>
#include <map>
#include <numeric>
#include <random>

#include "fogspeech/kmeans.hpp"
#include "oracles.hpp"

using namespace fogspeech;
using namespace fogspeech::kmeans;

namespace {

PointMatrix<double> points(std::initializer_list<std::initializer_list<double>> rows) {
  PointMatrix<double> m(static_cast<Index>(rows.size()), static_cast<Index>(rows.begin()->size()));
  Index i = 0;
  for (const auto& r : rows) {
    Index j = 0;
    for (double v : r) m(i, j++) = v;
    ++i;
  }
  return m;
}

PointMatrix<double> random_points(std::mt19937& rng, Index n, Index d) {
  std::normal_distribution<double> g(0.0, 1.0);
  PointMatrix<double> m(n, d);
  for (Index i = 0; i < n; ++i) {
    for (Index j = 0; j < d; ++j) m(i, j) = g(rng);
  }
  return m;
}

std::vector<std::vector<double>> rows_of(const PointMatrix<double>& m) {
  std::vector<std::vector<double>> out;
  for (Index i = 0; i < m.rows(); ++i) out.emplace_back(m.row(i).data(), m.row(i).data() + m.cols());
  return out;
}

std::vector<std::vector<double>> sorted_rows(const PointMatrix<double>& m) {
  auto r = rows_of(m);
  std::sort(r.begin(), r.end());
  return r;
}

}  // namespace

TEST_CASE("init picks distinct data points deterministically") {
  const auto pts = points({{0, 0}, {1, 0}, {2, 0}, {3, 0}});
  const auto c = init_centroids(pts, 4, 7);
  CHECK(sorted_rows(c) == sorted_rows(pts));
  CHECK(init_centroids(pts, 3, 99) == init_centroids(pts, 3, 99));

  const auto dup = points({{1, 1}, {1, 1}, {1, 1}, {2, 2}});
  const auto two = init_centroids(dup, 2, 1);
  CHECK(two.row(0) != two.row(1));
  try {
    (void)init_centroids(dup, 3, 1);
    FAIL("expected TooManyClusters");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::kTooManyClusters);
  }

  std::mt19937 rng(1);
  const auto many = random_points(rng, 164, 2);
  const auto three = init_centroids(many, 3, 42);
  for (Index j = 0; j < 3; ++j) {
    bool found = false;
    for (Index i = 0; i < many.rows(); ++i) found = found || many.row(i) == three.row(j);
    CHECK(found);
  }
  CHECK(sorted_rows(three).size() == 3);
}

TEST_CASE("assignment tie-break and square corners") {
  const auto mid = points({{0.5, 0}});
  CHECK(assign_step(mid, points({{0, 0}, {1, 0}})) == Assignment{0});
  CHECK(assign_step(points({{1, 0}}), points({{0, 0}, {1, 0}})) == Assignment{1});

  // Corners (0,0) (1,0) (0,1) (1,1); centroids at (0,0) and (1,1). The other
  // two corners are equidistant and fall to centroid 0.
  const auto square = points({{0, 0}, {1, 0}, {0, 1}, {1, 1}});
  CHECK(assign_step(square, points({{0, 0}, {1, 1}})) == Assignment{0, 0, 0, 1});
}

TEST_CASE("update: means, empty cluster reseed, fixed point") {
  const auto pair = points({{0, 0}, {0, 1}});
  CHECK(update_step(pair, {0, 0}, 1) == points({{0, 0.5}}));

  const auto line = points({{0, 0}, {1, 0}, {5, 0}});
  const auto c = update_step(line, {0, 0, 0}, 2);
  CHECK(c.row(0) == points({{2, 0}}).row(0));
  CHECK(c.row(1) == line.row(2));

  const auto groups = points({{0, 0}, {0, 1}, {10, 10}, {10, 11}});
  const auto means = points({{0, 0.5}, {10, 10.5}});
  CHECK(update_step(groups, assign_step(groups, means), 2) == means);
}

TEST_CASE("fit closed forms") {
  const auto groups = points({{0, 0}, {0, 1}, {10, 10}, {10, 11}});
  FitOptions o;
  o.k = 2;
  const auto m = fit(groups, o);
  CHECK(m.objective_j == doctest::Approx(1.0));
  CHECK(sorted_rows(m.centroids) == sorted_rows(points({{0, 0.5}, {10, 10.5}})));

  std::mt19937 rng(4);
  const auto pts = random_points(rng, 30, 3);
  o.k = 1;
  const auto one = fit(pts, o);
  const Eigen::RowVectorXd mean = pts.colwise().mean();
  CHECK(one.centroids.row(0).isApprox(mean));
  CHECK(one.objective_j == doctest::Approx((pts.rowwise() - mean).squaredNorm()));

  CHECK(objective(groups, groups, Assignment{0, 1, 2, 3}) == 0.0);
  CHECK(objective(points({{3, 0}}), points({{0, 0}}), Assignment{0}) == 9.0);
}

TEST_CASE("fit matches brute force on 8 points") {
  std::mt19937 rng(8);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = random_points(rng, 8, 2);
    FitOptions o;
    o.k = 2;
    o.restarts = 20;
    o.seed = static_cast<std::uint64_t>(trial);
    const double j = fit(pts, o).objective_j;
    const double best = oracle::brute_force_min_j(rows_of(pts), 2);
    CHECK(j == doctest::Approx(best).epsilon(1e-9));
  }
}

TEST_CASE("fitted model is self-consistent and a partition") {
  std::mt19937 rng(21);
  for (int k = 1; k <= 5; ++k) {
    const auto pts = random_points(rng, 60, 2);
    FitOptions o;
    o.k = k;
    const auto m = fit(pts, o);
    CHECK(m.assignment.size() == 60);
    CHECK(objective(pts, m.centroids, m.assignment) == doctest::Approx(m.objective_j).epsilon(1e-9));
    CHECK(assign_step(pts, m.centroids) == m.assignment);
    std::vector<int> sizes(static_cast<std::size_t>(k), 0);
    for (int a : m.assignment) {
      REQUIRE(a >= 0);
      REQUIRE(a < k);
      ++sizes[static_cast<std::size_t>(a)];
    }
    for (int s : sizes) CHECK(s > 0);

    Dataset<double> data{pts, {}};
    CHECK(objective(data, m) == doctest::Approx(m.objective_j));
  }
}

TEST_CASE("J never increases within a run") {
  std::mt19937 rng(33);
  for (int trial = 0; trial < 20; ++trial) {
    const auto pts = random_points(rng, 40, 2);
    FitOptions o;
    o.k = 1 + trial % 4;
    o.restarts = 5;
    std::map<int, double> last;
    bool monotone = true;
    (void)fit(pts, o, [&](int restart, int, double j) {
      auto it = last.find(restart);
      if (it != last.end() && j > it->second + 1e-12) monotone = false;
      last[restart] = j;
    });
    CHECK(monotone);
    CHECK(last.size() == 5);
  }
}

TEST_CASE("determinism and float scalar") {
  std::mt19937 rng(5);
  const auto pts = random_points(rng, 50, 2);
  FitOptions o;
  o.k = 3;
  const auto a = fit(pts, o);
  const auto b = fit(pts, o);
  CHECK(a.centroids == b.centroids);
  CHECK(a.assignment == b.assignment);
  CHECK(a.objective_j == b.objective_j);
  CHECK(a.iterations == b.iterations);
  CHECK(a.seed == 42);

  const PointMatrix<float> pf = pts.cast<float>();
  const auto f = fit(pf, o);
  CHECK(static_cast<double>(f.objective_j) == doctest::Approx(a.objective_j).epsilon(1e-4));
}

TEST_CASE("permutation invariance from the same starting centroids") {
  std::mt19937 rng(77);
  for (int trial = 0; trial < 10; ++trial) {
    const auto pts = random_points(rng, 25, 2);
    std::vector<Index> perm(25);
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);
    PointMatrix<double> shuffled(25, 2);
    for (Index i = 0; i < 25; ++i) shuffled.row(i) = pts.row(perm[static_cast<std::size_t>(i)]);

    const auto start = init_centroids(pts, 3, static_cast<std::uint64_t>(trial));
    const auto a = run_from(pts, start, 300, 1e-9);
    const auto b = run_from(shuffled, start, 300, 1e-9);
    CHECK(a.objective_j == doctest::Approx(b.objective_j).epsilon(1e-12));
    const auto ca = sorted_rows(a.centroids), cb = sorted_rows(b.centroids);
    for (std::size_t r = 0; r < ca.size(); ++r) {
      for (std::size_t c = 0; c < 2; ++c) CHECK(ca[r][c] == doctest::Approx(cb[r][c]).epsilon(1e-12));
    }
  }
}

TEST_CASE("restart seeds are fixed by the seed") {
  CHECK(restart_seeds(42, 4) == restart_seeds(42, 4));
  CHECK(restart_seeds(42, 4) != restart_seeds(43, 4));
  const auto s = restart_seeds(1, 3);
  CHECK(std::vector<std::uint64_t>(s.begin(), s.begin() + 2) == restart_seeds(1, 2));
  FitOptions bad;
  bad.restarts = 0;
  CHECK_THROWS_AS(fit(points({{0, 0}}), bad), Error);
}
