// Copyright 2026 The Neuroscope Authors
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


#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstring>
#include <numeric>
#include <random>
#include <thread>

#include "checks.hpp"
#include "doctest.h"
#include "fixtures.hpp"
#include "geometry.hpp"
#include "neuroscope/projection.hpp"
#include "neuroscope/sampler.hpp"
#include "neuroscope/subset.hpp"

using namespace neuroscope;
using neuroscope::testing::code_of;

namespace {

void check_joint_invariants(const Affinities& a) {
  const std::size_t n = a.n;
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    CHECK(a.joint[i * n + i] == 0.0);
    double row = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      CHECK(a.joint[i * n + j] == a.joint[j * n + i]);
      if (i != j) CHECK(a.joint[i * n + j] > 0.0);
      total += a.joint[i * n + j];
      row += a.conditional[i * n + j];
    }
    CHECK(row == doctest::Approx(1.0).epsilon(1e-12));
  }
  CHECK(std::fabs(total - 1.0) < 1e-10);
}

ProjectionConfig quick_config(std::size_t iterations = 300) {
  ProjectionConfig c;
  c.perplexity = 10;
  c.iterations = iterations;
  c.exaggeration_iterations = std::min<std::size_t>(100, iterations);
  c.momentum_switch_iteration = c.exaggeration_iterations;
  c.seed = 42;
  return c;
}

}  // namespace

TEST_SUITE("projection") {

TEST_CASE("equidistant points give uniform conditionals") {
  PointSet simplex{5, 5, std::vector<double>(25, 0.0)};
  for (std::size_t i = 0; i < 5; ++i) simplex.values[i * 5 + i] = 1.0;
  for (double perplexity : {0.5, 1.0, 1.3}) {
    const Affinities a = pairwise_affinities(simplex, perplexity);
    for (std::size_t i = 0; i < 5; ++i) {
      for (std::size_t j = 0; j < 5; ++j) {
        CHECK(a.conditional[i * 5 + j] == doctest::Approx(i == j ? 0.0 : 0.25).epsilon(1e-15));
      }
      CHECK(a.achieved_perplexity[i] == doctest::Approx(4.0).epsilon(1e-12));
      CHECK(a.search_steps[i] == kMaxBandwidthSteps);
    }
    check_joint_invariants(a);
  }
}

TEST_CASE("calibration and P invariants on Gaussian data") {
  const PointSet x = neuroscope::testing::gaussian_points(120, 20, 5);
  const Affinities a = pairwise_affinities(x, 30.0);
  for (double perp : a.achieved_perplexity) CHECK(std::fabs(perp - 30.0) < 1e-2);
  check_joint_invariants(a);
}

TEST_CASE("cluster block structure matches a reference implementation") {
  const auto data = neuroscope::testing::gaussian_clusters(30, 3, 50, 10.0, 8);
  const Affinities a = pairwise_affinities(data.points, 10.0);
  const std::vector<double> ref = neuroscope::testing::reference_joint(data.points, 10.0);
  const std::size_t n = data.points.n;
  double within = 0.0;
  double between = 0.0;
  double ref_within = 0.0;
  double ref_between = 0.0;
  std::size_t n_within = 0;
  std::size_t n_between = 0;
  double max_diff = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      max_diff = std::max(max_diff, std::fabs(a.joint[i * n + j] - ref[i * n + j]));
      if (data.labels[i] == data.labels[j]) {
        within += a.joint[i * n + j];
        ref_within += ref[i * n + j];
        ++n_within;
      } else {
        between += a.joint[i * n + j];
        ref_between += ref[i * n + j];
        ++n_between;
      }
    }
  }
  CHECK(within / n_within > between / n_between);
  CHECK(ref_within / n_within > ref_between / n_between);
  CHECK(max_diff < 1e-6);
}

TEST_CASE("input errors") {
  const PointSet same{6, 2, std::vector<double>(12, 1.0)};
  CHECK(code_of([&] { pairwise_affinities(same, 1.0); }) == ErrorCode::kDegenerateInput);
  const PointSet x = neuroscope::testing::gaussian_points(10, 3, 1);
  CHECK(code_of([&] { pairwise_affinities(x, 3.0); }) == ErrorCode::kPerplexityInfeasible);
  CHECK(code_of([&] { pairwise_affinities(x, 0.0); }) == ErrorCode::kPerplexityInfeasible);
  ProjectionConfig c = quick_config();
  c.perplexity = 2.0;
  c.iterations = 50;
  CHECK(code_of([&] { tsne(x, c); }) == ErrorCode::kInvalidArgument);
  c.iterations = 300;
  c.learning_rate = 0.0;
  CHECK(code_of([&] { tsne(x, c); }) == ErrorCode::kInvalidArgument);
}

TEST_CASE("two points") {
  const PointSet x{2, 3, {0, 0, 0, 1, 2, 3}};
  ProjectionConfig c = quick_config(200);
  c.perplexity = 0.3;
  const ProjectionResult r = tsne(x, c);
  REQUIRE(r.coords.size() == 4);
  for (double v : r.coords) CHECK(std::isfinite(v));
  CHECK((r.coords[0] != r.coords[2] || r.coords[1] != r.coords[3]));
  CHECK(std::isfinite(r.kl_final()));
}

TEST_CASE("determinism, purity and KL trend") {
  const auto data = neuroscope::testing::gaussian_clusters(40, 3, 50, 10.0, 2);
  ProjectionConfig c;
  c.perplexity = 15;
  c.seed = 7;
  const ProjectionResult a = tsne(data.points, c);
  const ProjectionResult b = tsne(data.points, c);
  REQUIRE(a.coords.size() == b.coords.size());
  CHECK(std::memcmp(a.coords.data(), b.coords.data(), a.coords.size() * sizeof(double)) == 0);
  CHECK(a.kl_trace.size() == c.iterations);
  for (double kl : a.kl_trace) {
    CHECK(std::isfinite(kl));
    CHECK(kl >= 0.0);
  }
  const double late = std::accumulate(a.kl_trace.end() - 100, a.kl_trace.end(), 0.0) / 100;
  const double mid =
      std::accumulate(a.kl_trace.begin() + 300, a.kl_trace.begin() + 400, 0.0) / 100;
  CHECK(late <= mid);
  CHECK(neuroscope::testing::knn_purity(a.coords, data.labels, 10) >= 0.9);
  // KL trace agrees with the standalone objective on the final coordinates
  // up to the last update.
  const Affinities p = pairwise_affinities(data.points, c.perplexity);
  CHECK(kl_divergence(p.joint, a.coords, data.points.n) ==
        doctest::Approx(a.kl_final()).epsilon(1e-3));

  ProjectionConfig other = c;
  other.seed = 8;
  const ProjectionResult d = tsne(data.points, other);
  CHECK(std::memcmp(a.coords.data(), d.coords.data(), a.coords.size() * sizeof(double)) != 0);
}

TEST_CASE("gradient matches finite differences") {
  const PointSet x = neuroscope::testing::gaussian_points(10, 5, 13);
  const Affinities p = pairwise_affinities(x, 2.5);
  std::mt19937_64 rng(99);
  std::normal_distribution<double> normal(0.0, 1.0);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<double> y(20);
    for (double& v : y) v = normal(rng);
    std::vector<double> grad(20);
    kl_gradient(p.joint, y, 10, 1.0, grad);
    for (std::size_t k = 0; k < 20; ++k) {
      const double h = 1e-5;
      std::vector<double> plus = y;
      std::vector<double> minus = y;
      plus[k] += h;
      minus[k] -= h;
      const double fd = (kl_divergence(p.joint, plus, 10) - kl_divergence(p.joint, minus, 10)) /
                        (2 * h);
      const double rel = std::fabs(fd - grad[k]) / std::max(std::fabs(fd), 1e-12);
      CHECK(rel < 1e-4);
    }
  }
}

TEST_CASE("objective is translation invariant") {
  const PointSet x = neuroscope::testing::gaussian_points(30, 5, 4);
  const Affinities p = pairwise_affinities(x, 5.0);
  std::mt19937_64 rng(1);
  std::normal_distribution<double> normal(0.0, 2.0);
  std::vector<double> y(60);
  for (double& v : y) v = normal(rng);
  std::vector<double> shifted = y;
  for (std::size_t i = 0; i < 30; ++i) {
    shifted[2 * i] += 0.75;
    shifted[2 * i + 1] -= 1.25;
  }
  CHECK(std::fabs(kl_divergence(p.joint, y, 30) - kl_divergence(p.joint, shifted, 30)) < 1e-12);
}

TEST_CASE("cancellation") {
  const PointSet x = neuroscope::testing::gaussian_points(60, 5, 4);
  std::stop_source source;
  source.request_stop();
  CHECK(code_of([&] { tsne(x, quick_config(), source.get_token()); }) ==
        ErrorCode::kCancelled);
}

TEST_CASE("divergence is reported") {
  const auto data = neuroscope::testing::gaussian_clusters(20, 3, 10, 10.0, 3);
  ProjectionConfig c = quick_config();
  c.learning_rate = 1e300;
  CHECK(code_of([&] { tsne(data.points, c); }) == ErrorCode::kNonFiniteEncountered);
}

TEST_CASE("highlight masks") {
  ProjectionResult r;
  r.point_ids = {4, 8, 15, 16, 23, 42};
  const std::vector<std::size_t> all = {4, 8, 15, 16, 23, 42};
  const std::vector<std::size_t> none = {1, 2, 3};
  const auto m_all = highlight_membership(r, all);
  CHECK(std::all_of(m_all.begin(), m_all.end(), [](bool b) { return b; }));
  const auto m_none = highlight_membership(r, none);
  CHECK(std::none_of(m_none.begin(), m_none.end(), [](bool b) { return b; }));

  neuroscope::testing::TempDir tmp;
  neuroscope::testing::make_scenario_bundle(tmp.path());
  const Bundle b = load_bundle(tmp.path());
  SampleSpec spec;
  spec.budget = 90;
  spec.seed = 3;
  const auto sample = draw_sample(b, spec);
  ProjectionConfig c = quick_config(120);
  c.exaggeration_iterations = 60;
  c.momentum_switch_iteration = 60;
  const ProjectionResult pr = project_node(b, "fc_out", sample, c);
  CHECK(pr.point_ids == sample);
  CHECK(pr.node_id == "fc_out");
  const auto num = evaluate(parse_predicate("true_label = 'NUM'"), b);
  std::vector<std::size_t> sorted_sample = sample;
  std::sort(sorted_sample.begin(), sorted_sample.end());
  std::vector<std::size_t> inter;
  std::set_intersection(sorted_sample.begin(), sorted_sample.end(), num.begin(), num.end(),
                        std::back_inserter(inter));
  const auto mask = highlight_membership(pr, num);
  CHECK(static_cast<std::size_t>(std::count(mask.begin(), mask.end(), true)) == inter.size());
  CHECK(code_of([&] { project_node(b, "pool3_out", sample, c); }) == ErrorCode::kUnknownNode);
}

}  // TEST_SUITE
