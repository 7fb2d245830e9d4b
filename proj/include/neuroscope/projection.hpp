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

// Exact (O(N^2)) t-SNE over instance activation rows.

#ifndef NEUROSCOPE_PROJECTION_HPP_
#define NEUROSCOPE_PROJECTION_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <stop_token>
#include <string>
#include <string_view>
#include <vector>

#include "neuroscope/activation_store.hpp"

namespace neuroscope {

struct ProjectionConfig {
  double perplexity = 30.0;
  std::size_t iterations = 1000;
  double early_exaggeration = 4.0;
  std::size_t exaggeration_iterations = 250;
  double learning_rate = 100.0;
  double initial_momentum = 0.5;
  double final_momentum = 0.8;
  std::size_t momentum_switch_iteration = 250;
  std::uint64_t seed = 0;

  bool operator==(const ProjectionConfig&) const = default;
};

// Throws PerplexityInfeasible unless 0 < 3 * perplexity < n_points - 1, and
// InvalidArgument for the remaining parameter constraints.
void validate_config(const ProjectionConfig& config, std::size_t n_points);

// Row-major n x d input.
struct PointSet {
  std::size_t n = 0;
  std::size_t d = 0;
  std::vector<double> values;
};

struct Affinities {
  std::size_t n = 0;
  // Joint probabilities, n x n, symmetric, zero diagonal, sums to 1.
  std::vector<double> joint;
  // Row-normalized conditionals p_{j|i}, n x n.
  std::vector<double> conditional;
  // Gaussian precision 1 / (2 sigma_i^2) per point.
  std::vector<double> beta;
  // exp(H(P_i)) actually reached per point.
  std::vector<double> achieved_perplexity;
  std::vector<std::size_t> search_steps;
};

inline constexpr std::size_t kMaxBandwidthSteps = 50;
// Tolerance on |H(P_i) - log(perplexity)|, in nats.
inline constexpr double kEntropyTolerance = 1e-5;
inline constexpr double kAffinityFloor = 1e-12;

// Throws DegenerateInput when every point coincides, PerplexityInfeasible when
// the perplexity bound is violated.
Affinities pairwise_affinities(const PointSet& points, double perplexity);

// KL(P || Q) for embedding `coords` (n x 2, row-major).
double kl_divergence(std::span<const double> joint, std::span<const double> coords,
                     std::size_t n);
// d KL / d coords, written into `grad` (n x 2). `exaggeration` scales P.
void kl_gradient(std::span<const double> joint, std::span<const double> coords,
                 std::size_t n, double exaggeration, std::span<double> grad);

struct ProjectionResult {
  NodeId node_id;
  std::vector<std::size_t> point_ids;
  std::vector<double> coords;    // point_ids.size() x 2
  std::vector<double> kl_trace;  // one entry per iteration

  double kl_final() const { return kl_trace.empty() ? 0.0 : kl_trace.back(); }
};

// Deterministic in (points, config). Throws DegenerateInput,
// PerplexityInfeasible, NonFiniteEncountered, or Cancelled when `stop` fires.
ProjectionResult tsne(const PointSet& points, const ProjectionConfig& config,
                      std::stop_token stop = {});

// Gathers the sample's rows at `node` and projects them.
ProjectionResult project_node(const Bundle& bundle, std::string_view node,
                              std::span<const std::size_t> sample,
                              const ProjectionConfig& config,
                              std::stop_token stop = {});

// mask[k] is true iff result.point_ids[k] is in `subset`.
std::vector<bool> highlight_membership(const ProjectionResult& result,
                                       std::span<const std::size_t> subset);

}  // namespace neuroscope

#endif  // NEUROSCOPE_PROJECTION_HPP_
