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

#include "neuroscope/projection.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <random>
#include <unordered_set>

#include "neuroscope/error.hpp"

namespace neuroscope {

void validate_config(const ProjectionConfig& config, std::size_t n_points) {
  if (!(config.perplexity > 0.0) ||
      !(3.0 * config.perplexity < static_cast<double>(n_points) - 1.0)) {
    throw Error(ErrorCode::kPerplexityInfeasible,
                "perplexity " + std::to_string(config.perplexity) +
                    " needs 0 < 3 * perplexity < N - 1 with N = " +
                    std::to_string(n_points));
  }
  if (!(config.learning_rate > 0.0) || !std::isfinite(config.learning_rate)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
  if (!(config.early_exaggeration > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "exaggeration must be positive");
  }
  if (config.iterations < config.exaggeration_iterations) {
    throw Error(ErrorCode::kInvalidArgument,
                "iterations must cover the early exaggeration phase");
  }
}

namespace {

std::vector<double> squared_distances(const PointSet& points) {
  const std::size_t n = points.n;
  const std::size_t d = points.d;
  std::vector<double> dist(n * n, 0.0);
  for (std::size_t i = 0; i < n; ++i) {
    const double* xi = points.values.data() + i * d;
    for (std::size_t j = i + 1; j < n; ++j) {
      const double* xj = points.values.data() + j * d;
      double s = 0.0;
      for (std::size_t k = 0; k < d; ++k) {
        const double diff = xi[k] - xj[k];
        s += diff * diff;
      }
      dist[i * n + j] = s;
      dist[j * n + i] = s;
    }
  }
  return dist;
}

// Fills row i of the conditional distribution for precision `beta` and returns
// its entropy in nats. Distances are shifted by their minimum so the largest
// weight is exp(0).
double conditional_row(std::span<const double> dist, std::size_t i, double min_d,
                       double beta, std::span<double> row) {
  double z = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    row[j] = j == i ? 0.0 : std::exp(-beta * (dist[j] - min_d));
    z += row[j];
  }
  double weighted = 0.0;
  for (std::size_t j = 0; j < row.size(); ++j) {
    row[j] /= z;
    if (j != i) weighted += row[j] * (dist[j] - min_d);
  }
  return std::log(z) + beta * weighted;
}

}  // namespace

Affinities pairwise_affinities(const PointSet& points, double perplexity) {
  const std::size_t n = points.n;
  if (points.values.size() != n * points.d || n < 2) {
    throw Error(ErrorCode::kInvalidArgument, "need at least two points");
  }
  if (!(perplexity > 0.0) ||
      !(3.0 * perplexity < static_cast<double>(n) - 1.0)) {
    throw Error(ErrorCode::kPerplexityInfeasible,
                "perplexity " + std::to_string(perplexity) +
                    " needs 0 < 3 * perplexity < N - 1 with N = " +
                    std::to_string(n));
  }
  const std::vector<double> dist = squared_distances(points);
  if (*std::max_element(dist.begin(), dist.end()) == 0.0) {
    throw Error(ErrorCode::kDegenerateInput, "all points are identical");
  }

  Affinities out;
  out.n = n;
  out.conditional.assign(n * n, 0.0);
  out.beta.resize(n);
  out.achieved_perplexity.resize(n);
  out.search_steps.resize(n);
  const double target = std::log(perplexity);

  for (std::size_t i = 0; i < n; ++i) {
    std::span<const double> di(dist.data() + i * n, n);
    std::span<double> row(out.conditional.data() + i * n, n);
    double min_d = std::numeric_limits<double>::infinity();
    double mean_d = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (j == i) continue;
      min_d = std::min(min_d, di[j]);
      mean_d += di[j];
    }
    mean_d /= static_cast<double>(n - 1);

    double beta = mean_d > min_d ? 1.0 / (mean_d - min_d) : 1.0;
    double lo = 0.0;
    double hi = std::numeric_limits<double>::infinity();
    double entropy = conditional_row(di, i, min_d, beta, row);
    std::size_t step = 0;
    while (std::abs(entropy - target) >= kEntropyTolerance &&
           step < kMaxBandwidthSteps) {
      if (entropy > target) {
        lo = beta;
        beta = std::isinf(hi) ? beta * 2.0 : 0.5 * (lo + hi);
      } else {
        hi = beta;
        beta = lo == 0.0 ? beta * 0.5 : 0.5 * (lo + hi);
      }
      entropy = conditional_row(di, i, min_d, beta, row);
      ++step;
    }
    out.beta[i] = beta;
    out.achieved_perplexity[i] = std::exp(entropy);
    out.search_steps[i] = step;
  }

  out.joint.assign(n * n, 0.0);
  const double scale = 1.0 / (2.0 * static_cast<double>(n));
  double total = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double p = std::max(
          (out.conditional[i * n + j] + out.conditional[j * n + i]) * scale,
          kAffinityFloor);
      out.joint[i * n + j] = p;
      total += p;
    }
  }
  for (double& p : out.joint) p /= total;
  return out;
}

double kl_divergence(std::span<const double> joint, std::span<const double> coords,
                     std::size_t n) {
  std::vector<double> num(n * n, 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = coords[2 * i] - coords[2 * j];
      const double dy = coords[2 * i + 1] - coords[2 * j + 1];
      const double q = 1.0 / (1.0 + dx * dx + dy * dy);
      num[i * n + j] = q;
      num[j * n + i] = q;
      z += 2.0 * q;
    }
  }
  double kl = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      const double p = joint[i * n + j];
      if (i == j || p <= 0.0) continue;
      kl += p * std::log(p / (num[i * n + j] / z));
    }
  }
  return kl;
}

void kl_gradient(std::span<const double> joint, std::span<const double> coords,
                 std::size_t n, double exaggeration, std::span<double> grad) {
  std::vector<double> num(n * n, 0.0);
  double z = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i + 1; j < n; ++j) {
      const double dx = coords[2 * i] - coords[2 * j];
      const double dy = coords[2 * i + 1] - coords[2 * j + 1];
      const double q = 1.0 / (1.0 + dx * dx + dy * dy);
      num[i * n + j] = q;
      num[j * n + i] = q;
      z += 2.0 * q;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double gx = 0.0;
    double gy = 0.0;
    for (std::size_t j = 0; j < n; ++j) {
      if (i == j) continue;
      const double q = num[i * n + j];
      const double m = (exaggeration * joint[i * n + j] - q / z) * q;
      gx += m * (coords[2 * i] - coords[2 * j]);
      gy += m * (coords[2 * i + 1] - coords[2 * j + 1]);
    }
    grad[2 * i] = 4.0 * gx;
    grad[2 * i + 1] = 4.0 * gy;
  }
}

ProjectionResult tsne(const PointSet& points, const ProjectionConfig& config,
                      std::stop_token stop) {
  const std::size_t n = points.n;
  validate_config(config, n);
  const Affinities affinities = pairwise_affinities(points, config.perplexity);
  const std::vector<double>& p = affinities.joint;

  // Constant part of KL: sum p log p.
  double p_log_p = 0.0;
  for (std::size_t k = 0; k < p.size(); ++k) {
    if (p[k] > 0.0) p_log_p += p[k] * std::log(p[k]);
  }

  ProjectionResult result;
  result.coords.resize(2 * n);
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> init(0.0, 1e-4);
  for (double& c : result.coords) c = init(rng);
  result.kl_trace.reserve(config.iterations);

  std::vector<double>& y = result.coords;
  std::vector<double> update(2 * n, 0.0);
  std::vector<double> gains(2 * n, 1.0);
  std::vector<double> grad(2 * n, 0.0);
  std::vector<double> num(n * n, 0.0);

  for (std::size_t iter = 0; iter < config.iterations; ++iter) {
    if (stop.stop_requested()) {
      throw Error(ErrorCode::kCancelled, "projection cancelled");
    }
    const double exaggeration =
        iter < config.exaggeration_iterations ? config.early_exaggeration : 1.0;
    const double momentum = iter < config.momentum_switch_iteration
                                ? config.initial_momentum
                                : config.final_momentum;

    // Student-t kernel, normalizer, and the data-dependent part of KL.
    double z = 0.0;
    double p_log_num = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double yix = y[2 * i];
      const double yiy = y[2 * i + 1];
      for (std::size_t j = i + 1; j < n; ++j) {
        const double dx = yix - y[2 * j];
        const double dy = yiy - y[2 * j + 1];
        const double d2 = dx * dx + dy * dy;
        const double q = 1.0 / (1.0 + d2);
        num[i * n + j] = q;
        num[j * n + i] = q;
        z += q;
        p_log_num += p[i * n + j] * std::log1p(d2);
      }
    }
    z *= 2.0;
    p_log_num *= 2.0;
    // KL = sum p log p - sum p log(num / z) with sum p = 1.
    result.kl_trace.push_back(p_log_p + p_log_num + std::log(z));

    const double inv_z = 1.0 / z;
    for (std::size_t i = 0; i < n; ++i) {
      double gx = 0.0;
      double gy = 0.0;
      const double* pi = p.data() + i * n;
      const double* numi = num.data() + i * n;
      const double yix = y[2 * i];
      const double yiy = y[2 * i + 1];
      for (std::size_t j = 0; j < n; ++j) {
        const double q = numi[j];
        const double m = (exaggeration * pi[j] - q * inv_z) * q;
        gx += m * (yix - y[2 * j]);
        gy += m * (yiy - y[2 * j + 1]);
      }
      grad[2 * i] = 4.0 * gx;
      grad[2 * i + 1] = 4.0 * gy;
    }

    double mean_x = 0.0;
    double mean_y = 0.0;
    for (std::size_t k = 0; k < 2 * n; ++k) {
      const bool same_sign = (grad[k] > 0.0) == (update[k] > 0.0);
      gains[k] = same_sign ? std::max(gains[k] * 0.8, 0.01) : gains[k] + 0.2;
      update[k] = momentum * update[k] - config.learning_rate * gains[k] * grad[k];
      y[k] += update[k];
      if (!std::isfinite(y[k])) {
        throw Error(ErrorCode::kNonFiniteEncountered,
                    "t-SNE diverged at iteration " + std::to_string(iter) +
                        "; try a lower learning rate");
      }
      (k % 2 == 0 ? mean_x : mean_y) += y[k];
    }
    mean_x /= static_cast<double>(n);
    mean_y /= static_cast<double>(n);
    for (std::size_t i = 0; i < n; ++i) {
      y[2 * i] -= mean_x;
      y[2 * i + 1] -= mean_y;
    }
  }
  return result;
}

ProjectionResult project_node(const Bundle& bundle, std::string_view node,
                              std::span<const std::size_t> sample,
                              const ProjectionConfig& config, std::stop_token stop) {
  const ActivationMatrix& a = bundle.matrix(node);
  PointSet points;
  points.n = sample.size();
  points.d = a.n_neurons();
  points.values.reserve(points.n * points.d);
  for (std::size_t index : sample) {
    if (index >= a.n_instances()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "sample index " + std::to_string(index) + " out of range");
    }
    for (float v : a.row(index)) points.values.push_back(v);
  }
  ProjectionResult result = tsne(points, config, std::move(stop));
  result.node_id = a.node_id();
  result.point_ids.assign(sample.begin(), sample.end());
  return result;
}

std::vector<bool> highlight_membership(const ProjectionResult& result,
                                       std::span<const std::size_t> subset) {
  const std::unordered_set<std::size_t> members(subset.begin(), subset.end());
  std::vector<bool> mask;
  mask.reserve(result.point_ids.size());
  for (std::size_t id : result.point_ids) mask.push_back(members.count(id) != 0);
  return mask;
}

}  // namespace neuroscope
