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

#ifndef NEUROSCOPE_SAMPLER_HPP_
#define NEUROSCOPE_SAMPLER_HPP_

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "neuroscope/activation_store.hpp"

namespace neuroscope {

enum class SampleStrategy { kStratifiedByTrueLabel };

struct SampleSpec {
  std::size_t budget = 1000;
  std::vector<std::string> pinned;  // instance ids
  std::uint64_t seed = 0;
  SampleStrategy strategy = SampleStrategy::kStratifiedByTrueLabel;
};

// Largest-remainder apportionment of `budget` seats over classes of the given
// sizes, with per-class floors (pinned instances) and ceilings (class size).
// Leftover seats go to the largest fractional quotas, ties to the earlier
// class. Requires sum(floors) <= budget <= sum(sizes).
std::vector<std::size_t> apportion(std::size_t budget,
                                   std::span<const std::size_t> class_sizes,
                                   std::span<const std::size_t> floors);

// Sorted sample indices: all pinned instances, the rest stratified by true
// label and drawn uniformly without replacement under `spec.seed`.
// Throws UnknownPinnedId or BudgetTooSmall.
std::vector<std::size_t> draw_sample(const Bundle& bundle, const SampleSpec& spec);

struct PanelGroup {
  std::string class_name;
  std::vector<std::size_t> correct;
  std::vector<std::size_t> misclassified;
};

// Per true class, in class-list order. Lists are ordered by the score of the
// predicted class, descending, ties by index.
struct InstancePanel {
  std::vector<PanelGroup> groups;
};

// Throws IndexOutOfRange for invalid sample indices.
InstancePanel build_panel(const Bundle& bundle, std::span<const std::size_t> sample);

}  // namespace neuroscope

#endif  // NEUROSCOPE_SAMPLER_HPP_
