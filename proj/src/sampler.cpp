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

#include "neuroscope/sampler.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <unordered_map>
#include <unordered_set>

#include "neuroscope/error.hpp"

namespace neuroscope {

std::vector<std::size_t> apportion(std::size_t budget,
                                   std::span<const std::size_t> class_sizes,
                                   std::span<const std::size_t> floors) {
  const std::size_t k = class_sizes.size();
  std::vector<std::size_t> alloc(k, 0);
  std::vector<bool> fixed(k, false);

  for (std::size_t round = 0; round <= k; ++round) {
    std::uint64_t seats = budget;
    std::uint64_t population = 0;
    for (std::size_t c = 0; c < k; ++c) {
      if (fixed[c]) {
        seats -= alloc[c];
      } else {
        population += class_sizes[c];
      }
    }

    // Hamilton: integer quotas, leftovers by largest remainder.
    std::vector<std::size_t> open;
    std::vector<std::uint64_t> remainder(k, 0);
    std::uint64_t given = 0;
    for (std::size_t c = 0; c < k; ++c) {
      if (fixed[c]) continue;
      open.push_back(c);
      if (population == 0) {
        alloc[c] = 0;
        continue;
      }
      const std::uint64_t scaled = seats * class_sizes[c];
      alloc[c] = static_cast<std::size_t>(scaled / population);
      remainder[c] = scaled % population;
      given += alloc[c];
    }
    std::vector<std::size_t> by_remainder = open;
    std::stable_sort(by_remainder.begin(), by_remainder.end(),
                     [&](std::size_t a, std::size_t b) {
                       return remainder[a] > remainder[b];
                     });
    for (std::size_t i = 0; given < seats && i < by_remainder.size(); ++i) {
      ++alloc[by_remainder[i]];
      ++given;
    }

    bool violated = false;
    for (std::size_t c : open) {
      if (alloc[c] < floors[c]) {
        alloc[c] = floors[c];
        fixed[c] = true;
        violated = true;
      } else if (alloc[c] > class_sizes[c]) {
        alloc[c] = class_sizes[c];
        fixed[c] = true;
        violated = true;
      }
    }
    if (!violated) break;
  }

  // Bounds can leave the total off by a few seats; settle in class order.
  std::size_t total = std::accumulate(alloc.begin(), alloc.end(), std::size_t{0});
  for (std::size_t c = 0; c < k && total < budget; ++c) {
    const std::size_t room = class_sizes[c] - alloc[c];
    const std::size_t add = std::min(room, budget - total);
    alloc[c] += add;
    total += add;
  }
  for (std::size_t c = k; c-- > 0 && total > budget;) {
    const std::size_t spare = alloc[c] - floors[c];
    const std::size_t take = std::min(spare, total - budget);
    alloc[c] -= take;
    total -= take;
  }
  return alloc;
}

std::vector<std::size_t> draw_sample(const Bundle& bundle, const SampleSpec& spec) {
  const std::size_t n = bundle.n_instances();
  std::unordered_map<std::string_view, std::size_t> by_id;
  by_id.reserve(n);
  for (const InstanceRecord& r : bundle.instances) by_id.emplace(r.id, r.index);

  std::unordered_set<std::size_t> pinned;
  for (const std::string& id : spec.pinned) {
    auto it = by_id.find(id);
    if (it == by_id.end()) {
      throw Error(ErrorCode::kUnknownPinnedId, "unknown pinned instance '" + id + "'");
    }
    pinned.insert(it->second);
  }
  if (pinned.size() > spec.budget) {
    throw Error(ErrorCode::kBudgetTooSmall,
                "budget " + std::to_string(spec.budget) + " is smaller than the " +
                    std::to_string(pinned.size()) + " pinned instances");
  }
  if (spec.budget >= n) {
    std::vector<std::size_t> all(n);
    std::iota(all.begin(), all.end(), 0);
    return all;
  }

  const std::size_t k = bundle.classes.size();
  std::vector<std::vector<std::size_t>> free_members(k);
  std::vector<std::size_t> sizes(k, 0);
  std::vector<std::size_t> floors(k, 0);
  for (const InstanceRecord& r : bundle.instances) {
    ++sizes[r.true_class];
    if (pinned.count(r.index) != 0) {
      ++floors[r.true_class];
    } else {
      free_members[r.true_class].push_back(r.index);
    }
  }
  const std::vector<std::size_t> alloc = apportion(spec.budget, sizes, floors);

  std::vector<std::size_t> sample(pinned.begin(), pinned.end());
  std::mt19937_64 rng(spec.seed);
  for (std::size_t c = 0; c < k; ++c) {
    std::vector<std::size_t>& pool = free_members[c];
    const std::size_t take = alloc[c] - floors[c];
    // Partial Fisher-Yates: the first `take` slots become the draw.
    for (std::size_t i = 0; i < take; ++i) {
      std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
      std::swap(pool[i], pool[pick(rng)]);
      sample.push_back(pool[i]);
    }
  }
  std::sort(sample.begin(), sample.end());
  return sample;
}

InstancePanel build_panel(const Bundle& bundle, std::span<const std::size_t> sample) {
  InstancePanel panel;
  panel.groups.reserve(bundle.classes.size());
  for (const std::string& c : bundle.classes) panel.groups.push_back({c, {}, {}});
  for (std::size_t index : sample) {
    if (index >= bundle.n_instances()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "sample index " + std::to_string(index) + " out of range");
    }
    const InstanceRecord& r = bundle.instances[index];
    PanelGroup& g = panel.groups[r.true_class];
    (r.correct() ? g.correct : g.misclassified).push_back(index);
  }
  auto confidence = [&](std::size_t i) {
    const InstanceRecord& r = bundle.instances[i];
    return r.scores[r.predicted_class];
  };
  auto order = [&](std::size_t a, std::size_t b) {
    const double sa = confidence(a);
    const double sb = confidence(b);
    return sa != sb ? sa > sb : a < b;
  };
  for (PanelGroup& g : panel.groups) {
    std::sort(g.correct.begin(), g.correct.end(), order);
    std::sort(g.misclassified.begin(), g.misclassified.end(), order);
  }
  return panel;
}

}  // namespace neuroscope
