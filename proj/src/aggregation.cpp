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

#include "neuroscope/aggregation.hpp"

#include <algorithm>
#include <charconv>
#include <numeric>

#include "neuroscope/error.hpp"

namespace neuroscope {

std::string RowKey::to_string() const {
  return kind == Kind::kSubset ? "subset:" + subset_id
                               : "instance:" + std::to_string(instance);
}

std::optional<RowKey> RowKey::parse(std::string_view text) {
  constexpr std::string_view kSubsetPrefix = "subset:";
  constexpr std::string_view kInstancePrefix = "instance:";
  if (text.substr(0, kSubsetPrefix.size()) == kSubsetPrefix &&
      text.size() > kSubsetPrefix.size()) {
    return subset(std::string(text.substr(kSubsetPrefix.size())));
  }
  if (text.substr(0, kInstancePrefix.size()) == kInstancePrefix) {
    const std::string_view digits = text.substr(kInstancePrefix.size());
    std::size_t index = 0;
    auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), index);
    if (ec == std::errc() && ptr == digits.data() + digits.size() && !digits.empty()) {
      return of_instance(index);
    }
  }
  return std::nullopt;
}

namespace {

// Adds rows `sorted[lo, hi)` of A into `acc`, splitting ranges larger than one
// block in half. The split points depend only on the range length, which fixes
// the summation schedule for a given member set.
void pairwise_sum(const ActivationMatrix& a, std::span<const std::size_t> sorted,
                  std::span<double> acc, std::vector<std::vector<double>>& scratch,
                  std::size_t depth) {
  const std::size_t cols = a.n_neurons();
  if (sorted.size() <= kSummationBlock) {
    std::fill(acc.begin(), acc.end(), 0.0);
    for (std::size_t i : sorted) {
      const float* row = a.values().data() + i * cols;
      for (std::size_t c = 0; c < cols; ++c) acc[c] += static_cast<double>(row[c]);
    }
    return;
  }
  if (scratch.size() <= depth) scratch.emplace_back(cols);
  std::span<double> right(scratch[depth]);
  const std::size_t half = sorted.size() / 2;
  pairwise_sum(a, sorted.first(half), acc, scratch, depth + 1);
  pairwise_sum(a, sorted.subspan(half), right, scratch, depth + 1);
  for (std::size_t c = 0; c < cols; ++c) acc[c] += right[c];
}

}  // namespace

void subset_mean(const ActivationMatrix& activations,
                 std::span<const std::size_t> members, std::span<double> out) {
  const std::size_t n = activations.n_instances();
  for (std::size_t i : members) {
    if (i >= n) {
      throw Error(ErrorCode::kMemberIndexOutOfRange,
                  "member index " + std::to_string(i) + " out of range [0, " +
                      std::to_string(n) + ")");
    }
  }
  if (members.empty()) {
    std::fill(out.begin(), out.end(), 0.0);
    return;
  }
  std::span<const std::size_t> sorted = members;
  std::vector<std::size_t> copy;
  if (!std::is_sorted(members.begin(), members.end())) {
    copy.assign(members.begin(), members.end());
    std::sort(copy.begin(), copy.end());
    sorted = copy;
  }
  std::vector<std::vector<double>> scratch;
  pairwise_sum(activations, sorted, out, scratch, 0);
  const double inv = static_cast<double>(sorted.size());
  for (double& v : out) v /= inv;
}

SubsetActivationMatrix aggregate_subsets(const ActivationMatrix& activations,
                                         const MembershipMatrix& membership) {
  SubsetActivationMatrix view;
  view.node_id = activations.node_id();
  view.n_neurons = activations.n_neurons();
  const std::size_t rows = membership.members.size();
  view.values.assign(rows * view.n_neurons, 0.0);
  view.row_keys.reserve(rows);
  view.row_counts.reserve(rows);
  for (std::size_t k = 0; k < rows; ++k) {
    view.row_keys.push_back(RowKey::subset(membership.subsets[k]));
    view.row_counts.push_back(membership.members[k].size());
    if (membership.members[k].empty()) view.empty_rows.insert(k);
    subset_mean(activations, membership.members[k],
                std::span<double>(view.values).subspan(k * view.n_neurons,
                                                       view.n_neurons));
  }
  return view;
}

SubsetActivationMatrix assemble_view(const Bundle& bundle, std::string_view node,
                                     const MembershipMatrix& membership,
                                     std::span<const std::string> subset_rows,
                                     std::span<const std::size_t> instance_rows) {
  const ActivationMatrix& a = bundle.matrix(node);
  SubsetActivationMatrix view;
  view.node_id = a.node_id();
  view.n_neurons = a.n_neurons();
  const std::size_t rows = subset_rows.size() + instance_rows.size();
  view.values.assign(rows * view.n_neurons, 0.0);
  view.row_keys.reserve(rows);
  view.row_counts.reserve(rows);

  std::size_t r = 0;
  for (const std::string& id : subset_rows) {
    const std::size_t k = membership.find(id);
    if (k == std::string_view::npos) {
      throw Error(ErrorCode::kUnknownSubset, "unknown subset '" + id + "'");
    }
    const auto& members = membership.members[k];
    view.row_keys.push_back(RowKey::subset(id));
    view.row_counts.push_back(members.size());
    if (members.empty()) view.empty_rows.insert(r);
    subset_mean(a, members,
                std::span<double>(view.values).subspan(r * view.n_neurons, view.n_neurons));
    ++r;
  }
  for (std::size_t index : instance_rows) {
    if (index >= a.n_instances()) {
      throw Error(ErrorCode::kIndexOutOfRange,
                  "instance " + std::to_string(index) + " out of range [0, " +
                      std::to_string(a.n_instances()) + ")");
    }
    view.row_keys.push_back(RowKey::of_instance(index));
    view.row_counts.push_back(1);
    auto src = a.row(index);
    std::copy(src.begin(), src.end(), view.values.begin() +
                                          static_cast<std::ptrdiff_t>(r * view.n_neurons));
    ++r;
  }
  return view;
}

ColumnOrder sort_columns(const SubsetActivationMatrix& view, const RowKey& anchor) {
  auto it = std::find(view.row_keys.begin(), view.row_keys.end(), anchor);
  if (it == view.row_keys.end()) {
    throw Error(ErrorCode::kUnknownRow,
                "row '" + anchor.to_string() + "' is not in the view");
  }
  const std::size_t r = static_cast<std::size_t>(it - view.row_keys.begin());
  if (view.empty_rows.count(r) != 0) {
    throw Error(ErrorCode::kEmptyAnchorRow,
                "row '" + anchor.to_string() + "' has no members to sort by");
  }
  const auto values = view.row(r);
  ColumnOrder order{view.node_id, anchor, std::vector<std::size_t>(view.n_neurons)};
  std::iota(order.permutation.begin(), order.permutation.end(), 0);
  std::stable_sort(order.permutation.begin(), order.permutation.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] > values[b]; });
  return order;
}

}  // namespace neuroscope
