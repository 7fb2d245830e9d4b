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

#ifndef NEUROSCOPE_AGGREGATION_HPP_
#define NEUROSCOPE_AGGREGATION_HPP_

#include <cstddef>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "neuroscope/activation_store.hpp"
#include "neuroscope/subset.hpp"

namespace neuroscope {

struct RowKey {
  enum class Kind { kSubset, kInstance };

  Kind kind = Kind::kSubset;
  std::string subset_id;     // kSubset
  std::size_t instance = 0;  // kInstance

  static RowKey subset(std::string id) { return {Kind::kSubset, std::move(id), 0}; }
  static RowKey of_instance(std::size_t index) { return {Kind::kInstance, {}, index}; }

  // "subset:<id>" or "instance:<index>".
  std::string to_string() const;
  static std::optional<RowKey> parse(std::string_view text);

  bool operator==(const RowKey&) const = default;
};

// Matrix-view payload: subset-mean rows and raw instance rows over one node's
// neurons, widened to double.
struct SubsetActivationMatrix {
  NodeId node_id;
  std::size_t n_neurons = 0;
  std::vector<RowKey> row_keys;
  std::vector<double> values;  // row_keys.size() x n_neurons, row-major
  // Rows whose subset has no members; their values are zero and carry no
  // meaning.
  std::set<std::size_t> empty_rows;
  // Member count per row (1 for instance rows).
  std::vector<std::size_t> row_counts;

  std::size_t n_rows() const { return row_keys.size(); }
  std::span<const double> row(std::size_t r) const {
    return {values.data() + r * n_neurons, n_neurons};
  }
};

struct ColumnOrder {
  NodeId node_id;
  RowKey anchor;
  std::vector<std::size_t> permutation;
};

// Members are summed at most this many at a time before the partial sums are
// combined pairwise.
inline constexpr std::size_t kSummationBlock = 128;

// Mean activation row of `members` (64-bit accumulation). Sorts a copy of the
// indices first, so the result does not depend on member order. Writes
// `out.size() == A.n_neurons()` values. Throws MemberIndexOutOfRange.
void subset_mean(const ActivationMatrix& activations,
                 std::span<const std::size_t> members, std::span<double> out);

// One row per subset of `membership`, in order: the normalized product
// S^T A. Linear in the total membership size.
SubsetActivationMatrix aggregate_subsets(const ActivationMatrix& activations,
                                         const MembershipMatrix& membership);

// Subset rows in registry order followed by instance rows in request order.
// Throws UnknownNode, UnknownSubset or IndexOutOfRange.
SubsetActivationMatrix assemble_view(const Bundle& bundle, std::string_view node,
                                     const MembershipMatrix& membership,
                                     std::span<const std::string> subset_rows,
                                     std::span<const std::size_t> instance_rows);

// Columns ordered by the anchor row, descending, ties by neuron index.
// Throws UnknownRow or EmptyAnchorRow.
ColumnOrder sort_columns(const SubsetActivationMatrix& view, const RowKey& anchor);

}  // namespace neuroscope

#endif  // NEUROSCOPE_AGGREGATION_HPP_
