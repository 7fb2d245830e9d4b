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

// Instance subsets: the predicate language, its evaluator, and the
// instance-to-subset membership structure.
//
// Grammar (keywords case-insensitive, `and` binds tighter than `or`):
//
//   expr       := and_expr { "or" and_expr }
//   and_expr   := term { "and" term }
//   term       := "not" term | "(" expr ")" | comparison
//   comparison := path op literal
//   op         := = | != | < | <= | > | >= | contains | starts_with
//   path       := ident { "." ident }
//   literal    := number | 'string' | true | false
//
// Inside string literals `\'` and `\\` escape a quote and a backslash.
//
// Paths: true_label, predicted_label, text (strings), correct (boolean,
// true_label == predicted_label), score.<class> (number), feature.<name>
// (whatever the instance stores). An instance lacking the referenced text or
// feature, or storing a feature of a different type than the literal, does not
// satisfy the comparison.

#ifndef NEUROSCOPE_SUBSET_HPP_
#define NEUROSCOPE_SUBSET_HPP_

#include <cstddef>
#include <memory>
#include <mutex>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "neuroscope/activation_store.hpp"

namespace neuroscope {

enum class CompareOp { kEq, kNe, kLt, kLe, kGt, kGe, kContains, kStartsWith };

using Literal = std::variant<double, std::string, bool>;

struct Predicate {
  enum class Kind { kCompare, kAnd, kOr, kNot };

  Kind kind = Kind::kAnd;
  // kCompare only.
  std::string path;
  CompareOp op = CompareOp::kEq;
  Literal literal;
  // kAnd / kOr: operands; kNot: exactly one child.
  std::vector<Predicate> children;

  static Predicate compare(std::string path, CompareOp op, Literal literal);
  static Predicate all_of(std::vector<Predicate> children);
  static Predicate any_of(std::vector<Predicate> children);
  static Predicate negate(Predicate child);

  bool operator==(const Predicate&) const = default;
};

// Throws SyntaxError (with byte position), UnknownField or TypeMismatch.
Predicate parse_predicate(std::string_view source);

// Canonical text. Nested and/or operands are always parenthesized, so
// parse_predicate(print_predicate(p)) == p whenever every and/or node has at
// least two operands. A single-operand and/or prints as its operand; an empty
// one has no textual form and throws InvalidArgument.
std::string print_predicate(const Predicate& predicate);

std::string_view compare_op_text(CompareOp op);

// Sorted indices of the instances satisfying `predicate`. Throws UnknownField
// when a path cannot resolve for any instance of the bundle.
std::vector<std::size_t> evaluate(const Predicate& predicate,
                                  const Bundle& bundle);

enum class SubsetKind { kClassDefault, kUserDefined };

struct SubsetDefinition {
  std::string subset_id;
  std::string name;
  Predicate predicate;
  SubsetKind kind = SubsetKind::kUserDefined;
};

// One subset per class, `true_label = '<class>'`, in class-list order. The
// subset id is the class name.
std::vector<SubsetDefinition> default_class_subsets(const Bundle& bundle);

struct MembershipMatrix {
  std::vector<std::string> subsets;
  // members[k]: ascending, duplicate-free instance indices of subsets[k].
  std::vector<std::vector<std::size_t>> members;

  std::size_t count(std::size_t k) const { return members[k].size(); }
  std::vector<std::size_t> counts() const;
  // Position of `subset_id` in `subsets`, or npos.
  std::size_t find(std::string_view subset_id) const;
};

// Evaluates every definition in a single pass over the instances. Throws
// DuplicateSubsetId or UnknownField.
MembershipMatrix build_membership(const std::vector<SubsetDefinition>& definitions,
                                  const Bundle& bundle);

// Definitions plus their membership, rebuilt against the whole bundle on each
// change and published as an immutable snapshot. Readers holding a snapshot
// never observe a partial rebuild.
class SubsetRegistry {
 public:
  struct Snapshot {
    std::vector<SubsetDefinition> definitions;
    MembershipMatrix membership;
  };

  SubsetRegistry(std::shared_ptr<const Bundle> bundle,
                 std::vector<SubsetDefinition> initial);

  std::shared_ptr<const Snapshot> snapshot() const;

  // Parses `predicate_source`, assigns a fresh "user-<n>" id and appends the
  // definition. Returns the new id.
  std::string add(const std::string& name, std::string_view predicate_source);
  void add(SubsetDefinition definition);
  // Throws UnknownSubset.
  void remove(std::string_view subset_id);

 private:
  void publish(std::vector<SubsetDefinition> definitions);

  std::shared_ptr<const Bundle> bundle_;
  std::mutex write_mutex_;  // serializes add/remove
  mutable std::mutex mutex_;  // guards current_
  std::shared_ptr<const Snapshot> current_;
  std::size_t next_user_id_ = 1;
};

}  // namespace neuroscope

#endif  // NEUROSCOPE_SUBSET_HPP_
