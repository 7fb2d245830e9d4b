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

#include "neuroscope/subset.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <optional>
#include <set>
#include <utility>

#include "neuroscope/error.hpp"

namespace neuroscope {

Predicate Predicate::compare(std::string path, CompareOp op, Literal literal) {
  Predicate p;
  p.kind = Kind::kCompare;
  p.path = std::move(path);
  p.op = op;
  p.literal = std::move(literal);
  return p;
}

Predicate Predicate::all_of(std::vector<Predicate> children) {
  Predicate p;
  p.kind = Kind::kAnd;
  p.children = std::move(children);
  return p;
}

Predicate Predicate::any_of(std::vector<Predicate> children) {
  Predicate p;
  p.kind = Kind::kOr;
  p.children = std::move(children);
  return p;
}

Predicate Predicate::negate(Predicate child) {
  Predicate p;
  p.kind = Kind::kNot;
  p.children.push_back(std::move(child));
  return p;
}

std::string_view compare_op_text(CompareOp op) {
  switch (op) {
    case CompareOp::kEq: return "=";
    case CompareOp::kNe: return "!=";
    case CompareOp::kLt: return "<";
    case CompareOp::kLe: return "<=";
    case CompareOp::kGt: return ">";
    case CompareOp::kGe: return ">=";
    case CompareOp::kContains: return "contains";
    case CompareOp::kStartsWith: return "starts_with";
  }
  return "=";
}

namespace {

// ---------------------------------------------------------------------------
// Field typing

enum class FieldType { kString, kNumber, kBool, kDynamic };

enum class FieldRoot { kTrueLabel, kPredictedLabel, kCorrect, kText, kScore,
                       kFeature };

struct FieldRef {
  FieldRoot root;
  FieldType type;
  std::string key;  // class name for score.*, feature name for feature.*
};

std::optional<FieldRef> resolve_field(std::string_view path) {
  if (path == "true_label") return FieldRef{FieldRoot::kTrueLabel, FieldType::kString, {}};
  if (path == "predicted_label") return FieldRef{FieldRoot::kPredictedLabel, FieldType::kString, {}};
  if (path == "correct") return FieldRef{FieldRoot::kCorrect, FieldType::kBool, {}};
  if (path == "text") return FieldRef{FieldRoot::kText, FieldType::kString, {}};
  const auto dot = path.find('.');
  if (dot == std::string_view::npos || dot + 1 == path.size()) return std::nullopt;
  const std::string_view head = path.substr(0, dot);
  std::string key(path.substr(dot + 1));
  if (head == "score" && key.find('.') == std::string::npos) {
    return FieldRef{FieldRoot::kScore, FieldType::kNumber, std::move(key)};
  }
  if (head == "feature") {
    return FieldRef{FieldRoot::kFeature, FieldType::kDynamic, std::move(key)};
  }
  return std::nullopt;
}

bool is_ordering(CompareOp op) {
  return op == CompareOp::kLt || op == CompareOp::kLe || op == CompareOp::kGt ||
         op == CompareOp::kGe;
}

bool is_text_match(CompareOp op) {
  return op == CompareOp::kContains || op == CompareOp::kStartsWith;
}

std::string_view literal_type_name(const Literal& lit) {
  switch (lit.index()) {
    case 0: return "number";
    case 1: return "string";
    default: return "boolean";
  }
}

void check_types(const FieldRef& field, std::string_view path, CompareOp op,
                 const Literal& lit, std::size_t position) {
  auto mismatch = [&](const std::string& why) {
    return Error(ErrorCode::kTypeMismatch,
                 "'" + std::string(path) + " " +
                     std::string(compare_op_text(op)) + " <" +
                     std::string(literal_type_name(lit)) + ">': " + why,
                 position);
  };
  const bool lit_number = std::holds_alternative<double>(lit);
  const bool lit_string = std::holds_alternative<std::string>(lit);
  const bool lit_bool = std::holds_alternative<bool>(lit);

  if (is_text_match(op)) {
    if (field.type != FieldType::kString && field.type != FieldType::kDynamic) {
      throw mismatch("text matching needs a string-valued path");
    }
    if (!lit_string) throw mismatch("text matching needs a string literal");
    return;
  }
  if (is_ordering(op)) {
    if (field.type != FieldType::kNumber && field.type != FieldType::kDynamic) {
      throw mismatch("ordering comparisons need a numeric path");
    }
    if (!lit_number) throw mismatch("ordering comparisons need a number literal");
    return;
  }
  switch (field.type) {
    case FieldType::kString:
      if (!lit_string) throw mismatch("path is string-valued");
      break;
    case FieldType::kNumber:
      if (!lit_number) throw mismatch("path is numeric");
      break;
    case FieldType::kBool:
      if (!lit_bool) throw mismatch("path is boolean");
      break;
    case FieldType::kDynamic:
      break;
  }
}

// ---------------------------------------------------------------------------
// Lexer / parser

enum class Tok { kPath, kString, kNumber, kTrue, kFalse, kAnd, kOr, kNot,
                 kOp, kLParen, kRParen, kEnd };

struct Token {
  Tok kind;
  std::size_t pos;
  std::string text;  // path, string contents, op text
  double number = 0.0;
  CompareOp op = CompareOp::kEq;
};

bool iequals(std::string_view a, std::string_view b) {
  return a.size() == b.size() &&
         std::equal(a.begin(), a.end(), b.begin(), [](char x, char y) {
           return std::tolower(static_cast<unsigned char>(x)) ==
                  std::tolower(static_cast<unsigned char>(y));
         });
}

bool ident_start(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_';
}
bool ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) || c == '_';
}

class Lexer {
 public:
  explicit Lexer(std::string_view src) : src_(src) {}

  std::vector<Token> run() {
    std::vector<Token> out;
    for (;;) {
      while (i_ < src_.size() && std::isspace(static_cast<unsigned char>(src_[i_]))) ++i_;
      if (i_ == src_.size()) {
        out.push_back({Tok::kEnd, i_, {}});
        return out;
      }
      out.push_back(next());
    }
  }

 private:
  [[noreturn]] void fail(const std::string& what, std::size_t pos) const {
    throw Error(ErrorCode::kSyntaxError,
                what + " at position " + std::to_string(pos), pos);
  }

  Token next() {
    const std::size_t start = i_;
    const char c = src_[i_];
    if (c == '(') { ++i_; return {Tok::kLParen, start, "("}; }
    if (c == ')') { ++i_; return {Tok::kRParen, start, ")"}; }
    if (c == '\'') return string_literal();
    if (std::isdigit(static_cast<unsigned char>(c)) ||
        (c == '-' && i_ + 1 < src_.size() &&
         std::isdigit(static_cast<unsigned char>(src_[i_ + 1])))) {
      return number_literal();
    }
    if (c == '=' ) { ++i_; return op_token(CompareOp::kEq, start); }
    if (c == '!' && peek(1) == '=') { i_ += 2; return op_token(CompareOp::kNe, start); }
    if (c == '<') {
      if (peek(1) == '=') { i_ += 2; return op_token(CompareOp::kLe, start); }
      ++i_;
      return op_token(CompareOp::kLt, start);
    }
    if (c == '>') {
      if (peek(1) == '=') { i_ += 2; return op_token(CompareOp::kGe, start); }
      ++i_;
      return op_token(CompareOp::kGt, start);
    }
    if (ident_start(c)) return word();
    fail(std::string("unexpected character '") + c + "'", start);
  }

  char peek(std::size_t ahead) const {
    return i_ + ahead < src_.size() ? src_[i_ + ahead] : '\0';
  }

  Token op_token(CompareOp op, std::size_t pos) {
    Token t{Tok::kOp, pos, std::string(compare_op_text(op))};
    t.op = op;
    return t;
  }

  Token string_literal() {
    const std::size_t start = i_++;
    std::string value;
    while (i_ < src_.size()) {
      const char c = src_[i_++];
      if (c == '\'') return {Tok::kString, start, std::move(value)};
      if (c == '\\' && i_ < src_.size() &&
          (src_[i_] == '\'' || src_[i_] == '\\')) {
        value.push_back(src_[i_++]);
      } else {
        value.push_back(c);
      }
    }
    fail("unterminated string literal", start);
  }

  Token number_literal() {
    const std::size_t start = i_;
    if (src_[i_] == '-') ++i_;
    auto digits = [&] {
      const std::size_t from = i_;
      while (i_ < src_.size() && std::isdigit(static_cast<unsigned char>(src_[i_]))) ++i_;
      return i_ > from;
    };
    digits();
    if (peek(0) == '.') {
      ++i_;
      if (!digits()) fail("malformed number", start);
    }
    if (peek(0) == 'e' || peek(0) == 'E') {
      ++i_;
      if (peek(0) == '+' || peek(0) == '-') ++i_;
      if (!digits()) fail("malformed exponent", start);
    }
    if (i_ < src_.size() && ident_char(src_[i_])) fail("malformed number", start);
    Token t{Tok::kNumber, start, std::string(src_.substr(start, i_ - start))};
    const auto res = std::from_chars(src_.data() + start, src_.data() + i_, t.number);
    if (res.ec != std::errc() || !std::isfinite(t.number)) {
      fail("number out of range", start);
    }
    return t;
  }

  Token word() {
    const std::size_t start = i_;
    while (i_ < src_.size() && ident_char(src_[i_])) ++i_;
    bool dotted = false;
    while (peek(0) == '.' && ident_char(peek(1))) {
      dotted = true;
      ++i_;
      while (i_ < src_.size() && ident_char(src_[i_])) ++i_;
    }
    if (peek(0) == '.') fail("path segment expected after '.'", i_ + 1);
    std::string text(src_.substr(start, i_ - start));
    if (!dotted) {
      if (iequals(text, "and")) return {Tok::kAnd, start, text};
      if (iequals(text, "or")) return {Tok::kOr, start, text};
      if (iequals(text, "not")) return {Tok::kNot, start, text};
      if (iequals(text, "true")) return {Tok::kTrue, start, text};
      if (iequals(text, "false")) return {Tok::kFalse, start, text};
      if (iequals(text, "contains")) return op_token(CompareOp::kContains, start);
      if (iequals(text, "starts_with")) return op_token(CompareOp::kStartsWith, start);
    }
    return {Tok::kPath, start, std::move(text)};
  }

  std::string_view src_;
  std::size_t i_ = 0;
};

class Parser {
 public:
  explicit Parser(std::vector<Token> tokens) : toks_(std::move(tokens)) {}

  Predicate run() {
    Predicate p = expr();
    if (cur().kind != Tok::kEnd) fail("unexpected '" + cur().text + "'");
    return p;
  }

 private:
  const Token& cur() const { return toks_[i_]; }

  [[noreturn]] void fail(const std::string& what) const {
    const std::size_t pos = cur().pos;
    throw Error(ErrorCode::kSyntaxError,
                what + " at position " + std::to_string(pos), pos);
  }

  Predicate expr() {
    std::vector<Predicate> terms;
    terms.push_back(and_expr());
    while (cur().kind == Tok::kOr) {
      ++i_;
      terms.push_back(and_expr());
    }
    if (terms.size() == 1) return std::move(terms.front());
    return Predicate::any_of(std::move(terms));
  }

  Predicate and_expr() {
    std::vector<Predicate> terms;
    terms.push_back(term());
    while (cur().kind == Tok::kAnd) {
      ++i_;
      terms.push_back(term());
    }
    if (terms.size() == 1) return std::move(terms.front());
    return Predicate::all_of(std::move(terms));
  }

  Predicate term() {
    if (cur().kind == Tok::kNot) {
      ++i_;
      return Predicate::negate(term());
    }
    if (cur().kind == Tok::kLParen) {
      ++i_;
      Predicate inner = expr();
      if (cur().kind != Tok::kRParen) fail("expected ')'");
      ++i_;
      return inner;
    }
    return comparison();
  }

  Predicate comparison() {
    if (cur().kind != Tok::kPath) {
      fail(cur().kind == Tok::kEnd ? std::string("unexpected end of input")
                                   : "expected a field path, got '" + cur().text + "'");
    }
    const Token path = cur();
    ++i_;
    const auto field = resolve_field(path.text);
    if (!field) {
      throw Error(ErrorCode::kUnknownField,
                  "unknown field '" + path.text + "' at position " +
                      std::to_string(path.pos),
                  path.pos);
    }
    if (cur().kind != Tok::kOp) fail("expected a comparison operator");
    const CompareOp op = cur().op;
    ++i_;
    Literal lit;
    switch (cur().kind) {
      case Tok::kNumber: lit = cur().number; break;
      case Tok::kString: lit = cur().text; break;
      case Tok::kTrue: lit = true; break;
      case Tok::kFalse: lit = false; break;
      default: fail("expected a literal");
    }
    ++i_;
    check_types(*field, path.text, op, lit, path.pos);
    return Predicate::compare(path.text, op, std::move(lit));
  }

  std::vector<Token> toks_;
  std::size_t i_ = 0;
};

// ---------------------------------------------------------------------------
// Printer

std::string quote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('\'');
  return out;
}

std::string literal_text(const Literal& lit) {
  if (const double* d = std::get_if<double>(&lit)) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", *d);
    return buf;
  }
  if (const std::string* s = std::get_if<std::string>(&lit)) return quote(*s);
  return std::get<bool>(lit) ? "true" : "false";
}

bool is_junction(const Predicate& p) {
  return p.kind == Predicate::Kind::kAnd || p.kind == Predicate::Kind::kOr;
}

void print_into(const Predicate& p, std::string& out) {
  auto operand = [&out](const Predicate& child) {
    if (is_junction(child) && child.children.size() >= 2) {
      out.push_back('(');
      print_into(child, out);
      out.push_back(')');
    } else {
      print_into(child, out);
    }
  };
  switch (p.kind) {
    case Predicate::Kind::kCompare:
      out += p.path;
      out.push_back(' ');
      out += compare_op_text(p.op);
      out.push_back(' ');
      out += literal_text(p.literal);
      return;
    case Predicate::Kind::kNot:
      out += "not ";
      operand(p.children.at(0));
      return;
    case Predicate::Kind::kAnd:
    case Predicate::Kind::kOr: {
      if (p.children.empty()) {
        throw Error(ErrorCode::kInvalidArgument,
                    "an empty conjunction or disjunction has no textual form");
      }
      const char* sep = p.kind == Predicate::Kind::kAnd ? " and " : " or ";
      for (std::size_t i = 0; i < p.children.size(); ++i) {
        if (i > 0) out += sep;
        operand(p.children[i]);
      }
      return;
    }
  }
}

// ---------------------------------------------------------------------------
// Evaluation

// Predicate with paths resolved against one bundle.
struct Bound {
  Predicate::Kind kind;
  FieldRef field{FieldRoot::kTrueLabel, FieldType::kString, {}};
  std::size_t score_class = 0;
  CompareOp op = CompareOp::kEq;
  const Literal* literal = nullptr;
  std::vector<Bound> children;
};

Bound bind(const Predicate& p, const Bundle& bundle) {
  Bound b;
  b.kind = p.kind;
  if (p.kind != Predicate::Kind::kCompare) {
    if (p.kind == Predicate::Kind::kNot && p.children.size() != 1) {
      throw Error(ErrorCode::kInvalidArgument, "'not' takes exactly one operand");
    }
    b.children.reserve(p.children.size());
    for (const Predicate& c : p.children) b.children.push_back(bind(c, bundle));
    return b;
  }
  auto field = resolve_field(p.path);
  if (!field) throw Error(ErrorCode::kUnknownField, "unknown field '" + p.path + "'");
  check_types(*field, p.path, p.op, p.literal, 0);
  auto unknown = [&p] {
    return Error(ErrorCode::kUnknownField,
                 "field '" + p.path + "' is absent from every instance");
  };
  switch (field->root) {
    case FieldRoot::kScore: {
      auto it = std::find(bundle.classes.begin(), bundle.classes.end(), field->key);
      if (it == bundle.classes.end()) throw unknown();
      b.score_class = static_cast<std::size_t>(it - bundle.classes.begin());
      break;
    }
    case FieldRoot::kText:
      if (std::none_of(bundle.instances.begin(), bundle.instances.end(),
                       [](const InstanceRecord& r) { return r.text() != nullptr; })) {
        throw unknown();
      }
      break;
    case FieldRoot::kFeature:
      if (std::none_of(bundle.instances.begin(), bundle.instances.end(),
                       [&](const InstanceRecord& r) {
                         const FeatureMap* f = r.features();
                         return f != nullptr && f->count(field->key) != 0;
                       })) {
        throw unknown();
      }
      break;
    default:
      break;
  }
  b.field = std::move(*field);
  b.op = p.op;
  b.literal = &p.literal;
  return b;
}

template <typename T>
bool apply_order(CompareOp op, const T& lhs, const T& rhs) {
  switch (op) {
    case CompareOp::kEq: return lhs == rhs;
    case CompareOp::kNe: return lhs != rhs;
    case CompareOp::kLt: return lhs < rhs;
    case CompareOp::kLe: return lhs <= rhs;
    case CompareOp::kGt: return lhs > rhs;
    case CompareOp::kGe: return lhs >= rhs;
    default: return false;
  }
}

bool apply_string(CompareOp op, std::string_view value, const std::string& lit) {
  switch (op) {
    case CompareOp::kEq: return value == lit;
    case CompareOp::kNe: return value != lit;
    case CompareOp::kContains: return value.find(lit) != std::string_view::npos;
    case CompareOp::kStartsWith: return value.substr(0, lit.size()) == lit;
    default: return false;
  }
}

// Compares a runtime value against the literal; kinds that differ never match.
bool apply_value(CompareOp op, const FeatureValue& value, const Literal& lit) {
  if (value.index() != lit.index()) return false;
  if (const double* d = std::get_if<double>(&value)) {
    return apply_order(op, *d, std::get<double>(lit));
  }
  if (const std::string* s = std::get_if<std::string>(&value)) {
    return apply_string(op, *s, std::get<std::string>(lit));
  }
  if (op != CompareOp::kEq && op != CompareOp::kNe) return false;
  return apply_order(op, std::get<bool>(value), std::get<bool>(lit));
}

bool matches(const Bound& b, const InstanceRecord& r) {
  switch (b.kind) {
    case Predicate::Kind::kAnd:
      for (const Bound& c : b.children) {
        if (!matches(c, r)) return false;
      }
      return true;
    case Predicate::Kind::kOr:
      for (const Bound& c : b.children) {
        if (matches(c, r)) return true;
      }
      return false;
    case Predicate::Kind::kNot:
      return !matches(b.children.front(), r);
    case Predicate::Kind::kCompare:
      break;
  }
  const Literal& lit = *b.literal;
  switch (b.field.root) {
    case FieldRoot::kTrueLabel:
      return apply_string(b.op, r.true_label, std::get<std::string>(lit));
    case FieldRoot::kPredictedLabel:
      return apply_string(b.op, r.predicted_label, std::get<std::string>(lit));
    case FieldRoot::kCorrect:
      return apply_value(b.op, FeatureValue(r.correct()), lit);
    case FieldRoot::kText: {
      const std::string* text = r.text();
      return text != nullptr && apply_string(b.op, *text, std::get<std::string>(lit));
    }
    case FieldRoot::kScore:
      return apply_order(b.op, r.scores[b.score_class], std::get<double>(lit));
    case FieldRoot::kFeature: {
      const FeatureMap* features = r.features();
      if (features == nullptr) return false;
      auto it = features->find(b.field.key);
      return it != features->end() && apply_value(b.op, it->second, lit);
    }
  }
  return false;
}

}  // namespace

Predicate parse_predicate(std::string_view source) {
  if (source.find_first_not_of(" \t\r\n") == std::string_view::npos) {
    throw Error(ErrorCode::kSyntaxError, "empty predicate at position 0", 0);
  }
  return Parser(Lexer(source).run()).run();
}

std::string print_predicate(const Predicate& predicate) {
  std::string out;
  print_into(predicate, out);
  return out;
}

std::vector<std::size_t> evaluate(const Predicate& predicate,
                                  const Bundle& bundle) {
  const Bound bound = bind(predicate, bundle);
  std::vector<std::size_t> out;
  for (const InstanceRecord& r : bundle.instances) {
    if (matches(bound, r)) out.push_back(r.index);
  }
  return out;
}

std::vector<SubsetDefinition> default_class_subsets(const Bundle& bundle) {
  std::vector<SubsetDefinition> out;
  out.reserve(bundle.classes.size());
  for (const std::string& c : bundle.classes) {
    out.push_back({c, c, Predicate::compare("true_label", CompareOp::kEq, c),
                   SubsetKind::kClassDefault});
  }
  return out;
}

std::vector<std::size_t> MembershipMatrix::counts() const {
  std::vector<std::size_t> out;
  out.reserve(members.size());
  for (const auto& m : members) out.push_back(m.size());
  return out;
}

std::size_t MembershipMatrix::find(std::string_view subset_id) const {
  auto it = std::find(subsets.begin(), subsets.end(), subset_id);
  return it == subsets.end() ? std::string_view::npos
                             : static_cast<std::size_t>(it - subsets.begin());
}

MembershipMatrix build_membership(const std::vector<SubsetDefinition>& definitions,
                                  const Bundle& bundle) {
  std::set<std::string_view> ids;
  for (const SubsetDefinition& d : definitions) {
    if (!ids.insert(d.subset_id).second) {
      throw Error(ErrorCode::kDuplicateSubsetId,
                  "duplicate subset id '" + d.subset_id + "'");
    }
  }
  std::vector<Bound> bound;
  bound.reserve(definitions.size());
  for (const SubsetDefinition& d : definitions) {
    bound.push_back(bind(d.predicate, bundle));
  }

  MembershipMatrix m;
  m.members.resize(definitions.size());
  for (const SubsetDefinition& d : definitions) m.subsets.push_back(d.subset_id);
  for (const InstanceRecord& r : bundle.instances) {
    for (std::size_t k = 0; k < bound.size(); ++k) {
      if (matches(bound[k], r)) m.members[k].push_back(r.index);
    }
  }
  return m;
}

// ---------------------------------------------------------------------------
// Registry

SubsetRegistry::SubsetRegistry(std::shared_ptr<const Bundle> bundle,
                               std::vector<SubsetDefinition> initial)
    : bundle_(std::move(bundle)) {
  publish(std::move(initial));
}

std::shared_ptr<const SubsetRegistry::Snapshot> SubsetRegistry::snapshot() const {
  std::lock_guard lock(mutex_);
  return current_;
}

void SubsetRegistry::publish(std::vector<SubsetDefinition> definitions) {
  auto next = std::make_shared<Snapshot>();
  next->membership = build_membership(definitions, *bundle_);
  next->definitions = std::move(definitions);
  std::lock_guard lock(mutex_);
  current_ = std::move(next);
}

std::string SubsetRegistry::add(const std::string& name,
                                std::string_view predicate_source) {
  Predicate predicate = parse_predicate(predicate_source);
  std::lock_guard write(write_mutex_);
  auto defs = snapshot()->definitions;
  std::string id;
  do {
    id = "user-" + std::to_string(next_user_id_++);
  } while (std::any_of(defs.begin(), defs.end(),
                       [&](const SubsetDefinition& d) { return d.subset_id == id; }));
  defs.push_back({id, name.empty() ? id : name, std::move(predicate),
                  SubsetKind::kUserDefined});
  publish(std::move(defs));
  return id;
}

void SubsetRegistry::add(SubsetDefinition definition) {
  std::lock_guard write(write_mutex_);
  auto defs = snapshot()->definitions;
  defs.push_back(std::move(definition));
  publish(std::move(defs));
}

void SubsetRegistry::remove(std::string_view subset_id) {
  std::lock_guard write(write_mutex_);
  auto defs = snapshot()->definitions;
  auto it = std::find_if(defs.begin(), defs.end(), [&](const SubsetDefinition& d) {
    return d.subset_id == subset_id;
  });
  if (it == defs.end()) {
    throw Error(ErrorCode::kUnknownSubset,
                "unknown subset '" + std::string(subset_id) + "'");
  }
  defs.erase(it);
  publish(std::move(defs));
}

}  // namespace neuroscope
