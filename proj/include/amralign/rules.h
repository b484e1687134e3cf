/* Copyright 2026 The amralign Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

// Fixed-match rules that override attention-derived alignments for AMR
// structures with a known surface realization.
//
//   r1  have-org-role-91 / have-rel-role-91 take the alignment of their role
//       child (and so does the `person` they describe)
//   r2  named entities (and date entities) are aligned as one subgraph to the
//       span spelling their literal children
//   r3  amr-unknown -> "?"
//   r4  :condition -> "if"
//   r5  :purpose -> "to"
//   r6  :ARGn -> parent's span, :ARGn-of -> child's span
//   r7  :mod, :duration -> child's span
//   r8  :domain, :opN -> parent's span

#ifndef AMRALIGN_RULES_H_
#define AMRALIGN_RULES_H_

#include <bitset>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "amralign/alignment.h"
#include "amralign/graph.h"
#include "amralign/score_matrix.h"
#include "amralign/sentence.h"

namespace amralign {

enum class Rule {
  kRoleFrame = 0,
  kNamedEntity,
  kUnknown,
  kCondition,
  kPurpose,
  kArgument,
  kChildModifier,
  kParentModifier,
};
inline constexpr std::size_t kRuleCount = 8;

class RuleSet {
 public:
  static RuleSet all() { return RuleSet(std::bitset<kRuleCount>().set()); }
  static RuleSet none() { return RuleSet({}); }
  // "r1,r2,r6"; "all" and "none" are accepted too.
  static RuleSet parse(std::string_view names);

  bool has(Rule r) const { return bits_.test(static_cast<std::size_t>(r)); }
  bool empty() const { return bits_.none(); }
  RuleSet& set(Rule r, bool on = true) {
    bits_.set(static_cast<std::size_t>(r), on);
    return *this;
  }
  std::string str() const;

 private:
  explicit RuleSet(std::bitset<kRuleCount> bits) : bits_(bits) {}
  std::bitset<kRuleCount> bits_;
};

std::string_view rule_name(Rule r);

enum class Directive { kAlignToSpan, kInheritParent, kInheritChild, kAlignWholeSubgraph };

struct FixedMatch {
  Directive directive = Directive::kAlignToSpan;
  Rule rule = Rule::kRoleFrame;
  std::size_t unit = 0;                   // unit the directive is about
  std::size_t span = 0;                   // kAlignToSpan
  std::size_t source = 0;                 // kInherit*: unit whose span is copied
  // kAlignWholeSubgraph: every unit of the subgraph (including `unit`), the
  // literal children that spell it, and the span they were found in. Without
  // a surface match the subgraph follows the alignment of anchors[0].
  std::vector<std::size_t> members;
  std::vector<std::size_t> anchors;
  std::optional<std::size_t> anchor_span;
};

// Directives for every rule trigger in the graph; at most one per unit (the
// first rule in r1..r8 order wins). When a trigger word occurs more than once
// the occurrence with the highest score for the unit wins, leftmost on ties;
// `unit_word_scores` (rows = units, cols = words) may be null, in which case
// the leftmost occurrence is used.
std::vector<FixedMatch> fixed_matches(const AmrGraph& g, std::span<const SemanticUnit> units,
                                      const SpanList& spans, const std::vector<std::string>& words,
                                      RuleSet rules = RuleSet::all(),
                                      const Matrix* unit_word_scores = nullptr);

// Overwrites with span directives and whole-subgraph matches, then resolves
// inheritance (nodes before relations) to a fixpoint. Units on an inheritance
// cycle keep their base alignment and a warning is appended.
AlignmentMap apply_fixed_matches(const AlignmentMap& base, std::span<const FixedMatch> matches,
                                 std::span<const SemanticUnit> units,
                                 std::vector<std::string>* warnings = nullptr);

}  // namespace amralign

#endif  // AMRALIGN_RULES_H_
