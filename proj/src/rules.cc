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

#include "amralign/rules.h"

#include <algorithm>
#include <cctype>
#include <regex>
#include <sstream>

#include "amralign/errors.h"

namespace amralign {
namespace {

std::string lower(std::string_view s) {
  std::string out(s);
  std::transform(out.begin(), out.end(), out.begin(),
                 [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
  return out;
}

std::string unquote(const std::string& s) {
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') return s.substr(1, s.size() - 2);
  return s;
}

bool is_role_frame(const std::string& concept_name) {
  return concept_name == "have-org-role-91" || concept_name == "have-rel-role-91";
}

class Matcher {
 public:
  Matcher(const AmrGraph&, std::span<const SemanticUnit> units, const SpanList& spans,
          const std::vector<std::string>& words, RuleSet rules, const Matrix* scores)
      : units_(units), spans_(spans), rules_(rules), scores_(scores),
        claimed_(units.size(), false) {
    for (const auto& w : words) words_.push_back(lower(w));
    if (scores_ && (scores_->rows() != units.size() || scores_->cols() != words.size())) {
      throw ValidationError("rule scores must be units x words");
    }
    if (spans_.n_words() != words.size()) throw ValidationError("spans and words disagree");
  }

  std::vector<FixedMatch> run() {
    if (rules_.has(Rule::kRoleFrame)) role_frames();
    if (rules_.has(Rule::kNamedEntity)) entities();
    if (rules_.has(Rule::kUnknown)) {
      for (std::size_t u = 0; u < units_.size(); ++u) {
        if (units_[u].is_node() && !units_[u].edge && units_[u].concept_name == "amr-unknown") {
          to_trigger(u, "?", Rule::kUnknown);
        }
      }
    }
    relations();
    return std::move(out_);
  }

 private:
  std::vector<std::size_t> relations_of(std::size_t node) const {
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < units_.size(); ++u) {
      if (units_[u].is_relation() && units_[u].source_unit == node) out.push_back(u);
    }
    return out;
  }

  bool claim(std::size_t u) {
    if (claimed_[u]) return false;
    claimed_[u] = true;
    return true;
  }

  void inherit(std::size_t u, std::size_t source, Directive d, Rule rule) {
    if (!claim(u)) return;
    FixedMatch m;
    m.directive = d;
    m.rule = rule;
    m.unit = u;
    m.source = source;
    out_.push_back(std::move(m));
  }

  double score(const std::vector<std::size_t>& rows, std::size_t span) const {
    double total = 0.0;
    for (std::size_t r : rows) {
      for (std::size_t w = spans_[span].start; w < spans_[span].end; ++w) total += (*scores_)(r, w);
    }
    return total;
  }

  // Highest-scoring candidate for `rows`, leftmost on ties (and without scores).
  std::optional<std::size_t> choose(std::vector<std::size_t> candidates,
                                    const std::vector<std::size_t>& rows) const {
    if (candidates.empty()) return std::nullopt;
    std::sort(candidates.begin(), candidates.end());
    candidates.erase(std::unique(candidates.begin(), candidates.end()), candidates.end());
    if (!scores_) return candidates.front();
    std::size_t best = candidates.front();
    double best_score = score(rows, best);
    for (std::size_t c : candidates) {
      double s = score(rows, c);
      if (s > best_score) {
        best = c;
        best_score = s;
      }
    }
    return best;
  }

  std::vector<std::size_t> spans_with_word(const std::string& word) const {
    std::vector<std::size_t> out;
    for (std::size_t w = 0; w < words_.size(); ++w) {
      if (words_[w] == word) out.push_back(spans_.span_of_word(w));
    }
    return out;
  }

  void to_trigger(std::size_t u, const std::string& word, Rule rule) {
    auto span = choose(spans_with_word(word), {u});
    if (!span || !claim(u)) return;
    FixedMatch m;
    m.directive = Directive::kAlignToSpan;
    m.rule = rule;
    m.unit = u;
    m.span = *span;
    out_.push_back(std::move(m));
  }

  // r1
  void role_frames() {
    for (std::size_t r = 0; r < units_.size(); ++r) {
      const SemanticUnit& frame = units_[r];
      if (!frame.is_node() || frame.edge || !is_role_frame(frame.concept_name)) continue;
      std::optional<std::size_t> role, holder;
      for (std::size_t rel : relations_of(r)) {
        const SemanticUnit& e = units_[rel];
        if (e.label == ":ARG2") role = e.target_unit;
        if (e.label == ":ARG0" && units_[e.target_unit].concept_name == "person") holder = e.target_unit;
      }
      if (!role) continue;
      inherit(r, *role, Directive::kInheritChild, Rule::kRoleFrame);
      for (std::size_t u = 0; u < units_.size(); ++u) {
        const SemanticUnit& e = units_[u];
        if (e.is_relation() && e.label == ":ARG0-of" && e.target_unit == r &&
            units_[e.source_unit].concept_name == "person") {
          inherit(e.source_unit, r, Directive::kInheritChild, Rule::kRoleFrame);
        }
      }
      if (holder) inherit(*holder, r, Directive::kInheritParent, Rule::kRoleFrame);
    }
  }

  // r2
  void entities() {
    static const std::regex kOp(":op[0-9]+");
    for (std::size_t x = 0; x < units_.size(); ++x) {
      const SemanticUnit& head = units_[x];
      if (!head.is_node() || head.edge) continue;
      std::vector<std::size_t> members{x};
      std::vector<std::size_t> anchors;
      std::vector<std::string> surface;
      if (head.concept_name == "date-entity") {
        for (std::size_t rel : relations_of(x)) {
          std::size_t t = units_[rel].target_unit;
          if (!units_[t].edge || t != rel + 1) continue;
          members.insert(members.end(), {rel, t});
          anchors.push_back(t);
        }
        if (anchors.empty()) continue;
        std::vector<std::size_t> candidates;
        for (std::size_t a : anchors) {
          auto found = spans_with_word(lower(unquote(units_[a].concept_name)));
          candidates.insert(candidates.end(), found.begin(), found.end());
        }
        emit_subgraph(x, members, anchors, choose(candidates, anchors));
        continue;
      }
      std::optional<std::size_t> name;
      for (std::size_t rel : relations_of(x)) {
        const SemanticUnit& e = units_[rel];
        if (e.label == ":name" && e.target_unit == rel + 1 && !units_[rel + 1].edge &&
            units_[rel + 1].concept_name == "name") {
          name = e.target_unit;
          members.insert(members.end(), {rel, e.target_unit});
        } else if (e.label == ":wiki" && units_[e.target_unit].edge) {
          members.insert(members.end(), {rel, e.target_unit});
        }
      }
      if (!name) continue;
      for (std::size_t rel : relations_of(*name)) {
        const SemanticUnit& e = units_[rel];
        if (!std::regex_match(e.label, kOp) || !units_[e.target_unit].edge) continue;
        members.insert(members.end(), {rel, e.target_unit});
        anchors.push_back(e.target_unit);
        for (const auto& w : word_tokenize(unquote(units_[e.target_unit].concept_name))) {
          surface.push_back(lower(w));
        }
      }
      if (anchors.empty()) continue;
      emit_subgraph(x, members, anchors, choose(find_sequence(surface), anchors));
    }
  }

  // Spans starting each occurrence of `seq` (or of its first word when the
  // whole sequence never occurs).
  std::vector<std::size_t> find_sequence(const std::vector<std::string>& seq) const {
    std::vector<std::size_t> out;
    if (seq.empty()) return out;
    for (std::size_t w = 0; w + seq.size() <= words_.size(); ++w) {
      if (std::equal(seq.begin(), seq.end(), words_.begin() + static_cast<long>(w))) {
        out.push_back(spans_.span_of_word(w));
      }
    }
    if (out.empty()) out = spans_with_word(seq.front());
    return out;
  }

  void emit_subgraph(std::size_t head, const std::vector<std::size_t>& members,
                     const std::vector<std::size_t>& anchors, std::optional<std::size_t> span) {
    FixedMatch m;
    m.directive = Directive::kAlignWholeSubgraph;
    m.rule = Rule::kNamedEntity;
    m.unit = head;
    for (std::size_t u : members) {
      if (claim(u)) m.members.push_back(u);
    }
    for (std::size_t a : anchors) {
      if (std::find(m.members.begin(), m.members.end(), a) != m.members.end()) m.anchors.push_back(a);
    }
    if (m.members.empty() || m.anchors.empty()) return;
    m.anchor_span = span;
    out_.push_back(std::move(m));
  }

  // r4 - r8
  void relations() {
    static const std::regex kArg(":ARG[0-9]+");
    static const std::regex kArgOf(":ARG[0-9]+-of");
    static const std::regex kOp(":op[0-9]+");
    for (std::size_t u = 0; u < units_.size(); ++u) {
      const SemanticUnit& e = units_[u];
      if (!e.is_relation()) continue;
      if (e.label == ":condition" && rules_.has(Rule::kCondition)) {
        to_trigger(u, "if", Rule::kCondition);
      } else if (e.label == ":purpose" && rules_.has(Rule::kPurpose)) {
        to_trigger(u, "to", Rule::kPurpose);
      } else if (rules_.has(Rule::kArgument) && std::regex_match(e.label, kArg)) {
        inherit(u, e.source_unit, Directive::kInheritParent, Rule::kArgument);
      } else if (rules_.has(Rule::kArgument) && std::regex_match(e.label, kArgOf)) {
        inherit(u, e.target_unit, Directive::kInheritChild, Rule::kArgument);
      } else if (rules_.has(Rule::kChildModifier) && (e.label == ":mod" || e.label == ":duration")) {
        inherit(u, e.target_unit, Directive::kInheritChild, Rule::kChildModifier);
      } else if (rules_.has(Rule::kParentModifier) &&
                 (e.label == ":domain" || std::regex_match(e.label, kOp))) {
        inherit(u, e.source_unit, Directive::kInheritParent, Rule::kParentModifier);
      }
    }
  }

  std::span<const SemanticUnit> units_;
  const SpanList& spans_;
  std::vector<std::string> words_;
  RuleSet rules_;
  const Matrix* scores_;
  std::vector<bool> claimed_;
  std::vector<FixedMatch> out_;
};

}  // namespace

std::string_view rule_name(Rule r) {
  static constexpr std::string_view kNames[] = {"r1", "r2", "r3", "r4", "r5", "r6", "r7", "r8"};
  return kNames[static_cast<std::size_t>(r)];
}

RuleSet RuleSet::parse(std::string_view names) {
  if (names == "all") return all();
  RuleSet set = none();
  if (names == "none" || names.empty()) return set;
  std::stringstream in{std::string(names)};
  std::string item;
  while (std::getline(in, item, ',')) {
    item.erase(0, item.find_first_not_of(' '));
    item.erase(item.find_last_not_of(' ') + 1);
    bool found = false;
    for (std::size_t i = 0; i < kRuleCount; ++i) {
      if (rule_name(static_cast<Rule>(i)) == item) {
        set.set(static_cast<Rule>(i));
        found = true;
      }
    }
    if (!found) throw Error("unknown rule '" + item + "' (expected r1..r8)");
  }
  return set;
}

std::string RuleSet::str() const {
  std::string out;
  for (std::size_t i = 0; i < kRuleCount; ++i) {
    if (!bits_.test(i)) continue;
    if (!out.empty()) out += ',';
    out += rule_name(static_cast<Rule>(i));
  }
  return out.empty() ? "none" : out;
}

std::vector<FixedMatch> fixed_matches(const AmrGraph& g, std::span<const SemanticUnit> units,
                                      const SpanList& spans, const std::vector<std::string>& words,
                                      RuleSet rules, const Matrix* unit_word_scores) {
  if (rules.empty()) return {};
  return Matcher(g, units, spans, words, rules, unit_word_scores).run();
}

AlignmentMap apply_fixed_matches(const AlignmentMap& base, std::span<const FixedMatch> matches,
                                 std::span<const SemanticUnit> units,
                                 std::vector<std::string>* warnings) {
  if (base.span_of_unit.size() != units.size()) {
    throw ValidationError("alignment map does not cover the graph's units");
  }
  AlignmentMap out = base;
  auto& span = out.span_of_unit;
  std::vector<std::optional<std::size_t>> from(units.size());

  for (const FixedMatch& m : matches) {
    if (m.directive == Directive::kAlignToSpan) span[m.unit] = m.span;
  }
  for (const FixedMatch& m : matches) {
    if (m.directive != Directive::kAlignWholeSubgraph) continue;
    std::optional<std::size_t> target = m.anchor_span;
    if (!target && !m.anchors.empty()) target = span[m.anchors.front()];
    if (!target) continue;
    for (std::size_t u : m.members) span[u] = target;
  }
  for (const FixedMatch& m : matches) {
    if (m.directive == Directive::kInheritParent || m.directive == Directive::kInheritChild) {
      from[m.unit] = m.source;
    }
  }

  // Break inheritance cycles: their members keep the base alignment.
  std::vector<int> state(units.size(), 0);  // 0 unvisited, 1 on stack, 2 done
  for (std::size_t u = 0; u < units.size(); ++u) {
    std::vector<std::size_t> chain;
    std::size_t v = u;
    while (from[v] && state[v] == 0) {
      state[v] = 1;
      chain.push_back(v);
      v = *from[v];
    }
    if (from[v] && state[v] == 1) {
      std::size_t cycle_start = v;
      std::size_t w = cycle_start;
      do {
        std::size_t next = *from[w];
        from[w].reset();
        span[w] = base.span_of_unit[w];
        if (warnings) warnings->push_back("inheritance cycle through unit " + units[w].path);
        w = next;
      } while (w != cycle_start);
    }
    for (std::size_t c : chain) state[c] = 2;
  }

  for (std::size_t pass = 0; pass <= units.size(); ++pass) {
    bool changed = false;
    for (bool nodes : {true, false}) {
      for (std::size_t u = 0; u < units.size(); ++u) {
        if (!from[u] || units[u].is_node() != nodes) continue;
        const auto& value = span[*from[u]];
        if (value && value != span[u]) {
          span[u] = value;
          changed = true;
        }
      }
    }
    if (!changed) break;
  }
  return out;
}

}  // namespace amralign
