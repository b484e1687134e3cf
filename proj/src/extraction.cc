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

#include "amralign/extraction.h"

#include <algorithm>
#include <map>
#include <numeric>

#include "amralign/errors.h"

namespace amralign {

std::size_t select_span(const SpanList& spans, std::size_t word) { return spans.span_of_word(word); }

std::size_t argmax(std::span<const double> row) {
  if (row.empty()) throw ValidationError("argmax of an empty row");
  std::size_t best = 0;
  for (std::size_t i = 1; i < row.size(); ++i) {
    if (row[i] > row[best]) best = i;
  }
  return best;
}

Extraction extract(const SentenceTokens& st, const SpanList& spans, const Linearization& lin,
                   const GraphPosMap& gp, const ScoreMatrix& m, const AmrGraph& g,
                   const ExtractionConfig& cfg) {
  Extraction ex;
  ex.units = lin.units;
  ex.alignments.id = g.id();
  ex.alignments.standard = cfg.standard;
  if (g.empty()) return ex;
  if (m.n_encoder() != spans.n_words() || st.words.size() != spans.n_words()) {
    throw ValidationError("score matrix has " + std::to_string(m.n_encoder()) +
                          " columns; sentence has " + std::to_string(spans.n_words()) +
                          " words in spans and " + std::to_string(st.words.size()) + " words");
  }
  if (spans.n_words() == 0) throw ValidationError("cannot align a graph to an empty sentence");

  ex.unit_scores = merge_unit_rows(m, gp, ex.units);
  const Matrix& rows = ex.unit_scores.matrix.values;
  auto& attention = ex.attention.span_of_unit;
  attention.assign(ex.units.size(), std::nullopt);
  Matrix scores(ex.units.size(), spans.n_words());
  for (std::size_t r = 0; r < ex.unit_scores.units.size(); ++r) {
    std::size_t u = ex.unit_scores.units[r];
    attention[u] = select_span(spans, argmax(rows.row(r)));
    std::copy(rows.row(r).begin(), rows.row(r).end(), scores.row(u).begin());
  }
  std::size_t fallback = attention[0].value_or(0);
  for (auto& a : attention) {
    if (!a) a = fallback;
  }

  ex.matches = fixed_matches(g, ex.units, spans, st.words, cfg.rules, &scores);
  ex.final_map = apply_fixed_matches(ex.attention, ex.matches, ex.units, &ex.warnings);
  ex.alignments = classify_alignments(ex.final_map, g, ex.units, spans, cfg.standard, g.id());
  return ex;
}

namespace {

std::vector<int> span_tokens(const SpanList& spans, std::size_t span) {
  if (span >= spans.size()) throw ValidationError("span index out of range");
  std::vector<int> out;
  for (std::size_t w = spans[span].start; w < spans[span].end; ++w) out.push_back(static_cast<int>(w));
  return out;
}

class UnionFind {
 public:
  explicit UnionFind(std::size_t n) : parent_(n) { std::iota(parent_.begin(), parent_.end(), 0); }
  std::size_t find(std::size_t x) {
    while (parent_[x] != x) x = parent_[x] = parent_[parent_[x]];
    return x;
  }
  void unite(std::size_t a, std::size_t b) {
    a = find(a);
    b = find(b);
    if (a != b) parent_[std::max(a, b)] = std::min(a, b);
  }

 private:
  std::vector<std::size_t> parent_;
};

}  // namespace

AlignmentSet classify_alignments(const AlignmentMap& am, const AmrGraph& g,
                                 std::span<const SemanticUnit> units, const SpanList& spans,
                                 Standard standard, const std::string& id) {
  (void)g;
  if (am.span_of_unit.size() != units.size()) {
    throw ValidationError("alignment map does not cover the graph's units");
  }
  const auto& span = am.span_of_unit;
  AlignmentSet out;
  out.id = id;
  out.standard = standard;

  if (standard == Standard::kIsi) {
    for (std::size_t u = 0; u < units.size(); ++u) {
      if (!span[u]) continue;
      AlignmentRecord r;
      r.tokens = span_tokens(spans, *span[u]);
      if (units[u].is_node()) {
        r.type = AlignmentType::kSubgraph;
        r.nodes.push_back(units[u].path);
      } else {
        r.type = AlignmentType::kRelation;
        r.edges.push_back(units[u].path);
      }
      out.records.push_back(std::move(r));
    }
    return out;
  }

  UnionFind groups(units.size());
  for (std::size_t u = 0; u < units.size(); ++u) {
    const SemanticUnit& e = units[u];
    if (!e.is_relation() || e.mention > 0) continue;
    const auto& a = span[e.source_unit];
    const auto& b = span[e.target_unit];
    if (a && b && *a == *b) groups.unite(e.source_unit, e.target_unit);
  }

  std::map<std::size_t, std::size_t> record_of_group;
  std::vector<AlignmentRecord> subgraphs;
  for (std::size_t u = 0; u < units.size(); ++u) {
    if (!units[u].is_node() || !span[u]) continue;
    std::size_t root = groups.find(u);
    auto [it, fresh] = record_of_group.emplace(root, subgraphs.size());
    if (fresh) {
      AlignmentRecord r;
      r.type = AlignmentType::kSubgraph;
      r.tokens = span_tokens(spans, *span[u]);
      subgraphs.push_back(std::move(r));
    }
    subgraphs[it->second].nodes.push_back(units[u].path);
  }

  std::vector<AlignmentRecord> relations, reentrancies;
  for (std::size_t u = 0; u < units.size(); ++u) {
    const SemanticUnit& e = units[u];
    if (!e.is_relation()) continue;
    if (e.mention > 0) {
      if (!span[u]) continue;
      AlignmentRecord r;
      r.type = AlignmentType::kReentrancy;
      r.tokens = span_tokens(spans, *span[u]);
      r.nodes.push_back(units[e.target_unit].path);
      r.edges.push_back(e.path);
      r.mention = e.mention;
      reentrancies.push_back(std::move(r));
      continue;
    }
    const auto& a = span[e.source_unit];
    const auto& b = span[e.target_unit];
    if (a && b && groups.find(e.source_unit) == groups.find(e.target_unit)) {
      subgraphs[record_of_group.at(groups.find(e.source_unit))].edges.push_back(e.path);
      continue;
    }
    if (!span[u]) continue;
    AlignmentRecord r;
    r.type = AlignmentType::kRelation;
    r.tokens = span_tokens(spans, *span[u]);
    r.edges.push_back(e.path);
    relations.push_back(std::move(r));
  }

  std::map<std::string, std::size_t> path_to_unit;
  for (std::size_t u = 0; u < units.size(); ++u) path_to_unit[units[u].path] = u;
  std::vector<std::vector<std::string>> seen_concepts;
  for (AlignmentRecord& r : subgraphs) {
    std::vector<std::string> concepts;
    for (const auto& p : r.nodes) concepts.push_back(units[path_to_unit.at(p)].concept_name);
    std::sort(concepts.begin(), concepts.end());
    if (std::find(seen_concepts.begin(), seen_concepts.end(), concepts) != seen_concepts.end()) {
      r.type = AlignmentType::kDuplicate;
    } else {
      seen_concepts.push_back(std::move(concepts));
    }
  }

  out.records = std::move(subgraphs);
  out.records.insert(out.records.end(), relations.begin(), relations.end());
  out.records.insert(out.records.end(), reentrancies.begin(), reentrancies.end());
  return out;
}

Extraction align_sentence(const AmrGraph& g, const SpanList& spans, const ScoreMatrix& raw,
                          const ExtractionConfig& cfg) {
  Linearization lin = linearize(g);
  GraphPosMap gp = map_output_tokens(lin, raw.decoder_tokens);
  SentenceTokens st = map_input_tokens(raw.encoder_tokens, span_words(spans));
  ScoreMatrix merged = merge_subword_columns(raw, st);
  return extract(st, spans, lin, gp, merged, g, cfg);
}

}  // namespace amralign
