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

// Alignment extraction from a decoder x encoder score matrix.

#ifndef AMRALIGN_EXTRACTION_H_
#define AMRALIGN_EXTRACTION_H_

#include <cstddef>
#include <span>
#include <string>
#include <vector>

#include "amralign/alignment.h"
#include "amralign/graph.h"
#include "amralign/linearization.h"
#include "amralign/rules.h"
#include "amralign/score_matrix.h"
#include "amralign/sentence.h"

namespace amralign {

struct ExtractionConfig {
  RuleSet rules = RuleSet::all();
  Standard standard = Standard::kLeamr;
};

// Span holding `word`. Throws ValidationError when out of range.
std::size_t select_span(const SpanList& spans, std::size_t word);

// Leftmost column holding the row maximum.
std::size_t argmax(std::span<const double> row);

// Everything the extraction computed for one sentence.
struct Extraction {
  std::vector<SemanticUnit> units;
  UnitScores unit_scores;             // row-merged matrix
  AlignmentMap attention;             // argmax alignment before rules
  std::vector<FixedMatch> matches;
  AlignmentMap final_map;             // after rules
  AlignmentSet alignments;
  std::vector<std::string> warnings;
};

// `m` must already have its subword columns merged (one column per word).
// Units whose tokens all map to structure fall back to the root's span.
Extraction extract(const SentenceTokens& st, const SpanList& spans, const Linearization& lin,
                   const GraphPosMap& gp, const ScoreMatrix& m, const AmrGraph& g,
                   const ExtractionConfig& cfg);

inline AlignmentSet extract_alignments(const SentenceTokens& st, const SpanList& spans,
                                       const Linearization& lin, const GraphPosMap& gp,
                                       const ScoreMatrix& m, const AmrGraph& g,
                                       const ExtractionConfig& cfg) {
  return extract(st, spans, lin, gp, m, g, cfg).alignments;
}

// LEAMR: nodes sharing a span and connected in the graph form one subgraph
// record (a later subgraph with the same concept multiset is a duplicate),
// edges inside such a group are listed on it, re-mention edges become
// reentrancy records and every other edge a relation record. ISI: one record
// per aligned unit.
AlignmentSet classify_alignments(const AlignmentMap& am, const AmrGraph& g,
                                 std::span<const SemanticUnit> units, const SpanList& spans,
                                 Standard standard, const std::string& id = {});

// Full pipeline for one sentence: linearize, reconcile both token streams of
// `raw` (a reduced matrix over model tokens) with the graph and the spans,
// merge subword columns and extract.
Extraction align_sentence(const AmrGraph& g, const SpanList& spans, const ScoreMatrix& raw,
                          const ExtractionConfig& cfg);

}  // namespace amralign

#endif  // AMRALIGN_EXTRACTION_H_
