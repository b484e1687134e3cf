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

// Alignment evaluation, attention/alignment correlation and significance.

#ifndef AMRALIGN_METRICS_H_
#define AMRALIGN_METRICS_H_

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "amralign/alignment.h"
#include "amralign/graph.h"
#include "amralign/linearization.h"
#include "amralign/score_matrix.h"
#include "amralign/sentence.h"

namespace amralign {

// Percentages in [0, 100]; f1 is 0 when precision + recall is 0.
struct Prf {
  double precision = 0.0;
  double recall = 0.0;
  double f1 = 0.0;
};

// Matched mass (a count for exact scores, summed credit for partial ones)
// over predicted and gold record counts.
struct MatchCounts {
  double matched = 0.0;
  std::size_t predicted = 0;
  std::size_t gold = 0;

  MatchCounts& operator+=(const MatchCounts& o) {
    matched += o.matched;
    predicted += o.predicted;
    gold += o.gold;
    return *this;
  }
  Prf prf() const;
};

struct ScoreTable {
  std::array<MatchCounts, 4> by_type;  // indexed by AlignmentType
  MatchCounts overall;

  const MatchCounts& operator[](AlignmentType t) const { return by_type[static_cast<std::size_t>(t)]; }
};

double jaccard(std::vector<std::string> a, std::vector<std::string> b);
double jaccard(std::vector<int> a, std::vector<int> b);

// J(units) * J(tokens) for records of the same type, 0 otherwise.
double partial_credit(const AlignmentRecord& pred, const AlignmentRecord& gold);

// Per sentence: exact = identical tokens and identical unit set, matched one
// to one. Throws ValidationError when the sentence ids differ.
ScoreTable exact_scores(const std::vector<AlignmentSet>& pred, const std::vector<AlignmentSet>& gold);
ScoreTable exact_scores(const AlignmentSet& pred, const AlignmentSet& gold);

// Greedy one-to-one assignment by descending partial credit.
ScoreTable partial_scores(const std::vector<AlignmentSet>& pred, const std::vector<AlignmentSet>& gold);
ScoreTable partial_scores(const AlignmentSet& pred, const AlignmentSet& gold);

// F1 (percent) of exact span-boundary matches; spans are [start, end).
using SpanBounds = std::pair<int, int>;
MatchCounts span_counts(const std::vector<SpanBounds>& pred, const std::vector<SpanBounds>& gold);
double span_f1(const std::vector<SpanBounds>& pred, const std::vector<SpanBounds>& gold);

// Distinct aligned spans of the records of one type (all types when nullopt).
std::vector<SpanBounds> aligned_spans(const AlignmentSet& a,
                                      std::optional<AlignmentType> type = std::nullopt);

// Percent of the graph's units named by some record; 100 for an empty graph.
double coverage(const AlignmentSet& a, const AmrGraph& g);

struct TypeReport {
  Prf exact;
  Prf partial;
  double span_f1 = 0.0;
  std::size_t predicted = 0;
  std::size_t gold = 0;
};

struct WilcoxonResult {
  double statistic = 0.0;  // min(W+, W-)
  double w_plus = 0.0;
  double w_minus = 0.0;
  double p_value = 1.0;    // two-sided
  std::size_t n = 0;       // nonzero differences
  bool exact = false;
  double z = 0.0;          // normal approximation only
};

struct SignificanceResult {
  std::string system_a;
  std::string system_b;
  WilcoxonResult test;
};

struct EvalReport {
  std::array<TypeReport, 4> types;
  TypeReport overall;
  std::optional<double> coverage;  // mean over graphs, when graphs were given
  std::vector<SignificanceResult> significance;

  std::string to_json() const;
  std::string to_text() const;
};

// `graphs`, when non-empty, are matched to sentences by id for coverage.
EvalReport evaluate(const std::vector<AlignmentSet>& pred, const std::vector<AlignmentSet>& gold,
                    const std::vector<AmrGraph>& graphs = {});

// Per-graph statistic fed to the signed-rank test, in gold order.
enum class SeriesKind { kMatches, kF1 };
std::vector<double> per_graph_series(const std::vector<AlignmentSet>& pred,
                                     const std::vector<AlignmentSet>& gold, SeriesKind kind);

// Zero differences are dropped and tied |differences| get mid-ranks. With at
// most `exact_max_n` nonzero differences the p-value comes from the exact
// permutation distribution, otherwise from the tie-corrected normal
// approximation. Throws DegenerateError with fewer than 6 nonzero differences.
WilcoxonResult wilcoxon_signed_rank(std::span<const double> a, std::span<const double> b,
                                    std::size_t exact_max_n = 25);

// Binary decoder x encoder matrix: 1 where the decoder token's unit is aligned
// to the encoder token's word. Masked positions are always 0.
struct AlignMatrix {
  Matrix values;
  std::vector<char> masked;  // row-major, 1 = excluded

  bool is_masked(std::size_t r, std::size_t c) const { return masked[r * values.cols() + c] != 0; }
};

// Masks structural decoder rows, special encoder columns and, when asked,
// columns of punctuation words.
AlignMatrix build_align_matrix(const AlignmentSet& a, const SentenceTokens& st,
                               const GraphPosMap& gp, std::span<const SemanticUnit> units,
                               bool mask_punctuation = true);

// Pearson's r over unmasked positions. Throws DegenerateError when either
// side is constant.
double pearson(std::span<const double> x, std::span<const double> y);
double pearson_correlation(const ScoreMatrix& m, const AlignMatrix& am);

// Layer x head grid of r values pooled over sentences; NaN where undefined.
struct CorrelationGrid {
  int n_layers = 0;
  int n_heads = 0;
  std::vector<double> r;  // row-major by layer

  double at(int layer, int head) const { return r[static_cast<std::size_t>(layer * n_heads + head)]; }
};

struct CorrelationSample {
  const std::vector<ScoreMatrix>* matrices;  // every (layer, head) of a sentence
  const AlignMatrix* align;
};

CorrelationGrid correlation_heatmap(std::span<const CorrelationSample> samples);
CorrelationGrid correlation_heatmap(const std::vector<ScoreMatrix>& matrices, const AlignMatrix& am);

std::string render_heatmap_svg(const CorrelationGrid& grid, const std::string& title = {});
std::string grid_csv(const CorrelationGrid& grid);

}  // namespace amralign

#endif  // AMRALIGN_METRICS_H_
